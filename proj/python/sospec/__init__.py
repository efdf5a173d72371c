"""Second order relative spectra of self-adjoint operators.

Quadratic pencils over finite trial subspaces, pollution-free spectral
enclosures, and C1 Hermite finite element assembly for 1D Schrodinger
operators.
"""

from ._sospec import (
    ClusterBoundConstants,
    ClusterConfig,
    DiagonalModel,
    EnclosureInterval,
    EnclosureRow,
    GapInterval,
    GridSpec,
    HermiteSpace,
    MatrixModel,
    OperatorModel,
    PencilTriple,
    PollutionSpec,
    Potential,
    PreconditionError,
    PrescribedPointSpec,
    QuadratureRule,
    RealEigenvalue,
    SecondOrderSpectrum,
    SolverError,
    SpectralPoint,
    UniformMesh,
    alpha_lower_bound,
    assemble_pencil,
    assemble_schrodinger,
    cluster_bound_constants,
    default_quadrature,
    diagonal_pair_exact_spec2,
    diagonal_pair_model,
    galerkin_spectrum,
    improved_interval,
    isolation_radius,
    mobius_image,
    pair_and_enclose,
    pollution_exact_spec2,
    pollution_model,
    prescribed_point_admissible,
    prescribed_point_model,
    prescribed_set_model,
    rank_rotation_exact_spec2,
    rank_rotation_model,
    residual_interval,
    second_order_spectrum,
    second_order_spectrum_shift_invert,
    semi_bounded_exact_spec2,
    semi_bounded_model,
    sigma,
    sigma_map,
    tightened_interval,
    toy_cluster_config,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
