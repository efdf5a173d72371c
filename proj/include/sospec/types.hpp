#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace sospec {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Errors that indicate bad input or violated preconditions (CLI exit code 2).
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Errors raised by numerical kernels at runtime (CLI exit code 3).
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonPositiveDefiniteMass : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct EigensolverFailure : SolverError {
  using SolverError::SolverError;
};
struct PoleHit : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct OutsideDisk : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct DegenerateGap : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct EmptyExterior : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct InfeasibleMixing : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct OutsideAdmissibleRegion : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct UnsupportedOrder : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct PairingAmbiguity : SolverError {
  using SolverError::SolverError;
};

// One point of a second order spectrum. Invariant: 1 <= geometric <= algebraic.
struct SpectralPoint {
  Complex value{};
  int algebraic_mult = 1;
  int geometric_mult = 1;
};

// Ordering used everywhere a spectrum is listed or serialized:
// by real part, then imaginary part, then algebraic multiplicity.
inline bool spectral_point_less(const SpectralPoint& a, const SpectralPoint& b) {
  if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
  if (a.value.imag() != b.value.imag()) return a.value.imag() < b.value.imag();
  return a.algebraic_mult < b.algebraic_mult;
}

// Controls eigenvalue clustering and rank decisions when extracting a
// second order spectrum from the linearized pencil.
struct ClusterConfig {
  double rel_tol = 1e-8;     // cluster width = rel_tol * scale + abs_floor
  double abs_floor = 1e-12;  // absolute floor on the cluster width
  double rank_tol = 1e-8;    // singular values below rank_tol * sigma_max count as zero
  // Second clustering stage: merge near-real clusters within
  // defect_rel_tol * scale of each other. Defective (Jordan) points scatter
  // like sqrt(eps * scale), far beyond rel_tol; callers that expect defective
  // points opt in with a width that covers the scatter. 0 disables the stage.
  double defect_rel_tol = 0.0;
};

// Result of clustering: sorted points, the absolute cluster width used,
// and the eigenvalue scale (spectral radius of the linearization).
struct SecondOrderSpectrum {
  std::vector<SpectralPoint> points;
  double cluster_tol = 0.0;
  double scale = 0.0;

  int total_algebraic() const {
    int s = 0;
    for (const auto& p : points) s += p.algebraic_mult;
    return s;
  }
};

// A real eigenvalue with multiplicity, as reported by analytic models.
struct RealEigenvalue {
  double value = 0.0;
  int multiplicity = 1;
};

}  // namespace sospec
