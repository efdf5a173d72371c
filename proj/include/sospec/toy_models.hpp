#pragma once

#include <array>
#include <span>
#include <vector>

#include "sospec/operator_model.hpp"
#include "sospec/types.hpp"

namespace sospec {

// Analytic models with closed-form second order spectra. Each builder returns
// a DiagonalModel (operator eigenvalues on an ambient orthonormal basis plus
// a trial subspace); the matching *_exact_* functions return the closed forms
// used as oracles.

// Strongly indefinite operator with eigenvalues +-k whose eigenvectors mix
// pairs of ambient directions; the trial space keeps the first n-1 pairs
// whole and truncates the n-th. CLI name: ex12.
DiagonalModel diagonal_pair_model(int n);
std::vector<SpectralPoint> diagonal_pair_exact_spec2(int n);
std::vector<RealEigenvalue> diagonal_pair_exact_galerkin(int n);

// Semi-bounded variant: eigenvalues k^r and an essential-spectrum stand-in
// at -1, with rotation angle 1/k inside each pair. The Galerkin method
// pollutes; the second order spectrum does not. CLI name: ex14.
DiagonalModel semi_bounded_model(int n, double r);
std::vector<SpectralPoint> semi_bounded_exact_spec2(int n, double r);
std::vector<RealEigenvalue> semi_bounded_exact_galerkin(int n, double r);

// Prescribed Galerkin pollution: mixing vectors aimed at arbitrary targets
// inside the spectral gap. lambda_minus/lambda_plus list eigenvalues below
// and above the gap for directions 1..offset+n; target j mixes direction
// offset+j. CLI name: pollution.
struct PollutionSpec {
  std::vector<double> lambda_minus;
  std::vector<double> lambda_plus;
  std::vector<double> targets;
  int offset = 0;
};

DiagonalModel pollution_model(const PollutionSpec& spec);
std::vector<SpectralPoint> pollution_exact_spec2(const PollutionSpec& spec);
std::vector<RealEigenvalue> pollution_exact_galerkin(const PollutionSpec& spec);

// Trial space containing n-1 exact eigenvectors plus one slightly rotated
// vector mixing eigenvalue 0 with eigenvalue n; the rotation sends a pair of
// points O(n beta) deep into the complex plane. CLI name: rank-rotation.
DiagonalModel rank_rotation_model(int n, double beta);
std::vector<SpectralPoint> rank_rotation_exact_spec2(int n, double beta);

// One prescribed point of a second order spectrum: three spectral anchors
// c1 < c2 < c3 and a target z admissible for them; delta perturbs the
// anchor eigenvalues to model inexact eigenvectors.
struct PrescribedPointSpec {
  double c1 = -1.0, c2 = 0.0, c3 = 1.0;
  Complex z{};
  double delta = 0.0;
};

// Region where a target is realizable: the closed disk over [c1, c3] minus
// the open disks over (c1, c2) and (c2, c3), after normalizing to
// c1 = -1, c3 = 1.
bool prescribed_point_admissible(const PrescribedPointSpec& spec);

// Mixing weights (alpha_1, alpha_2, alpha_3) of the trial vector over the
// three anchor directions. Throws OutsideAdmissibleRegion or, for
// numerically impossible weights, InfeasibleMixing.
std::array<double, 3> prescribed_point_coefficients(
    const PrescribedPointSpec& spec);

DiagonalModel prescribed_point_model(const PrescribedPointSpec& spec);

// Independent anchor triples realizing several prescribed points at once.
DiagonalModel prescribed_set_model(std::span<const PrescribedPointSpec> specs);

// Compare mapping a computed spectrum through F(w) = (aw+b)/(cw+d) against
// computing the spectrum of the mapped model directly.
struct MobiusReport {
  double max_value_distance = 0.0;
  bool multiplicities_match = false;
};

MobiusReport verify_mobius(const DiagonalModel& model, double a, double b,
                           double c, double d, const ClusterConfig& cfg = {});

// Cluster settings appropriate for the toy models: their defective real
// points need the second merge stage.
ClusterConfig toy_cluster_config();

}  // namespace sospec
