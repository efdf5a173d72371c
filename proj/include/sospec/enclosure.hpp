#pragma once

#include <span>
#include <vector>

#include "sospec/types.hpp"

namespace sospec {

// A certified interval around a real eigenvalue, derived from one point z of
// a second order spectrum. `residual` is the square-root-free interval
// [Re z - |Im z|, Re z + |Im z|]; `improved` shrinks it quadratically using a
// surrounding spectral gap.
struct EnclosureInterval {
  enum class Source { residual, improved };

  double lo = 0.0, hi = 0.0;
  Source source = Source::residual;
  Complex point{};

  double width() const { return hi - lo; }

  // One-ulp outward rounding, applied when an interval is emitted as a
  // certificate; in-memory intervals keep their exact endpoints.
  EnclosureInterval outward() const;
};

// Open interval (a, b) expected to meet the spectrum in a known way.
// Endpoints may be infinite: a = -inf and/or b = +inf.
struct GapInterval {
  double a = 0.0, b = 0.0;

  bool a_finite() const;
  bool b_finite() const;
  // Membership in the open disk D(a, b) with (a, b) as diameter; for a
  // half-infinite gap this degenerates to an open half plane.
  bool disk_contains(Complex z) const;
};

// Points closer to the real axis than this (relative) threshold are treated
// as real and produce zero-width intervals.
inline constexpr double kNearRealRelTol = 1e-12;

bool nearly_real(Complex z);

EnclosureInterval residual_interval(Complex z);

// Requires z in D(a, b) and (a, b) to meet the spectrum only in the
// eigenvalue being enclosed. Infinite endpoints drop the corresponding
// correction term.
EnclosureInterval improved_interval(Complex z, const GapInterval& gap);

// improved_interval guarded by the nesting invariant: inside the improvement
// regime (|Im z| <= min(Re z - a, b - Re z)) the result must be contained in
// residual_interval(z), and a violation throws SolverError instead of
// returning. Emitters use this so an anomalous interval aborts with a
// diagnostic rather than being written out. Outside the regime the improved
// interval can legitimately extend past the residual one and is returned
// unchecked.
EnclosureInterval tightened_interval(Complex z, const GapInterval& gap);

// Lower bound for sigma on the closed disk over a finite spectrum-free gap
// (a, b): sigma(z) >= alpha for every trial subspace. Zero on the boundary
// circle and at the endpoints.
double alpha_lower_bound(Complex z, double a, double b);

// Constants controlling how tightly second order spectra cluster around a
// group of eigenvalues {lambda_1 < ... < lambda_s} in (a, b) with total
// multiplicity m: gamma, kappa = d^2/gamma, the endpoint-to-exterior
// distance d, and the largest admissible cluster radius eps_max.
struct ClusterBoundConstants {
  double gamma = 0.0;
  double kappa = 0.0;
  double d = 0.0;
  double eps_max = 0.0;
  int m = 0;
  int s = 0;
};

ClusterBoundConstants cluster_bound_constants(
    double a, double b, int m, int s, std::span<const double> spectrum_outside,
    std::span<const double> lambdas_inside = {});

// Distance from lambda to the rest of the spectrum, scaled by 1/sqrt(2):
// the radius within which an exactly captured eigenspace pins second order
// spectrum points.
double isolation_radius(double lambda, std::span<const double> other_spectrum);

// One output row of the enclosure pipeline.
struct EnclosureRow {
  int label = 0;  // 1-based, increasing with Re of the source point
  EnclosureInterval interval;
};

// For every spectral point (taken once per conjugate pair) lying in the disk
// of some gap, emit its residual interval and, per containing gap, its
// improved interval. Rows are ordered by label, residual first.
std::vector<EnclosureRow> pair_and_enclose(const SecondOrderSpectrum& s,
                                           std::span<const GapInterval> gaps);

}  // namespace sospec
