#include "sospec/enclosure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sospec {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

EnclosureInterval EnclosureInterval::outward() const {
  EnclosureInterval out = *this;
  out.lo = std::nextafter(lo, -kInf);
  out.hi = std::nextafter(hi, kInf);
  return out;
}

bool GapInterval::a_finite() const { return std::isfinite(a); }
bool GapInterval::b_finite() const { return std::isfinite(b); }

bool GapInterval::disk_contains(Complex z) const {
  if (a_finite() && b_finite()) {
    const Complex center(0.5 * (a + b), 0.0);
    return std::abs(z - center) < 0.5 * (b - a);
  }
  if (!a_finite() && b_finite()) return z.real() < b;
  if (a_finite() && !b_finite()) return z.real() > a;
  return true;
}

bool nearly_real(Complex z) {
  return std::abs(z.imag()) < kNearRealRelTol * std::max(1.0, std::abs(z));
}

EnclosureInterval residual_interval(Complex z) {
  EnclosureInterval out;
  out.source = EnclosureInterval::Source::residual;
  out.point = z;
  if (nearly_real(z)) {
    out.lo = out.hi = z.real();
    return out;
  }
  const double t = std::abs(z.imag());
  out.lo = z.real() - t;
  out.hi = z.real() + t;
  return out;
}

EnclosureInterval improved_interval(Complex z, const GapInterval& gap) {
  if (gap.a_finite() && gap.b_finite() && !(gap.a < gap.b))
    throw DegenerateGap("improved_interval: gap endpoints out of order");
  if (!gap.disk_contains(z))
    throw OutsideDisk("improved_interval: point outside the gap disk");

  EnclosureInterval out;
  out.source = EnclosureInterval::Source::improved;
  out.point = z;
  const double x = z.real();
  if (nearly_real(z)) {
    out.lo = out.hi = x;
    return out;
  }
  const double y2 = z.imag() * z.imag();
  out.lo = x;
  out.hi = x;
  if (gap.b_finite()) {
    const double denom = gap.b - x;
    if (denom <= 1e-14 * std::max({1.0, std::abs(x), std::abs(gap.b)}))
      throw DegenerateGap("improved_interval: point at the gap's upper edge");
    out.lo = x - y2 / denom;
  }
  if (gap.a_finite()) {
    const double denom = x - gap.a;
    if (denom <= 1e-14 * std::max({1.0, std::abs(x), std::abs(gap.a)}))
      throw DegenerateGap("improved_interval: point at the gap's lower edge");
    out.hi = x + y2 / denom;
  }
  return out;
}

EnclosureInterval tightened_interval(Complex z, const GapInterval& gap) {
  const EnclosureInterval imp = improved_interval(z, gap);
  // Inside the improvement regime (|Im z| no larger than the distance to
  // either gap edge) the improved interval nests in the residual one by
  // construction, so a violation can only come from a numerical anomaly and
  // must abort instead of being emitted.  Outside the regime the improved
  // interval is still a valid enclosure, just not comparable endpoint-wise.
  const double y = std::abs(z.imag());
  if (gap.b - z.real() >= y && z.real() - gap.a >= y) {
    const EnclosureInterval res = residual_interval(z);
    const double slack = 1e-15 * std::max(1.0, std::abs(z.real()));
    if (imp.lo < res.lo - slack || imp.hi > res.hi + slack)
      throw SolverError(
          "tightened_interval: improved interval escapes its residual "
          "companion inside the improvement regime at re " +
          std::to_string(z.real()) + "; numerical anomaly in the enclosure");
  }
  return imp;
}

double alpha_lower_bound(Complex z, double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b))
    throw PreconditionError("alpha_lower_bound: endpoints must be finite");
  if (!(a < b)) throw DegenerateGap("alpha_lower_bound: gap endpoints out of order");
  const Complex center(0.5 * (a + b), 0.0);
  const double radius = 0.5 * (b - a);
  const double off = std::abs(z - center);
  if (off > radius * (1.0 + 1e-12))
    throw OutsideDisk("alpha_lower_bound: point outside the closed disk");

  const double da = std::abs(z - Complex(a, 0.0));
  const double db = std::abs(z - Complex(b, 0.0));
  if (da <= 1e-15 * (b - a) || db <= 1e-15 * (b - a)) return 0.0;
  const double num = (b - a) * (b - a) - da * da - db * db;
  const double dist2 = std::min(da, db) * std::min(da, db);
  const double alpha = num / (2.0 * da * db) * dist2;
  return std::max(alpha, 0.0);
}

ClusterBoundConstants cluster_bound_constants(
    double a, double b, int m, int s, std::span<const double> spectrum_outside,
    std::span<const double> lambdas_inside) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
    throw DegenerateGap("cluster_bound_constants: invalid interval");
  if (m < 1 || s < 1 || s > m)
    throw PreconditionError("cluster_bound_constants: need 1 <= s <= m");
  if (spectrum_outside.empty())
    throw EmptyExterior("cluster_bound_constants: no exterior spectrum given");

  ClusterBoundConstants out;
  out.m = m;
  out.s = s;
  const double w = b - a;
  const double peak = 1.0 + std::max(std::abs(a), std::abs(b));
  const double root5 = std::sqrt(5.0);
  out.gamma = 2.0 * root5 * m * w * w *
              (peak * peak + w * w * (2.0 * root5 * s + 8.0));

  double da = kInf, db = kInf;
  for (double v : spectrum_outside) {
    da = std::min(da, std::abs(a - v));
    db = std::min(db, std::abs(b - v));
  }
  // The endpoint shift in the covering argument moves both a and b outward
  // by d, so d must clear the exterior spectrum on both sides.
  out.d = std::min(da, db);
  out.kappa = out.d * out.d / out.gamma;

  out.eps_max = 1.0 / (std::pow(static_cast<double>(m), 0.25) *
                       std::sqrt(out.kappa));
  if (!lambdas_inside.empty()) {
    std::vector<double> fence(lambdas_inside.begin(), lambdas_inside.end());
    std::sort(fence.begin(), fence.end());
    fence.insert(fence.begin(), a);
    fence.push_back(b);
    for (std::size_t i = 0; i + 1 < fence.size(); ++i)
      out.eps_max = std::min(out.eps_max, 0.5 * (fence[i + 1] - fence[i]));
  }
  return out;
}

double isolation_radius(double lambda, std::span<const double> other_spectrum) {
  if (other_spectrum.empty())
    throw EmptyExterior("isolation_radius: no other spectrum given");
  double d = kInf;
  for (double v : other_spectrum) d = std::min(d, std::abs(lambda - v));
  return d / std::sqrt(2.0);
}

std::vector<EnclosureRow> pair_and_enclose(const SecondOrderSpectrum& s,
                                           std::span<const GapInterval> gaps) {
  struct Candidate {
    Complex z;
    std::vector<const GapInterval*> containing;
  };
  std::vector<Candidate> cands;
  for (const auto& pt : s.points) {
    if (pt.value.imag() < 0.0) continue;  // one representative per pair
    Candidate c{pt.value, {}};
    for (const auto& g : gaps)
      if (g.disk_contains(pt.value)) c.containing.push_back(&g);
    if (!c.containing.empty()) cands.push_back(std::move(c));
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
    return a.z.imag() < b.z.imag();
  });

  std::vector<EnclosureRow> rows;
  int label = 0;
  for (const auto& c : cands) {
    ++label;
    rows.push_back({label, residual_interval(c.z)});
    for (const GapInterval* g : c.containing) {
      try {
        rows.push_back({label, tightened_interval(c.z, *g)});
      } catch (const DegenerateGap&) {
        // Point sits numerically on the gap edge: the improved bound would
        // divide by ~0, so only the residual row is emitted.
      }
    }
  }
  return rows;
}

}  // namespace sospec
