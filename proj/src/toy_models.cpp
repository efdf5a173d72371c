#include "sospec/toy_models.hpp"

#include <algorithm>
#include <cmath>

#include "sospec/pencil.hpp"

namespace sospec {

namespace {

void sort_points(std::vector<SpectralPoint>& pts) {
  std::sort(pts.begin(), pts.end(), spectral_point_less);
}

std::vector<RealEigenvalue> collect_reals(std::vector<double> vals) {
  std::sort(vals.begin(), vals.end());
  std::vector<RealEigenvalue> out;
  for (double v : vals) {
    if (!out.empty() && out.back().value == v)
      ++out.back().multiplicity;
    else
      out.push_back({v, 1});
  }
  return out;
}

}  // namespace

ClusterConfig toy_cluster_config() {
  ClusterConfig cfg;
  cfg.defect_rel_tol = 1e-6;
  return cfg;
}

DiagonalModel diagonal_pair_model(int n) {
  if (n < 1) throw PreconditionError("diagonal_pair_model: n must be >= 1");
  // Ambient directions are the eigenvectors f_k(+), f_k(-) with eigenvalues
  // +-k; the trial vectors e_k(+-) = (f_k(+) +- f_k(-))/sqrt(2).
  RealVector ambient(2 * n);
  for (int k = 1; k <= n; ++k) {
    ambient[2 * (k - 1)] = k;
    ambient[2 * (k - 1) + 1] = -k;
  }
  const double r = 1.0 / std::sqrt(2.0);
  Matrix trial = Matrix::Zero(2 * n, 2 * n - 1);
  for (int k = 1; k <= n - 1; ++k) {
    const int fp = 2 * (k - 1), fm = fp + 1;
    trial(fp, 2 * (k - 1)) = r;   // e_k(+)
    trial(fm, 2 * (k - 1)) = r;
    trial(fp, 2 * (k - 1) + 1) = r;  // e_k(-)
    trial(fm, 2 * (k - 1) + 1) = -r;
  }
  trial(2 * (n - 1), 2 * n - 2) = r;  // e_n(-)
  trial(2 * (n - 1) + 1, 2 * n - 2) = -r;
  return DiagonalModel(std::move(ambient), std::move(trial));
}

std::vector<SpectralPoint> diagonal_pair_exact_spec2(int n) {
  std::vector<SpectralPoint> pts;
  for (int k = 1; k <= n - 1; ++k) {
    pts.push_back({Complex(k, 0.0), 2, 1});
    pts.push_back({Complex(-k, 0.0), 2, 1});
  }
  pts.push_back({Complex(0.0, n), 1, 1});
  pts.push_back({Complex(0.0, -n), 1, 1});
  sort_points(pts);
  return pts;
}

std::vector<RealEigenvalue> diagonal_pair_exact_galerkin(int n) {
  std::vector<double> vals{0.0};
  for (int k = 1; k <= n - 1; ++k) {
    vals.push_back(k);
    vals.push_back(-k);
  }
  return collect_reals(std::move(vals));
}

DiagonalModel semi_bounded_model(int n, double r) {
  if (n < 1) throw PreconditionError("semi_bounded_model: n must be >= 1");
  if (r <= 0.0) throw PreconditionError("semi_bounded_model: r must be > 0");
  RealVector ambient(2 * n);
  for (int k = 1; k <= n; ++k) {
    ambient[2 * (k - 1)] = std::pow(static_cast<double>(k), r);
    ambient[2 * (k - 1) + 1] = -1.0;
  }
  // e_k(+) = cos(1/k) f_k(+) + sin(1/k) f_k(-),
  // e_k(-) = sin(1/k) f_k(+) - cos(1/k) f_k(-).
  Matrix trial = Matrix::Zero(2 * n, 2 * n - 1);
  for (int k = 1; k <= n - 1; ++k) {
    const double c = std::cos(1.0 / k), s = std::sin(1.0 / k);
    const int fp = 2 * (k - 1), fm = fp + 1;
    trial(fp, 2 * (k - 1)) = c;
    trial(fm, 2 * (k - 1)) = s;
    trial(fp, 2 * (k - 1) + 1) = s;
    trial(fm, 2 * (k - 1) + 1) = -c;
  }
  const double cn = std::cos(1.0 / n), sn = std::sin(1.0 / n);
  trial(2 * (n - 1), 2 * n - 2) = sn;
  trial(2 * (n - 1) + 1, 2 * n - 2) = -cn;
  return DiagonalModel(std::move(ambient), std::move(trial));
}

std::vector<SpectralPoint> semi_bounded_exact_spec2(int n, double r) {
  std::vector<SpectralPoint> pts;
  if (n > 1) pts.push_back({Complex(-1.0, 0.0), 2 * (n - 1), n - 1});
  for (int k = 1; k <= n - 1; ++k)
    pts.push_back({Complex(std::pow(static_cast<double>(k), r), 0.0), 2, 1});
  const double sn = std::sin(1.0 / n), cn = std::cos(1.0 / n);
  const double alpha = std::pow(static_cast<double>(n), r) * sn * sn - cn * cn;
  const double gamma = (std::pow(static_cast<double>(n), r) + 1.0) * sn * cn;
  pts.push_back({Complex(alpha, gamma), 1, 1});
  pts.push_back({Complex(alpha, -gamma), 1, 1});
  sort_points(pts);
  return pts;
}

std::vector<RealEigenvalue> semi_bounded_exact_galerkin(int n, double r) {
  std::vector<double> vals;
  for (int k = 1; k <= n - 1; ++k) {
    vals.push_back(-1.0);
    vals.push_back(std::pow(static_cast<double>(k), r));
  }
  const double sn = std::sin(1.0 / n), cn = std::cos(1.0 / n);
  vals.push_back(std::pow(static_cast<double>(n), r) * sn * sn - cn * cn);
  return collect_reals(std::move(vals));
}

namespace {

struct PollutionAngles {
  std::vector<double> cos2, sincos;  // per target: cos(theta)^2, sin*cos
};

PollutionAngles pollution_angles(const PollutionSpec& spec) {
  const int n = static_cast<int>(spec.targets.size());
  if (n < 1) throw PreconditionError("pollution_model: no targets");
  if (spec.offset < n)
    throw PreconditionError(
        "pollution_model: offset must be >= number of targets so mixed "
        "directions stay disjoint from the retained pairs");
  const int need = spec.offset + n;
  if (static_cast<int>(spec.lambda_minus.size()) < need ||
      static_cast<int>(spec.lambda_plus.size()) < need)
    throw PreconditionError(
        "pollution_model: eigenvalue sequences shorter than offset + targets");
  PollutionAngles out;
  for (int j = 1; j <= n; ++j) {
    const double lm = spec.lambda_minus[spec.offset + j - 1];
    const double lp = spec.lambda_plus[spec.offset + j - 1];
    const double g = spec.targets[j - 1];
    if (!(lm < g && g < lp))
      throw InfeasibleMixing(
          "pollution_model: target outside the eigenvalue bracket of its "
          "mixed direction");
    const double s2 = (g - lm) / (lp - lm);
    out.cos2.push_back(1.0 - s2);
    out.sincos.push_back(std::sqrt(s2 * (1.0 - s2)));
  }
  return out;
}

}  // namespace

DiagonalModel pollution_model(const PollutionSpec& spec) {
  const PollutionAngles ang = pollution_angles(spec);
  const int n = static_cast<int>(spec.targets.size());
  // Ambient: pairs (e_m(-), e_m(+)) for m = 1..n, then the mixed directions
  // (e_{offset+j}(-), e_{offset+j}(+)) for j = 1..n.
  RealVector ambient(4 * n);
  Matrix trial = Matrix::Zero(4 * n, 3 * n);
  for (int m = 1; m <= n; ++m) {
    ambient[2 * (m - 1)] = spec.lambda_minus[m - 1];
    ambient[2 * (m - 1) + 1] = spec.lambda_plus[m - 1];
    trial(2 * (m - 1), 2 * (m - 1)) = 1.0;
    trial(2 * (m - 1) + 1, 2 * (m - 1) + 1) = 1.0;
  }
  for (int j = 1; j <= n; ++j) {
    const int row = 2 * n + 2 * (j - 1);
    ambient[row] = spec.lambda_minus[spec.offset + j - 1];
    ambient[row + 1] = spec.lambda_plus[spec.offset + j - 1];
    const double c = std::sqrt(ang.cos2[j - 1]);
    const double s = std::sqrt(1.0 - ang.cos2[j - 1]);
    trial(row, 2 * n + (j - 1)) = c;
    trial(row + 1, 2 * n + (j - 1)) = s;
  }
  return DiagonalModel(std::move(ambient), std::move(trial));
}

std::vector<SpectralPoint> pollution_exact_spec2(const PollutionSpec& spec) {
  const PollutionAngles ang = pollution_angles(spec);
  const int n = static_cast<int>(spec.targets.size());
  std::vector<SpectralPoint> pts;
  for (int m = 1; m <= n; ++m) {
    pts.push_back({Complex(spec.lambda_minus[m - 1], 0.0), 2, 1});
    pts.push_back({Complex(spec.lambda_plus[m - 1], 0.0), 2, 1});
  }
  for (int j = 1; j <= n; ++j) {
    const double lm = spec.lambda_minus[spec.offset + j - 1];
    const double lp = spec.lambda_plus[spec.offset + j - 1];
    const double height = ang.sincos[j - 1] * (lp - lm);
    pts.push_back({Complex(spec.targets[j - 1], height), 1, 1});
    pts.push_back({Complex(spec.targets[j - 1], -height), 1, 1});
  }
  sort_points(pts);
  return pts;
}

std::vector<RealEigenvalue> pollution_exact_galerkin(const PollutionSpec& spec) {
  const int n = static_cast<int>(spec.targets.size());
  std::vector<double> vals;
  for (int m = 1; m <= n; ++m) {
    vals.push_back(spec.lambda_minus[m - 1]);
    vals.push_back(spec.lambda_plus[m - 1]);
  }
  for (double g : spec.targets) vals.push_back(g);
  return collect_reals(std::move(vals));
}

DiagonalModel rank_rotation_model(int n, double beta) {
  if (n < 2) throw PreconditionError("rank_rotation_model: n must be >= 2");
  if (!(beta > 0.0 && beta < 1.0))
    throw PreconditionError("rank_rotation_model: beta must be in (0, 1)");
  const double alpha = std::sqrt(1.0 - beta * beta);
  // Ambient directions e_0, e_1, ..., e_{n-1}, e_n with eigenvalues 0..n.
  RealVector ambient(n + 1);
  for (int j = 0; j <= n; ++j) ambient[j] = j;
  Matrix trial = Matrix::Zero(n + 1, n);
  for (int j = 1; j <= n - 1; ++j) trial(j, j - 1) = 1.0;
  trial(0, n - 1) = alpha;
  trial(n, n - 1) = beta;
  return DiagonalModel(std::move(ambient), std::move(trial));
}

std::vector<SpectralPoint> rank_rotation_exact_spec2(int n, double beta) {
  if (n < 2) throw PreconditionError("rank_rotation_model: n must be >= 2");
  const double alpha = std::sqrt(1.0 - beta * beta);
  std::vector<SpectralPoint> pts;
  for (int j = 1; j <= n - 1; ++j) pts.push_back({Complex(j, 0.0), 2, 1});
  const double re = n * beta * beta;
  const double im = n * beta * alpha;
  pts.push_back({Complex(re, im), 1, 1});
  pts.push_back({Complex(re, -im), 1, 1});
  sort_points(pts);
  return pts;
}

namespace {

struct NormalizedTarget {
  double c = 0.0;   // middle anchor after mapping c1 -> -1, c3 -> 1
  Complex z{};      // target after the same map
};

NormalizedTarget normalize_anchors(const PrescribedPointSpec& spec) {
  if (!(spec.c1 < spec.c2 && spec.c2 < spec.c3))
    throw PreconditionError(
        "prescribed point: anchors must satisfy c1 < c2 < c3");
  const double mid = 0.5 * (spec.c1 + spec.c3);
  const double half = 0.5 * (spec.c3 - spec.c1);
  return {(spec.c2 - mid) / half, (spec.z - mid) / half};
}

bool in_open_disk(Complex z, double a, double b) {
  return std::abs(z - Complex(0.5 * (a + b), 0.0)) < 0.5 * (b - a);
}

}  // namespace

bool prescribed_point_admissible(const PrescribedPointSpec& spec) {
  const NormalizedTarget t = normalize_anchors(spec);
  if (std::abs(t.z) > 1.0 + 1e-14) return false;
  if (in_open_disk(t.z, -1.0, t.c)) return false;
  if (in_open_disk(t.z, t.c, 1.0)) return false;
  return true;
}

std::array<double, 3> prescribed_point_coefficients(
    const PrescribedPointSpec& spec) {
  const NormalizedTarget t = normalize_anchors(spec);
  if (!prescribed_point_admissible(spec))
    throw OutsideAdmissibleRegion(
        "prescribed point: target outside the admissible region of its "
        "anchors");
  const double a = std::abs(t.z);
  const double x = t.z.real();  // a*cos(theta)
  const double c = t.c;
  // beta_plus = ((a^2 + c)/(1 + c) - x)/2, beta_minus = ((a^2 - c)/(1 - c) + x)/2.
  double beta_p = 0.5 * ((a * a + c) / (1.0 + c) - x);
  double beta_m = 0.5 * ((a * a - c) / (1.0 - c) + x);
  double mid2 = (1.0 - a * a) / (1.0 - c * c);
  auto clamp = [](double& v) {
    if (v < 0.0) {
      if (v < -1e-10) throw InfeasibleMixing("prescribed point: negative mixing weight");
      v = 0.0;
    }
  };
  clamp(beta_p);
  clamp(beta_m);
  clamp(mid2);
  const double total = beta_p + mid2 + beta_m;
  if (std::abs(total - 1.0) > 1e-9)
    throw InfeasibleMixing("prescribed point: mixing weights do not add to 1");
  return {std::sqrt(beta_p), std::sqrt(mid2), std::sqrt(beta_m)};
}

namespace {

// Deterministic perturbation directions for the three anchors; asymmetric so
// a delta sweep cannot cancel.
constexpr double kAnchorDrift[3] = {0.7, -1.0, 0.4};

}  // namespace

DiagonalModel prescribed_point_model(const PrescribedPointSpec& spec) {
  return prescribed_set_model(std::span<const PrescribedPointSpec>(&spec, 1));
}

DiagonalModel prescribed_set_model(std::span<const PrescribedPointSpec> specs) {
  if (specs.empty())
    throw PreconditionError("prescribed set: no targets given");
  const Index m = static_cast<Index>(specs.size());
  RealVector ambient(3 * m);
  Matrix trial = Matrix::Zero(3 * m, m);
  for (Index i = 0; i < m; ++i) {
    const auto& sp = specs[i];
    const std::array<double, 3> w = prescribed_point_coefficients(sp);
    const double anchors[3] = {sp.c1, sp.c2, sp.c3};
    for (int k = 0; k < 3; ++k) {
      ambient[3 * i + k] = anchors[k] + sp.delta * kAnchorDrift[k];
      trial(3 * i + k, i) = w[k];
    }
  }
  return DiagonalModel(std::move(ambient), std::move(trial));
}

MobiusReport verify_mobius(const DiagonalModel& model, double a, double b,
                           double c, double d, const ClusterConfig& cfg) {
  const SecondOrderSpectrum direct =
      second_order_spectrum(assemble_pencil(model), cfg);
  const SecondOrderSpectrum mapped_points = mobius_image(direct, a, b, c, d);
  const SecondOrderSpectrum of_mapped_model =
      second_order_spectrum(assemble_pencil(model.mobius_mapped(a, b, c, d)), cfg);

  MobiusReport report;
  report.multiplicities_match =
      mapped_points.points.size() == of_mapped_model.points.size();
  std::vector<bool> used(of_mapped_model.points.size(), false);
  for (const auto& p : mapped_points.points) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(of_mapped_model.points.size()); ++i) {
      if (used[i]) continue;
      const double dist = std::abs(of_mapped_model.points[i].value - p.value);
      if (dist < best_d) {
        best_d = dist;
        best = i;
      }
    }
    if (best < 0) {
      report.multiplicities_match = false;
      break;
    }
    used[best] = true;
    report.max_value_distance = std::max(report.max_value_distance, best_d);
    const auto& q = of_mapped_model.points[best];
    if (q.algebraic_mult != p.algebraic_mult ||
        q.geometric_mult != p.geometric_mult)
      report.multiplicities_match = false;
  }
  return report;
}

}  // namespace sospec
