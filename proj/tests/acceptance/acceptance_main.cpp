// Acceptance gate: one line per criterion, [PASS] or [FAIL], with pinned
// tolerances. Exit code is the number of failed criteria. `--slow` extends
// the crystal criterion to the large-domain eigenvalues.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "sospec/enclosure.hpp"
#include "sospec/experiments.hpp"
#include "sospec/fem.hpp"
#include "sospec/pencil.hpp"
#include "sospec/serialize.hpp"
#include "sospec/toy_models.hpp"

namespace {

using namespace sospec;
using Clock = std::chrono::steady_clock;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

// Mathieu characteristic value bounding the first eigenvalue of
// -u'' + 2cos(2x) on (0, pi) with Dirichlet conditions; supplied at full
// precision because the quintic improved interval is tighter than 1e-10.
constexpr double kMathieuReference = -0.110248816992092;

std::string str(double v) { return format_double(v); }

struct Checker {
  int checks = 0;
  std::vector<std::string> failures;

  void require(bool ok, std::string what) {
    ++checks;
    if (!ok) failures.push_back(std::move(what));
  }
};

// ---- criterion 10 audit: properties of every computed spectrum -------------

struct PropertyAudit {
  int spectra = 0;
  int basis_checks = 0;
  std::vector<std::string> failures;

  void fail(const std::string& tag, const std::string& what) {
    failures.push_back(tag + ": " + what);
  }

  void check(const std::string& tag, const PencilTriple& p,
             const SecondOrderSpectrum& s) {
    ++spectra;

    // Conjugate symmetry is exact: nonreal points come in bit-equal pairs
    // with equal multiplicities.
    for (const auto& pt : s.points) {
      if (pt.value.imag() == 0.0) continue;
      bool paired = false;
      for (const auto& other : s.points)
        if (other.value == std::conj(pt.value) &&
            other.algebraic_mult == pt.algebraic_mult &&
            other.geometric_mult == pt.geometric_mult)
          paired = true;
      if (!paired) {
        fail(tag, "unpaired point " + str(pt.value.real()) + " + " +
                      str(pt.value.imag()) + "i");
        break;
      }
    }

    if (s.total_algebraic() != 2 * p.n())
      fail(tag, "algebraic multiplicities sum to " +
                    std::to_string(s.total_algebraic()) + ", expected " +
                    std::to_string(2 * p.n()));
  }

  // Variant for models with known extreme eigenvalues: the whole spectrum
  // must lie in the closed disk spanned by [lambda_min, lambda_max].  Points
  // can sit exactly on the boundary circle, so the radius is inflated by a
  // scale-relative slack.
  void check(const std::string& tag, const PencilTriple& p,
             const SecondOrderSpectrum& s, double lambda_min,
             double lambda_max) {
    check(tag, p, s);
    const Complex center(0.5 * (lambda_min + lambda_max), 0.0);
    const double radius = 0.5 * (lambda_max - lambda_min);
    const double tol =
        1e-8 * std::max({1.0, std::abs(lambda_min), std::abs(lambda_max)});
    for (const auto& pt : s.points)
      if (std::abs(pt.value - center) > radius + tol) {
        fail(tag, "point " + str(pt.value.real()) + " + " +
                      str(pt.value.imag()) + "i escapes the spectral disk");
        break;
      }
  }

  void check_basis_invariance(const std::string& tag, const DiagonalModel& model,
                              const Matrix& change, const ClusterConfig& cfg) {
    ++basis_checks;
    const SecondOrderSpectrum s1 =
        second_order_spectrum(assemble_pencil(model), cfg);
    const SecondOrderSpectrum s2 = second_order_spectrum(
        assemble_pencil(model.with_basis_change(change)), cfg);
    if (s1.points.size() != s2.points.size()) {
      fail(tag, "basis change altered the number of spectral points");
      return;
    }
    const double tol = 1e-7 * std::max(1.0, s1.scale);
    std::vector<bool> used(s2.points.size(), false);
    for (const auto& pt : s1.points) {
      double best = kInf;
      std::size_t best_i = s2.points.size();
      for (std::size_t i = 0; i < s2.points.size(); ++i) {
        if (used[i]) continue;
        const double d = std::abs(s2.points[i].value - pt.value);
        if (d < best) {
          best = d;
          best_i = i;
        }
      }
      used[best_i] = true;
      if (best > tol) {
        fail(tag, "basis change moved a point by " + str(best));
        return;
      }
      if (s2.points[best_i].algebraic_mult != pt.algebraic_mult)
        fail(tag, "basis change altered an algebraic multiplicity");
    }
  }
};

// ---- reference tables ------------------------------------------------------

// Table endpoints are carried as printed strings so the check can honour the
// published decimal count: a computed bound matches if rounding it at that
// many decimals reproduces the string -- outward (the safe direction for a
// bound) or to nearest (the common printing convention) -- or if it agrees
// within the fallback tolerance.
int decimals(const char* text) {
  const char* dot = std::strchr(text, '.');
  return dot ? static_cast<int>(std::strlen(dot + 1)) : 0;
}

bool endpoint_matches(double ours, const char* printed, bool is_lower,
                      double fallback_tol) {
  const double printed_val = std::atof(printed);
  if (std::abs(ours - printed_val) <= fallback_tol) return true;
  const double scale = std::pow(10.0, decimals(printed));
  const long long target = std::llround(printed_val * scale);
  const double outward = is_lower ? std::floor(ours * scale)
                                  : std::ceil(ours * scale);
  if (static_cast<long long>(outward) == target) return true;
  return std::llround(ours * scale) == target;
}

struct ReferenceRow {
  const char* res_lo;
  const char* res_hi;
  const char* imp_lo;
  const char* imp_hi;
};

struct MathieuCase {
  int order;
  int n_elem;
  ReferenceRow rows[5];
};

constexpr MathieuCase kMathieuCases[3] = {
    {3,
     48,
     {{"-0.1117", "-0.1087", "-0.11024936", "-0.11024881"},
      {"3.9127", "3.9212", "3.91702122", "3.91702928"},
      {"9.0334", "9.0619", "9.0477100", "9.0477788"},
      {"15.99", "16.07", "16.03277", "16.03322"},
      {"24.92", "25.12", "25.0199", "25.0219"}}},
    {4,
     24,
     {{"-0.110460", "-0.110037", "-0.1102488282", "-0.1102488170"},
      {"3.91637", "3.91767", "3.917024690", "3.917024878"},
      {"9.04555", "9.04992", "9.0477385", "9.0477401"},
      {"16.0253", "16.0406", "16.0329635", "16.0329784"},
      {"24.99", "25.04", "25.020795", "25.020896"}}},
    {5,
     12,
     {{"-0.110345", "-0.110151", "-0.11024881932", "-0.11024881697"},
      {"3.91668", "3.91736", "3.917024750", "3.917024800"},
      {"9.04661", "9.04886", "9.047739080", "9.047739506"},
      {"16.0286", "16.0372", "16.0329680", "16.0329727"},
      {"25.0060", "25.0356", "25.0208210", "25.0208652"}}}};

// Reference slopes of log residual against log h; rows are eigenvalue labels
// 1..5, columns orders 3, 4, 5.
constexpr double kZeroSlopes[5][3] = {{1.9979, 2.9900, 3.9849},
                                      {1.9983, 2.9878, 3.9191},
                                      {2.0023, 2.9838, 3.9235},
                                      {2.0099, 2.9764, 3.9152},
                                      {1.9962, 2.9673, 3.8871}};
constexpr double kMathieuSlopes[5][3] = {{1.9915, 2.9816, 3.9768},
                                         {1.9847, 2.9680, 4.0214},
                                         {1.9790, 2.9629, 3.9557},
                                         {1.9682, 2.9486, 3.9432},
                                         {1.9532, 2.9238, 3.9183}};

struct CrystalCase {
  double l;
  double gap_a;
  double gap_b;
  int label;
  ReferenceRow row;
};

constexpr CrystalCase kCrystalBase = {
    25.0,
    -kInf,
    -0.378490,
    1,
    {"-0.409718", "-0.409535", "-0.409627588", "-0.409627318"}};

constexpr CrystalCase kCrystalSlow[2] = {
    {50.0,
     -0.347670,
     0.594800,
     2,
     {"0.377494", "0.377791", "0.377633000", "0.377633116"}},
    {100.0,
     0.918058,
     1.29317,
     3,
     {"1.18164", "1.18219", "1.18191629", "1.18191726"}}};

void check_improved_row(Checker& c, const std::string& tag,
                        const EnclosureTableRow& row, const ReferenceRow& ref,
                        double fallback_tol) {
  c.require(endpoint_matches(row.improved.lo, ref.imp_lo, true, fallback_tol),
            tag + ": improved lower " + str(row.improved.lo) + " vs " +
                ref.imp_lo);
  c.require(endpoint_matches(row.improved.hi, ref.imp_hi, false, fallback_tol),
            tag + ": improved upper " + str(row.improved.hi) + " vs " +
                ref.imp_hi);
}

void check_reference_row(Checker& c, const std::string& tag,
                         const EnclosureTableRow& row, const ReferenceRow& ref,
                         double fallback_tol) {
  c.require(endpoint_matches(row.residual.lo, ref.res_lo, true, fallback_tol),
            tag + ": residual lower " + str(row.residual.lo) + " vs " +
                ref.res_lo);
  c.require(endpoint_matches(row.residual.hi, ref.res_hi, false, fallback_tol),
            tag + ": residual upper " + str(row.residual.hi) + " vs " +
                ref.res_hi);
  check_improved_row(c, tag, row, ref, fallback_tol);
}

// ---- criteria --------------------------------------------------------------

void criterion_1_pair_oracle(Checker& c, PropertyAudit& audit) {
  for (int n = 2; n <= 8; ++n) {
    const std::string tag = "n=" + std::to_string(n);
    const ToyReport report = run_toy_diagonal_pair(n);
    c.require(report.max_value_distance <= 1e-9,
              tag + ": deviation " + str(report.max_value_distance));
    c.require(report.computed.points.size() == 2 * static_cast<std::size_t>(n),
              tag + ": expected 2n distinct spectral values");
    for (const auto& pt : report.computed.points) {
      c.require(pt.geometric_mult == 1,
                tag + ": geometric multiplicity " +
                    std::to_string(pt.geometric_mult) + " at re " +
                    str(pt.value.real()));
      if (pt.value.imag() != 0.0)
        c.require(pt.algebraic_mult == 1,
                  tag + ": nonreal point not algebraically simple");
    }
    std::vector<double> exact_gal;
    for (const auto& e : diagonal_pair_exact_galerkin(n))
      for (int k = 0; k < e.multiplicity; ++k) exact_gal.push_back(e.value);
    std::sort(exact_gal.begin(), exact_gal.end());
    c.require(report.galerkin.size() == exact_gal.size(),
              tag + ": galerkin size");
    double worst = 0.0;
    for (std::size_t i = 0; i < exact_gal.size(); ++i)
      worst = std::max(worst, std::abs(report.galerkin[i] - exact_gal[i]));
    c.require(worst <= 1e-10, tag + ": galerkin deviation " + str(worst));

    const DiagonalModel model = diagonal_pair_model(n);
    const PencilTriple p = assemble_pencil(model);
    audit.check("pair " + tag, p, report.computed,
                model.ambient().minCoeff(), model.ambient().maxCoeff());
  }
  audit.check_basis_invariance("pair n=4 basis change", diagonal_pair_model(4),
                               [] {
                                 Matrix m = Matrix::Identity(7, 7);
                                 m(0, 3) = 0.9;
                                 m(2, 0) = -0.6;
                                 m(5, 6) = 0.3;
                                 m(6, 6) = 1.4;
                                 return m;
                               }(),
                               toy_cluster_config());
}

void criterion_2_multiplicity(Checker& c, PropertyAudit& audit) {
  const double r = 2.0;
  for (int n = 3; n <= 8; ++n) {
    const std::string tag = "n=" + std::to_string(n);
    const ToyReport report = run_toy_semi_bounded(n, r);

    const SpectralPoint* at_minus_one = nullptr;
    double best = kInf;
    for (const auto& pt : report.computed.points) {
      const double d = std::abs(pt.value - Complex(-1.0, 0.0));
      if (d < best) {
        best = d;
        at_minus_one = &pt;
      }
    }
    c.require(at_minus_one != nullptr && best <= 1e-9,
              tag + ": no spectral value at -1 (off by " + str(best) + ")");
    if (at_minus_one != nullptr) {
      c.require(at_minus_one->algebraic_mult == 2 * (n - 1),
                tag + ": algebraic multiplicity at -1 is " +
                    std::to_string(at_minus_one->algebraic_mult));
      c.require(at_minus_one->geometric_mult == n - 1,
                tag + ": geometric multiplicity at -1 is " +
                    std::to_string(at_minus_one->geometric_mult));
    }

    const double sn = std::sin(1.0 / n), cn = std::cos(1.0 / n);
    const double alpha = std::pow(n, r) * sn * sn - cn * cn;
    const double gamma = (std::pow(n, r) + 1.0) * sn * cn;
    double pair_err = kInf;
    for (const auto& pt : report.computed.points)
      pair_err = std::min(pair_err, std::abs(pt.value - Complex(alpha, gamma)));
    c.require(pair_err <= 1e-9,
              tag + ": escaping pair off by " + str(pair_err));

    const DiagonalModel model = semi_bounded_model(n, r);
    audit.check("semi-bounded " + tag, assemble_pencil(model), report.computed,
                model.ambient().minCoeff(), model.ambient().maxCoeff());
  }
  audit.check_basis_invariance("semi-bounded n=4 basis change",
                               semi_bounded_model(4, 2.0),
                               [] {
                                 Matrix m = Matrix::Identity(7, 7);
                                 m(1, 4) = -0.8;
                                 m(3, 2) = 0.5;
                                 m(0, 0) = 1.7;
                                 return m;
                               }(),
                               toy_cluster_config());
}

void criterion_3_isolation(Checker& c, PropertyAudit& audit) {
  // Operator with eigenvalues {0 (double), -1, 1, 4}; the trial space holds
  // the full eigenspace of 0 plus two mixed directions.
  RealVector ambient(5);
  ambient << 0.0, 0.0, -1.0, 1.0, 4.0;
  Matrix trial = Matrix::Zero(5, 4);
  trial(0, 0) = 1.0;
  trial(1, 1) = 1.0;
  const double s3 = 1.0 / std::sqrt(3.0), s2 = 1.0 / std::sqrt(2.0);
  trial(2, 2) = s3;
  trial(3, 2) = s3;
  trial(4, 2) = s3;
  trial(2, 3) = s2;
  trial(4, 3) = -s2;
  const DiagonalModel model(ambient, trial);

  const std::vector<double> rest{-1.0, 1.0, 4.0};
  const double d0 = isolation_radius(0.0, rest);
  c.require(std::abs(d0 - 1.0 / std::sqrt(2.0)) <= 1e-15,
            "isolation radius is " + str(d0) + ", expected 1/sqrt(2)");

  const PencilTriple p = assemble_pencil(model);
  const SecondOrderSpectrum s = second_order_spectrum(p, toy_cluster_config());
  audit.check("isolation model", p, s, -1.0, 4.0);

  int inside = 0;
  for (const auto& pt : s.points) {
    if (std::abs(pt.value) >= d0) continue;
    ++inside;
    c.require(std::abs(pt.value) <= 1e-9,
              "point inside the isolation disk at " + str(pt.value.real()) +
                  " + " + str(pt.value.imag()) + "i");
    c.require(pt.geometric_mult == 2,
              "captured eigenvalue has geometric multiplicity " +
                  std::to_string(pt.geometric_mult));
    c.require(pt.algebraic_mult == 4,
              "captured eigenvalue has algebraic multiplicity " +
                  std::to_string(pt.algebraic_mult));
  }
  c.require(inside == 1, "expected exactly one point inside the disk, found " +
                             std::to_string(inside));
}

void criterion_4_sigma_bound(Checker& c, PropertyAudit&) {
  // Gap (-1, 1) of an operator with eigenvalues {-2, -1, 1, 2}; sigma of any
  // trial subspace dominates the universal lower bound alpha on the gap disk.
  RealVector ambient(4);
  ambient << -2.0, -1.0, 1.0, 2.0;
  Matrix trial(4, 3);
  trial << 0.9, 0.2, -0.1,
           0.3, -0.7, 0.4,
           -0.2, 0.5, 0.8,
           0.1, 0.3, -0.5;
  const PencilTriple p = assemble_pencil(DiagonalModel(ambient, trial));
  const OrthonormalPencil on = orthonormalize(p);

  int nodes = 0;
  double worst_margin = kInf;
  for (int row = 0; row < 21; ++row)
    for (int col = 0; col < 21; ++col) {
      const Complex z(-1.0 + 2.0 * col / 20.0, -1.0 + 2.0 * row / 20.0);
      if (std::abs(z) > 1.0) continue;
      ++nodes;
      const double margin = sigma(on, z) - alpha_lower_bound(z, -1.0, 1.0);
      worst_margin = std::min(worst_margin, margin);
    }
  c.require(nodes > 300, "grid unexpectedly sparse");
  c.require(worst_margin >= -1e-8,
            "sigma fell below alpha by " + str(-worst_margin));
}

void criterion_5_mathieu_tables(Checker& c, PropertyAudit& audit) {
  for (const MathieuCase& mc : kMathieuCases) {
    const std::string base =
        "r=" + std::to_string(mc.order) + " n=" + std::to_string(mc.n_elem);
    const MathieuTable table = run_mathieu_table(mc.order, mc.n_elem, 5);
    c.require(table.rows.size() == 5, base + ": expected five rows");
    if (table.rows.size() != 5) continue;
    for (int j = 0; j < 5; ++j)
      check_reference_row(c, base + " j=" + std::to_string(j + 1),
                          table.rows[j], mc.rows[j], 5e-7);
    c.require(table.rows[0].improved.lo <= kMathieuReference &&
                  kMathieuReference <= table.rows[0].improved.hi,
              base + ": improved interval misses the reference value");
  }

  // Audit one assembled pencil of the family.
  const HermiteSpace space(UniformMesh{0.0, kPi, 48}, 3);
  const PencilTriple p =
      assemble_schrodinger(space, Potential::mathieu(), default_quadrature(3));
  const std::vector<double> gal = galerkin_spectrum(p);
  audit.check("mathieu r=3 n=48", p,
              second_order_spectrum_shift_invert(p, gal.front() - 1.0));
}

void criterion_6_slopes(Checker& c, PropertyAudit&) {
  ConvergeConfig cfg;
  cfg.orders = {3, 4, 5};
  cfg.eig_indices = {1, 2, 3, 4, 5};
  cfg.mesh_sizes[3] = {10, 15, 20, 25, 30, 35, 40, 45, 50};
  cfg.mesh_sizes[4] = {9, 11, 13, 15, 17, 19};
  cfg.mesh_sizes[5] = {9, 10, 11, 12};

  const struct {
    const char* potential;
    const double (*slopes)[3];
  } cases[] = {{"zero", kZeroSlopes}, {"mathieu", kMathieuSlopes}};

  for (const auto& cs : cases) {
    cfg.potential = cs.potential;
    const ConvergeResult result = run_converge(cfg);
    c.require(result.fits.size() == 15,
              std::string(cs.potential) + ": expected 15 slope fits");
    for (const auto& fit : result.fits) {
      const int col = fit.order - 3;
      const double expect = cs.slopes[fit.eig_index - 1][col];
      c.require(std::abs(fit.slope - expect) <= 0.15,
                std::string(cs.potential) + " r=" + std::to_string(fit.order) +
                    " j=" + std::to_string(fit.eig_index) + ": slope " +
                    str(fit.slope) + " vs " + str(expect));
    }
  }
}

void run_crystal_case(Checker& c, const CrystalCase& cc) {
  CrystalConfig cfg;
  cfg.l = cc.l;
  cfg.h = 0.1;
  cfg.order = 3;
  cfg.gap = GapInterval{cc.gap_a, cc.gap_b};
  cfg.label = cc.label;
  const CrystalRow row = run_crystal(cfg);
  // Only the improved enclosure carries digit targets here: the residual
  // interval depends on |Im z| alone, whose reference digits reflect a finer
  // mesh than the pinned h.
  check_improved_row(c, "l=" + str(cc.l), row.row, cc.row, 5e-6);
}

void criterion_7_crystal(Checker& c, PropertyAudit& audit, bool slow) {
  run_crystal_case(c, kCrystalBase);
  if (slow)
    for (const CrystalCase& cc : kCrystalSlow) run_crystal_case(c, cc);

  // Audit a small instance of the same family.
  const HermiteSpace space(UniformMesh{-3.0, 3.0, 60}, 3);
  const PencilTriple p =
      assemble_schrodinger(space, Potential::crystal(), default_quadrature(3));
  const std::vector<double> gal = galerkin_spectrum(p);
  audit.check("crystal l=3", p,
              second_order_spectrum_shift_invert(p, gal.front() - 1.0));
}

void criterion_8_mobius(Checker& c, PropertyAudit& audit) {
  std::mt19937 rng(12345);
  auto urand = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (int trial_i = 0; trial_i < 20; ++trial_i) {
    const std::string tag = "case " + std::to_string(trial_i);
    const int dim = 4 + static_cast<int>(trial_i % 4);
    RealVector ambient(dim);
    double v = urand(-3.0, -2.0);
    for (int i = 0; i < dim; ++i) {
      ambient[i] = v;
      v += urand(0.3, 1.2);
    }
    const int trial_dim = 2 + trial_i % (dim - 1);
    Matrix trial(dim, trial_dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < trial_dim; ++j) trial(i, j) = gauss(rng);
    const DiagonalModel model(ambient, trial);

    double a, b, cc, d;
    if (trial_i % 2 == 0) {
      a = urand(0.5, 2.0);
      b = urand(-2.0, 2.0);
      cc = 0.0;
      d = 1.0;
    } else {
      const bool above = trial_i % 4 == 1;
      const double pole = above ? ambient[dim - 1] + urand(1.0, 3.0)
                                : ambient[0] - urand(1.0, 3.0);
      cc = 1.0;
      d = -pole;
      a = urand(-1.0, 1.0);
      b = urand(0.5, 1.5);
    }
    while (std::abs(a * d - cc * b) < 0.05) a += 0.5;

    const MobiusReport rep =
        verify_mobius(model, a, b, cc, d, toy_cluster_config());
    c.require(rep.max_value_distance <= 1e-8,
              tag + ": multiset distance " + str(rep.max_value_distance));
    c.require(rep.multiplicities_match, tag + ": multiplicities diverge");

    const PencilTriple p = assemble_pencil(model);
    audit.check("mobius " + tag, p,
                second_order_spectrum(p, toy_cluster_config()),
                ambient.minCoeff(), ambient.maxCoeff());
    if (trial_i == 0) {
      Matrix change = Matrix::Identity(trial_dim, trial_dim);
      change(0, trial_dim - 1) = 0.45;
      change(trial_dim - 1, 0) = -0.3;
      audit.check_basis_invariance("random model basis change", model, change,
                                   toy_cluster_config());
    }
  }
}

void criterion_9_prescribed(Checker& c, PropertyAudit& audit) {
  const Complex targets[] = {Complex(0.3, 0.7), Complex(-0.4, 0.55),
                             Complex(0.0, 0.8), Complex(-0.6, 0.6)};

  // Exact realization at delta = 0.
  {
    PrescribedPointSpec spec;
    spec.z = targets[0];
    spec.delta = 0.0;
    const DiagonalModel model = prescribed_point_model(spec);
    const PencilTriple p = assemble_pencil(model);
    const SecondOrderSpectrum s =
        second_order_spectrum(p, toy_cluster_config());
    audit.check("prescribed delta=0", p, s, model.ambient().minCoeff(),
                model.ambient().maxCoeff());
    double err = kInf;
    for (const auto& pt : s.points)
      err = std::min(err, std::abs(pt.value - spec.z));
    c.require(err <= 1e-12, "delta=0 deviation " + str(err));
  }

  // Linear decay: normalized errors err/delta stay within bounded ratios.
  {
    std::vector<double> normalized;
    for (double delta : {1e-2, 1e-3, 1e-4}) {
      PrescribedPointSpec spec;
      spec.z = targets[0];
      spec.delta = delta;
      const SecondOrderSpectrum s = second_order_spectrum(
          assemble_pencil(prescribed_point_model(spec)), toy_cluster_config());
      double err = kInf;
      for (const auto& pt : s.points)
        err = std::min(err, std::abs(pt.value - spec.z));
      normalized.push_back(err / delta);
    }
    for (std::size_t i = 1; i < normalized.size(); ++i) {
      const double ratio = normalized[i] / normalized[i - 1];
      c.require(ratio >= 0.05 && ratio <= 20.0,
                "normalized error ratio " + str(ratio) +
                    " outside [0.05, 20]");
    }
  }

  // Finite prescribed set, slightly perturbed anchors.
  {
    std::vector<PrescribedPointSpec> specs;
    for (const Complex z : targets) {
      PrescribedPointSpec spec;
      spec.z = z;
      spec.delta = 1e-8;
      specs.push_back(spec);
    }
    const DiagonalModel model = prescribed_set_model(specs);
    const PencilTriple p = assemble_pencil(model);
    const SecondOrderSpectrum s =
        second_order_spectrum(p, toy_cluster_config());
    audit.check("prescribed set", p, s, model.ambient().minCoeff(),
                model.ambient().maxCoeff());
    for (const Complex z : targets) {
      double err = kInf;
      for (const auto& pt : s.points) err = std::min(err, std::abs(pt.value - z));
      c.require(err <= 1e-6, "prescribed point " + str(z.real()) + " + " +
                                 str(z.imag()) + "i off by " + str(err));
    }
  }
}

void criterion_10_properties(Checker& c, const PropertyAudit& audit) {
  c.require(audit.spectra >= 30,
            "audit covered only " + std::to_string(audit.spectra) + " spectra");
  c.require(audit.basis_checks >= 3, "too few basis-change checks");
  for (const auto& f : audit.failures) c.require(false, f);
  std::printf("    audited %d spectra, %d basis-change checks\n",
              audit.spectra, audit.basis_checks);
}

// ---- harness ---------------------------------------------------------------

int run_all(bool slow) {
  PropertyAudit audit;
  int failed = 0;

  const auto run = [&](int index, const char* title, double budget_s,
                       const std::function<void(Checker&)>& fn) {
    Checker c;
    const auto start = Clock::now();
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("unhandled exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(Clock::now() - start).count();
    if (budget_s > 0.0 && elapsed > budget_s)
      c.failures.push_back("runtime " + str(elapsed) +
                           " s exceeds budget " + str(budget_s) + " s");
    const bool ok = c.failures.empty();
    std::printf("[%s] %2d %s (%.2f s, %d checks)\n", ok ? "PASS" : "FAIL",
                index, title, elapsed, c.checks);
    std::size_t shown = 0;
    for (const auto& f : c.failures) {
      if (++shown > 12) {
        std::printf("    ... and %zu more\n", c.failures.size() - 12);
        break;
      }
      std::printf("    %s\n", f.c_str());
    }
    if (!ok) ++failed;
  };

  run(1, "pair model oracle", 1.0,
      [&](Checker& c) { criterion_1_pair_oracle(c, audit); });
  run(2, "multiplicity reporting", 1.0,
      [&](Checker& c) { criterion_2_multiplicity(c, audit); });
  run(3, "captured eigenspace isolation", 1.0,
      [&](Checker& c) { criterion_3_isolation(c, audit); });
  run(4, "sigma lower bound on a gap disk", 5.0,
      [&](Checker& c) { criterion_4_sigma_bound(c, audit); });
  run(5, "mathieu enclosure tables", 30.0,
      [&](Checker& c) { criterion_5_mathieu_tables(c, audit); });
  run(6, "convergence slopes", 120.0,
      [&](Checker& c) { criterion_6_slopes(c, audit); });
  run(7, slow ? "crystal enclosures (all domains)" : "crystal enclosure l=25",
      slow ? 3600.0 : 180.0,
      [&](Checker& c) { criterion_7_crystal(c, audit, slow); });
  run(8, "mobius invariance on random models", 0.0,
      [&](Checker& c) { criterion_8_mobius(c, audit); });
  run(9, "prescribed spectral points", 0.0,
      [&](Checker& c) { criterion_9_prescribed(c, audit); });
  run(10, "spectrum property audit", 0.0,
      [&](Checker& c) { criterion_10_properties(c, audit); });

  std::printf("%d of 10 criteria passed\n", 10 - failed);
  return failed;
}

}  // namespace

int main(int argc, char** argv) {
  bool slow = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--slow") == 0) slow = true;
  return run_all(slow);
}
