#include "sospec/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include <json.hpp>

#include "sospec/pencil.hpp"
#include "sospec/serialize.hpp"

namespace sospec {

using nlohmann::json;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Complex pair_point_to_estimate(const SecondOrderSpectrum& s, double estimate) {
  Complex best{}, second{};
  double d1 = kInf, d2 = kInf;
  for (const auto& p : s.points) {
    if (p.value.imag() < 0.0) continue;
    const double d = std::abs(p.value - Complex(estimate, 0.0));
    if (d < d1) {
      d2 = d1;
      second = best;
      d1 = d;
      best = p.value;
    } else if (d < d2) {
      d2 = d;
      second = p.value;
    }
  }
  if (!std::isfinite(d1))
    throw SolverError("pair_point_to_estimate: empty spectrum");
  if (std::isfinite(d2) &&
      d2 - d1 <= 1e-9 * std::max(1.0, std::abs(estimate)) &&
      second != best) {
    // A conjugate pair whose residual reaches the discretization floor can
    // bifurcate into two real eigenvalues straddling the estimate.  Both
    // describe the same spectral feature, so a tie between them is not an
    // ambiguity; only ties between separated candidates are.
    if (std::abs(second - best) > 1e-5 * std::max(1.0, std::abs(estimate)))
      throw PairingAmbiguity(
          "pair_point_to_estimate: two spectral points are equally close to "
          "the Galerkin estimate");
    if (std::abs(second.imag()) > std::abs(best.imag())) return second;
  }
  return best;
}

std::pair<double, double> fit_slope(const std::vector<double>& x,
                                    const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw PreconditionError("fit_slope: need at least two samples");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw PreconditionError("fit_slope: degenerate abscissae");
  const double slope = sxy / sxx;
  const double r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return {slope, r2};
}

namespace {

// Spectrum of the Schroedinger pencil via the shift-inverted route, with the
// shift placed below the Galerkin spectrum. Returns the spectrum and the
// Galerkin eigenvalues used for pairing.
struct FemSpectra {
  SecondOrderSpectrum spec2;
  std::vector<double> galerkin;
};

FemSpectra fem_spectra(const HermiteSpace& space, const Potential& pot,
                       int quad_points) {
  const QuadratureRule quad = quad_points > 0
                                  ? QuadratureRule::gauss_legendre(quad_points)
                                  : default_quadrature(space.order());
  const PencilTriple pencil = assemble_schrodinger(space, pot, quad);
  FemSpectra out;
  out.galerkin = galerkin_spectrum(pencil);
  const double mu = out.galerkin.front() - 1.0;
  out.spec2 = second_order_spectrum_shift_invert(pencil, mu);
  return out;
}

}  // namespace

ConvergeResult run_converge(const ConvergeConfig& cfg) {
  const Potential pot = Potential::by_name(cfg.potential);
  ConvergeResult result;
  for (int order : cfg.orders) {
    const auto it = cfg.mesh_sizes.find(order);
    if (it == cfg.mesh_sizes.end() || it->second.size() < 2)
      throw PreconditionError(
          "run_converge: each order needs at least two mesh sizes");

    // Sweep cells are independent, so solve them concurrently; aggregation
    // below walks the futures in mesh order to keep the output deterministic.
    struct Cell {
      double h;
      FemSpectra spectra;
    };
    std::vector<std::future<Cell>> cells;
    for (int n_elem : it->second)
      cells.push_back(std::async(std::launch::async, [&cfg, &pot, order,
                                                      n_elem] {
        const HermiteSpace space({cfg.x_lo, cfg.x_hi, n_elem}, order);
        return Cell{space.mesh().h(),
                    fem_spectra(space, pot, cfg.quad_points)};
      }));

    // residuals[j] collects (log10 h, log10 |Im z|) rows for eigenvalue j.
    std::map<int, std::pair<std::vector<double>, std::vector<double>>> residuals;
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
      const int n_elem = it->second[ci];
      const Cell cell = cells[ci].get();
      for (int j : cfg.eig_indices) {
        if (j < 1 || j > static_cast<int>(cell.spectra.galerkin.size()))
          throw PreconditionError("run_converge: eigenvalue index out of range");
        const double estimate = cell.spectra.galerkin[j - 1];
        const Complex z = pair_point_to_estimate(cell.spectra.spec2, estimate);
        const double res = std::abs(z.imag());
        ConvergePointRow row{cfg.potential, order, j, n_elem, cell.h, z, res};
        result.points.push_back(row);
        if (res > 1e-13 * std::max(1.0, std::abs(z.real()))) {
          residuals[j].first.push_back(std::log10(cell.h));
          residuals[j].second.push_back(std::log10(res));
        }
      }
    }
    for (int j : cfg.eig_indices) {
      const auto& [xs, ys] = residuals[j];
      if (xs.size() < 2) continue;  // residuals at rounding level carry no slope
      const auto [slope, r2] = fit_slope(xs, ys);
      result.fits.push_back(
          {cfg.potential, order, j, slope, r2, static_cast<int>(xs.size())});
    }
  }
  return result;
}

MathieuTable run_mathieu_table(int order, int n_elem, int n_rows,
                               int quad_points) {
  if (n_rows < 1) throw PreconditionError("run_mathieu_table: n_rows >= 1");
  const double pi = 3.141592653589793238462643383279502884;
  const HermiteSpace space({0.0, pi, n_elem}, order);
  const FemSpectra spectra =
      fem_spectra(space, Potential::mathieu(), quad_points);
  if (static_cast<int>(spectra.galerkin.size()) < n_rows + 1)
    throw PreconditionError("run_mathieu_table: space too small for n_rows");

  // The chained gap for eigenvalue j uses the certified upper bound of
  // eigenvalue j-1 and lower bound of eigenvalue j+1, so pair one extra.
  std::vector<Complex> z(n_rows + 1);
  for (int j = 1; j <= n_rows + 1; ++j)
    z[j - 1] = pair_point_to_estimate(spectra.spec2, spectra.galerkin[j - 1]);

  MathieuTable table;
  table.order = order;
  table.n_elem = n_elem;
  for (int j = 1; j <= n_rows; ++j) {
    EnclosureTableRow row;
    row.j = j;
    row.z = z[j - 1];
    row.gap.a = j == 1 ? -kInf
                       : z[j - 2].real() + std::abs(z[j - 2].imag());
    row.gap.b = z[j].real() - std::abs(z[j].imag());
    row.residual = residual_interval(row.z);
    row.improved = tightened_interval(row.z, row.gap);
    table.rows.push_back(row);
  }
  return table;
}

CrystalRow run_crystal(const CrystalConfig& cfg) {
  if (!(cfg.l > 0.0) || !(cfg.h > 0.0))
    throw PreconditionError("run_crystal: l and h must be positive");
  const int n_elem = static_cast<int>(std::lround(2.0 * cfg.l / cfg.h));
  const HermiteSpace space({-cfg.l, cfg.l, n_elem}, cfg.order);
  const FemSpectra spectra =
      fem_spectra(space, Potential::crystal(), cfg.quad_points);

  // The converged pair is the one with the smallest |Im| among the points in
  // the gap disk; anything else there sits near a band edge.
  Complex best{};
  double best_im = kInf;
  for (const auto& p : spectra.spec2.points) {
    if (p.value.imag() < 0.0) continue;
    if (!cfg.gap.disk_contains(p.value)) continue;
    if (std::abs(p.value.imag()) < best_im) {
      best_im = std::abs(p.value.imag());
      best = p.value;
    }
  }
  if (!std::isfinite(best_im))
    throw SolverError("run_crystal: no spectral point inside the gap disk");

  CrystalRow out;
  out.config = cfg;
  out.n_elem = n_elem;
  out.row.j = cfg.label;
  out.row.z = best;
  out.row.gap = cfg.gap;
  out.row.residual = residual_interval(best);
  out.row.improved = tightened_interval(best, cfg.gap);
  return out;
}

namespace {

ToyReport make_toy_report(std::string name, const DiagonalModel& model,
                          std::vector<SpectralPoint> exact) {
  const PencilTriple pencil = assemble_pencil(model);
  ToyReport report;
  report.name = std::move(name);
  report.computed = second_order_spectrum(pencil, toy_cluster_config());
  report.exact = std::move(exact);
  report.galerkin = galerkin_spectrum(pencil);
  report.multiplicities_match =
      report.computed.points.size() == report.exact.size();
  std::vector<bool> used(report.computed.points.size(), false);
  for (const auto& e : report.exact) {
    int best = -1;
    double best_d = kInf;
    for (int i = 0; i < static_cast<int>(report.computed.points.size()); ++i) {
      if (used[i]) continue;
      const double d = std::abs(report.computed.points[i].value - e.value);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    if (best < 0) {
      report.multiplicities_match = false;
      break;
    }
    used[best] = true;
    report.max_value_distance = std::max(report.max_value_distance, best_d);
    const auto& c = report.computed.points[best];
    if (c.algebraic_mult != e.algebraic_mult ||
        c.geometric_mult != e.geometric_mult)
      report.multiplicities_match = false;
  }
  return report;
}

}  // namespace

ToyReport run_toy_diagonal_pair(int n) {
  return make_toy_report("ex12", diagonal_pair_model(n),
                         diagonal_pair_exact_spec2(n));
}

ToyReport run_toy_semi_bounded(int n, double r) {
  return make_toy_report("ex14", semi_bounded_model(n, r),
                         semi_bounded_exact_spec2(n, r));
}

ToyReport run_toy_pollution(const PollutionSpec& spec) {
  return make_toy_report("pollution", pollution_model(spec),
                         pollution_exact_spec2(spec));
}

ToyReport run_toy_rank_rotation(int n, double beta) {
  return make_toy_report("rank-rotation", rank_rotation_model(n, beta),
                         rank_rotation_exact_spec2(n, beta));
}

ToyReport run_toy_prescribed(const PrescribedPointSpec& spec) {
  std::vector<SpectralPoint> exact{{spec.z, 1, 1}, {std::conj(spec.z), 1, 1}};
  std::sort(exact.begin(), exact.end(), spectral_point_less);
  return make_toy_report("prescribed", prescribed_point_model(spec),
                         std::move(exact));
}

// ---- emission --------------------------------------------------------------

std::string converge_points_to_csv(const std::vector<ConvergePointRow>& rows) {
  std::string out = "potential,order,eig_index,n_elem,h,re_z,im_z,residual\n";
  for (const auto& r : rows) {
    out += r.potential;
    out += ',' + std::to_string(r.order);
    out += ',' + std::to_string(r.eig_index);
    out += ',' + std::to_string(r.n_elem);
    out += ',' + format_double(r.h);
    out += ',' + format_double(r.z.real());
    out += ',' + format_double(r.z.imag());
    out += ',' + format_double(r.residual);
    out += '\n';
  }
  return out;
}

std::string converge_slopes_to_csv(const std::vector<SlopeFit>& fits) {
  std::string out = "potential,order,eig_index,slope,r2,n_points\n";
  for (const auto& f : fits) {
    out += f.potential;
    out += ',' + std::to_string(f.order);
    out += ',' + std::to_string(f.eig_index);
    out += ',' + format_double(f.slope);
    out += ',' + format_double(f.r2);
    out += ',' + std::to_string(f.n_points);
    out += '\n';
  }
  return out;
}

std::string converge_to_json(const ConvergeResult& result) {
  json points = json::array();
  for (const auto& r : result.points)
    points.push_back({{"potential", r.potential},
                      {"order", r.order},
                      {"eig_index", r.eig_index},
                      {"n_elem", r.n_elem},
                      {"h", r.h},
                      {"re_z", r.z.real()},
                      {"im_z", r.z.imag()},
                      {"residual", r.residual}});
  json fits = json::array();
  for (const auto& f : result.fits)
    fits.push_back({{"potential", f.potential},
                    {"order", f.order},
                    {"eig_index", f.eig_index},
                    {"slope", f.slope},
                    {"r2", f.r2},
                    {"n_points", f.n_points}});
  json out;
  out["points"] = points;
  out["slopes"] = fits;
  return out.dump();
}

namespace {

struct SvgFrame {
  double x_lo, x_hi, y_lo, y_hi;
  static constexpr double width = 640.0, height = 480.0, margin = 48.0;

  double px(double x) const {
    return margin + (x - x_lo) / (x_hi - x_lo) * (width - 2 * margin);
  }
  double py(double y) const {
    return height - margin - (y - y_lo) / (y_hi - y_lo) * (height - 2 * margin);
  }
};

const char* kSeriesColors[] = {"#1b6ca8", "#c0392b", "#27ae60",
                               "#8e44ad", "#d35400", "#2c3e50"};

}  // namespace

std::string converge_to_svg(const ConvergeResult& result) {
  double x_lo = kInf, x_hi = -kInf, y_lo = kInf, y_hi = -kInf;
  for (const auto& r : result.points) {
    if (r.residual <= 0.0) continue;
    x_lo = std::min(x_lo, std::log10(r.h));
    x_hi = std::max(x_hi, std::log10(r.h));
    y_lo = std::min(y_lo, std::log10(r.residual));
    y_hi = std::max(y_hi, std::log10(r.residual));
  }
  if (!(x_lo < x_hi)) {
    x_lo -= 0.5;
    x_hi += 0.5;
  }
  if (!(y_lo < y_hi)) {
    y_lo -= 0.5;
    y_hi += 0.5;
  }
  const SvgFrame f{x_lo, x_hi, y_lo, y_hi};
  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
      "height=\"480\" viewBox=\"0 0 640 480\">\n";
  svg += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  svg += "<g stroke=\"#444\" stroke-width=\"1\">";
  svg += "<line x1=\"" + format_double(f.px(x_lo)) + "\" y1=\"" +
         format_double(f.py(y_lo)) + "\" x2=\"" + format_double(f.px(x_hi)) +
         "\" y2=\"" + format_double(f.py(y_lo)) + "\"/>";
  svg += "<line x1=\"" + format_double(f.px(x_lo)) + "\" y1=\"" +
         format_double(f.py(y_lo)) + "\" x2=\"" + format_double(f.px(x_lo)) +
         "\" y2=\"" + format_double(f.py(y_hi)) + "\"/>";
  svg += "</g>\n";

  std::map<std::pair<int, int>, std::vector<const ConvergePointRow*>> series;
  for (const auto& r : result.points)
    if (r.residual > 0.0) series[{r.order, r.eig_index}].push_back(&r);
  int color = 0;
  for (auto& [key, rows] : series) {
    std::sort(rows.begin(), rows.end(),
              [](const ConvergePointRow* a, const ConvergePointRow* b) {
                return a->h < b->h;
              });
    std::string pts;
    for (const auto* r : rows) {
      pts += format_double(f.px(std::log10(r->h)));
      pts += ',';
      pts += format_double(f.py(std::log10(r->residual)));
      pts += ' ';
    }
    svg += "<polyline fill=\"none\" stroke=\"";
    svg += kSeriesColors[color++ % 6];
    svg += "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

namespace {

std::string gap_bound_str(double v) {
  if (v == -kInf) return "-inf";
  if (v == kInf) return "+inf";
  return format_double(v);
}

}  // namespace

std::string enclosure_table_to_csv(const std::string& tag, int order,
                                   int n_elem,
                                   const std::vector<EnclosureTableRow>& rows) {
  std::string out =
      "tag,order,n_elem,j,re_z,im_z,a,b,res_lo,res_hi,imp_lo,imp_hi\n";
  for (const auto& r : rows) {
    const EnclosureInterval res = r.residual.outward();
    const EnclosureInterval imp = r.improved.outward();
    out += tag;
    out += ',' + std::to_string(order);
    out += ',' + std::to_string(n_elem);
    out += ',' + std::to_string(r.j);
    out += ',' + format_double(r.z.real());
    out += ',' + format_double(r.z.imag());
    out += ',' + gap_bound_str(r.gap.a);
    out += ',' + gap_bound_str(r.gap.b);
    out += ',' + format_double(res.lo);
    out += ',' + format_double(res.hi);
    out += ',' + format_double(imp.lo);
    out += ',' + format_double(imp.hi);
    out += '\n';
  }
  return out;
}

std::string enclosure_table_to_json(const std::string& tag, int order,
                                    int n_elem,
                                    const std::vector<EnclosureTableRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    const EnclosureInterval res = r.residual.outward();
    const EnclosureInterval imp = r.improved.outward();
    json gap;
    gap["a"] = r.gap.a_finite() ? json(r.gap.a) : json("-inf");
    gap["b"] = r.gap.b_finite() ? json(r.gap.b) : json("+inf");
    arr.push_back({{"j", r.j},
                   {"re_z", r.z.real()},
                   {"im_z", r.z.imag()},
                   {"gap", gap},
                   {"residual", {{"lo", res.lo}, {"hi", res.hi}}},
                   {"improved", {{"lo", imp.lo}, {"hi", imp.hi}}}});
  }
  json out;
  out["tag"] = tag;
  out["order"] = order;
  out["n_elem"] = n_elem;
  out["rows"] = arr;
  return out.dump();
}

std::string toy_report_to_csv(const ToyReport& report) {
  std::string out =
      "model,kind,re,im,alg_mult,geom_mult\n";
  for (const auto& p : report.exact) {
    out += report.name + ",exact," + format_double(p.value.real()) + ',' +
           format_double(p.value.imag()) + ',' +
           std::to_string(p.algebraic_mult) + ',' +
           std::to_string(p.geometric_mult) + '\n';
  }
  for (const auto& p : report.computed.points) {
    out += report.name + ",computed," + format_double(p.value.real()) + ',' +
           format_double(p.value.imag()) + ',' +
           std::to_string(p.algebraic_mult) + ',' +
           std::to_string(p.geometric_mult) + '\n';
  }
  return out;
}

std::string toy_report_to_json(const ToyReport& report) {
  auto points = [](const std::vector<SpectralPoint>& pts) {
    json arr = json::array();
    for (const auto& p : pts)
      arr.push_back({{"re", p.value.real()},
                     {"im", p.value.imag()},
                     {"alg_mult", p.algebraic_mult},
                     {"geom_mult", p.geometric_mult}});
    return arr;
  };
  json out;
  out["model"] = report.name;
  out["exact"] = points(report.exact);
  out["computed"] = points(report.computed.points);
  out["galerkin"] = report.galerkin;
  out["max_value_distance"] = report.max_value_distance;
  out["multiplicities_match"] = report.multiplicities_match;
  return out.dump();
}

std::string sigma_map_to_csv(const GridSpec& grid, const RealMatrix& values) {
  std::string out = "im\\re";
  for (int c = 0; c < grid.n_re; ++c) out += ',' + format_double(grid.re_at(c));
  out += '\n';
  for (int r = 0; r < grid.n_im; ++r) {
    out += format_double(grid.im_at(r));
    for (int c = 0; c < grid.n_re; ++c) out += ',' + format_double(values(r, c));
    out += '\n';
  }
  return out;
}

std::string sigma_map_to_json(const GridSpec& grid, const RealMatrix& values) {
  json out;
  out["re"] = json::array();
  out["im"] = json::array();
  for (int c = 0; c < grid.n_re; ++c) out["re"].push_back(grid.re_at(c));
  for (int r = 0; r < grid.n_im; ++r) out["im"].push_back(grid.im_at(r));
  json rows = json::array();
  for (int r = 0; r < grid.n_im; ++r) {
    json row = json::array();
    for (int c = 0; c < grid.n_re; ++c) row.push_back(values(r, c));
    rows.push_back(row);
  }
  out["sigma"] = rows;
  return out.dump();
}

std::string sigma_map_to_svg(const GridSpec& grid, const RealMatrix& values) {
  const double top = std::max(values.maxCoeff(), 1e-300);
  double x_lo = grid.re_lo, x_hi = grid.re_hi;
  if (!(x_lo < x_hi)) {
    x_lo -= 0.5;
    x_hi += 0.5;
  }
  const SvgFrame f{x_lo, x_hi, 0.0, top};
  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
      "height=\"480\" viewBox=\"0 0 640 480\">\n"
      "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  for (int r = 0; r < grid.n_im; ++r) {
    std::string pts;
    for (int c = 0; c < grid.n_re; ++c) {
      pts += format_double(f.px(grid.re_at(c)));
      pts += ',';
      pts += format_double(f.py(values(r, c)));
      pts += ' ';
    }
    svg += "<polyline fill=\"none\" stroke=\"";
    svg += kSeriesColors[r % 6];
    svg += "\" stroke-width=\"1\" points=\"" + pts + "\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace sospec
