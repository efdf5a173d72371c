#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sospec/experiments.hpp"
#include "sospec/fem.hpp"
#include "sospec/pencil.hpp"
#include "sospec/serialize.hpp"
#include "sospec/toy_models.hpp"
#include "sospec/types.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sospec;

namespace {

constexpr const char* kSchemaFooter = R"(CSV schemas:
  toy         model,kind,re,im,alg_mult,geom_mult   (kind: exact | computed)
  fem         spectrum: re,im,alg_mult,geom_mult; galerkin: index,value
              table mode adds tag,order,n_elem,j,re_z,im_z,a,b,res_lo,res_hi,imp_lo,imp_hi
  converge    points: potential,order,eig_index,n_elem,h,re_z,im_z,residual
              slopes: potential,order,eig_index,slope,r2,n_points
  enclose     eig_label,source,lo,hi,re,im          (source: residual | improved)
  sigma-map   im\re header row, then one row of sigma values per grid line
  crystal     tag,order,n_elem,j,re_z,im_z,a,b,res_lo,res_hi,imp_lo,imp_hi

Config files are JSON; see README.md for the per-command fields.
Exit codes: 0 success, 2 precondition violation, 3 solver failure.)";

struct Output {
  fs::path dir;
  std::set<std::string> formats;

  bool want(const std::string& format) const {
    return formats.count(format) > 0;
  }

  void write(const std::string& name, const std::string& text) const {
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out)
      throw PreconditionError("cannot open output file: " + path.string());
    out << text;
    if (!out) throw PreconditionError("write failed: " + path.string());
    std::cout << "wrote " << path.string() << "\n";
  }
};

json load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot read config file: " + path);
  try {
    json cfg;
    in >> cfg;
    return cfg;
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("config is not valid JSON: ") +
                            e.what());
  }
}

// Field accessors that turn schema mistakes into precondition errors with the
// offending key in the message.
const json& require_field(const json& cfg, const char* key) {
  if (!cfg.is_object() || !cfg.contains(key))
    throw PreconditionError(std::string("config is missing \"") + key + "\"");
  return cfg.at(key);
}

double require_num(const json& cfg, const char* key) {
  const json& v = require_field(cfg, key);
  if (!v.is_number())
    throw PreconditionError(std::string("config field \"") + key +
                            "\" must be a number");
  return v.get<double>();
}

int require_int(const json& cfg, const char* key) {
  const json& v = require_field(cfg, key);
  if (!v.is_number_integer())
    throw PreconditionError(std::string("config field \"") + key +
                            "\" must be an integer");
  return v.get<int>();
}

double num_or(const json& cfg, const char* key, double fallback) {
  if (!cfg.is_object() || !cfg.contains(key)) return fallback;
  return require_num(cfg, key);
}

int int_or(const json& cfg, const char* key, int fallback) {
  if (!cfg.is_object() || !cfg.contains(key)) return fallback;
  return require_int(cfg, key);
}

std::string str_or(const json& cfg, const char* key,
                   const std::string& fallback) {
  if (!cfg.is_object() || !cfg.contains(key)) return fallback;
  const json& v = cfg.at(key);
  if (!v.is_string())
    throw PreconditionError(std::string("config field \"") + key +
                            "\" must be a string");
  return v.get<std::string>();
}

std::vector<double> require_num_list(const json& cfg, const char* key) {
  const json& v = require_field(cfg, key);
  if (!v.is_array())
    throw PreconditionError(std::string("config field \"") + key +
                            "\" must be an array of numbers");
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number())
      throw PreconditionError(std::string("config field \"") + key +
                              "\" must contain only numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<int> int_list_or(const json& cfg, const char* key,
                             std::vector<int> fallback) {
  if (!cfg.is_object() || !cfg.contains(key)) return fallback;
  const json& v = cfg.at(key);
  if (!v.is_array())
    throw PreconditionError(std::string("config field \"") + key +
                            "\" must be an array of integers");
  std::vector<int> out;
  for (const json& e : v) {
    if (!e.is_number_integer())
      throw PreconditionError(std::string("config field \"") + key +
                              "\" must contain only integers");
    out.push_back(e.get<int>());
  }
  return out;
}

Complex complex_field(const json& cfg, const char* key) {
  const json& v = require_field(cfg, key);
  if (v.is_number()) return Complex(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return Complex(v[0].get<double>(), v[1].get<double>());
  throw PreconditionError(std::string("config field \"") + key +
                          "\" must be a number or an [re, im] pair");
}

ClusterConfig cluster_from_json(const json& cfg) {
  ClusterConfig out;
  if (!cfg.is_object() || !cfg.contains("cluster")) return out;
  const json& c = cfg.at("cluster");
  out.rel_tol = num_or(c, "rel_tol", out.rel_tol);
  out.abs_floor = num_or(c, "abs_floor", out.abs_floor);
  out.rank_tol = num_or(c, "rank_tol", out.rank_tol);
  out.defect_rel_tol = num_or(c, "defect_rel_tol", out.defect_rel_tol);
  return out;
}

// ---- toy -------------------------------------------------------------------

PollutionSpec pollution_from_json(const json& cfg) {
  PollutionSpec spec;
  spec.lambda_minus = require_num_list(cfg, "lambda_minus");
  spec.lambda_plus = require_num_list(cfg, "lambda_plus");
  spec.targets = require_num_list(cfg, "targets");
  spec.offset = require_int(cfg, "offset");
  return spec;
}

PrescribedPointSpec prescribed_from_json(const json& cfg) {
  PrescribedPointSpec spec;
  spec.c1 = num_or(cfg, "c1", spec.c1);
  spec.c2 = num_or(cfg, "c2", spec.c2);
  spec.c3 = num_or(cfg, "c3", spec.c3);
  spec.z = complex_field(cfg, "z");
  spec.delta = num_or(cfg, "delta", 0.0);
  return spec;
}

ToyReport toy_report_from_json(const json& cfg) {
  const std::string model = str_or(cfg, "model", "");
  if (model == "ex12") return run_toy_diagonal_pair(require_int(cfg, "n"));
  if (model == "ex14")
    return run_toy_semi_bounded(require_int(cfg, "n"), require_num(cfg, "r"));
  if (model == "pollution") return run_toy_pollution(pollution_from_json(cfg));
  if (model == "rank-rotation")
    return run_toy_rank_rotation(require_int(cfg, "n"), require_num(cfg, "beta"));
  if (model == "prescribed")
    return run_toy_prescribed(prescribed_from_json(cfg));
  throw PreconditionError(
      "config field \"model\" must be one of ex12, ex14, pollution, "
      "rank-rotation, prescribed");
}

DiagonalModel toy_model_from_json(const json& cfg) {
  const std::string model = str_or(cfg, "model", "");
  if (model == "ex12") return diagonal_pair_model(require_int(cfg, "n"));
  if (model == "ex14")
    return semi_bounded_model(require_int(cfg, "n"), require_num(cfg, "r"));
  if (model == "pollution") return pollution_model(pollution_from_json(cfg));
  if (model == "rank-rotation")
    return rank_rotation_model(require_int(cfg, "n"), require_num(cfg, "beta"));
  if (model == "prescribed")
    return prescribed_point_model(prescribed_from_json(cfg));
  throw PreconditionError("unknown toy model: " + model);
}

void cmd_toy(const json& cfg, const Output& out, bool dump) {
  const ToyReport report = toy_report_from_json(cfg);

  std::cout << "model " << report.name << "\n";
  std::cout << "  exact vs computed (re, im, alg, geom):\n";
  const std::size_t rows =
      std::max(report.exact.size(), report.computed.points.size());
  for (std::size_t i = 0; i < rows; ++i) {
    std::ostringstream line;
    line << "  ";
    if (i < report.exact.size()) {
      const auto& e = report.exact[i];
      line << format_double(e.value.real()) << " " << format_double(e.value.imag())
           << " " << e.algebraic_mult << " " << e.geometric_mult;
    } else {
      line << "-";
    }
    line << "  |  ";
    if (i < report.computed.points.size()) {
      const auto& c = report.computed.points[i];
      line << format_double(c.value.real()) << " " << format_double(c.value.imag())
           << " " << c.algebraic_mult << " " << c.geometric_mult;
    } else {
      line << "-";
    }
    std::cout << line.str() << "\n";
  }
  std::cout << "  max deviation " << format_double(report.max_value_distance)
            << ", multiplicities "
            << (report.multiplicities_match ? "match" : "MISMATCH") << "\n";

  const std::string stem = "toy_" + report.name;
  if (out.want("csv")) out.write(stem + ".csv", toy_report_to_csv(report));
  if (out.want("json")) out.write(stem + ".json", toy_report_to_json(report));
  if (dump)
    out.write(stem + "_pencil.json",
              pencil_to_json(assemble_pencil(toy_model_from_json(cfg))));
}

// ---- fem -------------------------------------------------------------------

struct FemSetup {
  HermiteSpace space;
  Potential potential;
  QuadratureRule quad;
};

FemSetup fem_setup_from_json(const json& cfg) {
  const std::string pot_name = str_or(cfg, "potential", "zero");
  const Potential pot = Potential::by_name(pot_name);
  UniformMesh mesh;
  if (cfg.contains("l")) {
    const double l = require_num(cfg, "l");
    mesh.x_lo = -l;
    mesh.x_hi = l;
  } else {
    mesh.x_lo = num_or(cfg, "x_lo", 0.0);
    mesh.x_hi = num_or(cfg, "x_hi", std::numbers::pi);
  }
  mesh.n_elem = require_int(cfg, "n_elem");
  const int order = int_or(cfg, "order", 3);
  const int quad_points = int_or(cfg, "quad_points", 0);
  const QuadratureRule quad = quad_points > 0
                                  ? QuadratureRule::gauss_legendre(quad_points)
                                  : default_quadrature(order);
  return {HermiteSpace(mesh, order), pot, quad};
}

// Spectrum route shared by fem and enclose: "shift" absent -> direct solve,
// "auto" -> shift one below the lowest Galerkin value, number -> that shift.
SecondOrderSpectrum spectrum_with_shift(const PencilTriple& p, const json& cfg,
                                        const ClusterConfig& cluster,
                                        bool default_auto) {
  if (cfg.contains("shift")) {
    const json& s = cfg.at("shift");
    if (s.is_string() && s.get<std::string>() == "auto") {
      const std::vector<double> gal = galerkin_spectrum(p);
      return second_order_spectrum_shift_invert(p, gal.front() - 1.0, cluster);
    }
    if (s.is_number())
      return second_order_spectrum_shift_invert(p, s.get<double>(), cluster);
    throw PreconditionError(
        "config field \"shift\" must be a number or \"auto\"");
  }
  if (default_auto) {
    const std::vector<double> gal = galerkin_spectrum(p);
    return second_order_spectrum_shift_invert(p, gal.front() - 1.0, cluster);
  }
  return second_order_spectrum(p, cluster);
}

void cmd_fem(const json& cfg, const Output& out, bool dump) {
  const FemSetup setup = fem_setup_from_json(cfg);
  const PencilTriple p =
      assemble_schrodinger(setup.space, setup.potential, setup.quad);
  if (dump) out.write("fem_pencil.json", pencil_to_json(p));

  const SecondOrderSpectrum s =
      spectrum_with_shift(p, cfg, cluster_from_json(cfg), true);
  const std::vector<double> gal = galerkin_spectrum(p);
  std::cout << "fem: " << setup.potential.name << " on ["
            << format_double(setup.space.mesh().x_lo) << ", "
            << format_double(setup.space.mesh().x_hi) << "], order "
            << setup.space.order() << ", " << setup.space.mesh().n_elem
            << " elements, " << setup.space.dof_count() << " dofs\n";

  if (out.want("csv")) out.write("fem_spectrum.csv", spectrum_to_csv(s));
  if (out.want("json")) out.write("fem_spectrum.json", spectrum_to_json(s));
  if (out.want("csv")) {
    std::string csv = "index,value\n";
    for (std::size_t i = 0; i < gal.size(); ++i)
      csv += std::to_string(i + 1) + "," + format_double(gal[i]) + "\n";
    out.write("fem_galerkin.csv", csv);
  }

  const int table_rows = int_or(cfg, "table_rows", 0);
  if (table_rows > 0) {
    if (setup.potential.name != "mathieu")
      throw PreconditionError(
          "table mode is defined for the mathieu potential only");
    const MathieuTable table =
        run_mathieu_table(setup.space.order(), setup.space.mesh().n_elem,
                          table_rows, int_or(cfg, "quad_points", 0));
    if (out.want("csv"))
      out.write("fem_table.csv", enclosure_table_to_csv(
                                     "mathieu", table.order, table.n_elem,
                                     table.rows));
    if (out.want("json"))
      out.write("fem_table.json", enclosure_table_to_json(
                                      "mathieu", table.order, table.n_elem,
                                      table.rows));
  }
}

// ---- converge --------------------------------------------------------------

void cmd_converge(const json& cfg, const Output& out, bool) {
  ConvergeConfig cc;
  cc.potential = str_or(cfg, "potential", cc.potential);
  cc.x_lo = num_or(cfg, "x_lo", cc.x_lo);
  cc.x_hi = num_or(cfg, "x_hi", cc.x_hi);
  cc.orders = int_list_or(cfg, "orders", cc.orders);
  cc.eig_indices = int_list_or(cfg, "eig_indices", cc.eig_indices);
  cc.quad_points = int_or(cfg, "quad_points", 0);
  const json& sizes = require_field(cfg, "mesh_sizes");
  if (!sizes.is_object())
    throw PreconditionError(
        "config field \"mesh_sizes\" must map order -> list of n_elem");
  for (const auto& [key, value] : sizes.items()) {
    int order = 0;
    try {
      order = std::stoi(key);
    } catch (const std::exception&) {
      throw PreconditionError("mesh_sizes key is not an order: " + key);
    }
    if (!value.is_array())
      throw PreconditionError("mesh_sizes values must be arrays of integers");
    for (const json& e : value) {
      if (!e.is_number_integer())
        throw PreconditionError("mesh_sizes values must be arrays of integers");
      cc.mesh_sizes[order].push_back(e.get<int>());
    }
  }

  const ConvergeResult result = run_converge(cc);
  for (const auto& fit : result.fits)
    std::cout << "order " << fit.order << " eig " << fit.eig_index
              << ": slope " << format_double(fit.slope) << " (r2 "
              << format_double(fit.r2) << ", " << fit.n_points << " meshes)\n";

  if (out.want("csv")) {
    out.write("converge_points.csv", converge_points_to_csv(result.points));
    out.write("converge_slopes.csv", converge_slopes_to_csv(result.fits));
  }
  if (out.want("json")) out.write("converge.json", converge_to_json(result));
  if (out.want("svg-data")) out.write("converge.svg", converge_to_svg(result));
}

// ---- enclose / sigma-map sources -------------------------------------------

PencilTriple pencil_from_config(const json& cfg) {
  if (cfg.contains("pencil")) return pencil_from_json(cfg.at("pencil").dump());
  if (cfg.contains("pencil_file")) {
    const std::string path = str_or(cfg, "pencil_file", "");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PreconditionError("cannot read pencil file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return pencil_from_json(text.str());
  }
  if (cfg.contains("model"))
    return assemble_pencil(toy_model_from_json(cfg.at("model")));
  if (cfg.contains("fem")) {
    const FemSetup setup = fem_setup_from_json(cfg.at("fem"));
    return assemble_schrodinger(setup.space, setup.potential, setup.quad);
  }
  throw PreconditionError(
      "config needs a pencil source: \"pencil\", \"pencil_file\", \"model\" "
      "or \"fem\"");
}

void cmd_enclose(const json& cfg, const Output& out, bool dump) {
  const PencilTriple p = pencil_from_config(cfg);
  if (dump) out.write("enclose_pencil.json", pencil_to_json(p));
  const std::vector<GapInterval> gaps =
      gaps_from_json_text(require_field(cfg, "gaps").dump());
  const SecondOrderSpectrum s = spectrum_with_shift(
      p, cfg, cluster_from_json(cfg), cfg.contains("fem"));
  const std::vector<EnclosureRow> rows = pair_and_enclose(s, gaps);
  for (const auto& r : rows)
    std::cout << "eig " << r.label << " "
              << (r.interval.source == EnclosureInterval::Source::residual
                      ? "residual"
                      : "improved")
              << " [" << format_double(r.interval.lo) << ", "
              << format_double(r.interval.hi) << "]\n";
  if (out.want("csv")) out.write("enclosures.csv", enclosures_to_csv(rows));
  if (out.want("json")) out.write("enclosures.json", enclosures_to_json(rows));
}

void cmd_sigma_map(const json& cfg, const Output& out, bool dump) {
  const PencilTriple p = pencil_from_config(cfg);
  if (dump) out.write("sigma_map_pencil.json", pencil_to_json(p));
  GridSpec grid;
  grid.re_lo = require_num(cfg, "re_lo");
  grid.re_hi = require_num(cfg, "re_hi");
  grid.im_lo = require_num(cfg, "im_lo");
  grid.im_hi = require_num(cfg, "im_hi");
  grid.n_re = require_int(cfg, "n_re");
  grid.n_im = require_int(cfg, "n_im");
  const RealMatrix values = sigma_map(p, grid);
  std::cout << "sigma map " << grid.n_im << "x" << grid.n_re << ", min "
            << format_double(values.minCoeff()) << "\n";
  if (out.want("csv")) out.write("sigma_map.csv", sigma_map_to_csv(grid, values));
  if (out.want("json"))
    out.write("sigma_map.json", sigma_map_to_json(grid, values));
  if (out.want("svg-data"))
    out.write("sigma_map.svg", sigma_map_to_svg(grid, values));
}

// ---- crystal ---------------------------------------------------------------

double gap_bound_from_json(const json& cfg, const char* key, double fallback) {
  if (!cfg.contains(key)) return fallback;
  const json& v = cfg.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "+inf" || s == "inf")
      return std::numeric_limits<double>::infinity();
  }
  throw PreconditionError(std::string("config field \"") + key +
                          "\" must be a number, \"-inf\" or \"+inf\"");
}

void cmd_crystal(const json& cfg, const Output& out, bool dump) {
  CrystalConfig cc;
  cc.l = num_or(cfg, "l", cc.l);
  cc.h = num_or(cfg, "h", cc.h);
  cc.order = int_or(cfg, "order", cc.order);
  cc.label = int_or(cfg, "label", cc.label);
  cc.quad_points = int_or(cfg, "quad_points", 0);
  cc.gap.a = gap_bound_from_json(cfg, "a",
                                 -std::numeric_limits<double>::infinity());
  cc.gap.b = gap_bound_from_json(cfg, "b",
                                 std::numeric_limits<double>::infinity());
  if (cc.gap.a_finite() && cc.gap.b_finite() && !(cc.gap.a < cc.gap.b))
    throw PreconditionError("crystal gap needs a < b");

  const CrystalRow row = run_crystal(cc);
  std::cout << "crystal l=" << format_double(cc.l) << " order " << cc.order
            << " (" << row.n_elem << " elements): eig " << cc.label << " at "
            << format_double(row.row.z.real()) << " + "
            << format_double(row.row.z.imag()) << "i\n"
            << "  residual [" << format_double(row.row.residual.lo) << ", "
            << format_double(row.row.residual.hi) << "]\n"
            << "  improved [" << format_double(row.row.improved.lo) << ", "
            << format_double(row.row.improved.hi) << "]\n";

  const std::vector<EnclosureTableRow> rows{row.row};
  if (out.want("csv"))
    out.write("crystal.csv",
              enclosure_table_to_csv("crystal", cc.order, row.n_elem, rows));
  if (out.want("json"))
    out.write("crystal.json",
              enclosure_table_to_json("crystal", cc.order, row.n_elem, rows));
  if (dump) {
    const UniformMesh mesh{-cc.l, cc.l, row.n_elem};
    const HermiteSpace space(mesh, cc.order);
    const QuadratureRule quad =
        cc.quad_points > 0 ? QuadratureRule::gauss_legendre(cc.quad_points)
                           : default_quadrature(cc.order);
    out.write("crystal_pencil.json",
              pencil_to_json(assemble_schrodinger(space, Potential::crystal(),
                                                  quad)));
  }
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{
      "sospec: second order relative spectra of self-adjoint operators\n"
      "Computes pollution-free eigenvalue enclosures from trial-subspace "
      "pencils."};
  app.footer(kSchemaFooter);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::string format = "csv,json";
  bool dump = false;

  const struct {
    const char* name;
    const char* help;
    void (*fn)(const json&, const Output&, bool);
  } commands[] = {
      {"toy", "Closed-form benchmark models: computed vs exact spectra",
       cmd_toy},
      {"fem", "Schrodinger pencil on a C1 finite element space", cmd_fem},
      {"converge", "Residual decay against mesh size with fitted slopes",
       cmd_converge},
      {"enclose", "Eigenvalue enclosures from a pencil and gap intervals",
       cmd_enclose},
      {"sigma-map", "Grid of smallest singular values of the scaled pencil",
       cmd_sigma_map},
      {"crystal", "Enclosure for a gap eigenvalue of the crystal potential",
       cmd_crystal},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory (default .)");
    sub->add_option("--format", format,
                    "comma-separated: csv, json, svg-data (default csv,json)");
    sub->add_flag("--dump-matrices", dump,
                  "also write the assembled pencil as JSON");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  Output out;
  out.dir = out_dir;
  std::stringstream formats(format);
  std::string piece;
  while (std::getline(formats, piece, ',')) {
    if (piece.empty()) continue;
    if (piece != "csv" && piece != "json" && piece != "svg-data")
      throw PreconditionError("unknown format: " + piece);
    out.formats.insert(piece);
  }
  if (out.formats.empty())
    throw PreconditionError("--format selected no output format");

  const json cfg = load_config(config_path);
  for (const auto& c : commands)
    if (app.get_subcommand(c.name)->parsed()) {
      try {
        c.fn(cfg, out, dump);
      } catch (const json::exception& e) {
        throw PreconditionError(std::string("config error: ") + e.what());
      }
      return 0;
    }
  return 2;  // unreachable: require_subcommand guarantees a match
}

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
