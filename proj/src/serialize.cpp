#include "sospec/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

namespace sospec {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

json matrix_to_json(const Matrix& m, bool real) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      if (real)
        rows.push_back(m(i, j).real());
      else
        rows.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    }
  return rows;
}

Matrix matrix_from_json(const json& data, Index n, const char* name) {
  if (!data.is_array() || static_cast<Index>(data.size()) != n * n)
    throw PreconditionError(std::string("pencil json: ") + name +
                            " must hold n*n entries");
  Matrix m(n, n);
  Index flat = 0;
  for (const auto& entry : data) {
    const Index i = flat / n, j = flat % n;
    ++flat;
    if (entry.is_number()) {
      m(i, j) = Complex(entry.get<double>(), 0.0);
    } else if (entry.is_array() && entry.size() == 2 && entry[0].is_number() &&
               entry[1].is_number()) {
      m(i, j) = Complex(entry[0].get<double>(), entry[1].get<double>());
    } else {
      throw PreconditionError(std::string("pencil json: entry of ") + name +
                              " must be a number or an [re, im] pair");
    }
  }
  return m;
}

}  // namespace

std::string pencil_to_json(const PencilTriple& p) {
  const bool real = p.is_real();
  json out;
  out["n"] = p.n();
  out["m0"] = matrix_to_json(p.m0, real);
  out["m1"] = matrix_to_json(p.m1, real);
  out["m2"] = matrix_to_json(p.m2, real);
  return out.dump();
}

PencilTriple pencil_from_json(const std::string& text) {
  json data;
  try {
    data = json::parse(text);
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("pencil json: parse error: ") + e.what());
  }
  if (!data.is_object() || !data.contains("n") || !data["n"].is_number_integer())
    throw PreconditionError("pencil json: missing integer field n");
  const Index n = data["n"].get<Index>();
  if (n < 1) throw PreconditionError("pencil json: n must be >= 1");
  PencilTriple p;
  for (const char* key : {"m0", "m1", "m2"})
    if (!data.contains(key))
      throw PreconditionError(std::string("pencil json: missing field ") + key);
  p.m0 = matrix_from_json(data["m0"], n, "m0");
  p.m1 = matrix_from_json(data["m1"], n, "m1");
  p.m2 = matrix_from_json(data["m2"], n, "m2");
  return p;
}

std::string spectrum_to_csv(const SecondOrderSpectrum& s) {
  std::string out = "re,im,alg_mult,geom_mult\n";
  for (const auto& p : s.points) {
    out += format_double(p.value.real());
    out += ',';
    out += format_double(p.value.imag());
    out += ',';
    out += std::to_string(p.algebraic_mult);
    out += ',';
    out += std::to_string(p.geometric_mult);
    out += '\n';
  }
  return out;
}

std::string spectrum_to_json(const SecondOrderSpectrum& s) {
  json pts = json::array();
  for (const auto& p : s.points)
    pts.push_back({{"re", p.value.real()},
                   {"im", p.value.imag()},
                   {"alg_mult", p.algebraic_mult},
                   {"geom_mult", p.geometric_mult}});
  json out;
  out["points"] = pts;
  out["cluster_tol"] = s.cluster_tol;
  out["scale"] = s.scale;
  return out.dump();
}

namespace {

const char* source_name(EnclosureInterval::Source s) {
  return s == EnclosureInterval::Source::residual ? "residual" : "improved";
}

}  // namespace

std::string enclosures_to_csv(std::span<const EnclosureRow> rows) {
  std::string out = "eig_label,source,lo,hi,re,im\n";
  for (const auto& row : rows) {
    const EnclosureInterval iv = row.interval.outward();
    out += std::to_string(row.label);
    out += ',';
    out += source_name(iv.source);
    out += ',';
    out += format_double(iv.lo);
    out += ',';
    out += format_double(iv.hi);
    out += ',';
    out += format_double(iv.point.real());
    out += ',';
    out += format_double(iv.point.imag());
    out += '\n';
  }
  return out;
}

std::string enclosures_to_json(std::span<const EnclosureRow> rows) {
  json arr = json::array();
  for (const auto& row : rows) {
    const EnclosureInterval iv = row.interval.outward();
    arr.push_back({{"eig_label", row.label},
                   {"source", source_name(iv.source)},
                   {"lo", iv.lo},
                   {"hi", iv.hi},
                   {"re", iv.point.real()},
                   {"im", iv.point.imag()}});
  }
  return arr.dump();
}

std::vector<GapInterval> gaps_from_json_text(const std::string& text) {
  json data;
  try {
    data = json::parse(text);
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("gaps json: parse error: ") + e.what());
  }
  if (!data.is_array()) throw PreconditionError("gaps json: expected an array");
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<GapInterval> out;
  for (const auto& g : data) {
    if (!g.is_object() || !g.contains("a") || !g.contains("b"))
      throw PreconditionError("gaps json: each gap needs fields a and b");
    GapInterval gap;
    if (g["a"].is_number())
      gap.a = g["a"].get<double>();
    else if (g["a"].is_string() && g["a"].get<std::string>() == "-inf")
      gap.a = -inf;
    else
      throw PreconditionError("gaps json: a must be a number or \"-inf\"");
    if (g["b"].is_number())
      gap.b = g["b"].get<double>();
    else if (g["b"].is_string() && g["b"].get<std::string>() == "+inf")
      gap.b = inf;
    else
      throw PreconditionError("gaps json: b must be a number or \"+inf\"");
    if (gap.a_finite() && gap.b_finite() && !(gap.a < gap.b))
      throw PreconditionError("gaps json: need a < b");
    out.push_back(gap);
  }
  return out;
}

}  // namespace sospec
