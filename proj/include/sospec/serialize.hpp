#pragma once

#include <span>
#include <string>
#include <vector>

#include "sospec/enclosure.hpp"
#include "sospec/pencil.hpp"
#include "sospec/types.hpp"

namespace sospec {

// Shortest deterministic decimal form that round-trips a double.
std::string format_double(double v);

// Pencil JSON: {"n": n, "m0": [...], "m1": [...], "m2": [...]} with matrices
// row major; entries are plain numbers for real pencils and [re, im] pairs
// otherwise. The reader accepts both entry forms in any matrix.
std::string pencil_to_json(const PencilTriple& p);
PencilTriple pencil_from_json(const std::string& text);

// CSV schema: re,im,alg_mult,geom_mult; rows in spectrum order.
std::string spectrum_to_csv(const SecondOrderSpectrum& s);
std::string spectrum_to_json(const SecondOrderSpectrum& s);

// CSV schema: eig_label,source,lo,hi,re,im. Interval endpoints are rounded
// one ulp outward on emission; re,im echo the source point.
std::string enclosures_to_csv(std::span<const EnclosureRow> rows);
std::string enclosures_to_json(std::span<const EnclosureRow> rows);

// Gap list JSON: [{"a": number|"-inf", "b": number|"+inf"}, ...].
std::vector<GapInterval> gaps_from_json_text(const std::string& text);

}  // namespace sospec
