#pragma once

#include "periodlab/fundcomplex.hpp"
#include "periodlab/isocrystal.hpp"
#include "periodlab/periodcoh.hpp"
#include "periodlab/polygons.hpp"

#include <json.hpp>

namespace periodlab::io {

using Json = nlohmann::ordered_json;

Rational rational_from_json(const Json& j);
Json to_json(const Rational& r);

/// [[xn, xd, yn, yd], ...]
Json to_json(const Polygon& p);
Polygon polygon_from_json(const Json& j);

/// {"n", "nvars", "slopes", "flag": [{"jump", "basis"}]}; entries of basis
/// vectors are strings in t1..tm (or t).
Json to_json(const FilteredIsocrystal& fi);
FilteredIsocrystal filtered_isocrystal_from_json(const Json& j);

/// {"n", "mu", "nu_b", "s", "galois"}; "galois" may be omitted (trivial).
Json to_json(const PeriodDatum& pd);
PeriodDatum period_datum_from_json(const Json& j);

Json to_json(const std::vector<QVector>& basis);
Json to_json(const CohomologyTable& t);
Json to_json(const DualityReport& r);

/// "{a1,a3}" or "1,3" or "" -> mask; parse errors are Error(parse_error).
RootMask root_mask_from_string(const std::string& text);

} // namespace periodlab::io
