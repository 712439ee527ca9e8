#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "whitney/cubes.hpp"
#include "whitney/jet.hpp"

namespace whitney {

// Raised on malformed input documents or arguments.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fractional bits used when non-dyadic set data is rounded.
inline constexpr long kInputBits = 64;

// Number given as a JSON integer, a JSON float (taken exactly), or a string
// accepted by parse_rational.
Rational json_rational(const nlohmann::json& v);
// Same, but the value must be dyadic.
Dyadic json_dyadic(const nlohmann::json& v);

// {"dim":n,"parts":[{"type":"point","coords":[...]},
//                   {"type":"box","min":[...],"max":[...]},
//                   {"type":"ball","center":[...],"radius":"p/q"}],
//  "inject_dense":[[...]], "inject_complement":[{"center":[...],"radius":...}]}
// Non-dyadic data is rounded to kInputBits fractional bits: box corners and
// radii outward, point coordinates to nearest.
SetSpec set_spec_from_json(const nlohmann::json& doc);
nlohmann::json set_spec_to_json(const SetSpec& spec);

// {"builtin":"poly|cos|sin|expc","coeffs":[...],"order":m,"M":"rational|auto"}
// A rational M is rounded up to kInputBits fractional bits.
JetSpec jet_spec_from_json(const nlohmann::json& doc);

nlohmann::json dyadic_json(const Dyadic& d);  // {"mantissa","exponent","decimal"}
nlohmann::json interval_json(const DyInterval& iv);
nlohmann::json cube_json(const DyadicCube& q);
DyadicCube cube_from_json(const nlohmann::json& v);

nlohmann::json read_json_file(const std::string& path);

// Command-line forms:
//   point  "x1,x2,..."            (dyadic entries)
//   box    "lo1:hi1,lo2:hi2,..."
//   range  "a:b"                  (integers)
//   index  "k1,k2,..."
DyPoint parse_point(const std::string& text);
Box parse_box(const std::string& text);
std::pair<long, long> parse_range(const std::string& text);
MultiIndex parse_index(const std::string& text);

}  // namespace whitney
