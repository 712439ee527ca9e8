#include "whitney/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace whitney {

using nlohmann::json;

namespace {

enum class Round { Floor, Ceil, Nearest };

Dyadic to_dyadic(const Rational& q, Round r) {
  if (auto d = Dyadic::from_rational(q)) return *d;
  switch (r) {
    case Round::Floor: return rational_floor(q, kInputBits);
    case Round::Ceil: return rational_ceil(q, kInputBits);
    default: {
      Dyadic lo = rational_floor(q, kInputBits), hi = rational_ceil(q, kInputBits);
      return (q - lo.to_rational() < hi.to_rational() - q) ? lo : hi;
    }
  }
}

DyPoint coords(const json& arr, int dim, Round r, const std::string& what) {
  if (!arr.is_array()) throw InputError(what + " must be an array");
  if (static_cast<int>(arr.size()) != dim)
    throw InputError(what + " has " + std::to_string(arr.size()) + " entries, expected " + std::to_string(dim));
  DyPoint p;
  for (const auto& v : arr) p.push_back(to_dyadic(json_rational(v), r));
  return p;
}

const json& field(const json& obj, const char* key, const std::string& what) {
  if (!obj.is_object() || !obj.contains(key)) throw InputError(what + " lacks \"" + key + "\"");
  return obj.at(key);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

Dyadic parse_dyadic_arg(const std::string& t) {
  try {
    auto d = Dyadic::from_rational(parse_rational(t));
    if (!d) throw InputError("'" + t + "' is not a dyadic rational");
    return *d;
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError("bad number '" + t + "': " + e.what());
  }
}

}  // namespace

Rational json_rational(const json& v) {
  try {
    if (v.is_number_integer()) return Rational(v.dump());
    if (v.is_number_float()) {
      const double x = v.get<double>();
      if (!std::isfinite(x)) throw InputError("non-finite number");
      int e = 0;
      const double f = std::frexp(x, &e);
      const auto m = static_cast<long long>(std::ldexp(f, 53));
      return Dyadic(BigInt(std::to_string(m)), e - 53).to_rational();
    }
    if (v.is_string()) return parse_rational(v.get<std::string>());
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& ex) {
    throw InputError("bad number " + v.dump() + ": " + ex.what());
  }
  throw InputError("expected a number, got " + v.dump());
}

Dyadic json_dyadic(const json& v) {
  auto d = Dyadic::from_rational(json_rational(v));
  if (!d) throw InputError(v.dump() + " is not a dyadic rational");
  return *d;
}

static SetSpec set_spec_unchecked(const json& doc) {
  if (!doc.is_object()) throw InputError("set document must be an object");
  SetSpec spec;
  const json& dim = field(doc, "dim", "set");
  if (!dim.is_number_integer() || dim.get<long>() < 1 || dim.get<long>() > 8)
    throw InputError("\"dim\" must be an integer in 1..8");
  spec.dim = dim.get<int>();
  const json& parts = field(doc, "parts", "set");
  if (!parts.is_array()) throw InputError("\"parts\" must be an array");
  for (const auto& pj : parts) {
    const std::string type = field(pj, "type", "part").get<std::string>();
    SetPart part;
    if (type == "point") {
      part.kind = SetPart::Kind::Point;
      part.a = coords(field(pj, "coords", "point"), spec.dim, Round::Nearest, "point coords");
    } else if (type == "box") {
      part.kind = SetPart::Kind::Box;
      part.a = coords(field(pj, "min", "box"), spec.dim, Round::Floor, "box min");
      part.b = coords(field(pj, "max", "box"), spec.dim, Round::Ceil, "box max");
    } else if (type == "ball") {
      part.kind = SetPart::Kind::Ball;
      part.a = coords(field(pj, "center", "ball"), spec.dim, Round::Nearest, "ball center");
      part.radius = to_dyadic(json_rational(field(pj, "radius", "ball")), Round::Ceil);
    } else {
      throw InputError("unknown part type '" + type + "'");
    }
    spec.parts.push_back(std::move(part));
  }
  if (doc.contains("inject_dense")) {
    for (const auto& p : doc.at("inject_dense")) spec.inject_dense.push_back(coords(p, spec.dim, Round::Nearest, "inject_dense"));
  }
  if (doc.contains("inject_complement")) {
    for (const auto& b : doc.at("inject_complement")) {
      Ball ball;
      ball.center = coords(field(b, "center", "inject_complement"), spec.dim, Round::Nearest, "ball center");
      ball.radius = to_dyadic(json_rational(field(b, "radius", "inject_complement")), Round::Ceil);
      spec.inject_complement.push_back(std::move(ball));
    }
  }
  return spec;
}

json set_spec_to_json(const SetSpec& spec) {
  auto strs = [](const DyPoint& p) {
    json a = json::array();
    for (const auto& v : p) a.push_back(rational_str(v.to_rational()));
    return a;
  };
  json parts = json::array();
  for (const auto& part : spec.parts) {
    switch (part.kind) {
      case SetPart::Kind::Point: parts.push_back({{"type", "point"}, {"coords", strs(part.a)}}); break;
      case SetPart::Kind::Box: parts.push_back({{"type", "box"}, {"min", strs(part.a)}, {"max", strs(part.b)}}); break;
      case SetPart::Kind::Ball:
        parts.push_back({{"type", "ball"}, {"center", strs(part.a)}, {"radius", rational_str(part.radius.to_rational())}});
        break;
    }
  }
  return {{"dim", spec.dim}, {"parts", parts}};
}

static JetSpec jet_spec_unchecked(const json& doc) {
  if (!doc.is_object()) throw InputError("jet document must be an object");
  JetSpec spec;
  const json& b = field(doc, "builtin", "jet");
  if (!b.is_string()) throw InputError("\"builtin\" must be a string");
  spec.builtin = b.get<std::string>();
  if (spec.builtin != "poly" && spec.builtin != "cos" && spec.builtin != "sin" && spec.builtin != "expc")
    throw InputError("unknown builtin '" + spec.builtin + "'");
  if (doc.contains("coeffs")) {
    if (!doc.at("coeffs").is_array()) throw InputError("\"coeffs\" must be an array");
    for (const auto& c : doc.at("coeffs")) spec.coeffs.push_back(json_dyadic(c));
  }
  const json& o = field(doc, "order", "jet");
  if (!o.is_number_integer() || o.get<long>() < 0) throw InputError("\"order\" must be a nonnegative integer");
  spec.order = o.get<int>();
  if (doc.contains("M")) {
    const json& M = doc.at("M");
    if (!(M.is_string() && M.get<std::string>() == "auto")) {
      const Rational q = json_rational(M);
      if (q < 0) throw InputError("\"M\" must be nonnegative");
      spec.M = to_dyadic(q, Round::Ceil);
    }
  }
  return spec;
}

json dyadic_json(const Dyadic& d) {
  return {{"mantissa", d.mantissa().get_str()}, {"exponent", d.exponent()}, {"decimal", d.decimal()}};
}

json interval_json(const DyInterval& iv) { return {{"lo", dyadic_json(iv.lo)}, {"hi", dyadic_json(iv.hi)}}; }

json cube_json(const DyadicCube& q) { return {{"level", q.level}, {"corner", q.corner}}; }

static DyadicCube cube_unchecked(const json& v) {
  DyadicCube q;
  q.level = field(v, "level", "cube").get<long>();
  q.corner = field(v, "corner", "cube").get<std::vector<long long>>();
  return q;
}

// wrong JSON types surface as InputError
template <class F>
static auto typed(F&& body) {
  try {
    return body();
  } catch (const json::exception& e) {
    throw InputError(e.what());
  }
}

SetSpec set_spec_from_json(const json& doc) {
  return typed([&] { return set_spec_unchecked(doc); });
}
JetSpec jet_spec_from_json(const json& doc) {
  return typed([&] { return jet_spec_unchecked(doc); });
}
DyadicCube cube_from_json(const json& v) {
  return typed([&] { return cube_unchecked(v); });
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

DyPoint parse_point(const std::string& text) {
  DyPoint p;
  for (const auto& t : split(text, ',')) p.push_back(parse_dyadic_arg(t));
  if (p.empty()) throw InputError("empty point");
  return p;
}

Box parse_box(const std::string& text) {
  Box b;
  for (const auto& t : split(text, ',')) {
    auto lh = split(t, ':');
    if (lh.size() != 2) throw InputError("box axis '" + t + "' must read lo:hi");
    b.lo.push_back(parse_dyadic_arg(lh[0]));
    b.hi.push_back(parse_dyadic_arg(lh[1]));
    if (b.hi.back() < b.lo.back()) throw InputError("box axis '" + t + "' has lo > hi");
  }
  if (b.lo.empty()) throw InputError("empty box");
  return b;
}

std::pair<long, long> parse_range(const std::string& text) {
  auto lh = split(text, ':');
  if (lh.size() != 2) throw InputError("range '" + text + "' must read a:b");
  try {
    size_t u = 0, v = 0;
    long a = std::stol(lh[0], &u), b = std::stol(lh[1], &v);
    if (u != lh[0].size() || v != lh[1].size()) throw InputError("range '" + text + "' is not integral");
    if (b < a) throw InputError("range '" + text + "' is empty");
    return {a, b};
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw InputError("range '" + text + "' is not integral");
  }
}

MultiIndex parse_index(const std::string& text) {
  MultiIndex k;
  for (const auto& t : split(text, ',')) {
    try {
      size_t u = 0;
      int v = std::stoi(t, &u);
      if (u != t.size() || v < 0) throw InputError("");
      k.push_back(v);
    } catch (const std::exception&) {
      throw InputError("multi-index entry '" + t + "' must be a nonnegative integer");
    }
  }
  if (k.empty()) throw InputError("empty multi-index");
  return k;
}

}  // namespace whitney
