#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "whitney/extend.hpp"

namespace whitney {

// Invariant suites run by `whitney check`.
struct CheckItem {
  std::string name;
  bool pass = true;
  long checked = 0;
  std::string counterexample;
};

struct CheckReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckItem> items;
  bool pass() const;
  nlohmann::json to_json() const;
};

struct CheckConfig {
  std::string suite = "all";  // cubes | partition | extend | all
  SetSpec set;
  std::optional<JetSpec> jet;   // default: identity of x_1, order 1
  std::optional<Box> region;    // default: hull of F widened by 1, or [-4,4]^n
  std::uint64_t seed = 42;
  Dyadic eps = Dyadic(1, -3);
};

// Throws std::invalid_argument for an unknown suite or a bad set.
CheckReport run_check(const CheckConfig& cfg);

// Seeded dyadic point, uniform on the 2^-bits grid of the box.
DyPoint random_point(std::mt19937_64& rng, const Box& box, int bits = 16);

}  // namespace whitney
