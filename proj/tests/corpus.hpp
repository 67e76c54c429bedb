#pragma once

#include <numbers>
#include <string>
#include <vector>

#include "dprime/potential.hpp"

namespace corpus {

struct Entry {
  std::string name;
  dprime::Potential potential;
};

inline constexpr double half_pi_sq = std::numbers::pi * std::numbers::pi / 4.0;

// Barrier, wells at three depths, a two-step profile and a tabulated bump.
inline std::vector<Entry> real_line() {
  using dprime::Potential;
  return {
      {"barrier", Potential::square(-1.0, 1.0, 1.0)},
      {"shallow well", Potential::square(-1.0, 1.0, -1.0)},
      {"resonant well", Potential::square(-1.0, 1.0, -half_pi_sq)},
      {"deep well", Potential::square(-1.0, 1.0, -7.0)},
      {"two steps", Potential::piecewise({{-1.5, 0.0, 2.0}, {0.0, 0.5, -3.0}})},
      {"tabulated", Potential::table({-1.0, -0.3, 0.4, 1.2}, {0.0, 1.5, -0.8, 0.0})},
  };
}

}  // namespace corpus
