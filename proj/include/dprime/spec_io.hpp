#pragma once

#include <string_view>

#include "dprime/potential.hpp"

namespace dprime {

/// Parses a potential specification:
///
///   {"kind": "square" | "piecewise" | "table" | "exp_decay" | "zero",
///    "params": {...}, "coupling": number}
///
/// square:    {"left": l, "right": r, "height": h}
/// piecewise: [{"left": l, "right": r, "height": h}, ...]
/// table:     {"x": [...], "v": [...]}
/// exp_decay: {"amplitude": A, "rate": lambda}  (A e^{-lambda |x|})
///
/// Throws SpecError on malformed input.
Potential parse_potential_spec(std::string_view json_text);

}  // namespace dprime
