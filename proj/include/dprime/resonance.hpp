#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dprime/jost.hpp"

namespace dprime {

/// Zero-energy diagnostics of -y'' + V y = 0.
struct ResonanceReport {
  double d0 = 0.0;  // D(0) = W{f_+(., 0), f_-(., 0)}
  bool is_resonant = false;
  std::optional<double> theta;      // mean of f_-/f_+ over the grid
  std::optional<double> theta_far;  // y(+inf) / y(-inf) of the half-bound state
  double theta_spread = 0.0;        // max relative deviation of f_-/f_+ from theta
  std::vector<double> halfbound_x;  // f_+(., 0), normalised to 1 at +inf
  std::vector<double> halfbound_y;
  double threshold = 0.0;
  /// Zero-energy values obtained from k = i delta by extrapolation
  /// (potentials without compact support).
  bool extrapolated = false;
};

/// 1e-8 (1 + fm_norm(V)).
double default_resonance_threshold(const Potential& p);

/// D(0) for compact support; the k = i delta extrapolation otherwise.
double zero_energy_wronskian(const Potential& p, const JostOptions& opts = {});

/// threshold <= 0 selects default_resonance_threshold(p). Throws
/// NumericalError when the potential looks resonant but f_-/f_+ is not
/// constant to 1e-6.
ResonanceReport resonance_report(const Potential& p, double threshold = 0.0,
                                 const JostOptions& opts = {});

struct DDotZero {
  cplx estimate;       // mean of the two directional estimates
  cplx along_imag;     // k = i delta
  cplx along_diagonal; // k = delta (1+i)/sqrt(2)
  double theta = 0.0;
  double gap = 0.0;    // |estimate + i (theta + 1/theta)|
};

/// Derivative of D at k = 0 for a resonant potential, by Richardson-combined
/// difference quotients along two directions in the upper half plane.
DDotZero d_dot_zero(const Potential& p, double delta = 1e-4, const JostOptions& opts = {});

struct CouplingRoot {
  double alpha = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double residual = 0.0;  // |D(0; alpha)|
  bool trivial = false;   // alpha = 0, the free line
};

struct CouplingSweep {
  std::vector<double> alphas;
  std::vector<double> d0;
  std::vector<CouplingRoot> roots;
  std::vector<std::string> warnings;
};

/// Samples alpha -> D(0; alpha V) on a uniform grid over (alpha_min, alpha_max]
/// and refines every sign change by bisection. alpha = 0 is reported as the
/// trivial root when alpha_min < 0 <= alpha_max.
CouplingSweep resonant_couplings(const Potential& base, double alpha_min, double alpha_max,
                                 int grid_n, double root_tol = 1e-10,
                                 const JostOptions& opts = {});

}  // namespace dprime
