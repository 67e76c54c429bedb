#pragma once

#include <span>
#include <utility>
#include <vector>

#include "dprime/ode.hpp"
#include "dprime/potential.hpp"

namespace dprime {

enum class Side {
  right,  // f_+ ~ e^{ikx} as x -> +inf
  left,   // f_- ~ e^{-ikx} as x -> -inf
};

enum class Method {
  automatic,        // exact propagation for piecewise-constant V, else Runge-Kutta
  runge_kutta,      // adaptive Dormand-Prince everywhere inside the support
  transfer_matrix,  // exact propagation; piecewise-constant V only
};

struct JostOptions {
  /// Anchor rule: the plane-wave condition is imposed where the
  /// Faddeev-Marchenko tail beyond the anchor drops below tol.
  double tol = 1e-10;
  double quad_tol = kDefaultQuadTol;
  OdeOptions ode{};
  Method method = Method::automatic;
};

struct JostSolution {
  Side side = Side::right;
  cplx k;
  std::vector<double> grid;
  std::vector<cplx> values;
  std::vector<cplx> derivatives;
  double anchor = 0.0;
  /// Absolute bound: (tail beyond anchor + integrator tolerance) * max |value|.
  double error_bound = 0.0;
};

struct WronskianResult {
  cplx value;               // at the common grid point closest to the middle
  double at = 0.0;
  double max_rel_variation = 0.0;  // constancy diagnostic over all common points
};

struct ScatteringData {
  cplx k;
  cplx a;  // f_+ = a e^{ikx} + b e^{-ikx} left of the potential
  cplx b;
  cplx r;  // b / a
  cplx t;  // 1 / a
  /// |a - D(k)/(-2ik)| / |a| with D computed independently at an interior point.
  double consistency_gap = 0.0;
};

struct GreenKernelSample {
  cplx k;
  double x = 0.0;
  double y = 0.0;
  cplx value;
};

/// Point where the right (left) Jost solution is anchored: the support edge
/// for compactly supported V, otherwise the smallest (largest) x with
/// tau_+(x) < tol (tau_-(x) < tol), located by bisection.
double jost_anchor(const Potential& p, Side side, const JostOptions& opts = {});

/// Uniform 2001-point grid on [-L, L], L = max(5, 2 max|anchor|).
std::vector<double> default_grid(const Potential& p, const JostOptions& opts = {});

/// Jost solution on an arbitrary grid. k = 0 is accepted only for compactly
/// supported potentials; Im k < 0 is rejected.
JostSolution jost_solution(const Potential& p, Side side, cplx k,
                           std::span<const double> grid, const JostOptions& opts = {});

inline JostSolution jost_right(const Potential& p, cplx k, std::span<const double> grid,
                               const JostOptions& opts = {}) {
  return jost_solution(p, Side::right, k, grid, opts);
}

inline JostSolution jost_left(const Potential& p, cplx k, std::span<const double> grid,
                              const JostOptions& opts = {}) {
  return jost_solution(p, Side::left, k, grid, opts);
}

/// Value and derivative of f_+ or f_- at a single point.
State jost_at(const Potential& p, Side side, cplx k, double x, const JostOptions& opts = {});

/// Wronskian f_+ f_-' - f_+' f_- over the grid points the two solutions share.
WronskianResult wronskian(const JostSolution& fp, const JostSolution& fm);

/// D(k) = W{f_+, f_-}, evaluated at the middle of the support (or 0).
cplx jost_function(const Potential& p, cplx k, const JostOptions& opts = {});

/// Full-line scattering coefficients at k != 0.
ScatteringData scattering(const Potential& p, cplx k, const JostOptions& opts = {});

/// (scattering(scale(p, eps), k), scattering(p, eps k)); the two agree in
/// (r, t) by dilation covariance.
std::pair<ScatteringData, ScatteringData> scaled_scattering_identity(
    const Potential& p, double eps, cplx k, const JostOptions& opts = {});

/// Jost solutions of the operator with potential eps^-2 V(x/eps) cut to
/// [-x_eps, x_eps], assembled from the unit-scale Jost solutions f_+-(., eps k)
/// in the window and plane waves outside it.
class TruncatedScaledJost {
 public:
  TruncatedScaledJost(const Potential& unit, double eps, cplx k, const JostOptions& opts = {},
                      double alpha_weight = kDefaultAlphaWeight);

  double eps() const { return eps_; }
  double xi() const { return xi_; }
  double x_eps() const { return x_eps_; }
  cplx k() const { return k_; }

  /// f~_+ = c+ f_+(x/eps, eps k) + c- f_-(x/eps, eps k) inside the window.
  cplx c_plus() const { return c_plus_; }
  cplx c_minus() const { return c_minus_; }
  /// f~_+ = a+ e^{ikx} + b+ e^{-ikx} left of the window.
  cplx a_plus() const { return a_plus_; }
  cplx b_plus() const { return b_plus_; }
  /// Mirror coefficients of f~_-: d+- inside, a-/b- right of the window.
  cplx d_plus() const { return d_plus_; }
  cplx d_minus() const { return d_minus_; }
  cplx a_minus() const { return a_minus_; }
  cplx b_minus() const { return b_minus_; }
  /// D(eps k) of the unit-scale potential.
  cplx unit_wronskian() const { return unit_d_; }
  /// Wronskian of f~_+ and f~_-, equal to -2ik a+.
  cplx wronskian() const { return -2.0 * cplx(0, 1) * k_ * a_plus_; }

  State plus_at(double x) const;
  State minus_at(double x) const;

  /// f~_+ and f~_- at every point of xs, with one integration pass for the
  /// points inside the window.
  std::pair<std::vector<State>, std::vector<State>> sample(std::span<const double> xs) const;

  /// f~_+ f~_-' - f~_+' f~_- evaluated at x.
  cplx wronskian_at(double x) const;

  /// Green kernel f~_+(max) f~_-(min) / D~.
  cplx green(double x, double y) const;

  ScatteringData scattering() const;

 private:
  Potential unit_;
  JostOptions opts_;
  double eps_;
  double xi_;
  double x_eps_;
  cplx k_;
  cplx c_plus_, c_minus_, a_plus_, b_plus_;
  cplx d_plus_, d_minus_, a_minus_, b_minus_;
  cplx unit_d_;
};

struct TruncatedJostCoefficients {
  cplx c_plus, c_minus, a_plus, b_plus;
};

TruncatedJostCoefficients truncated_scaled_jost(const Potential& p, double eps, cplx k,
                                                const JostOptions& opts = {},
                                                double alpha_weight = kDefaultAlphaWeight);

ScatteringData truncated_scaled_scattering(const Potential& p, double eps, cplx k,
                                           const JostOptions& opts = {},
                                           double alpha_weight = kDefaultAlphaWeight);

/// Requires Im k > 0.
GreenKernelSample truncated_green_kernel(const Potential& p, double eps, cplx k, double x,
                                         double y, const JostOptions& opts = {},
                                         double alpha_weight = kDefaultAlphaWeight);

}  // namespace dprime
