#pragma once

#include <complex>
#include <cstddef>
#include <functional>

namespace dprime {

using cplx = std::complex<double>;

/// Value and x-derivative of a solution of -y'' + V y = k^2 y.
struct State {
  cplx value;
  cplx derivative;
};

/// Exact propagation by h across a region where V equals the constant v.
/// Valid for any complex k, including k = 0 and v = k^2.
State propagate_constant(double v, cplx k, State s, double h);

struct OdeOptions {
  double rtol = 1e-12;
  double atol = 1e-300;
  std::size_t max_steps = 20'000'000;
};

/// Adaptive Dormand-Prince 5(4) integrator for the first-order system
/// (y, y') of the Schrodinger equation. The step size carries over between
/// calls, so integrating through a dense grid does not restart cold.
class RkPropagator {
 public:
  explicit RkPropagator(OdeOptions opts = {}) : opts_(opts) {}

  /// Integrates from x0 to x1 (either direction). v must be smooth on the
  /// open interval; it is never sampled outside [x0, x1].
  State advance(const std::function<double(double)>& v, cplx k, State s, double x0,
                double x1);

  std::size_t steps() const { return accepted_ + rejected_; }

 private:
  OdeOptions opts_;
  double h_ = 0.0;
  std::size_t accepted_ = 0;
  std::size_t rejected_ = 0;
};

}  // namespace dprime
