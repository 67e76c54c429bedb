#include "dprime/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "dprime/error.hpp"

namespace dprime {

State propagate_constant(double v, cplx k, State s, double h) {
  const cplx q2 = v - k * k;
  const cplx z2 = q2 * h * h;
  cplx c;      // cosh(q h)
  cplx sinc;   // sinh(q h) / q
  if (std::abs(z2) < 1e-6) {
    c = 1.0 + z2 / 2.0 + z2 * z2 / 24.0 + z2 * z2 * z2 / 720.0;
    sinc = h * (1.0 + z2 / 6.0 + z2 * z2 / 120.0 + z2 * z2 * z2 / 5040.0);
  } else {
    const cplx q = std::sqrt(q2);
    c = std::cosh(q * h);
    sinc = std::sinh(q * h) / q;
  }
  return {c * s.value + sinc * s.derivative, q2 * sinc * s.value + c * s.derivative};
}

namespace {

using Vec = std::array<cplx, 2>;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

State RkPropagator::advance(const std::function<double(double)>& v, cplx k, State s,
                            double x0, double x1) {
  if (x0 == x1) return s;
  const double dir = x1 > x0 ? 1.0 : -1.0;
  const double span = std::abs(x1 - x0);
  const cplx k2 = k * k;
  const double w = std::max(1.0, std::abs(k));
  const double lo = std::min(x0, x1);
  const double hi = std::max(x0, x1);

  // Stage abscissae may round just past the interval; never sample across a
  // jump sitting at an endpoint.
  auto pot = [&](double x) {
    return v(std::clamp(x, std::nextafter(lo, hi), std::nextafter(hi, lo)));
  };
  auto rhs = [&](double x, const Vec& y) -> Vec {
    return {y[1], (pot(x) - k2) * y[0]};
  };

  double h = h_ > 0.0 ? h_ : std::min(span, 0.05 / w);
  Vec y{s.value, s.derivative};
  double x = x0;
  Vec k1 = rhs(x, y);

  std::size_t budget = opts_.max_steps;
  while (dir * (x1 - x) > 0.0) {
    if (budget-- == 0) throw NumericalError("ODE integration exceeded the step budget");
    const double remaining = std::abs(x1 - x);
    const bool last = h >= remaining;
    const double hs = dir * (last ? remaining : h);

    Vec t;
    auto comb = [&](std::initializer_list<std::pair<double, const Vec*>> terms) {
      Vec out = y;
      for (const auto& [a, kv] : terms)
        for (int i = 0; i < 2; ++i) out[i] += hs * a * (*kv)[i];
      return out;
    };
    const Vec k2v = rhs(x + c2 * hs, comb({{a21, &k1}}));
    const Vec k3 = rhs(x + c3 * hs, comb({{a31, &k1}, {a32, &k2v}}));
    const Vec k4 = rhs(x + c4 * hs, comb({{a41, &k1}, {a42, &k2v}, {a43, &k3}}));
    const Vec k5 =
        rhs(x + c5 * hs, comb({{a51, &k1}, {a52, &k2v}, {a53, &k3}, {a54, &k4}}));
    const Vec k6 = rhs(x + hs,
                       comb({{a61, &k1}, {a62, &k2v}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const Vec ynew =
        comb({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const double xnew = last ? x1 : x + hs;
    const Vec k7 = rhs(xnew, ynew);

    Vec err;
    for (int i = 0; i < 2; ++i)
      err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                     e7 * k7[i]);
    const double scale =
        opts_.atol + opts_.rtol * std::max({std::abs(y[0]), std::abs(y[1]) / w,
                                            std::abs(ynew[0]), std::abs(ynew[1]) / w});
    const double en = std::max(std::abs(err[0]), std::abs(err[1]) / w) / scale;

    if (!std::isfinite(en)) throw NumericalError("ODE integration produced non-finite values");
    const double factor =
        en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
    if (en <= 1.0) {
      ++accepted_;
      x = xnew;
      y = ynew;
      k1 = k7;
      // A clipped final step says nothing about the natural step size.
      if (!last || factor < 1.0) h = std::abs(hs) * factor;
    } else {
      ++rejected_;
      h = std::abs(hs) * factor;
      if (h < 1e-14 * std::max(1.0, std::abs(x))) {
        std::ostringstream msg;
        msg << "ODE step size underflow near x = " << x;
        throw NumericalError(msg.str());
      }
    }
  }
  h_ = h;
  return {y[0], y[1]};
}

}  // namespace dprime
