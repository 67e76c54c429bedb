#include "dprime/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <sstream>

#include "dprime/error.hpp"

namespace dprime {

namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;

constexpr int kMaxDepth = 40;

// Bisects until the Kronrod-Gauss difference meets a tolerance proportional
// to the panel width. Differences at rounding level always pass.
void adapt(const std::function<double(double)>& f, double a, double b, double tol, int depth,
           QuadratureResult& acc) {
  double err = 0.0, l1 = 0.0;
  const double v = Rule::integrate(f, a, b, 0, 0.0, &err, &l1);
  // The single-panel rule reports its error on the reference interval [-1, 1].
  err *= 0.5 * (b - a);
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * l1;
  if (err <= tol || err <= noise || depth >= kMaxDepth) {
    acc.value += v;
    acc.error += err <= noise ? 0.0 : err;
    return;
  }
  const double m = 0.5 * (a + b);
  if (!(m > a && m < b)) {
    acc.value += v;
    acc.error += err;
    return;
  }
  adapt(f, a, m, 0.5 * tol, depth + 1, acc);
  adapt(f, m, b, 0.5 * tol, depth + 1, acc);
}

}  // namespace

QuadratureResult integrate_panels(const std::function<double(double)>& f,
                                  std::span<const double> nodes,
                                  double abs_tol) {
  QuadratureResult total;
  if (nodes.size() < 2) return total;
  const double span = nodes.back() - nodes.front();
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double a = nodes[i];
    const double b = nodes[i + 1];
    if (!(b > a)) continue;
    adapt(f, a, b, abs_tol * (b - a) / span, 0, total);
  }
  if (!(total.error <= abs_tol)) {
    std::ostringstream msg;
    msg << "quadrature did not converge: achieved " << total.error
        << ", requested " << abs_tol;
    throw QuadratureError(msg.str(), total.error);
  }
  return total;
}

}  // namespace dprime
