#pragma once

#include <functional>
#include <span>

namespace dprime {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
};

/// Integrates f over [nodes.front(), nodes.back()], one adaptive
/// Gauss-Kronrod panel per pair of consecutive nodes, so that no panel
/// straddles a node. Throws QuadratureError when the summed error estimate
/// exceeds abs_tol.
QuadratureResult integrate_panels(const std::function<double(double)>& f,
                                  std::span<const double> nodes,
                                  double abs_tol);

}  // namespace dprime
