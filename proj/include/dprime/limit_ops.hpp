#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dprime/jost.hpp"

namespace dprime {

/// Candidate eps -> 0 limits: the free operator on the two half-lines with a
/// Dirichlet condition at the origin, or the free operator on R \ {0} with
/// y(0+) = theta y(0-), theta y'(0+) = y'(0-).
class LimitOperator {
 public:
  enum class Kind { dirichlet, interface };

  static LimitOperator dirichlet() { return LimitOperator(Kind::dirichlet, 0.0); }
  static LimitOperator interface(double theta);

  Kind kind() const { return kind_; }
  double theta() const { return theta_; }
  std::string name() const { return kind_ == Kind::dirichlet ? "dirichlet" : "interface"; }

 private:
  LimitOperator(Kind kind, double theta) : kind_(kind), theta_(theta) {}

  Kind kind_;
  double theta_;
};

struct ConvergenceRecord {
  double eps = 0.0;
  cplx r_eps;
  cplx t_eps;
  double kernel_distance = 0.0;
  cplx limit_r;
  cplx limit_t;
  LimitOperator limit = LimitOperator::dirichlet();
};

using KernelFn = std::function<cplx(double, double)>;

/// Dirichlet-decoupled for non-resonant V, Interface(theta) otherwise.
LimitOperator classify_limit(const Potential& p, double threshold = 0.0,
                             const JostOptions& opts = {});

/// Interface: r = (1-theta^2)/(1+theta^2), t = 2 theta/(1+theta^2), independent
/// of k. Dirichlet: r = -1, t = 0; a and b are then infinite and reported as NaN.
ScatteringData limit_scattering(const LimitOperator& op, cplx k);

/// Closed-form resolvent kernel of the limit operator; requires Im k > 0.
/// x = 0 is taken from the right (0+).
cplx limit_green(const LimitOperator& op, cplx k, double x, double y);
GreenKernelSample limit_green_kernel(const LimitOperator& op, cplx k, double x, double y);

/// Midpoints of n equal cells covering [-box, box].
std::vector<double> lattice_nodes(double box, int n);

/// Sampled Hilbert-Schmidt surrogate (box^2/n^2 * sum |A - B|^2)^{1/2} over the
/// n x n lattice_nodes grid. A trend indicator, not the operator norm.
double kernel_distance(const KernelFn& a, const KernelFn& b, double box, int n);

/// Green kernel of the truncated scaled operator, precomputed on the lattice
/// nodes; other points are evaluated directly.
KernelFn truncated_kernel(const TruncatedScaledJost& tj, std::span<const double> nodes);

/// One record per eps: truncated scaled scattering data, the kernel distance to
/// the classified limit, and the limit scattering data.
std::vector<ConvergenceRecord> convergence_table(const Potential& p, cplx k,
                                                 std::span<const double> eps_list,
                                                 double box = 10.0, int n = 200,
                                                 const JostOptions& opts = {},
                                                 double threshold = 0.0,
                                                 double alpha_weight = kDefaultAlphaWeight);

}  // namespace dprime
