#include "dprime/limit_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "dprime/resonance.hpp"

namespace dprime {

namespace {

constexpr cplx I{0.0, 1.0};

void require_upper_half_plane(cplx k) {
  if (!(k.imag() > 0.0)) throw std::invalid_argument("resolvent kernels require Im k > 0");
}

}  // namespace

LimitOperator LimitOperator::interface(double theta) {
  if (!(std::isfinite(theta) && theta != 0.0))
    throw std::invalid_argument("interface limit needs a finite nonzero theta");
  return LimitOperator(Kind::interface, theta);
}

LimitOperator classify_limit(const Potential& p, double threshold, const JostOptions& opts) {
  const auto rep = resonance_report(p, threshold, opts);
  if (!rep.is_resonant) return LimitOperator::dirichlet();
  return LimitOperator::interface(*rep.theta);
}

ScatteringData limit_scattering(const LimitOperator& op, cplx k) {
  if (k == cplx(0.0)) throw std::invalid_argument("limit_scattering requires k != 0");
  ScatteringData d;
  d.k = k;
  if (op.kind() == LimitOperator::Kind::dirichlet) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    d.a = d.b = cplx(nan, nan);
    d.r = -1.0;
    d.t = 0.0;
    return d;
  }
  const double th = op.theta();
  d.a = 0.5 * (1.0 / th + th);
  d.b = 0.5 * (1.0 / th - th);
  d.r = (1.0 - th * th) / (1.0 + th * th);
  d.t = 2.0 * th / (1.0 + th * th);
  return d;
}

cplx limit_green(const LimitOperator& op, cplx k, double x, double y) {
  require_upper_half_plane(k);
  if (op.kind() == LimitOperator::Kind::dirichlet) {
    if ((x >= 0.0) != (y >= 0.0)) return 0.0;
    return (std::exp(I * k * std::abs(x - y)) - std::exp(I * k * (std::abs(x) + std::abs(y)))) /
           (-2.0 * I * k);
  }
  // Jost-type solutions of the interface operator: phi_+ = e^{ikx} on x > 0,
  // phi_- = e^{-ikx} on x < 0, each continued through the interface.
  const double th = op.theta();
  const double sum = 0.5 * (th + 1.0 / th);
  auto phi_plus = [&](double s) {
    if (s >= 0.0) return std::exp(I * k * s);
    return sum * std::exp(I * k * s) + 0.5 * (1.0 / th - th) * std::exp(-I * k * s);
  };
  auto phi_minus = [&](double s) {
    if (s < 0.0) return std::exp(-I * k * s);
    return sum * std::exp(-I * k * s) + 0.5 * (th - 1.0 / th) * std::exp(I * k * s);
  };
  const cplx w = -2.0 * I * k * sum;
  return phi_plus(std::max(x, y)) * phi_minus(std::min(x, y)) / w;
}

GreenKernelSample limit_green_kernel(const LimitOperator& op, cplx k, double x, double y) {
  return {k, x, y, limit_green(op, k, x, y)};
}

std::vector<double> lattice_nodes(double box, int n) {
  if (n < 2) throw std::invalid_argument("lattice needs n >= 2");
  if (!(box > 0.0)) throw std::invalid_argument("lattice needs box > 0");
  std::vector<double> nodes(static_cast<std::size_t>(n));
  const double h = 2.0 * box / n;
  for (int i = 0; i < n; ++i) nodes[i] = -box + (i + 0.5) * h;
  return nodes;
}

double kernel_distance(const KernelFn& a, const KernelFn& b, double box, int n) {
  const auto nodes = lattice_nodes(box, n);
  double sum = 0.0;
  for (double x : nodes)
    for (double y : nodes) sum += std::norm(a(x, y) - b(x, y));
  return std::sqrt(box * box / (static_cast<double>(n) * n) * sum);
}

KernelFn truncated_kernel(const TruncatedScaledJost& tj, std::span<const double> nodes) {
  struct Table {
    TruncatedScaledJost tj;
    std::vector<double> x;  // sorted
    std::vector<cplx> plus, minus;
    cplx w;
  };
  auto t = std::make_shared<Table>(Table{tj, {}, {}, {}, tj.wronskian()});
  t->x.assign(nodes.begin(), nodes.end());
  std::sort(t->x.begin(), t->x.end());
  t->x.erase(std::unique(t->x.begin(), t->x.end()), t->x.end());
  const auto [plus, minus] = tj.sample(t->x);
  for (std::size_t i = 0; i < t->x.size(); ++i) {
    t->plus.push_back(plus[i].value);
    t->minus.push_back(minus[i].value);
  }

  return [t](double x, double y) -> cplx {
    const double hi = std::max(x, y), lo = std::min(x, y);
    auto find = [&](double v) -> std::ptrdiff_t {
      auto it = std::lower_bound(t->x.begin(), t->x.end(), v);
      if (it == t->x.end() || *it != v) return -1;
      return it - t->x.begin();
    };
    const auto ih = find(hi), il = find(lo);
    if (ih < 0 || il < 0) return t->tj.green(x, y);
    return t->plus[ih] * t->minus[il] / t->w;
  };
}

std::vector<ConvergenceRecord> convergence_table(const Potential& p, cplx k,
                                                 std::span<const double> eps_list,
                                                 double box, int n, const JostOptions& opts,
                                                 double threshold, double alpha_weight) {
  require_upper_half_plane(k);
  const LimitOperator op = classify_limit(p, threshold, opts);
  const ScatteringData lim = limit_scattering(op, k);
  const KernelFn limit_kernel = [op, k](double x, double y) { return limit_green(op, k, x, y); };
  const auto nodes = lattice_nodes(box, n);

  std::vector<ConvergenceRecord> out;
  for (double eps : eps_list) {
    if (!(eps > 0.0)) throw std::invalid_argument("convergence_table: eps must be positive");
    const TruncatedScaledJost tj(p, eps, k, opts, alpha_weight);
    const auto sd = tj.scattering();
    ConvergenceRecord rec;
    rec.eps = eps;
    rec.r_eps = sd.r;
    rec.t_eps = sd.t;
    rec.kernel_distance = kernel_distance(truncated_kernel(tj, nodes), limit_kernel, box, n);
    rec.limit_r = lim.r;
    rec.limit_t = lim.t;
    rec.limit = op;
    out.push_back(rec);
  }
  return out;
}

}  // namespace dprime
