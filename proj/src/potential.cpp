#include "dprime/potential.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dprime/error.hpp"
#include "dprime/quadrature.hpp"

namespace dprime {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double base_eval(const Shape& s, double x) {
  return std::visit(
      overloaded{
          [](const shape::Zero&) { return 0.0; },
          [x](const shape::Steps& st) {
            for (const auto& piece : st.pieces)
              if (x >= piece.left && x <= piece.right) return piece.height;
            return 0.0;
          },
          [x](const shape::Table& t) {
            if (x < t.x.front() || x > t.x.back()) return 0.0;
            auto it = std::upper_bound(t.x.begin(), t.x.end(), x);
            if (it == t.x.end()) return t.v.back();
            const auto i = static_cast<std::size_t>(it - t.x.begin()) - 1;
            const double w = (x - t.x[i]) / (t.x[i + 1] - t.x[i]);
            return (1.0 - w) * t.v[i] + w * t.v[i + 1];
          },
          [x](const shape::ExpDecay& e) {
            return e.amplitude * std::exp(-e.rate * std::abs(x));
          }},
      s);
}

std::optional<Interval> base_support(const Shape& s) {
  return std::visit(
      overloaded{[](const shape::Zero&) -> std::optional<Interval> {
                   return Interval{0.0, 0.0};
                 },
                 [](const shape::Steps& st) -> std::optional<Interval> {
                   if (st.pieces.empty()) return Interval{0.0, 0.0};
                   return Interval{st.pieces.front().left, st.pieces.back().right};
                 },
                 [](const shape::Table& t) -> std::optional<Interval> {
                   return Interval{t.x.front(), t.x.back()};
                 },
                 [](const shape::ExpDecay&) -> std::optional<Interval> {
                   return std::nullopt;
                 }},
      s);
}

std::vector<double> base_breakpoints(const Shape& s) {
  return std::visit(
      overloaded{[](const shape::Zero&) { return std::vector<double>{}; },
                 [](const shape::Steps& st) {
                   std::vector<double> out;
                   for (const auto& piece : st.pieces) {
                     out.push_back(piece.left);
                     out.push_back(piece.right);
                   }
                   return out;
                 },
                 [](const shape::Table& t) { return t.x; },
                 [](const shape::ExpDecay&) { return std::vector<double>{0.0}; }},
      s);
}

double base_max_abs(const Shape& s) {
  return std::visit(
      overloaded{[](const shape::Zero&) { return 0.0; },
                 [](const shape::Steps& st) {
                   double m = 0.0;
                   for (const auto& piece : st.pieces) m = std::max(m, std::abs(piece.height));
                   return m;
                 },
                 [](const shape::Table& t) {
                   double m = 0.0;
                   for (double v : t.v) m = std::max(m, std::abs(v));
                   return m;
                 },
                 [](const shape::ExpDecay& e) { return std::abs(e.amplitude); }},
      s);
}

constexpr double kMaxCutoff = 1e15;

// Half-width beyond which the (1+|x|)|V| tail is below tol, or nullopt.
std::optional<double> tail_cutoff(const Potential& p, double tol) {
  double L = 1.0;
  while (p.tail_bound(L) > tol) {
    L *= 2.0;
    if (L > kMaxCutoff) return std::nullopt;
  }
  return L;
}

struct WeightedIntegral {
  QuadratureResult result;
  bool tail_converged = true;
};

// Integral of g over [a, b] (ends may be infinite); requires
// |g(x)| <= (1+|x|)|V(x)| so that the tail bound controls truncation.
WeightedIntegral integrate_weighted(const Potential& p,
                                    const std::function<double(double)>& g,
                                    double a, double b, double quad_tol) {
  WeightedIntegral out;
  double discarded = 0.0;
  if (const auto supp = p.support()) {
    a = std::max(a, supp->left);
    b = std::min(b, supp->right);
  } else if (std::isinf(a) || std::isinf(b)) {
    const auto L = tail_cutoff(p, quad_tol * 1e-2);
    if (!L) {
      out.tail_converged = false;
      return out;
    }
    discarded = p.tail_bound(*L);
    a = std::max(a, -*L);
    b = std::min(b, *L);
  }
  if (!(b > a)) return out;

  // 0 is where the (1+|x|) weight kinks.
  std::vector<double> nodes{a, b};
  if (a < 0.0 && 0.0 < b) nodes.push_back(0.0);
  for (double bp : p.breakpoints())
    if (bp > a && bp < b) nodes.push_back(bp);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  out.result = integrate_panels(g, nodes, quad_tol);
  out.result.error += discarded;
  return out;
}

QuadratureResult integrate_or_throw(const Potential& p,
                                    const std::function<double(double)>& g,
                                    double a, double b, double quad_tol) {
  auto r = integrate_weighted(p, g, a, b, quad_tol);
  if (!r.tail_converged)
    throw QuadratureError("potential tail does not decay below the quadrature tolerance",
                          std::numeric_limits<double>::infinity());
  return r.result;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

// ---------------------------------------------------------------------------
// Construction

Potential Potential::zero() { return Potential(shape::Zero{}); }

Potential Potential::square(double left, double right, double height) {
  return piecewise({Step{left, right, height}});
}

Potential Potential::piecewise(std::vector<Step> pieces) {
  std::sort(pieces.begin(), pieces.end(),
            [](const Step& a, const Step& b) { return a.left < b.left; });
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& s = pieces[i];
    if (!std::isfinite(s.left) || !std::isfinite(s.right) || !std::isfinite(s.height))
      throw std::invalid_argument("piecewise potential: non-finite interval or height");
    if (!(s.right > s.left))
      throw std::invalid_argument("piecewise potential: interval with right <= left");
    if (i > 0 && s.left < pieces[i - 1].right)
      throw std::invalid_argument("piecewise potential: overlapping intervals");
  }
  return Potential(shape::Steps{std::move(pieces)});
}

Potential Potential::table(std::vector<double> x, std::vector<double> v) {
  if (x.size() != v.size())
    throw std::invalid_argument("tabulated potential: x and v differ in length");
  if (x.size() < 2)
    throw std::invalid_argument("tabulated potential: need at least two samples");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(v[i]))
      throw std::invalid_argument("tabulated potential: non-finite sample");
    if (i > 0 && !(x[i] > x[i - 1]))
      throw std::invalid_argument("tabulated potential: grid must be strictly increasing");
  }
  return Potential(shape::Table{std::move(x), std::move(v)});
}

Potential Potential::exp_decay(double amplitude, double rate) {
  if (!std::isfinite(amplitude) || !(rate > 0.0) || !std::isfinite(rate))
    throw std::invalid_argument("exp_decay potential: need finite amplitude and rate > 0");
  return Potential(shape::ExpDecay{amplitude, rate});
}

Potential Potential::times(double alpha) const {
  if (!std::isfinite(alpha)) throw std::invalid_argument("coupling must be finite");
  Potential out = *this;
  out.coupling_ *= alpha;
  return out;
}

Potential Potential::scaled(double eps) const {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw std::invalid_argument("scale: eps must be positive");
  Potential out = *this;
  out.scale_ *= eps;
  if (out.half_width_) *out.half_width_ *= eps;
  return out;
}

Potential Potential::truncated(double half_width) const {
  if (!(half_width > 0.0))
    throw std::invalid_argument("truncate: half_width must be positive");
  Potential out = *this;
  out.half_width_ = half_width_ ? std::min(*half_width_, half_width) : half_width;
  return out;
}

// ---------------------------------------------------------------------------
// Queries

double Potential::operator()(double x) const {
  if (half_width_ && std::abs(x) > *half_width_) return 0.0;
  if (coupling_ == 0.0) return 0.0;
  return coupling_ / (scale_ * scale_) * base_eval(shape_, x / scale_);
}

std::optional<Interval> Potential::support() const {
  if (coupling_ == 0.0) return Interval{0.0, 0.0};
  const auto base = base_support(shape_);
  if (!base) {
    if (!half_width_) return std::nullopt;
    return Interval{-*half_width_, *half_width_};
  }
  Interval s{base->left * scale_, base->right * scale_};
  if (half_width_) {
    s.left = std::max(s.left, -*half_width_);
    s.right = std::min(s.right, *half_width_);
    if (!(s.right > s.left)) return Interval{0.0, 0.0};
  }
  return s;
}

std::vector<double> Potential::breakpoints() const {
  const auto supp = support();
  std::vector<double> out;
  for (double b : base_breakpoints(shape_)) {
    const double x = b * scale_;
    if (half_width_ && std::abs(x) > *half_width_) continue;
    out.push_back(x);
  }
  if (supp) {
    out.push_back(supp->left);
    out.push_back(supp->right);
    std::erase_if(out, [&](double x) { return x < supp->left || x > supp->right; });
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Potential::piecewise_constant() const {
  return coupling_ == 0.0 || std::holds_alternative<shape::Zero>(shape_) ||
         std::holds_alternative<shape::Steps>(shape_);
}

std::vector<Step> Potential::steps() const {
  std::vector<Step> out;
  const auto* st = std::get_if<shape::Steps>(&shape_);
  if (!st || coupling_ == 0.0) return out;
  const double factor = coupling_ / (scale_ * scale_);
  for (const auto& piece : st->pieces) {
    Step s{piece.left * scale_, piece.right * scale_, piece.height * factor};
    if (half_width_) {
      s.left = std::max(s.left, -*half_width_);
      s.right = std::min(s.right, *half_width_);
    }
    if (s.right > s.left) out.push_back(s);
  }
  return out;
}

double Potential::tail_bound(double X) const {
  X = std::abs(X);
  if (const auto supp = support()) {
    const double R = std::max(std::abs(supp->left), std::abs(supp->right));
    if (X >= R) return 0.0;
    return (1.0 + R) * 2.0 * R * std::abs(coupling_) / (scale_ * scale_) *
           base_max_abs(shape_);
  }
  // Only the exponential family has infinite support.
  const auto& e = std::get<shape::ExpDecay>(shape_);
  const double s = X / scale_;
  const double lam = e.rate;
  const double base = 2.0 * std::abs(e.amplitude) * std::exp(-lam * s) *
                      ((1.0 + s) / lam + 1.0 / (lam * lam));
  return std::abs(coupling_) / scale_ * std::max(1.0, scale_) * base;
}

// ---------------------------------------------------------------------------
// Operations

double eval(const Potential& p, double x) { return p(x); }

Potential scale(const Potential& p, double eps) { return p.scaled(eps); }

Potential truncate(const Potential& p, double half_width) {
  return p.truncated(half_width);
}

Moments moments(const Potential& p, double quad_tol) {
  Moments m;
  m.m0 = integrate_or_throw(p, [&](double x) { return p(x); }, -kInf, kInf, quad_tol).value;
  m.m1 = integrate_or_throw(p, [&](double x) { return x * p(x); }, -kInf, kInf, quad_tol)
             .value;
  return m;
}

double fm_norm(const Potential& p, double quad_tol) {
  auto r = integrate_weighted(
      p, [&](double x) { return (1.0 + std::abs(x)) * std::abs(p(x)); }, -kInf, kInf,
      quad_tol);
  if (!r.tail_converged) return kInf;
  return r.result.value;
}

TailData tails(const Potential& p, double x, double quad_tol) {
  auto abs_v = [&](double t) { return std::abs(p(t)); };
  auto weighted = [&](double t) { return (1.0 + std::abs(t)) * std::abs(p(t)); };
  TailData d;
  d.sigma_minus = integrate_or_throw(p, abs_v, -kInf, x, quad_tol).value;
  d.sigma_plus = integrate_or_throw(p, abs_v, x, kInf, quad_tol).value;
  d.tau_minus = integrate_or_throw(p, weighted, -kInf, x, quad_tol).value;
  d.tau_plus = integrate_or_throw(p, weighted, x, kInf, quad_tol).value;
  return d;
}

double two_sided_tail(const Potential& p, double x) {
  const double X = std::abs(x);
  const double bound = p.tail_bound(X);
  if (bound == 0.0) return 0.0;
  const double tol = std::max(1e-11 * bound, std::numeric_limits<double>::min());
  auto weighted = [&](double t) { return (1.0 + std::abs(t)) * std::abs(p(t)); };
  return integrate_or_throw(p, weighted, -kInf, -X, tol).value +
         integrate_or_throw(p, weighted, X, kInf, tol).value;
}

double rho_weight(const Potential& p, double x, double alpha_weight) {
  if (p.compact()) return 1.0 + x * x;
  const double tau = two_sided_tail(p, x);
  if (tau <= 0.0) return kInf;
  return (1.0 + std::abs(x)) / std::pow(tau, alpha_weight);
}

SplittingScale splitting_scale(const Potential& p, double eps, double alpha_weight) {
  if (!(eps > 0.0)) throw std::invalid_argument("splitting_scale: eps must be positive");
  if (!(alpha_weight > 0.0 && alpha_weight < 1.0))
    throw std::invalid_argument("splitting_scale: alpha_weight must lie in (0, 1)");

  const double target = 1.0 / eps;
  auto rho = [&](double x) { return rho_weight(p, x, alpha_weight); };

  const double rho0 = rho(0.0);
  if (!(rho0 < target)) {
    std::ostringstream msg;
    msg << "splitting_scale: eps = " << eps
        << " too large; a solution of rho(xi) = 1/eps exists only for eps < eps0 = "
        << 1.0 / rho0;
    throw std::invalid_argument(msg.str());
  }

  double lo = 0.0;
  double hi = 1.0;
  while (!(rho(hi) > target)) {
    lo = hi;
    hi *= 2.0;
    if (hi > kMaxCutoff) throw NumericalError("splitting_scale: no bracket for xi_eps");
  }
  for (int it = 0; it < 400 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (rho(mid) > target ? hi : lo) = mid;
  }
  SplittingScale s;
  s.epsilon = eps;
  s.xi_eps = 0.5 * (lo + hi);
  s.x_eps = eps * s.xi_eps;
  return s;
}

double tail_weight_norm(const Potential& p, double eps, double alpha_weight,
                        double quad_tol) {
  const auto s = splitting_scale(p, eps, alpha_weight);
  auto abs_v = [&](double t) { return std::abs(p(t)); };
  const double outside = integrate_or_throw(p, abs_v, -kInf, -s.xi_eps, quad_tol).value +
                         integrate_or_throw(p, abs_v, s.xi_eps, kInf, quad_tol).value;
  return outside / eps;
}

}  // namespace dprime
