#include "dprime/jost.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "dprime/error.hpp"

namespace dprime {

namespace {

constexpr cplx I{0.0, 1.0};

void check_wavenumber(cplx k) {
  if (!std::isfinite(k.real()) || !std::isfinite(k.imag()))
    throw std::invalid_argument("wave number must be finite");
  if (k.imag() < 0.0) throw std::invalid_argument("wave number must satisfy Im k >= 0");
}

// Carries a solution across the line, splitting the path at every breakpoint
// of V so that no integration step straddles a jump.
class PathPropagator {
 public:
  PathPropagator(const Potential& p, cplx k, const JostOptions& opts)
      : p_(p), k_(k), rk_(opts.ode), support_(p.support()), breaks_(p.breakpoints()) {
    exact_ = p.piecewise_constant() && opts.method != Method::runge_kutta;
    if (opts.method == Method::transfer_matrix && !p.piecewise_constant())
      throw std::invalid_argument(
          "transfer-matrix propagation requires a piecewise-constant potential");
  }

  State advance(State s, double x0, double x1) {
    if (x0 == x1) return s;
    std::vector<double> cuts{x0};
    const double lo = std::min(x0, x1), hi = std::max(x0, x1);
    for (double b : breaks_)
      if (b > lo && b < hi) cuts.push_back(b);
    if (x1 > x0)
      std::sort(cuts.begin(), cuts.end());
    else
      std::sort(cuts.begin(), cuts.end(), std::greater<>());
    cuts.push_back(x1);

    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double a = cuts[i], b = cuts[i + 1];
      const double mid = 0.5 * (a + b);
      if (support_ && (mid < support_->left || mid > support_->right)) {
        s = propagate_constant(0.0, k_, s, b - a);
      } else if (exact_) {
        s = propagate_constant(p_(mid), k_, s, b - a);
      } else {
        s = rk_.advance([this](double x) { return p_(x); }, k_, s, a, b);
      }
    }
    return s;
  }

 private:
  const Potential& p_;
  cplx k_;
  RkPropagator rk_;
  std::optional<Interval> support_;
  std::vector<double> breaks_;
  bool exact_ = false;
};

double one_sided_tail(const Potential& p, Side side, double x, double quad_tol) {
  const auto t = tails(p, x, quad_tol);
  return side == Side::right ? t.tau_plus : t.tau_minus;
}

State plane_wave(Side side, cplx k, double x) {
  if (side == Side::right) {
    const cplx e = std::exp(I * k * x);
    return {e, I * k * e};
  }
  const cplx e = std::exp(-I * k * x);
  return {e, -I * k * e};
}

}  // namespace

double jost_anchor(const Potential& p, Side side, const JostOptions& opts) {
  if (const auto supp = p.support()) return side == Side::right ? supp->right : supp->left;

  // Work with the outward coordinate u, so that the tail beyond u decreases in u.
  const double sgn = side == Side::right ? 1.0 : -1.0;
  auto tail = [&](double u) { return one_sided_tail(p, side, sgn * u, opts.quad_tol); };

  double lo = 0.0, hi = 1.0;
  if (tail(hi) < opts.tol) {
    double step = 1.0;
    lo = hi - step;
    while (tail(lo) < opts.tol) {
      hi = lo;
      step *= 2.0;
      lo -= step;
      if (step > 1e15) throw NumericalError("anchor search: tail vanishes everywhere");
    }
  } else {
    while (!(tail(hi) < opts.tol)) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e15) {
        std::ostringstream msg;
        msg << "anchor search failed: tail still " << tail(lo) << " at x = " << sgn * lo
            << ", requested " << opts.tol;
        throw NumericalError(msg.str());
      }
    }
  }
  while (hi - lo > 1e-3 * std::max(1.0, std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    (tail(mid) < opts.tol ? hi : lo) = mid;
  }
  return sgn * hi;
}

std::vector<double> default_grid(const Potential& p, const JostOptions& opts) {
  const double reach = std::max(std::abs(jost_anchor(p, Side::right, opts)),
                                std::abs(jost_anchor(p, Side::left, opts)));
  const double L = std::max(5.0, 2.0 * reach);
  constexpr int n = 2001;
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = -L + 2.0 * L * i / (n - 1);
  grid[(n - 1) / 2] = 0.0;
  return grid;
}

JostSolution jost_solution(const Potential& p, Side side, cplx k,
                           std::span<const double> grid, const JostOptions& opts) {
  check_wavenumber(k);
  if (k == cplx(0.0) && !p.compact())
    throw std::invalid_argument(
        "k = 0 Jost solutions are only available for compactly supported potentials");
  if (grid.empty()) throw std::invalid_argument("Jost solution needs a nonempty grid");
  for (double x : grid)
    if (!std::isfinite(x)) throw std::invalid_argument("grid points must be finite");

  JostSolution sol;
  sol.side = side;
  sol.k = k;
  sol.grid.assign(grid.begin(), grid.end());
  sol.values.resize(grid.size());
  sol.derivatives.resize(grid.size());
  sol.anchor = jost_anchor(p, side, opts);

  const double X = sol.anchor;
  const State at_anchor = plane_wave(side, k, X);
  // Outward: beyond the anchor, where the plane wave is (nearly) exact.
  auto outward = [&](double x) { return side == Side::right ? x > X : x < X; };

  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    // Walk away from the anchor in both directions.
    return std::abs(grid[a] - X) < std::abs(grid[b] - X);
  });

  PathPropagator inward_path(p, k, opts);
  PathPropagator outward_path(p, k, opts);
  State in_state = at_anchor, out_state = at_anchor;
  double in_x = X, out_x = X;
  for (std::size_t idx : order) {
    const double x = grid[idx];
    State s;
    if (outward(x)) {
      if (p.compact()) {
        s = plane_wave(side, k, x);
      } else {
        out_state = outward_path.advance(out_state, out_x, x);
        out_x = x;
        s = out_state;
      }
    } else {
      in_state = inward_path.advance(in_state, in_x, x);
      in_x = x;
      s = in_state;
    }
    sol.values[idx] = s.value;
    sol.derivatives[idx] = s.derivative;
  }

  double vmax = 0.0;
  for (const auto& v : sol.values) vmax = std::max(vmax, std::abs(v));
  const double tail = p.compact() ? 0.0 : one_sided_tail(p, side, X, opts.quad_tol);
  sol.error_bound = vmax * (tail + 10.0 * opts.ode.rtol);
  return sol;
}

State jost_at(const Potential& p, Side side, cplx k, double x, const JostOptions& opts) {
  const double g[1] = {x};
  const auto sol = jost_solution(p, side, k, g, opts);
  return {sol.values[0], sol.derivatives[0]};
}

WronskianResult wronskian(const JostSolution& fp, const JostSolution& fm) {
  if (fp.k != fm.k) throw std::invalid_argument("wronskian: solutions at different k");

  auto sorted_index = [](const JostSolution& s) {
    std::vector<std::size_t> idx(s.grid.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return s.grid[a] < s.grid[b]; });
    return idx;
  };
  const auto ip = sorted_index(fp), im = sorted_index(fm);

  struct Sample {
    double x;
    cplx w;
    double magnitude;
  };
  std::vector<Sample> common;
  for (std::size_t i = 0, j = 0; i < ip.size() && j < im.size();) {
    const double xp = fp.grid[ip[i]], xm = fm.grid[im[j]];
    if (xp < xm) {
      ++i;
    } else if (xm < xp) {
      ++j;
    } else {
      const cplx a = fp.values[ip[i]] * fm.derivatives[im[j]];
      const cplx b = fp.derivatives[ip[i]] * fm.values[im[j]];
      common.push_back({xp, a - b, std::abs(a) + std::abs(b)});
      ++i;
      ++j;
    }
  }
  if (common.empty()) throw std::invalid_argument("wronskian: no common grid point");

  const Sample& ref = common[common.size() / 2];
  WronskianResult out;
  out.value = ref.w;
  out.at = ref.x;
  // Relative to the size of the two products, so that a vanishing Wronskian
  // (zero-energy resonance) still gets a meaningful constancy measure.
  for (const auto& s : common) {
    const double denom = std::max({std::abs(ref.w), s.magnitude, ref.magnitude});
    if (denom > 0.0)
      out.max_rel_variation = std::max(out.max_rel_variation, std::abs(s.w - ref.w) / denom);
  }
  return out;
}

cplx jost_function(const Potential& p, cplx k, const JostOptions& opts) {
  double xc = 0.0;
  if (const auto supp = p.support()) xc = 0.5 * (supp->left + supp->right);
  const State fp = jost_at(p, Side::right, k, xc, opts);
  const State fm = jost_at(p, Side::left, k, xc, opts);
  return fp.value * fm.derivative - fp.derivative * fm.value;
}

ScatteringData scattering(const Potential& p, cplx k, const JostOptions& opts) {
  check_wavenumber(k);
  if (k == cplx(0.0)) throw std::invalid_argument("scattering requires k != 0");

  const double xl = jost_anchor(p, Side::left, opts);
  const State f = jost_at(p, Side::right, k, xl, opts);

  ScatteringData d;
  d.k = k;
  d.a = (I * k * f.value + f.derivative) * std::exp(-I * k * xl) / (2.0 * I * k);
  d.b = (I * k * f.value - f.derivative) * std::exp(I * k * xl) / (2.0 * I * k);
  if (std::abs(d.a) < 1e-12) {
    std::ostringstream msg;
    msg << "scattering: a(k) vanishes at k = " << k
        << "; use a wave number off the real axis";
    throw NumericalError(msg.str());
  }
  d.r = d.b / d.a;
  d.t = 1.0 / d.a;
  const cplx from_d = jost_function(p, k, opts) / (-2.0 * I * k);
  d.consistency_gap = std::abs(d.a - from_d) / std::abs(d.a);
  return d;
}

std::pair<ScatteringData, ScatteringData> scaled_scattering_identity(
    const Potential& p, double eps, cplx k, const JostOptions& opts) {
  return {scattering(scale(p, eps), k, opts), scattering(p, eps * k, opts)};
}

// ---------------------------------------------------------------------------
// Truncated scaled operator

TruncatedScaledJost::TruncatedScaledJost(const Potential& unit, double eps, cplx k,
                                         const JostOptions& opts, double alpha_weight)
    : unit_(unit), opts_(opts), eps_(eps), k_(k) {
  check_wavenumber(k);
  if (k == cplx(0.0)) throw std::invalid_argument("truncated_scaled_jost requires k != 0");
  const auto split = splitting_scale(unit, eps, alpha_weight);
  xi_ = split.xi_eps;
  x_eps_ = split.x_eps;

  const cplx ke = eps * k;
  const double pts[2] = {-xi_, xi_};
  const auto fp = jost_solution(unit, Side::right, ke, pts, opts);
  const auto fm = jost_solution(unit, Side::left, ke, pts, opts);
  // Index 0 is -xi, index 1 is +xi.
  const cplx fp_n = fp.values[0], dfp_n = fp.derivatives[0];
  const cplx fp_p = fp.values[1], dfp_p = fp.derivatives[1];
  const cplx fm_n = fm.values[0], dfm_n = fm.derivatives[0];
  const cplx fm_p = fm.values[1], dfm_p = fm.derivatives[1];

  unit_d_ = fp_p * dfm_p - dfp_p * fm_p;
  const double scale = std::abs(fp_p * dfm_p) + std::abs(dfp_p * fm_p);
  if (!(std::abs(unit_d_) > 1e-13 * scale)) {
    std::ostringstream msg;
    msg << "truncated_scaled_jost: D(eps k) vanishes at eps k = " << ke
        << " (would be a nonreal eigenvalue)";
    throw NumericalError(msg.str());
  }

  const cplx e = std::exp(I * k * x_eps_);
  const cplx e_inv = std::exp(-I * k * x_eps_);
  const cplx iek = I * eps * k;

  // Continuity of f~_+ at +x_eps.
  c_plus_ = e / unit_d_ * (dfm_p - iek * fm_p);
  c_minus_ = e / unit_d_ * (iek * fp_p - dfp_p);
  const cplx v_left = c_plus_ * fp_n + c_minus_ * fm_n;
  const cplx dv_left = (c_plus_ * dfp_n + c_minus_ * dfm_n) / eps;
  a_plus_ = e / (2.0 * I * k) * (I * k * v_left + dv_left);
  b_plus_ = e_inv / (2.0 * I * k) * (I * k * v_left - dv_left);

  // Mirror construction for f~_-, matched at -x_eps.
  d_plus_ = e / unit_d_ * (dfm_n + iek * fm_n);
  d_minus_ = -e / unit_d_ * (iek * fp_n + dfp_n);
  const cplx v_right = d_plus_ * fp_p + d_minus_ * fm_p;
  const cplx dv_right = (d_plus_ * dfp_p + d_minus_ * dfm_p) / eps;
  a_minus_ = e / (2.0 * I * k) * (I * k * v_right - dv_right);
  b_minus_ = e_inv / (2.0 * I * k) * (I * k * v_right + dv_right);
}

std::pair<std::vector<State>, std::vector<State>> TruncatedScaledJost::sample(
    std::span<const double> xs) const {
  std::vector<State> plus(xs.size()), minus(xs.size());
  std::vector<double> inner;
  std::vector<std::size_t> inner_idx;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    if (x >= x_eps_) {
      const cplx ep = std::exp(I * k_ * x), em = std::exp(-I * k_ * x);
      plus[i] = {ep, I * k_ * ep};
      minus[i] = {a_minus_ * em + b_minus_ * ep, I * k_ * (b_minus_ * ep - a_minus_ * em)};
    } else if (x <= -x_eps_) {
      const cplx ep = std::exp(I * k_ * x), em = std::exp(-I * k_ * x);
      plus[i] = {a_plus_ * ep + b_plus_ * em, I * k_ * (a_plus_ * ep - b_plus_ * em)};
      minus[i] = {em, -I * k_ * em};
    } else {
      inner.push_back(x / eps_);
      inner_idx.push_back(i);
    }
  }
  if (!inner.empty()) {
    const cplx ke = eps_ * k_;
    const auto fp = jost_solution(unit_, Side::right, ke, inner, opts_);
    const auto fm = jost_solution(unit_, Side::left, ke, inner, opts_);
    for (std::size_t j = 0; j < inner.size(); ++j) {
      const std::size_t i = inner_idx[j];
      plus[i] = {c_plus_ * fp.values[j] + c_minus_ * fm.values[j],
                 (c_plus_ * fp.derivatives[j] + c_minus_ * fm.derivatives[j]) / eps_};
      minus[i] = {d_plus_ * fp.values[j] + d_minus_ * fm.values[j],
                  (d_plus_ * fp.derivatives[j] + d_minus_ * fm.derivatives[j]) / eps_};
    }
  }
  return {std::move(plus), std::move(minus)};
}

State TruncatedScaledJost::plus_at(double x) const {
  const double g[1] = {x};
  return sample(g).first[0];
}

State TruncatedScaledJost::minus_at(double x) const {
  const double g[1] = {x};
  return sample(g).second[0];
}

cplx TruncatedScaledJost::wronskian_at(double x) const {
  const double g[1] = {x};
  const auto [p, m] = sample(g);
  return p[0].value * m[0].derivative - p[0].derivative * m[0].value;
}

cplx TruncatedScaledJost::green(double x, double y) const {
  const double g[2] = {std::max(x, y), std::min(x, y)};
  const auto [p, m] = sample(g);
  return p[0].value * m[1].value / wronskian();
}

ScatteringData TruncatedScaledJost::scattering() const {
  ScatteringData d;
  d.k = k_;
  d.a = a_plus_;
  d.b = b_plus_;
  d.r = b_plus_ / a_plus_;
  d.t = 1.0 / a_plus_;
  d.consistency_gap = std::abs(a_plus_ - a_minus_) / std::abs(a_plus_);
  return d;
}

TruncatedJostCoefficients truncated_scaled_jost(const Potential& p, double eps, cplx k,
                                                const JostOptions& opts,
                                                double alpha_weight) {
  const TruncatedScaledJost tj(p, eps, k, opts, alpha_weight);
  return {tj.c_plus(), tj.c_minus(), tj.a_plus(), tj.b_plus()};
}

ScatteringData truncated_scaled_scattering(const Potential& p, double eps, cplx k,
                                           const JostOptions& opts, double alpha_weight) {
  return TruncatedScaledJost(p, eps, k, opts, alpha_weight).scattering();
}

GreenKernelSample truncated_green_kernel(const Potential& p, double eps, cplx k, double x,
                                         double y, const JostOptions& opts,
                                         double alpha_weight) {
  if (!(k.imag() > 0.0))
    throw std::invalid_argument("truncated_green_kernel requires Im k > 0");
  const TruncatedScaledJost tj(p, eps, k, opts, alpha_weight);
  return {k, x, y, tj.green(x, y)};
}

}  // namespace dprime
