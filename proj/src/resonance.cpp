#include "dprime/resonance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dprime/error.hpp"

namespace dprime {

namespace {

constexpr cplx I{0.0, 1.0};

// Zero-energy quantities of non-compact potentials come from k = i delta.
constexpr std::array<double, 3> kDeltas = {1e-4, 1e-5, 1e-6};

// Value at 0 of the quadratic through (kDeltas[j], y[j]).
template <class T>
T extrapolate_to_zero(const std::array<T, 3>& y) {
  T out{};
  for (std::size_t i = 0; i < 3; ++i) {
    double w = 1.0;
    for (std::size_t j = 0; j < 3; ++j)
      if (j != i) w *= (0.0 - kDeltas[j]) / (kDeltas[i] - kDeltas[j]);
    out += w * y[i];
  }
  return out;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

double default_resonance_threshold(const Potential& p) {
  return 1e-8 * (1.0 + fm_norm(p));
}

double zero_energy_wronskian(const Potential& p, const JostOptions& opts) {
  if (p.compact()) return jost_function(p, 0.0, opts).real();
  std::array<double, 3> d{};
  for (std::size_t j = 0; j < 3; ++j) d[j] = jost_function(p, I * kDeltas[j], opts).real();
  return extrapolate_to_zero(d);
}

ResonanceReport resonance_report(const Potential& p, double threshold,
                                 const JostOptions& opts) {
  ResonanceReport rep;
  rep.threshold = threshold > 0.0 ? threshold : default_resonance_threshold(p);
  rep.extrapolated = !p.compact();

  const auto grid = default_grid(p, opts);
  const double x_left = jost_anchor(p, Side::left, opts);
  std::vector<double> fp(grid.size()), fm(grid.size());
  double fp_far = 0.0;

  if (!rep.extrapolated) {
    const auto sp = jost_right(p, 0.0, grid, opts);
    const auto sm = jost_left(p, 0.0, grid, opts);
    rep.d0 = wronskian(sp, sm).value.real();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      fp[i] = sp.values[i].real();
      fm[i] = sm.values[i].real();
    }
    fp_far = jost_at(p, Side::right, 0.0, x_left, opts).value.real();
  } else {
    std::array<double, 3> d{}, far{};
    std::vector<std::array<double, 3>> vp(grid.size()), vm(grid.size());
    for (std::size_t j = 0; j < 3; ++j) {
      const cplx k = I * kDeltas[j];
      const auto sp = jost_right(p, k, grid, opts);
      const auto sm = jost_left(p, k, grid, opts);
      d[j] = wronskian(sp, sm).value.real();
      for (std::size_t i = 0; i < grid.size(); ++i) {
        vp[i][j] = sp.values[i].real();
        vm[i][j] = sm.values[i].real();
      }
      far[j] = jost_at(p, Side::right, k, x_left, opts).value.real();
    }
    rep.d0 = extrapolate_to_zero(d);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      fp[i] = extrapolate_to_zero(vp[i]);
      fm[i] = extrapolate_to_zero(vm[i]);
    }
    fp_far = extrapolate_to_zero(far);
  }

  rep.is_resonant = std::abs(rep.d0) < rep.threshold;
  if (!rep.is_resonant) return rep;

  double fmax = 0.0;
  for (double v : fp) fmax = std::max(fmax, std::abs(v));
  std::vector<double> ratios;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (std::abs(fp[i]) > 0.1 * fmax) ratios.push_back(fm[i] / fp[i]);

  double theta = 0.0;
  for (double r : ratios) theta += r;
  theta /= static_cast<double>(ratios.size());
  for (double r : ratios)
    rep.theta_spread = std::max(rep.theta_spread, std::abs(r - theta) / std::abs(theta));
  if (rep.theta_spread > 1e-6) {
    std::ostringstream msg;
    msg << "resonance_report: |D(0)| = " << std::abs(rep.d0) << " is below the threshold "
        << rep.threshold << " but f_-/f_+ varies by " << rep.theta_spread
        << " (relative) across the grid";
    throw NumericalError(msg.str());
  }
  rep.theta = theta;
  rep.theta_far = 1.0 / fp_far;
  rep.halfbound_x = grid;
  rep.halfbound_y = fp;
  return rep;
}

DDotZero d_dot_zero(const Potential& p, double delta, const JostOptions& opts) {
  if (!(delta > 0.0)) throw std::invalid_argument("d_dot_zero: delta must be positive");
  const auto rep = resonance_report(p, 0.0, opts);
  if (!rep.is_resonant)
    throw std::invalid_argument("d_dot_zero: potential is not resonant at zero energy");

  auto directional = [&](cplx u) {
    auto quotient = [&](double h) { return (jost_function(p, h * u, opts) - rep.d0) / (h * u); };
    return 2.0 * quotient(0.5 * delta) - quotient(delta);
  };

  DDotZero out;
  out.along_imag = directional(I);
  out.along_diagonal = directional(cplx(1.0, 1.0) / std::sqrt(2.0));
  out.estimate = 0.5 * (out.along_imag + out.along_diagonal);
  out.theta = *rep.theta;
  out.gap = std::abs(out.estimate + I * (out.theta + 1.0 / out.theta));
  return out;
}

CouplingSweep resonant_couplings(const Potential& base, double alpha_min, double alpha_max,
                                 int grid_n, double root_tol, const JostOptions& opts) {
  if (grid_n < 2) throw std::invalid_argument("resonant_couplings: grid_n must be >= 2");
  if (!(alpha_max > alpha_min))
    throw std::invalid_argument("resonant_couplings: need alpha_min < alpha_max");
  if (!(root_tol > 0.0)) throw std::invalid_argument("resonant_couplings: root_tol must be > 0");

  auto d0_at = [&](double alpha) { return zero_energy_wronskian(base.times(alpha), opts); };

  CouplingSweep sweep;
  const double h = (alpha_max - alpha_min) / grid_n;
  for (int i = 0; i <= grid_n; ++i) {
    const double a = i == grid_n ? alpha_max : alpha_min + i * h;
    sweep.alphas.push_back(a);
    sweep.d0.push_back(d0_at(a));
  }

  const bool trivial_in_range = alpha_min < 0.0 && 0.0 <= alpha_max;
  if (trivial_in_range) sweep.roots.push_back({0.0, 0.0, 0.0, 0.0, true});

  const auto& al = sweep.alphas;
  const auto& d = sweep.d0;
  for (std::size_t i = 0; i + 1 < al.size(); ++i) {
    const int s0 = sign_of(d[i]), s1 = sign_of(d[i + 1]);
    if (s1 == 0 && al[i + 1] != 0.0) {
      sweep.roots.push_back({al[i + 1], al[i + 1], al[i + 1], 0.0, false});
      continue;
    }
    if (s0 * s1 >= 0) continue;

    double lo = al[i], hi = al[i + 1];
    double flo = d[i];
    double mid = 0.5 * (lo + hi), fmid = d0_at(mid);
    for (int it = 0; it < 200; ++it) {
      if (hi - lo < root_tol && std::abs(fmid) < root_tol) break;
      if (sign_of(fmid) == 0) break;
      if (sign_of(fmid) == sign_of(flo)) {
        lo = mid;
        flo = fmid;
      } else {
        hi = mid;
      }
      mid = 0.5 * (lo + hi);
      fmid = d0_at(mid);
    }
    if (trivial_in_range && std::abs(mid) < root_tol) continue;
    sweep.roots.push_back({mid, al[i], al[i + 1], std::abs(fmid), false});
  }
  std::sort(sweep.roots.begin(), sweep.roots.end(),
            [](const CouplingRoot& a, const CouplingRoot& b) { return a.alpha < b.alpha; });

  // Two roots inside one cell leave equal signs at its ends. Flag cells where
  // the function heads towards zero at the left end and comes back from it at
  // the right end, with both tangent lines crossing zero inside the cell.
  auto slope = [&](double a) {
    const double step = 1e-6 * std::max(1.0, std::abs(a));
    return (d0_at(a + step) - d0_at(a - step)) / (2.0 * step);
  };
  for (std::size_t i = 0; i + 1 < al.size(); ++i) {
    const int s = sign_of(d[i]);
    if (s == 0 || sign_of(d[i + 1]) != s) continue;
    const double ga = slope(al[i]), gb = slope(al[i + 1]);
    if (!(s * ga < 0.0 && s * gb > 0.0)) continue;
    const double za = al[i] - d[i] / ga, zb = al[i + 1] - d[i + 1] / gb;
    if (za < al[i + 1] && zb > al[i]) {
      std::ostringstream msg;
      msg << "D(0; alpha) keeps its sign on [" << al[i] << ", " << al[i + 1]
          << "] but its slopes point at a pair of roots inside; refine the grid";
      sweep.warnings.push_back(msg.str());
    }
  }
  return sweep;
}

}  // namespace dprime
