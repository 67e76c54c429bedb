#pragma once

#include <optional>
#include <variant>
#include <vector>

namespace dprime {

struct Interval {
  double left = 0.0;
  double right = 0.0;

  double width() const { return right - left; }
};

/// Constant height on the closed interval [left, right].
struct Step {
  double left = 0.0;
  double right = 0.0;
  double height = 0.0;
};

namespace shape {

struct Zero {};

/// Square wells/barriers and general piecewise-constant profiles.
struct Steps {
  std::vector<Step> pieces;  // sorted, nonoverlapping
};

/// Samples with linear interpolation, zero outside the grid hull.
struct Table {
  std::vector<double> x;
  std::vector<double> v;
};

/// amplitude * exp(-rate * |x|), supported on the whole line.
struct ExpDecay {
  double amplitude = 1.0;
  double rate = 1.0;
};

}  // namespace shape

using Shape = std::variant<shape::Zero, shape::Steps, shape::Table, shape::ExpDecay>;

/// Real potential alpha * eps^-2 * base(x / eps), optionally cut to
/// [-half_width, half_width]. Scaling and truncation compose in closed form,
/// so a Potential is always a base shape plus three parameters.
class Potential {
 public:
  static Potential zero();
  static Potential square(double left, double right, double height);
  static Potential piecewise(std::vector<Step> pieces);
  static Potential table(std::vector<double> x, std::vector<double> v);
  static Potential exp_decay(double amplitude, double rate = 1.0);

  double operator()(double x) const;

  /// Multiplies the coupling constant by alpha.
  Potential times(double alpha) const;
  /// V(x) -> eps^-2 V(x / eps).
  Potential scaled(double eps) const;
  /// Zero outside [-half_width, half_width].
  Potential truncated(double half_width) const;

  double coupling() const { return coupling_; }
  double scale_factor() const { return scale_; }
  std::optional<double> half_width() const { return half_width_; }
  const Shape& base() const { return shape_; }

  /// Closed interval outside of which the potential vanishes; nullopt for
  /// infinite support. The zero potential reports [0, 0].
  std::optional<Interval> support() const;
  bool compact() const { return support().has_value(); }

  /// Points where V may jump or kink, including the support edges. Sorted.
  std::vector<double> breakpoints() const;

  bool piecewise_constant() const;
  /// Constant pieces in physical coordinates (coupling, scaling and
  /// truncation applied). Only meaningful when piecewise_constant().
  std::vector<Step> steps() const;

  /// Upper bound on the integral of (1+|x|)|V(x)| over |x| > X.
  /// Zero once X covers a compact support.
  double tail_bound(double X) const;

 private:
  explicit Potential(Shape s) : shape_(std::move(s)) {}

  Shape shape_;
  double coupling_ = 1.0;
  double scale_ = 1.0;
  std::optional<double> half_width_;
};

struct Moments {
  double m0 = 0.0;  // integral of V
  double m1 = 0.0;  // integral of x V
};

/// Faddeev-Marchenko tail integrals at a point.
struct TailData {
  double sigma_minus = 0.0;  // int_{-inf}^x |V|
  double sigma_plus = 0.0;   // int_x^{inf} |V|
  double tau_minus = 0.0;    // int_{-inf}^x (1+|t|)|V|
  double tau_plus = 0.0;     // int_x^{inf} (1+|t|)|V|
};

struct SplittingScale {
  double epsilon = 0.0;
  double xi_eps = 0.0;  // fast-variable half-width, rho(xi_eps) = 1/eps
  double x_eps = 0.0;   // eps * xi_eps
};

inline constexpr double kDefaultQuadTol = 1e-12;
inline constexpr double kDefaultAlphaWeight = 0.5;

double eval(const Potential& p, double x);
Potential scale(const Potential& p, double eps);
Potential truncate(const Potential& p, double half_width);

Moments moments(const Potential& p, double quad_tol = kDefaultQuadTol);

/// Integral of (1+|x|)|V(x)|. Returns +infinity when the tail of an
/// infinitely supported potential cannot be brought below quad_tol.
double fm_norm(const Potential& p, double quad_tol = kDefaultQuadTol);

TailData tails(const Potential& p, double x, double quad_tol = kDefaultQuadTol);

/// tau(x) = tau_+(|x|) + tau_-(-|x|), the two-sided tail beyond |x|.
/// Computed to relative accuracy, since the weight below divides by it.
double two_sided_tail(const Potential& p, double x);

/// Even weight rho_V: 1 + x^2 for compact support, otherwise
/// (1+|x|) / tau(x)^alpha_weight.
double rho_weight(const Potential& p, double x,
                  double alpha_weight = kDefaultAlphaWeight);

/// Solves rho_V(xi) = 1/eps by bracketing and bisection.
/// Throws std::invalid_argument when eps is too large for a solution.
SplittingScale splitting_scale(const Potential& p, double eps,
                               double alpha_weight = kDefaultAlphaWeight);

/// eps^-1 * integral of |V(s)| over |s| > xi_eps: the squared L2 norm of the
/// part of the scaled potential discarded by truncation.
double tail_weight_norm(const Potential& p, double eps,
                        double alpha_weight = kDefaultAlphaWeight,
                        double quad_tol = kDefaultQuadTol);

}  // namespace dprime
