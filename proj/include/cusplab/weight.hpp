#pragma once

#include <vector>

namespace cusplab {

/// Smooth transition psi(t) = g(t) / (g(t) + g(1 - t)) with g(t) = exp(-1/t)
/// for t > 0 and 0 otherwise. psi is C-infinity, 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t) noexcept;

/// C-infinity weight supported on [M, M + Delta]: a ramp of length r at each
/// end and a plateau of height 1 in between,
///   w(x) = psi((x - M) / r) * psi((M + Delta - x) / r).
class WeightProfile {
public:
  /// Requires M >= 2, Delta > 0 and 0 < r <= Delta / 2.
  WeightProfile(double M, double delta, double rise, int smoothness_order = 4);

  /// Ramp length Delta / 4.
  static WeightProfile with_default_rise(double M, double delta);

  double M() const noexcept { return M_; }
  double delta() const noexcept { return delta_; }
  double rise() const noexcept { return rise_; }
  int smoothness_order() const noexcept { return order_; }
  double lower() const noexcept { return M_; }
  double upper() const noexcept { return M_ + delta_; }

  double operator()(double x) const noexcept;

private:
  double M_;
  double delta_;
  double rise_;
  int order_;
};

inline WeightProfile build_weight(double M, double delta, double rise) { return {M, delta, rise}; }
inline double eval_weight(const WeightProfile& w, double x) { return w(x); }

/// sup over the support of |w^(n)(x)| * r^n for n = 0..n_max, estimated by
/// central finite differences on a grid of `grid_points` nodes across each
/// ramp. n_max is limited to 6.
std::vector<double> derivative_bound_report(const WeightProfile& w, int n_max, int grid_points = 20000);

}  // namespace cusplab
