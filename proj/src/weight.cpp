#include "cusplab/weight.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "cusplab/error.hpp"

namespace cusplab {

namespace {

double bump_half(double t) noexcept { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// Finite-difference step in the ramp variable t = (x - M) / r, per order.
// Balances O(h^2) truncation against eps / h^n rounding.
constexpr std::array<double, 7> kStepByOrder{0.0, 1e-5, 1e-4, 6e-4, 2e-3, 5e-3, 1e-2};

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

double smooth_step(double t) noexcept {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = bump_half(t);
  const double b = bump_half(1.0 - t);
  return a / (a + b);
}

WeightProfile::WeightProfile(double M, double delta, double rise, int smoothness_order)
    : M_(M), delta_(delta), rise_(rise), order_(smoothness_order) {
  if (!(M >= 2.0) || !std::isfinite(M)) throw ValidationError("weight: M must be >= 2");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ValidationError("weight: Delta must be positive");
  if (!(rise > 0.0) || rise > delta / 2.0) {
    throw ValidationError("weight: rise length must lie in (0, Delta/2], got " + std::to_string(rise));
  }
  if (smoothness_order < 0) throw ValidationError("weight: smoothness order must be >= 0");
}

WeightProfile WeightProfile::with_default_rise(double M, double delta) { return {M, delta, delta / 4.0}; }

double WeightProfile::operator()(double x) const noexcept {
  if (x <= M_ || x >= M_ + delta_) return 0.0;
  return smooth_step((x - M_) / rise_) * smooth_step((M_ + delta_ - x) / rise_);
}

std::vector<double> derivative_bound_report(const WeightProfile& w, int n_max, int grid_points) {
  if (n_max < 0 || n_max > 6) throw ValidationError("derivative_bound_report: n_max must be in [0, 6]");
  if (grid_points < 10000) throw ValidationError("derivative_bound_report: need at least 10^4 grid points");
  const double r = w.rise();
  std::vector<double> sup(static_cast<std::size_t>(n_max) + 1, 0.0);
  // Both ramps plus a margin either side so the plateau edges are covered.
  const std::array<double, 2> ramp_starts{w.lower(), w.upper() - r};
  for (const double start : ramp_starts) {
    for (int i = 0; i <= grid_points; ++i) {
      const double t = -0.05 + 1.1 * static_cast<double>(i) / grid_points;
      const double x = start + t * r;
      sup[0] = std::max(sup[0], std::abs(w(x)));
      for (int n = 1; n <= n_max; ++n) {
        const double h = kStepByOrder[static_cast<std::size_t>(n)];
        // n-th central difference in t; dividing by h^n gives r^n w^(n)(x).
        double acc = 0.0;
        for (int j = 0; j <= n; ++j) {
          const double offset = (0.5 * n - j) * h;
          const double sign = (j % 2 == 0) ? 1.0 : -1.0;
          acc += sign * binomial(n, j) * w(x + offset * r);
        }
        sup[static_cast<std::size_t>(n)] = std::max(sup[static_cast<std::size_t>(n)], std::abs(acc) / std::pow(h, n));
      }
    }
  }
  return sup;
}

}  // namespace cusplab
