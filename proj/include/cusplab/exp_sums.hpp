#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "cusplab/coeff_engine.hpp"
#include "cusplab/rational.hpp"

namespace cusplab {

using Complex = std::complex<double>;

/// Integers n with x <= n <= x + sqrt(x), both ends closed.
struct Window {
  std::int64_t first;
  std::int64_t last;  // first > last means empty
  std::int64_t count() const noexcept { return last >= first ? last - first + 1 : 0; }
};

Window short_window(double x);

/// Precomputed e(r / k) for r = 0..k-1, so e(n h / k) is a table lookup after
/// reducing n h mod k in integers.
class PhaseTable {
public:
  explicit PhaseTable(const RationalPoint& point);
  const RationalPoint& point() const noexcept { return point_; }
  Complex operator()(std::int64_t n) const noexcept {
    return roots_[static_cast<std::size_t>(point_.phase_numerator(n))];
  }

private:
  RationalPoint point_;
  std::vector<Complex> roots_;
};

/// Windows longer than this are summed with compensation.
inline constexpr std::int64_t kCompensationThreshold = 1000;

/// sum over x <= n <= x + sqrt(x) of a(n) e(n alpha), generic real alpha
/// (phase reduced mod 1 in double precision).
Complex short_sum(double x, double alpha, const CoefficientTable& table);
/// Same with alpha = h/k, phases reduced exactly.
Complex short_sum(double x, const RationalPoint& point, const CoefficientTable& table);

/// sum over 1 <= n <= x of a(n) e(n alpha).
Complex long_sum(double x, double alpha, const CoefficientTable& table);
Complex long_sum(double x, const RationalPoint& point, const CoefficientTable& table);

/// sum over integers first..last of a(n) e(n h/k); compensated or plain.
Complex range_sum(std::int64_t first, std::int64_t last, const PhaseTable& phases,
                  const CoefficientTable& table, bool compensated);

/// Sorted points of [M, M + Delta] where the short window changes: the
/// integers (n leaves through the lower end) and the roots of x + sqrt(x) = m
/// (m enters through the upper end). Points closer than 1e-9 are merged.
std::vector<double> breakpoints(double M, double delta);

/// The short sum as an exact step function on [M, M + Delta].
struct StepSeries {
  std::vector<double> edges;                // edges.front() == M, edges.back() == M + Delta
  std::vector<Complex> values;              // value on (edges[i], edges[i+1])
  std::vector<Window> windows;              // summation range on each piece
  std::size_t pieces() const noexcept { return values.size(); }
  /// Value at x (x must not be an edge; edges resolve to the right piece).
  Complex operator()(double x) const;
};

/// Sliding-window construction: O(Delta) term updates, periodically
/// re-anchored with a direct sum to bound drift.
StepSeries step_series(double M, double delta, const RationalPoint& point, const CoefficientTable& table);

/// sum over M <= n <= M + Delta of a(n).
Complex unweighted_window_sum(double M, double delta, const CoefficientTable& table);

}  // namespace cusplab
