#include "cusplab/exp_sums.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cusplab/error.hpp"
#include "cusplab/numeric.hpp"

namespace cusplab {

namespace {

constexpr double kMergeTolerance = 1e-9;
constexpr std::size_t kReanchorInterval = 1024;

bool upper_member(std::int64_t n, double x) {
  const double gap = static_cast<double>(n) - x;
  return gap <= 0.0 || gap * gap <= x;
}

void require_range(std::int64_t last, const CoefficientTable& table, const char* who) {
  if (last > table.size()) {
    throw TableTooShort(std::string(who) + ": needs a(" + std::to_string(last) + ") but the table stops at " +
                        std::to_string(table.size()));
  }
  if (!table.normalized()) throw ValidationError(std::string(who) + ": table is not normalized");
}

template <typename Phase>
Complex sum_terms(std::int64_t first, std::int64_t last, const CoefficientTable& table, const Phase& phase,
                  bool compensated) {
  if (last < first) return {0.0, 0.0};
  if (compensated) {
    CompensatedComplexSum acc;
    for (std::int64_t n = first; n <= last; ++n) acc.add(table.a(n) * phase(n));
    return acc.value();
  }
  Complex acc{0.0, 0.0};
  for (std::int64_t n = first; n <= last; ++n) acc += table.a(n) * phase(n);
  return acc;
}

// sqrt(x) for the root of x + sqrt(x) = m, written without cancellation.
double exit_root(std::int64_t m) {
  const double s = 2.0 * static_cast<double>(m) / (std::sqrt(1.0 + 4.0 * static_cast<double>(m)) + 1.0);
  return s * s;
}

}  // namespace

Window short_window(double x) {
  const auto first = static_cast<std::int64_t>(std::ceil(x));
  auto last = static_cast<std::int64_t>(std::floor(x + std::sqrt(x)));
  while (upper_member(last + 1, x)) ++last;
  while (last >= first && !upper_member(last, x)) --last;
  return {first, last};
}

PhaseTable::PhaseTable(const RationalPoint& point) : point_(point) {
  roots_.reserve(static_cast<std::size_t>(point.k()));
  for (std::int64_t r = 0; r < point.k(); ++r) roots_.push_back(e_k(r, point.k()));
}

Complex range_sum(std::int64_t first, std::int64_t last, const PhaseTable& phases, const CoefficientTable& table,
                  bool compensated) {
  require_range(last, table, "range_sum");
  return sum_terms(first, last, table, phases, compensated);
}

Complex short_sum(double x, double alpha, const CoefficientTable& table) {
  if (!(x >= 1.0)) throw ValidationError("short_sum: x must be >= 1");
  const Window w = short_window(x);
  require_range(w.last, table, "short_sum");
  const auto phase = [alpha](std::int64_t n) {
    // n * alpha reduced mod 1 before the exponential.
    const double t = static_cast<double>(n) * alpha;
    return e(t - std::floor(t));
  };
  return sum_terms(w.first, w.last, table, phase, w.count() > kCompensationThreshold);
}

Complex short_sum(double x, const RationalPoint& point, const CoefficientTable& table) {
  if (!(x >= 1.0)) throw ValidationError("short_sum: x must be >= 1");
  const Window w = short_window(x);
  require_range(w.last, table, "short_sum");
  const auto phase = [&point](std::int64_t n) { return e_k(point.phase_numerator(n), point.k()); };
  return sum_terms(w.first, w.last, table, phase, w.count() > kCompensationThreshold);
}

Complex long_sum(double x, double alpha, const CoefficientTable& table) {
  const auto last = static_cast<std::int64_t>(std::floor(x));
  require_range(last, table, "long_sum");
  const auto phase = [alpha](std::int64_t n) {
    const double t = static_cast<double>(n) * alpha;
    return e(t - std::floor(t));
  };
  return sum_terms(1, last, table, phase, last > kCompensationThreshold);
}

Complex long_sum(double x, const RationalPoint& point, const CoefficientTable& table) {
  const auto last = static_cast<std::int64_t>(std::floor(x));
  require_range(last, table, "long_sum");
  return sum_terms(1, last, table, PhaseTable(point), last > kCompensationThreshold);
}

std::vector<double> breakpoints(double M, double delta) {
  if (!(M >= 2.0)) throw ValidationError("breakpoints: M must be >= 2");
  if (!(delta >= 0.0)) throw ValidationError("breakpoints: Delta must be >= 0");
  const double top = M + delta;
  std::vector<double> points;
  for (auto n = static_cast<std::int64_t>(std::ceil(M)); static_cast<double>(n) <= top; ++n) {
    points.push_back(static_cast<double>(n));
  }
  const auto m_lo = static_cast<std::int64_t>(std::floor(M + std::sqrt(M))) - 1;
  const auto m_hi = static_cast<std::int64_t>(std::ceil(top + std::sqrt(top))) + 1;
  for (std::int64_t m = m_lo; m <= m_hi; ++m) {
    const double x = exit_root(m);
    if (x >= M - kMergeTolerance && x <= top + kMergeTolerance) points.push_back(std::clamp(x, M, top));
  }
  std::sort(points.begin(), points.end());
  std::vector<double> merged;
  for (const double p : points) {
    if (merged.empty() || p - merged.back() > kMergeTolerance) {
      merged.push_back(p);
    } else if (p == std::round(p)) {
      merged.back() = p;  // prefer the exact integer representative
    }
  }
  return merged;
}

Complex StepSeries::operator()(double x) const {
  if (values.empty() || x < edges.front() || x > edges.back()) {
    throw ValidationError("StepSeries: x outside [M, M + Delta]");
  }
  auto it = std::upper_bound(edges.begin(), edges.end(), x);
  auto idx = static_cast<std::size_t>(std::distance(edges.begin(), it));
  idx = std::clamp<std::size_t>(idx, 1, values.size()) - 1;
  return values[idx];
}

StepSeries step_series(double M, double delta, const RationalPoint& point, const CoefficientTable& table) {
  if (!(delta > 0.0)) throw ValidationError("step_series: Delta must be positive");
  const double top = M + delta;
  require_range(short_window(top).last, table, "step_series");

  StepSeries series;
  series.edges.push_back(M);
  for (const double b : breakpoints(M, delta)) {
    if (b - M > kMergeTolerance && top - b > kMergeTolerance) series.edges.push_back(b);
  }
  series.edges.push_back(top);

  const PhaseTable phases(point);
  const std::size_t pieces = series.edges.size() - 1;
  series.values.reserve(pieces);
  series.windows.reserve(pieces);

  Complex current{0.0, 0.0};
  Window prev{0, -1};
  for (std::size_t i = 0; i < pieces; ++i) {
    const double mid = 0.5 * (series.edges[i] + series.edges[i + 1]);
    const Window w = short_window(mid);
    if (i % kReanchorInterval == 0) {
      current = sum_terms(w.first, w.last, table, phases, w.count() > kCompensationThreshold);
    } else {
      for (std::int64_t n = prev.first; n < w.first && n <= prev.last; ++n) current -= table.a(n) * phases(n);
      for (std::int64_t n = std::max(prev.last + 1, w.first); n <= w.last; ++n) current += table.a(n) * phases(n);
    }
    series.values.push_back(current);
    series.windows.push_back(w);
    prev = w;
  }
  return series;
}

Complex unweighted_window_sum(double M, double delta, const CoefficientTable& table) {
  if (!(delta >= 0.0)) throw ValidationError("unweighted_window_sum: Delta must be >= 0");
  const auto first = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(M)));
  const auto last = static_cast<std::int64_t>(std::floor(M + delta));
  require_range(last, table, "unweighted_window_sum");
  const auto one = [](std::int64_t) { return Complex{1.0, 0.0}; };
  return sum_terms(first, last, table, one, last - first + 1 > kCompensationThreshold);
}

}  // namespace cusplab
