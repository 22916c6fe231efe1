#include "cusplab/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cusplab/error.hpp"
#include "cusplab/numeric.hpp"

namespace cusplab {

namespace {

// e_k(-n h_bar) for the dual sum.
class DualPhases {
public:
  explicit DualPhases(const RationalPoint& p) : k_(p.k()), h_bar_(p.h_bar()) {
    for (std::int64_t r = 0; r < k_; ++r) roots_.push_back(e_k(r, k_));
  }
  Complex operator()(std::int64_t n) const noexcept {
    const auto r = mod_floor(-static_cast<std::int64_t>((static_cast<__int128>(n) * h_bar_) % k_), k_);
    return roots_[static_cast<std::size_t>(r)];
  }

private:
  std::int64_t k_;
  std::int64_t h_bar_;
  std::vector<Complex> roots_;
};

// cos(2 pi t + shift) with t reduced mod 1 first.
double reduced_cos(double t, double shift) noexcept {
  return std::cos(2.0 * std::numbers::pi * (t - std::floor(t)) + shift);
}

void check_params(const VoronoiParams& params, const CoefficientTable& table, const char* who) {
  if (params.n_trunc < 0) throw ValidationError(std::string(who) + ": N must be >= 0");
  if (params.n_trunc > table.size()) {
    throw TableTooShort(std::string(who) + ": N = " + std::to_string(params.n_trunc) + " exceeds table size " +
                        std::to_string(table.size()));
  }
}

}  // namespace

double phase_shift(PhaseConvention c) noexcept {
  return c == PhaseConvention::kZero ? 0.0 : -std::numbers::pi / 4.0;
}

const char* to_string(PhaseConvention c) noexcept { return c == PhaseConvention::kZero ? "0" : "-pi/4"; }

Complex voronoi_main_term(double x, const VoronoiParams& params, const CoefficientTable& table) {
  if (!(x >= 1.0)) throw ValidationError("voronoi_main_term: x must be >= 1");
  check_params(params, table, "voronoi_main_term");
  const double k = static_cast<double>(params.point.k());
  const double shift = phase_shift(params.phase);
  const double root_x = std::sqrt(x);
  const DualPhases phases(params.point);
  CompensatedComplexSum acc;
  for (std::int64_t n = 1; n <= params.n_trunc; ++n) {
    const double nn = static_cast<double>(n);
    const double c = reduced_cos(2.0 * std::sqrt(nn) * root_x / k, shift);
    acc.add(phases(n) * (table.a(n) * std::pow(nn, -0.75) * c));
  }
  return acc.value() * (std::sqrt(k) * std::pow(x, 0.25) / (std::numbers::pi * std::numbers::sqrt2));
}

Complex short_sum_main_term(double x, const VoronoiParams& params, const CoefficientTable& table,
                            ShortAmplitude amplitude) {
  if (!(x >= 1.0)) throw ValidationError("short_sum_main_term: x must be >= 1");
  check_params(params, table, "short_sum_main_term");
  const double k = static_cast<double>(params.point.k());
  const double shift = phase_shift(params.phase);
  const double root_x = std::sqrt(x);
  const double root_shifted = std::sqrt(x + root_x);
  const double amp_x = std::pow(x, 0.25);
  const double amp_shifted = amplitude == ShortAmplitude::kCommonQuarterPower ? amp_x : std::sqrt(root_shifted);
  const DualPhases phases(params.point);
  CompensatedComplexSum acc;
  for (std::int64_t n = 1; n <= params.n_trunc; ++n) {
    const double nn = static_cast<double>(n);
    const double rn = std::sqrt(nn);
    const double diff = amp_shifted * reduced_cos(2.0 * rn * root_shifted / k, shift) -
                        amp_x * reduced_cos(2.0 * rn * root_x / k, shift);
    acc.add(phases(n) * (table.a(n) * std::pow(nn, -0.75) * diff));
  }
  return acc.value() * (std::sqrt(k) / (std::numbers::pi * std::numbers::sqrt2));
}

std::int64_t TruncationRule::at(double x) const {
  if (fraction_of_x > 0.0) return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(fraction_of_x * x)));
  if (fixed < 0) throw ValidationError("TruncationRule: negative N");
  return fixed;
}

Complex dual_constant_term(const RationalPoint& point, const CoefficientTable& table, std::int64_t terms) {
  if (terms < 1) throw ValidationError("dual_constant_term: need at least one term");
  if (terms > table.size()) throw TableTooShort("dual_constant_term: table shorter than the requested terms");
  const DualPhases phases(point);
  CompensatedComplexSum acc;
  for (std::int64_t n = 1; n <= terms; ++n) acc.add(table.a(n) * phases(n) / static_cast<double>(n));
  const double k = static_cast<double>(point.k());
  return static_cast<double>(table.weight() - 1) * k / (4.0 * std::numbers::pi) * acc.value();
}

double median(std::vector<double> values) {
  if (values.empty()) throw ValidationError("median of an empty set");
  const auto mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

VoronoiScan voronoi_error_scan(std::span<const double> xs, const RationalPoint& point, PhaseConvention phase,
                               const TruncationRule& rule, const CoefficientTable& table) {
  VoronoiScan scan;
  for (const double x : xs) {
    const std::int64_t n = rule.at(x);
    const Complex direct = long_sum(x, point, table);
    const double err = std::abs(direct - voronoi_main_term(x, {point, n, phase}, table));
    const double err_quarter = std::abs(direct - voronoi_main_term(x, {point, std::max<std::int64_t>(1, n / 4), phase}, table));
    scan.x.push_back(x);
    scan.n_trunc.push_back(n);
    scan.error.push_back(err);
    scan.error_quarter.push_back(err_quarter);
    scan.decay_ratio.push_back(err > 0.0 ? err_quarter / err : 0.0);
  }
  if (!xs.empty()) {
    scan.median_error = median(scan.error);
    scan.median_error_quarter = median(scan.error_quarter);
  }
  return scan;
}

}  // namespace cusplab
