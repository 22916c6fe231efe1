#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cusplab/coeff_engine.hpp"
#include "cusplab/exp_sums.hpp"
#include "cusplab/rational.hpp"

namespace cusplab {

/// Constant added inside every cosine of the dual sum.
enum class PhaseConvention { kZero, kMinusQuarterPi };

double phase_shift(PhaseConvention c) noexcept;
const char* to_string(PhaseConvention c) noexcept;

struct VoronoiParams {
  RationalPoint point = RationalPoint::make(0, 1);
  std::int64_t n_trunc = 1;  // 0 gives the empty sum
  PhaseConvention phase = PhaseConvention::kMinusQuarterPi;
};

/// Truncated dual sum for sum_{n<=x} a(n) e(nh/k):
///   k^(1/2) x^(1/4) / (pi sqrt 2) * sum_{n<=N} a(n) e_k(-n h_bar) n^(-3/4) cos(4 pi sqrt(nx)/k + shift)
Complex voronoi_main_term(double x, const VoronoiParams& params, const CoefficientTable& table);

/// Which amplitude the differenced main term puts in front of the shifted cosine.
enum class ShortAmplitude {
  kCommonQuarterPower,  // x^(1/4) on both cosines
  kShiftedQuarterPower  // (x + sqrt x)^(1/4) on the shifted cosine
};

/// Main term for the short sum over x <= n <= x + sqrt(x): the difference of
/// the dual sums at x + sqrt(x) and x with N = params.n_trunc terms.
Complex short_sum_main_term(double x, const VoronoiParams& params, const CoefficientTable& table,
                            ShortAmplitude amplitude = ShortAmplitude::kCommonQuarterPower);

/// N as a function of x: either fixed or floor(fraction * x), at least 1.
struct TruncationRule {
  std::int64_t fixed = 0;
  double fraction_of_x = 0.0;
  std::int64_t at(double x) const;
};

struct VoronoiScan {
  std::vector<double> x;
  std::vector<std::int64_t> n_trunc;
  std::vector<double> error;          // |long_sum(x) - main term with N|
  std::vector<double> error_quarter;  // same with N / 4
  std::vector<double> decay_ratio;    // error_quarter / error, ~2 under the N^(-1/2) law
  double median_error = 0.0;
  double median_error_quarter = 0.0;
};

/// Direct-vs-dual comparison over a grid of x. `rule` supplies N for each x.
VoronoiScan voronoi_error_scan(std::span<const double> xs, const RationalPoint& point, PhaseConvention phase,
                               const TruncationRule& rule, const CoefficientTable& table);

/// Constant left over when the dual sum for the unnormalised coefficients is
/// carried to a(n) by partial summation:
///   (kappa - 1) k / (4 pi) * sum_{n <= terms} a(n) e_k(-n h_bar) / n.
/// The truncated dual sum above omits it; it cancels in short sums.
Complex dual_constant_term(const RationalPoint& point, const CoefficientTable& table, std::int64_t terms);

double median(std::vector<double> values);

}  // namespace cusplab
