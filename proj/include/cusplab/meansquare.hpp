#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cusplab/coeff_engine.hpp"
#include "cusplab/exp_sums.hpp"
#include "cusplab/oscillatory.hpp"
#include "cusplab/rational.hpp"
#include "cusplab/voronoi.hpp"
#include "cusplab/weight.hpp"

namespace cusplab {

enum class IntegralMethod { kExactStep, kQuadrature };
const char* to_string(IntegralMethod m) noexcept;

struct MeanSquareResult {
  double M = 0.0;
  double delta = 0.0;
  RationalPoint point = RationalPoint::make(0, 1);
  double integral = 0.0;   // int w(x) |S(x)|^2 dx
  double diagonal = 0.0;   // 0 unless filled by the caller
  double ratio = 0.0;      // integral / (Delta sqrt M)
  IntegralMethod method = IntegralMethod::kExactStep;
};

/// Mean square of the short sum against w. With kExactStep the step series
/// supplies S on each piece; with kQuadrature S is re-evaluated directly at
/// each piece midpoint. Either way the weight is integrated per piece with
/// 8-point Gauss-Legendre.
MeanSquareResult theorem_integral(const WeightProfile& weight, const RationalPoint& point,
                                  const CoefficientTable& table,
                                  IntegralMethod method = IntegralMethod::kExactStep);

struct DiagonalOptions {
  std::int64_t n_max = 0;                  // 0 means n <= M
  double cycle_budget_per_n = 400.0;       // oscillatory parts above this are certified, not integrated
  PhaseConvention phase = PhaseConvention::kMinusQuarterPi;
  QuadratureOptions quadrature{};
};

struct DiagonalResult {
  double value = 0.0;            // k/(2 pi^2) sum |a(n)|^2 n^(-3/2) int w x^(1/2) (cos A - cos B)^2
  double small_n_part = 0.0;     // n <= k^2
  double large_n_part = 0.0;     // n > k^2
  double allowance = 0.0;        // certified bound on the skipped oscillatory parts (already scaled)
  std::int64_t flagged = 0;      // number of n whose oscillatory parts were certified, not integrated
  std::int64_t terms = 0;
  bool accurate = true;          // every integrated part met its refinement tolerance
};

/// Per-n integral of w(x) x^(1/2) (cos A_n - cos B_n)^2, where
/// A_n = 4 pi sqrt(n (x + sqrt x))/k + shift and B_n = 4 pi sqrt(n x)/k + shift.
/// Split as the slowly varying 1 - cos(A - B) part plus three exponential
/// integrals of the sum family.
struct DiagonalPiece {
  double value = 0.0;
  double allowance = 0.0;
  bool flagged = false;
  bool accurate = true;
};
DiagonalPiece diagonal_piece(std::int64_t n, std::int64_t k, const WeightProfile& weight,
                             const DiagonalOptions& options = {});

DiagonalResult diagonal_term(const WeightProfile& weight, std::int64_t k, const CoefficientTable& table,
                             const DiagonalOptions& options = {});

struct IdentityCheck {
  double max_discrepancy = 0.0;         // |(cos A - cos B)^2 - 4 sin^2 sin^2|
  double max_discrepancy_unscaled = 0.0;  // same without the factor 4
  double factor = 0.0;                  // median of lhs / (sin^2 sin^2) where the latter is not tiny
};

/// (cos A - cos B)^2 = 4 sin^2((A+B)/2) sin^2((A-B)/2) on the diagonal phases.
IdentityCheck diag_identity_check(std::int64_t n, std::int64_t k, std::span<const double> xs,
                                  PhaseConvention phase = PhaseConvention::kMinusQuarterPi);

struct OffDiagonalReport {
  double diagonal = 0.0;          // scaled by k/(2 pi^2), n <= N
  double off_diagonal = 0.0;      // scaled, m != n <= N
  double expansion_total = 0.0;   // diagonal + off_diagonal
  double theorem_integral = 0.0;
  double relative_gap = 0.0;      // |expansion_total - theorem_integral| / theorem_integral
  double error_allowance = 0.0;   // k^2 Delta
  double majorant = 0.0;          // k^2 M^(1/2) sum_{m<n<=M} n^(-1/4) m^(-3/4) (n-m)^(-1)
  std::int64_t cross_integrals = 0;
  bool accurate = true;
};

/// Mean square rebuilt from the truncated dual expansion: diagonal plus the
/// cross terms, each cross term assembled from eight oscillatory integrals.
/// Requires M <= 2000 and N <= 200.
OffDiagonalReport offdiagonal_crosscheck(const WeightProfile& weight, const RationalPoint& point,
                                         const CoefficientTable& table, std::int64_t n_trunc,
                                         PhaseConvention phase = PhaseConvention::kMinusQuarterPi,
                                         const QuadratureOptions& options = {});

/// sum over 1 <= m < n <= L of n^(-1/4) m^(-3/4) (n - m)^(-1).
double offdiagonal_majorant_sum(std::int64_t L);

struct OmegaRow {
  double M = 0.0;
  Complex sum;
  double normalized = 0.0;  // |sum| / sqrt(Delta)
};

struct OmegaStatistic {
  std::vector<OmegaRow> rows;
  double max = 0.0;
  double rms = 0.0;
};

OmegaStatistic omega_statistic(std::span<const double> Ms, double delta, const CoefficientTable& table);

/// `count` window starts in [lo, hi], deterministic in `seed` on every platform.
std::vector<double> seeded_window_starts(std::uint64_t seed, std::size_t count, std::int64_t lo, std::int64_t hi);

struct ExponentFit {
  double alpha = 0.0;  // exponent of M
  double beta = 0.0;   // exponent of k
  double C = 0.0;
  double residual_rms = 0.0;
};

/// Least squares log(I / Delta) = log C + alpha log M + beta log k. Needs at
/// least 6 results, one decade in M and two distinct k.
ExponentFit exponent_fit(std::span<const MeanSquareResult> results);

}  // namespace cusplab
