#include "cusplab/meansquare.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <string>

#include "cusplab/error.hpp"
#include "cusplab/numeric.hpp"

namespace cusplab {

namespace {

constexpr int kWeightGaussOrder = 8;

double root_shift_gap(double x) {
  // sqrt(x + sqrt x) - sqrt x, cancellation-free.
  const double rx = std::sqrt(x);
  return rx / (std::sqrt(x + rx) + rx);
}

double piece_weight(const WeightProfile& w, double lo, double hi) {
  if (hi <= w.lower() || lo >= w.upper()) return 0.0;
  return gauss_integrate([&w](double x) { return w(x); }, lo, hi, kWeightGaussOrder);
}

PhaseSpec sum_spec(std::int64_t n, std::int64_t m, Argument arg_n, Argument arg_m, const RationalPoint& point) {
  PhaseSpec s;
  s.family = PhaseFamily::kSum;
  s.n = n;
  s.m = m;
  s.arg_n = arg_n;
  s.arg_m = arg_m;
  s.point = point;
  return s;
}

}  // namespace

const char* to_string(IntegralMethod m) noexcept {
  return m == IntegralMethod::kExactStep ? "exact-step" : "quadrature";
}

MeanSquareResult theorem_integral(const WeightProfile& weight, const RationalPoint& point,
                                  const CoefficientTable& table, IntegralMethod method) {
  const StepSeries series = step_series(weight.lower(), weight.delta(), point, table);
  CompensatedSum total;
  for (std::size_t i = 0; i < series.pieces(); ++i) {
    const double lo = series.edges[i];
    const double hi = series.edges[i + 1];
    const Complex s = method == IntegralMethod::kExactStep ? series.values[i]
                                                           : short_sum(0.5 * (lo + hi), point, table);
    total.add(std::norm(s) * piece_weight(weight, lo, hi));
  }
  MeanSquareResult r;
  r.M = weight.M();
  r.delta = weight.delta();
  r.point = point;
  r.integral = total.value();
  r.ratio = r.integral / (r.delta * std::sqrt(r.M));
  r.method = method;
  return r;
}

DiagonalPiece diagonal_piece(std::int64_t n, std::int64_t k, const WeightProfile& weight,
                             const DiagonalOptions& options) {
  if (n < 1 || k < 1) throw ValidationError("diagonal_piece: n and k must be positive");
  const double shift = phase_shift(options.phase);
  const double kk = static_cast<double>(k);
  const double rn = std::sqrt(static_cast<double>(n));
  const double breaks[] = {weight.lower() + weight.rise(), weight.upper() - weight.rise()};

  // Slowly varying part: w x^(1/2) (1 - cos(A - B)) = 2 w x^(1/2) sin^2((A - B)/2).
  const auto smooth = [&](double x) {
    const double half_gap = 2.0 * std::numbers::pi * rn * root_shift_gap(x) / kk;
    const double s = std::sin(half_gap);
    return 2.0 * weight(x) * std::sqrt(x) * s * s;
  };
  QuadratureOptions smooth_options = options.quadrature;
  smooth_options.nodes_per_panel = 10;
  smooth_options.tolerance = 1e-10 * weight.delta() * std::sqrt(weight.upper());
  const auto smooth_part = integrate_smooth(smooth, weight.lower(), weight.upper(), breaks, weight.rise() / 2.0,
                                            smooth_options);

  DiagonalPiece piece;
  piece.value = smooth_part.value.real();
  piece.accurate = smooth_part.accurate;

  // (cos A - cos B)^2 - (1 - cos(A - B)) = cos(2A)/2 + cos(2B)/2 - cos(A + B).
  const RationalPoint point = RationalPoint::make(k == 1 ? 0 : 1, k);
  const PhaseSpec twice_a = sum_spec(n, n, Argument::kShifted, Argument::kShifted, point);
  const PhaseSpec twice_b = sum_spec(n, n, Argument::kPlain, Argument::kPlain, point);
  const PhaseSpec a_plus_b = sum_spec(n, n, Argument::kShifted, Argument::kPlain, point);
  if (phase_cycles(weight, twice_a) > options.cycle_budget_per_n) {
    piece.flagged = true;
    piece.allowance = 0.5 * jm_bound(make_certificate(weight, twice_a, 1)) +
                      0.5 * jm_bound(make_certificate(weight, twice_b, 1)) +
                      jm_bound(make_certificate(weight, a_plus_b, 1));
    return piece;
  }
  // Absolute tolerance floored at the rounding level of the amplitude integral.
  QuadratureOptions osc_options = options.quadrature;
  osc_options.tolerance = std::max(osc_options.tolerance, 1e-12 * weight.delta() * std::sqrt(weight.upper()));
  const auto i1 = oscillatory_integral(weight, twice_a, osc_options);
  const auto i2 = oscillatory_integral(weight, twice_b, osc_options);
  const auto i3 = oscillatory_integral(weight, a_plus_b, osc_options);
  const Complex rotation = std::polar(1.0, 2.0 * shift);
  piece.value += (rotation * (0.5 * i1.value + 0.5 * i2.value - i3.value)).real();
  piece.accurate = piece.accurate && i1.accurate && i2.accurate && i3.accurate;
  return piece;
}

DiagonalResult diagonal_term(const WeightProfile& weight, std::int64_t k, const CoefficientTable& table,
                             const DiagonalOptions& options) {
  const std::int64_t n_max =
      options.n_max > 0 ? options.n_max : static_cast<std::int64_t>(std::floor(weight.M()));
  if (n_max > table.size()) {
    throw TableTooShort("diagonal_term: needs a(" + std::to_string(n_max) + "), table stops at " +
                        std::to_string(table.size()));
  }
  const double prefactor = static_cast<double>(k) / (2.0 * std::numbers::pi * std::numbers::pi);
  CompensatedSum small, large, allowance;
  DiagonalResult out;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const double an = table.a(n);
    const double coeff = prefactor * an * an * std::pow(static_cast<double>(n), -1.5);
    if (coeff == 0.0) continue;
    const DiagonalPiece piece = diagonal_piece(n, k, weight, options);
    (n <= k * k ? small : large).add(coeff * piece.value);
    allowance.add(coeff * piece.allowance);
    out.flagged += piece.flagged ? 1 : 0;
    out.accurate = out.accurate && piece.accurate;
    ++out.terms;
  }
  out.small_n_part = small.value();
  out.large_n_part = large.value();
  out.value = out.small_n_part + out.large_n_part;
  out.allowance = allowance.value();
  return out;
}

IdentityCheck diag_identity_check(std::int64_t n, std::int64_t k, std::span<const double> xs,
                                  PhaseConvention phase) {
  if (n < 1 || k < 1) throw ValidationError("diag_identity_check: n and k must be positive");
  const double shift = phase_shift(phase);
  const double c = 4.0 * std::numbers::pi * std::sqrt(static_cast<double>(n)) / static_cast<double>(k);
  IdentityCheck out;
  std::vector<double> factors;
  for (const double x : xs) {
    // Reduced mod 2 pi; both squared sines are pi-periodic in the half sum and difference.
    const double A = static_cast<double>(std::remainder(static_cast<long double>(c) * std::sqrt(static_cast<long double>(x) + std::sqrt(static_cast<long double>(x))) + shift, 2.0L * std::numbers::pi_v<long double>));
    const double B = static_cast<double>(std::remainder(static_cast<long double>(c) * std::sqrt(static_cast<long double>(x)) + shift, 2.0L * std::numbers::pi_v<long double>));
    const double lhs = std::pow(std::cos(A) - std::cos(B), 2);
    const double s1 = std::sin(0.5 * (A + B));
    const double s2 = std::sin(0.5 * (A - B));
    const double product = s1 * s1 * s2 * s2;
    out.max_discrepancy = std::max(out.max_discrepancy, std::abs(lhs - 4.0 * product));
    out.max_discrepancy_unscaled = std::max(out.max_discrepancy_unscaled, std::abs(lhs - product));
    if (product > 1e-6) factors.push_back(lhs / product);
  }
  if (!factors.empty()) out.factor = median(factors);
  return out;
}

double offdiagonal_majorant_sum(std::int64_t L) {
  CompensatedSum total;
  for (std::int64_t n = 2; n <= L; ++n) {
    const double tn = std::pow(static_cast<double>(n), -0.25);
    for (std::int64_t m = 1; m < n; ++m) {
      total.add(tn * std::pow(static_cast<double>(m), -0.75) / static_cast<double>(n - m));
    }
  }
  return total.value();
}

OffDiagonalReport offdiagonal_crosscheck(const WeightProfile& weight, const RationalPoint& point,
                                         const CoefficientTable& table, std::int64_t n_trunc,
                                         PhaseConvention phase, const QuadratureOptions& options) {
  if (weight.M() > 2000.0) throw ValidationError("offdiagonal_crosscheck: M must be <= 2000");
  if (n_trunc < 1 || n_trunc > 200) throw ValidationError("offdiagonal_crosscheck: N must be in [1, 200]");
  if (n_trunc > table.size()) throw TableTooShort("offdiagonal_crosscheck: table shorter than N");

  const double k = static_cast<double>(point.k());
  const double prefactor = k / (2.0 * std::numbers::pi * std::numbers::pi);
  const Complex rotation = std::polar(1.0, 2.0 * phase_shift(phase));

  OffDiagonalReport report;
  DiagonalOptions diag_options;
  diag_options.n_max = n_trunc;
  diag_options.cycle_budget_per_n = options.max_cycles;
  diag_options.phase = phase;
  diag_options.quadrature = options;
  const DiagonalResult diag = diagonal_term(weight, point.k(), table, diag_options);
  report.diagonal = diag.value;
  report.accurate = diag.accurate;

  const PhaseTable roots(point);  // e(r h / k); the cross factor needs e_k((m - n) h_bar)
  CompensatedSum off;
  for (std::int64_t n = 2; n <= n_trunc; ++n) {
    const double an = table.a(n);
    if (an == 0.0) continue;
    for (std::int64_t m = 1; m < n; ++m) {
      const double am = table.a(m);
      if (am == 0.0) continue;
      // cos u cos v = (cos(u + v) + cos(u - v)) / 2 on the four products.
      const PhaseSpec s_aa = sum_spec(n, m, Argument::kShifted, Argument::kShifted, point);
      const PhaseSpec s_ab = sum_spec(n, m, Argument::kShifted, Argument::kPlain, point);
      const PhaseSpec s_ba = sum_spec(n, m, Argument::kPlain, Argument::kShifted, point);
      const PhaseSpec s_bb = sum_spec(n, m, Argument::kPlain, Argument::kPlain, point);
      PhaseSpec d_aa{PhaseFamily::kDifference, m, n, point, +1, Argument::kShifted, Argument::kShifted};
      PhaseSpec d_bb{PhaseFamily::kDifference, m, n, point, +1, Argument::kPlain, Argument::kPlain};
      PhaseSpec d_ab{PhaseFamily::kShiftedDifference, n, m, point, +1, Argument::kPlain, Argument::kPlain};
      PhaseSpec d_ba{PhaseFamily::kShiftedDifference, m, n, point, -1, Argument::kPlain, Argument::kPlain};

      Complex sums{0.0, 0.0};
      Complex diffs{0.0, 0.0};
      const auto add = [&](Complex& acc, const PhaseSpec& spec, double sign) {
        const auto q = oscillatory_integral(weight, spec, options);
        report.accurate = report.accurate && q.accurate;
        ++report.cross_integrals;
        acc += sign * q.value;
      };
      add(sums, s_aa, 0.5);
      add(sums, s_ab, -0.5);
      add(sums, s_ba, -0.5);
      add(sums, s_bb, 0.5);
      add(diffs, d_aa, 0.5);
      add(diffs, d_ab, -0.5);
      add(diffs, d_ba, -0.5);
      add(diffs, d_bb, 0.5);
      const double cross = (rotation * sums).real() + diffs.real();
      const double twist = e_k((m - n) * point.h_bar(), point.k()).real();
      off.add(2.0 * prefactor * an * am * std::pow(static_cast<double>(n * m), -0.75) * twist * cross);
    }
  }
  report.off_diagonal = off.value();
  report.expansion_total = report.diagonal + report.off_diagonal;
  report.theorem_integral = theorem_integral(weight, point, table).integral;
  report.relative_gap = std::abs(report.expansion_total - report.theorem_integral) / report.theorem_integral;
  report.error_allowance = k * k * weight.delta();
  report.majorant = k * k * std::sqrt(weight.M()) *
                    offdiagonal_majorant_sum(static_cast<std::int64_t>(std::floor(weight.M())));
  return report;
}

OmegaStatistic omega_statistic(std::span<const double> Ms, double delta, const CoefficientTable& table) {
  if (!(delta > 0.0)) throw ValidationError("omega_statistic: Delta must be positive");
  OmegaStatistic out;
  CompensatedSum squares;
  for (const double M : Ms) {
    OmegaRow row;
    row.M = M;
    row.sum = unweighted_window_sum(M, delta, table);
    row.normalized = std::abs(row.sum) / std::sqrt(delta);
    out.max = std::max(out.max, row.normalized);
    squares.add(row.normalized * row.normalized);
    out.rows.push_back(row);
  }
  if (!out.rows.empty()) out.rms = std::sqrt(squares.value() / static_cast<double>(out.rows.size()));
  return out;
}

std::vector<double> seeded_window_starts(std::uint64_t seed, std::size_t count, std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw ValidationError("seeded_window_starts: empty range");
  // mt19937_64 output is fixed by the standard; the mapping below avoids
  // implementation-defined distributions.
  std::mt19937_64 rng(seed);
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  std::vector<double> starts;
  starts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) starts.push_back(static_cast<double>(lo + static_cast<std::int64_t>(rng() % span)));
  return starts;
}

ExponentFit exponent_fit(std::span<const MeanSquareResult> results) {
  if (results.size() < 6) throw ValidationError("exponent_fit: need at least 6 results");
  double m_lo = results.front().M, m_hi = results.front().M;
  std::set<std::int64_t> ks;
  std::vector<std::vector<double>> rows;
  std::vector<double> y;
  for (const auto& r : results) {
    if (!(r.integral > 0.0 && r.delta > 0.0 && r.M > 0.0)) {
      throw ValidationError("exponent_fit: integrals, Delta and M must be positive");
    }
    m_lo = std::min(m_lo, r.M);
    m_hi = std::max(m_hi, r.M);
    ks.insert(r.point.k());
    rows.push_back({1.0, std::log(r.M), std::log(static_cast<double>(r.point.k()))});
    y.push_back(std::log(r.integral / r.delta));
  }
  if (m_hi < 10.0 * m_lo) throw ValidationError("exponent_fit: M must span at least one decade");
  if (ks.size() < 2) throw ValidationError("exponent_fit: need at least two distinct k");
  const auto beta = least_squares(rows, y);
  ExponentFit fit;
  fit.C = std::exp(beta[0]);
  fit.alpha = beta[1];
  fit.beta = beta[2];
  double ss = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double r = y[i] - (beta[0] + beta[1] * rows[i][1] + beta[2] * rows[i][2]);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / static_cast<double>(rows.size()));
  return fit;
}

}  // namespace cusplab
