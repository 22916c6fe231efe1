#include "cusplab/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cusplab/error.hpp"
#include "cusplab/numeric.hpp"

namespace cusplab {

namespace {

struct Panel {
  double lo;
  double hi;
};

void validate(const PhaseSpec& spec) {
  if (spec.m < 1 || spec.n < 1) throw ValidationError("phase: m and n must be positive");
  if (spec.sign != 1 && spec.sign != -1) throw ValidationError("phase: sign must be +1 or -1");
  if (spec.family == PhaseFamily::kDifference && spec.arg_n != spec.arg_m) {
    throw ValidationError("phase: the difference family uses one argument for both radicals");
  }
}

std::vector<Panel> build_panels(const Phase& phase, double a, double b, std::span<const double> breaks,
                                double max_width, double cycles_per_panel) {
  std::vector<double> cuts{a};
  for (const double c : breaks) {
    if (c > a && c < b) cuts.push_back(c);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());

  std::vector<Panel> panels;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double end = cuts[s + 1];
    double x = cuts[s];
    while (x < end) {
      double h = max_width;
      const double d0 = std::abs(phase.derivative(x));
      if (d0 > 0.0) h = std::min(h, cycles_per_panel / d0);
      const double d1 = std::abs(phase.derivative(std::min(x + h, end)));
      if (d1 > 0.0) h = std::min(h, cycles_per_panel / d1);
      double next = x + h;
      if (end - next < 0.25 * h) next = end;
      panels.push_back({x, next});
      x = next;
    }
  }
  return panels;
}

std::complex<double> integrate_level(const std::function<double(double)>& amplitude, const Phase& phase,
                                     const std::vector<Panel>& panels, int split, int order,
                                     std::int64_t& evaluations) {
  const GaussRule& rule = gauss_legendre(order);
  CompensatedComplexSum total;
  for (const auto& p : panels) {
    const double width = (p.hi - p.lo) / split;
    for (int s = 0; s < split; ++s) {
      const double lo = p.lo + s * width;
      const double half = 0.5 * width;
      const double mid = lo + half;
      std::complex<double> acc{0.0, 0.0};
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = mid + half * rule.nodes[i];
        const double amp = amplitude(x);
        if (amp != 0.0) acc += (rule.weights[i] * amp) * e(phase.value(x));
      }
      evaluations += static_cast<std::int64_t>(rule.nodes.size());
      total.add(acc * half);
    }
  }
  return total.value();
}

double root_gap(std::int64_t m, std::int64_t n) {
  // sqrt(n) - sqrt(m) without cancellation.
  return static_cast<double>(n - m) / (std::sqrt(static_cast<double>(n)) + std::sqrt(static_cast<double>(m)));
}

}  // namespace

const char* to_string(PhaseFamily f) noexcept {
  switch (f) {
    case PhaseFamily::kSum: return "sum";
    case PhaseFamily::kDifference: return "difference";
    default: return "shifted-difference";
  }
}

Phase::Phase(const PhaseSpec& spec)
    : spec_(spec),
      k_(static_cast<double>(spec.point.k())),
      root_m_(std::sqrt(static_cast<double>(spec.m))),
      root_n_(std::sqrt(static_cast<double>(spec.n))) {
  validate(spec);
}

double Phase::radical(double coeff, Argument arg, double x) const noexcept {
  const double rx = std::sqrt(x);
  return coeff * (arg == Argument::kPlain ? rx : std::sqrt(x + rx));
}

double Phase::radical_derivative(double coeff, Argument arg, double x) const noexcept {
  const double rx = std::sqrt(x);
  if (arg == Argument::kPlain) return coeff / (2.0 * rx);
  return coeff * (1.0 + 0.5 / rx) / (2.0 * std::sqrt(x + rx));
}

double Phase::value(double x) const noexcept {
  double v = 0.0;
  switch (spec_.family) {
    case PhaseFamily::kSum:
      v = 2.0 * (radical(root_n_, spec_.arg_n, x) + radical(root_m_, spec_.arg_m, x));
      break;
    case PhaseFamily::kDifference:
      v = 2.0 * radical(root_gap(spec_.m, spec_.n), spec_.arg_n, x);
      break;
    case PhaseFamily::kShiftedDifference:
      v = 2.0 * (radical(root_m_, Argument::kShifted, x) - radical(root_n_, Argument::kPlain, x));
      break;
  }
  return spec_.sign * v / k_;
}

double Phase::derivative(double x) const noexcept {
  double d = 0.0;
  switch (spec_.family) {
    case PhaseFamily::kSum:
      d = 2.0 * (radical_derivative(root_n_, spec_.arg_n, x) + radical_derivative(root_m_, spec_.arg_m, x));
      break;
    case PhaseFamily::kDifference:
      d = 2.0 * radical_derivative(root_gap(spec_.m, spec_.n), spec_.arg_n, x);
      break;
    case PhaseFamily::kShiftedDifference:
      d = 2.0 * (radical_derivative(root_m_, Argument::kShifted, x) - radical_derivative(root_n_, Argument::kPlain, x));
      break;
  }
  return spec_.sign * d / k_;
}

QuadratureResult integrate_oscillatory(const std::function<double(double)>& amplitude, const Phase& phase,
                                       double a, double b, std::span<const double> breaks,
                                       double max_panel_width, const QuadratureOptions& options) {
  if (!(b > a)) throw ValidationError("integrate_oscillatory: empty interval");
  if (!(max_panel_width > 0.0)) throw ValidationError("integrate_oscillatory: panel width must be positive");
  const double cycles = std::abs(phase.value(b) - phase.value(a));
  if (cycles > options.max_cycles) {
    throw BudgetExceeded("oscillatory integral: " + std::to_string(cycles) + " cycles exceeds the budget of " +
                         std::to_string(options.max_cycles));
  }
  const auto panels = build_panels(phase, a, b, breaks, max_panel_width, options.cycles_per_panel);

  QuadratureResult result;
  auto previous = integrate_level(amplitude, phase, panels, 1, options.nodes_per_panel, result.evaluations);
  int split = 1;
  for (int level = 1; level <= options.max_refinements; ++level) {
    split *= 2;
    const auto current = integrate_level(amplitude, phase, panels, split, options.nodes_per_panel, result.evaluations);
    result.value = current;
    result.refinement_change = std::abs(current - previous);
    result.refinements = level;
    previous = current;
    if (result.refinement_change <= options.tolerance) break;
  }
  result.accurate = result.refinement_change <= options.tolerance;
  return result;
}

QuadratureResult integrate_smooth(const std::function<double(double)>& f, double a, double b,
                                  std::span<const double> breaks, double max_panel_width,
                                  const QuadratureOptions& options) {
  // Equal radicals in the difference family give B == 0.
  PhaseSpec flat;
  flat.family = PhaseFamily::kDifference;
  return integrate_oscillatory(f, Phase(flat), a, b, breaks, max_panel_width, options);
}

QuadratureResult oscillatory_integral(const WeightProfile& weight, const PhaseSpec& spec,
                                      const QuadratureOptions& options) {
  const Phase phase(spec);
  const double breaks[] = {weight.lower() + weight.rise(), weight.upper() - weight.rise()};
  const auto amplitude = [&weight](double x) { return weight(x) * std::sqrt(x); };
  return integrate_oscillatory(amplitude, phase, weight.lower(), weight.upper(), breaks, weight.rise() / 4.0,
                               options);
}

double phase_cycles(const WeightProfile& weight, const PhaseSpec& spec) {
  const Phase phase(spec);
  return std::abs(phase.value(weight.upper()) - phase.value(weight.lower()));
}

double jm_bound(const BoundCertificate& c) {
  if (!(c.A0 > 0.0 && c.A1 > 0.0 && c.B1 > 0.0 && c.rho > 0.0 && c.length > 0.0) || c.P < 0) {
    throw ValidationError("jm_bound: certificate entries must be positive and P >= 0");
  }
  return c.A0 * std::pow(c.A1 * c.B1, -c.P) * std::pow(1.0 + c.A1 / c.rho, c.P) * c.length;
}

BoundCertificate make_certificate(const WeightProfile& weight, const PhaseSpec& spec, int P) {
  const Phase phase(spec);
  constexpr int kScan = 257;
  double b1 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScan; ++i) {
    const double x = weight.lower() + weight.delta() * i / (kScan - 1);
    b1 = std::min(b1, std::abs(phase.derivative(x)));
  }
  BoundCertificate cert;
  cert.A0 = std::sqrt(weight.upper());
  cert.A1 = weight.rise();
  cert.B1 = b1;
  cert.rho = weight.delta() / 2.0;
  cert.P = P;
  cert.length = weight.delta();
  return cert;
}

double stated_bound(const WeightProfile& weight, const PhaseSpec& spec, int P) {
  if (P < 0) throw ValidationError("stated_bound: P must be >= 0");
  const double rm = std::sqrt(static_cast<double>(spec.m));
  const double rn = std::sqrt(static_cast<double>(spec.n));
  double frequency = rn + rm;
  if (spec.family != PhaseFamily::kSum) {
    if (spec.m == spec.n) throw ValidationError("stated_bound: difference families need m != n");
    frequency = std::abs(root_gap(spec.m, spec.n));
  }
  const double k = static_cast<double>(spec.point.k());
  return std::pow(frequency, -P) * std::pow(weight.delta(), 1 - P) * std::pow(k, P) * std::pow(weight.M(), 0.5 * P);
}

LemmaCheck lemma_bound_check(const PhaseSpec& spec, int P, const WeightProfile& weight,
                             const QuadratureOptions& options) {
  if (spec.family != PhaseFamily::kSum && spec.m == spec.n) {
    throw ValidationError("lemma_bound_check: difference families need m != n");
  }
  LemmaCheck check;
  const auto q = oscillatory_integral(weight, spec, options);
  check.integral = q.value;
  check.accurate = q.accurate;
  check.bound = stated_bound(weight, spec, P);
  check.ratio = std::abs(q.value) / check.bound;
  check.certificate = jm_bound(make_certificate(weight, spec, P));
  return check;
}

namespace {

double shifted_ratio(const Phase& phase, const PhaseSpec& spec, double x) {
  const double k = static_cast<double>(spec.point.k());
  return std::abs(phase.derivative(x)) * 4.0 * k * std::sqrt(x) / (3.0 * std::abs(root_gap(spec.m, spec.n)));
}

void require_shifted_case(const PhaseSpec& spec, const char* who) {
  if (spec.family != PhaseFamily::kShiftedDifference) {
    throw ValidationError(std::string(who) + ": needs the shifted-difference family");
  }
  if (spec.n <= spec.m) throw ValidationError(std::string(who) + ": needs n > m");
}

}  // namespace

DerivativeCheck shifted_derivative_check(const PhaseSpec& spec, std::span<const double> grid) {
  require_shifted_case(spec, "shifted_derivative_check");
  if (grid.empty()) throw ValidationError("shifted_derivative_check: empty grid");
  const Phase phase(spec);
  DerivativeCheck out;
  out.min_ratio = std::numeric_limits<double>::infinity();
  for (const double x : grid) {
    const double r = shifted_ratio(phase, spec, x);
    if (r < out.min_ratio) {
      out.min_ratio = r;
      out.argmin = x;
    }
  }
  return out;
}

double shifted_derivative_threshold(const PhaseSpec& spec, std::span<const double> grid) {
  require_shifted_case(spec, "shifted_derivative_threshold");
  const Phase phase(spec);
  double threshold = std::numeric_limits<double>::quiet_NaN();
  for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
    if (shifted_ratio(phase, spec, *it) < 1.0) break;
    threshold = *it;
  }
  return threshold;
}

ExpansionResidual shifted_derivative_expansion(const PhaseSpec& spec, double x) {
  if (spec.family != PhaseFamily::kShiftedDifference) {
    throw ValidationError("shifted_derivative_expansion: needs the shifted-difference family");
  }
  const long double k = static_cast<long double>(spec.point.k());
  const long double rm = std::sqrt(static_cast<long double>(spec.m));
  const long double rn = std::sqrt(static_cast<long double>(spec.n));
  const long double X = x;
  const long double rx = std::sqrt(X);
  const long double shifted = X + rx;
  ExpansionResidual out;
  out.exact = rm * (1.0L + 0.5L / rx) / (k * std::sqrt(shifted)) - rn / (k * rx);
  out.expansion = (rm - rn) / (k * rx) + rm / (8.0L * k * rx * shifted);
  out.residual = out.exact - out.expansion;
  return out;
}

}  // namespace cusplab
