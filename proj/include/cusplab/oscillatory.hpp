#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cusplab/rational.hpp"
#include "cusplab/weight.hpp"

namespace cusplab {

/// The three phase shapes met when the squared short sum is expanded.
///   kSum:               s (2 sqrt(n T_n(x)) + 2 sqrt(m T_m(x))) / k
///   kDifference:        s (2 sqrt(n T(x))   - 2 sqrt(m T(x)))   / k, one T for both
///   kShiftedDifference: s (2 sqrt(m (x + sqrt x)) - 2 sqrt(n x)) / k
/// T(x) is either x or x + sqrt(x).
enum class PhaseFamily { kSum, kDifference, kShiftedDifference };
enum class Argument { kPlain, kShifted };

const char* to_string(PhaseFamily f) noexcept;

struct PhaseSpec {
  PhaseFamily family = PhaseFamily::kSum;
  std::int64_t m = 1;
  std::int64_t n = 1;
  RationalPoint point = RationalPoint::make(0, 1);
  int sign = +1;
  Argument arg_n = Argument::kPlain;  // T on the n-radical (kSum, kDifference)
  Argument arg_m = Argument::kPlain;  // T on the m-radical (kSum; must equal arg_n for kDifference)

  PhaseSpec conjugate() const {
    PhaseSpec c = *this;
    c.sign = -sign;
    return c;
  }
};

/// B(x) in cycles (the integrand is e(B(x))) and its derivative.
class Phase {
public:
  explicit Phase(const PhaseSpec& spec);
  double value(double x) const noexcept;
  double derivative(double x) const noexcept;
  const PhaseSpec& spec() const noexcept { return spec_; }

private:
  double radical(double coeff, Argument arg, double x) const noexcept;
  double radical_derivative(double coeff, Argument arg, double x) const noexcept;

  PhaseSpec spec_;
  double k_;
  double root_m_;
  double root_n_;
};

inline Phase build_phase(const PhaseSpec& spec) { return Phase(spec); }

struct QuadratureOptions {
  double max_cycles = 1e6;          // refuse beyond this many oscillations
  int nodes_per_panel = 20;         // Gauss-Legendre order per panel
  double cycles_per_panel = 1.0;    // 20 nodes per cycle on the first level
  double tolerance = 1e-8;          // absolute change between refinements
  int max_refinements = 4;
};

struct QuadratureResult {
  std::complex<double> value;
  double refinement_change = 0.0;   // |I_last - I_previous|
  bool accurate = false;            // refinement_change <= tolerance
  std::int64_t evaluations = 0;
  int refinements = 0;
};

/// integral over [a, b] of amplitude(x) e(B(x)) dx. Panels are no wider than
/// `cycles_per_panel / |B'|` locally and never straddle any of `breaks`; the
/// panel set is halved until two successive levels agree to `tolerance`.
/// Throws BudgetExceeded when |B(b) - B(a)| exceeds max_cycles.
QuadratureResult integrate_oscillatory(const std::function<double(double)>& amplitude, const Phase& phase,
                                       double a, double b, std::span<const double> breaks,
                                       double max_panel_width, const QuadratureOptions& options = {});

/// Non-oscillatory variant: integral of f over [a, b] on the same panel and
/// refinement scheme.
QuadratureResult integrate_smooth(const std::function<double(double)>& f, double a, double b,
                                  std::span<const double> breaks, double max_panel_width,
                                  const QuadratureOptions& options = {});

/// integral of w(x) x^(1/2) e(B(x)) over the support of w.
QuadratureResult oscillatory_integral(const WeightProfile& weight, const PhaseSpec& spec,
                                      const QuadratureOptions& options = {});

/// Number of cycles of e(B) over the support of w.
double phase_cycles(const WeightProfile& weight, const PhaseSpec& spec);

/// Inputs to the first-derivative bound A0 (A1 B1)^(-P) (1 + A1/rho)^P (b - a).
struct BoundCertificate {
  double A0 = 1.0;   // amplitude scale
  double A1 = 1.0;   // derivative scale of the amplitude
  double B1 = 1.0;   // lower bound for |B'| on the interval
  double rho = 1.0;  // analyticity radius of B around the interval
  int P = 1;
  double length = 1.0;
};

double jm_bound(const BoundCertificate& cert);

/// Certificate for w(x) x^(1/2) e(B(x)): A0 = sqrt(M + Delta), A1 = r,
/// B1 = min |B'| over the support (dense scan), rho = Delta / 2.
BoundCertificate make_certificate(const WeightProfile& weight, const PhaseSpec& spec, int P);

/// Right-hand side of the stated oscillatory bounds with implied constant 1:
///   kSum:            (sqrt n + sqrt m)^(-P)    Delta^(1-P) k^P M^(P/2)
///   difference kinds |sqrt n - sqrt m|^(-P)   Delta^(1-P) k^P M^(P/2)
double stated_bound(const WeightProfile& weight, const PhaseSpec& spec, int P);

struct LemmaCheck {
  std::complex<double> integral;
  double bound = 0.0;        // stated_bound
  double ratio = 0.0;        // |integral| / bound
  double certificate = 0.0;  // jm_bound(make_certificate(...))
  bool accurate = false;
};

/// Evaluate the integral and compare with stated_bound. Difference families
/// require m != n.
LemmaCheck lemma_bound_check(const PhaseSpec& spec, int P, const WeightProfile& weight,
                             const QuadratureOptions& options = {});

struct DerivativeCheck {
  double min_ratio = 0.0;  // min over the grid of |B'(x)| 4 k sqrt(x) / (3 |sqrt m - sqrt n|)
  double argmin = 0.0;
};

/// Lower-bound check for the shifted-difference phase, case n > m.
DerivativeCheck shifted_derivative_check(const PhaseSpec& spec, std::span<const double> grid);

/// Smallest grid point from which the ratio stays >= 1 over the rest of the
/// grid (grid sorted ascending); NaN if it fails at the last point.
double shifted_derivative_threshold(const PhaseSpec& spec, std::span<const double> grid);

/// Two-term expansion (sqrt m - sqrt n)/(k sqrt x) + sqrt m / (8 k sqrt x (x + sqrt x))
/// of B' for the shifted-difference phase (sign +1), and the exact B' in
/// extended precision; residual = exact - expansion.
struct ExpansionResidual {
  long double exact;
  long double expansion;
  long double residual;
};
ExpansionResidual shifted_derivative_expansion(const PhaseSpec& spec, double x);

}  // namespace cusplab
