#pragma once

#include <complex>
#include <span>
#include <vector>

namespace cusplab {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
public:
  void add(std::complex<double> z) noexcept {
    re_.add(z.real());
    im_.add(z.imag());
  }
  std::complex<double> value() const noexcept { return {re_.value(), im_.value()}; }

private:
  CompensatedSum re_;
  CompensatedSum im_;
};

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (cached per n; thread-safe).
const GaussRule& gauss_legendre(int n);

/// integral of f over [a, b] with the n-point rule.
template <typename F>
auto gauss_integrate(const F& f, double a, double b, int n) {
  const GaussRule& rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  decltype(f(mid)) acc{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return acc * half;
}

/// Ordinary least squares y ~ X beta via column-pivoted QR.
/// Throws ValidationError when X is rank deficient.
std::vector<double> least_squares(std::span<const std::vector<double>> rows, std::span<const double> y);

}  // namespace cusplab
