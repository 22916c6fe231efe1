#pragma once

#include <complex>
#include <cstdint>

namespace cusplab {

/// A reduced fraction h/k in [0, 1) together with the inverse of h mod k.
/// h = 0 is only representable as 0/1 (the untwisted sum), with h_bar = 0.
class RationalPoint {
public:
  /// Reduces (h, k) to lowest terms. Requires k >= 1 and 0 <= h < k.
  static RationalPoint make(std::int64_t h, std::int64_t k);

  std::int64_t h() const noexcept { return h_; }
  std::int64_t k() const noexcept { return k_; }
  std::int64_t h_bar() const noexcept { return h_bar_; }
  double value() const noexcept { return static_cast<double>(h_) / static_cast<double>(k_); }

  /// (n * h) mod k in [0, k), exact for any 64-bit n.
  std::int64_t phase_numerator(std::int64_t n) const noexcept;

  friend bool operator==(const RationalPoint&, const RationalPoint&) = default;

private:
  RationalPoint(std::int64_t h, std::int64_t k, std::int64_t h_bar) : h_(h), k_(k), h_bar_(h_bar) {}
  std::int64_t h_ = 0;
  std::int64_t k_ = 1;
  std::int64_t h_bar_ = 0;
};

inline RationalPoint make_rational_point(std::int64_t h, std::int64_t k) { return RationalPoint::make(h, k); }

/// Inverse of a modulo m (m >= 1, gcd(a, m) = 1), in [0, m).
std::int64_t mod_inverse(std::int64_t a, std::int64_t m);

/// Non-negative residue of a mod m.
std::int64_t mod_floor(std::int64_t a, std::int64_t m) noexcept;

/// e(x) = exp(2 pi i x). The argument is reduced mod 1 first; multiples of
/// 1/4 come out exact.
std::complex<double> e(double x);

/// e_k(a) = e(a / k) with a reduced mod k in integer arithmetic.
std::complex<double> e_k(std::int64_t a, std::int64_t k);

}  // namespace cusplab
