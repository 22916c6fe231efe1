#include "cusplab/rational.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "cusplab/error.hpp"

namespace cusplab {

std::int64_t mod_floor(std::int64_t a, std::int64_t m) noexcept {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
  if (m < 1) throw ValidationError("mod_inverse: modulus must be positive");
  if (m == 1) return 0;
  // Extended Euclid on (a mod m, m).
  std::int64_t old_r = mod_floor(a, m), r = m;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    old_r -= q * r;
    std::swap(old_r, r);
    old_s -= q * s;
    std::swap(old_s, s);
  }
  if (old_r != 1) {
    throw ValidationError("mod_inverse: " + std::to_string(a) + " is not invertible mod " + std::to_string(m));
  }
  return mod_floor(old_s, m);
}

RationalPoint RationalPoint::make(std::int64_t h, std::int64_t k) {
  if (k < 1) throw ValidationError("rational point: k must be >= 1, got " + std::to_string(k));
  if (h < 0 || h >= k) {
    throw ValidationError("rational point: need 0 <= h < k, got h=" + std::to_string(h) +
                          ", k=" + std::to_string(k));
  }
  const std::int64_t g = std::gcd(h, k);  // gcd(0, k) = k, which sends 0/k to 0/1
  const std::int64_t hr = h / g;
  const std::int64_t kr = k / g;
  return RationalPoint(hr, kr, kr == 1 ? 0 : mod_inverse(hr, kr));
}

std::int64_t RationalPoint::phase_numerator(std::int64_t n) const noexcept {
  const auto prod = static_cast<__int128>(n) * h_;
  auto r = static_cast<std::int64_t>(prod % k_);
  return r < 0 ? r + k_ : r;
}

std::complex<double> e(double x) {
  if (!std::isfinite(x)) throw ValidationError("e(x): non-finite argument");
  // Quarter-turn reduction: x = q/4 + s with |s| <= 1/8, exact in binary.
  const double quarters = std::nearbyint(4.0 * (x - std::floor(x)));
  const double s = (x - std::floor(x)) - quarters / 4.0;
  const double angle = 2.0 * std::numbers::pi * s;
  const double c = std::cos(angle);
  const double sn = std::sin(angle);
  switch (static_cast<int>(quarters) & 3) {
    case 0: return {c, sn};
    case 1: return {-sn, c};
    case 2: return {-c, -sn};
    default: return {sn, -c};
  }
}

std::complex<double> e_k(std::int64_t a, std::int64_t k) {
  if (k < 1) throw ValidationError("e_k: k must be >= 1, got " + std::to_string(k));
  const std::int64_t r = mod_floor(a, k);
  // Quarter-turn handled in integers when 4r/k is integral.
  if ((4 * static_cast<__int128>(r)) % k == 0) {
    switch (static_cast<int>(4 * static_cast<__int128>(r) / k)) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  return e(static_cast<double>(r) / static_cast<double>(k));
}

}  // namespace cusplab
