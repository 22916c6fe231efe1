#pragma once

// Independent reference computations used only by the tests.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracle {

using Int128 = __int128;

/// q * prod_{n < N} (1 - q^n)^24 multiplied out factor by factor, truncated
/// at q^N. Returns tau(1..N) (index 0 holds tau(1)).
/// Partial products overflow 128 bits, so the work is done modulo 2^128;
/// the final coefficients are far below 2^127 and come back exactly.
inline std::vector<Int128> schoolbook_tau(std::int64_t N) {
  using U128 = unsigned __int128;
  std::vector<U128> c(static_cast<std::size_t>(N), 0);
  c[0] = 1;
  for (std::int64_t n = 1; n < N; ++n) {
    for (int rep = 0; rep < 24; ++rep) {
      for (std::int64_t j = N - 1; j >= n; --j) c[static_cast<std::size_t>(j)] -= c[static_cast<std::size_t>(j - n)];
    }
  }
  return std::vector<Int128>(c.begin(), c.end());
}

inline Int128 ipow(std::int64_t base, int exp) {
  Int128 r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

inline double smooth_step(double t) {
  auto g = [](double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; };
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return g(t) / (g(t) + g(1.0 - t));
}

/// Analytic derivative of psi(t) = g(t) / (g(t) + g(1 - t)), g(t) = exp(-1/t).
inline double smooth_step_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  const double da = a / (t * t), db = b / ((1.0 - t) * (1.0 - t));
  return (da * b + a * db) / ((a + b) * (a + b));
}

/// e(p/q) straight from polar form after integer reduction.
inline std::complex<double> root_of_unity(std::int64_t p, std::int64_t q) {
  const std::int64_t r = ((p % q) + q) % q;
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(q));
}

}  // namespace oracle
