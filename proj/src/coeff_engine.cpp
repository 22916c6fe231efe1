#include "cusplab/coeff_engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iterator>

#include "cusplab/error.hpp"

namespace cusplab {

namespace {

using U128 = unsigned __int128;

constexpr Int128 kInt128Max = static_cast<Int128>(~U128{0} >> 1);

/// Sign-magnitude 192-bit accumulator for sums of (int64 * int128) products.
/// Positive and negative contributions are kept apart so every update is a
/// plain carry chain.
class WideAccumulator {
public:
  // Returns false when a limb carry leaves the 192-bit range.
  bool add_product(std::int64_t factor, Int128 value) {
    if (factor == 0 || value == 0) return true;
    const bool negative = (factor < 0) != (value < 0);
    const std::uint64_t f = factor < 0 ? static_cast<std::uint64_t>(-(factor + 1)) + 1
                                       : static_cast<std::uint64_t>(factor);
    const U128 v = value < 0 ? static_cast<U128>(-(value + 1)) + 1 : static_cast<U128>(value);
    const U128 p0 = static_cast<U128>(static_cast<std::uint64_t>(v)) * f;
    const U128 p1 = static_cast<U128>(static_cast<std::uint64_t>(v >> 64)) * f + (p0 >> 64);
    const std::array<std::uint64_t, 3> prod{static_cast<std::uint64_t>(p0),
                                            static_cast<std::uint64_t>(p1),
                                            static_cast<std::uint64_t>(p1 >> 64)};
    auto& target = negative ? neg_ : pos_;
    U128 carry = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      const U128 s = static_cast<U128>(target[i]) + prod[i] + carry;
      target[i] = static_cast<std::uint64_t>(s);
      carry = s >> 64;
    }
    return carry == 0;
  }

  // Exact quotient (pos - neg) / divisor if it fits in Int128.
  std::optional<Int128> exact_quotient(std::uint64_t divisor) const {
    std::array<std::uint64_t, 3> mag;
    bool negative = false;
    if (std::lexicographical_compare(pos_.rbegin(), pos_.rend(), neg_.rbegin(), neg_.rend())) {
      mag = subtract(neg_, pos_);
      negative = true;
    } else {
      mag = subtract(pos_, neg_);
    }
    std::array<std::uint64_t, 3> quot{};
    U128 rem = 0;
    for (int i = 2; i >= 0; --i) {
      const U128 cur = (rem << 64) | mag[static_cast<std::size_t>(i)];
      quot[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(cur / divisor);
      rem = cur % divisor;
    }
    if (rem != 0 || quot[2] != 0) return std::nullopt;
    const U128 q = (static_cast<U128>(quot[1]) << 64) | quot[0];
    if (q > static_cast<U128>(kInt128Max)) return std::nullopt;
    return negative ? -static_cast<Int128>(q) : static_cast<Int128>(q);
  }

private:
  static std::array<std::uint64_t, 3> subtract(const std::array<std::uint64_t, 3>& a,
                                               const std::array<std::uint64_t, 3>& b) {
    std::array<std::uint64_t, 3> r{};
    std::uint64_t borrow = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      const U128 d = static_cast<U128>(a[i]) - b[i] - borrow;
      r[i] = static_cast<std::uint64_t>(d);
      borrow = (d >> 64) != 0 ? 1 : 0;
    }
    return r;
  }

  std::array<std::uint64_t, 3> pos_{};
  std::array<std::uint64_t, 3> neg_{};
};

struct PentagonalTerm {
  std::int64_t exponent;
  int sign;
};

// prod (1 - q^n) = sum_k (-1)^k q^{k(3k-1)/2}, k over all integers.
std::vector<PentagonalTerm> pentagonal_terms(std::int64_t max_exponent) {
  std::vector<PentagonalTerm> terms;
  for (std::int64_t k = 1;; ++k) {
    const std::int64_t lo = k * (3 * k - 1) / 2;
    const std::int64_t hi = k * (3 * k + 1) / 2;
    const int sign = (k % 2 == 1) ? -1 : 1;
    if (lo > max_exponent) break;
    terms.push_back({lo, sign});
    if (hi <= max_exponent) terms.push_back({hi, sign});
  }
  return terms;
}

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b;
  for (std::size_t i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffU);
  out.write(b.data(), 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b;
  for (std::size_t i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffU);
  out.write(b.data(), 8);
}

std::array<unsigned char, 16> encode_int128(Int128 v) {
  std::array<unsigned char, 16> b;
  const U128 u = static_cast<U128>(v);
  for (std::size_t i = 0; i < 16; ++i) b[i] = static_cast<unsigned char>((u >> (8 * i)) & 0xffU);
  return b;
}

Int128 decode_int128(const unsigned char* b) {
  U128 u = 0;
  for (std::size_t i = 0; i < 16; ++i) u |= static_cast<U128>(b[i]) << (8 * i);
  return static_cast<Int128>(u);
}

std::uint64_t decode_u64(const unsigned char* b, std::size_t width) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

std::string to_string(Int128 value) {
  if (value == 0) return "0";
  const bool negative = value < 0;
  U128 u = negative ? static_cast<U128>(-(value + 1)) + 1 : static_cast<U128>(value);
  std::string digits;
  while (u != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

CoefficientTable::CoefficientTable(int weight, std::vector<Int128> tau)
    : weight_(weight), tau_(std::move(tau)) {
  if (weight_ <= 0 || weight_ % 2 != 0) {
    throw ValidationError("weight must be a positive even integer, got " + std::to_string(weight_));
  }
}

CoefficientTable CoefficientTable::with_normalized(std::vector<double> a) const {
  if (a.size() != tau_.size()) {
    throw ValidationError("normalized override has " + std::to_string(a.size()) +
                          " entries, table has " + std::to_string(tau_.size()));
  }
  CoefficientTable copy = *this;
  copy.a_ = std::move(a);
  return copy;
}

CoefficientTable generate_tau(std::int64_t n_max) {
  if (n_max < 1) throw ValidationError("generate_tau: N must be >= 1");
  if (n_max > kMaxTableSize) {
    throw ValidationError("generate_tau: N = " + std::to_string(n_max) + " exceeds the 128-bit safe limit " +
                          std::to_string(kMaxTableSize));
  }
  constexpr std::int64_t kPower = 24;
  const auto pent = pentagonal_terms(n_max);

  // c[j] is the q^j coefficient of prod (1 - q^n)^24, so tau(j + 1) = c[j].
  std::vector<Int128> c(static_cast<std::size_t>(n_max));
  c[0] = 1;
  for (std::int64_t n = 1; n < n_max; ++n) {
    WideAccumulator acc;
    for (const auto& [j, sign] : pent) {
      if (j > n) break;
      const std::int64_t factor = sign * ((kPower + 1) * j - n);
      if (!acc.add_product(factor, c[static_cast<std::size_t>(n - j)])) {
        throw OverflowError("generate_tau: accumulator overflow at tau(" + std::to_string(n + 1) + ")", n + 1);
      }
    }
    const auto value = acc.exact_quotient(static_cast<std::uint64_t>(n));
    if (!value) {
      throw OverflowError("generate_tau: tau(" + std::to_string(n + 1) + ") does not fit in 128 bits", n + 1);
    }
    c[static_cast<std::size_t>(n)] = *value;
  }
  CoefficientTable table(12, std::move(c));
  normalize(table);
  return table;
}

void normalize(CoefficientTable& table) {
  const long double half_weight = (static_cast<long double>(table.weight_) - 1.0L) / 2.0L;
  table.a_.resize(table.tau_.size());
  for (std::size_t i = 0; i < table.tau_.size(); ++i) {
    const long double n = static_cast<long double>(i + 1);
    // Extended precision keeps the single final rounding dominant.
    table.a_[i] = static_cast<double>(static_cast<long double>(table.tau_[i]) / std::pow(n, half_weight));
  }
}

std::vector<std::uint32_t> divisor_counts(std::int64_t n_max) {
  const auto n = static_cast<std::size_t>(std::max<std::int64_t>(n_max, 0));
  std::vector<std::uint32_t> d(n + 1, 0);
  std::vector<std::uint32_t> min_prime_power(n + 1, 0);  // exponent of the least prime
  std::vector<std::uint32_t> primes;
  std::vector<bool> composite(n + 1, false);
  if (n >= 1) d[1] = 1;
  for (std::size_t i = 2; i <= n; ++i) {
    if (!composite[i]) {
      primes.push_back(static_cast<std::uint32_t>(i));
      d[i] = 2;
      min_prime_power[i] = 1;
    }
    for (const auto p : primes) {
      const std::size_t ip = i * p;
      if (ip > n) break;
      composite[ip] = true;
      if (i % p == 0) {
        min_prime_power[ip] = min_prime_power[i] + 1;
        d[ip] = d[i] / (min_prime_power[i] + 1) * (min_prime_power[ip] + 1);
        break;
      }
      min_prime_power[ip] = 1;
      d[ip] = d[i] * 2;
    }
  }
  return d;
}

DeligneReport deligne_check(const CoefficientTable& table) {
  if (!table.normalized()) throw ValidationError("deligne_check: table is not normalized");
  const auto d = divisor_counts(table.size());
  DeligneReport report;
  report.max_ratio = -1.0;
  for (std::int64_t n = 1; n <= table.size(); ++n) {
    const double ratio = std::abs(table.a(n)) / static_cast<double>(d[static_cast<std::size_t>(n)]);
    if (ratio > report.max_ratio) {
      report.max_ratio = ratio;
      report.argmax = n;
    }
    if (ratio > 1.0 && !report.first_violation) report.first_violation = n;
  }
  if (table.size() == 0) report.max_ratio = 0.0;
  return report;
}

void save_cache(const CoefficientTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write("CUSP", 4);
  put_u32(out, kCacheVersion);
  put_u32(out, static_cast<std::uint32_t>(table.weight()));
  put_u64(out, static_cast<std::uint64_t>(table.size()));
  for (const auto t : table.tau_values()) {
    const auto b = encode_int128(t);
    out.write(reinterpret_cast<const char*>(b.data()), 16);
  }
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

CoefficientTable load_cache(const std::filesystem::path& path, std::optional<int> expected_weight) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open coefficient cache " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  constexpr std::size_t kHeader = 4 + 4 + 4 + 8;
  if (bytes.size() < kHeader) throw IoError(path.string() + ": truncated header");
  if (!std::equal(bytes.begin(), bytes.begin() + 4, "CUSP")) {
    throw IoError(path.string() + ": bad magic, not a coefficient cache");
  }
  const auto version = decode_u64(&bytes[4], 4);
  if (version != kCacheVersion) {
    throw IoError(path.string() + ": unsupported format version " + std::to_string(version));
  }
  const auto weight = static_cast<int>(decode_u64(&bytes[8], 4));
  if (expected_weight && weight != *expected_weight) {
    throw IoError(path.string() + ": weight " + std::to_string(weight) + " does not match expected " +
                  std::to_string(*expected_weight));
  }
  const auto count = decode_u64(&bytes[12], 8);
  if (count > (bytes.size() - kHeader) / 16 || bytes.size() != kHeader + 16 * count) {
    throw IoError(path.string() + ": truncated or oversized body for N = " + std::to_string(count));
  }
  std::vector<Int128> tau(count);
  for (std::size_t i = 0; i < count; ++i) tau[i] = decode_int128(&bytes[kHeader + 16 * i]);
  CoefficientTable table(weight, std::move(tau));
  normalize(table);
  return table;
}

std::uint64_t tau_checksum(const CoefficientTable& table) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto t : table.tau_values()) {
    for (const auto byte : encode_int128(t)) {
      h ^= byte;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

}  // namespace cusplab
