#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cusplab {

using Int128 = __int128;

std::string to_string(Int128 value);

/// Fourier coefficients of the weight-12 level-1 cusp form
/// Delta = q prod (1 - q^n)^24, both as exact integers tau(n) and in the
/// Deligne normalisation a(n) = tau(n) / n^((weight-1)/2).
///
/// Indexing is 1-based to match the arithmetic: tau(1) == 1. A finished
/// table is immutable and may be shared between threads.
class CoefficientTable {
public:
  CoefficientTable() = default;
  CoefficientTable(int weight, std::vector<Int128> tau);

  int weight() const noexcept { return weight_; }
  std::int64_t size() const noexcept { return static_cast<std::int64_t>(tau_.size()); }

  Int128 tau(std::int64_t n) const { return tau_[static_cast<std::size_t>(n - 1)]; }
  double a(std::int64_t n) const { return a_[static_cast<std::size_t>(n - 1)]; }

  std::span<const Int128> tau_values() const noexcept { return tau_; }
  std::span<const double> a_values() const noexcept { return a_; }

  bool normalized() const noexcept { return a_.size() == tau_.size(); }

  /// Copy with every normalised value replaced; used by tests to build
  /// synthetic tables (all zeros, a single nonzero entry, ...).
  CoefficientTable with_normalized(std::vector<double> a) const;

  friend void normalize(CoefficientTable& table);

private:
  int weight_ = 12;
  std::vector<Int128> tau_;
  std::vector<double> a_;
};

/// Largest N accepted by generate_tau. tau(n) grows like n^5.5 so 128-bit
/// integers run out a little below 10^7; the recurrence still checks every
/// step.
inline constexpr std::int64_t kMaxTableSize = 8'000'000;

/// Exact tau(1..n_max) from the logarithmic-derivative recurrence of
/// prod (1 - q^n)^24 against the sparse pentagonal series. O(N^1.5).
/// Throws OverflowError naming the first n whose value does not fit.
/// The returned table is already normalised.
CoefficientTable generate_tau(std::int64_t n_max);

/// Fill a(n) = tau(n) / n^((weight-1)/2), rounded once to double.
void normalize(CoefficientTable& table);

/// Divisor counts d(1..n_max), linear sieve.
std::vector<std::uint32_t> divisor_counts(std::int64_t n_max);

struct DeligneReport {
  double max_ratio = 0.0;             // max |a(n)| / d(n)
  std::int64_t argmax = 1;
  std::optional<std::int64_t> first_violation;
};

DeligneReport deligne_check(const CoefficientTable& table);

// Cache file, little-endian:
//   "CUSP" | u32 version | u32 weight | u64 N | N x 16-byte two's complement tau(n)
inline constexpr std::uint32_t kCacheVersion = 1;

void save_cache(const CoefficientTable& table, const std::filesystem::path& path);
CoefficientTable load_cache(const std::filesystem::path& path,
                            std::optional<int> expected_weight = 12);

/// Order-dependent 64-bit checksum of the tau sequence (FNV-1a over the
/// cache encoding of each record).
std::uint64_t tau_checksum(const CoefficientTable& table);

}  // namespace cusplab
