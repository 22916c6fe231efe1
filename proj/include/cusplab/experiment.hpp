#pragma once

// Sweep drivers and report writers behind the command-line tool.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cusplab/coeff_engine.hpp"
#include "cusplab/meansquare.hpp"
#include "cusplab/oscillatory.hpp"
#include "cusplab/voronoi.hpp"

namespace cusplab {

inline constexpr const char* kVersion = "1.0.0";

/// Which numerators h are paired with each k.
enum class HPolicy {
  kUnit,        // h = 1, and h = 0 for k = 1
  kAllCoprime,  // every 0 <= h < k with gcd(h, k) = 1
};

struct ExperimentConfig {
  std::filesystem::path table_path = "tau_1000000.bin";
  std::int64_t table_size = 1'000'000;
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 1;
  int threads = 0;  // 0 means hardware concurrency
  bool json = false;

  // Mean-square sweep; Delta = delta_coeff * k * M^delta_exponent clipped to [delta_min, M].
  std::vector<double> Ms{1e4, 3e4, 1e5, 3e5};
  std::vector<std::int64_t> ks{1, 2, 3, 5, 7};
  HPolicy h_policy = HPolicy::kUnit;
  double delta_coeff = 4.0;
  double delta_exponent = 0.55;
  double delta_min = 1e3;
  double rise_fraction = 0.25;
  bool diagonal = true;

  // Quadrature budgets.
  double max_cycles = 1e6;
  double cycle_budget_per_n = 400.0;
  int nodes_per_panel = 20;

  // Oscillatory-bound sweep.
  double lemma_M = 1e4;
  std::vector<std::int64_t> lemma_indices{1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 100};
  std::vector<std::int64_t> lemma_ks{1, 2, 3, 4, 5};
  std::vector<int> lemma_P{1};
  double derivative_x_min = 1e3;
  double derivative_x_max = 1e5;
  int derivative_points = 400;

  // Truncated dual-sum scans.
  std::vector<double> voronoi_Ms{1e4, 1e5};
  std::vector<std::int64_t> voronoi_ks{1, 3, 5};
  int voronoi_samples = 50;
  std::vector<double> voronoi_fractions{1.0 / 16.0, 1.0 / 4.0, 1.0};

  // Window sums.
  int omega_windows = 100;
  double omega_delta = 1e3;
  std::int64_t omega_max_M = 100'000;
  double omega_threshold = 0.1;
};

/// Parse flat `key = value` text (`#` comments, comma-separated lists).
/// Unknown keys and malformed values raise ValidationError.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});
void validate(const ExperimentConfig& config);

/// Canonical `key = value` rendering; parse_config(config_text(c)) == c.
/// Without `include_io` the keys that only steer I/O (out, threads, json)
/// are left out; that form is what the hash and the provenance echo use.
std::string config_text(const ExperimentConfig& config, bool include_io = true);
std::uint64_t config_hash(const ExperimentConfig& config);

double window_length(const ExperimentConfig& config, double M, std::int64_t k);
std::vector<RationalPoint> sweep_points(const ExperimentConfig& config, std::int64_t k);
QuadratureOptions quadrature_options(const ExperimentConfig& config);

/// Loads the cache named by the config, or explains how to create it.
CoefficientTable load_table(const ExperimentConfig& config);

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Results must be
/// written by index so the outcome does not depend on scheduling.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

// ---------------------------------------------------------------- reports

struct Table {
  std::string name;                 // file stem
  std::vector<std::string> header;  // column names carry units / normalisation
  std::vector<std::vector<std::string>> rows;
};

std::string format_real(double v);
std::string to_csv(const Table& table);
std::string to_json(const Table& table, const ExperimentConfig& config);
/// Writes <out_dir>/<name>.csv, plus .json when config.json is set.
void write_table(const Table& table, const ExperimentConfig& config);
void write_text(const std::filesystem::path& path, const std::string& text);

// ---------------------------------------------------------------- coeffs

struct CoeffsSummary {
  std::int64_t size = 0;
  std::uint64_t checksum = 0;
  bool reused = false;
};
/// Generate tau(1..n) and write the cache. With `reuse`, an existing cache of
/// the right length is kept.
CoeffsSummary run_coeffs(std::int64_t n, const std::filesystem::path& path, bool reuse = false);

// ---------------------------------------------------------------- lemmas

struct LemmaRow {
  PhaseFamily family = PhaseFamily::kSum;
  std::int64_t k = 1, m = 1, n = 1;
  int P = 1;
  LemmaCheck check;
};
struct DerivativeRow {
  std::int64_t k = 1, m = 1, n = 1;
  DerivativeCheck check;
};
struct LemmaSweep {
  std::vector<std::vector<double>> weight_constants;  // per rise length: sup |w^(j)| r^j
  std::vector<double> weight_rises;
  std::vector<LemmaRow> rows;
  std::vector<DerivativeRow> derivative_rows;
  bool all_accurate = true;
};
LemmaSweep run_verify_lemmas(const ExperimentConfig& config);
std::vector<Table> lemma_tables(const LemmaSweep& sweep);

// ---------------------------------------------------------------- mean square

struct MeanSquareRow {
  MeanSquareResult result;
  double rise = 0.0;
  std::optional<DiagonalResult> diagonal;
};
struct MeanSquareSweep {
  std::vector<MeanSquareRow> rows;
  ExponentFit fit;
  std::optional<ExponentFit> diagonal_fit;
};
MeanSquareSweep run_meansquare(const ExperimentConfig& config, const CoefficientTable& table);
std::vector<Table> meansquare_tables(const MeanSquareSweep& sweep);
/// Log-log plot of I / Delta against M, one series per k.
std::string meansquare_svg(const MeanSquareSweep& sweep);

// ---------------------------------------------------------------- dual sums

struct VoronoiSample {
  double M = 0.0;
  RationalPoint point = RationalPoint::make(0, 1);
  double x = 0.0;
  double fraction = 0.0;
  std::int64_t n_trunc = 0;
  double err_phase0 = 0.0;
  double err_phase_pi4 = 0.0;
  double err_phase_pi4_constant_removed = 0.0;
};
struct VoronoiSummary {
  double M = 0.0;
  RationalPoint point = RationalPoint::make(0, 1);
  double fraction = 0.0;
  double median_phase0 = 0.0;
  double median_phase_pi4 = 0.0;
  double median_constant_removed = 0.0;
  double decay_phase_pi4 = 0.0;  // median at the previous fraction / this median (NaN for the first)
  double decay_constant_removed = 0.0;
  double constant_term = 0.0;    // |dual_constant_term|
};
struct VoronoiSlope {
  double M = 0.0;
  double fraction = 0.0;
  double slope_phase_pi4 = 0.0;  // d log median / d log k
  double slope_constant_removed = 0.0;
};
struct VoronoiSweep {
  std::vector<VoronoiSample> samples;
  std::vector<VoronoiSummary> summary;
  std::vector<VoronoiSlope> slopes;
};
/// Sample points x_i = M (1 + (i + 0.618) / samples), i < samples.
VoronoiSweep run_voronoi(const ExperimentConfig& config, const CoefficientTable& table);
std::vector<Table> voronoi_tables(const VoronoiSweep& sweep);

// ---------------------------------------------------------------- window sums

struct OmegaRun {
  OmegaStatistic statistic;
  double threshold = 0.0;
  bool passed = false;
};
OmegaRun run_omega(const ExperimentConfig& config, const CoefficientTable& table);
std::vector<Table> omega_tables(const OmegaRun& run, const ExperimentConfig& config);

}  // namespace cusplab
