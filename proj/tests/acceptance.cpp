// Acceptance suite. One PASS/FAIL line per criterion; tolerances are pinned
// below. Usage:
//   acceptance --criterion N [--table PATH] [--cli PATH] [--scratch DIR]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cusplab/error.hpp"
#include "cusplab/experiment.hpp"
#include "oracles.hpp"

using namespace cusplab;
namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------- pinned tolerances

constexpr double kTauRuntimeLimit = 5.0;            // seconds, generate_tau(2000)
constexpr std::int64_t kArithmeticLimit = 100'000;  // Hecke / Deligne range

constexpr double kDecayTarget = 2.0;                 // median error ratio under N -> 4N
constexpr double kDecaySlack = 0.6;
constexpr double kEnvelopeExponent = 0.1;            // x^(0.1) stands in for x^eps
constexpr double kEnvelopeQuantile = 0.9;            // C fitted as this quantile at the smallest N
constexpr double kEnvelopeCoverage = 0.9;            // share of later samples that must stay inside
constexpr double kVoronoiRuntimeLimit = 600.0;

constexpr double kAlphaLo = 0.4, kAlphaHi = 0.6;
constexpr double kBetaMax = 0.3;
constexpr double kSpreadMax = 10.0;                  // max / min of I / (Delta sqrt M)
constexpr double kSweepRuntimeLimit = 1800.0;

constexpr double kDiagonalConstant = 1.0;            // D / (Delta sqrt M) <= this on every run
constexpr double kDiagonalGrowthMax = 2.0;           // per k: ratio at largest M / ratio at smallest M
constexpr double kIdentityTolerance = 1e-12;

constexpr double kQuadratureTolerance = 1e-8;
constexpr double kLemmaGrowthMax = 2.0;              // max ratio, upper half of indices / lower half

constexpr int kRiemannSamples = 1'000'000;
constexpr double kRiemannTolerance = 1e-4;
constexpr double kConjugationTolerance = 1e-9;

// Window-sum statistic, calibrated by the first run (seed 1, 100 windows,
// Delta = 10^3, starts in [1, 10^5]) and pinned here.
constexpr double kOmegaFloor = 0.1;
constexpr double kOmegaRecordedMax = 3.738386660597e-01;
constexpr double kOmegaReproduction = 1e-10;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Context {
  fs::path table_path;
  fs::path cli;
  fs::path scratch;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const CoefficientTable& big_table(const Context& ctx) {
  static CoefficientTable table;
  static bool loaded = false;
  if (!loaded) {
    if (!fs::exists(ctx.table_path)) {
      std::printf("generating %s\n", ctx.table_path.string().c_str());
      run_coeffs(1'000'000, ctx.table_path);
    }
    table = load_cache(ctx.table_path);
    loaded = true;
  }
  return table;
}

// ---------------------------------------------------------------- 1

Outcome coefficient_exactness(const Context&) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto t = generate_tau(2000);
  const double elapsed = seconds_since(t0);
  const auto oracle = oracle::schoolbook_tau(2000);
  std::int64_t mismatches = 0;
  for (std::int64_t n = 1; n <= 2000; ++n) mismatches += t.tau(n) != oracle[static_cast<std::size_t>(n - 1)];

  const auto big = generate_tau(kArithmeticLimit);
  std::int64_t hecke_pairs = 0, hecke_fail = 0;
  for (std::int64_t m = 2; m * m <= kArithmeticLimit; ++m) {
    for (std::int64_t n = m + 1; m * n <= kArithmeticLimit; ++n) {
      if (std::gcd(m, n) != 1) continue;
      ++hecke_pairs;
      hecke_fail += big.tau(m * n) != big.tau(m) * big.tau(n);
    }
  }
  std::int64_t power_checks = 0, power_fail = 0;
  std::vector<bool> composite(static_cast<std::size_t>(kArithmeticLimit) + 1, false);
  for (std::int64_t p = 2; p * p <= kArithmeticLimit; ++p) {
    if (composite[static_cast<std::size_t>(p)]) continue;
    for (std::int64_t q = p * p; q <= kArithmeticLimit; q += p) composite[static_cast<std::size_t>(q)] = true;
    const Int128 p11 = oracle::ipow(p, 11);
    Int128 prev = 1;
    for (std::int64_t pr = p; pr * p <= kArithmeticLimit; pr *= p) {
      ++power_checks;
      power_fail += big.tau(pr * p) != big.tau(p) * big.tau(pr) - p11 * prev;
      prev = big.tau(pr);
    }
  }
  const auto deligne = deligne_check(big);

  Outcome o;
  o.pass = mismatches == 0 && elapsed < kTauRuntimeLimit && hecke_fail == 0 && power_fail == 0 &&
           !deligne.first_violation.has_value();
  o.detail = "schoolbook mismatches " + std::to_string(mismatches) + ", tau(2000) in " + fmt(elapsed) + " s, Hecke " +
             std::to_string(hecke_pairs - hecke_fail) + "/" + std::to_string(hecke_pairs) + ", prime powers " +
             std::to_string(power_checks - power_fail) + "/" + std::to_string(power_checks) + ", max |a(n)|/d(n) " +
             fmt(deligne.max_ratio) + (deligne.first_violation ? " VIOLATED at " + std::to_string(*deligne.first_violation) : "");
  return o;
}

// ---------------------------------------------------------------- 2

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const auto i = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size()))) - 1;
  return v[std::min(i, v.size() - 1)];
}

Outcome voronoi_truncation(const Context& ctx) {
  const auto& table = big_table(ctx);
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig c;
  c.voronoi_Ms = {1e4, 1e5};
  c.voronoi_ks = {1, 3, 5};
  c.voronoi_samples = 50;
  c.voronoi_fractions = {1.0 / 16.0, 1.0 / 4.0, 1.0};
  const auto sweep = run_voronoi(c, table);
  const double elapsed = seconds_since(t0);

  int decay_ok = 0, decay_total = 0;
  double decay_lo = INFINITY, decay_hi = -INFINITY, removed_lo = INFINITY, removed_hi = -INFINITY;
  for (const auto& s : sweep.summary) {
    if (std::isnan(s.decay_phase_pi4)) continue;
    ++decay_total;
    decay_ok += std::abs(s.decay_phase_pi4 - kDecayTarget) <= kDecaySlack;
    decay_lo = std::min(decay_lo, s.decay_phase_pi4);
    decay_hi = std::max(decay_hi, s.decay_phase_pi4);
    removed_lo = std::min(removed_lo, s.decay_constant_removed);
    removed_hi = std::max(removed_hi, s.decay_constant_removed);
  }

  // Envelope C k x^(1/2) N^(-1/2) x^0.1, C fitted per convention at the smallest N.
  const double smallest = c.voronoi_fractions.front();
  const auto shape = [](const VoronoiSample& s) {
    return static_cast<double>(s.point.k()) * std::sqrt(s.x) / std::sqrt(static_cast<double>(s.n_trunc)) *
           std::pow(s.x, kEnvelopeExponent);
  };
  const auto inside = [&](auto err_of) {
    std::vector<double> fit;
    for (const auto& s : sweep.samples) if (s.fraction == smallest) fit.push_back(err_of(s) / shape(s));
    const double C = quantile(fit, kEnvelopeQuantile);
    std::size_t later = 0, covered = 0;
    for (const auto& s : sweep.samples) {
      if (s.fraction == smallest) continue;
      ++later;
      covered += err_of(s) <= C * shape(s);
    }
    return static_cast<double>(covered) / static_cast<double>(later);
  };
  const double cover_pi4 = inside([](const VoronoiSample& s) { return s.err_phase_pi4; });
  const double cover_zero = inside([](const VoronoiSample& s) { return s.err_phase0; });
  const int conventions_inside = (cover_pi4 >= kEnvelopeCoverage) + (cover_zero >= kEnvelopeCoverage);

  Outcome o;
  o.pass = decay_ok == decay_total && conventions_inside == 1 && cover_pi4 >= kEnvelopeCoverage &&
           elapsed < kVoronoiRuntimeLimit;
  o.detail = "decay ratios in 2+-0.6: " + std::to_string(decay_ok) + "/" + std::to_string(decay_total) + " (range " +
             fmt(decay_lo) + ".." + fmt(decay_hi) + "), envelope coverage -pi/4 " + fmt(cover_pi4) + ", phase 0 " +
             fmt(cover_zero) + ", " + fmt(elapsed) + " s; diagnostic: with the constant term removed decay ranges " +
             fmt(removed_lo) + ".." + fmt(removed_hi);
  return o;
}

// ---------------------------------------------------------------- 3 and 4

struct SweepRecord {
  double M, delta, integral, diagonal, allowance;
  std::int64_t h, k, flagged;
  bool accurate;
};
struct SweepData {
  std::vector<SweepRecord> rows;
  ExponentFit fit;
  double seconds = 0.0;
};

SweepData default_sweep(const Context& ctx) {
  const ExperimentConfig c;
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash(c)));
  const fs::path cache = ctx.scratch / "default_sweep.json";
  const auto table_sum = tau_checksum(big_table(ctx));
  if (fs::exists(cache)) {
    std::ifstream in(cache);
    const auto j = nlohmann::json::parse(in, nullptr, false);
    if (!j.is_discarded() && j.value("config_hash", "") == hash && j.value("table_checksum", 0ULL) == table_sum) {
      SweepData d;
      for (const auto& r : j["rows"]) {
        d.rows.push_back({r["M"], r["delta"], r["integral"], r["diagonal"], r["allowance"], r["h"], r["k"], r["flagged"],
                          r["accurate"]});
      }
      d.fit = {j["alpha"], j["beta"], j["C"], j["residual_rms"]};
      d.seconds = j["seconds"];
      return d;
    }
  }
  const auto t0 = std::chrono::steady_clock::now();
  const auto sweep = run_meansquare(c, big_table(ctx));
  SweepData d;
  d.seconds = seconds_since(t0);
  d.fit = sweep.fit;
  nlohmann::json j;
  j["config_hash"] = hash;
  j["table_checksum"] = table_sum;
  j["seconds"] = d.seconds;
  j["alpha"] = d.fit.alpha;
  j["beta"] = d.fit.beta;
  j["C"] = d.fit.C;
  j["residual_rms"] = d.fit.residual_rms;
  for (const auto& r : sweep.rows) {
    const SweepRecord rec{r.result.M, r.result.delta, r.result.integral, r.diagonal->value, r.diagonal->allowance,
                          r.result.point.h(), r.result.point.k(), r.diagonal->flagged, r.diagonal->accurate};
    d.rows.push_back(rec);
    j["rows"].push_back({{"M", rec.M}, {"delta", rec.delta}, {"integral", rec.integral}, {"diagonal", rec.diagonal},
                         {"allowance", rec.allowance}, {"h", rec.h}, {"k", rec.k}, {"flagged", rec.flagged},
                         {"accurate", rec.accurate}});
  }
  fs::create_directories(ctx.scratch);
  std::ofstream(cache) << j.dump(1) << "\n";
  return d;
}

Outcome theorem_surrogate(const Context& ctx) {
  const auto d = default_sweep(ctx);
  double lo = INFINITY, hi = -INFINITY;
  std::string lo_at, hi_at;
  for (const auto& r : d.rows) {
    const double ratio = r.integral / (r.delta * std::sqrt(r.M));
    const std::string at = "(M=" + fmt(r.M) + ", " + std::to_string(r.h) + "/" + std::to_string(r.k) + ")";
    if (ratio < lo) { lo = ratio; lo_at = at; }
    if (ratio > hi) { hi = ratio; hi_at = at; }
  }
  Outcome o;
  o.pass = d.fit.alpha >= kAlphaLo && d.fit.alpha <= kAlphaHi && d.fit.beta <= kBetaMax && hi <= kSpreadMax * lo &&
           d.seconds < kSweepRuntimeLimit;
  o.detail = "alpha " + fmt(d.fit.alpha) + ", beta " + fmt(d.fit.beta) + ", I/(Delta sqrt M) from " + fmt(lo) + " " + lo_at +
             " to " + fmt(hi) + " " + hi_at + " (spread " + fmt(hi / lo) + "), " + std::to_string(d.rows.size()) +
             " runs in " + fmt(d.seconds) + " s";
  return o;
}

Outcome diagonal_consistency(const Context& ctx) {
  const auto d = default_sweep(ctx);
  double worst = 0.0, worst_growth = 0.0, worst_excess = -INFINITY;
  bool accurate = true;
  std::int64_t flagged = 0;
  std::map<std::pair<std::int64_t, std::int64_t>, std::map<double, double>> by_point;
  for (const auto& r : d.rows) {
    const double ratio = r.diagonal / (r.delta * std::sqrt(r.M));
    worst = std::max(worst, ratio);
    by_point[{r.h, r.k}][r.M] = ratio;
    const double allowance = static_cast<double>(r.k * r.k) * r.delta + r.allowance;
    worst_excess = std::max(worst_excess, (r.diagonal - r.integral) / allowance);
    accurate = accurate && r.accurate;
    flagged += r.flagged;
  }
  for (const auto& [point, series] : by_point) {
    worst_growth = std::max(worst_growth, series.rbegin()->second / series.begin()->second);
  }

  double identity = 0.0, unscaled = INFINITY;
  std::vector<double> xs;
  for (int i = 0; i < 5000; ++i) xs.push_back(1e3 + 97.3 * i);
  for (std::int64_t k : {1, 2, 3, 5, 7}) {
    for (std::int64_t n : {1, 2, 7, 50, 999, 10007}) {
      const auto c = diag_identity_check(n, k, xs);
      identity = std::max(identity, c.max_discrepancy);
      unscaled = std::min(unscaled, c.factor);
    }
  }

  Outcome o;
  o.pass = worst <= kDiagonalConstant && worst_growth <= kDiagonalGrowthMax && worst_excess <= 1.0 &&
           identity < kIdentityTolerance && accurate;
  o.detail = "max D/(Delta sqrt M) " + fmt(worst) + " (limit " + fmt(kDiagonalConstant) + "), max growth over M " +
             fmt(worst_growth) + ", max (D - I)/allowance " + fmt(worst_excess) + ", identity discrepancy " +
             fmt(identity) + " (factor-free version off by " + fmt(unscaled) + "), flagged n " + std::to_string(flagged) +
             (accurate ? "" : ", refinement NOT converged");
  return o;
}

// ---------------------------------------------------------------- 5

Outcome oscillatory_suite(const Context&) {
  ExperimentConfig c;
  c.lemma_M = 1e4;
  c.lemma_indices = {1, 2, 3, 4, 5, 7, 10, 14, 20, 28, 40, 57, 80, 100};
  c.lemma_ks = {1, 2, 3, 4, 5};
  c.lemma_P = {1};
  c.derivative_x_min = 1e3;
  const auto sweep = run_verify_lemmas(c);

  std::map<PhaseFamily, std::map<std::int64_t, double>> peak;  // family -> max(m, n) -> max ratio
  double lo = INFINITY, hi = 0.0;
  bool finite = true, converged = true;
  for (const auto& r : sweep.rows) {
    finite = finite && std::isfinite(r.check.ratio);
    converged = converged && r.check.accurate;
    lo = std::min(lo, r.check.ratio);
    hi = std::max(hi, r.check.ratio);
    auto& slot = peak[r.family][std::max(r.m, r.n)];
    slot = std::max(slot, r.check.ratio);
  }
  bool no_growth = true;
  std::string growth;
  for (const auto& [family, series] : peak) {
    std::vector<double> v;
    for (const auto& [idx, r] : series) v.push_back(r);
    const std::size_t half = v.size() / 2;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(half));
    const double upper = *std::max_element(v.begin() + static_cast<std::ptrdiff_t>(half), v.end());
    const bool monotone = std::is_sorted(v.begin(), v.end());
    no_growth = no_growth && !monotone && upper <= kLemmaGrowthMax * lower;
    growth += std::string(growth.empty() ? "" : ", ") + to_string(family) + " " + fmt(upper / lower);
  }
  double min_deriv = INFINITY;
  for (const auto& r : sweep.derivative_rows) min_deriv = std::min(min_deriv, r.check.min_ratio);

  Outcome o;
  o.pass = finite && lo > 0.0 && no_growth && min_deriv >= 1.0 && converged;
  o.detail = std::to_string(sweep.rows.size()) + " integrals, ratio range " + fmt(lo) + ".." + fmt(hi) +
             ", upper/lower index half " + growth + ", min derivative ratio " + fmt(min_deriv) + " over " +
             std::to_string(sweep.derivative_rows.size()) + " pairs, refinement within " + fmt(kQuadratureTolerance) +
             (converged ? " everywhere" : " NOT everywhere");
  return o;
}

// ---------------------------------------------------------------- 6

Complex direct_short_sum(double x, std::int64_t h, std::int64_t k, const CoefficientTable& t) {
  const long double lx = x, top = lx + std::sqrt(lx);
  Complex s = 0.0;
  for (auto n = static_cast<std::int64_t>(std::ceil(lx)); static_cast<long double>(n) <= top; ++n) {
    s += t.a(n) * oracle::root_of_unity(h * n, k);
  }
  return s;
}

Outcome structural_equality(const Context& ctx) {
  const auto& t = big_table(ctx);
  const WeightProfile w(1e4, 2e3, 500.0);
  double worst = 0.0;
  std::string detail;
  for (std::int64_t k : {1, 2, 3}) {
    const std::int64_t h = k == 1 ? 0 : 1;
    const double exact = theorem_integral(w, make_rational_point(h, k), t).integral;
    const double step = w.delta() / kRiemannSamples;
    double riemann = 0.0;
    for (int i = 0; i < kRiemannSamples; ++i) {
      const double x = w.lower() + (i + 0.5) * step;
      riemann += w(x) * std::norm(direct_short_sum(x, h, k, t));
    }
    riemann *= step;
    const double rel = std::abs(exact - riemann) / riemann;
    worst = std::max(worst, rel);
    detail += (detail.empty() ? "" : ", ") + std::string("k=") + std::to_string(k) + " " + fmt(rel);
  }
  double conj = 0.0;
  for (std::int64_t k = 2; k <= 7; ++k) {
    for (std::int64_t h = 1; h < k; ++h) {
      if (std::gcd(h, k) != 1) continue;
      const double a = theorem_integral(w, make_rational_point(h, k), t).integral;
      const double b = theorem_integral(w, make_rational_point(k - h, k), t).integral;
      conj = std::max(conj, std::abs(a - b) / a);
    }
  }
  Outcome o;
  o.pass = worst <= kRiemannTolerance && conj <= kConjugationTolerance;
  o.detail = "step series vs " + std::to_string(kRiemannSamples) + "-point midpoint rule: " + detail +
             "; conjugation h <-> k-h max relative change " + fmt(conj);
  return o;
}

// ---------------------------------------------------------------- 7

Outcome omega_witness(const Context& ctx) {
  ExperimentConfig c;
  c.seed = 1;
  c.omega_windows = 100;
  c.omega_delta = 1e3;
  c.omega_max_M = 100'000;
  c.omega_threshold = kOmegaFloor;
  const auto run = run_omega(c, big_table(ctx));
  const double drift = std::abs(run.statistic.max - kOmegaRecordedMax) / kOmegaRecordedMax;
  Outcome o;
  o.pass = run.statistic.max >= kOmegaFloor && drift <= kOmegaReproduction;
  o.detail = "max |sum|/sqrt(Delta) " + format_real(run.statistic.max) + " (recorded " + format_real(kOmegaRecordedMax) +
             ", floor " + fmt(kOmegaFloor) + "), RMS " + fmt(run.statistic.rms);
  return o;
}

// ---------------------------------------------------------------- 8

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  if (!fs::exists(dir)) return files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    files[fs::relative(e.path(), dir).string()] = ss.str();
  }
  return files;
}

Outcome determinism(const Context& ctx) {
  if (ctx.cli.empty() || !fs::exists(ctx.cli)) return {false, "command-line binary not found: " + ctx.cli.string()};
  const fs::path root = ctx.scratch / "determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path table = root / "tau.bin";
  const fs::path config = root / "small.conf";
  std::ofstream(config) << "# small sweep for reproducibility checks\n"
                           "table_size = 30000\n"
                           "M = 1000, 3000, 10000\n"
                           "k = 1, 2, 3\n"
                           "voronoi_M = 2000, 5000\n"
                           "voronoi_k = 1, 2\n"
                           "voronoi_samples = 8\n"
                           "omega_max_M = 20000\n"
                           "lemma_indices = 1, 4, 9, 16\n"
                           "lemma_k = 1, 2\n"
                           "derivative_points = 50\n"
                           "cycle_budget_per_n = 50\n";

  const auto run = [&](const std::string& args) {
    const std::string cmd = "\"" + ctx.cli.string() + "\" " + args + " > /dev/null";
    return std::system(cmd.c_str());
  };
  const std::vector<std::string> commands = {"verify-lemmas", "meansquare", "voronoi", "omega"};
  int failures = 0, compared = 0;
  std::string detail;
  for (int pass = 0; pass < 2; ++pass) {
    const fs::path dir = root / ("pass" + std::to_string(pass));
    if (run("coeffs --n 30000 --table \"" + (dir / "tau.bin").string() + "\"") != 0) ++failures;
    for (const auto& cmd : commands) {
      const std::string args = cmd + " --config \"" + config.string() + "\" --table \"" + (root / "pass0" / "tau.bin").string() +
                               "\" --out \"" + (dir / cmd).string() + "\" --seed 7 --json" +
                               (pass == 1 ? " --threads 2" : " --threads 1");
      if (run(args) != 0) {
        ++failures;
        detail += " " + cmd + " exited nonzero;";
      }
    }
  }
  const auto a = snapshot(root / "pass0"), b = snapshot(root / "pass1");
  for (const auto& [name, bytes] : a) {
    ++compared;
    const auto it = b.find(name);
    if (it == b.end() || it->second != bytes) {
      ++failures;
      detail += " differs: " + name + ";";
    }
  }
  if (a.size() != b.size()) ++failures;
  Outcome o;
  o.pass = failures == 0 && compared > 0;
  o.detail = std::to_string(compared) + " output files compared across two runs (1 and 2 threads)" +
             (detail.empty() ? ", all byte-identical" : ":" + detail);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> criteria;
  Context ctx;
  std::string table = "tau_1000000.bin", cli, scratch = "acceptance_scratch";
  app.add_option("--criterion", criteria, "criterion numbers to run (default: all)");
  app.add_option("--table", table, "10^6 coefficient cache (generated if missing)");
  app.add_option("--cli", cli, "path to the cusplab binary (criterion 8)");
  app.add_option("--scratch", scratch, "working directory for cached sweeps and reruns");
  CLI11_PARSE(app, argc, argv);
  ctx.table_path = table;
  ctx.cli = cli;
  ctx.scratch = scratch;
  if (criteria.empty()) criteria = {1, 2, 3, 4, 5, 6, 7, 8};

  const std::map<int, std::pair<const char*, std::function<Outcome(const Context&)>>> suite = {
      {1, {"coefficient exactness", coefficient_exactness}},
      {2, {"dual-sum truncation law", voronoi_truncation}},
      {3, {"mean-square exponent surrogate", theorem_surrogate}},
      {4, {"diagonal consistency", diagonal_consistency}},
      {5, {"oscillatory bound suite", oscillatory_suite}},
      {6, {"structural equality", structural_equality}},
      {7, {"window-sum witness", omega_witness}},
      {8, {"determinism", determinism}},
  };
  int failed = 0;
  for (int n : criteria) {
    const auto it = suite.find(n);
    if (it == suite.end()) {
      std::printf("criterion %d: FAIL | unknown criterion\n", n);
      ++failed;
      continue;
    }
    Outcome o;
    try {
      o = it->second.second(ctx);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d (%s): %s | %s\n", n, it->second.first, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
