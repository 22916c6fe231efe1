// cusplab: coefficient caches, oscillatory-bound sweeps, mean-square sweeps,
// dual-sum scans and window-sum statistics.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cusplab/error.hpp"
#include "cusplab/experiment.hpp"

using namespace cusplab;

namespace {

struct CommonFlags {
  std::string config;
  std::string out;
  std::string table;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool json = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "key = value configuration file");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--table", f.table, "coefficient cache");
  cmd->add_option("--seed", f.seed, "random seed (u64)");
  cmd->add_option("--threads", f.threads, "worker threads, 0 for all cores");
  cmd->add_flag("--json", f.json, "also write a JSON copy of every CSV");
}

ExperimentConfig resolve(const CommonFlags& f) {
  ExperimentConfig c = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
  if (!f.out.empty()) c.out_dir = f.out;
  if (!f.table.empty()) c.table_path = f.table;
  if (f.seed) c.seed = *f.seed;
  if (f.threads) c.threads = *f.threads;
  if (f.json) c.json = true;
  validate(c);
  return c;
}

std::string hex(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_provenance(const ExperimentConfig& c, const std::string& command) {
  std::string text = "# cusplab " + std::string(kVersion) + " " + command + "\n# config_hash = " + hex(config_hash(c)) +
                     "\n" + config_text(c, false);
  write_text(c.out_dir / (command + "_config.txt"), text);
}

void write_all(const std::vector<Table>& tables, const ExperimentConfig& c) {
  for (const auto& t : tables) {
    write_table(t, c);
    std::cout << "wrote " << (c.out_dir / (t.name + ".csv")).string() << " (" << t.rows.size() << " rows)\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cusplab: exponential sums of cusp-form coefficients over short intervals"};
  app.require_subcommand(1);

  std::int64_t n = 1'000'000;
  std::string coeff_path = "tau_1000000.bin";
  bool reuse = false;
  auto* coeffs = app.add_subcommand("coeffs", "generate tau(1..N) and write the binary cache");
  coeffs->add_option("--n", n, "number of coefficients");
  coeffs->add_option("--table", coeff_path, "cache path");
  coeffs->add_flag("--reuse", reuse, "keep an existing cache of the right length");

  CommonFlags lemma_flags, ms_flags, vor_flags, omega_flags;
  auto* lemmas = app.add_subcommand("verify-lemmas", "oscillatory-bound and weight-derivative sweeps");
  add_common(lemmas, lemma_flags);
  auto* meansquare = app.add_subcommand("meansquare", "mean-square sweep, exponent fit and plot");
  add_common(meansquare, ms_flags);
  auto* voronoi = app.add_subcommand("voronoi", "truncated dual-sum error scans");
  add_common(voronoi, vor_flags);
  auto* omega = app.add_subcommand("omega", "normalised window sums over seeded windows");
  add_common(omega, omega_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*coeffs) {
      const auto s = run_coeffs(n, coeff_path, reuse);
      std::cout << (s.reused ? "kept " : "wrote ") << coeff_path << ": N = " << s.size << ", checksum " << hex(s.checksum)
                << "\n";
      return 0;
    }
    if (*lemmas) {
      const auto c = resolve(lemma_flags);
      const auto sweep = run_verify_lemmas(c);
      write_all(lemma_tables(sweep), c);
      write_provenance(c, "verify-lemmas");
      bool ok = sweep.all_accurate;
      double worst = 0.0, min_deriv = INFINITY;
      for (const auto& r : sweep.rows) {
        ok = ok && std::isfinite(r.check.ratio);
        worst = std::max(worst, r.check.ratio);
      }
      for (const auto& r : sweep.derivative_rows) min_deriv = std::min(min_deriv, r.check.min_ratio);
      ok = ok && !(min_deriv < 1.0);
      std::cout << "max bound ratio " << format_real(worst) << ", min derivative ratio " << format_real(min_deriv)
                << ", refinement " << (sweep.all_accurate ? "ok" : "NOT converged") << "\n";
      return ok ? 0 : 1;
    }
    if (*meansquare) {
      const auto c = resolve(ms_flags);
      const auto table = load_table(c);
      const auto sweep = run_meansquare(c, table);
      write_all(meansquare_tables(sweep), c);
      write_text(c.out_dir / "meansquare.svg", meansquare_svg(sweep));
      write_provenance(c, "meansquare");
      std::cout << "fit: alpha = " << format_real(sweep.fit.alpha) << ", beta = " << format_real(sweep.fit.beta)
                << ", C = " << format_real(sweep.fit.C) << "\n";
      return 0;
    }
    if (*voronoi) {
      const auto c = resolve(vor_flags);
      const auto table = load_table(c);
      write_all(voronoi_tables(run_voronoi(c, table)), c);
      write_provenance(c, "voronoi");
      return 0;
    }
    if (*omega) {
      const auto c = resolve(omega_flags);
      const auto table = load_table(c);
      const auto run = run_omega(c, table);
      write_all(omega_tables(run, c), c);
      write_provenance(c, "omega");
      std::cout << "max |sum|/sqrt(Delta) = " << format_real(run.statistic.max) << " (threshold "
                << format_real(run.threshold) << ")\n";
      return run.passed ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
