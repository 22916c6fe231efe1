#include "cusplab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cusplab/error.hpp"
#include "cusplab/numeric.hpp"
#include "cusplab/weight.hpp"

namespace cusplab {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_real(const std::string& key, const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !std::isfinite(v)) throw ValidationError("config: " + key + ": not a number: '" + s + "'");
  return v;
}

std::int64_t parse_int(const std::string& key, const std::string& s) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    // Allow integral reals such as 1e6.
    const double d = parse_real(key, s);
    if (d != std::floor(d) || std::abs(d) > 9e15) throw ValidationError("config: " + key + ": not an integer: '" + s + "'");
    return static_cast<std::int64_t>(d);
  }
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ValidationError("config: " + key + ": not a u64: '" + s + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ValidationError("config: " + key + ": expected true or false, got '" + s + "'");
}

std::string real_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T, class F>
std::string join(const std::vector<T>& values, F fmt) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += fmt(values[i]);
  }
  return out;
}

std::string int_text(std::int64_t v) { return std::to_string(v); }

const char* to_string(HPolicy p) { return p == HPolicy::kUnit ? "unit" : "all-coprime"; }

}  // namespace

// ---------------------------------------------------------------- config

ExperimentConfig parse_config(std::string_view text, ExperimentConfig c) {
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const auto reals = [](std::vector<double>& dst) {
    return [&dst](const std::string& k, const std::string& v) {
      dst.clear();
      for (const auto& s : split_list(v)) dst.push_back(parse_real(k, s));
    };
  };
  const auto ints = [](std::vector<std::int64_t>& dst) {
    return [&dst](const std::string& k, const std::string& v) {
      dst.clear();
      for (const auto& s : split_list(v)) dst.push_back(parse_int(k, s));
    };
  };
  const auto real = [](double& dst) { return [&dst](const std::string& k, const std::string& v) { dst = parse_real(k, v); }; };
  const auto integer = [](auto& dst) {
    return [&dst](const std::string& k, const std::string& v) {
      dst = static_cast<std::remove_reference_t<decltype(dst)>>(parse_int(k, v));
    };
  };
  const std::map<std::string, Setter> setters = {
      {"table", [&](const std::string&, const std::string& v) { c.table_path = v; }},
      {"table_size", integer(c.table_size)},
      {"out", [&](const std::string&, const std::string& v) { c.out_dir = v; }},
      {"seed", [&](const std::string& k, const std::string& v) { c.seed = parse_u64(k, v); }},
      {"threads", integer(c.threads)},
      {"json", [&](const std::string& k, const std::string& v) { c.json = parse_bool(k, v); }},
      {"M", reals(c.Ms)},
      {"k", ints(c.ks)},
      {"h_policy",
       [&](const std::string& k, const std::string& v) {
         if (v == "unit") c.h_policy = HPolicy::kUnit;
         else if (v == "all-coprime") c.h_policy = HPolicy::kAllCoprime;
         else throw ValidationError("config: " + k + ": expected unit or all-coprime, got '" + v + "'");
       }},
      {"delta_coeff", real(c.delta_coeff)},
      {"delta_exponent", real(c.delta_exponent)},
      {"delta_min", real(c.delta_min)},
      {"rise_fraction", real(c.rise_fraction)},
      {"diagonal", [&](const std::string& k, const std::string& v) { c.diagonal = parse_bool(k, v); }},
      {"max_cycles", real(c.max_cycles)},
      {"cycle_budget_per_n", real(c.cycle_budget_per_n)},
      {"nodes_per_panel", integer(c.nodes_per_panel)},
      {"lemma_M", real(c.lemma_M)},
      {"lemma_indices", ints(c.lemma_indices)},
      {"lemma_k", ints(c.lemma_ks)},
      {"lemma_P",
       [&](const std::string& k, const std::string& v) {
         c.lemma_P.clear();
         for (const auto& s : split_list(v)) c.lemma_P.push_back(static_cast<int>(parse_int(k, s)));
       }},
      {"derivative_x_min", real(c.derivative_x_min)},
      {"derivative_x_max", real(c.derivative_x_max)},
      {"derivative_points", integer(c.derivative_points)},
      {"voronoi_M", reals(c.voronoi_Ms)},
      {"voronoi_k", ints(c.voronoi_ks)},
      {"voronoi_samples", integer(c.voronoi_samples)},
      {"voronoi_fractions", reals(c.voronoi_fractions)},
      {"omega_windows", integer(c.omega_windows)},
      {"omega_delta", real(c.omega_delta)},
      {"omega_max_M", integer(c.omega_max_M)},
      {"omega_threshold", real(c.omega_threshold)},
  };

  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(stripped).substr(0, eq));
    const std::string value = trim(std::string_view(stripped).substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw ValidationError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    it->second(key, value);
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

void validate(const ExperimentConfig& c) {
  const auto fail = [](const std::string& what) { throw ValidationError("config: " + what); };
  if (c.table_size < 1 || c.table_size > kMaxTableSize) fail("table_size out of range");
  if (!(c.delta_exponent > 0.5 && c.delta_exponent <= 1.0)) fail("delta_exponent must lie in (0.5, 1]");
  if (!(c.delta_coeff > 0.0) || !(c.delta_min > 0.0)) fail("delta_coeff and delta_min must be positive");
  if (!(c.rise_fraction > 0.0 && c.rise_fraction <= 0.5)) fail("rise_fraction must lie in (0, 0.5]");
  if (c.threads < 0) fail("threads must be >= 0");
  if (!(c.max_cycles > 0.0) || !(c.cycle_budget_per_n > 0.0)) fail("cycle budgets must be positive");
  if (c.nodes_per_panel < 2 || c.nodes_per_panel > 64) fail("nodes_per_panel must lie in [2, 64]");
  for (double M : c.Ms) {
    if (!(M >= 2.0)) fail("every M must be >= 2");
    for (std::int64_t k : c.ks) {
      if (k < 1) fail("every k must be >= 1");
      if (static_cast<double>(k) > std::pow(M, 0.25) * (1.0 + 1e-12)) {
        fail("k = " + std::to_string(k) + " exceeds M^(1/4) for M = " + real_text(M));
      }
    }
  }
  if (c.lemma_M < 2.0) fail("lemma_M must be >= 2");
  for (auto v : c.lemma_indices) if (v < 1) fail("lemma_indices must be positive");
  for (auto v : c.lemma_ks) if (v < 1) fail("lemma_k must be positive");
  for (auto v : c.lemma_P) if (v < 0) fail("lemma_P must be >= 0");
  if (!(c.derivative_x_min >= 1.0 && c.derivative_x_max > c.derivative_x_min) || c.derivative_points < 2) {
    fail("derivative grid is empty");
  }
  for (double M : c.voronoi_Ms) if (!(M >= 2.0)) fail("voronoi_M must be >= 2");
  for (auto v : c.voronoi_ks) if (v < 1) fail("voronoi_k must be positive");
  if (c.voronoi_samples < 1) fail("voronoi_samples must be positive");
  for (double f : c.voronoi_fractions) if (!(f > 0.0 && f <= 1.0)) fail("voronoi_fractions must lie in (0, 1]");
  if (c.omega_windows < 1 || !(c.omega_delta > 0.0) || c.omega_max_M < 1) fail("omega settings must be positive");
}

std::string config_text(const ExperimentConfig& c, bool include_io) {
  std::ostringstream o;
  o << "table = " << c.table_path.string() << "\n"
    << "table_size = " << c.table_size << "\n";
  if (include_io) {
    o << "out = " << c.out_dir.string() << "\n"
      << "threads = " << c.threads << "\n"
      << "json = " << (c.json ? "true" : "false") << "\n";
  }
  o << "seed = " << c.seed << "\n"
    << "M = " << join(c.Ms, real_text) << "\n"
    << "k = " << join(c.ks, int_text) << "\n"
    << "h_policy = " << to_string(c.h_policy) << "\n"
    << "delta_coeff = " << real_text(c.delta_coeff) << "\n"
    << "delta_exponent = " << real_text(c.delta_exponent) << "\n"
    << "delta_min = " << real_text(c.delta_min) << "\n"
    << "rise_fraction = " << real_text(c.rise_fraction) << "\n"
    << "diagonal = " << (c.diagonal ? "true" : "false") << "\n"
    << "max_cycles = " << real_text(c.max_cycles) << "\n"
    << "cycle_budget_per_n = " << real_text(c.cycle_budget_per_n) << "\n"
    << "nodes_per_panel = " << c.nodes_per_panel << "\n"
    << "lemma_M = " << real_text(c.lemma_M) << "\n"
    << "lemma_indices = " << join(c.lemma_indices, int_text) << "\n"
    << "lemma_k = " << join(c.lemma_ks, int_text) << "\n"
    << "lemma_P = " << join(c.lemma_P, [](int v) { return std::to_string(v); }) << "\n"
    << "derivative_x_min = " << real_text(c.derivative_x_min) << "\n"
    << "derivative_x_max = " << real_text(c.derivative_x_max) << "\n"
    << "derivative_points = " << c.derivative_points << "\n"
    << "voronoi_M = " << join(c.voronoi_Ms, real_text) << "\n"
    << "voronoi_k = " << join(c.voronoi_ks, int_text) << "\n"
    << "voronoi_samples = " << c.voronoi_samples << "\n"
    << "voronoi_fractions = " << join(c.voronoi_fractions, real_text) << "\n"
    << "omega_windows = " << c.omega_windows << "\n"
    << "omega_delta = " << real_text(c.omega_delta) << "\n"
    << "omega_max_M = " << c.omega_max_M << "\n"
    << "omega_threshold = " << real_text(c.omega_threshold) << "\n";
  return o.str();
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  // FNV-1a over the canonical text without the I/O keys.
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char ch : config_text(config, false)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

double window_length(const ExperimentConfig& c, double M, std::int64_t k) {
  const double raw = c.delta_coeff * static_cast<double>(k) * std::pow(M, c.delta_exponent);
  return std::clamp(raw, std::min(c.delta_min, M), M);
}

std::vector<RationalPoint> sweep_points(const ExperimentConfig& c, std::int64_t k) {
  std::vector<RationalPoint> out;
  if (k == 1) {
    out.push_back(RationalPoint::make(0, 1));
    return out;
  }
  if (c.h_policy == HPolicy::kUnit) {
    out.push_back(RationalPoint::make(1, k));
    return out;
  }
  for (std::int64_t h = 1; h < k; ++h) {
    if (std::gcd(h, k) == 1) out.push_back(RationalPoint::make(h, k));
  }
  return out;
}

QuadratureOptions quadrature_options(const ExperimentConfig& c) {
  QuadratureOptions q;
  q.max_cycles = c.max_cycles;
  q.nodes_per_panel = c.nodes_per_panel;
  return q;
}

CoefficientTable load_table(const ExperimentConfig& c) {
  if (!std::filesystem::exists(c.table_path)) {
    throw IoError("coefficient cache " + c.table_path.string() + " not found; create it with: cusplab coeffs --table " +
                  c.table_path.string() + " --n " + std::to_string(c.table_size));
  }
  return load_cache(c.table_path);
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          const std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------- reports

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

std::string to_csv(const Table& t) {
  const auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  };
  std::string out;
  const auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += quote(cells[i]);
    }
    out += "\r\n";
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

std::string to_json(const Table& t, const ExperimentConfig& config) {
  using nlohmann::ordered_json;
  ordered_json doc;
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash(config)));
  doc["provenance"] = {{"version", kVersion}, {"config_hash", hash}};
  doc["name"] = t.name;
  doc["columns"] = t.header;
  ordered_json rows = ordered_json::array();
  for (const auto& r : t.rows) {
    ordered_json row = ordered_json::object();
    for (std::size_t i = 0; i < r.size() && i < t.header.size(); ++i) {
      const std::string& cell = r[i];
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (!cell.empty() && end == cell.c_str() + cell.size() && std::isfinite(v)) {
        row[t.header[i]] = v;
      } else {
        row[t.header[i]] = cell;
      }
    }
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

void write_table(const Table& t, const ExperimentConfig& config) {
  write_text(config.out_dir / (t.name + ".csv"), to_csv(t));
  if (config.json) write_text(config.out_dir / (t.name + ".json"), to_json(t, config));
}

// ---------------------------------------------------------------- coeffs

CoeffsSummary run_coeffs(std::int64_t n, const std::filesystem::path& path, bool reuse) {
  CoeffsSummary s;
  if (reuse && std::filesystem::exists(path)) {
    try {
      const auto table = load_cache(path);
      if (table.size() == n) {
        s.size = n;
        s.checksum = tau_checksum(table);
        s.reused = true;
        return s;
      }
    } catch (const IoError&) {
      // fall through and regenerate
    }
  }
  const auto table = generate_tau(n);
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  save_cache(table, path);
  s.size = table.size();
  s.checksum = tau_checksum(table);
  return s;
}

// ---------------------------------------------------------------- lemmas

LemmaSweep run_verify_lemmas(const ExperimentConfig& c) {
  validate(c);
  LemmaSweep sweep;
  for (double r : {1.0, 10.0, 100.0, 1000.0}) {
    sweep.weight_rises.push_back(r);
    sweep.weight_constants.push_back(derivative_bound_report(WeightProfile(std::max(c.lemma_M, 8.0 * r), 4.0 * r, r), 4));
  }

  struct Task {
    PhaseFamily family;
    std::int64_t k, m, n;
    int P;
  };
  std::vector<Task> tasks;
  for (std::int64_t k : c.lemma_ks) {
    for (int P : c.lemma_P) {
      for (std::int64_t m : c.lemma_indices) {
        for (std::int64_t n : c.lemma_indices) {
          if (m <= n) tasks.push_back({PhaseFamily::kSum, k, m, n, P});
          if (m < n) tasks.push_back({PhaseFamily::kDifference, k, m, n, P});
          if (m != n) tasks.push_back({PhaseFamily::kShiftedDifference, k, m, n, P});
        }
      }
    }
  }
  sweep.rows.resize(tasks.size());
  const QuadratureOptions q = quadrature_options(c);
  parallel_for(tasks.size(), c.threads, [&](std::size_t i) {
    const Task& t = tasks[i];
    const double delta = window_length(c, c.lemma_M, t.k);
    const WeightProfile w(c.lemma_M, delta, c.rise_fraction * delta);
    PhaseSpec spec{t.family, t.m, t.n, sweep_points(c, t.k).front(), +1, Argument::kPlain, Argument::kPlain};
    sweep.rows[i] = {t.family, t.k, t.m, t.n, t.P, lemma_bound_check(spec, t.P, w, q)};
  });
  for (const auto& r : sweep.rows) sweep.all_accurate = sweep.all_accurate && r.check.accurate;

  std::vector<double> grid;
  const double ratio = c.derivative_x_max / c.derivative_x_min;
  for (int i = 0; i < c.derivative_points; ++i) {
    grid.push_back(c.derivative_x_min * std::pow(ratio, static_cast<double>(i) / (c.derivative_points - 1)));
  }
  for (std::int64_t k : c.lemma_ks) {
    for (std::int64_t m : c.lemma_indices) {
      for (std::int64_t n : c.lemma_indices) {
        if (n <= m) continue;
        const PhaseSpec spec{PhaseFamily::kShiftedDifference, m, n, sweep_points(c, k).front()};
        sweep.derivative_rows.push_back({k, m, n, shifted_derivative_check(spec, grid)});
      }
    }
  }
  return sweep;
}

std::vector<Table> lemma_tables(const LemmaSweep& s) {
  Table weight{"weight_constants", {"rise_r", "order_j", "sup_abs_w_j_times_r_pow_j"}, {}};
  for (std::size_t i = 0; i < s.weight_rises.size(); ++i) {
    for (std::size_t j = 0; j < s.weight_constants[i].size(); ++j) {
      weight.rows.push_back({format_real(s.weight_rises[i]), std::to_string(j), format_real(s.weight_constants[i][j])});
    }
  }
  Table lemmas{"lemma_bounds",
               {"family", "k", "m", "n", "P", "abs_integral", "stated_bound", "ratio_abs_integral_over_stated",
                "certified_bound", "refinement_ok"},
               {}};
  for (const auto& r : s.rows) {
    lemmas.rows.push_back({to_string(r.family), std::to_string(r.k), std::to_string(r.m), std::to_string(r.n),
                           std::to_string(r.P), format_real(std::abs(r.check.integral)), format_real(r.check.bound),
                           format_real(r.check.ratio), format_real(r.check.certificate), r.check.accurate ? "1" : "0"});
  }
  Table deriv{"shifted_derivative", {"k", "m", "n", "min_ratio_abs_Bprime_over_lower_bound", "argmin_x"}, {}};
  for (const auto& r : s.derivative_rows) {
    deriv.rows.push_back({std::to_string(r.k), std::to_string(r.m), std::to_string(r.n), format_real(r.check.min_ratio),
                          format_real(r.check.argmin)});
  }
  return {weight, lemmas, deriv};
}

// ---------------------------------------------------------------- mean square

MeanSquareSweep run_meansquare(const ExperimentConfig& c, const CoefficientTable& table) {
  validate(c);
  struct Task {
    double M;
    RationalPoint point;
  };
  std::vector<Task> tasks;
  std::vector<double> Ms = c.Ms;
  std::vector<std::int64_t> ks = c.ks;
  std::sort(Ms.begin(), Ms.end());
  std::sort(ks.begin(), ks.end());
  for (double M : Ms) {
    for (std::int64_t k : ks) {
      for (const auto& p : sweep_points(c, k)) tasks.push_back({M, p});
    }
  }
  for (const auto& t : tasks) {
    const double top = t.M + window_length(c, t.M, t.point.k());
    if (top + std::sqrt(top) + 1.0 > static_cast<double>(table.size())) {
      throw TableTooShort("meansquare: M = " + real_text(t.M) + " needs coefficients up to " +
                          real_text(std::ceil(top + std::sqrt(top))) + ", table has " + std::to_string(table.size()));
    }
  }

  MeanSquareSweep sweep;
  sweep.rows.resize(tasks.size());
  DiagonalOptions dopt;
  dopt.cycle_budget_per_n = c.cycle_budget_per_n;
  dopt.quadrature = quadrature_options(c);
  parallel_for(tasks.size(), c.threads, [&](std::size_t i) {
    const Task& t = tasks[i];
    const double delta = window_length(c, t.M, t.point.k());
    const WeightProfile w(t.M, delta, c.rise_fraction * delta);
    MeanSquareRow row;
    row.rise = w.rise();
    row.result = theorem_integral(w, t.point, table);
    if (c.diagonal) {
      row.diagonal = diagonal_term(w, t.point.k(), table, dopt);
      row.result.diagonal = row.diagonal->value;
    }
    sweep.rows[i] = std::move(row);
  });

  std::vector<MeanSquareResult> results;
  for (const auto& r : sweep.rows) results.push_back(r.result);
  sweep.fit = exponent_fit(results);
  if (c.diagonal) {
    for (auto& r : results) r.integral = r.diagonal;
    sweep.diagonal_fit = exponent_fit(results);
  }
  return sweep;
}

std::vector<Table> meansquare_tables(const MeanSquareSweep& s) {
  Table runs{"meansquare",
             {"M", "h", "k", "delta", "rise_r", "method", "integral_I", "I_over_delta_sqrtM", "diagonal_D",
              "D_over_delta_sqrtM", "diagonal_small_n_le_k2", "diagonal_large_n", "diagonal_allowance",
              "diagonal_flagged_n", "diagonal_refinement_ok"},
             {}};
  for (const auto& r : s.rows) {
    const auto& m = r.result;
    const double norm = m.delta * std::sqrt(m.M);
    std::vector<std::string> row{format_real(m.M),   std::to_string(m.point.h()), std::to_string(m.point.k()),
                                 format_real(m.delta), format_real(r.rise),       to_string(m.method),
                                 format_real(m.integral), format_real(m.ratio)};
    if (r.diagonal) {
      const auto& d = *r.diagonal;
      row.insert(row.end(), {format_real(d.value), format_real(d.value / norm), format_real(d.small_n_part),
                             format_real(d.large_n_part), format_real(d.allowance), std::to_string(d.flagged),
                             d.accurate ? "1" : "0"});
    } else {
      row.insert(row.end(), {"nan", "nan", "nan", "nan", "nan", "0", "0"});
    }
    runs.rows.push_back(std::move(row));
  }
  Table fit{"exponent_fit", {"quantity", "alpha_exponent_of_M", "beta_exponent_of_k", "C", "residual_rms_log"}, {}};
  fit.rows.push_back({"integral_I", format_real(s.fit.alpha), format_real(s.fit.beta), format_real(s.fit.C),
                      format_real(s.fit.residual_rms)});
  if (s.diagonal_fit) {
    const auto& d = *s.diagonal_fit;
    fit.rows.push_back({"diagonal_D", format_real(d.alpha), format_real(d.beta), format_real(d.C),
                        format_real(d.residual_rms)});
  }
  return {runs, fit};
}

std::string meansquare_svg(const MeanSquareSweep& s) {
  std::map<std::int64_t, std::map<double, std::vector<double>>> series;  // k -> M -> I / Delta
  double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
  for (const auto& r : s.rows) {
    const double y = r.result.integral / r.result.delta;
    if (!(y > 0.0)) continue;
    series[r.result.point.k()][r.result.M].push_back(y);
    x_lo = std::min(x_lo, std::log10(r.result.M));
    x_hi = std::max(x_hi, std::log10(r.result.M));
    y_lo = std::min(y_lo, std::log10(y));
    y_hi = std::max(y_hi, std::log10(y));
  }
  if (series.empty()) { x_lo = 0; x_hi = 1; y_lo = 0; y_hi = 1; }
  x_lo = std::floor(x_lo);
  x_hi = std::max(std::ceil(x_hi), x_lo + 1.0);
  y_lo = std::floor(y_lo);
  y_hi = std::max(std::ceil(y_hi), y_lo + 1.0);

  const double W = 640, H = 480, left = 70, right = 130, top = 30, bottom = 50;
  const auto px = [&](double lx) { return left + (lx - x_lo) / (x_hi - x_lo) * (W - left - right); };
  const auto py = [&](double ly) { return H - bottom - (ly - y_lo) / (y_hi - y_lo) * (H - top - bottom); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

  std::string o;
  char buf[256];
  const auto put = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof buf, fmt, args...);
    o += buf;
  };
  put("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n", W, H, W, H);
  put("<rect width=\"%.0f\" height=\"%.0f\" fill=\"white\"/>\n", W, H);
  put("<text x=\"%.1f\" y=\"18\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">"
      "mean square I / Delta against M</text>\n", (left + W - right) / 2);
  put("<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" stroke=\"black\"/>\n", left, top,
      W - left - right, H - top - bottom);
  for (double d = x_lo; d <= x_hi + 1e-9; d += 1.0) {
    put("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ccc\"/>\n", px(d), top, px(d), H - bottom);
    put("<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">1e%.0f</text>\n",
        px(d), H - bottom + 16, d);
  }
  for (double d = y_lo; d <= y_hi + 1e-9; d += 1.0) {
    put("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ccc\"/>\n", left, py(d), W - right, py(d));
    put("<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">1e%.0f</text>\n",
        left - 6, py(d) + 4, d);
  }
  put("<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">M</text>\n",
      (left + W - right) / 2, H - 12);
  put("<text x=\"16\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
      "transform=\"rotate(-90 16 %.1f)\">I / Delta</text>\n", (top + H - bottom) / 2, (top + H - bottom) / 2);
  int idx = 0;
  for (const auto& [k, points] : series) {
    const char* color = colors[idx % 8];
    std::string path;
    for (const auto& [M, ys] : points) {
      const double mean = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
      std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", path.empty() ? "" : " ", px(std::log10(M)), py(std::log10(mean)));
      path += buf;
    }
    put("<g class=\"series\" data-k=\"%lld\">\n", static_cast<long long>(k));
    o += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" + path + "\"/>\n";
    for (const auto& [M, ys] : points) {
      const double mean = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
      put("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\"/>\n", px(std::log10(M)), py(std::log10(mean)), color);
    }
    o += "</g>\n";
    const double ly = top + 10 + 18 * idx;
    put("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"%s\" stroke-width=\"2\"/>\n", W - right + 12, ly,
        W - right + 32, ly, color);
    put("<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\">k = %lld</text>\n", W - right + 38,
        ly + 4, static_cast<long long>(k));
    ++idx;
  }
  o += "</svg>\n";
  return o;
}

// ---------------------------------------------------------------- dual sums

VoronoiSweep run_voronoi(const ExperimentConfig& c, const CoefficientTable& table) {
  validate(c);
  struct Task {
    double M;
    RationalPoint point;
  };
  std::vector<Task> tasks;
  std::vector<double> Ms = c.voronoi_Ms;
  std::vector<std::int64_t> ks = c.voronoi_ks;
  std::vector<double> fractions = c.voronoi_fractions;
  std::sort(Ms.begin(), Ms.end());
  std::sort(ks.begin(), ks.end());
  std::sort(fractions.begin(), fractions.end());
  for (double M : Ms) {
    if (2.0 * M + 1.0 > static_cast<double>(table.size())) {
      throw TableTooShort("voronoi: M = " + real_text(M) + " samples up to 2M, table has " + std::to_string(table.size()));
    }
    for (std::int64_t k : ks) tasks.push_back({M, sweep_points(c, k).front()});
  }

  const std::size_t S = static_cast<std::size_t>(c.voronoi_samples);
  const std::size_t F = fractions.size();
  VoronoiSweep sweep;
  sweep.samples.resize(tasks.size() * S * F);
  std::vector<Complex> constants(tasks.size());
  parallel_for(tasks.size(), c.threads, [&](std::size_t ti) {
    const Task& t = tasks[ti];
    constants[ti] = dual_constant_term(t.point, table, table.size());
    for (std::size_t i = 0; i < S; ++i) {
      const double x = t.M * (1.0 + (static_cast<double>(i) + 0.618) / static_cast<double>(S));
      const Complex direct = long_sum(x, t.point, table);
      for (std::size_t f = 0; f < F; ++f) {
        const auto N = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(fractions[f] * x)));
        VoronoiParams p{t.point, N, PhaseConvention::kZero};
        const Complex plain = voronoi_main_term(x, p, table);
        p.phase = PhaseConvention::kMinusQuarterPi;
        const Complex quarter = voronoi_main_term(x, p, table);
        sweep.samples[(ti * F + f) * S + i] = {t.M,
                                              t.point,
                                              x,
                                              fractions[f],
                                              N,
                                              std::abs(direct - plain),
                                              std::abs(direct - quarter),
                                              std::abs(direct - quarter - constants[ti])};
      }
    }
  });

  for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
    double prev_pi4 = NAN, prev_removed = NAN;
    for (std::size_t f = 0; f < F; ++f) {
      std::vector<double> e0, e4, er;
      for (std::size_t i = 0; i < S; ++i) {
        const auto& s = sweep.samples[(ti * F + f) * S + i];
        e0.push_back(s.err_phase0);
        e4.push_back(s.err_phase_pi4);
        er.push_back(s.err_phase_pi4_constant_removed);
      }
      VoronoiSummary row{tasks[ti].M, tasks[ti].point, fractions[f], median(e0), median(e4), median(er), NAN, NAN,
                         std::abs(constants[ti])};
      row.decay_phase_pi4 = prev_pi4 / row.median_phase_pi4;
      row.decay_constant_removed = prev_removed / row.median_constant_removed;
      prev_pi4 = row.median_phase_pi4;
      prev_removed = row.median_constant_removed;
      sweep.summary.push_back(row);
    }
  }

  if (ks.size() >= 2) {
    for (double M : Ms) {
      for (double f : fractions) {
        std::vector<std::vector<double>> rows;
        std::vector<double> y4, yr;
        for (const auto& s : sweep.summary) {
          if (s.M != M || s.fraction != f) continue;
          rows.push_back({1.0, std::log(static_cast<double>(s.point.k()))});
          y4.push_back(std::log(s.median_phase_pi4));
          yr.push_back(std::log(s.median_constant_removed));
        }
        sweep.slopes.push_back({M, f, least_squares(rows, y4)[1], least_squares(rows, yr)[1]});
      }
    }
  }
  return sweep;
}

std::vector<Table> voronoi_tables(const VoronoiSweep& s) {
  Table samples{"voronoi_samples",
                {"M", "h", "k", "x", "N_fraction_of_x", "N", "err_phase0", "err_phase_pi4", "err_phase_pi4_constant_removed"},
                {}};
  for (const auto& r : s.samples) {
    samples.rows.push_back({format_real(r.M), std::to_string(r.point.h()), std::to_string(r.point.k()), format_real(r.x),
                            format_real(r.fraction), std::to_string(r.n_trunc), format_real(r.err_phase0),
                            format_real(r.err_phase_pi4), format_real(r.err_phase_pi4_constant_removed)});
  }
  Table summary{"voronoi_summary",
                {"M", "h", "k", "N_fraction_of_x", "median_err_phase0", "median_err_phase_pi4",
                 "median_err_phase_pi4_constant_removed", "decay_ratio_phase_pi4", "decay_ratio_constant_removed",
                 "abs_constant_term"},
                {}};
  for (const auto& r : s.summary) {
    summary.rows.push_back({format_real(r.M), std::to_string(r.point.h()), std::to_string(r.point.k()),
                            format_real(r.fraction), format_real(r.median_phase0), format_real(r.median_phase_pi4),
                            format_real(r.median_constant_removed), format_real(r.decay_phase_pi4),
                            format_real(r.decay_constant_removed), format_real(r.constant_term)});
  }
  Table slopes{"voronoi_k_slopes",
               {"M", "N_fraction_of_x", "slope_log_median_err_pi4_vs_log_k", "slope_constant_removed_vs_log_k"},
               {}};
  for (const auto& r : s.slopes) {
    slopes.rows.push_back({format_real(r.M), format_real(r.fraction), format_real(r.slope_phase_pi4),
                           format_real(r.slope_constant_removed)});
  }
  return {samples, summary, slopes};
}

// ---------------------------------------------------------------- window sums

OmegaRun run_omega(const ExperimentConfig& c, const CoefficientTable& table) {
  validate(c);
  const double top = static_cast<double>(c.omega_max_M) + c.omega_delta;
  if (top > static_cast<double>(table.size())) {
    throw TableTooShort("omega: windows reach " + real_text(top) + ", table has " + std::to_string(table.size()));
  }
  const auto starts = seeded_window_starts(c.seed, static_cast<std::size_t>(c.omega_windows), 1, c.omega_max_M);
  OmegaRun run;
  run.statistic = omega_statistic(starts, c.omega_delta, table);
  run.threshold = c.omega_threshold;
  run.passed = run.statistic.max >= run.threshold;
  return run;
}

std::vector<Table> omega_tables(const OmegaRun& run, const ExperimentConfig& c) {
  Table rows{"omega_windows", {"window", "M", "delta", "sum_re", "sum_im", "abs_sum_over_sqrt_delta"}, {}};
  for (std::size_t i = 0; i < run.statistic.rows.size(); ++i) {
    const auto& r = run.statistic.rows[i];
    rows.rows.push_back({std::to_string(i), format_real(r.M), format_real(c.omega_delta), format_real(r.sum.real()),
                         format_real(r.sum.imag()), format_real(r.normalized)});
  }
  Table summary{"omega_summary", {"seed", "windows", "delta", "max_normalized", "rms_normalized", "threshold", "passed"}, {}};
  summary.rows.push_back({std::to_string(c.seed), std::to_string(run.statistic.rows.size()), format_real(c.omega_delta),
                          format_real(run.statistic.max), format_real(run.statistic.rms), format_real(run.threshold),
                          run.passed ? "1" : "0"});
  return {rows, summary};
}

}  // namespace cusplab
