#pragma once

// Monte-Carlo trials and parameter grids.
//
// A complex trial runs the whole pipeline on one synthetic instance:
// random_signal -> sample_wigner -> assemble_instance -> is_discordant ->
// spectral_init -> solve_second_order -> align_global_phase -> certify ->
// evaluate_bounds. A real trial certifies the planted sign vector directly.
//
// Grid trial seeds are derive_seed(seed_base, {case, n, bits(sigma), rep}), so
// every row depends only on its own coordinates and the output is identical
// for any number of workers.

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "angsync/bounds.hpp"
#include "angsync/certificate.hpp"
#include "angsync/io.hpp"
#include "angsync/model.hpp"
#include "angsync/solver.hpp"
#include "angsync/z2.hpp"

namespace angsync {

enum class Case { Complex, Real };

inline const char* case_name(Case c) { return c == Case::Complex ? "complex" : "real"; }

struct TrialOptions {
  SolverOptions solver;
  CertifyTolerances tolerances;
  DiscordanceConstants discordance;
};

struct TrialRecord {
  Case trial_case = Case::Complex;
  int n = 0;
  double sigma = 0.0;
  int rep = 0;
  std::uint64_t seed = 0;
  bool discordant = false;
  bool converged = false;
  bool beat_planted = false;
  double cost_x = 0.0;
  double cost_z = 0.0;
  double grad_norm = 0.0;
  double l2_err = 0.0;
  double linf_err = 0.0;
  double wx_inf = 0.0;
  double min_eig_S = 0.0;
  double second_eig_S = 0.0;
  double residual = 0.0;
  bool tight = false;
  bool unique = false;
  bool lemma2_ok = false;
  bool lemma3_ok = false;
  bool wx_ok = false;
  bool suff_cond_ok = false;
  bool thm_threshold_ok = false;
  double runtime_ms = 0.0;
};

/// A trial row together with the instance and estimate it was computed from.
struct TrialOutcome {
  TrialRecord record;
  SyncInstance instance;
  PhaseVector x;
};

/// Complex-case trial. x is aligned to z before certification and error
/// measurement.
inline TrialOutcome run_trial_full(int n, double sigma, std::uint64_t seed, const TrialOptions& opts = {},
                                   int rep = 0) {
  const auto start = std::chrono::steady_clock::now();
  const PhaseVector z = random_signal(n, seed);
  const SyncInstance inst = assemble_instance(z, sample_wigner(n, seed), sigma, seed);
  const DiscordanceReport disc = is_discordant(inst.W(), z, 1e-10, opts.discordance);
  const SolverReport sol = solve_second_order(inst.C(), spectral_init(inst.C()), z, opts.solver);

  PhaseVector x = sol.x;
  if (std::abs(z.values().dot(x.values())) > 0.0) x = align_global_phase(x, z);
  const CertificateReport cert = certify(inst.C(), x, opts.tolerances);
  const BoundReport b = evaluate_bounds(inst, x, disc.discordant, sol.beat_planted);

  TrialRecord r;
  r.trial_case = Case::Complex;
  r.n = n;
  r.sigma = sigma;
  r.rep = rep;
  r.seed = seed;
  r.discordant = disc.discordant;
  r.converged = sol.converged;
  r.beat_planted = sol.beat_planted;
  r.cost_x = sol.cost;
  r.cost_z = cost(inst.C(), z);
  r.grad_norm = sol.grad_norm;
  r.l2_err = b.l2_err;
  r.linf_err = b.linf_err;
  r.wx_inf = b.wx_inf;
  r.min_eig_S = cert.min_eig;
  r.second_eig_S = cert.second_eig;
  r.residual = cert.residual;
  r.tight = cert.tight;
  r.unique = cert.unique;
  r.lemma2_ok = b.lemma2_ok;
  r.lemma3_ok = b.lemma3_ok;
  r.wx_ok = b.wx_ok;
  r.suff_cond_ok = b.suff_cond_ok;
  r.thm_threshold_ok = b.thm_threshold_ok;
  r.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return {r, inst, x};
}

inline TrialRecord run_trial(int n, double sigma, std::uint64_t seed, const TrialOptions& opts = {},
                             int rep = 0) {
  return run_trial_full(n, sigma, seed, opts, rep).record;
}

/// Real-case trial: the candidate is the planted z itself, "tight" means the
/// certificate declared exact recovery.
inline TrialRecord run_real_trial(int n, double sigma, std::uint64_t seed, const TrialOptions& opts = {},
                                  int rep = 0) {
  const auto start = std::chrono::steady_clock::now();
  const SignVector z = random_signs(n, seed);
  const HermitianMatrix w = sample_real_wigner(n, seed);
  const RecoveryCheck check = exact_recovery_check(z, w, sigma, opts.tolerances.psd_tol);
  const PhaseVector zc(z.as_complex());
  const SyncInstance inst = assemble_instance(zc, w, sigma, seed);
  const DiscordanceReport disc = is_discordant(w, zc, 1e-10, opts.discordance);
  const BoundReport b = evaluate_bounds(inst, zc, disc.discordant, true);

  TrialRecord r;
  r.trial_case = Case::Real;
  r.n = n;
  r.sigma = sigma;
  r.rep = rep;
  r.seed = seed;
  r.discordant = disc.discordant;
  r.converged = true;
  r.beat_planted = true;
  r.cost_z = r.cost_x = cost(inst.C(), zc);
  r.grad_norm = 2.0 * check.residual;
  r.l2_err = b.l2_err;
  r.linf_err = b.linf_err;
  r.wx_inf = b.wx_inf;
  r.min_eig_S = check.min_eig;
  r.second_eig_S = check.second_eig;
  r.residual = check.residual;
  r.tight = check.recovered;
  r.unique = check.recovered && check.second_eig >= opts.tolerances.rank_tol * n;
  r.lemma2_ok = b.lemma2_ok;
  r.lemma3_ok = b.lemma3_ok;
  r.wx_ok = b.wx_ok;
  r.suff_cond_ok = b.suff_cond_ok;
  r.thm_threshold_ok = b.thm_threshold_ok;
  r.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

// ---------------------------------------------------------------------------
// CSV

/// RFC 4180 field: quoted only when it contains a comma, quote or line break.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

inline constexpr const char* kTrialCsvHeader =
    "case,n,sigma,rep,seed,discordant,converged,beat_planted,cost_x,cost_z,grad_norm,l2_err,"
    "linf_err,wx_inf,min_eig_S,second_eig_S,residual,tight,unique,lemma2_ok,lemma3_ok,wx_ok,"
    "suff_cond_ok,thm_threshold_ok,runtime_ms";

/// One CSV row (no trailing newline). runtime_ms is written as 0 unless
/// `with_timing`, which keeps rows reproducible byte for byte.
inline std::string trial_csv_row(const TrialRecord& r, bool with_timing = false) {
  std::ostringstream o;
  auto b = [](bool v) { return v ? "1" : "0"; };
  o << csv_field(case_name(r.trial_case)) << ',' << r.n << ',' << format_double(r.sigma) << ','
    << r.rep << ',' << r.seed << ',' << b(r.discordant) << ',' << b(r.converged) << ','
    << b(r.beat_planted) << ',' << format_double(r.cost_x) << ',' << format_double(r.cost_z) << ','
    << format_double(r.grad_norm) << ',' << format_double(r.l2_err) << ','
    << format_double(r.linf_err) << ',' << format_double(r.wx_inf) << ','
    << format_double(r.min_eig_S) << ',' << format_double(r.second_eig_S) << ','
    << format_double(r.residual) << ',' << b(r.tight) << ',' << b(r.unique) << ','
    << b(r.lemma2_ok) << ',' << b(r.lemma3_ok) << ',' << b(r.wx_ok) << ',' << b(r.suff_cond_ok)
    << ',' << b(r.thm_threshold_ok) << ',' << format_double(with_timing ? r.runtime_ms : 0.0);
  return o.str();
}

inline constexpr const char* kCertificateCsvHeader = "residual,min_eig,second_eig,diag_min,tight,unique";

inline std::string certificate_csv_row(const CertificateReport& c) {
  std::ostringstream o;
  o << format_double(c.residual) << ',' << format_double(c.min_eig) << ','
    << format_double(c.second_eig) << ',' << format_double(c.diag_min) << ',' << (c.tight ? 1 : 0)
    << ',' << (c.unique ? 1 : 0);
  return o.str();
}

// ---------------------------------------------------------------------------
// Grid configuration

struct GridConfig {
  Case grid_case = Case::Complex;
  std::vector<int> n_values;
  std::vector<double> sigma_values;  // explicit list; empty when log-spaced
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  int sigma_count = 0;  // > 0 selects the log-spaced rule
  int reps = 1;
  std::uint64_t seed_base = 1;
  TrialOptions trial;
  int workers = 1;
  std::string out_path = "grid.csv";
  std::string summary_path;  // defaults to <out without .csv>.cells.csv
  bool timing = false;

  /// sigma values in ascending order.
  std::vector<double> sigmas() const {
    std::vector<double> s = sigma_values;
    if (sigma_count > 0) {
      s.clear();
      for (int k = 0; k < sigma_count; ++k) {
        const double t = sigma_count == 1 ? 0.0 : static_cast<double>(k) / (sigma_count - 1);
        s.push_back(sigma_min * std::pow(sigma_max / sigma_min, t));
      }
    }
    std::sort(s.begin(), s.end());
    return s;
  }

  std::string resolved_summary_path() const {
    if (!summary_path.empty()) return summary_path;
    std::string base = out_path;
    if (base.size() > 4 && base.compare(base.size() - 4, 4, ".csv") == 0)
      base.resize(base.size() - 4);
    return base + ".cells.csv";
  }

  void validate() const {
    if (n_values.empty()) throw FormatError("config: n is required");
    for (int n : n_values)
      if (n < 2) throw FormatError("config: every n must be >= 2");
    if (sigma_count > 0) {
      if (!(sigma_min > 0.0 && sigma_max >= sigma_min))
        throw FormatError("config: log-spaced sigma needs 0 < sigma_min <= sigma_max");
      if (!sigma_values.empty()) throw FormatError("config: give either sigma or sigma_min/max/count");
    } else if (sigma_values.empty()) {
      throw FormatError("config: sigma values are required");
    }
    for (double s : sigma_values)
      if (!(s >= 0.0)) throw FormatError("config: sigma values must be >= 0");
    if (reps < 1) throw FormatError("config: reps must be >= 1");
    if (workers < 1) throw FormatError("config: workers must be >= 1");
    trial.solver.validate();
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T v{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw FormatError("config: bad value '" + value + "' for " + key);
  return v;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& value) {
  std::vector<T> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_number<T>(key, item));
  }
  if (out.empty()) throw FormatError("config: empty list for " + key);
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw FormatError("config: bad boolean '" + value + "' for " + key);
}

}  // namespace detail

/// Flat `key = value` text, one entry per line, '#' starts a comment. Lists
/// are comma separated. Unknown keys are errors.
inline GridConfig parse_grid_config(std::istream& in) {
  using detail::parse_number;
  GridConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw FormatError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key == "case") {
      if (value == "complex") cfg.grid_case = Case::Complex;
      else if (value == "real") cfg.grid_case = Case::Real;
      else throw FormatError("config: case must be complex or real");
    } else if (key == "n") {
      cfg.n_values = detail::parse_list<int>(key, value);
    } else if (key == "sigma") {
      cfg.sigma_values = detail::parse_list<double>(key, value);
    } else if (key == "sigma_min") {
      cfg.sigma_min = parse_number<double>(key, value);
    } else if (key == "sigma_max") {
      cfg.sigma_max = parse_number<double>(key, value);
    } else if (key == "sigma_count") {
      cfg.sigma_count = parse_number<int>(key, value);
    } else if (key == "reps") {
      cfg.reps = parse_number<int>(key, value);
    } else if (key == "seed_base") {
      cfg.seed_base = parse_number<std::uint64_t>(key, value);
    } else if (key == "workers") {
      cfg.workers = parse_number<int>(key, value);
    } else if (key == "out") {
      cfg.out_path = value;
    } else if (key == "summary_out") {
      cfg.summary_path = value;
    } else if (key == "timing") {
      cfg.timing = detail::parse_bool(key, value);
    } else if (key == "grad_tol") {
      cfg.trial.solver.grad_tol = parse_number<double>(key, value);
    } else if (key == "max_iters") {
      cfg.trial.solver.max_iters = parse_number<int>(key, value);
    } else if (key == "escape_tol") {
      cfg.trial.solver.escape_tol = parse_number<double>(key, value);
    } else if (key == "max_escapes") {
      cfg.trial.solver.max_escapes = parse_number<int>(key, value);
    } else if (key == "residual_tol") {
      cfg.trial.tolerances.residual_tol = parse_number<double>(key, value);
    } else if (key == "psd_tol") {
      cfg.trial.tolerances.psd_tol = parse_number<double>(key, value);
    } else if (key == "rank_tol") {
      cfg.trial.tolerances.rank_tol = parse_number<double>(key, value);
    } else if (key == "discordance_opnorm_const") {
      cfg.trial.discordance.opnorm = parse_number<double>(key, value);
    } else if (key == "discordance_inf_const") {
      cfg.trial.discordance.inf = parse_number<double>(key, value);
    } else {
      throw FormatError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

inline GridConfig load_grid_config(const std::string& path) {
  return detail::with_input_file(path, [](std::istream& in) { return parse_grid_config(in); });
}

/// ANGSYNC_WORKERS, when set to a positive integer, overrides cfg.workers.
inline void apply_worker_override(GridConfig& cfg) {
  if (const char* env = std::getenv("ANGSYNC_WORKERS")) {
    const int w = detail::parse_number<int>("ANGSYNC_WORKERS", detail::trim(env));
    if (w < 1) throw FormatError("ANGSYNC_WORKERS must be >= 1");
    cfg.workers = w;
  }
}

// ---------------------------------------------------------------------------
// Grid runner

struct CellSummary {
  int n = 0;
  double sigma = 0.0;
  int reps = 0;
  double frac_tight = 0.0;
  double frac_unique = 0.0;
  double frac_discordant = 0.0;
  double mean_l2 = 0.0;
  double mean_linf = 0.0;
};

inline constexpr const char* kCellCsvHeader = "n,sigma,frac_tight,frac_unique,frac_discordant,mean_l2,mean_linf";

inline std::string cell_csv_row(const CellSummary& c) {
  std::ostringstream o;
  o << c.n << ',' << format_double(c.sigma) << ',' << format_double(c.frac_tight) << ','
    << format_double(c.frac_unique) << ',' << format_double(c.frac_discordant) << ','
    << format_double(c.mean_l2) << ',' << format_double(c.mean_linf);
  return o.str();
}

inline CellSummary summarize_cell(const std::vector<TrialRecord>& rows) {
  detail::require(!rows.empty(), "summarize_cell: no rows");
  CellSummary c;
  c.n = rows.front().n;
  c.sigma = rows.front().sigma;
  c.reps = static_cast<int>(rows.size());
  for (const TrialRecord& r : rows) {
    c.frac_tight += r.tight;
    c.frac_unique += r.unique;
    c.frac_discordant += r.discordant;
    c.mean_l2 += r.l2_err;
    c.mean_linf += r.linf_err;
  }
  const double k = static_cast<double>(rows.size());
  c.frac_tight /= k;
  c.frac_unique /= k;
  c.frac_discordant /= k;
  c.mean_l2 /= k;
  c.mean_linf /= k;
  return c;
}

inline std::uint64_t grid_trial_seed(std::uint64_t seed_base, Case c, int n, double sigma, int rep) {
  return derive_seed(seed_base, {static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(n),
                                 std::bit_cast<std::uint64_t>(sigma), static_cast<std::uint64_t>(rep)});
}

/// Runs `count` independent jobs on up to `workers` threads; job(i) must
/// write only to slot i of its output.
template <class Job>
void parallel_for(int count, int workers, Job&& job) {
  const int threads = std::max(1, std::min(workers, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = next++; i < count; i = next++) job(i);
      } catch (...) {
        errors[t] = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Runs every (n, sigma) cell in ascending order, writing trial rows to `rows`
/// and cell aggregates to `cells`. Both streams are flushed after each cell.
inline std::vector<CellSummary> run_grid(const GridConfig& cfg, std::ostream& rows, std::ostream& cells) {
  cfg.validate();
  std::vector<int> ns = cfg.n_values;
  std::sort(ns.begin(), ns.end());
  const std::vector<double> sigmas = cfg.sigmas();

  rows << kTrialCsvHeader << '\n';
  cells << kCellCsvHeader << '\n';
  std::vector<CellSummary> summaries;
  for (int n : ns) {
    for (double sigma : sigmas) {
      std::vector<TrialRecord> records(cfg.reps);
      parallel_for(cfg.reps, cfg.workers, [&](int rep) {
        const std::uint64_t seed = grid_trial_seed(cfg.seed_base, cfg.grid_case, n, sigma, rep);
        records[rep] = cfg.grid_case == Case::Complex ? run_trial(n, sigma, seed, cfg.trial, rep)
                                                      : run_real_trial(n, sigma, seed, cfg.trial, rep);
      });
      for (const TrialRecord& r : records) rows << trial_csv_row(r, cfg.timing) << '\n';
      summaries.push_back(summarize_cell(records));
      cells << cell_csv_row(summaries.back()) << '\n';
      rows.flush();
      cells.flush();
      if (!rows || !cells) throw Error("run_grid: write failed");
    }
  }
  return summaries;
}

/// File-writing variant: cfg.out_path and cfg.resolved_summary_path().
inline std::vector<CellSummary> run_grid(const GridConfig& cfg) {
  std::ofstream rows(cfg.out_path);
  if (!rows) throw Error("cannot open '" + cfg.out_path + "' for writing");
  const std::string summary = cfg.resolved_summary_path();
  std::ofstream cells(summary);
  if (!cells) throw Error("cannot open '" + summary + "' for writing");
  return run_grid(cfg, rows, cells);
}

// ---------------------------------------------------------------------------
// Reference curves

struct CurvePoint {
  double n = 0.0;
  double third_sqrt = 0.0;  // sqrt(n) / 3
  double cr = 0.0;          // sqrt(2 pi^2 / 3) sqrt(n)
  double thm = 0.0;         // n^{1/4} / 18
  double real = 0.0;        // sqrt(n / (2 ln n))
};

inline CurvePoint curve_point(double n) {
  return {n, std::sqrt(n) / 3.0, std::sqrt(2.0 * std::numbers::pi * std::numbers::pi / 3.0) * std::sqrt(n),
          theorem_threshold(n), real_threshold(n)};
}

inline std::vector<CurvePoint> emit_curves(double n_min, double n_max, int points) {
  detail::require(n_min >= 2.0, "emit_curves: need n_min >= 2");
  detail::require(n_max >= n_min, "emit_curves: need n_max >= n_min");
  detail::require(points >= 1, "emit_curves: need points >= 1");
  std::vector<CurvePoint> out;
  for (int k = 0; k < points; ++k) {
    const double t = points == 1 ? 0.0 : static_cast<double>(k) / (points - 1);
    out.push_back(curve_point(n_min * std::pow(n_max / n_min, t)));
  }
  return out;
}

inline void write_curves(std::ostream& out, const std::vector<CurvePoint>& pts) {
  out << "n,curve_third_sqrt,curve_cr,curve_thm,curve_real\n";
  for (const CurvePoint& p : pts)
    out << format_double(p.n) << ',' << format_double(p.third_sqrt) << ',' << format_double(p.cr)
        << ',' << format_double(p.thm) << ',' << format_double(p.real) << '\n';
}

}  // namespace angsync
