// angsync command-line front end.
//
// Exit codes: 0 success, 1 I/O / config / usage errors, 2 solver did not
// converge (solve only).

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "angsync/angsync.hpp"

namespace {

constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

void add_solver_flags(CLI::App* cmd, angsync::TrialOptions& opts) {
  cmd->add_option("--grad-tol", opts.solver.grad_tol, "Stop when ||grad|| <= grad_tol * n");
  cmd->add_option("--max-iters", opts.solver.max_iters, "Trust-region iteration budget");
  cmd->add_option("--escape-tol", opts.solver.escape_tol, "Negative curvature threshold (times n)");
  cmd->add_option("--max-escapes", opts.solver.max_escapes, "Maximum saddle escapes");
}

void add_certificate_flags(CLI::App* cmd, angsync::CertifyTolerances& tol) {
  cmd->add_option("--residual-tol", tol.residual_tol, "Tight requires ||Sx|| <= residual_tol * n");
  cmd->add_option("--psd-tol", tol.psd_tol, "Tight requires lambda_1(S) >= psd_tol * n");
  cmd->add_option("--rank-tol", tol.rank_tol, "Unique requires lambda_2(S) >= rank_tol * n");
}

void print_summary(const std::vector<angsync::CellSummary>& cells) {
  std::cout << angsync::kCellCsvHeader << '\n';
  for (const auto& c : cells) std::cout << angsync::cell_csv_row(c) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Angular synchronization: MLE by Riemannian optimization with dual certificates"};
  app.require_subcommand(1);

  // solve
  int n = 0;
  double sigma = 0.0;
  std::uint64_t seed = 1;
  std::string dump_instance;
  std::string dump_x;
  bool timing = false;
  angsync::TrialOptions solve_opts;
  auto* solve = app.add_subcommand("solve", "Generate one instance, solve it and certify the result");
  solve->add_option("--n", n, "Problem size")->required()->check(CLI::Range(2, 1 << 20));
  solve->add_option("--sigma", sigma, "Noise level")->required()->check(CLI::NonNegativeNumber);
  solve->add_option("--seed", seed, "Instance seed")->required();
  solve->add_option("--dump-instance", dump_instance, "Write the instance bundle here");
  solve->add_option("--dump-x", dump_x, "Write the aligned estimate here");
  solve->add_flag("--timing", timing, "Report runtime_ms instead of 0");
  add_solver_flags(solve, solve_opts);
  add_certificate_flags(solve, solve_opts.tolerances);

  // certify
  std::string instance_path;
  std::string x_path;
  bool header = false;
  angsync::CertifyTolerances cert_tol;
  auto* certify = app.add_subcommand("certify", "Certify an estimate against an instance bundle");
  certify->add_option("--instance", instance_path, "Instance bundle")->required();
  certify->add_option("--x", x_path, "Estimate (vector text format)")->required();
  certify->add_flag("--header", header, "Print the CSV header line first");
  add_certificate_flags(certify, cert_tol);

  // grid / real-grid
  std::string config_path;
  auto* grid = app.add_subcommand("grid", "Run a Monte-Carlo grid from a config file");
  grid->add_option("--config", config_path, "Config file")->required();
  std::string real_config_path;
  auto* real_grid = app.add_subcommand("real-grid", "Run a real +-1 exact-recovery grid");
  real_grid->add_option("--config", real_config_path, "Config file")->required();

  // curves
  double n_min = 2;
  double n_max = 1000;
  int points = 50;
  auto* curves = app.add_subcommand("curves", "Emit the reference threshold curves as CSV");
  curves->add_option("--nmin", n_min, "Smallest n")->required();
  curves->add_option("--nmax", n_max, "Largest n")->required();
  curves->add_option("--points", points, "Number of log-spaced points")->required();

  // check-noise
  int noise_n = 100;
  int trials = 1000;
  std::uint64_t noise_seed = 1;
  auto* check_noise = app.add_subcommand("check-noise", "Empirical tail frequencies of Wigner noise");
  check_noise->add_option("--n", noise_n, "Matrix size")->required()->check(CLI::Range(2, 1 << 20));
  check_noise->add_option("--trials", trials, "Number of draws")->required()->check(CLI::PositiveNumber);
  check_noise->add_option("--seed", noise_seed, "Seed base")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*solve) {
      const angsync::TrialOutcome out = angsync::run_trial_full(n, sigma, seed, solve_opts);
      if (!dump_instance.empty()) angsync::save_instance(dump_instance, out.instance);
      if (!dump_x.empty()) angsync::save_vector(dump_x, out.x.values());
      std::cout << angsync::kTrialCsvHeader << '\n'
                << angsync::trial_csv_row(out.record, timing) << '\n';
      return out.record.converged ? 0 : kExitNotConverged;
    }
    if (*certify) {
      const angsync::SyncInstance inst = angsync::load_instance(instance_path);
      const angsync::PhaseVector x(angsync::load_vector(x_path));
      if (x.size() != inst.n()) throw angsync::FormatError("x and instance sizes differ");
      const angsync::CertificateReport rep = angsync::certify(inst.C(), x, cert_tol);
      if (header) std::cout << angsync::kCertificateCsvHeader << '\n';
      std::cout << angsync::certificate_csv_row(rep) << '\n';
      if (!rep.note.empty()) std::cerr << "note: " << rep.note << '\n';
      return 0;
    }
    if (*grid || *real_grid) {
      angsync::GridConfig cfg = angsync::load_grid_config(*grid ? config_path : real_config_path);
      if (*real_grid) cfg.grid_case = angsync::Case::Real;
      angsync::apply_worker_override(cfg);
      print_summary(angsync::run_grid(cfg));
      std::cerr << "wrote " << cfg.out_path << " and " << cfg.resolved_summary_path() << '\n';
      return 0;
    }
    if (*curves) {
      angsync::write_curves(std::cout, angsync::emit_curves(n_min, n_max, points));
      return 0;
    }
    if (*check_noise) {
      const angsync::NoiseTailStats s = angsync::noise_tail_stats(noise_n, trials, noise_seed);
      std::cout << "n,trials,freq_opnorm,bound_opnorm,freq_inf,bound_inf,max_opnorm_ratio,max_inf_ratio\n"
                << s.n << ',' << s.trials << ',' << angsync::format_double(s.freq_opnorm) << ','
                << angsync::format_double(s.bound_opnorm) << ',' << angsync::format_double(s.freq_inf)
                << ',' << angsync::format_double(s.bound_inf) << ','
                << angsync::format_double(s.max_opnorm_ratio) << ','
                << angsync::format_double(s.max_inf_ratio) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
