#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "angsync/experiment.hpp"
#include "test_util.hpp"

namespace angsync {
namespace {

GridConfig small_grid(Case c) {
  GridConfig cfg;
  cfg.grid_case = c;
  cfg.n_values = {12, 8};
  cfg.sigma_values = {0.5, 0.1};
  cfg.reps = 3;
  cfg.seed_base = 17;
  return cfg;
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

TEST(RunTrial, NoiselessIsExact) {
  const TrialRecord r = run_trial(30, 0.0, 1);
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(r.tight);
  EXPECT_TRUE(r.unique);
  EXPECT_LE(r.l2_err, 1e-7);
  EXPECT_TRUE(r.discordant);
}

TEST(RunTrial, Deterministic) {
  const TrialRecord a = run_trial(25, 1.0, 9);
  const TrialRecord b = run_trial(25, 1.0, 9);
  EXPECT_EQ(trial_csv_row(a), trial_csv_row(b));
}

TEST(RunTrial, RecordFieldsAreConsistent) {
  const TrialOutcome o = run_trial_full(20, 0.8, 3, {}, 4);
  EXPECT_EQ(o.record.rep, 4);
  EXPECT_EQ(o.record.seed, 3u);
  EXPECT_NEAR(o.record.cost_x, cost(o.instance.C(), o.x), 1e-9 * 400);
  EXPECT_NEAR(o.record.l2_err, l2_error(o.x, o.instance.z()), 1e-12);
  EXPECT_GE(o.record.cost_x, o.record.cost_z - 1e-9 * 400);
}

TEST(RunRealTrial, NoiselessRecovers) {
  const TrialRecord r = run_real_trial(20, 0.0, 2);
  EXPECT_EQ(r.trial_case, Case::Real);
  EXPECT_TRUE(r.tight);
  EXPECT_TRUE(r.unique);
  EXPECT_EQ(r.l2_err, 0.0);
}

TEST(Csv, FieldQuoting) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
}

TEST(Csv, RowHasHeaderArity) {
  const std::string header = kTrialCsvHeader;
  const std::string row = trial_csv_row(run_trial(10, 0.3, 1));
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), std::count(header.begin(), header.end(), ','));
  EXPECT_EQ(row.substr(row.rfind(',') + 1), "0");
}

TEST(Csv, TimingColumn) {
  TrialRecord r;
  r.runtime_ms = 12.5;
  const std::string row = trial_csv_row(r, true);
  EXPECT_EQ(row.substr(row.rfind(',') + 1), "12.5");
}

TEST(GridConfigParse, FullExample) {
  std::istringstream in(
      "# comment\n"
      "case = real\n"
      "n = 50, 100\n"
      "sigma_min = 0.1   # trailing comment\n"
      "sigma_max = 10\n"
      "sigma_count = 3\n"
      "reps = 7\n"
      "seed_base = 42\n"
      "workers = 2\n"
      "out = results/x.csv\n"
      "timing = yes\n"
      "grad_tol = 1e-9\n"
      "psd_tol = -1e-13\n"
      "discordance_inf_const = 4\n");
  const GridConfig cfg = parse_grid_config(in);
  EXPECT_EQ(cfg.grid_case, Case::Real);
  EXPECT_EQ(cfg.n_values, (std::vector<int>{50, 100}));
  const std::vector<double> s = cfg.sigmas();
  ASSERT_EQ(s.size(), 3u);
  EXPECT_DOUBLE_EQ(s[0], 0.1);
  EXPECT_DOUBLE_EQ(s[1], 1.0);
  EXPECT_DOUBLE_EQ(s[2], 10.0);
  EXPECT_EQ(cfg.reps, 7);
  EXPECT_EQ(cfg.seed_base, 42u);
  EXPECT_EQ(cfg.workers, 2);
  EXPECT_TRUE(cfg.timing);
  EXPECT_EQ(cfg.resolved_summary_path(), "results/x.cells.csv");
  EXPECT_EQ(cfg.trial.solver.grad_tol, 1e-9);
  EXPECT_EQ(cfg.trial.tolerances.psd_tol, -1e-13);
  EXPECT_EQ(cfg.trial.discordance.inf, 4.0);
}

TEST(GridConfigParse, Errors) {
  for (const char* text : {"n = 10\nsigma = 1\nbogus = 3\n", "n = 10\n", "sigma = 1\n", "n = 1\nsigma = 1\n",
                           "n = 10\nsigma = -1\n", "n = 10\nsigma = 1\nreps = 0\n", "n = ten\nsigma = 1\n",
                           "n = 10\nsigma = 1\ncase = quaternion\n", "just words\n",
                           "n = 10\nsigma = 1\nsigma_min = 1\nsigma_max = 2\nsigma_count = 2\n",
                           "n = 10\nsigma_min = 0\nsigma_max = 2\nsigma_count = 2\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(parse_grid_config(in), FormatError) << text;
  }
}

TEST(GridConfigParse, WorkerOverride) {
  GridConfig cfg = small_grid(Case::Complex);
  ::setenv("ANGSYNC_WORKERS", "3", 1);
  apply_worker_override(cfg);
  EXPECT_EQ(cfg.workers, 3);
  ::setenv("ANGSYNC_WORKERS", "0", 1);
  EXPECT_THROW(apply_worker_override(cfg), FormatError);
  ::unsetenv("ANGSYNC_WORKERS");
  cfg.workers = 1;
  apply_worker_override(cfg);
  EXPECT_EQ(cfg.workers, 1);
}

TEST(RunGrid, SingleCellShape) {
  GridConfig cfg;
  cfg.n_values = {10};
  cfg.sigma_values = {0.2};
  cfg.reps = 3;
  std::ostringstream rows, cells;
  const auto summaries = run_grid(cfg, rows, cells);
  EXPECT_EQ(lines_of(rows.str()).size(), 4u);
  EXPECT_EQ(lines_of(cells.str()).size(), 2u);
  ASSERT_EQ(summaries.size(), 1u);
  EXPECT_EQ(summaries[0].reps, 3);
}

TEST(RunGrid, CellsInAscendingOrder) {
  std::ostringstream rows, cells;
  const auto s = run_grid(small_grid(Case::Complex), rows, cells);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s[0].n, 8);
  EXPECT_EQ(s[0].sigma, 0.1);
  EXPECT_EQ(s[1].sigma, 0.5);
  EXPECT_EQ(s[3].n, 12);
}

TEST(RunGrid, WorkerCountDoesNotChangeOutput) {
  for (Case c : {Case::Complex, Case::Real}) {
    GridConfig one = small_grid(c);
    GridConfig four = one;
    four.workers = 4;
    std::ostringstream r1, c1, r4, c4;
    run_grid(one, r1, c1);
    run_grid(four, r4, c4);
    EXPECT_EQ(r1.str(), r4.str());
    EXPECT_EQ(c1.str(), c4.str());
  }
}

TEST(RunGrid, AggregatesMatchRows) {
  std::ostringstream rows, cells;
  const GridConfig cfg = small_grid(Case::Complex);
  const auto summaries = run_grid(cfg, rows, cells);
  const auto row_lines = lines_of(rows.str());
  for (std::size_t k = 0; k < summaries.size(); ++k) {
    int tight = 0;
    for (int rep = 0; rep < cfg.reps; ++rep) {
      const std::string& l = row_lines[1 + k * cfg.reps + rep];
      // tight is the 18th column.
      std::istringstream ls(l);
      std::string f;
      for (int col = 0; col < 18; ++col) std::getline(ls, f, ',');
      tight += f == "1";
    }
    EXPECT_DOUBLE_EQ(summaries[k].frac_tight, tight / double(cfg.reps));
  }
}

TEST(RunGrid, SeedsDependOnCellAndRep) {
  const auto a = grid_trial_seed(1, Case::Complex, 10, 0.5, 0);
  EXPECT_NE(a, grid_trial_seed(1, Case::Complex, 10, 0.5, 1));
  EXPECT_NE(a, grid_trial_seed(1, Case::Complex, 11, 0.5, 0));
  EXPECT_NE(a, grid_trial_seed(1, Case::Complex, 10, 0.5000001, 0));
  EXPECT_NE(a, grid_trial_seed(1, Case::Real, 10, 0.5, 0));
  EXPECT_NE(a, grid_trial_seed(2, Case::Complex, 10, 0.5, 0));
  EXPECT_EQ(a, grid_trial_seed(1, Case::Complex, 10, 0.5, 0));
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(10, 3, [](int i) {
                 if (i == 5) throw Error("boom");
               }),
               Error);
}

TEST(Curves, KnownValues) {
  const CurvePoint p81 = curve_point(81.0);
  EXPECT_NEAR(p81.thm, 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(p81.third_sqrt, 3.0, 1e-15);
  const CurvePoint p100 = curve_point(100.0);
  EXPECT_NEAR(p100.cr, 10.0 * std::sqrt(2.0 * M_PI * M_PI / 3.0), 1e-12);
  EXPECT_NEAR(p100.real, std::sqrt(100.0 / (2.0 * std::log(100.0))), 1e-12);
}

TEST(Curves, LogSpacedEndpoints) {
  const auto pts = emit_curves(10.0, 1000.0, 3);
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_DOUBLE_EQ(pts[0].n, 10.0);
  EXPECT_NEAR(pts[1].n, 100.0, 1e-10);
  EXPECT_NEAR(pts[2].n, 1000.0, 1e-10);
  EXPECT_THROW(emit_curves(1.0, 10.0, 3), Error);
  EXPECT_THROW(emit_curves(10.0, 5.0, 3), Error);
  std::ostringstream out;
  write_curves(out, pts);
  EXPECT_EQ(lines_of(out.str()).size(), 4u);
}

// Properties.

TEST(ExperimentProperties, TightnessDecaysWithNoise) {
  GridConfig cfg;
  cfg.n_values = {40};
  cfg.sigma_values = {0.5, 8.0};
  cfg.reps = 6;
  std::ostringstream rows, cells;
  const auto s = run_grid(cfg, rows, cells);
  EXPECT_GE(s[0].frac_tight, s[1].frac_tight);
  EXPECT_EQ(s[0].frac_tight, 1.0);
}

TEST(ExperimentProperties, ErrorsGrowWithNoise) {
  double prev = -1.0;
  for (double sigma : {0.0, 0.3, 1.0, 3.0}) {
    double mean = 0.0;
    for (int s = 0; s < 5; ++s) mean += run_trial(30, sigma, 500 + s).l2_err / 5.0;
    EXPECT_GE(mean, prev);
    prev = mean;
  }
}

}  // namespace
}  // namespace angsync
