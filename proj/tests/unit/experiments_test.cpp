#include "repsim/experiments.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace repsim {
namespace {

MetricsReport report(double dq, std::optional<double> tau = std::nullopt, bool converged = true) {
  MetricsReport r;
  r.delta_q = dq;
  r.delta_q_normalized = dq / 4.0;
  r.kendall_tau_users = tau;
  r.auc_users = tau;
  r.auc_objects = 0.5;
  r.converged = converged;
  return r;
}

std::vector<AlgorithmConfig> all_algorithms() {
  std::vector<AlgorithmConfig> out;
  for (auto kind : {AlgorithmKind::AA, AlgorithmKind::Mizz, AlgorithmKind::YZLM, AlgorithmKind::dKVD}) {
    AlgorithmConfig c;
    c.kind = kind;
    out.push_back(c);
  }
  return out;
}

ExperimentSpec small_sigma_spec(std::vector<double> grid) {
  ExperimentSpec spec;
  spec.base.num_users = 60;
  spec.base.num_objects = 60;
  spec.base.sparsity = 0.15;
  spec.base.seed = 5;
  SigmaMaxSweep sweep;
  sweep.sigma_max_grid = std::move(grid);
  spec.sweep = sweep;
  spec.algorithms = all_algorithms();
  spec.realizations = 3;
  return spec;
}

TEST(Aggregate, MeanAndStandardError) {
  const auto agg = aggregate({report(0.1), report(0.3)});
  EXPECT_NEAR(agg.mean.delta_q, 0.2, 1e-15);
  // Sample stddev sqrt(0.02) over sqrt(2).
  EXPECT_NEAR(agg.standard_error.delta_q, 0.1, 1e-15);
  EXPECT_EQ(agg.runs, 2);
}

TEST(Aggregate, SingleRunHasZeroError) {
  const auto agg = aggregate({report(0.4, 0.2)});
  EXPECT_EQ(agg.mean.delta_q, 0.4);
  EXPECT_EQ(agg.standard_error.delta_q, 0.0);
  EXPECT_EQ(agg.standard_error.kendall_tau_users.value(), 0.0);
}

TEST(Aggregate, OptionalMetricsAndConvergenceCount) {
  const auto absent = aggregate({report(0.1), report(0.2)});
  EXPECT_FALSE(absent.mean.kendall_tau_users.has_value());
  EXPECT_FALSE(absent.mean.auc_users.has_value());
  const auto mixed = aggregate({report(0.1, 0.5, false), report(0.2, 0.7), report(0.3, 0.9, false)});
  EXPECT_NEAR(mixed.mean.kendall_tau_users.value(), 0.7, 1e-15);
  EXPECT_EQ(mixed.nonconverged, 2);
  EXPECT_THROW(aggregate({}), std::invalid_argument);
}

TEST(SigmaMinRule, Values) {
  EXPECT_EQ(sigma_min_for(SigmaMinRule::Zero, 8.0), 0.0);
  EXPECT_EQ(sigma_min_for(SigmaMinRule::EighthOfMax, 8.0), 1.0);
  EXPECT_EQ(parse_sigma_min_rule("eighth"), SigmaMinRule::EighthOfMax);
  EXPECT_THROW(parse_sigma_min_rule("half"), std::invalid_argument);
}

TEST(CellConfigs, ResolutionCellsAreDiscreteWithFullNoiseRange) {
  ExperimentSpec spec;
  ResolutionSweep sweep{{9}, SigmaMinRule::EighthOfMax};
  spec.sweep = sweep;
  const auto c = resolution_cell_config(spec, sweep, 0, 9);
  EXPECT_EQ(c.mode, ScaleMode::DiscreteInteger);
  EXPECT_EQ(c.sigma_max, 8.0);
  EXPECT_EQ(c.sigma_min, 1.0);
  EXPECT_NE(resolution_cell_config(spec, sweep, 1, 9).seed, c.seed);
}

TEST(DefaultGrids, Shapes) {
  const auto s = default_sigma_max_grid();
  ASSERT_EQ(s.size(), 17u);
  EXPECT_EQ(s.front(), 0.0);
  EXPECT_EQ(s.back(), 4.0);
  const auto r = default_r_grid();
  ASSERT_EQ(r.size(), 19u);
  EXPECT_EQ(r.front(), 2);
  EXPECT_EQ(r.back(), 20);
}

TEST(ExperimentSpec, ValidationNamesTheField) {
  auto spec = small_sigma_spec({1.0, 0.5});
  try {
    spec.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "sigma_max_grid");
  }
  spec = small_sigma_spec({0.5});
  spec.realizations = 0;
  EXPECT_THROW(spec.validate(), ConfigError);
  spec = small_sigma_spec({0.5});
  spec.algorithms.clear();
  EXPECT_THROW(spec.validate(), ConfigError);
}

TEST(SigmaSweep, NoiselessContinuousCellIsExact) {
  const auto result = run_sweep(small_sigma_spec({0.0}));
  ASSERT_EQ(result.rows.size(), 8u);
  for (const auto& row : result.rows) {
    if (row.mode != ScaleMode::Continuous) continue;
    EXPECT_NEAR(row.cell.mean.delta_q, 0.0, 1e-12) << row.algorithm;
    EXPECT_EQ(row.cell.runs, 3);
  }
}

TEST(SigmaSweep, RowLayoutAndStreaming) {
  auto spec = small_sigma_spec({0.0, 0.5, 1.0});
  std::vector<std::size_t> batches;
  const auto result = run_sweep(spec, [&](const std::vector<SweepRow>& rows) { batches.push_back(rows.size()); });
  EXPECT_EQ(batches, (std::vector<std::size_t>{8, 8, 8}));
  ASSERT_EQ(result.rows.size(), 24u);
  EXPECT_EQ(result.rows[0].sweep_variable, "sigma_max");
  EXPECT_EQ(result.rows[0].algorithm, "aa");
  EXPECT_EQ(result.rows[3].algorithm, "dkvd");
  EXPECT_EQ(result.rows[4].mode, ScaleMode::DiscreteInteger);
  EXPECT_EQ(result.rows[8].value, 0.5);
  EXPECT_FALSE(result.rows[0].cell.mean.auc_users.has_value());
  EXPECT_TRUE(result.rows[2].cell.mean.auc_users.has_value());
}

TEST(SigmaSweep, ReproducibleAndIndependentOfWorkerCount) {
  auto spec = small_sigma_spec({0.5, 2.0});
  spec.realizations = 5;
  const auto a = run_sweep(spec);
  const auto b = run_sweep(spec);
  spec.workers = 3;
  const auto c = run_sweep(spec);
  ASSERT_EQ(a.rows.size(), c.rows.size());
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    for (const auto* other : {&b.rows[k], &c.rows[k]}) {
      EXPECT_EQ(a.rows[k].cell.mean.delta_q, other->cell.mean.delta_q);
      EXPECT_EQ(a.rows[k].cell.standard_error.delta_q, other->cell.standard_error.delta_q);
      EXPECT_EQ(a.rows[k].cell.mean.auc_objects, other->cell.mean.auc_objects);
      EXPECT_EQ(a.rows[k].cell.mean.auc_users, other->cell.mean.auc_users);
      EXPECT_EQ(a.rows[k].cell.mean.kendall_tau_users, other->cell.mean.kendall_tau_users);
    }
  }
}

TEST(SigmaSweep, AverageErrorGrowsWithNoiseBound) {
  // With identical Q, pairs and noise draws, only the noise scale changes
  // between grid points, so AA's continuous error grows with sigma_max.
  const auto result = run_sweep(small_sigma_spec({0.5, 1.0, 2.0}));
  double prev = -1.0;
  for (const auto& row : result.rows) {
    if (row.algorithm != "aa" || row.mode != ScaleMode::Continuous) continue;
    EXPECT_GT(row.cell.mean.delta_q, prev);
    prev = row.cell.mean.delta_q;
  }
}

TEST(ResolutionSweep, DiscreteOnlyRows) {
  ExperimentSpec spec;
  spec.base.num_users = 50;
  spec.base.num_objects = 50;
  spec.base.sparsity = 0.2;
  spec.sweep = ResolutionSweep{{2, 3, 5}, SigmaMinRule::Zero};
  spec.algorithms = all_algorithms();
  spec.realizations = 2;
  const auto result = run_sweep(spec);
  ASSERT_EQ(result.rows.size(), 12u);
  for (const auto& row : result.rows) {
    EXPECT_EQ(row.mode, ScaleMode::DiscreteInteger);
    EXPECT_EQ(row.sweep_variable, "r_max");
  }
  EXPECT_EQ(result.rows[4].value, 3.0);
}

TEST(RunCell, SameConfigSameReports) {
  GeneratorConfig c;
  c.num_users = 40;
  c.num_objects = 40;
  c.sparsity = 0.2;
  c.sigma_max = 1.0;
  const auto a = run_cell(c, all_algorithms(), 0.05);
  const auto b = run_cell(c, all_algorithms(), 0.05);
  ASSERT_EQ(a.size(), 4u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].delta_q, b[k].delta_q);
    EXPECT_EQ(a[k].auc_users, b[k].auc_users);
  }
}

}  // namespace
}  // namespace repsim
