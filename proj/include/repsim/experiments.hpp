#pragma once

// Monte Carlo sweeps over synthetic datasets.
//
// A sweep is a grid of settings crossed with rating modes and algorithms.
// Every realization gets its own seed derived from the master seed; within a
// realization all grid points and modes share the same qualities, user
// ability ordering, pairs and noise draws, so the only thing that varies
// between cells is the parameter being swept.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "repsim/algorithms.hpp"
#include "repsim/metrics.hpp"
#include "repsim/synthgen.hpp"

namespace repsim {

struct SigmaMaxSweep {
  int r_max = 5;
  double sigma_min = 0.0;
  std::vector<double> sigma_max_grid;
  std::vector<ScaleMode> modes{ScaleMode::Continuous, ScaleMode::DiscreteInteger};
};

enum class SigmaMinRule { Zero, EighthOfMax };

const char* to_string(SigmaMinRule rule);
SigmaMinRule parse_sigma_min_rule(const std::string& text);

/// Discrete ratings with sigma_max = R - 1 at each R.
struct ResolutionSweep {
  std::vector<int> r_grid;
  SigmaMinRule sigma_min_rule = SigmaMinRule::Zero;
};

struct ExperimentSpec {
  GeneratorConfig base;  // num_users, num_objects, sparsity and master seed are used
  std::variant<SigmaMaxSweep, ResolutionSweep> sweep;
  std::vector<AlgorithmConfig> algorithms;
  int realizations = 1;
  int workers = 1;
  double relevant_fraction = kDefaultRelevantFraction;

  void validate() const;
};

/// Seed of realization `r` under `master_seed`.
std::uint64_t realization_seed(std::uint64_t master_seed, int r);

/// 0, 0.25, ..., 4.
std::vector<double> default_sigma_max_grid();
/// 2, 3, ..., 20.
std::vector<int> default_r_grid();

double sigma_min_for(SigmaMinRule rule, double sigma_max);

/// Generator config of one (realization, grid point, mode) cell.
GeneratorConfig sigma_cell_config(const ExperimentSpec& spec, const SigmaMaxSweep& sweep, int realization,
                                  double sigma_max, ScaleMode mode);
GeneratorConfig resolution_cell_config(const ExperimentSpec& spec, const ResolutionSweep& sweep, int realization,
                                       int r_max);

/// Per-metric mean and standard error; optional metrics stay absent when any
/// run lacks them.
struct MetricStats {
  double delta_q = 0.0;
  double delta_q_normalized = 0.0;
  std::optional<double> kendall_tau_users;
  double auc_objects = 0.0;
  std::optional<double> auc_users;
};

struct CellAggregate {
  MetricStats mean;
  MetricStats standard_error;
  int runs = 0;
  int nonconverged = 0;
};

/// Mean and sample-stddev / sqrt(n); n = 1 gives SE = 0.
CellAggregate aggregate(const std::vector<MetricsReport>& runs);

struct SweepRow {
  std::string sweep_variable;  // "sigma_max" or "r_max"
  double value = 0.0;
  ScaleMode mode = ScaleMode::Continuous;
  std::string algorithm;       // AlgorithmConfig::label()
  CellAggregate cell;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

/// Called after each grid point completes with that point's rows.
using RowSink = std::function<void(const std::vector<SweepRow>&)>;

/// Evaluates every algorithm on one generated cell, after pruning isolated
/// users and objects.
std::vector<MetricsReport> run_cell(const GeneratorConfig& config, const std::vector<AlgorithmConfig>& algorithms,
                                    double relevant_fraction);

SweepResult run_sigma_sweep(const ExperimentSpec& spec, const RowSink& sink = {});
SweepResult run_resolution_sweep(const ExperimentSpec& spec, const RowSink& sink = {});
SweepResult run_sweep(const ExperimentSpec& spec, const RowSink& sink = {});

}  // namespace repsim
