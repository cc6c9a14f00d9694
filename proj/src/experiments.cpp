#include "repsim/experiments.hpp"

#include <cmath>
#include <exception>
#include <stdexcept>
#include <tuple>

#include "repsim/random.hpp"

namespace repsim {

namespace {

template <typename T>
void require_increasing(const std::vector<T>& grid, const char* name) {
  if (grid.empty()) throw ConfigError(name, "grid must not be empty");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k - 1] < grid[k])) throw ConfigError(name, "grid must be strictly increasing");
  }
}

// Two-pass mean / standard error over a fixed run order.
std::pair<double, double> mean_and_se(const std::vector<double>& xs) {
  const auto n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

// Runs each realization of one grid point, possibly concurrently. cells[r]
// holds realization r's reports laid out [mode][algorithm].
template <typename CellFn>
std::vector<std::vector<MetricsReport>> run_realizations(const ExperimentSpec& spec, CellFn&& cell) {
  const int n = spec.realizations;
  std::vector<std::vector<MetricsReport>> cells(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));

#pragma omp parallel for schedule(dynamic, 1) num_threads(spec.workers)
  for (int r = 0; r < n; ++r) {
    try {
      cells[static_cast<std::size_t>(r)] = cell(r);
    } catch (...) {
      errors[static_cast<std::size_t>(r)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return cells;
}

std::vector<AlgorithmConfig> serial_copies(const std::vector<AlgorithmConfig>& algorithms) {
  auto out = algorithms;
  for (auto& a : out) a.execution = Execution::Serial;
  return out;
}

// Collapses realization-major reports into one row per (mode, algorithm).
std::vector<SweepRow> collect_rows(const ExperimentSpec& spec, const std::vector<std::vector<MetricsReport>>& cells,
                                   const char* variable, double value, const std::vector<ScaleMode>& modes) {
  std::vector<SweepRow> rows;
  const std::size_t n_alg = spec.algorithms.size();
  for (std::size_t m = 0; m < modes.size(); ++m) {
    for (std::size_t a = 0; a < n_alg; ++a) {
      std::vector<MetricsReport> runs;
      runs.reserve(cells.size());
      for (const auto& cell : cells) runs.push_back(cell[m * n_alg + a]);
      SweepRow row;
      row.sweep_variable = variable;
      row.value = value;
      row.mode = modes[m];
      row.algorithm = spec.algorithms[a].label();
      row.cell = aggregate(runs);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace

const char* to_string(SigmaMinRule rule) { return rule == SigmaMinRule::Zero ? "zero" : "eighth"; }

SigmaMinRule parse_sigma_min_rule(const std::string& text) {
  if (text == "zero" || text == "0") return SigmaMinRule::Zero;
  if (text == "eighth" || text == "eighth_of_max" || text == "max/8") return SigmaMinRule::EighthOfMax;
  throw std::invalid_argument("unknown sigma_min rule '" + text + "' (expected zero|eighth)");
}

void ExperimentSpec::validate() const {
  if (realizations < 1) throw ConfigError("realizations", "must be >= 1");
  if (workers < 1) throw ConfigError("workers", "must be >= 1");
  if (algorithms.empty()) throw ConfigError("algorithms", "at least one algorithm is required");
  if (!(relevant_fraction > 0.0 && relevant_fraction < 1.0)) {
    throw ConfigError("relevant_fraction", "must lie in (0, 1)");
  }
  for (const auto& a : algorithms) {
    try {
      a.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("algorithms", e.what());
    }
  }
  if (const auto* s = std::get_if<SigmaMaxSweep>(&sweep)) {
    require_increasing(s->sigma_max_grid, "sigma_max_grid");
    if (s->modes.empty()) throw ConfigError("modes", "at least one rating mode is required");
    if (s->sigma_max_grid.front() < s->sigma_min) throw ConfigError("sigma_max_grid", "values must be >= sigma_min");
    auto probe = base;
    probe.r_max = s->r_max;
    probe.sigma_min = s->sigma_min;
    probe.sigma_max = s->sigma_max_grid.back();
    probe.validate();
  } else {
    const auto& res = std::get<ResolutionSweep>(sweep);
    require_increasing(res.r_grid, "r_grid");
    if (res.r_grid.front() < 2) throw ConfigError("r_grid", "values must be >= 2");
    auto probe = base;
    probe.r_max = res.r_grid.back();
    probe.sigma_min = 0.0;
    probe.sigma_max = probe.r_max - 1.0;
    probe.validate();
  }
}

std::uint64_t realization_seed(std::uint64_t master_seed, int r) {
  return derive_seed(master_seed, 0x5eedULL + static_cast<std::uint64_t>(r));
}

std::vector<double> default_sigma_max_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 16; ++k) grid.push_back(0.25 * k);
  return grid;
}

std::vector<int> default_r_grid() {
  std::vector<int> grid;
  for (int r = 2; r <= 20; ++r) grid.push_back(r);
  return grid;
}

double sigma_min_for(SigmaMinRule rule, double sigma_max) {
  return rule == SigmaMinRule::Zero ? 0.0 : sigma_max / 8.0;
}

GeneratorConfig sigma_cell_config(const ExperimentSpec& spec, const SigmaMaxSweep& sweep, int realization,
                                  double sigma_max, ScaleMode mode) {
  GeneratorConfig config = spec.base;
  config.r_max = sweep.r_max;
  config.sigma_min = sweep.sigma_min;
  config.sigma_max = sigma_max;
  config.mode = mode;
  config.seed = realization_seed(spec.base.seed, realization);
  return config;
}

GeneratorConfig resolution_cell_config(const ExperimentSpec& spec, const ResolutionSweep& sweep, int realization,
                                       int r_max) {
  GeneratorConfig config = spec.base;
  config.r_max = r_max;
  config.sigma_max = static_cast<double>(r_max - 1);
  config.sigma_min = sigma_min_for(sweep.sigma_min_rule, config.sigma_max);
  config.mode = ScaleMode::DiscreteInteger;
  config.seed = realization_seed(spec.base.seed, realization);
  return config;
}

CellAggregate aggregate(const std::vector<MetricsReport>& runs) {
  if (runs.empty()) throw std::invalid_argument("aggregate needs at least one run");
  CellAggregate out;
  out.runs = static_cast<int>(runs.size());

  auto stat = [&](auto&& get, double& mean, double& se) {
    std::vector<double> xs;
    xs.reserve(runs.size());
    for (const auto& r : runs) xs.push_back(get(r));
    std::tie(mean, se) = mean_and_se(xs);
  };
  auto optional_stat = [&](auto&& get, std::optional<double>& mean, std::optional<double>& se) {
    std::vector<double> xs;
    for (const auto& r : runs) {
      const std::optional<double>& v = get(r);
      if (!v) return;
      xs.push_back(*v);
    }
    const auto [m, s] = mean_and_se(xs);
    mean = m;
    se = s;
  };

  stat([](const MetricsReport& r) { return r.delta_q; }, out.mean.delta_q, out.standard_error.delta_q);
  stat([](const MetricsReport& r) { return r.delta_q_normalized; }, out.mean.delta_q_normalized,
       out.standard_error.delta_q_normalized);
  stat([](const MetricsReport& r) { return r.auc_objects; }, out.mean.auc_objects, out.standard_error.auc_objects);
  optional_stat([](const MetricsReport& r) -> const std::optional<double>& { return r.kendall_tau_users; },
                out.mean.kendall_tau_users, out.standard_error.kendall_tau_users);
  optional_stat([](const MetricsReport& r) -> const std::optional<double>& { return r.auc_users; },
                out.mean.auc_users, out.standard_error.auc_users);

  for (const auto& r : runs) {
    if (!r.converged) ++out.nonconverged;
  }
  return out;
}

std::vector<MetricsReport> run_cell(const GeneratorConfig& config, const std::vector<AlgorithmConfig>& algorithms,
                                    double relevant_fraction) {
  const auto data = generate(config);
  const auto pruned = prune_isolated(data.dataset, data.truth);
  std::vector<MetricsReport> reports;
  reports.reserve(algorithms.size());
  for (const auto& alg : algorithms) {
    const auto result = run_algorithm(pruned.dataset, alg);
    reports.push_back(evaluate(result, pruned.truth, pruned.dataset.scale(), relevant_fraction));
  }
  return reports;
}

SweepResult run_sigma_sweep(const ExperimentSpec& spec, const RowSink& sink) {
  spec.validate();
  const auto& sweep = std::get<SigmaMaxSweep>(spec.sweep);
  const auto algorithms = serial_copies(spec.algorithms);

  SweepResult result;
  for (double sigma_max : sweep.sigma_max_grid) {
    auto cells = run_realizations(spec, [&](int r) {
      // Qualities, errors and pairs do not depend on the mode; generate once
      // and quantize the same noisy estimates per mode.
      const auto base = sigma_cell_config(spec, sweep, r, sigma_max, sweep.modes.front());
      const auto truth = generate_ground_truth(base);
      const auto pairs = sample_pairs(base);
      std::vector<MetricsReport> reports;
      for (auto mode : sweep.modes) {
        auto config = base;
        config.mode = mode;
        const auto dataset = generate_ratings(config, truth, pairs);
        const auto pruned = prune_isolated(dataset, truth);
        for (const auto& alg : algorithms) {
          const auto run = run_algorithm(pruned.dataset, alg);
          reports.push_back(evaluate(run, pruned.truth, pruned.dataset.scale(), spec.relevant_fraction));
        }
      }
      return reports;
    });
    auto rows = collect_rows(spec, cells, "sigma_max", sigma_max, sweep.modes);
    if (sink) sink(rows);
    result.rows.insert(result.rows.end(), rows.begin(), rows.end());
  }
  return result;
}

SweepResult run_resolution_sweep(const ExperimentSpec& spec, const RowSink& sink) {
  spec.validate();
  const auto& sweep = std::get<ResolutionSweep>(spec.sweep);
  const auto algorithms = serial_copies(spec.algorithms);
  const std::vector<ScaleMode> modes{ScaleMode::DiscreteInteger};

  SweepResult result;
  for (int r_max : sweep.r_grid) {
    auto cells = run_realizations(spec, [&](int r) {
      return run_cell(resolution_cell_config(spec, sweep, r, r_max), algorithms, spec.relevant_fraction);
    });
    auto rows = collect_rows(spec, cells, "r_max", static_cast<double>(r_max), modes);
    if (sink) sink(rows);
    result.rows.insert(result.rows.end(), rows.begin(), rows.end());
  }
  return result;
}

SweepResult run_sweep(const ExperimentSpec& spec, const RowSink& sink) {
  if (std::holds_alternative<SigmaMaxSweep>(spec.sweep)) return run_sigma_sweep(spec, sink);
  return run_resolution_sweep(spec, sink);
}

}  // namespace repsim
