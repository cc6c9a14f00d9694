#include "repsim/commands.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "repsim/config.hpp"
#include "repsim/experiments.hpp"
#include "repsim/io.hpp"
#include "repsim/metrics.hpp"
#include "repsim/synthgen.hpp"

namespace repsim::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

config::Tree load_or_empty(const std::string& path) { return path.empty() ? config::Tree{} : config::load(path); }

void apply_algorithm_overrides(AlgorithmConfig& c, const CommandOptions& o) {
  if (o.beta) c.beta = *o.beta;
  if (o.epsilon) c.epsilon = *o.epsilon;
  if (o.delta) c.convergence_threshold = *o.delta;
  if (o.max_iters) c.max_iterations = *o.max_iters;
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("algorithm", e.what());
  }
}

json metrics_json(const MetricsReport& m) {
  json j;
  j["delta_q"] = m.delta_q;
  j["delta_q_norm"] = m.delta_q_normalized;
  j["auc_objects"] = m.auc_objects;
  if (m.kendall_tau_users) {
    j["tau_users"] = *m.kendall_tau_users;
    j["tau_degenerate"] = m.tau_degenerate;
  }
  if (m.auc_users) j["auc_users"] = *m.auc_users;
  return j;
}

// Aligns "id -> value" entries with a symbol table, interning in file order.
std::vector<double> values_in_order(const std::vector<std::pair<std::string, double>>& entries, io::SymbolTable& ids) {
  std::vector<double> values;
  values.reserve(entries.size());
  for (const auto& [name, value] : entries) {
    ids.intern(name);
    values.push_back(value);
  }
  return values;
}

}  // namespace

void cmd_generate(const CommandOptions& options) {
  auto tree = load_or_empty(options.config);
  auto c = config::generator_from(tree);
  if (options.seed) c.seed = *options.seed;
  if (options.mode) c.mode = *options.mode;
  if (options.r_max) c.r_max = *options.r_max;
  c.validate();

  const fs::path out_dir(options.out);
  fs::create_directories(out_dir);
  const auto data = generate(c);
  const auto users = io::SymbolTable::numbered(c.num_users);
  const auto objects = io::SymbolTable::numbered(c.num_objects);
  {
    auto out = open_out(out_dir / kRatingsFile);
    io::write_ratings(out, data.dataset, users, objects);
  }
  {
    auto out = open_out(out_dir / kObjectTruthFile);
    io::write_values(out, "object_id", "Q", data.truth.true_quality, objects);
  }
  {
    auto out = open_out(out_dir / kUserTruthFile);
    io::write_values(out, "user_id", "sigma", data.truth.user_error, users);
  }
  config::write_json((out_dir / kManifestFile).string(), config::to_tree(c));
}

void cmd_run(const CommandOptions& options) {
  auto tree = load_or_empty(options.config);
  AlgorithmConfig alg = config::algorithms_from(tree).front();
  if (options.algorithm) {
    try {
      alg.kind = parse_algorithm_kind(*options.algorithm);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("algorithm", e.what());
    }
  }
  apply_algorithm_overrides(alg, options);

  const fs::path data_dir(options.data_dir.empty() ? "." : options.data_dir);
  const fs::path ratings_path = options.ratings.empty() ? data_dir / kRatingsFile : fs::path(options.ratings);
  const fs::path object_truth_path = data_dir / kObjectTruthFile;
  const fs::path user_truth_path = data_dir / kUserTruthFile;
  const bool have_truth =
      !options.data_dir.empty() && fs::exists(object_truth_path) && fs::exists(user_truth_path);

  io::SymbolTable users, objects;
  GroundTruth truth;
  if (have_truth) {
    auto oin = open_in(object_truth_path);
    truth.true_quality = values_in_order(io::read_values(oin, object_truth_path.string()), objects);
    auto uin = open_in(user_truth_path);
    truth.user_error = values_in_order(io::read_values(uin, user_truth_path.string()), users);
  }
  auto rin = open_in(ratings_path);
  const auto file = io::read_ratings(rin, ratings_path.string(), users, objects, have_truth);

  RatingScale scale = file.scale.value_or(RatingScale{});
  if (!file.scale && !options.config.empty()) {
    const auto gen = config::generator_from(tree);
    scale = {gen.r_max, gen.mode};
  }
  if (options.r_max) scale.r_max = *options.r_max;
  if (options.mode) scale.mode = *options.mode;

  const auto dataset = build_dataset(file.triples, users.size(), objects.size(), scale);
  const auto pruned = prune_isolated(dataset, truth);
  const auto result = run_algorithm(pruned.dataset, alg);

  const fs::path out_dir(options.out);
  fs::create_directories(out_dir);
  {
    io::SymbolTable kept;
    for (auto old : pruned.maps.object_new_to_old) kept.intern(objects.name(old));
    auto out = open_out(out_dir / kQualityFile);
    io::write_values(out, "object_id", "quality", result.quality, kept);
  }
  {
    io::SymbolTable kept;
    for (auto old : pruned.maps.user_new_to_old) kept.intern(users.name(old));
    auto out = open_out(out_dir / kWeightsFile);
    io::write_values(out, "user_id", "weight", result.weights, kept);
  }

  json report;
  report["algorithm"] = to_string(alg.kind);
  report["beta"] = alg.beta;
  report["epsilon"] = alg.epsilon;
  report["delta"] = alg.convergence_threshold;
  report["max_iterations"] = alg.max_iterations;
  report["r_max"] = scale.r_max;
  report["mode"] = to_string(scale.mode);
  report["users"] = pruned.dataset.num_users();
  report["objects"] = pruned.dataset.num_objects();
  report["ratings"] = pruned.dataset.num_ratings();
  report["pruned_users"] = dataset.num_users() - pruned.dataset.num_users();
  report["pruned_objects"] = dataset.num_objects() - pruned.dataset.num_objects();
  report["iterations_used"] = result.iterations_used;
  report["final_delta"] = result.final_delta;
  report["converged"] = result.converged;
  if (have_truth) report["metrics"] = metrics_json(evaluate(result, pruned.truth, scale));
  auto out = open_out(out_dir / kReportFile);
  out << report.dump(2) << '\n';
}

void cmd_sweep(const CommandOptions& options) {
  if (options.config.empty()) throw ConfigError("config", "sweep needs --config");
  auto spec = config::experiment_from(config::load(options.config));
  if (options.seed) spec.base.seed = *options.seed;
  if (options.realizations) spec.realizations = *options.realizations;
  if (options.workers) spec.workers = *options.workers;
  for (auto& a : spec.algorithms) apply_algorithm_overrides(a, options);
  if (options.algorithm) {
    AlgorithmConfig only = spec.algorithms.front();
    try {
      only.kind = parse_algorithm_kind(*options.algorithm);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("algorithm", e.what());
    }
    spec.algorithms = {only};
  }
  if (options.mode) {
    if (auto* s = std::get_if<SigmaMaxSweep>(&spec.sweep)) s->modes = {*options.mode};
  }
  spec.validate();

  const fs::path out_dir(options.out);
  fs::create_directories(out_dir);
  config::write_json((out_dir / kManifestFile).string(), config::to_tree(spec));

  auto csv = open_out(out_dir / kSweepFile);
  io::write_sweep_header(csv);
  csv.flush();
  run_sweep(spec, [&](const std::vector<SweepRow>& rows) {
    io::write_sweep_rows(csv, rows);
    csv.flush();
  });
}

}  // namespace repsim::cli
