// repsim: generate synthetic rating data, run one reputation algorithm on a
// dataset, or run a parameter sweep.

#include <iostream>

#include "CLI11.hpp"
#include "repsim/commands.hpp"
#include "repsim/io.hpp"
#include "repsim/synthgen.hpp"

namespace {

void add_algorithm_flags(CLI::App* cmd, repsim::cli::CommandOptions& o) {
  cmd->add_option("--algorithm", o.algorithm, "aa|mizz|yzlm|dkvd")
      ->check(CLI::IsMember({"aa", "mizz", "yzlm", "dkvd"}, CLI::ignore_case));
  cmd->add_option("--beta", o.beta, "YZLM penalty exponent (default 1)");
  cmd->add_option("--epsilon", o.epsilon, "weight guard (default 1e-8)");
  cmd->add_option("--delta", o.delta, "convergence threshold on the quality vector (default 1e-4)");
  cmd->add_option("--max-iters", o.max_iters, "iteration cap (default 1000)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reputation algorithms on continuous and discrete rating scales"};
  app.require_subcommand(1);

  repsim::cli::CommandOptions o;
  std::string mode;
  auto mode_check = CLI::IsMember({"continuous", "discrete"});

  auto* gen = app.add_subcommand("generate", "write a synthetic dataset and its ground truth");
  gen->add_option("--config", o.config, "INI config or JSON manifest");
  gen->add_option("--out", o.out, "output directory")->required();
  gen->add_option("--seed", o.seed, "master seed");
  gen->add_option("--mode", mode, "continuous|discrete")->check(mode_check);
  gen->add_option("--r-max", o.r_max, "rating scale upper bound R");

  auto* run = app.add_subcommand("run", "run one algorithm on a dataset");
  run->add_option("--config", o.config, "INI config or JSON manifest");
  run->add_option("--data", o.data_dir, "directory with ratings.tsv and optional ground truth");
  run->add_option("--ratings", o.ratings, "ratings file (overrides <data>/ratings.tsv)");
  run->add_option("--out", o.out, "output directory")->required();
  run->add_option("--mode", mode, "continuous|discrete")->check(mode_check);
  run->add_option("--r-max", o.r_max, "rating scale upper bound R");
  add_algorithm_flags(run, o);

  auto* sweep = app.add_subcommand("sweep", "run a sigma_max or resolution sweep");
  sweep->add_option("--config", o.config, "INI config or JSON manifest")->required();
  sweep->add_option("--out", o.out, "output directory")->required();
  sweep->add_option("--seed", o.seed, "master seed");
  sweep->add_option("--realizations", o.realizations, "realizations per grid point");
  sweep->add_option("--workers", o.workers, "concurrent realizations");
  sweep->add_option("--mode", mode, "restrict a sigma_max sweep to one mode")->check(mode_check);
  add_algorithm_flags(sweep, o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!mode.empty()) o.mode = repsim::parse_scale_mode(mode);
    if (gen->parsed()) repsim::cli::cmd_generate(o);
    if (run->parsed()) {
      if (o.data_dir.empty() && o.ratings.empty()) throw repsim::ConfigError("data", "run needs --data or --ratings");
      repsim::cli::cmd_run(o);
    }
    if (sweep->parsed()) repsim::cli::cmd_sweep(o);
  } catch (const repsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
