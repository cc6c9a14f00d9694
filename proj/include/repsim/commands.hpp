#pragma once

// Subcommands behind the `repsim` executable. Each one validates its whole
// configuration before doing any work, writes its outputs under `out`, and
// throws on error (ConfigError for bad settings, io::FormatError for bad
// input files).

#include <cstdint>
#include <optional>
#include <string>

#include "repsim/algorithms.hpp"
#include "repsim/dataset.hpp"

namespace repsim::cli {

struct CommandOptions {
  std::string config;  // INI or JSON manifest; optional for `run`
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> realizations;
  std::optional<int> workers;
  std::optional<std::string> algorithm;
  std::optional<double> beta;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<int> max_iters;
  std::optional<ScaleMode> mode;
  std::optional<int> r_max;
  // `run` inputs
  std::string data_dir;  // holds ratings.tsv and, optionally, the truth files
  std::string ratings;   // overrides data_dir/ratings.tsv
};

inline constexpr const char* kRatingsFile = "ratings.tsv";
inline constexpr const char* kObjectTruthFile = "object_quality.tsv";
inline constexpr const char* kUserTruthFile = "user_error.tsv";
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kQualityFile = "quality.tsv";
inline constexpr const char* kWeightsFile = "weights.tsv";
inline constexpr const char* kReportFile = "report.json";
inline constexpr const char* kSweepFile = "sweep.csv";

/// Writes ratings.tsv, object_quality.tsv, user_error.tsv and manifest.json.
void cmd_generate(const CommandOptions& options);

/// Runs one algorithm; writes quality.tsv, weights.tsv and report.json. The
/// report carries metrics only when both ground-truth files are present.
void cmd_run(const CommandOptions& options);

/// Writes manifest.json up front, then sweep.csv one grid point at a time.
void cmd_sweep(const CommandOptions& options);

}  // namespace repsim::cli
