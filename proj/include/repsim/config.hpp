#pragma once

// Declarative experiment configuration.
//
// An INI document (or the equivalent JSON object written as a manifest) with
// three flat sections:
//
//   [generator]   users objects sparsity seed r_max sigma_min sigma_max mode
//   [algorithms]  list beta epsilon delta max_iterations
//   [sweep]       type sigma_max_grid modes r_grid sigma_min_rule
//                 realizations workers relevant_fraction
//
// Grids are comma lists ("0, 0.5, 1") or inclusive ranges "start:stop:step"
// ("0:4:0.25", "2:20"). Missing keys take their defaults; unknown keys are
// rejected so typos surface before anything runs.

#include <boost/property_tree/ptree.hpp>
#include <string>
#include <vector>

#include "repsim/algorithms.hpp"
#include "repsim/experiments.hpp"
#include "repsim/synthgen.hpp"

namespace repsim::config {

using Tree = boost::property_tree::ptree;

/// Reads a .json file as JSON and anything else as INI. Parse failures are
/// reported as ConfigError with the file and line.
Tree load(const std::string& path);
Tree parse_ini(const std::string& text);

GeneratorConfig generator_from(const Tree& tree);
/// Every algorithm in [algorithms].list sharing the section's constants.
std::vector<AlgorithmConfig> algorithms_from(const Tree& tree);
ExperimentSpec experiment_from(const Tree& tree);

Tree to_tree(const GeneratorConfig& config);
Tree to_tree(const ExperimentSpec& spec);

void write_json(const std::string& path, const Tree& tree);

std::vector<double> parse_real_grid(const std::string& text, const std::string& field);
std::vector<int> parse_int_grid(const std::string& text, const std::string& field);

}  // namespace repsim::config
