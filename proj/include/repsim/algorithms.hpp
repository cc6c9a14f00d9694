#pragma once

// Co-determination reputation algorithms.
//
// All four share one fixed-point loop: estimate object quality as a weighted
// mean of ratings, recompute user weights from how far each user's ratings
// sit from those estimates, and stop once the RMS change of the quality
// vector between successive iterations drops below the threshold.
//
//   aa    every user weighs 1; a single plain-mean pass
//   mizz  w_i = sum s_a g_ia / sum s_a, s_a = total rater weight on a,
//         g_ia = 1 - sqrt(|r_ia - q_a| / (R - 1))
//   yzlm  w_i = (d_i + eps)^-beta, d_i = mean squared deviation of user i
//   dkvd  w_i = 1 - d_i / (eps + max_j d_j)

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "repsim/dataset.hpp"

namespace repsim {

enum class AlgorithmKind { AA, Mizz, YZLM, dKVD };

const char* to_string(AlgorithmKind kind);
AlgorithmKind parse_algorithm_kind(const std::string& text);

enum class Execution { Serial, Parallel };

struct AlgorithmConfig {
  AlgorithmKind kind = AlgorithmKind::YZLM;
  double beta = 1.0;
  double epsilon = 1e-8;
  double convergence_threshold = 1e-4;
  int max_iterations = 1000;
  // Parallel kernels produce the same bits as the serial reference.
  Execution execution = Execution::Parallel;

  void validate() const;
  /// "yzlm", or "yzlm(beta=0.5)" when beta differs from the default.
  std::string label() const;
};

struct ReputationResult {
  AlgorithmKind kind = AlgorithmKind::AA;
  std::vector<double> weights;  // weights that produced `quality`
  std::vector<double> quality;
  int iterations_used = 0;      // number of quality evaluations
  double final_delta = 0.0;
  bool converged = false;
};

class AlgorithmError : public std::runtime_error {
 public:
  enum class Kind { ZeroWeightDenominator, ZeroSteadinessDenominator, DisagreementOutOfRange, BadInput };

  AlgorithmError(Kind kind, std::int64_t index, const std::string& what)
      : std::runtime_error(what), kind_(kind), index_(index) {}
  Kind kind() const { return kind_; }
  /// Offending object or user index, or -1.
  std::int64_t index() const { return index_; }

 private:
  Kind kind_;
  std::int64_t index_;
};

/// Weighted mean of each object's ratings. Throws ZeroWeightDenominator if
/// all raters of some object carry zero weight.
std::vector<double> weighted_quality(const RatingDataset& dataset, std::span<const double> weights,
                                     Execution execution = Execution::Serial);

ReputationResult run_aa(const RatingDataset& dataset);

/// g = 1 - sqrt(|r - q| / width). Requires |r - q| <= width.
double mizzaro_disagreement(double rating, double quality, double width);

std::vector<double> mizzaro_weight_update(const RatingDataset& dataset, std::span<const double> weights,
                                          std::span<const double> quality,
                                          Execution execution = Execution::Serial);

std::vector<double> divergence(const RatingDataset& dataset, std::span<const double> quality,
                               Execution execution = Execution::Serial);

std::vector<double> yzlm_weight_update(std::span<const double> divergences, double beta, double epsilon);

/// k = 1 / (epsilon + max d) is recomputed from the divergences passed in.
std::vector<double> dkvd_weight_update(std::span<const double> divergences, double epsilon);

/// RMS difference of two quality vectors.
double convergence_delta(std::span<const double> previous, std::span<const double> next);

/// Runs the configured algorithm from w_i = 1, or from `initial_weights` when
/// given (ignored by AA). Hitting max_iterations is not an error: the result
/// comes back with converged = false.
ReputationResult run_algorithm(const RatingDataset& dataset, const AlgorithmConfig& config,
                               std::span<const double> initial_weights = {});

}  // namespace repsim
