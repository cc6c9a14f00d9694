#include "repsim/algorithms.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "repsim/kernels.hpp"

namespace repsim {

namespace {

// Slack on the |r - q| <= width precondition for floating-point round-off.
constexpr double kRatioSlack = 1e-9;

std::int64_t quality_kernel(const RatingDataset& ds, std::span<const double> w, std::span<double> q, Execution ex) {
  return ex == Execution::Parallel ? kernels::omp::quality_step(ds, w, q) : kernels::serial::quality_step(ds, w, q);
}

void check_nonempty(const RatingDataset& dataset) {
  if (dataset.num_ratings() == 0 || dataset.num_users() == 0 || dataset.num_objects() == 0) {
    throw AlgorithmError(AlgorithmError::Kind::BadInput, -1, "dataset has no ratings");
  }
  for (Index a = 0; a < dataset.num_objects(); ++a) {
    if (dataset.object_degree(a) == 0) {
      throw AlgorithmError(AlgorithmError::Kind::BadInput, a,
                           "object " + std::to_string(a) + " has no ratings; prune the dataset first");
    }
  }
  for (Index i = 0; i < dataset.num_users(); ++i) {
    if (dataset.user_degree(i) == 0) {
      throw AlgorithmError(AlgorithmError::Kind::BadInput, i,
                           "user " + std::to_string(i) + " has no ratings; prune the dataset first");
    }
  }
}

}  // namespace

const char* to_string(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::AA: return "aa";
    case AlgorithmKind::Mizz: return "mizz";
    case AlgorithmKind::YZLM: return "yzlm";
    case AlgorithmKind::dKVD: return "dkvd";
  }
  return "?";
}

AlgorithmKind parse_algorithm_kind(const std::string& text) {
  std::string lower = text;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "aa") return AlgorithmKind::AA;
  if (lower == "mizz") return AlgorithmKind::Mizz;
  if (lower == "yzlm") return AlgorithmKind::YZLM;
  if (lower == "dkvd") return AlgorithmKind::dKVD;
  throw std::invalid_argument("unknown algorithm '" + text + "' (expected aa|mizz|yzlm|dkvd)");
}

void AlgorithmConfig::validate() const {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be finite and >= 0");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon must be finite and > 0");
  if (!(convergence_threshold > 0.0)) throw std::invalid_argument("convergence threshold must be > 0");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
}

std::string AlgorithmConfig::label() const {
  if (kind != AlgorithmKind::YZLM || beta == 1.0) return to_string(kind);
  std::ostringstream os;
  os << "yzlm(beta=" << beta << ")";
  return os.str();
}

std::vector<double> weighted_quality(const RatingDataset& dataset, std::span<const double> weights,
                                     Execution execution) {
  if (weights.size() != dataset.num_users()) {
    throw AlgorithmError(AlgorithmError::Kind::BadInput, -1, "weight vector length does not match user count");
  }
  std::vector<double> quality(dataset.num_objects());
  const auto zero = quality_kernel(dataset, weights, quality, execution);
  if (zero != kernels::kNone) {
    throw AlgorithmError(AlgorithmError::Kind::ZeroWeightDenominator, zero,
                         "all raters of object " + std::to_string(zero) + " have zero weight");
  }
  return quality;
}

ReputationResult run_aa(const RatingDataset& dataset) {
  check_nonempty(dataset);
  ReputationResult result;
  result.kind = AlgorithmKind::AA;
  result.weights.assign(dataset.num_users(), 1.0);
  result.quality = weighted_quality(dataset, result.weights);
  result.iterations_used = 1;
  result.final_delta = 0.0;
  result.converged = true;
  return result;
}

double mizzaro_disagreement(double rating, double quality, double width) {
  const double ratio = std::abs(rating - quality) / width;
  if (!(ratio <= 1.0 + kRatioSlack)) {
    throw AlgorithmError(AlgorithmError::Kind::DisagreementOutOfRange, -1,
                         "|r - q| exceeds the rating width");
  }
  return kernels::disagreement_from_ratio(ratio);
}

std::vector<double> mizzaro_weight_update(const RatingDataset& dataset, std::span<const double> weights,
                                          std::span<const double> quality, Execution execution) {
  std::vector<double> steadiness(dataset.num_objects());
  std::vector<double> next(dataset.num_users());
  kernels::MizzaroStepStatus status;
  if (execution == Execution::Parallel) {
    kernels::omp::steadiness(dataset, weights, steadiness);
    status = kernels::omp::mizzaro_weights(dataset, steadiness, quality, next);
  } else {
    kernels::serial::steadiness(dataset, weights, steadiness);
    status = kernels::serial::mizzaro_weights(dataset, steadiness, quality, next);
  }
  if (status.max_disagreement_ratio > 1.0 + kRatioSlack) {
    throw AlgorithmError(AlgorithmError::Kind::DisagreementOutOfRange, -1,
                         "a rating deviates from its quality estimate by more than the rating width");
  }
  if (status.zero_steadiness_user != kernels::kNone) {
    throw AlgorithmError(AlgorithmError::Kind::ZeroSteadinessDenominator, status.zero_steadiness_user,
                         "objects rated by user " + std::to_string(status.zero_steadiness_user) +
                             " all have zero steadiness");
  }
  return next;
}

std::vector<double> divergence(const RatingDataset& dataset, std::span<const double> quality, Execution execution) {
  std::vector<double> out(dataset.num_users());
  if (execution == Execution::Parallel) {
    kernels::omp::divergence(dataset, quality, out);
  } else {
    kernels::serial::divergence(dataset, quality, out);
  }
  return out;
}

std::vector<double> yzlm_weight_update(std::span<const double> divergences, double beta, double epsilon) {
  std::vector<double> out(divergences.size());
  for (std::size_t i = 0; i < divergences.size(); ++i) out[i] = std::pow(divergences[i] + epsilon, -beta);
  return out;
}

std::vector<double> dkvd_weight_update(std::span<const double> divergences, double epsilon) {
  double max_d = 0.0;
  for (double d : divergences) max_d = std::max(max_d, d);
  const double k = 1.0 / (epsilon + max_d);
  std::vector<double> out(divergences.size());
  for (std::size_t i = 0; i < divergences.size(); ++i) out[i] = 1.0 - k * divergences[i];
  return out;
}

double convergence_delta(std::span<const double> previous, std::span<const double> next) {
  if (previous.size() != next.size()) throw std::invalid_argument("quality vectors differ in length");
  if (previous.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t a = 0; a < previous.size(); ++a) {
    const double diff = previous[a] - next[a];
    sum += diff * diff;
  }
  return std::sqrt(sum / static_cast<double>(previous.size()));
}

ReputationResult run_algorithm(const RatingDataset& dataset, const AlgorithmConfig& config,
                               std::span<const double> initial_weights) {
  config.validate();
  if (config.kind == AlgorithmKind::AA) return run_aa(dataset);
  check_nonempty(dataset);

  const auto ex = config.execution;
  ReputationResult result;
  result.kind = config.kind;
  if (initial_weights.empty()) {
    result.weights.assign(dataset.num_users(), 1.0);
  } else {
    if (initial_weights.size() != dataset.num_users()) {
      throw AlgorithmError(AlgorithmError::Kind::BadInput, -1, "initial weight vector length does not match user count");
    }
    result.weights.assign(initial_weights.begin(), initial_weights.end());
  }

  result.quality.resize(dataset.num_objects());
  quality_kernel(dataset, result.weights, result.quality, ex);
  result.iterations_used = 1;
  result.final_delta = std::numeric_limits<double>::infinity();

  std::vector<double> next_quality(dataset.num_objects());
  while (result.iterations_used < config.max_iterations) {
    std::vector<double> next_weights;
    switch (config.kind) {
      case AlgorithmKind::Mizz:
        next_weights = mizzaro_weight_update(dataset, result.weights, result.quality, ex);
        break;
      case AlgorithmKind::YZLM:
        next_weights = yzlm_weight_update(divergence(dataset, result.quality, ex), config.beta, config.epsilon);
        break;
      case AlgorithmKind::dKVD:
        next_weights = dkvd_weight_update(divergence(dataset, result.quality, ex), config.epsilon);
        break;
      case AlgorithmKind::AA:
        break;
    }
    // An all-zero weight row falls back to the plain mean for that object.
    quality_kernel(dataset, next_weights, next_quality, ex);
    ++result.iterations_used;
    result.final_delta = convergence_delta(result.quality, next_quality);
    result.weights = std::move(next_weights);
    std::swap(result.quality, next_quality);
    if (result.final_delta < config.convergence_threshold) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace repsim
