#pragma once

// Synthetic rating data: uniform true qualities on [1, R], per-user uniform
// error levels, a uniformly sampled set of user-object pairs, and uniform
// per-rating noise, optionally rounded to integers and truncated to [1, R].
//
// Every random quantity comes from its own sub-stream of the master seed, and
// noise is drawn as a unit fraction scaled by the user's error level. Changing
// sigma_min/sigma_max or the mode with a fixed seed therefore reuses the same
// qualities, user-ability ordering, pairs and noise draws.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "repsim/dataset.hpp"

namespace repsim {

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct GeneratorConfig {
  std::size_t num_users = 1000;
  std::size_t num_objects = 1000;
  int r_max = 5;
  double sigma_min = 0.0;
  double sigma_max = 1.0;
  double sparsity = 0.1;  // eta
  ScaleMode mode = ScaleMode::Continuous;
  std::uint64_t seed = 1;

  void validate() const;
  RatingScale scale() const { return {r_max, mode}; }
};

using UserObjectPair = std::pair<Index, Index>;

/// round(eta * |U| * |O|), half rounded up.
std::size_t pair_count(const GeneratorConfig& config);

/// Q_alpha ~ U[1, R] per object, sigma_i ~ U[sigma_min, sigma_max] per user.
GroundTruth generate_ground_truth(const GeneratorConfig& config);

/// Distinct (user, object) pairs drawn uniformly without replacement,
/// returned sorted by (user, object).
std::vector<UserObjectPair> sample_pairs(const GeneratorConfig& config);

/// Round-half-away-from-zero (discrete mode only) then truncate to [1, R].
double quantize_rating(double estimate, const RatingScale& scale);

/// r = quantize(Q_alpha + E), E ~ U[-sigma_i, sigma_i], one draw per pair in
/// the order given.
RatingDataset generate_ratings(const GeneratorConfig& config, const GroundTruth& truth,
                               const std::vector<UserObjectPair>& pairs);

struct SyntheticData {
  GroundTruth truth;
  RatingDataset dataset;
};

SyntheticData generate(const GeneratorConfig& config);

}  // namespace repsim
