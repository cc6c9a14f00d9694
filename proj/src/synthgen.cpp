#include "repsim/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "repsim/random.hpp"

namespace repsim {

namespace {

enum Stream : std::uint64_t { kQuality = 1, kUserError = 2, kPairs = 3, kNoise = 4 };

// Above this many candidate pairs the membership set switches from a bitmap
// to a hash set.
constexpr std::uint64_t kBitmapLimit = std::uint64_t{1} << 28;

}  // namespace

void GeneratorConfig::validate() const {
  if (num_users == 0) throw ConfigError("num_users", "must be positive");
  if (num_objects == 0) throw ConfigError("num_objects", "must be positive");
  if (r_max < 2) throw ConfigError("r_max", "must be an integer >= 2");
  if (!(sigma_min >= 0.0) || !std::isfinite(sigma_min)) throw ConfigError("sigma_min", "must be finite and >= 0");
  if (!(sigma_max >= sigma_min) || !std::isfinite(sigma_max)) {
    throw ConfigError("sigma_max", "must be finite and >= sigma_min");
  }
  if (!(sparsity > 0.0 && sparsity <= 1.0)) throw ConfigError("sparsity", "must lie in (0, 1]");
  if (num_users > std::numeric_limits<Index>::max() || num_objects > std::numeric_limits<Index>::max()) {
    throw ConfigError("num_users", "index space exceeds 32 bits");
  }
}

std::size_t pair_count(const GeneratorConfig& config) {
  const double total = static_cast<double>(config.num_users) * static_cast<double>(config.num_objects);
  const auto count = static_cast<std::size_t>(std::floor(config.sparsity * total + 0.5));
  return std::min(count, config.num_users * config.num_objects);
}

GroundTruth generate_ground_truth(const GeneratorConfig& config) {
  config.validate();
  GroundTruth truth;
  const double width = static_cast<double>(config.r_max - 1);

  Engine quality_rng(derive_seed(config.seed, kQuality));
  truth.true_quality.resize(config.num_objects);
  for (auto& q : truth.true_quality) q = 1.0 + width * uniform01(quality_rng);

  // Fractions are drawn independently of the bounds so every (sigma_min,
  // sigma_max) setting sees the same user ordering.
  Engine error_rng(derive_seed(config.seed, kUserError));
  truth.user_error.resize(config.num_users);
  const double span = config.sigma_max - config.sigma_min;
  for (auto& s : truth.user_error) s = config.sigma_min + span * uniform01(error_rng);
  return truth;
}

std::vector<UserObjectPair> sample_pairs(const GeneratorConfig& config) {
  config.validate();
  const std::uint64_t total = static_cast<std::uint64_t>(config.num_users) * config.num_objects;
  const std::uint64_t k = pair_count(config);

  std::vector<std::uint64_t> chosen;
  chosen.reserve(k);
  if (k == total) {
    for (std::uint64_t t = 0; t < total; ++t) chosen.push_back(t);
  } else {
    // Floyd's sampling: exactly k distinct values from [0, total).
    Engine rng(derive_seed(config.seed, kPairs));
    auto pick = [&](std::uint64_t upper) {
      return std::uniform_int_distribution<std::uint64_t>(0, upper)(rng);
    };
    if (total <= kBitmapLimit) {
      std::vector<bool> taken(total, false);
      for (std::uint64_t j = total - k; j < total; ++j) {
        const auto t = pick(j);
        const auto v = taken[t] ? j : t;
        taken[v] = true;
        chosen.push_back(v);
      }
    } else {
      std::unordered_set<std::uint64_t> taken;
      taken.reserve(k * 2);
      for (std::uint64_t j = total - k; j < total; ++j) {
        const auto t = pick(j);
        const auto v = taken.contains(t) ? j : t;
        taken.insert(v);
        chosen.push_back(v);
      }
    }
    std::sort(chosen.begin(), chosen.end());
  }

  std::vector<UserObjectPair> pairs;
  pairs.reserve(chosen.size());
  for (auto flat : chosen) {
    pairs.emplace_back(static_cast<Index>(flat / config.num_objects), static_cast<Index>(flat % config.num_objects));
  }
  return pairs;
}

double quantize_rating(double estimate, const RatingScale& scale) {
  double r = scale.mode == ScaleMode::DiscreteInteger ? std::round(estimate) : estimate;
  return std::clamp(r, 1.0, static_cast<double>(scale.r_max));
}

RatingDataset generate_ratings(const GeneratorConfig& config, const GroundTruth& truth,
                               const std::vector<UserObjectPair>& pairs) {
  config.validate();
  if (truth.true_quality.size() != config.num_objects || truth.user_error.size() != config.num_users) {
    throw std::invalid_argument("ground truth dimensions do not match generator config");
  }
  const RatingScale scale = config.scale();
  Engine noise_rng(derive_seed(config.seed, kNoise));

  std::vector<Rating> triples;
  triples.reserve(pairs.size());
  for (const auto& [user, object] : pairs) {
    const double unit = 2.0 * uniform01(noise_rng) - 1.0;  // U[-1, 1)
    const double estimate = truth.true_quality[object] + truth.user_error[user] * unit;
    triples.push_back({user, object, quantize_rating(estimate, scale)});
  }
  return build_dataset(triples, config.num_users, config.num_objects, scale);
}

SyntheticData generate(const GeneratorConfig& config) {
  auto truth = generate_ground_truth(config);
  auto pairs = sample_pairs(config);
  auto dataset = generate_ratings(config, truth, pairs);
  return {std::move(truth), std::move(dataset)};
}

}  // namespace repsim
