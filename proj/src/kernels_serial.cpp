#include <cmath>

#include "repsim/kernels.hpp"

namespace repsim::kernels::serial {

std::int64_t quality_step(const RatingDataset& ds, std::span<const double> weights, std::span<double> quality) {
  const auto offsets = ds.object_offsets();
  const auto users = ds.object_users();
  const auto values = ds.object_values();
  std::int64_t first_zero = kNone;

  for (std::size_t a = 0; a < ds.num_objects(); ++a) {
    double num = 0.0;
    double den = 0.0;
    for (auto k = offsets[a]; k < offsets[a + 1]; ++k) {
      num += weights[users[k]] * values[k];
      den += weights[users[k]];
    }
    if (den > 0.0) {
      quality[a] = num / den;
      continue;
    }
    double sum = 0.0;
    for (auto k = offsets[a]; k < offsets[a + 1]; ++k) sum += values[k];
    quality[a] = sum / static_cast<double>(offsets[a + 1] - offsets[a]);
    if (first_zero == kNone) first_zero = static_cast<std::int64_t>(a);
  }
  return first_zero;
}

void divergence(const RatingDataset& ds, std::span<const double> quality, std::span<double> out) {
  const auto offsets = ds.user_offsets();
  const auto objects = ds.user_objects();
  const auto values = ds.user_values();
  for (std::size_t i = 0; i < ds.num_users(); ++i) {
    double sum = 0.0;
    for (auto k = offsets[i]; k < offsets[i + 1]; ++k) {
      const double diff = values[k] - quality[objects[k]];
      sum += diff * diff;
    }
    out[i] = sum / static_cast<double>(offsets[i + 1] - offsets[i]);
  }
}

void steadiness(const RatingDataset& ds, std::span<const double> weights, std::span<double> out) {
  const auto offsets = ds.object_offsets();
  const auto users = ds.object_users();
  for (std::size_t a = 0; a < ds.num_objects(); ++a) {
    double sum = 0.0;
    for (auto k = offsets[a]; k < offsets[a + 1]; ++k) sum += weights[users[k]];
    out[a] = sum;
  }
}

MizzaroStepStatus mizzaro_weights(const RatingDataset& ds, std::span<const double> steadiness,
                                  std::span<const double> quality, std::span<double> out) {
  const auto offsets = ds.user_offsets();
  const auto objects = ds.user_objects();
  const auto values = ds.user_values();
  const double width = ds.scale().width();
  MizzaroStepStatus status;

  for (std::size_t i = 0; i < ds.num_users(); ++i) {
    double num = 0.0;
    double den = 0.0;
    for (auto k = offsets[i]; k < offsets[i + 1]; ++k) {
      const auto a = objects[k];
      const double ratio = std::abs(values[k] - quality[a]) / width;
      status.max_disagreement_ratio = std::max(status.max_disagreement_ratio, ratio);
      num += steadiness[a] * disagreement_from_ratio(ratio);
      den += steadiness[a];
    }
    if (den > 0.0) {
      out[i] = num / den;
    } else {
      out[i] = 0.0;
      if (status.zero_steadiness_user == kNone) status.zero_steadiness_user = static_cast<std::int64_t>(i);
    }
  }
  return status;
}

}  // namespace repsim::kernels::serial
