#include <cmath>
#include <cstdint>
#include <limits>

#include "repsim/kernels.hpp"

namespace repsim::kernels::omp {

namespace {

constexpr std::int64_t kNoRow = std::numeric_limits<std::int64_t>::max();

std::int64_t to_status(std::int64_t row) { return row == kNoRow ? kNone : row; }

}  // namespace

std::int64_t quality_step(const RatingDataset& ds, std::span<const double> weights, std::span<double> quality) {
  const auto offsets = ds.object_offsets();
  const auto users = ds.object_users();
  const auto values = ds.object_values();
  const auto n = static_cast<std::int64_t>(ds.num_objects());
  std::int64_t first_zero = kNoRow;

#pragma omp parallel for schedule(static) reduction(min : first_zero)
  for (std::int64_t a = 0; a < n; ++a) {
    double num = 0.0;
    double den = 0.0;
    for (auto k = offsets[a]; k < offsets[a + 1]; ++k) {
      num += weights[users[k]] * values[k];
      den += weights[users[k]];
    }
    if (den > 0.0) {
      quality[a] = num / den;
    } else {
      double sum = 0.0;
      for (auto k = offsets[a]; k < offsets[a + 1]; ++k) sum += values[k];
      quality[a] = sum / static_cast<double>(offsets[a + 1] - offsets[a]);
      first_zero = std::min(first_zero, a);
    }
  }
  return to_status(first_zero);
}

void divergence(const RatingDataset& ds, std::span<const double> quality, std::span<double> out) {
  const auto offsets = ds.user_offsets();
  const auto objects = ds.user_objects();
  const auto values = ds.user_values();
  const auto n = static_cast<std::int64_t>(ds.num_users());

#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
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
  const auto n = static_cast<std::int64_t>(ds.num_objects());

#pragma omp parallel for schedule(static)
  for (std::int64_t a = 0; a < n; ++a) {
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
  const auto n = static_cast<std::int64_t>(ds.num_users());
  std::int64_t zero_user = kNoRow;
  double max_ratio = 0.0;

#pragma omp parallel for schedule(static) reduction(min : zero_user) reduction(max : max_ratio)
  for (std::int64_t i = 0; i < n; ++i) {
    double num = 0.0;
    double den = 0.0;
    for (auto k = offsets[i]; k < offsets[i + 1]; ++k) {
      const auto a = objects[k];
      const double ratio = std::abs(values[k] - quality[a]) / width;
      max_ratio = std::max(max_ratio, ratio);
      num += steadiness[a] * disagreement_from_ratio(ratio);
      den += steadiness[a];
    }
    if (den > 0.0) {
      out[i] = num / den;
    } else {
      out[i] = 0.0;
      zero_user = std::min(zero_user, i);
    }
  }
  return {to_status(zero_user), max_ratio};
}

}  // namespace repsim::kernels::omp
