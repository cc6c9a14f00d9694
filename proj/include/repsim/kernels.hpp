#pragma once

// Per-iteration data-parallel kernels of the co-determination loop.
//
// `serial` is the reference implementation. `omp` distributes rows across
// OpenMP threads; each row's reduction still runs sequentially in ascending
// index order, so both produce bitwise-identical output.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>

#include "repsim/dataset.hpp"

namespace repsim::kernels {

/// Returned by kernels when no row hit a zero denominator.
inline constexpr std::int64_t kNone = -1;

struct MizzaroStepStatus {
  std::int64_t zero_steadiness_user = kNone;  // lowest user whose steadiness sum is 0
  double max_disagreement_ratio = 0.0;        // max |r - q| / width seen
};

/// 1 - sqrt(ratio), ratio = |r - q| / width. Capped at 1 to absorb round-off.
inline double disagreement_from_ratio(double ratio) {
  return 1.0 - std::sqrt(std::min(ratio, 1.0));
}

namespace serial {

/// q_alpha = sum w_i r / sum w_i over U_alpha. Objects whose weight sum is
/// zero receive the plain mean; the lowest such index is returned, else kNone.
std::int64_t quality_step(const RatingDataset& ds, std::span<const double> weights, std::span<double> quality);

/// d_i = mean over O_i of (r - q_alpha)^2.
void divergence(const RatingDataset& ds, std::span<const double> quality, std::span<double> out);

/// s_alpha = sum of w_j over U_alpha.
void steadiness(const RatingDataset& ds, std::span<const double> weights, std::span<double> out);

/// w_i = sum s_alpha g_ia / sum s_alpha over O_i.
MizzaroStepStatus mizzaro_weights(const RatingDataset& ds, std::span<const double> steadiness,
                                  std::span<const double> quality, std::span<double> out);

}  // namespace serial

namespace omp {

std::int64_t quality_step(const RatingDataset& ds, std::span<const double> weights, std::span<double> quality);
void divergence(const RatingDataset& ds, std::span<const double> quality, std::span<double> out);
void steadiness(const RatingDataset& ds, std::span<const double> weights, std::span<double> out);
MizzaroStepStatus mizzaro_weights(const RatingDataset& ds, std::span<const double> steadiness,
                                  std::span<const double> quality, std::span<double> out);

}  // namespace omp

}  // namespace repsim::kernels
