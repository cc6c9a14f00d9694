#include "repsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace repsim {

namespace {

// Guards ceil() against products like 0.05 * 100 landing a hair above an integer.
constexpr double kCeilSlack = 1e-9;

std::int64_t tie_pairs(std::int64_t run) { return run * (run - 1) / 2; }

// Stable merge sort of `v` that returns the number of inversions.
std::int64_t count_inversions(std::vector<double>& v, std::vector<double>& scratch, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = count_inversions(v, scratch, lo, mid) + count_inversions(v, scratch, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      scratch[k++] = v[j++];
    } else {
      scratch[k++] = v[i++];
    }
  }
  while (i < mid) scratch[k++] = v[i++];
  while (j < hi) scratch[k++] = v[j++];
  std::copy(scratch.begin() + lo, scratch.begin() + hi, v.begin() + lo);
  return swaps;
}

}  // namespace

QualityError quality_rmse(std::span<const double> quality, std::span<const double> truth, int r_max) {
  if (quality.size() != truth.size()) {
    throw MetricsError(MetricsError::Kind::LengthMismatch, "quality and truth vectors differ in length");
  }
  if (quality.empty()) throw MetricsError(MetricsError::Kind::TooFewItems, "no objects to evaluate");
  double sum = 0.0;
  for (std::size_t a = 0; a < quality.size(); ++a) {
    const double diff = truth[a] - quality[a];
    sum += diff * diff;
  }
  QualityError out;
  out.delta_q = std::sqrt(sum / static_cast<double>(quality.size()));
  out.delta_q_normalized = out.delta_q / static_cast<double>(r_max - 1);
  return out;
}

KendallResult kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw MetricsError(MetricsError::Kind::LengthMismatch, "rankings differ in length");
  const std::size_t n = x.size();
  if (n < 2) throw MetricsError(MetricsError::Kind::TooFewItems, "Kendall tau needs at least two items");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] != x[b] ? x[a] < x[b] : y[a] < y[b];
  });

  // Ties in x, and joint ties in (x, y).
  std::int64_t x_ties = 0, joint_ties = 0;
  std::int64_t x_run = 1, joint_run = 1;
  for (std::size_t k = 1; k < n; ++k) {
    const auto p = order[k - 1], c = order[k];
    if (x[p] == x[c]) {
      ++x_run;
      if (y[p] == y[c]) {
        ++joint_run;
      } else {
        joint_ties += tie_pairs(joint_run);
        joint_run = 1;
      }
    } else {
      x_ties += tie_pairs(x_run);
      joint_ties += tie_pairs(joint_run);
      x_run = joint_run = 1;
    }
  }
  x_ties += tie_pairs(x_run);
  joint_ties += tie_pairs(joint_run);

  std::vector<double> ys(n), scratch(n);
  for (std::size_t k = 0; k < n; ++k) ys[k] = y[order[k]];
  const std::int64_t swaps = count_inversions(ys, scratch, 0, n);

  std::int64_t y_ties = 0, y_run = 1;
  for (std::size_t k = 1; k < n; ++k) {
    if (ys[k] == ys[k - 1]) {
      ++y_run;
    } else {
      y_ties += tie_pairs(y_run);
      y_run = 1;
    }
  }
  y_ties += tie_pairs(y_run);

  const std::int64_t total = tie_pairs(static_cast<std::int64_t>(n));
  const std::int64_t untied_x = total - x_ties;
  const std::int64_t untied_y = total - y_ties;
  if (untied_x == 0 || untied_y == 0) return {0.0, true};

  const std::int64_t concordant_minus_discordant = total - x_ties - y_ties + joint_ties - 2 * swaps;
  const double denom = std::sqrt(static_cast<double>(untied_x) * static_cast<double>(untied_y));
  return {static_cast<double>(concordant_minus_discordant) / denom, false};
}

KendallResult kendall_tau(std::span<const double> user_weights, std::span<const double> user_errors) {
  std::vector<double> ability(user_errors.size());
  std::transform(user_errors.begin(), user_errors.end(), ability.begin(), [](double s) { return -s; });
  return kendall_tau_b(user_weights, ability);
}

std::vector<bool> select_relevant(std::span<const double> values, double fraction, Relevance direction) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("relevance fraction must lie in (0, 1)");
  const std::size_t n = values.size();
  const auto wanted = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - kCeilSlack));
  const std::size_t k = std::min(wanted, n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return direction == Relevance::Highest ? values[a] > values[b] : values[a] < values[b];
  });
  std::vector<bool> flags(n, false);
  for (std::size_t r = 0; r < k; ++r) flags[order[r]] = true;
  return flags;
}

double auc(std::span<const double> scores, const std::vector<bool>& relevant) {
  if (scores.size() != relevant.size()) {
    throw MetricsError(MetricsError::Kind::LengthMismatch, "scores and relevance flags differ in length");
  }
  const auto n = static_cast<std::int64_t>(scores.size());
  const auto n_rel = static_cast<std::int64_t>(std::count(relevant.begin(), relevant.end(), true));
  const std::int64_t n_irr = n - n_rel;
  if (n_rel == 0) throw MetricsError(MetricsError::Kind::NoRelevantItems, "AUC needs at least one relevant item");
  if (n_irr == 0) throw MetricsError(MetricsError::Kind::NoIrrelevantItems, "AUC needs at least one irrelevant item");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Twice the rank sum of relevant items, with tied groups at their midrank.
  std::int64_t rank_sum2 = 0;
  std::int64_t start = 0;
  while (start < n) {
    std::int64_t end = start + 1;
    while (end < n && scores[order[end]] == scores[order[start]]) ++end;
    const std::int64_t doubled_midrank = (start + 1) + end;  // ranks start+1 .. end
    for (std::int64_t k = start; k < end; ++k) {
      if (relevant[order[k]]) rank_sum2 += doubled_midrank;
    }
    start = end;
  }
  const std::int64_t u2 = rank_sum2 - n_rel * (n_rel + 1);
  return static_cast<double>(u2) / static_cast<double>(2 * n_rel * n_irr);
}

MetricsReport evaluate(const ReputationResult& result, const GroundTruth& truth, const RatingScale& scale,
                       double relevant_fraction) {
  if (truth.true_quality.size() != result.quality.size() || truth.user_error.size() != result.weights.size()) {
    throw MetricsError(MetricsError::Kind::LengthMismatch, "result and ground truth are not aligned");
  }
  MetricsReport report;
  const auto err = quality_rmse(result.quality, truth.true_quality, scale.r_max);
  report.delta_q = err.delta_q;
  report.delta_q_normalized = err.delta_q_normalized;
  report.auc_objects =
      auc(result.quality, select_relevant(truth.true_quality, relevant_fraction, Relevance::Highest));
  report.converged = result.converged;

  if (result.kind != AlgorithmKind::AA) {
    const auto tau = kendall_tau(result.weights, truth.user_error);
    report.kendall_tau_users = tau.tau;
    report.tau_degenerate = tau.degenerate;
    report.auc_users = auc(result.weights, select_relevant(truth.user_error, relevant_fraction, Relevance::Lowest));
  }
  return report;
}

}  // namespace repsim
