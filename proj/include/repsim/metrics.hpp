#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "repsim/algorithms.hpp"
#include "repsim/dataset.hpp"

namespace repsim {

class MetricsError : public std::runtime_error {
 public:
  enum class Kind { NoRelevantItems, NoIrrelevantItems, LengthMismatch, TooFewItems };
  MetricsError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct QualityError {
  double delta_q = 0.0;             // RMS of Q - q
  double delta_q_normalized = 0.0;  // delta_q / (R - 1)
};

QualityError quality_rmse(std::span<const double> quality, std::span<const double> truth, int r_max);

struct KendallResult {
  double tau = 0.0;
  /// One of the rankings is fully tied, so tau_b is undefined; tau is 0.
  bool degenerate = false;
};

/// Tau-b between the ranking by `x` and the ranking by `y` (both descending),
/// in O(n log n).
KendallResult kendall_tau_b(std::span<const double> x, std::span<const double> y);

/// Tau-b between the weight ranking and the ability ranking, where ability
/// is ordered by -sigma_i.
KendallResult kendall_tau(std::span<const double> user_weights, std::span<const double> user_errors);

enum class Relevance { Highest, Lowest };

/// Flags exactly ceil(fraction * N) items with the highest (or lowest)
/// values; ties at the cut go to the lower index.
std::vector<bool> select_relevant(std::span<const double> values, double fraction, Relevance direction);

/// Probability that a random relevant item scores above a random irrelevant
/// one, ties counting one half. Computed from tie-averaged rank sums.
double auc(std::span<const double> scores, const std::vector<bool>& relevant);

struct MetricsReport {
  double delta_q = 0.0;
  double delta_q_normalized = 0.0;
  std::optional<double> kendall_tau_users;  // absent for AA
  double auc_objects = 0.0;
  std::optional<double> auc_users;          // absent for AA
  bool tau_degenerate = false;
  bool converged = true;
};

inline constexpr double kDefaultRelevantFraction = 0.05;

/// Scores a result against aligned ground truth. Object relevance is the top
/// fraction by Q, user relevance the fraction with lowest sigma.
MetricsReport evaluate(const ReputationResult& result, const GroundTruth& truth, const RatingScale& scale,
                       double relevant_fraction = kDefaultRelevantFraction);

}  // namespace repsim
