#pragma once

// Sparse bipartite user-object rating store.
//
// Ratings are held twice in compressed-row form: once grouped by user and once
// grouped by object. Within each row entries are sorted by the partner index,
// which fixes the accumulation order of every sum the algorithms perform.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace repsim {

using Index = std::uint32_t;

enum class ScaleMode { Continuous, DiscreteInteger };

const char* to_string(ScaleMode mode);
ScaleMode parse_scale_mode(const std::string& text);

struct RatingScale {
  int r_max = 5;
  ScaleMode mode = ScaleMode::Continuous;

  /// Width of the rating range, R - 1.
  double width() const { return static_cast<double>(r_max - 1); }
  bool contains(double value) const { return value >= 1.0 && value <= static_cast<double>(r_max); }
};

struct Rating {
  Index user = 0;
  Index object = 0;
  double value = 0.0;

  friend bool operator==(const Rating&, const Rating&) = default;
};

class DatasetError : public std::runtime_error {
 public:
  enum class Kind {
    DuplicatePair,
    IndexOutOfRange,
    RatingOutOfBounds,
    NonIntegerRatingInDiscreteMode,
    InvalidScale,
    EmptyDataset,
  };

  DatasetError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class RatingDataset {
 public:
  RatingDataset() = default;

  std::size_t num_users() const { return user_offsets_.empty() ? 0 : user_offsets_.size() - 1; }
  std::size_t num_objects() const { return object_offsets_.empty() ? 0 : object_offsets_.size() - 1; }
  std::size_t num_ratings() const { return user_objects_.size(); }
  const RatingScale& scale() const { return scale_; }

  /// O_i: objects rated by `user`, ascending.
  std::span<const Index> objects_of(Index user) const;
  /// r_{i,alpha} for alpha in objects_of(user), same order.
  std::span<const double> ratings_of_user(Index user) const;
  /// U_alpha: users who rated `object`, ascending.
  std::span<const Index> users_of(Index object) const;
  /// r_{i,alpha} for i in users_of(object), same order.
  std::span<const double> ratings_of_object(Index object) const;

  std::size_t user_degree(Index user) const { return user_offsets_[user + 1] - user_offsets_[user]; }
  std::size_t object_degree(Index object) const { return object_offsets_[object + 1] - object_offsets_[object]; }

  // Raw compressed views for kernels.
  std::span<const std::size_t> user_offsets() const { return user_offsets_; }
  std::span<const Index> user_objects() const { return user_objects_; }
  std::span<const double> user_values() const { return user_values_; }
  std::span<const std::size_t> object_offsets() const { return object_offsets_; }
  std::span<const Index> object_users() const { return object_users_; }
  std::span<const double> object_values() const { return object_values_; }

  /// All triples ordered by (user, object).
  std::vector<Rating> triples() const;

  friend bool operator==(const RatingDataset& a, const RatingDataset& b);

 private:
  friend RatingDataset build_dataset(std::span<const Rating>, std::size_t, std::size_t, RatingScale);

  RatingScale scale_{};
  std::vector<std::size_t> user_offsets_;
  std::vector<Index> user_objects_;
  std::vector<double> user_values_;
  std::vector<std::size_t> object_offsets_;
  std::vector<Index> object_users_;
  std::vector<double> object_values_;
};

/// Validates the triples and materializes both adjacency views.
/// Throws DatasetError on duplicate pairs, out-of-range indices or ratings,
/// and non-integer ratings in discrete mode.
RatingDataset build_dataset(std::span<const Rating> triples, std::size_t num_users,
                            std::size_t num_objects, RatingScale scale);

void validate_scale(const RatingScale& scale);

struct GroundTruth {
  std::vector<double> true_quality;  // Q_alpha per object
  std::vector<double> user_error;    // sigma_i per user

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

inline constexpr std::int64_t kRemoved = -1;

struct IndexMaps {
  std::vector<std::int64_t> user_old_to_new;    // kRemoved for pruned users
  std::vector<std::int64_t> object_old_to_new;  // kRemoved for pruned objects
  std::vector<Index> user_new_to_old;
  std::vector<Index> object_new_to_old;

  bool is_identity() const;
};

struct PrunedData {
  RatingDataset dataset;
  GroundTruth truth;
  IndexMaps maps;
};

/// Drops users and objects without any rating and compacts the indices.
/// Ground truth vectors are filtered through the same maps; an empty truth
/// (no vectors) is passed through as empty.
PrunedData prune_isolated(const RatingDataset& dataset, const GroundTruth& truth);

}  // namespace repsim
