#include "repsim/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace repsim {

const char* to_string(ScaleMode mode) {
  return mode == ScaleMode::Continuous ? "continuous" : "discrete";
}

ScaleMode parse_scale_mode(const std::string& text) {
  if (text == "continuous") return ScaleMode::Continuous;
  if (text == "discrete" || text == "integer") return ScaleMode::DiscreteInteger;
  throw std::invalid_argument("unknown rating mode '" + text + "' (expected continuous|discrete)");
}

void validate_scale(const RatingScale& scale) {
  if (scale.r_max < 2) {
    throw DatasetError(DatasetError::Kind::InvalidScale,
                       "rating scale upper bound must be >= 2, got " + std::to_string(scale.r_max));
  }
}

std::span<const Index> RatingDataset::objects_of(Index user) const {
  const auto begin = user_offsets_[user];
  return {user_objects_.data() + begin, user_offsets_[user + 1] - begin};
}

std::span<const double> RatingDataset::ratings_of_user(Index user) const {
  const auto begin = user_offsets_[user];
  return {user_values_.data() + begin, user_offsets_[user + 1] - begin};
}

std::span<const Index> RatingDataset::users_of(Index object) const {
  const auto begin = object_offsets_[object];
  return {object_users_.data() + begin, object_offsets_[object + 1] - begin};
}

std::span<const double> RatingDataset::ratings_of_object(Index object) const {
  const auto begin = object_offsets_[object];
  return {object_values_.data() + begin, object_offsets_[object + 1] - begin};
}

std::vector<Rating> RatingDataset::triples() const {
  std::vector<Rating> out;
  out.reserve(num_ratings());
  for (Index i = 0; i < num_users(); ++i) {
    const auto objs = objects_of(i);
    const auto vals = ratings_of_user(i);
    for (std::size_t k = 0; k < objs.size(); ++k) out.push_back({i, objs[k], vals[k]});
  }
  return out;
}

bool operator==(const RatingDataset& a, const RatingDataset& b) {
  return a.scale_.r_max == b.scale_.r_max && a.scale_.mode == b.scale_.mode &&
         a.user_offsets_ == b.user_offsets_ && a.user_objects_ == b.user_objects_ &&
         a.user_values_ == b.user_values_ && a.object_offsets_ == b.object_offsets_ &&
         a.object_users_ == b.object_users_ && a.object_values_ == b.object_values_;
}

namespace {

std::string describe(const Rating& r) {
  return "(" + std::to_string(r.user) + ", " + std::to_string(r.object) + ", " + std::to_string(r.value) + ")";
}

}  // namespace

RatingDataset build_dataset(std::span<const Rating> triples, std::size_t num_users,
                            std::size_t num_objects, RatingScale scale) {
  validate_scale(scale);
  using Kind = DatasetError::Kind;

  for (const auto& r : triples) {
    if (r.user >= num_users || r.object >= num_objects) {
      throw DatasetError(Kind::IndexOutOfRange, "rating " + describe(r) + " has an index out of range");
    }
    if (!std::isfinite(r.value) || !scale.contains(r.value)) {
      throw DatasetError(Kind::RatingOutOfBounds, "rating " + describe(r) + " outside [1, " +
                                                      std::to_string(scale.r_max) + "]");
    }
    if (scale.mode == ScaleMode::DiscreteInteger && std::trunc(r.value) != r.value) {
      throw DatasetError(Kind::NonIntegerRatingInDiscreteMode,
                         "rating " + describe(r) + " is not an integer in discrete mode");
    }
  }

  // Sort a permutation by (user, object) so both views come out ordered.
  std::vector<std::size_t> order(triples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = triples[a];
    const auto& y = triples[b];
    return x.user != y.user ? x.user < y.user : x.object < y.object;
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    const auto& prev = triples[order[k - 1]];
    const auto& cur = triples[order[k]];
    if (prev.user == cur.user && prev.object == cur.object) {
      throw DatasetError(Kind::DuplicatePair, "duplicate rating for user " + std::to_string(cur.user) +
                                                  ", object " + std::to_string(cur.object));
    }
  }

  RatingDataset ds;
  ds.scale_ = scale;
  ds.user_offsets_.assign(num_users + 1, 0);
  ds.object_offsets_.assign(num_objects + 1, 0);
  for (const auto& r : triples) {
    ++ds.user_offsets_[r.user + 1];
    ++ds.object_offsets_[r.object + 1];
  }
  std::partial_sum(ds.user_offsets_.begin(), ds.user_offsets_.end(), ds.user_offsets_.begin());
  std::partial_sum(ds.object_offsets_.begin(), ds.object_offsets_.end(), ds.object_offsets_.begin());

  ds.user_objects_.resize(triples.size());
  ds.user_values_.resize(triples.size());
  ds.object_users_.resize(triples.size());
  ds.object_values_.resize(triples.size());

  // Walking in (user, object) order fills user rows sorted by object and,
  // since users arrive ascending, object rows sorted by user.
  std::vector<std::size_t> object_cursor(ds.object_offsets_.begin(), ds.object_offsets_.end() - 1);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& r = triples[order[k]];
    ds.user_objects_[k] = r.object;
    ds.user_values_[k] = r.value;
    const auto slot = object_cursor[r.object]++;
    ds.object_users_[slot] = r.user;
    ds.object_values_[slot] = r.value;
  }
  return ds;
}

bool IndexMaps::is_identity() const {
  for (std::size_t i = 0; i < user_old_to_new.size(); ++i) {
    if (user_old_to_new[i] != static_cast<std::int64_t>(i)) return false;
  }
  for (std::size_t a = 0; a < object_old_to_new.size(); ++a) {
    if (object_old_to_new[a] != static_cast<std::int64_t>(a)) return false;
  }
  return true;
}

PrunedData prune_isolated(const RatingDataset& dataset, const GroundTruth& truth) {
  PrunedData out;
  auto& maps = out.maps;
  maps.user_old_to_new.assign(dataset.num_users(), kRemoved);
  maps.object_old_to_new.assign(dataset.num_objects(), kRemoved);

  for (Index i = 0; i < dataset.num_users(); ++i) {
    if (dataset.user_degree(i) > 0) {
      maps.user_old_to_new[i] = static_cast<std::int64_t>(maps.user_new_to_old.size());
      maps.user_new_to_old.push_back(i);
    }
  }
  for (Index a = 0; a < dataset.num_objects(); ++a) {
    if (dataset.object_degree(a) > 0) {
      maps.object_old_to_new[a] = static_cast<std::int64_t>(maps.object_new_to_old.size());
      maps.object_new_to_old.push_back(a);
    }
  }
  if (maps.user_new_to_old.empty() || maps.object_new_to_old.empty()) {
    throw DatasetError(DatasetError::Kind::EmptyDataset, "no rated users or objects remain after pruning");
  }

  std::vector<Rating> remapped = dataset.triples();
  for (auto& r : remapped) {
    r.user = static_cast<Index>(maps.user_old_to_new[r.user]);
    r.object = static_cast<Index>(maps.object_old_to_new[r.object]);
  }
  out.dataset = build_dataset(remapped, maps.user_new_to_old.size(), maps.object_new_to_old.size(),
                              dataset.scale());

  if (!truth.true_quality.empty()) {
    if (truth.true_quality.size() != dataset.num_objects()) {
      throw std::invalid_argument("ground truth quality vector does not match object count");
    }
    for (auto old : maps.object_new_to_old) out.truth.true_quality.push_back(truth.true_quality[old]);
  }
  if (!truth.user_error.empty()) {
    if (truth.user_error.size() != dataset.num_users()) {
      throw std::invalid_argument("ground truth error vector does not match user count");
    }
    for (auto old : maps.user_new_to_old) out.truth.user_error.push_back(truth.user_error[old]);
  }
  return out;
}

}  // namespace repsim
