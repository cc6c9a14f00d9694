#include "repsim/dataset.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "random_data.hpp"

namespace repsim {
namespace {

const RatingScale kFive{5, ScaleMode::Continuous};

DatasetError::Kind error_kind(const std::vector<Rating>& triples, std::size_t users, std::size_t objects,
                              RatingScale scale) {
  try {
    build_dataset(triples, users, objects, scale);
  } catch (const DatasetError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected DatasetError";
  return DatasetError::Kind::EmptyDataset;
}

TEST(BuildDataset, SingleTriple) {
  const std::vector<Rating> t{{0, 0, 3.0}};
  const auto ds = build_dataset(t, 1, 1, kFive);
  EXPECT_EQ(ds.users_of(0).size(), 1u);
  EXPECT_EQ(ds.objects_of(0).size(), 1u);
  EXPECT_EQ(ds.ratings_of_object(0)[0], 3.0);
}

TEST(BuildDataset, Errors) {
  using K = DatasetError::Kind;
  EXPECT_EQ(error_kind({{0, 0, 3.0}, {0, 0, 4.0}}, 1, 1, kFive), K::DuplicatePair);
  EXPECT_EQ(error_kind({{0, 0, 6.0}}, 1, 1, kFive), K::RatingOutOfBounds);
  EXPECT_EQ(error_kind({{0, 0, 0.5}}, 1, 1, kFive), K::RatingOutOfBounds);
  EXPECT_EQ(error_kind({{1, 0, 3.0}}, 1, 1, kFive), K::IndexOutOfRange);
  EXPECT_EQ(error_kind({{0, 2, 3.0}}, 1, 2, kFive), K::IndexOutOfRange);
  EXPECT_EQ(error_kind({{0, 0, 3.5}}, 1, 1, {5, ScaleMode::DiscreteInteger}), K::NonIntegerRatingInDiscreteMode);
  EXPECT_EQ(error_kind({{0, 0, 1.0}}, 1, 1, {1, ScaleMode::Continuous}), K::InvalidScale);
}

TEST(BuildDataset, BoundsAreInclusive) {
  const std::vector<Rating> t{{0, 0, 1.0}, {0, 1, 5.0}};
  EXPECT_NO_THROW(build_dataset(t, 1, 2, {5, ScaleMode::DiscreteInteger}));
}

TEST(BuildDataset, RowsAreSortedByPartnerIndex) {
  const std::vector<Rating> t{{2, 1, 1.0}, {0, 1, 2.0}, {1, 0, 3.0}, {0, 0, 4.0}, {1, 1, 5.0}};
  const auto ds = build_dataset(t, 3, 2, kFive);
  const auto users = ds.users_of(1);
  EXPECT_EQ(std::vector<Index>(users.begin(), users.end()), (std::vector<Index>{0, 1, 2}));
  const auto vals = ds.ratings_of_object(1);
  EXPECT_EQ(std::vector<double>(vals.begin(), vals.end()), (std::vector<double>{2.0, 5.0, 1.0}));
  const auto objs = ds.objects_of(0);
  EXPECT_EQ(std::vector<Index>(objs.begin(), objs.end()), (std::vector<Index>{0, 1}));
}

TEST(BuildDataset, AdjacencyPropertiesOnRandomData) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const auto ds = testing::random_dataset(rng, 1 + trial % 9, 1 + trial % 7, 0.3, kFive);
    std::size_t by_user = 0, by_object = 0;
    for (Index i = 0; i < ds.num_users(); ++i) by_user += ds.user_degree(i);
    for (Index a = 0; a < ds.num_objects(); ++a) by_object += ds.object_degree(a);
    EXPECT_EQ(by_user, ds.num_ratings());
    EXPECT_EQ(by_object, ds.num_ratings());

    // alpha in O_i iff i in U_alpha, with the same rating.
    for (Index i = 0; i < ds.num_users(); ++i) {
      const auto objs = ds.objects_of(i);
      const auto vals = ds.ratings_of_user(i);
      for (std::size_t k = 0; k < objs.size(); ++k) {
        const auto users = ds.users_of(objs[k]);
        const auto it = std::find(users.begin(), users.end(), i);
        ASSERT_NE(it, users.end());
        EXPECT_EQ(ds.ratings_of_object(objs[k])[it - users.begin()], vals[k]);
      }
    }

    // Export then rebuild reproduces the dataset exactly.
    const auto again = build_dataset(ds.triples(), ds.num_users(), ds.num_objects(), ds.scale());
    EXPECT_EQ(again, ds);
  }
}

TEST(PruneIsolated, RemovesUserWithoutRatings) {
  const std::vector<Rating> t{{0, 0, 2.0}, {2, 1, 3.0}};
  const auto ds = build_dataset(t, 3, 2, kFive);
  const GroundTruth truth{{1.5, 2.5}, {0.1, 0.2, 0.3}};
  const auto p = prune_isolated(ds, truth);
  EXPECT_EQ(p.dataset.num_users(), 2u);
  EXPECT_EQ(p.maps.user_old_to_new, (std::vector<std::int64_t>{0, kRemoved, 1}));
  EXPECT_EQ(p.maps.user_new_to_old, (std::vector<Index>{0, 2}));
  EXPECT_EQ(p.truth.user_error, (std::vector<double>{0.1, 0.3}));
  EXPECT_EQ(p.truth.true_quality, truth.true_quality);
  EXPECT_EQ(p.dataset.objects_of(1)[0], 1u);
}

TEST(PruneIsolated, NoOpWhenEverythingRated) {
  const std::vector<Rating> t{{0, 1, 2.0}, {1, 0, 3.0}};
  const auto ds = build_dataset(t, 2, 2, kFive);
  const auto p = prune_isolated(ds, {});
  EXPECT_TRUE(p.maps.is_identity());
  EXPECT_EQ(p.dataset, ds);
  EXPECT_TRUE(p.truth.true_quality.empty());
}

TEST(PruneIsolated, SingleTripleLeavesOneByOne) {
  const std::vector<Rating> t{{0, 0, 4.0}};
  const auto p = prune_isolated(build_dataset(t, 2, 2, kFive), {{3.0, 4.0}, {0.0, 1.0}});
  EXPECT_EQ(p.dataset.num_users(), 1u);
  EXPECT_EQ(p.dataset.num_objects(), 1u);
  EXPECT_EQ(p.truth.true_quality, (std::vector<double>{3.0}));
}

TEST(PruneIsolated, EmptyDatasetThrows) {
  const auto ds = build_dataset(std::vector<Rating>{}, 2, 2, kFive);
  try {
    prune_isolated(ds, {});
    FAIL();
  } catch (const DatasetError& e) {
    EXPECT_EQ(e.kind(), DatasetError::Kind::EmptyDataset);
  }
}

TEST(PruneIsolated, Idempotent) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> coin(0, 3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Rating> t;
    for (Index i = 0; i < 8; ++i) {
      for (Index a = 0; a < 6; ++a) {
        if (coin(rng) == 0) t.push_back({i, a, 2.0});
      }
    }
    if (t.empty()) continue;
    const auto once = prune_isolated(build_dataset(t, 8, 6, kFive), {});
    const auto twice = prune_isolated(once.dataset, {});
    EXPECT_EQ(twice.dataset, once.dataset);
    EXPECT_TRUE(twice.maps.is_identity());
  }
}

}  // namespace
}  // namespace repsim
