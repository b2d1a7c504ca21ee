#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "ficp/correspondence.hpp"
#include "oracles.hpp"

using namespace ficp;

namespace {

Matching from_residuals(const std::vector<double>& r) {
  Matching m;
  m.residual = r;
  m.model_index.assign(r.size(), 0);
  sort_by_residual(m);
  return m;
}

double sum_sq(const Matching& m, const std::vector<std::size_t>& idx) {
  double s = 0.0;
  for (std::size_t i : idx) s += m.residual[i] * m.residual[i];
  return s;
}

}  // namespace

TEST(MatchAll, IdenticalSetsMatchThemselves) {
  std::mt19937_64 gen(1);
  const PointSet m = oracle::random_points(gen, 200, 2);
  const Matching mt = match_all(m, NearestIndex(m));
  for (std::size_t i = 0; i < m.size(); ++i) {
    EXPECT_EQ(mt.model_index[i], i);
    EXPECT_EQ(mt.residual[i], 0.0);
  }
}

TEST(MatchAll, ObviousNearest) {
  const Matching mt = match_all(PointSet(2, {{1, 0}}), NearestIndex(PointSet(2, {{0, 0}, {10, 0}})));
  EXPECT_EQ(mt.model_index[0], 0u);
  EXPECT_DOUBLE_EQ(mt.residual[0], 1.0);
}

TEST(MatchAll, EqualsBruteForceMatching) {
  std::mt19937_64 gen(8);
  for (int d : {2, 3}) {
    const PointSet m = oracle::random_points(gen, 400, d);
    const PointSet data = oracle::random_points(gen, 300, d);
    const Matching mt = match_all(data, NearestIndex(m));
    for (std::size_t i = 0; i < data.size(); ++i) {
      const oracle::Nearest want = oracle::brute_nearest(m, data[i]);
      EXPECT_EQ(mt.model_index[i], want.index);
      EXPECT_EQ(mt.residual[i], want.distance);
    }
  }
}

TEST(MatchAll, SortedOrderIsAPermutationSortedByResidualThenIndex) {
  const Matching m = from_residuals({3.0, 1.0, 3.0, 0.5, 1.0});
  EXPECT_EQ(m.sorted_order, (std::vector<std::size_t>{3, 1, 4, 0, 2}));
}

TEST(SelectSubset, FullFractionTakesEverything) {
  const Matching m = from_residuals({4, 2, 9, 1});
  auto s = select_subset(m, 1.0);
  std::sort(s.begin(), s.end());
  EXPECT_EQ(s, (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(SelectSubset, HandSortTwoOfThree) {
  const Matching m = from_residuals({5, 1, 3});
  auto s = select_subset(m, 2.0 / 3.0);
  std::sort(s.begin(), s.end());
  EXPECT_EQ(s, (std::vector<std::size_t>{1, 2}));
}

TEST(SelectSubset, SizeIsFloorOfFractionTimesCount) {
  const Matching m = from_residuals(std::vector<double>(10, 1.0));
  EXPECT_EQ(select_subset(m, 0.25).size(), 2u);
  EXPECT_EQ(select_subset(m, 0.3).size(), 3u);
  EXPECT_EQ(select_subset(m, 0.99).size(), 9u);
}

TEST(SelectSubset, RejectsOutOfRangeFractions) {
  const Matching m = from_residuals({1, 2, 3});
  EXPECT_THROW(select_subset(m, 0.0), std::invalid_argument);
  EXPECT_THROW(select_subset(m, 1.5), std::invalid_argument);
  EXPECT_THROW(select_subset(m, 0.2), std::invalid_argument);  // floor(0.6) = 0
}

TEST(SelectSubset, BeatsEverySameSizeSubsetExhaustively) {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 8;
    std::vector<double> r(n);
    for (double& x : r) x = trial % 3 == 0 ? std::round(u(gen)) : u(gen);  // some ties
    const Matching m = from_residuals(r);
    for (std::size_t k = 1; k <= n; ++k) {
      const double f = static_cast<double>(k) / static_cast<double>(n);
      const auto s = select_subset(m, f);
      ASSERT_EQ(s.size(), k);
      const double best = oracle::best_subset_sum(r, k);
      EXPECT_LE(sum_sq(m, s), best * (1.0 + 1e-12));
    }
  }
}

TEST(FractionCount, ExactMultiplesAreNotRoundedDown) {
  for (std::size_t n = 1; n <= 2000; n += 7)
    for (std::size_t i = 1; i <= n; i += std::max<std::size_t>(1, n / 13))
      EXPECT_EQ(fraction_count(static_cast<double>(i) / static_cast<double>(n), n), i) << i << "/" << n;
}
