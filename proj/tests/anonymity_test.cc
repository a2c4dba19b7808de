// Copyright 2026 The linkrisk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "linkrisk/anonymity.h"

#include <random>
#include <sstream>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "linkrisk/metric.h"
#include "test_util.h"

namespace linkrisk {
namespace {

using ::linkrisk::testing::RandomDistribution;
using ::testing::ElementsAre;
using ::testing::HasSubstr;

DistanceMatrix Line() {
  // Subject "s" at distances 0, .2, .6 from s, a, b.
  return *DistanceMatrix::FromDense({"s", "a", "b"}, {{0.0, 0.2, 0.6},
                                                      {0.2, 0.0, 0.5},
                                                      {0.6, 0.5, 0.0}});
}

std::vector<Distribution> RandomDists(std::mt19937_64& rng, int n) {
  std::vector<Distribution> out;
  for (int i = 0; i < n; ++i) out.push_back(RandomDistribution(rng, 15, 6));
  return out;
}

std::vector<std::string> Keys(int n, const std::string& prefix = "p") {
  std::vector<std::string> keys;
  for (int i = 0; i < n; ++i) keys.push_back(prefix + std::to_string(i));
  return keys;
}

TEST(DistanceMatrixTest, ValidatesInput) {
  EXPECT_FALSE(DistanceMatrix::FromDense({"a", "b"}, {{0, 0.1}, {0.2, 0}}).ok());
  EXPECT_FALSE(DistanceMatrix::FromDense({"a", "b"}, {{0.1, 0.1}, {0.1, 0}}).ok());
  EXPECT_FALSE(DistanceMatrix::FromDense({"a", "b"}, {{0, 1.5}, {1.5, 0}}).ok());
  EXPECT_FALSE(DistanceMatrix::FromPacked({"a", "a"}, {0.1}).ok());
  EXPECT_FALSE(DistanceMatrix::FromPacked({"a", "b", "c"}, {0.1}).ok());
  EXPECT_TRUE(DistanceMatrix::FromPacked({"a", "b", "c"}, {0.1, 0.2, 0.3}).ok());
}

TEST(DistanceMatrixTest, PackedLayoutIsRowMajorUpperTriangle) {
  const DistanceMatrix m = *DistanceMatrix::FromPacked({"a", "b", "c"}, {0.1, 0.2, 0.3});
  EXPECT_EQ(m(0, 1), 0.1);
  EXPECT_EQ(m(0, 2), 0.2);
  EXPECT_EQ(m(1, 2), 0.3);
  EXPECT_EQ(m(2, 1), 0.3);
  EXPECT_EQ(m(1, 1), 0.0);
  EXPECT_EQ(*m.Index("c"), 2u);
  EXPECT_FALSE(m.Index("z").ok());
  const std::vector<std::size_t> pick = {2, 0};
  const DistanceMatrix sub = m.Subset(pick);
  EXPECT_THAT(sub.keys(), ElementsAre("c", "a"));
  EXPECT_EQ(sub(0, 1), 0.2);
}

TEST(DistanceMatrixTest, ComputeMatchesPairwiseDistances) {
  std::mt19937_64 rng(1);
  const std::vector<Distribution> dists = RandomDists(rng, 40);
  const std::vector<IndexedDistribution> indexed = IndexDistributions(dists);
  const DistanceMatrix one = *DistanceMatrix::Compute(Keys(40), indexed, 1);
  const DistanceMatrix four = *DistanceMatrix::Compute(Keys(40), indexed, 4);
  EXPECT_EQ(one.packed(), four.packed());
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 40; ++j) {
      ASSERT_EQ(one(i, j), i == j ? 0.0 : JsDistance(dists[i], dists[j]));
    }
  }
  const CrossDistanceMatrix cross = CrossDistanceMatrix::Compute(
      Keys(20, "a"), std::span(indexed).subspan(0, 20), Keys(20, "b"),
      std::span(indexed).subspan(20), 3);
  EXPECT_EQ(cross(3, 7), JsDistance(dists[3], dists[27]));
  EXPECT_EQ(cross.column(7)[3], cross(3, 7));
  EXPECT_EQ(cross.row(3)[7], cross(3, 7));
}

TEST(ConvergentSubsetTest, Examples) {
  const DistanceMatrix m = Line();
  EXPECT_THAT(ConvergentSubset(m, "s", 0.0)->members, ElementsAre("s"));
  EXPECT_EQ(ConvergentSubset(m, "s", 1.0)->k, 3u);
  const AnonymityResult r = *ConvergentSubset(m, "s", 0.5);
  EXPECT_EQ(r.k, 2u);
  EXPECT_THAT(r.members, ElementsAre("s", "a"));
  // Boundary is inclusive.
  EXPECT_EQ(ConvergentSubset(m, "s", 0.2)->k, 2u);
  EXPECT_FALSE(ConvergentSubset(m, "zz", 0.5).ok());
  EXPECT_FALSE(ConvergentSubset(m, "s", 1.5).ok());
  EXPECT_FALSE(ConvergentSubset(m, "s", -0.1).ok());
}

TEST(ConvergentSubsetTest, DuplicatesJoinAtZeroRadius) {
  const DistanceMatrix m =
      *DistanceMatrix::FromDense({"x", "y", "z"}, {{0, 0, 1}, {0, 0, 1}, {1, 1, 0}});
  EXPECT_THAT(ConvergentSubset(m, "x", 0.0)->members, ElementsAre("x", "y"));
}

TEST(ConvergentSubsetTest, MatchesBruteForceScan) {
  std::mt19937_64 rng(2);
  const std::vector<Distribution> dists = RandomDists(rng, 30);
  const DistanceMatrix m = *DistanceMatrix::Compute(Keys(30), IndexDistributions(dists), 1);
  std::uniform_real_distribution<double> radius(0.0, 1.0);
  for (int round = 0; round < 200; ++round) {
    const std::size_t s = rng() % 30;
    const double d = radius(rng);
    std::vector<std::size_t> expected;
    for (std::size_t j = 0; j < 30; ++j) {
      if (JsDistance(dists[s], dists[j]) <= d) expected.push_back(j);
    }
    EXPECT_EQ(ConvergentIndices(m, s, d), expected);
  }
}

TEST(KdAnonymityTest, Examples) {
  const DistanceMatrix m = Line();
  EXPECT_TRUE(*IsKdAnonymous(m, "s", 1, 0.0));
  EXPECT_FALSE(*IsKdAnonymous(m, "s", 4, 1.0));
  EXPECT_TRUE(*IsKdAnonymous(m, "s", 2, 0.3));
  EXPECT_FALSE(*IsKdAnonymous(m, "s", 3, 0.3));
  EXPECT_FALSE(IsKdAnonymous(m, "s", 0, 0.3).ok());
}

TEST(KdAnonymityTest, MonotoneInDAntitoneInK) {
  std::mt19937_64 rng(3);
  const std::vector<Distribution> dists = RandomDists(rng, 25);
  const DistanceMatrix m = *DistanceMatrix::Compute(Keys(25), IndexDistributions(dists), 1);
  for (const std::string& subject : m.keys()) {
    for (std::size_t k = 1; k <= 26; ++k) {
      bool previous = false;
      for (double d = 0.0; d <= 1.0; d += 0.05) {
        const bool now = *IsKdAnonymous(m, subject, k, d);
        ASSERT_TRUE(!previous || now);
        previous = now;
        if (k > 1 && now) {
          ASSERT_TRUE(*IsKdAnonymous(m, subject, k - 1, d));
        }
      }
    }
  }
}

TEST(CMatchesTest, InclusiveBoundary) {
  EXPECT_TRUE(CMatches(0.3, 0.3));
  EXPECT_FALSE(CMatches(0.31, 0.3));
  EXPECT_TRUE(CMatches(0.0, 0.0));
  EXPECT_TRUE(CMatches(0.0, 0.7));
}

TEST(LemmaTest, TriangleBoundExamples) {
  // star = 0 is at c = .3 from the target; member 1 is at d = .2 from star.
  const DistanceMatrix within =
      *DistanceMatrix::FromDense({"star", "m"}, {{0, 0.2}, {0.2, 0}});
  const std::vector<double> to_target = {0.3, 0.45};
  const std::vector<std::size_t> set = {0, 1};
  EXPECT_TRUE(*LemmaBoundCheck(within, to_target, set, 0, 0.3, 0.2));
  // Singleton set: the bound reduces to c.
  const std::vector<std::size_t> alone = {0};
  EXPECT_TRUE(*LemmaBoundCheck(within, to_target, alone, 0, 0.3, 0.0));
  // Distances that break the triangle inequality are caught.
  const std::vector<double> impossible = {0.3, 0.9};
  EXPECT_FALSE(*LemmaBoundCheck(within, impossible, set, 0, 0.3, 0.2));
}

TEST(LemmaTest, PreconditionViolations) {
  const DistanceMatrix within =
      *DistanceMatrix::FromDense({"star", "m"}, {{0, 0.2}, {0.2, 0}});
  const std::vector<double> to_target = {0.3, 0.45};
  const std::vector<std::size_t> set = {0, 1};
  EXPECT_EQ(LemmaBoundCheck(within, to_target, set, 0, 0.1, 0.2).status().code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_EQ(LemmaBoundCheck(within, to_target, set, 0, 0.3, 0.1).status().code(),
            absl::StatusCode::kFailedPrecondition);
  const std::vector<std::size_t> without_star = {1};
  EXPECT_EQ(LemmaBoundCheck(within, to_target, without_star, 0, 0.3, 0.2).status().code(),
            absl::StatusCode::kFailedPrecondition);
  const std::vector<double> short_list = {0.3};
  EXPECT_FALSE(LemmaBoundCheck(within, short_list, set, 0, 0.3, 0.2).ok());
}

TEST(ChoiceLikelihoodTest, Examples) {
  const std::vector<double> two = {0.2, 0.8};
  const ChoiceScore first = *ChoiceLikelihood(two, 0);
  EXPECT_DOUBLE_EQ(first.score, 0.8);
  EXPECT_DOUBLE_EQ(first.normalized, 0.8);
  for (std::size_t n = 2; n <= 6; ++n) {
    const std::vector<double> same(n, 0.4);
    EXPECT_DOUBLE_EQ(ChoiceLikelihood(same, 0)->score, 1.0 - 1.0 / n);
  }
}

TEST(ChoiceLikelihoodTest, NormalizedVariantSumsToOne) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int round = 0; round < 100; ++round) {
    std::vector<double> dist(2 + rng() % 10);
    for (double& v : dist) v = u(rng);
    double total = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) total += ChoiceLikelihood(dist, i)->normalized;
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(ChoiceLikelihoodTest, Errors) {
  const std::vector<double> zeros = {0.0, 0.0, 0.0};
  absl::StatusOr<ChoiceScore> degenerate = ChoiceLikelihood(zeros, 0);
  ASSERT_FALSE(degenerate.ok());
  EXPECT_THAT(std::string(degenerate.status().message()),
              HasSubstr("degenerate: all candidates identical to target"));
  const std::vector<double> one = {0.5};
  EXPECT_FALSE(ChoiceLikelihood(one, 0).ok());
  const std::vector<double> two = {0.5, 0.1};
  EXPECT_FALSE(ChoiceLikelihood(two, 2).ok());
}

TEST(ChoiceLikelihoodTest, CrossMatrixOverloadReadsColumn) {
  std::mt19937_64 rng(5);
  const std::vector<Distribution> dists = RandomDists(rng, 6);
  const std::vector<IndexedDistribution> indexed = IndexDistributions(dists);
  const CrossDistanceMatrix cross = CrossDistanceMatrix::Compute(
      Keys(4, "a"), std::span(indexed).subspan(0, 4), Keys(2, "b"),
      std::span(indexed).subspan(4), 1);
  const std::vector<std::size_t> candidates = {0, 2, 3};
  const std::vector<double> column = {cross(0, 1), cross(2, 1), cross(3, 1)};
  EXPECT_EQ(ChoiceLikelihood(cross, candidates, 1, 2)->score,
            ChoiceLikelihood(column, 1)->score);
  EXPECT_FALSE(ChoiceLikelihood(cross, candidates, 1, 1).ok());
}

TEST(MatchingBoundTest, ClosedFormExamples) {
  EXPECT_EQ(ComputeMatchingBound(0.3, 0.2, 1)->t, 0.0);
  EXPECT_NEAR(ComputeMatchingBound(0.2, 0.1, 5)->t, 1.0 - 0.2 / 1.4, 1e-15);
  EXPECT_NEAR(ComputeMatchingBound(0.2, 0.1, 5)->t, 0.857143, 1e-6);
  EXPECT_NEAR(ComputeMatchingBound(1.0, 1.0, 2)->t, 2.0 / 3.0, 1e-15);
  EXPECT_EQ(*UnlinkabilitySigma(0.2, 0.1, 5), ComputeMatchingBound(0.2, 0.1, 5)->t);
  EXPECT_EQ(*UnlinkabilitySigma(1.0, 1.0, 2), ComputeMatchingBound(1.0, 1.0, 2)->t);
  EXPECT_EQ(*UnlinkabilitySigma(0.3, 0.2, 1), 0.0);
}

TEST(MatchingBoundTest, RangeAndErrors) {
  absl::StatusOr<MatchingBound> zero = ComputeMatchingBound(0.0, 0.1, 5);
  ASSERT_FALSE(zero.ok());
  EXPECT_EQ(zero.status().message(), "bound undefined at zero matching distance");
  EXPECT_FALSE(ComputeMatchingBound(0.2, -0.1, 5).ok());
  EXPECT_FALSE(ComputeMatchingBound(0.2, 0.1, 0).ok());
  EXPECT_FALSE(UnlinkabilitySigma(0.0, 0.1, 5).ok());
  for (std::size_t k = 1; k < 100; k += 7) {
    const double t = ComputeMatchingBound(0.05, 0.5, k)->t;
    EXPECT_GE(t, 0.0);
    EXPECT_LT(t, 1.0);
  }
}

TEST(MatrixIoTest, RoundTripsAsFloat32) {
  std::mt19937_64 rng(6);
  const std::vector<Distribution> dists = RandomDists(rng, 12);
  const DistanceMatrix m = *DistanceMatrix::Compute(Keys(12), IndexDistributions(dists), 1);
  std::stringstream s;
  ASSERT_TRUE(WriteDistanceMatrix(m, s).ok());
  const std::string bytes = s.str();
  EXPECT_NE(bytes.find("\"upper-triangle-row-major\""), std::string::npos);
  EXPECT_NE(bytes.find("\"float32-le\""), std::string::npos);
  absl::StatusOr<DistanceMatrix> back = ReadDistanceMatrix(s);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->keys(), m.keys());
  for (std::size_t i = 0; i < m.packed().size(); ++i) {
    EXPECT_EQ(back->packed()[i], static_cast<double>(static_cast<float>(m.packed()[i])));
  }
}

TEST(MatrixIoTest, DetectsCorruption) {
  const DistanceMatrix m = Line();
  std::stringstream s;
  ASSERT_TRUE(WriteDistanceMatrix(m, s).ok());
  std::string bytes = s.str();
  bytes[bytes.size() - 2] ^= 0x40;
  std::istringstream corrupted(bytes);
  EXPECT_EQ(ReadDistanceMatrix(corrupted).status().code(), absl::StatusCode::kDataLoss);
  std::istringstream truncated(bytes.substr(0, bytes.size() - 3));
  EXPECT_FALSE(ReadDistanceMatrix(truncated).ok());
  std::istringstream garbage("xx");
  EXPECT_FALSE(ReadDistanceMatrix(garbage).ok());
}

}  // namespace
}  // namespace linkrisk
