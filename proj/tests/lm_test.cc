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

#include "linkrisk/lm.h"

#include <cmath>
#include <random>
#include <sstream>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "linkrisk/corpus.h"
#include "test_util.h"

namespace linkrisk {
namespace {

using ::testing::ElementsAre;
using ::testing::Pair;

UnigramModel Counts(std::map<std::string, std::int64_t> counts) {
  UnigramModel m;
  for (const auto& [token, n] : counts) m.Add(token, n);
  return m;
}

TEST(UnigramModelTest, FromTokensCounts) {
  const std::vector<std::string> tokens = {"a", "a", "b"};
  const UnigramModel m = UnigramModel::FromTokens(tokens);
  EXPECT_THAT(m.counts, ElementsAre(Pair("a", 2), Pair("b", 1)));
  EXPECT_EQ(m.total, 3);
}

TEST(UnigramModelTest, MergeAddsCounts) {
  UnigramModel a = Counts({{"a", 1}});
  a.Merge(Counts({{"b", 1}, {"a", 2}}));
  EXPECT_THAT(a.counts, ElementsAre(Pair("a", 3), Pair("b", 1)));
  EXPECT_EQ(a.total, 4);
}

TEST(DistributionTest, ToDistributionDividesByTotal) {
  absl::StatusOr<Distribution> d = ToDistribution(Counts({{"a", 2}, {"b", 1}}));
  ASSERT_TRUE(d.ok());
  EXPECT_DOUBLE_EQ(d->Prob("a"), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(d->Prob("b"), 1.0 / 3.0);
  EXPECT_EQ(d->Prob("c"), 0.0);
  absl::StatusOr<Distribution> point = ToDistribution(Counts({{"a", 5}}));
  ASSERT_TRUE(point.ok());
  EXPECT_EQ(point->Prob("a"), 1.0);
}

TEST(DistributionTest, EmptyModelFails) {
  absl::StatusOr<Distribution> d = ToDistribution(UnigramModel{});
  ASSERT_FALSE(d.ok());
  EXPECT_EQ(d.status().message(), "empty model");
}

TEST(DistributionTest, FromProbabilitiesValidates) {
  EXPECT_TRUE(Distribution::FromProbabilities({{"a", 0.25}, {"b", 0.75}}).ok());
  EXPECT_FALSE(Distribution::FromProbabilities({{"a", 0.5}}).ok());
  EXPECT_FALSE(Distribution::FromProbabilities({{"a", 0.0}, {"b", 1.0}}).ok());
  EXPECT_FALSE(Distribution::FromProbabilities({{"a", -0.5}, {"b", 1.5}}).ok());
  EXPECT_FALSE(Distribution::FromWeights({}).ok());
}

TEST(DistributionTest, NormalizationHoldsOnRandomModels) {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 200; ++round) {
    UnigramModel m;
    const int n = 1 + static_cast<int>(rng() % 50);
    for (int i = 0; i < n; ++i) m.Add("w" + std::to_string(rng() % 80), 1 + rng() % 1000);
    absl::StatusOr<Distribution> d = ToDistribution(m);
    ASSERT_TRUE(d.ok());
    double sum = 0.0;
    for (const auto& [token, p] : d->entries()) {
      EXPECT_GT(p, 0.0);
      EXPECT_LE(p, 1.0);
      sum += p;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

// Merged model frequencies equal the total-weighted mixture of the parts.
TEST(DistributionTest, MergeIsWeightedMixture) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 100; ++round) {
    UnigramModel a, b;
    for (int i = 0; i < 20; ++i) a.Add("w" + std::to_string(rng() % 30), 1 + rng() % 9);
    for (int i = 0; i < 20; ++i) b.Add("w" + std::to_string(rng() % 30), 1 + rng() % 9);
    UnigramModel merged = a;
    merged.Merge(b);
    const Distribution pa = *ToDistribution(a);
    const Distribution pb = *ToDistribution(b);
    const Distribution pm = *ToDistribution(merged);
    const double wa = static_cast<double>(a.total) / merged.total;
    const double wb = static_cast<double>(b.total) / merged.total;
    for (const auto& [token, p] : pm.entries()) {
      EXPECT_NEAR(p, wa * pa.Prob(token) + wb * pb.Prob(token), 1e-12);
    }
  }
}

TEST(TopKTest, OrdersByCountThenToken) {
  const UnigramModel m = Counts({{"b", 2}, {"a", 2}, {"c", 5}, {"d", 1}});
  EXPECT_THAT(TopK(m, 3), ElementsAre(Pair("c", 5), Pair("a", 2), Pair("b", 2)));
  EXPECT_THAT(TopK(m, 0), ElementsAre());
  EXPECT_EQ(TopK(m, 10).size(), 4u);
}

// Counts taken from the published top unigrams of two communities.
TEST(TopKTest, PublishedCommunityTopUnigrams) {
  const UnigramModel lost = Counts({{"island", 832}, {"show", 750}, {"lost", 653},
                                    {"time", 580}, {"people", 527}, {"locke", 494},
                                    {"season", 431}, {"jacob", 429}});
  EXPECT_THAT(TopK(lost, 1), ElementsAre(Pair("island", 832)));
  const UnigramModel tip = Counts({{"www.youtube.com", 3663}, {"song", 1542},
                                   {"remember", 1261}, {"en.wikipedia.org", 1100}});
  EXPECT_THAT(TopK(tip, 1), ElementsAre(Pair("www.youtube.com", 3663)));
}

TEST(TopKTest, UrlsCountUnderTheirHost) {
  NormalizationConfig config;
  const std::vector<std::string> tokens =
      Normalize("https://www.youtube.com/watch?v=1 and www.youtube.com/x song", config);
  const UnigramModel m = UnigramModel::FromTokens(tokens);
  EXPECT_THAT(TopK(m, 1), ElementsAre(Pair("www.youtube.com", 2)));
}

std::map<ProfileKey, TokenStream> Streams() {
  std::map<ProfileKey, TokenStream> streams;
  auto add = [&](std::string a, std::string c, std::vector<std::string> tokens) {
    ProfileKey key{a, c};
    streams[key] = {key, std::move(tokens), 1};
  };
  add("u1", "x", {"a"});
  add("u2", "x", {"b"});
  add("u1", "y", {"a", "a", "c"});
  return streams;
}

TEST(BuildModelsTest, CommunityAndGlobalAreSums) {
  const ModelSet models = BuildModels(Streams());
  EXPECT_EQ(models.profiles.size(), 3u);
  EXPECT_THAT(models.communities.at("x").counts, ElementsAre(Pair("a", 1), Pair("b", 1)));
  EXPECT_THAT(models.global.counts, ElementsAre(Pair("a", 3), Pair("b", 1), Pair("c", 1)));
  EXPECT_EQ(models.global.total, 5);
  EXPECT_THAT(CommunityProfiles(models, "y"), ElementsAre(Pair("u1", Counts({{"a", 2}, {"c", 1}}))));
  EXPECT_TRUE(BuildModels({}).profiles.empty());
}

TEST(BuildModelsTest, IndependentOfWorkerCount) {
  std::map<ProfileKey, TokenStream> streams;
  std::mt19937_64 rng(5);
  for (int u = 0; u < 60; ++u) {
    ProfileKey key{"u" + std::to_string(u), u % 2 ? "x" : "y"};
    TokenStream s{key, {}, 1};
    for (int i = 0; i < 100; ++i) s.tokens.push_back("w" + std::to_string(rng() % 40));
    streams[key] = s;
  }
  EXPECT_EQ(BuildModels(streams, 1), BuildModels(streams, 4));
}

TEST(ModelStoreTest, RoundTrips) {
  const ModelSet models = BuildModels(Streams());
  std::stringstream s;
  ASSERT_TRUE(WriteModelStore(models, s).ok());
  const std::string text = s.str();
  EXPECT_NE(text.find(R"("kind":"profile")"), std::string::npos);
  EXPECT_NE(text.find(R"("kind":"global")"), std::string::npos);
  absl::StatusOr<ModelSet> back = ReadModelStore(s);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(*back, models);
}

TEST(ModelStoreTest, RejectsMalformedRecords) {
  std::istringstream bad1("{\"kind\":\"profile\",\"key\":\"x\",\"counts\":{}}\n");
  EXPECT_FALSE(ReadModelStore(bad1).ok());
  std::istringstream bad2("{\"kind\":\"global\",\"key\":null,\"counts\":{\"a\":-1}}\n");
  EXPECT_FALSE(ReadModelStore(bad2).ok());
  std::istringstream bad3("nope\n");
  EXPECT_FALSE(ReadModelStore(bad3).ok());
}

}  // namespace
}  // namespace linkrisk
