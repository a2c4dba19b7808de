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

// Acceptance suite. Every test is one criterion; the listener at the bottom
// prints a single PASS/FAIL line per criterion after it runs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_split.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "linkrisk/anonymity.h"
#include "linkrisk/cli.h"
#include "linkrisk/corpus.h"
#include "linkrisk/framework.h"
#include "linkrisk/lm.h"
#include "linkrisk/metric.h"
#include "test_util.h"

namespace linkrisk {
namespace {

using ::linkrisk::testing::RandomDistribution;
using ::linkrisk::testing::ReadAll;
using ::testing::ElementsAre;

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Random subset of [0, n) of the given size, ascending.
std::vector<std::size_t> Sample(std::mt19937_64& rng, std::size_t n, std::size_t size) {
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(size);
  std::sort(all.begin(), all.end());
  return all;
}

DistanceMatrix MatrixOf(const std::vector<Distribution>& dists) {
  std::vector<std::string> keys;
  std::vector<std::vector<double>> dense(dists.size(), std::vector<double>(dists.size()));
  for (std::size_t i = 0; i < dists.size(); ++i) {
    keys.push_back("p" + std::to_string(i));
    for (std::size_t j = 0; j < dists.size(); ++j) {
      dense[i][j] = i == j ? 0.0 : JsDistance(dists[i], dists[j]);
    }
  }
  return *DistanceMatrix::FromDense(std::move(keys), dense);
}

// A target that resembles `base`: its weights plus sparse noise.
Distribution Perturbed(std::mt19937_64& rng, const Distribution& base) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::map<std::string, double> w;
  for (const auto& [token, prob] : base.entries()) w[token] = prob * (0.5 + u(rng));
  const Distribution noise = RandomDistribution(rng, 30, 4);
  const double scale = u(rng);
  for (const auto& [token, prob] : noise.entries()) w[token] += scale * prob;
  return *Distribution::FromWeights(w);
}

TEST(Acceptance, MetricAxioms) {
  const auto start = Clock::now();
  std::mt19937_64 rng(20261016);
  for (int i = 0; i < 10000; ++i) {
    const Distribution p = RandomDistribution(rng, 24, 8);
    const Distribution q = RandomDistribution(rng, 24, 8);
    const Distribution r = RandomDistribution(rng, 24, 8);
    const double pq = JsDistance(p, q), qp = JsDistance(q, p);
    const double qr = JsDistance(q, r), pr = JsDistance(p, r);
    ASSERT_EQ(pq, qp) << "symmetry, triple " << i;
    ASSERT_EQ(JsDistance(r, p), pr);
    ASSERT_LE(std::abs(JsDistance(p, p)), 1e-12);
    for (double x : {pq, qr, pr}) {
      ASSERT_GE(x, 0.0);
      ASSERT_LE(x, 1.0);
    }
    ASSERT_LE(pr, pq + qr + 1e-9) << "triangle, triple " << i;
    ASSERT_LE(pq, pr + qr + 1e-9);
    ASSERT_LE(qr, pq + pr + 1e-9);
  }
  EXPECT_LT(Seconds(start), 10.0);
}

TEST(Acceptance, JsExtremes) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const Distribution p = RandomDistribution(rng, 10, 6);
    std::map<std::string, double> w;
    const Distribution other = RandomDistribution(rng, 10, 6);
    for (const auto& [token, prob] : other.entries()) {
      w["z" + token] = prob;
    }
    const Distribution q = *Distribution::FromWeights(w);
    ASSERT_NEAR(JsDivergence(p, q), 1.0, 1e-12);
  }
  // Independent long double evaluation from the definition with M = (.75, .25).
  const long double m_a = 0.75L, m_b = 0.25L;
  const long double kl_p = 1.0L * std::log2(1.0L / m_a);
  const long double kl_q = 0.5L * std::log2(0.5L / m_a) + 0.5L * std::log2(0.5L / m_b);
  const long double oracle = 0.5L * kl_p + 0.5L * kl_q;
  const Distribution p = *Distribution::FromProbabilities({{"a", 1.0}});
  const Distribution q = *Distribution::FromProbabilities({{"a", 0.5}, {"b", 0.5}});
  EXPECT_NEAR(JsDivergence(p, q), static_cast<double>(oracle), 1e-9);
  EXPECT_NEAR(JsDistance(p, q), static_cast<double>(std::sqrt(oracle)), 1e-9);
}

TEST(Acceptance, MatchingBound) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> size(2, 50);
  int checked = 0;
  while (checked < 1000) {
    const int n = size(rng);
    std::vector<Distribution> sources;
    for (int i = 0; i < n; ++i) sources.push_back(RandomDistribution(rng, 30, 8));
    const std::size_t star = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    const Distribution target = Perturbed(rng, sources[star]);
    const DistanceMatrix within = MatrixOf(sources);
    const double c = JsDistance(sources[star], target);
    if (!(c > 0.0)) continue;
    // A radius that reaches at least one other source keeps k >= 2.
    std::size_t other = std::uniform_int_distribution<std::size_t>(0, n - 2)(rng);
    if (other >= star) ++other;
    const double d = within(star, other);
    const std::vector<std::size_t> subset = ConvergentIndices(within, star, d);
    ASSERT_GE(subset.size(), 2u);
    std::vector<double> to_target;
    std::size_t chosen = 0;
    for (std::size_t j : subset) {
      if (j == star) chosen = to_target.size();
      to_target.push_back(JsDistance(sources[j], target));
    }
    const ChoiceScore score = *ChoiceLikelihood(to_target, chosen);
    const double sum = std::accumulate(to_target.begin(), to_target.end(), 0.0);
    ASSERT_NEAR(score.score, 1.0 - c / sum, 1e-12);
    const double k = static_cast<double>(subset.size());
    const double t = 1.0 - c / (c + (k - 1.0) * (c + d));
    ASSERT_NEAR(ComputeMatchingBound(c, d, subset.size())->t, t, 1e-12);
    ASSERT_LE(score.score, t + 1e-9)
        << "n=" << n << " k=" << subset.size() << " c=" << c << " d=" << d;
    ++checked;
  }
}

TEST(Acceptance, TriangleLemma) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> size(2, 40);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int round = 0; round < 1000; ++round) {
    const int n = size(rng);
    std::vector<Distribution> sources;
    for (int i = 0; i < n; ++i) sources.push_back(RandomDistribution(rng, 30, 8));
    const std::size_t star = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    const Distribution target = Perturbed(rng, sources[star]);
    const DistanceMatrix within = MatrixOf(sources);
    const double d = u(rng);
    const double c = JsDistance(sources[star], target) + 0.1 * u(rng);
    const std::vector<std::size_t> ball = ConvergentIndices(within, star, d);
    std::vector<std::size_t> subset;
    for (std::size_t j : ball) {
      if (j == star || u(rng) < 0.7) subset.push_back(j);
    }
    std::vector<double> to_target;
    for (const Distribution& s : sources) to_target.push_back(JsDistance(s, target));
    absl::StatusOr<bool> holds = LemmaBoundCheck(within, to_target, subset, star, c, d, 1e-9);
    ASSERT_TRUE(holds.ok()) << holds.status();
    ASSERT_TRUE(*holds) << "round " << round;
    for (std::size_t j : subset) ASSERT_LE(to_target[j], c + d + 1e-9);
  }
}

TEST(Acceptance, SupersetMonotonicity) {
  std::mt19937_64 rng(51);
  std::uniform_int_distribution<int> size(1, 30);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int round = 0; round < 1000; ++round) {
    const int n = size(rng);
    const int extra = size(rng);
    std::vector<Distribution> all;
    for (int i = 0; i < n + extra; ++i) all.push_back(RandomDistribution(rng, 20, 6));
    const DistanceMatrix full = MatrixOf(all);
    // The original collection is a random subset; the rest extends it.
    const std::vector<std::size_t> kept = Sample(rng, all.size(), n);
    const DistanceMatrix small = full.Subset(kept);
    const std::size_t subject = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    const std::string key = small.keys()[subject];
    const double d = u(rng);
    const std::size_t k = ConvergentIndices(small, subject, d).size();
    ASSERT_TRUE(*IsKdAnonymous(small, key, k, d));
    ASSERT_TRUE(*IsKdAnonymous(full, key, k, d)) << "round " << round;
    const std::size_t smaller = std::uniform_int_distribution<std::size_t>(1, k)(rng);
    ASSERT_TRUE(*IsKdAnonymous(full, key, smaller, d));
  }
}

TEST(Acceptance, Impossibility) {
  linkrisk::testing::TempDir dir("impossibility");
  std::ostringstream out, err;
  const int code = cli::Dispatch(
      {"linkrisk", "framework", "impossibility", "--out", dir.File("r.json")}, out, err);
  ASSERT_EQ(code, cli::kExitOk) << err.str();
  const nlohmann::json report = nlohmann::json::parse(ReadAll(dir.File("r.json")));
  EXPECT_EQ(report["sd"].get<double>(), 1.0);
  // Independent check of the reported distance from the two posteriors.
  const std::vector<double> x = report["original_posterior"];
  const std::vector<double> y = report["modified_posterior"];
  ASSERT_EQ(x.size(), y.size());
  double l1 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) l1 += std::abs(x[i] - y[i]);
  EXPECT_EQ(0.5 * l1, 1.0);
}

// All nondecreasing domain-size vectors with 1 to 4 attributes of 1 to 3
// values. Attribute order does not matter for the property.
std::vector<std::vector<int>> Shapes() {
  std::vector<std::vector<int>> shapes;
  std::vector<int> current;
  auto grow = [&](auto&& self, int min_size) -> void {
    if (!current.empty()) shapes.push_back(current);
    if (current.size() == 4) return;
    for (int s = min_size; s <= 3; ++s) {
      current.push_back(s);
      self(self, s);
      current.pop_back();
    }
  };
  grow(grow, 1);
  return shapes;
}

std::vector<framework::AttributeSet> NonEmptySubsets(const framework::AttributeSet& set) {
  const std::vector<std::size_t> items(set.begin(), set.end());
  std::vector<framework::AttributeSet> subsets;
  for (std::size_t mask = 1; mask < (std::size_t{1} << items.size()); ++mask) {
    framework::AttributeSet s;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (mask >> i & 1) s.insert(items[i]);
    }
    subsets.push_back(s);
  }
  return subsets;
}

TEST(Acceptance, NoCriticalAttributesImpliesSatisfied) {
  using namespace framework;
  const std::vector<double> sigmas = {0.0, 0.25, 1.0 / 3.0, 0.5, 0.75};
  std::size_t checked = 0, violated = 0, excluded = 0;
  for (const std::vector<int>& shape : Shapes()) {
    std::vector<std::pair<std::string, std::vector<std::string>>> domains;
    for (std::size_t a = 0; a < shape.size(); ++a) {
      std::vector<std::string> values;
      for (int v = 0; v < shape[a]; ++v) values.push_back("v" + std::to_string(v));
      domains.emplace_back("a" + std::to_string(a), values);
    }
    const AttributeUniverse universe = *AttributeUniverse::Create(domains);
    const std::vector<EntityModel> models = universe.AllModels();
    const EntityModel empty(std::vector<AttributeValue>(shape.size()));
    for (const WorldKnowledge& kappa : {EmptyWorldKnowledge(), ConsistencyKnowledge()}) {
      Adversary adv;
      adv.candidates = models;
      adv.knowledge = kappa;
      adv.prior.slices["P"] = UniformSlice(models.size());
      std::map<EntityModel, BeliefSlice> posterior;
      for (const EntityModel& m : models) {
        posterior[m] = *UpdateBelief(adv, adv.prior.slices["P"], m);
      }
      for (const EntityModel& forbidden : models) {
        if (forbidden.Domain().empty()) continue;
        PrivacyRequirement r{"P", {}};
        for (std::size_t a : forbidden.Domain()) r.forbidden.emplace_back(a, *forbidden.value(a));
        const PrivacyPolicy policy{{r}};
        for (double sigma : sigmas) {
          if (!SigmaSatisfies(models, posterior.at(empty), r, sigma)) {
            ++excluded;
            continue;
          }
          for (const EntityModel& published : models) {
            const AttributeSet dom = published.Domain();
            if (dom.empty()) continue;
            ++checked;
            if (SigmaSatisfies(models, posterior.at(published), r, sigma)) continue;
            ++violated;
            bool any_critical = false;
            for (const AttributeSet& subset : NonEmptySubsets(dom)) {
              any_critical = *IsCritical(subset, "P", published, adv, policy, sigma);
              if (any_critical) break;
            }
            ASSERT_TRUE(any_critical)
                << "no critical subset yet violated: " << published.DebugString(universe)
                << " sigma=" << sigma;
          }
        }
      }
    }
  }
  std::cout << "  checked " << checked << " cases (" << violated << " violated, "
            << excluded << " excluded by a violating empty observation)\n";
  EXPECT_GT(violated, 0u);
}

TEST(Acceptance, NormalizationGolden) {
  NormalizationConfig config;
  config.stopwords = *LoadWordList(LINKRISK_DATA_DIR "/stopwords.txt");
  config.smilies = *LoadWordList(LINKRISK_DATA_DIR "/smilies.txt");
  EXPECT_THAT(Normalize("cooooooool", config), ElementsAre("coool"));
  EXPECT_THAT(Normalize("*text*", config), ElementsAre("text"));
  EXPECT_THAT(Normalize("https://www.YouTube.com/watch?v=abc", config),
              ElementsAre("www.youtube.com"));
  // The default stopword list contains "before" and "after".
  EXPECT_THAT(Normalize("intro\n```\nint x = 1;\n```\noutro", config),
              ElementsAre("intro", "outro"));
  EXPECT_THAT(Normalize("nice :) work <3", config), ElementsAre("nice", ":)", "work", "<3"));
}

TEST(Acceptance, PosteriorCorrectness) {
  using namespace framework;
  const AttributeUniverse u =
      *AttributeUniverse::Create({{"name", {"bob", "alice"}}, {"city", {"x", "y"}}});
  Adversary adv;
  adv.candidates = {EntityModel({"bob", "x"}), EntityModel({"bob", "y"}),
                    EntityModel({"alice", "x"}), EntityModel({"alice", "y"})};
  const EntityModel observed({"bob", std::nullopt});
  adv.knowledge = TableKnowledge({{observed, {1.0, 0.5, 0.5, 0.0}}}, adv.candidates,
                                 EmptyWorldKnowledge());
  adv.prior.slices["P"] = UniformSlice(4);
  // By hand: evidence (1 + .5 + .5 + 0) / 4 = 1/2, posterior .25 * L / .5.
  const BeliefSlice post = *Posterior(adv, {{"P", observed}}, "P");
  const std::vector<double> expected = {0.5, 0.25, 0.25, 0.0};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(post[i], expected[i], 1e-12);

  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::vector<EntityModel> all = u.AllModels();
  adv.candidates = all;
  for (int round = 0; round < 1000; ++round) {
    std::map<EntityModel, double> table;
    for (const EntityModel& m : all) table[m] = unit(rng) < 0.2 ? 0.0 : unit(rng);
    adv.knowledge = [&table](const EntityModel&, const EntityModel& c) {
      return table.at(c);
    };
    BeliefSlice prior(all.size());
    for (double& p : prior) p = unit(rng);
    const double total = std::accumulate(prior.begin(), prior.end(), 0.0);
    for (double& p : prior) p /= total;
    absl::StatusOr<BeliefSlice> p = UpdateBelief(adv, prior, all[round % all.size()]);
    if (!p.ok()) continue;
    ASSERT_NEAR(std::accumulate(p->begin(), p->end(), 0.0), 1.0, 1e-12);
    double evidence = 0.0;
    for (std::size_t i = 0; i < all.size(); ++i) evidence += prior[i] * table.at(all[i]);
    for (std::size_t i = 0; i < all.size(); ++i) {
      ASSERT_NEAR((*p)[i], prior[i] * table.at(all[i]) / evidence, 1e-12);
    }
  }
}

// One run of synth -> ingest -> build-models -> distances -> eval.
struct PipelineRun {
  std::filesystem::path root;
  double seconds = 0.0;
};

void RunCli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  std::vector<std::string> full = {"linkrisk"};
  full.insert(full.end(), args.begin(), args.end());
  ASSERT_EQ(cli::Dispatch(full, out, err), cli::kExitOk) << args[2] << ": " << err.str();
}

PipelineRun RunPipeline(const std::string& name, int workers) {
  PipelineRun run;
  run.root = std::filesystem::path(::testing::TempDir()) / ("linkrisk_acceptance_" + name);
  std::filesystem::remove_all(run.root);
  const std::string root = run.root.string(), w = std::to_string(workers);
  const auto start = Clock::now();
  RunCli({"--workers", w, "synth", "--users", "500", "--topics", "20", "--idiosyncrasy",
          "0.3", "--seed", "42", "--out", root + "/synth"});
  RunCli({"--workers", w, "ingest", "--input", root + "/synth/alpha.jsonl", "--input",
          root + "/synth/beta.jsonl", "--min-comments", "1", "--out", root + "/profiles"});
  RunCli({"--workers", w, "build-models", "--input", root + "/profiles/profiles.jsonl",
          "--out", root + "/models"});
  RunCli({"--workers", w, "distances", "--models", root + "/models/models.jsonl",
          "--community", "alpha", "--community", "beta", "--out", root + "/distances"});
  RunCli({"--workers", w, "eval", "--models", root + "/models/models.jsonl",
          "--community-a", "alpha", "--community-b", "beta", "--links",
          root + "/synth/links.csv", "--k", "1,5,10,20", "--out", root + "/eval"});
  run.seconds = Seconds(start);
  return run;
}

const PipelineRun& SingleWorkerRun() {
  static const PipelineRun* run = new PipelineRun(RunPipeline("w1", 1));
  return *run;
}

std::vector<std::vector<std::string>> ReadCsv(const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(ReadAll(path.string()));
  std::string line;
  while (std::getline(in, line)) rows.push_back(absl::StrSplit(line, ','));
  return rows;
}

TEST(Acceptance, ScatterBelowDiagonal) {
  const PipelineRun& run = SingleWorkerRun();
  ASSERT_FALSE(::testing::Test::HasFatalFailure());
  const auto rows = ReadCsv(run.root / "eval" / "scatter.csv");
  ASSERT_GT(rows.size(), 1u);
  ASSERT_THAT(rows[0], ElementsAre("source", "target", "average_nonmatching_distance",
                                   "matching_distance", "below_diagonal"));
  std::size_t below = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    below += std::stod(rows[i][3]) < std::stod(rows[i][2]);
  }
  const double fraction = static_cast<double>(below) / (rows.size() - 1);
  std::cout << "  " << rows.size() - 1 << " matched pairs, fraction below diagonal "
            << fraction << ", pipeline " << run.seconds << " s\n";
  EXPECT_GE(fraction, 0.9);
  EXPECT_LT(run.seconds, 300.0);
}

// Average ranks for ties, then Pearson.
double SpearmanOracle(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      double less = 0, equal = 0;
      for (double w : v) {
        less += w < v[i];
        equal += w == v[i];
      }
      r[i] = less + (equal + 1) / 2;
    }
    return r;
  };
  const std::vector<double> rx = ranks(x), ry = ranks(y);
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / rx.size();
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / ry.size();
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

TEST(Acceptance, SubsetSizeVsPrecision) {
  const PipelineRun& run = SingleWorkerRun();
  ASSERT_FALSE(::testing::Test::HasFatalFailure());
  const auto rows = ReadCsv(run.root / "eval" / "anon_vs_precision.csv");
  ASSERT_THAT(rows.at(0), ElementsAre("k", "bin_lo", "bin_hi", "pairs", "hits", "precision"));
  std::vector<double> bins, precision;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][0] != "5") continue;
    bins.push_back(std::stod(rows[i][1]));
    precision.push_back(std::stod(rows[i][4]) / std::stod(rows[i][3]));
  }
  ASSERT_GE(bins.size(), 3u);
  const double rho = SpearmanOracle(bins, precision);
  std::cout << "  " << bins.size() << " bins, spearman(bin, precision@5) = " << rho << "\n";
  EXPECT_LE(rho, -0.5);
}

TEST(Acceptance, Determinism) {
  const PipelineRun& one = SingleWorkerRun();
  ASSERT_FALSE(::testing::Test::HasFatalFailure());
  const PipelineRun four = RunPipeline("w4", 4);
  ASSERT_FALSE(::testing::Test::HasFatalFailure());
  std::size_t compared = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(one.root)) {
    const std::string ext = entry.path().extension().string();
    if (ext != ".csv" && ext != ".jsonl" && ext != ".lrdm") continue;
    const auto rel = std::filesystem::relative(entry.path(), one.root);
    EXPECT_EQ(ReadAll(entry.path().string()), ReadAll((four.root / rel).string()))
        << rel.string();
    compared += ext == ".csv";
  }
  EXPECT_GE(compared, 7u);
}

class CriterionPrinter : public ::testing::EmptyTestEventListener {
 public:
  void OnTestEnd(const ::testing::TestInfo& info) override {
    static const std::map<std::string, std::string> kLabels = {
        {"MetricAxioms", "1 metric axioms"},
        {"JsExtremes", "2 js extremes and worked value"},
        {"MatchingBound", "3 matching likelihood bound"},
        {"TriangleLemma", "4 triangle lemma"},
        {"SupersetMonotonicity", "5 superset monotonicity"},
        {"Impossibility", "6 impossibility sd = 1"},
        {"NoCriticalAttributesImpliesSatisfied", "7 no critical attributes => satisfied"},
        {"NormalizationGolden", "8 normalization golden suite"},
        {"ScatterBelowDiagonal", "9 matched pairs below diagonal"},
        {"SubsetSizeVsPrecision", "10 subset size vs precision@5"},
        {"PosteriorCorrectness", "11 posterior correctness"},
        {"Determinism", "12 determinism across worker counts"},
    };
    const auto it = kLabels.find(info.name());
    const std::string label = it == kLabels.end() ? info.name() : it->second;
    std::cout << "ACCEPTANCE " << label << ": "
              << (info.result()->Passed() ? "PASS" : "FAIL") << std::endl;
  }
};

}  // namespace
}  // namespace linkrisk

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  ::testing::UnitTest::GetInstance()->listeners().Append(new linkrisk::CriterionPrinter);
  return RUN_ALL_TESTS();
}
