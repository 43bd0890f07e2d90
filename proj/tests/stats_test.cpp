#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "pcredit/rng.hpp"
#include "pcredit/stats.hpp"

using namespace pcredit;
using namespace pcredit::stats;

namespace {

const nlohmann::json& golden() {
  static const nlohmann::json doc = [] {
    std::ifstream in(PCREDIT_GOLDEN_DIR "/stats_golden.json");
    return nlohmann::json::parse(in);
  }();
  return doc;
}

std::vector<SampleGroup> groups_of(const nlohmann::json& fixture) {
  std::vector<SampleGroup> out;
  for (const auto& g : fixture.at("groups")) out.push_back({g.at("label"), g.at("values").get<std::vector<double>>()});
  return out;
}

void expect_rel(double got, double want, double rel) {
  EXPECT_LE(std::abs(got - want), rel * std::max(1.0, std::abs(want))) << got << " vs " << want;
}

}  // namespace

TEST(ShapiroWilk, Golden) {
  for (const auto& f : golden().at("shapiro_wilk")) {
    SCOPED_TRACE(f.at("name").get<std::string>());
    const auto x = f.at("values").get<std::vector<double>>();
    const TestResult r = shapiro_wilk(x);
    EXPECT_NEAR(r.statistic, f.at("statistic").get<double>(), 1e-4);
    EXPECT_NEAR(r.p_value, f.at("p_value").get<double>(), 1e-3);
  }
}

TEST(ShapiroWilk, ExponentialRejected) {
  for (const auto& f : golden().at("shapiro_wilk")) {
    if (f.at("name") == "exponential_50") EXPECT_LT(shapiro_wilk(f.at("values").get<std::vector<double>>()).p_value, 0.01);
  }
}

TEST(ShapiroWilk, Errors) {
  EXPECT_THROW(shapiro_wilk(std::vector<double>{1, 2}), std::invalid_argument);
  EXPECT_THROW(shapiro_wilk(std::vector<double>(10, 3.0)), std::invalid_argument);
  EXPECT_THROW(shapiro_wilk(std::vector<double>(5001, 1.0)), std::invalid_argument);
  EXPECT_THROW(shapiro_wilk(std::vector<double>{1, 2, NAN}), std::invalid_argument);
}

TEST(Levene, Golden) {
  for (const auto& f : golden().at("levene_median")) {
    SCOPED_TRACE(f.at("name").get<std::string>());
    const auto g = groups_of(f);
    const TestResult r = levene_median(g);
    expect_rel(r.statistic, f.at("statistic"), 1e-6);
    EXPECT_NEAR(r.p_value, f.at("p_value").get<double>(), 1e-3);
  }
}

TEST(Levene, IdenticalGroupsGiveZero) {
  const SampleGroup g{"a", {1.0, 4.0, 2.5, 9.0, -3.0}};
  EXPECT_EQ(levene_median(std::vector<SampleGroup>{g, g}).statistic, 0.0);
  EXPECT_EQ(levene_median(std::vector<SampleGroup>{g, g, g, g}).statistic, 0.0);
}

TEST(Levene, DegreesOfFreedom) {
  Rng rng(2);
  std::vector<SampleGroup> groups(4);
  for (auto& g : groups)
    for (int i = 0; i < 30; ++i) g.values.push_back(rng.uniform());
  const TestResult r = levene_median(groups);
  EXPECT_EQ(r.df, (std::vector<double>{3, 116}));
  EXPECT_THROW(levene_median(std::vector<SampleGroup>{groups[0]}), std::invalid_argument);
  EXPECT_THROW(levene_median(std::vector<SampleGroup>{groups[0], {"x", {1.0}}}), std::invalid_argument);
}

TEST(Anova, Golden) {
  for (const auto& f : golden().at("anova")) {
    SCOPED_TRACE(f.at("name").get<std::string>());
    const TestResult r = anova_oneway(groups_of(f));
    expect_rel(r.statistic, f.at("statistic"), 1e-6);
    EXPECT_NEAR(r.p_value, f.at("p_value").get<double>(), 1e-3);
  }
}

TEST(Anova, DegreesOfFreedomAndDegenerateInput) {
  std::vector<SampleGroup> groups;
  const int sizes[8] = {11, 11, 11, 11, 11, 11, 10, 10};
  Rng rng(3);
  for (int s : sizes) {
    SampleGroup g{"g", {}};
    for (int i = 0; i < s; ++i) g.values.push_back(rng.uniform());
    groups.push_back(g);
  }
  EXPECT_EQ(anova_oneway(groups).df, (std::vector<double>{7, 78}));
  const std::vector<SampleGroup> flat = {{"a", {2, 2, 2}}, {"b", {2, 2}}};
  EXPECT_THROW(anova_oneway(flat), std::invalid_argument);
  const std::vector<SampleGroup> separated = {{"a", {1, 1, 1}}, {"b", {2, 2}}};
  const TestResult r = anova_oneway(separated);
  EXPECT_TRUE(std::isinf(r.statistic));
  EXPECT_EQ(r.p_value, 0.0);
}

TEST(KruskalWallis, Golden) {
  for (const auto& f : golden().at("kruskal_wallis")) {
    SCOPED_TRACE(f.at("name").get<std::string>());
    const TestResult r = kruskal_wallis(groups_of(f));
    expect_rel(r.statistic, f.at("statistic"), 1e-6);
    EXPECT_NEAR(r.p_value, f.at("p_value").get<double>(), 1e-3);
  }
}

TEST(KruskalWallis, HandRankSums) {
  // Ranks 1,2 and 3,4: H = 12/(4*5) * (3^2/2 + 7^2/2) - 3*5 = 2.4.
  const std::vector<SampleGroup> g = {{"a", {1, 2}}, {"b", {3, 4}}};
  const TestResult r = kruskal_wallis(g);
  EXPECT_NEAR(r.statistic, 2.4, 1e-12);
  EXPECT_EQ(r.df, std::vector<double>{1});
  const std::vector<SampleGroup> four = {{"a", {1, 5}}, {"b", {2, 6}}, {"c", {3}}, {"d", {4, 7}}};
  EXPECT_EQ(kruskal_wallis(four).df, std::vector<double>{3});
  const std::vector<SampleGroup> flat = {{"a", {1, 1}}, {"b", {1}}};
  EXPECT_THROW(kruskal_wallis(flat), std::invalid_argument);
}

TEST(Invariance, ReorderingShiftAndMonotoneTransform) {
  Rng rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<SampleGroup> groups(3);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      groups[g].label = "g" + std::to_string(g);
      for (int i = 0; i < 5 + static_cast<int>(rng.below(6)); ++i)
        groups[g].values.push_back(rng.uniform(0, 3) + static_cast<double>(g) * 0.3);
    }
    auto reordered = groups;
    std::reverse(reordered.begin(), reordered.end());
    for (auto& g : reordered) std::reverse(g.values.begin(), g.values.end());
    auto shifted = groups;
    for (auto& g : shifted)
      for (auto& v : g.values) v += 100.0;
    auto cubed = groups;
    for (auto& g : cubed)
      for (auto& v : g.values) v = v * v * v + 1.0;

    EXPECT_NEAR(anova_oneway(reordered).statistic, anova_oneway(groups).statistic, 1e-9);
    EXPECT_NEAR(levene_median(reordered).statistic, levene_median(groups).statistic, 1e-9);
    EXPECT_NEAR(kruskal_wallis(reordered).statistic, kruskal_wallis(groups).statistic, 1e-9);
    EXPECT_NEAR(shapiro_wilk(reordered[0].values).statistic, shapiro_wilk(groups[2].values).statistic, 1e-12);
    EXPECT_NEAR(anova_oneway(shifted).statistic, anova_oneway(groups).statistic, 1e-6);
    EXPECT_EQ(kruskal_wallis(shifted).statistic, kruskal_wallis(groups).statistic);
    EXPECT_EQ(kruskal_wallis(cubed).statistic, kruskal_wallis(groups).statistic);
  }
}

TEST(Pipeline, GoldenRegimes) {
  for (const auto& f : golden().at("pipeline")) {
    SCOPED_TRACE(f.at("name").get<std::string>());
    const PipelineResult r = run_pipeline(groups_of(f));
    EXPECT_EQ(r.normality_ok, f.at("normality_ok").get<bool>());
    EXPECT_EQ(r.equivariance_ok, f.at("equivariance_ok").get<bool>());
    const std::string expected = f.at("expected");
    if (expected == "anova") {
      EXPECT_EQ(r.test_used, TestKind::anova);
      EXPECT_TRUE(r.warnings.empty());
    } else {
      EXPECT_EQ(r.test_used, TestKind::kruskal_wallis);
      EXPECT_EQ(r.warnings.empty(), expected == "kruskal_wallis");
    }
    EXPECT_EQ(r.gate_results.size(), f.at("groups").size() + 1);
  }
}

TEST(Summary, MedianAndQuantile) {
  const std::vector<double> x = {5, 1, 4, 2, 3};
  EXPECT_EQ(median(x), 3.0);
  EXPECT_EQ(mean(x), 3.0);
  EXPECT_EQ(quantile(x, 0.25), 2.0);
  EXPECT_EQ(quantile(std::vector<double>{1, 2, 3, 4}, 0.5), 2.5);
  EXPECT_EQ(quantile(std::vector<double>{1, 2, 3, 4}, 0.25), 1.75);
}
