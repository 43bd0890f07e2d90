#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pcredit::stats {

enum class TestKind { shapiro_wilk, levene_median, anova, kruskal_wallis };

std::string_view to_string(TestKind kind) noexcept;

struct TestResult {
  TestKind test = TestKind::anova;
  double statistic = 0.0;
  std::vector<double> df;  // empty for Shapiro-Wilk
  double p_value = 1.0;
  std::string label;       // group label for per-group tests
};

struct SampleGroup {
  std::string label;
  std::vector<double> values;
};

/// Shapiro-Wilk W with Royston's normalizing approximation (AS R94).
/// Requires 3 <= n <= 5000 and non-zero range; throws std::invalid_argument.
TestResult shapiro_wilk(std::span<const double> sample);

/// Brown-Forsythe variant of Levene's test: one-way ANOVA on absolute
/// deviations from each group's median. df = (g - 1, N - g).
TestResult levene_median(std::span<const SampleGroup> groups);

/// Classical one-way ANOVA. Throws when every observation is equal (both
/// sums of squares zero); a zero within-group sum with spread between groups
/// gives F = inf, p = 0.
TestResult anova_oneway(std::span<const SampleGroup> groups);

/// Kruskal-Wallis H with mid-ranks and tie correction, chi-square(g - 1) p.
TestResult kruskal_wallis(std::span<const SampleGroup> groups);

struct PipelineResult {
  TestKind test_used = TestKind::anova;
  std::vector<TestResult> gate_results;  // Shapiro-Wilk per group, then Levene
  TestResult comparison;
  std::vector<std::string> warnings;
  bool normality_ok = false;
  bool equivariance_ok = false;
};

inline constexpr double kDefaultAlpha = 0.05;

/// Normality (per group) and equal-variance gates select ANOVA when both
/// hold and Kruskal-Wallis otherwise. A failed equivariance gate still runs
/// Kruskal-Wallis but records a warning, since neither test's assumptions
/// are then fully met.
PipelineResult run_pipeline(std::span<const SampleGroup> groups, double alpha = kDefaultAlpha);

// Summary helpers shared by reports.
double mean(std::span<const double> xs);
double median(std::span<const double> xs);
/// Linear-interpolation quantile (the common "type 7" definition).
double quantile(std::span<const double> xs, double q);

}  // namespace pcredit::stats
