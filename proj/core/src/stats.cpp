#include "pcredit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>

namespace pcredit::stats {
namespace {

// c[0] + c[1] x + c[2] x^2 + ...
template <std::size_t N>
double poly(const double (&c)[N], double x) {
  double r = 0.0;
  for (std::size_t i = N; i-- > 0;) r = r * x + c[i];
  return r;
}

double normal_quantile(double p) { return boost::math::quantile(boost::math::normal(), p); }
double normal_upper_tail(double z) {
  return boost::math::cdf(boost::math::complement(boost::math::normal(), z));
}

double f_upper_tail(double f, double df1, double df2) {
  if (std::isinf(f)) return 0.0;
  return boost::math::cdf(boost::math::complement(boost::math::fisher_f(df1, df2), f));
}

double chi2_upper_tail(double x, double df) {
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(df), x));
}

void check_groups(std::span<const SampleGroup> groups, std::size_t min_size, const char* test) {
  if (groups.size() < 2) throw std::invalid_argument(std::string(test) + " needs at least 2 groups");
  for (const SampleGroup& g : groups) {
    if (g.values.size() < min_size) {
      throw std::invalid_argument(std::string(test) + ": group '" + g.label + "' has " +
                                  std::to_string(g.values.size()) + " observations, needs " +
                                  std::to_string(min_size));
    }
    for (double v : g.values) {
      if (!std::isfinite(v)) throw std::invalid_argument(std::string(test) + ": non-finite observation");
    }
  }
}

struct FStatistic {
  double f;
  double df1;
  double df2;
};

// One-way F on already-validated groups. Values are summed in sorted order so
// the statistic does not depend on observation order, and the between-group
// sum uses the pairwise form sum_{i<j} n_i n_j (m_i - m_j)^2 / N, which is
// exactly zero when all group means agree.
FStatistic one_way_f(const std::vector<std::vector<double>>& groups, const char* test) {
  const std::size_t g = groups.size();
  std::vector<double> means;
  std::vector<double> sizes;
  double ssw = 0.0;
  double total = 0.0;
  for (std::vector<double> values : groups) {
    std::sort(values.begin(), values.end());
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    ssw += ss;
    means.push_back(m);
    sizes.push_back(static_cast<double>(values.size()));
    total += static_cast<double>(values.size());
  }
  double ssb = 0.0;
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = i + 1; j < g; ++j) {
      const double d = means[i] - means[j];
      ssb += sizes[i] * sizes[j] * d * d;
    }
  }
  ssb /= total;
  const double df1 = static_cast<double>(g - 1);
  const double df2 = total - static_cast<double>(g);
  if (df2 < 1.0) throw std::invalid_argument(std::string(test) + ": total sample size must exceed group count");
  if (ssw == 0.0) {
    if (ssb == 0.0) {
      throw std::invalid_argument(std::string(test) + ": zero within- and between-group variance");
    }
    return {std::numeric_limits<double>::infinity(), df1, df2};
  }
  return {(ssb / df1) / (ssw / df2), df1, df2};
}

}  // namespace

std::string_view to_string(TestKind kind) noexcept {
  switch (kind) {
    case TestKind::shapiro_wilk: return "shapiro_wilk";
    case TestKind::levene_median: return "levene_median";
    case TestKind::anova: return "anova";
    case TestKind::kruskal_wallis: return "kruskal_wallis";
  }
  return "unknown";
}

double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean of an empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double quantile(std::span<const double> xs, double q) {
  if (xs.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::vector<double> s(xs.begin(), xs.end());
  std::sort(s.begin(), s.end());
  const double h = (static_cast<double>(s.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (h - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

double median(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("median of an empty sample");
  std::vector<double> s(xs.begin(), xs.end());
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  return n % 2 == 1 ? s[n / 2] : (s[n / 2 - 1] + s[n / 2]) / 2.0;
}

TestResult shapiro_wilk(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 3 || n > 5000) {
    throw std::invalid_argument("Shapiro-Wilk needs 3 <= n <= 5000, got " + std::to_string(n));
  }
  std::vector<double> x(sample.begin(), sample.end());
  for (double v : x) {
    if (!std::isfinite(v)) throw std::invalid_argument("Shapiro-Wilk: non-finite observation");
  }
  std::sort(x.begin(), x.end());
  const double range = x.back() - x.front();
  if (!(range > 0.0)) throw std::invalid_argument("Shapiro-Wilk: zero variance");

  // Half of the antisymmetric coefficient vector, largest first.
  const std::size_t half = n / 2;
  const double an = static_cast<double>(n);
  std::vector<double> a(half);
  if (n == 3) {
    a[0] = std::sqrt(0.5);
  } else {
    static constexpr double c1[] = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
    static constexpr double c2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
    std::vector<double> m(half);
    double summ2 = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
      m[i] = normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
      summ2 += m[i] * m[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = poly(c1, rsn) - m[0] / ssumm2;
    std::size_t first_scaled = 1;
    double fac = 0.0;
    if (n > 5) {
      const double a2 = -m[1] / ssumm2 + poly(c2, rsn);
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
      a[1] = a2;
      first_scaled = 2;
    } else {
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
    }
    a[0] = a1;
    for (std::size_t i = first_scaled; i < half; ++i) a[i] = -m[i] / fac;
  }

  // W as the squared correlation between the ordered sample and the full
  // coefficient vector; the data are scaled by the range for stability.
  std::vector<double> full(n, 0.0);
  for (std::size_t i = 0; i < half; ++i) {
    full[i] = -a[i];
    full[n - 1 - i] = a[i];
  }
  const double sa = std::accumulate(full.begin(), full.end(), 0.0) / an;
  double sx = 0.0;
  for (double v : x) sx += v / range;
  sx /= an;
  double ssa = 0.0, ssx = 0.0, sax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double asa = full[i] - sa;
    const double xsx = x[i] / range - sx;
    ssa += asa * asa;
    ssx += xsx * xsx;
    sax += asa * xsx;
  }
  const double ssassx = std::sqrt(ssa * ssx);
  const double w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);
  const double w = std::min(1.0 - w1, 1.0);

  double pw = 1.0;
  if (n == 3) {
    constexpr double pi6 = 1.90985931710274;  // 6 / pi
    constexpr double stqr = 1.04719755119660;  // pi / 3
    pw = std::clamp(pi6 * (std::asin(std::sqrt(w)) - stqr), 0.0, 1.0);
  } else if (w1 <= 0.0) {
    pw = 1.0;
  } else {
    static constexpr double g[] = {-2.273, 0.459};
    static constexpr double c3[] = {0.544, -0.39978, 0.025054, -6.714e-4};
    static constexpr double c4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
    static constexpr double c5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
    static constexpr double c6[] = {-0.4803, -0.082676, 0.0030302};
    double y = std::log(w1);
    double mu = 0.0;
    double sigma = 1.0;
    bool done = false;
    if (n <= 11) {
      const double gamma = poly(g, an);
      if (y >= gamma) {
        pw = 1e-99;
        done = true;
      } else {
        y = -std::log(gamma - y);
        mu = poly(c3, an);
        sigma = std::exp(poly(c4, an));
      }
    } else {
      const double lx = std::log(an);
      mu = poly(c5, lx);
      sigma = std::exp(poly(c6, lx));
    }
    if (!done) pw = normal_upper_tail((y - mu) / sigma);
  }
  return {TestKind::shapiro_wilk, w, {}, std::clamp(pw, 0.0, 1.0), {}};
}

TestResult levene_median(std::span<const SampleGroup> groups) {
  check_groups(groups, 2, "Levene");
  std::vector<std::vector<double>> deviations;
  for (const SampleGroup& g : groups) {
    const double med = median(g.values);
    std::vector<double> z;
    for (double v : g.values) z.push_back(std::abs(v - med));
    deviations.push_back(std::move(z));
  }
  const FStatistic f = one_way_f(deviations, "Levene");
  return {TestKind::levene_median, f.f, {f.df1, f.df2}, f_upper_tail(f.f, f.df1, f.df2), {}};
}

TestResult anova_oneway(std::span<const SampleGroup> groups) {
  check_groups(groups, 2, "ANOVA");
  std::vector<std::vector<double>> values;
  for (const SampleGroup& g : groups) values.push_back(g.values);
  const FStatistic f = one_way_f(values, "ANOVA");
  return {TestKind::anova, f.f, {f.df1, f.df2}, f_upper_tail(f.f, f.df1, f.df2), {}};
}

TestResult kruskal_wallis(std::span<const SampleGroup> groups) {
  check_groups(groups, 1, "Kruskal-Wallis");
  struct Obs {
    double value;
    std::size_t group;
  };
  std::vector<Obs> all;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    for (double v : groups[gi].values) all.push_back({v, gi});
  }
  const std::size_t n = all.size();
  if (n < 3) throw std::invalid_argument("Kruskal-Wallis needs at least 3 observations");
  std::sort(all.begin(), all.end(), [](const Obs& a, const Obs& b) { return a.value < b.value; });

  // Mid-ranks; rank sums stay exact (multiples of 1/2).
  std::vector<double> rank_sum(groups.size(), 0.0);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && all[j].value == all[i].value) ++j;
    const double t = static_cast<double>(j - i);
    const double mid = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t q = i; q < j; ++q) rank_sum[all[q].group] += mid;
    tie_term += t * t * t - t;
    i = j;
  }
  const double nn = static_cast<double>(n);
  const double correction = 1.0 - tie_term / (nn * nn * nn - nn);
  if (correction <= 0.0) throw std::invalid_argument("Kruskal-Wallis: all observations are identical");
  double s = 0.0;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    s += rank_sum[gi] * rank_sum[gi] / static_cast<double>(groups[gi].values.size());
  }
  const double h = std::max(0.0, (12.0 / (nn * (nn + 1.0)) * s - 3.0 * (nn + 1.0)) / correction);
  const double df = static_cast<double>(groups.size() - 1);
  return {TestKind::kruskal_wallis, h, {df}, chi2_upper_tail(h, df), {}};
}

PipelineResult run_pipeline(std::span<const SampleGroup> groups, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  check_groups(groups, 3, "pipeline");
  PipelineResult out;
  out.normality_ok = true;
  for (const SampleGroup& g : groups) {
    TestResult r = shapiro_wilk(g.values);
    r.label = g.label;
    if (r.p_value < alpha) out.normality_ok = false;
    out.gate_results.push_back(std::move(r));
  }
  TestResult lev = levene_median(groups);
  out.equivariance_ok = lev.p_value >= alpha;
  out.gate_results.push_back(lev);

  if (out.normality_ok && out.equivariance_ok) {
    out.test_used = TestKind::anova;
    out.comparison = anova_oneway(groups);
  } else {
    out.test_used = TestKind::kruskal_wallis;
    out.comparison = kruskal_wallis(groups);
    if (!out.equivariance_ok) {
      out.warnings.push_back("equal-variance assumption rejected (Levene p = " + std::to_string(lev.p_value) +
                             " < alpha); Kruskal-Wallis compares distributions, not only medians");
    }
  }
  return out;
}

}  // namespace pcredit::stats
