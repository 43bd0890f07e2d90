#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "pcredit/rank_overlap.hpp"
#include "pcredit/rng.hpp"
#include "support/oracles.hpp"

using namespace pcredit;
using namespace pcredit::overlap;

namespace {

RankList list_of(const std::vector<std::string>& names) {
  std::vector<ActionId> ids;
  for (const auto& n : names) ids.emplace_back(n);
  return RankList(std::move(ids));
}

std::vector<std::string> names(int count, const std::string& prefix = "s") {
  std::vector<std::string> out;
  for (int i = 1; i <= count; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

std::vector<std::string> random_list(Rng& rng, const std::vector<std::string>& pool, std::size_t len) {
  std::vector<std::string> p = pool;
  for (std::size_t i = 0; i < len; ++i) std::swap(p[i], p[i + rng.below(p.size() - i)]);
  p.resize(len);
  return p;
}

// All ordered selections of length `len` from pool.
void arrangements(const std::vector<std::string>& pool, std::size_t len, std::vector<std::string>& cur,
                  std::vector<bool>& used, std::vector<std::vector<std::string>>& out) {
  if (cur.size() == len) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    cur.push_back(pool[i]);
    arrangements(pool, len, cur, used, out);
    cur.pop_back();
    used[i] = false;
  }
}

}  // namespace

TEST(RankList, RejectsDuplicates) {
  EXPECT_THROW(list_of({"A1", "B1", "A1"}), std::invalid_argument);
}

TEST(AgentRanklist, Examples) {
  EXPECT_EQ(agent_ranklist(oracle::make_values("d", {{"A1", 0.3}, {"B1", 0.5}, {"C1", 0.1}}, "B1")),
            list_of({"B1", "A1", "C1"}));
  EXPECT_EQ(agent_ranklist(oracle::make_values("DP1", {{"SW", -313}, {"NW", -28}, {"NE", 31}, {"SE", -284}}, "NE")),
            list_of({"NE", "NW", "SE", "SW"}));
  EXPECT_EQ(agent_ranklist(oracle::make_values("d", {{"C1", 0}, {"A2", 0}, {"A1", 0}}, "A1")),
            list_of({"A1", "A2", "C1"}));
}

TEST(VoteRanklist, Examples) {
  auto rec = [](int i, const char* a) { return PredictionRecord{"p" + std::to_string(i), "T", "d", ActionId(a)}; };
  std::vector<PredictionRecord> ten;
  for (int i = 0; i < 10; ++i) ten.push_back(rec(i, "F2"));
  EXPECT_EQ(vote_ranklist(ten), list_of({"F2"}));

  std::vector<PredictionRecord> split;
  for (int i = 0; i < 7; ++i) split.push_back(rec(i, "E1"));
  for (int i = 7; i < 10; ++i) split.push_back(rec(i, "C3"));
  EXPECT_EQ(vote_ranklist(split), list_of({"E1", "C3"}));

  const std::vector<PredictionRecord> tie = {rec(1, "B1"), rec(2, "A1"), rec(3, "A1"), rec(4, "B1")};
  EXPECT_EQ(vote_ranklist(tie), list_of({"A1", "B1"}));
  EXPECT_THROW(vote_ranklist(std::vector<PredictionRecord>{}), std::invalid_argument);
}

TEST(Rbo, IdentityAndDisjoint) {
  for (double p : {0.1, 0.5, 0.9, 0.99}) {
    for (int k : {1, 2, 7, 36}) {
      const RankList l = list_of(names(k));
      EXPECT_NEAR(rbo_ext(l, l, {p, static_cast<std::size_t>(k)}), 1.0, 1e-12);
      EXPECT_EQ(rbo_ext(l, list_of(names(k, "t")), {p, static_cast<std::size_t>(k)}), 0.0);
      EXPECT_EQ(mrbo_ext(l, list_of(names(k + 3, "t")), p), 0.0);
    }
  }
}

TEST(Rbo, ParameterValidation) {
  const RankList l = list_of({"A1"});
  EXPECT_THROW(rbo_ext(l, l, {0.0, 1}), std::invalid_argument);
  EXPECT_THROW(rbo_ext(l, l, {1.0, 1}), std::invalid_argument);
  EXPECT_THROW(rbo_ext(l, l, {0.5, 0}), std::invalid_argument);
  EXPECT_THROW(rbo_ext(RankList{}, l, {0.5, 1}), std::invalid_argument);
  EXPECT_THROW(mrbo_ext(l, RankList{}, 0.5), std::invalid_argument);
  EXPECT_THROW(mrbo_ext(l, l, 1.5), std::invalid_argument);
}

TEST(Rbo, TopSquareAgainstFullList) {
  const auto t = names(36);
  const double v = rbo_ext(list_of({t[0]}), list_of(t), {0.9, 36});
  EXPECT_NEAR(v, 0.2559, 1e-4);
  EXPECT_NEAR(v, static_cast<double>(oracle::rbo_series({t[0]}, t, 0.9L, 36)), 1e-13);
}

TEST(Mrbo, BestAndThirdBestVotes) {
  const auto t = names(36);
  const double v = mrbo_ext(list_of({t[0], t[2]}), list_of(t), 0.9);
  EXPECT_NEAR(v, 0.955, 5e-4);
  EXPECT_NEAR(v, static_cast<double>(oracle::mrbo_series({t[0], t[2]}, t, 0.9L)), 1e-13);
  EXPECT_EQ(mrbo_ext(list_of(t), list_of({t[0], t[2]}), 0.9), v);
}

TEST(Mrbo, MatchesSeriesOnRandomPairs) {
  Rng rng(10);
  const auto pool = names(20);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto s = random_list(rng, pool, 1 + rng.below(20));
    const auto t = random_list(rng, pool, 1 + rng.below(20));
    const double p = rng.uniform(0.05, 0.98);
    EXPECT_NEAR(mrbo_ext(list_of(s), list_of(t), p), static_cast<double>(oracle::mrbo_series(s, t, p)), 1e-12);
    const std::size_t k = 1 + rng.below(25);
    EXPECT_NEAR(rbo_ext(list_of(s), list_of(t), {p, k}), static_cast<double>(oracle::rbo_series(s, t, p, k)), 1e-12);
  }
}

// mrbo = 1 exactly when the shorter list is a prefix of the longer one.
TEST(Mrbo, PrefixLawExhaustive) {
  const std::vector<std::string> pool = {"a1", "a2", "a3", "a4", "a5", "a6"};
  std::vector<std::vector<std::string>> lists;
  for (std::size_t len = 1; len <= pool.size(); ++len) {
    std::vector<std::string> cur;
    std::vector<bool> used(pool.size(), false);
    arrangements(pool, len, cur, used, lists);
  }
  const double p = 0.9;
  std::size_t pairs = 0;
  for (const auto& t : lists) {
    for (const auto& s : lists) {
      if (s.size() > t.size()) continue;
      const bool prefix = std::equal(s.begin(), s.end(), t.begin());
      const double ref = static_cast<double>(oracle::mrbo_series(s, t, p));
      const double got = mrbo_ext(list_of(s), list_of(t), p);
      EXPECT_EQ(std::abs(ref - 1.0) < 1e-12, prefix);
      EXPECT_EQ(std::abs(got - 1.0) < 1e-12, prefix);
      ++pairs;
    }
  }
  EXPECT_GT(pairs, 1000000u);
}

TEST(Mrbo, BoundsDominanceAndEquality) {
  Rng rng(77);
  const auto pool = names(12);
  for (int trial = 0; trial < 3000; ++trial) {
    auto s = random_list(rng, pool, 1 + rng.below(12));
    auto t = random_list(rng, pool, 1 + rng.below(12));
    if (s.size() > t.size()) std::swap(s, t);
    const double p = rng.uniform(0.05, 0.98);
    const double m = mrbo_ext(list_of(s), list_of(t), p);
    const double r = rbo_ext(list_of(s), list_of(t), {p, t.size()});
    EXPECT_GE(m, 0.0);
    EXPECT_LE(m, 1.0);
    EXPECT_GE(m, r - 1e-15);
    if (s.size() == t.size()) EXPECT_NEAR(m, r, 1e-12);
  }
}

TEST(Mrbo, RelabelingInvariance) {
  Rng rng(31);
  const auto pool = names(15);
  for (int trial = 0; trial < 500; ++trial) {
    const auto s = random_list(rng, pool, 1 + rng.below(15));
    const auto t = random_list(rng, pool, 1 + rng.below(15));
    const auto image = random_list(rng, names(15, "x"), 15);  // bijection pool[i] -> image[i]
    auto relabel = [&](const std::vector<std::string>& l) {
      std::vector<std::string> out;
      for (const auto& x : l) out.push_back(image[static_cast<std::size_t>(std::stoi(x.substr(1)) - 1)]);
      return out;
    };
    const double p = rng.uniform(0.1, 0.95);
    EXPECT_NEAR(mrbo_ext(list_of(s), list_of(t), p), mrbo_ext(list_of(relabel(s)), list_of(relabel(t)), p), 1e-14);
    EXPECT_NEAR(rbo_ext(list_of(s), list_of(t), {p, 9}), rbo_ext(list_of(relabel(s)), list_of(relabel(t)), {p, 9}),
                1e-14);
  }
}

TEST(MrboTable, CellsAndErrors) {
  std::vector<DecisionValues> tables;
  for (int d = 1; d <= 4; ++d) {
    std::vector<std::pair<std::string, double>> vals;
    for (int i = 0; i < 36; ++i) vals.emplace_back("s" + std::to_string(i + 1), -i * 0.01 * d);
    tables.push_back(oracle::make_values("P" + std::to_string(d), vals, "s1"));
  }
  std::map<std::string, std::vector<PredictionRecord>, NaturalLess> groups;
  for (int g = 1; g <= 8; ++g) {
    const std::string t = "T" + std::to_string(g);
    for (int i = 0; i < 5; ++i) {
      for (int d = 1; d <= 4; ++d) {
        const std::string a = g == 1 ? "s1" : "s" + std::to_string(1 + (i + g + d) % 36);
        groups[t].push_back({t + "p" + std::to_string(i), t, "P" + std::to_string(d), ActionId(a)});
      }
    }
  }
  const MrboTable cells = mrbo_table(groups, tables, 0.9);
  EXPECT_EQ(cells.size(), 32u);
  for (int d = 1; d <= 4; ++d) EXPECT_NEAR(cells.at({"T1", "P" + std::to_string(d)}), 1.0, 1e-12);
  for (const auto& [key, v] : cells) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  auto bad = groups;
  bad["T9"].push_back({"q", "T9", "P7", ActionId("s1")});
  EXPECT_THROW(mrbo_table(bad, tables, 0.9), std::invalid_argument);
}
