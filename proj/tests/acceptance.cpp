// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pcredit/io/dataset.hpp"
#include "pcredit/metrics.hpp"
#include "pcredit/mnk/oracle.hpp"
#include "pcredit/rank_overlap.hpp"
#include "pcredit/rng.hpp"
#include "pcredit/stats.hpp"
#include "support/oracles.hpp"

using namespace pcredit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

overlap::RankList list_of(const std::vector<std::string>& names) {
  std::vector<ActionId> ids;
  for (const auto& n : names) ids.emplace_back(n);
  return overlap::RankList(std::move(ids));
}

std::vector<std::string> squares_9x4() {
  std::vector<std::string> out;
  for (int c = 0; c < 9; ++c)
    for (int r = 0; r < 4; ++r) out.push_back(mnk::SquareId{c, r}.to_string());
  return out;
}

std::vector<std::string> shuffled(Rng& rng, std::vector<std::string> v) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
  return v;
}

Outcome worked_loss_values() {
  const auto t0 = Clock::now();
  const DecisionValues a = oracle::make_values("P1", {{"F2", 0.2118}, {"E2", 0.2009}, {"B3", -0.4}}, "F2");
  const DecisionValues b = oracle::make_values("P2", {{"F2", 0.2438}, {"E2", 0.2011}, {"B3", -0.4}}, "F2");
  const double lv_a = metrics::loss_in_value(a, ActionId("E2"));
  const double lv_b = metrics::loss_in_value(b, ActionId("E2"));
  const auto lr_a = metrics::loss_in_rank(a, ActionId("E2"));
  const auto lr_b = metrics::loss_in_rank(b, ActionId("E2"));
  // Decimal inputs are not exact in binary; the subtraction is exact to a
  // few ulps of the operands.
  const bool ok = std::abs(lv_a - 0.0109) < 1e-15 && std::abs(lv_b - 0.0427) < 1e-15 && lr_a == 1 && lr_b == 1;
  return {ok, "LV = " + fmt(lv_a, 17) + ", " + fmt(lv_b, 17) + "; LR = " + std::to_string(lr_a) + ", " +
                  std::to_string(lr_b) + "; " + fmt(seconds_since(t0) * 1e3, 3) + " ms"};
}

Outcome prefix_law() {
  const auto t0 = Clock::now();
  Rng rng(1);
  const auto pool = squares_9x4();
  double worst = 0.0;
  std::size_t pairs = 0;
  for (std::size_t len = 2; len <= 36; ++len) {
    for (int rep = 0; rep < 3; ++rep) {
      auto t = shuffled(rng, pool);
      t.resize(len);
      const overlap::RankList tl = list_of(t);
      for (std::size_t s = 1; s <= len; ++s) {
        const overlap::RankList sl = list_of({t.begin(), t.begin() + static_cast<std::ptrdiff_t>(s)});
        for (double p : {0.5, 0.9, 0.98}) {
          worst = std::max(worst, std::abs(overlap::mrbo_ext(sl, tl, p) - 1.0));
          ++pairs;
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-12 && secs < 1.0,
          std::to_string(pairs) + " prefix pairs, max |mrbo - 1| = " + fmt(worst, 3) + ", " + fmt(secs, 3) + " s"};
}

Outcome table_cell() {
  const auto t = squares_9x4();
  const double got = overlap::mrbo_ext(list_of({t[0], t[2]}), list_of(t), 0.9);
  const double ref = static_cast<double>(oracle::mrbo_series({t[0], t[2]}, t, 0.9L));
  const bool ok = std::abs(got - 0.955) <= 5e-4 && std::abs(got - ref) < 1e-12;
  return {ok, "mrbo = " + fmt(got, 8) + ", series oracle = " + fmt(ref, 8)};
}

Outcome dominance() {
  Rng rng(4);
  const auto pool = squares_9x4();
  std::size_t violations = 0, equal_len = 0;
  double worst_eq = 0.0;
  for (int i = 0; i < 10000; ++i) {
    auto s = shuffled(rng, pool);
    auto t = shuffled(rng, pool);
    s.resize(1 + rng.below(36));
    t.resize(1 + rng.below(36));
    if (i % 5 == 0) {
      t = shuffled(rng, pool);
      t.resize(s.size());
    }
    if (s.size() > t.size()) std::swap(s, t);
    const double p = rng.uniform(0.05, 0.99);
    const double m = overlap::mrbo_ext(list_of(s), list_of(t), p);
    const double r = overlap::rbo_ext(list_of(s), list_of(t), {p, t.size()});
    if (m < r) ++violations;
    if (s.size() == t.size()) {
      ++equal_len;
      worst_eq = std::max(worst_eq, std::abs(m - r));
    }
  }
  return {violations == 0 && worst_eq <= 1e-12 && equal_len > 0,
          "10000 pairs, " + std::to_string(violations) + " with mrbo < rbo; " + std::to_string(equal_len) +
              " equal-length pairs, max |mrbo - rbo| = " + fmt(worst_eq, 3)};
}

Outcome grading() {
  std::vector<std::pair<std::string, double>> vals;
  const auto names = squares_9x4();
  for (std::size_t i = 0; i < names.size(); ++i) vals.emplace_back(names[i], -static_cast<double>(i));
  const DecisionValues v = oracle::make_values("P1", vals, names[0]);
  const auto scale = metrics::GradeScale::letter_default();
  std::size_t wrong = 0;
  for (std::size_t r = 1; r <= 36; ++r) {
    const char* expected = r <= 4 ? "A" : r <= 8 ? "B" : r <= 12 ? "C" : r <= 16 ? "D" : "F";
    if (metrics::discretized_loss_in_rank(v, ActionId(names[r - 1]), scale) != expected) ++wrong;
  }
  return {wrong == 0, "36 ranks checked, " + std::to_string(wrong) + " mismatches"};
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  const mnk::BoardConfig cfg{3, 3, 3};
  std::vector<mnk::Board> frontier = {mnk::new_game(cfg)};
  std::set<std::vector<mnk::Cell>> seen;
  std::size_t positions = 0, squares = 0, mismatches = 0;
  for (int ply = 0; ply <= 4; ++ply) {
    std::vector<mnk::Board> next;
    for (const mnk::Board& b : frontier) {
      if (!seen.insert(b.squares().unpack()).second) continue;
      if (b.status().outcome != mnk::Outcome::ongoing) continue;
      ++positions;
      oracle::Grid g{3, 3, 3, std::vector<int>(9, 0)};
      for (int i = 0; i < 9; ++i) {
        const mnk::SquareId sq = b.square_at(i);
        g.at(sq.col, sq.row) = static_cast<int>(b.at(sq));
      }
      const DecisionValues values = mnk::value_oracle(b, mnk::AgentSpec::make_exhaustive());
      const auto counts = mnk::exhaustive_outcome_counts(b);
      // Best (win - loss) numerator; all squares share one denominator.
      std::int64_t best = INT64_MIN;
      std::string best_square;
      for (const auto& sc : counts) {
        const auto ref = oracle::brute_force_counts(g, static_cast<int>(b.to_move()), sc.square.col, sc.square.row);
        const auto total = static_cast<double>(ref.win + ref.loss + ref.draw);
        const OutcomeTriple& t = *values.entry(sc.square.action()).outcome;
        const auto adv = static_cast<std::int64_t>(ref.win) - static_cast<std::int64_t>(ref.loss);
        const bool same = values.value_of(sc.square.action()) == static_cast<double>(adv) / total &&
                          sc.counts.win == ref.win && sc.counts.loss == ref.loss && sc.counts.draw == ref.draw &&
                          t.win == static_cast<double>(ref.win) / total &&
                          t.loss == static_cast<double>(ref.loss) / total &&
                          t.draw == static_cast<double>(ref.draw) / total;
        mismatches += !same;
        ++squares;
        if (adv > best) {
          best = adv;
          best_square = sc.square.to_string();
        }
      }
      mismatches += values.chosen().str() != best_square;
      for (const auto& sq : b.empty_squares()) next.push_back(mnk::apply_move(b, sq));
    }
    frontier = std::move(next);
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && positions > 0 && secs < 120.0,
          std::to_string(positions) + " positions, " + std::to_string(squares) + " squares, " +
              std::to_string(mismatches) + " mismatches, " + fmt(secs, 3) + " s"};
}

const nlohmann::json& golden() {
  static const nlohmann::json doc = [] {
    std::ifstream in(PCREDIT_GOLDEN_DIR "/stats_golden.json");
    return nlohmann::json::parse(in);
  }();
  return doc;
}

std::vector<stats::SampleGroup> groups_of(const nlohmann::json& f) {
  std::vector<stats::SampleGroup> out;
  for (const auto& g : f.at("groups")) out.push_back({g.at("label"), g.at("values").get<std::vector<double>>()});
  return out;
}

Outcome stats_cross_validation() {
  std::size_t fixtures = 0, failures = 0;
  auto rel = [](double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); };
  for (const auto& f : golden().at("shapiro_wilk")) {
    const auto r = stats::shapiro_wilk(f.at("values").get<std::vector<double>>());
    failures += !(std::abs(r.statistic - f.at("statistic").get<double>()) <= 1e-4 &&
                  std::abs(r.p_value - f.at("p_value").get<double>()) <= 1e-3);
    ++fixtures;
  }
  const std::pair<const char*, stats::TestResult (*)(std::span<const stats::SampleGroup>)> tests[] = {
      {"levene_median", stats::levene_median}, {"anova", stats::anova_oneway}, {"kruskal_wallis", stats::kruskal_wallis}};
  for (const auto& [name, fn] : tests) {
    for (const auto& f : golden().at(name)) {
      const auto r = fn(groups_of(f));
      failures += !(rel(r.statistic, f.at("statistic")) <= 1e-6 &&
                    std::abs(r.p_value - f.at("p_value").get<double>()) <= 1e-3);
      ++fixtures;
    }
  }

  // Null calibration: one pooled continuous dataset, permuted into 4 groups.
  Rng rng(77);
  std::vector<double> pooled(40);
  for (double& x : pooled) x = rng.uniform(-1.0, 1.0) + rng.uniform();
  std::vector<double> pvals;
  for (int rep = 0; rep < 2000; ++rep) {
    for (std::size_t i = pooled.size(); i > 1; --i) std::swap(pooled[i - 1], pooled[rng.below(i)]);
    std::vector<stats::SampleGroup> groups(4);
    for (std::size_t i = 0; i < pooled.size(); ++i) groups[i % 4].values.push_back(pooled[i]);
    pvals.push_back(stats::kruskal_wallis(groups).p_value);
  }
  std::sort(pvals.begin(), pvals.end());
  double ks = 0.0;
  const double n = static_cast<double>(pvals.size());
  for (std::size_t i = 0; i < pvals.size(); ++i) {
    ks = std::max({ks, static_cast<double>(i + 1) / n - pvals[i], pvals[i] - static_cast<double>(i) / n});
  }
  return {failures == 0 && fixtures == 20 && ks <= 0.05,
          std::to_string(fixtures) + " golden fixtures, " + std::to_string(failures) +
              " outside tolerance; null calibration KS distance = " + fmt(ks, 4)};
}

Outcome pipeline_gating() {
  std::string seen;
  bool ok = true;
  for (const auto& f : golden().at("pipeline")) {
    const auto r = stats::run_pipeline(groups_of(f));
    std::string got(stats::to_string(r.test_used));
    if (!r.warnings.empty()) got += "_warning";
    ok = ok && got == f.at("expected").get<std::string>();
    seen += (seen.empty() ? "" : ", ") + f.at("name").get<std::string>() + " -> " + got;
  }
  return {ok, seen};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PCREDIT_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome disclosure_and_determinism() {
  std::ifstream readme(PCREDIT_SOURCE_DIR "/README.md");
  std::stringstream text;
  text << readme.rdbuf();
  const bool documented = text.str().find("cannot be reproduced") != std::string::npos;

  std::vector<std::map<std::string, std::string>> runs;
  for (const char* tag : {"a", "b"}) {
    const fs::path dir = fs::temp_directory_path() / (std::string("pcredit_acceptance_") + tag);
    fs::remove_all(dir);
    const std::string d = dir.string();
    if (run_cli("simulate --out-dir " + d + " --seed 2024 --participants 86 --treatments 8 --rollouts 64") != 0 ||
        run_cli("metrics --bundle " + d + " --out-dir " + d + " --format csv,markdown,svg") != 0) {
      return {false, "CLI run failed"};
    }
    std::map<std::string, std::string> files;
    for (const auto& e : fs::directory_iterator(dir)) files[e.path().filename().string()] = io::read_file(e.path());
    runs.push_back(std::move(files));
  }
  const bool identical = runs[0] == runs[1] && runs[0].size() >= 8;
  return {documented && identical, std::string("README disclosure ") + (documented ? "present" : "missing") + "; " +
                                       std::to_string(runs[0].size()) + " output files " +
                                       (identical ? "byte-identical" : "differ") + " across two seeded runs"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Outcome (*fn)();
  };
  const Criterion criteria[] = {
      {1, "worked LV/LR values", worked_loss_values},
      {2, "mRBO prefix law", prefix_law},
      {3, "table cell 0.955", table_cell},
      {4, "mRBO dominance and equality", dominance},
      {5, "grading fidelity", grading},
      {6, "oracle equivalence on 3-3-3", oracle_equivalence},
      {7, "stats cross-validation", stats_cross_validation},
      {8, "pipeline gating", pipeline_gating},
      {9, "non-reproduction disclosure and determinism", disclosure_and_determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d [%s]: %s (%s)\n", c.id, c.name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
