#include "pcredit/rank_overlap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "pcredit/metrics.hpp"

namespace pcredit::overlap {
namespace {

void check_inputs(const RankList& s, const RankList& t, double p) {
  if (s.empty() || t.empty()) throw std::invalid_argument("rank lists must be non-empty");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("persistence p must lie in (0, 1)");
}

// overlap[d - 1] = |S[:d] ∩ T[:d]| for d = 1..depth. Past the end of a list
// its prefix is the whole list.
std::vector<std::size_t> prefix_overlaps(const RankList& s, const RankList& t, std::size_t depth) {
  std::vector<std::size_t> overlap(depth);
  std::unordered_set<ActionId> seen_s;
  std::unordered_set<ActionId> seen_t;
  std::size_t x = 0;
  for (std::size_t d = 0; d < depth; ++d) {
    const bool has_s = d < s.size();
    const bool has_t = d < t.size();
    if (has_s && has_t && s[d] == t[d]) {
      ++x;
    } else {
      if (has_s && seen_t.contains(s[d])) ++x;
      if (has_t && seen_s.contains(t[d])) ++x;
    }
    if (has_s) seen_s.insert(s[d]);
    if (has_t) seen_t.insert(t[d]);
    overlap[d] = x;
  }
  return overlap;
}

}  // namespace

RankList::RankList(std::vector<ActionId> items) : items_(std::move(items)) {
  std::unordered_set<ActionId> seen;
  for (const ActionId& a : items_) {
    if (!seen.insert(a).second) throw std::invalid_argument("duplicate action in rank list: " + a.str());
  }
}

RankList agent_ranklist(const DecisionValues& values) {
  return RankList(metrics::RankAssignment(values).ordered());
}

RankList vote_ranklist(std::span<const PredictionRecord> predictions) {
  if (predictions.empty()) throw std::invalid_argument("cannot build a vote list from an empty group");
  std::unordered_map<ActionId, std::size_t> votes;
  for (const PredictionRecord& p : predictions) ++votes[p.predicted];
  std::vector<std::pair<ActionId, std::size_t>> tally(votes.begin(), votes.end());
  std::sort(tally.begin(), tally.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<ActionId> items;
  items.reserve(tally.size());
  for (auto& [action, count] : tally) items.push_back(action);
  return RankList(std::move(items));
}

// Both scores are clamped at 1: rounding can carry an exact match a few ulps
// above it.
double rbo_ext(const RankList& s, const RankList& t, const RboParams& params) {
  check_inputs(s, t, params.p);
  if (params.k < 1) throw std::invalid_argument("evaluation depth k must be >= 1");
  const double p = params.p;
  const std::vector<std::size_t> x = prefix_overlaps(s, t, params.k);
  double sum = 0.0;
  double pd = 1.0;
  for (std::size_t d = 1; d <= params.k; ++d) {
    pd *= p;
    sum += static_cast<double>(x[d - 1]) / static_cast<double>(d) * pd;
  }
  const double score = static_cast<double>(x.back()) / static_cast<double>(params.k) * pd + (1.0 - p) / p * sum;
  return std::min(score, 1.0);
}

double mrbo_ext(const RankList& s_in, const RankList& t_in, double p) {
  check_inputs(s_in, t_in, p);
  const bool swap = s_in.size() > t_in.size();
  const RankList& s = swap ? t_in : s_in;
  const RankList& t = swap ? s_in : t_in;
  const std::size_t k = t.size();
  const std::vector<std::size_t> x = prefix_overlaps(s, t, k);
  double sum = 0.0;
  double pd = 1.0;
  for (std::size_t d = 1; d <= k; ++d) {
    pd *= p;
    sum += static_cast<double>(x[d - 1]) / static_cast<double>(std::min(s.size(), d)) * pd;
  }
  const double score = static_cast<double>(x.back()) / static_cast<double>(s.size()) * pd + (1.0 - p) / p * sum;
  return std::min(score, 1.0);
}

bool CellKeyLess::operator()(const CellKey& a, const CellKey& b) const {
  if (auto c = natural_compare(a.first, b.first); c != 0) return c < 0;
  return natural_less(a.second, b.second);
}

MrboTable mrbo_table(const std::map<std::string, std::vector<PredictionRecord>, NaturalLess>& groups,
                     std::span<const DecisionValues> tables, double p) {
  MrboTable out;
  for (const auto& [treatment, records] : groups) {
    std::map<std::string, std::vector<PredictionRecord>, NaturalLess> by_decision;
    for (const PredictionRecord& r : records) by_decision[r.decision_id].push_back(r);
    for (const auto& [decision, _] : by_decision) {
      const bool known = std::any_of(tables.begin(), tables.end(),
                                     [&](const DecisionValues& t) { return t.decision_id() == decision; });
      if (!known) throw std::invalid_argument("no value table for decision '" + decision + "'");
    }
    for (const DecisionValues& table : tables) {
      auto it = by_decision.find(table.decision_id());
      if (it == by_decision.end()) {
        throw std::invalid_argument("treatment '" + treatment + "' has no predictions for decision '" +
                                    table.decision_id() + "'");
      }
      out[{treatment, table.decision_id()}] = mrbo_ext(vote_ranklist(it->second), agent_ranklist(table), p);
    }
  }
  return out;
}

}  // namespace pcredit::overlap
