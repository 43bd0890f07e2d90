#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pcredit/action_id.hpp"
#include "pcredit/decision.hpp"

namespace pcredit::overlap {

/// Strictly ordered list of distinct actions, most preferred first.
class RankList {
 public:
  RankList() = default;
  /// Throws std::invalid_argument on duplicate actions.
  explicit RankList(std::vector<ActionId> items);

  const std::vector<ActionId>& items() const noexcept { return items_; }
  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }
  const ActionId& operator[](std::size_t i) const { return items_[i]; }

  friend bool operator==(const RankList&, const RankList&) = default;

 private:
  std::vector<ActionId> items_;
};

inline constexpr double kDefaultPersistence = 0.9;

struct RboParams {
  double p = kDefaultPersistence;
  std::size_t k = 1;
};

/// Agent preference list: all actions by descending value, ties canonical.
RankList agent_ranklist(const DecisionValues& values);

/// Group preference list from vote counts; zero-vote actions are dropped and
/// equal counts are ordered canonically. Throws on an empty group.
RankList vote_ranklist(std::span<const PredictionRecord> predictions);

/// Extrapolated RBO at depth k:
///   X_k / k * p^k + (1 - p) / p * sum_{d=1..k} X_d / d * p^d
/// where X_d = |S[:d] ∩ T[:d]|.
double rbo_ext(const RankList& s, const RankList& t, const RboParams& params);

/// Modified RBO for lists of unequal length. S is the shorter list
/// (arguments are swapped if needed) and k = |T|:
///   X_k / |S| * p^k + (1 - p) / p * sum_{d=1..k} X_d / min(|S|, d) * p^d
/// Equals 1 exactly when S is a prefix of T.
double mrbo_ext(const RankList& s, const RankList& t, double p = kDefaultPersistence);

using CellKey = std::pair<std::string, std::string>;  // (treatment, decision)

struct CellKeyLess {
  bool operator()(const CellKey& a, const CellKey& b) const;
};

using MrboTable = std::map<CellKey, double, CellKeyLess>;

/// mRBO of each treatment's vote list against the agent list, for every
/// (treatment, decision). Throws when a treatment has no predictions for a
/// decision or a prediction names an unknown decision.
MrboTable mrbo_table(const std::map<std::string, std::vector<PredictionRecord>, NaturalLess>& groups,
                     std::span<const DecisionValues> tables, double p = kDefaultPersistence);

}  // namespace pcredit::overlap
