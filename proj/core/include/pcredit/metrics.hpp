#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pcredit/decision.hpp"

namespace pcredit::metrics {

/// R(a): 1 for the highest value, |A| for the lowest, no gaps. Equal values
/// are ordered by canonical ActionId.
class RankAssignment {
 public:
  explicit RankAssignment(const DecisionValues& values);

  /// Throws std::out_of_range for an unknown action.
  std::int64_t rank_of(const ActionId& action) const;
  /// Actions from rank 1 downward.
  const std::vector<ActionId>& ordered() const noexcept { return ordered_; }
  std::size_t size() const noexcept { return ordered_.size(); }

 private:
  std::string decision_id_;
  std::unordered_map<ActionId, std::int64_t> rank_;
  std::vector<ActionId> ordered_;
};

/// Rank bins mapped to labels. Each bin covers ranks up to and including its
/// threshold; the last bin is unbounded.
class GradeScale {
 public:
  struct Bin {
    std::optional<std::int64_t> max_rank;  // nullopt on the final bin only
    std::string label;
  };

  /// Throws std::invalid_argument unless thresholds strictly increase, the
  /// final bin is unbounded and labels are unique.
  explicit GradeScale(std::vector<Bin> bins);

  /// {4:A, 8:B, 12:C, 16:D, rest:F}.
  static GradeScale letter_default();
  /// Parses "4:A,8:B,12:C,16:D,*:F".
  static GradeScale parse(std::string_view text);

  const std::string& grade(std::int64_t rank) const;
  const std::vector<Bin>& bins() const noexcept { return bins_; }
  std::vector<std::string> labels() const;
  std::string to_string() const;

 private:
  std::vector<Bin> bins_;
};

/// LV = V(chosen) - V(predicted).
double loss_in_value(const DecisionValues& values, const ActionId& predicted);

/// LR = R(predicted) - R(chosen); positive when the prediction ranks below
/// the chosen action.
std::int64_t loss_in_rank(const DecisionValues& values, const ActionId& predicted);
std::int64_t loss_in_rank(const DecisionValues& values, const RankAssignment& ranks,
                          const ActionId& predicted);

/// Grade of R(predicted) under `scale`.
std::string discretized_loss_in_rank(const DecisionValues& values, const ActionId& predicted,
                                     const GradeScale& scale);

/// Mean V(a_i) over the group: sum over actions of (vote count * V(a)) / |P|.
double av_score(std::span<const PredictionRecord> predictions, const DecisionValues& values);

/// Mean R(a_i) over the group, weighted the same way as av_score.
double ar_score(std::span<const PredictionRecord> predictions, const DecisionValues& values);

struct MetricSample {
  std::string participant_id;
  std::string decision_id;
  std::string treatment;
  ActionId predicted;
  double lv = 0.0;
  std::int64_t lr = 0;
  std::int64_t rank = 0;  // R(predicted)
  std::string grade;

  friend bool operator==(const MetricSample&, const MetricSample&) = default;
};

/// One sample per prediction, ordered by (participant, decision) in natural
/// order. Throws std::invalid_argument when a prediction's decision has no
/// value table and std::out_of_range when it names an action outside it.
std::vector<MetricSample> score_dataset(std::span<const PredictionRecord> predictions,
                                        std::span<const DecisionValues> tables,
                                        const GradeScale& scale = GradeScale::letter_default());

}  // namespace pcredit::metrics
