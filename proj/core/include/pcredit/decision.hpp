#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pcredit/action_id.hpp"

namespace pcredit {

/// Outcome estimate for the mover taking one action: (win, loss, draw).
struct OutcomeTriple {
  double win = 0.0;
  double loss = 0.0;
  double draw = 0.0;

  /// Flattened advantage, win - loss.
  double advantage() const noexcept { return win - loss; }
  bool sums_to_one(double tolerance = 1e-9) const noexcept;

  friend bool operator==(const OutcomeTriple&, const OutcomeTriple&) = default;
};

struct ActionValue {
  ActionId action;
  double value = 0.0;
  std::optional<OutcomeTriple> outcome;

  friend bool operator==(const ActionValue&, const ActionValue&) = default;
};

/// The agent's value table for one decision, V(a) for every available action,
/// together with the action the agent actually took.
///
/// Entries are kept in canonical ActionId order regardless of input order.
/// Construction validates: at least one entry, unique actions, finite values,
/// chosen action present.
class DecisionValues {
 public:
  DecisionValues(std::string decision_id, std::vector<ActionValue> entries, ActionId chosen);

  const std::string& decision_id() const noexcept { return decision_id_; }
  const std::vector<ActionValue>& entries() const noexcept { return entries_; }
  const ActionId& chosen() const noexcept { return chosen_; }
  std::size_t size() const noexcept { return entries_.size(); }

  bool contains(const ActionId& action) const;
  /// Throws std::out_of_range for an action outside the table.
  const ActionValue& entry(const ActionId& action) const;
  double value_of(const ActionId& action) const { return entry(action).value; }
  double chosen_value() const { return value_of(chosen_); }
  /// Position of `action` in entries(); throws std::out_of_range.
  std::size_t index_of(const ActionId& action) const;

  friend bool operator==(const DecisionValues& a, const DecisionValues& b) {
    return a.decision_id_ == b.decision_id_ && a.entries_ == b.entries_ && a.chosen_ == b.chosen_;
  }

 private:
  std::string decision_id_;
  std::vector<ActionValue> entries_;
  ActionId chosen_;
  std::unordered_map<ActionId, std::size_t> index_;
};

/// Highest-valued action; ties go to the canonically smallest ActionId.
ActionId argmax_action(const DecisionValues& values);

/// One participant's predicted action for one decision.
struct PredictionRecord {
  std::string participant_id;
  std::string treatment;
  std::string decision_id;
  ActionId predicted;

  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

}  // namespace pcredit
