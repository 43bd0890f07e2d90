#include "pcredit/decision.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pcredit {

bool OutcomeTriple::sums_to_one(double tolerance) const noexcept {
  return std::abs(win + loss + draw - 1.0) <= tolerance;
}

DecisionValues::DecisionValues(std::string decision_id, std::vector<ActionValue> entries,
                               ActionId chosen)
    : decision_id_(std::move(decision_id)), entries_(std::move(entries)), chosen_(std::move(chosen)) {
  if (entries_.empty()) {
    throw std::invalid_argument("decision '" + decision_id_ + "' has no actions");
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const ActionValue& a, const ActionValue& b) { return a.action < b.action; });
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const ActionValue& e = entries_[i];
    if (!std::isfinite(e.value)) {
      throw std::invalid_argument("decision '" + decision_id_ + "': non-finite value for " +
                                  e.action.str());
    }
    if (!index_.emplace(e.action, i).second) {
      throw std::invalid_argument("decision '" + decision_id_ + "': duplicate action " +
                                  e.action.str());
    }
  }
  if (!index_.contains(chosen_)) {
    throw std::invalid_argument("decision '" + decision_id_ + "': chosen action " + chosen_.str() +
                                " is not in the value table");
  }
}

bool DecisionValues::contains(const ActionId& action) const { return index_.contains(action); }

std::size_t DecisionValues::index_of(const ActionId& action) const {
  auto it = index_.find(action);
  if (it == index_.end()) {
    throw std::out_of_range("decision '" + decision_id_ + "': unknown action " + action.str());
  }
  return it->second;
}

const ActionValue& DecisionValues::entry(const ActionId& action) const {
  return entries_[index_of(action)];
}

ActionId argmax_action(const DecisionValues& values) {
  // Entries are canonically ordered, so keeping the first strict maximum
  // implements the tie-break.
  const ActionValue* best = &values.entries().front();
  for (const ActionValue& e : values.entries()) {
    if (e.value > best->value) best = &e;
  }
  return best->action;
}

}  // namespace pcredit
