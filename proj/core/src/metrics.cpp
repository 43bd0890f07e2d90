#include "pcredit/metrics.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace pcredit::metrics {

RankAssignment::RankAssignment(const DecisionValues& values) : decision_id_(values.decision_id()) {
  const auto& entries = values.entries();
  std::vector<std::size_t> order(entries.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Entries are canonically ordered already; stability supplies the tie-break.
  std::stable_sort(order.begin(), order.end(), [&entries](std::size_t a, std::size_t b) {
    return entries[a].value > entries[b].value;
  });
  rank_.reserve(entries.size());
  ordered_.reserve(entries.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    rank_.emplace(entries[order[r]].action, static_cast<std::int64_t>(r + 1));
    ordered_.push_back(entries[order[r]].action);
  }
}

std::int64_t RankAssignment::rank_of(const ActionId& action) const {
  auto it = rank_.find(action);
  if (it == rank_.end()) {
    throw std::out_of_range("decision '" + decision_id_ + "': unknown action " + action.str());
  }
  return it->second;
}

GradeScale::GradeScale(std::vector<Bin> bins) : bins_(std::move(bins)) {
  if (bins_.empty()) throw std::invalid_argument("grade scale needs at least one bin");
  std::set<std::string> labels;
  std::int64_t previous = 0;
  for (std::size_t i = 0; i < bins_.size(); ++i) {
    const Bin& b = bins_[i];
    const bool last = i + 1 == bins_.size();
    if (b.label.empty()) throw std::invalid_argument("grade labels must be non-empty");
    if (!labels.insert(b.label).second) {
      throw std::invalid_argument("duplicate grade label '" + b.label + "'");
    }
    if (last) {
      if (b.max_rank) throw std::invalid_argument("final grade bin must be unbounded");
    } else {
      if (!b.max_rank) throw std::invalid_argument("only the final grade bin may be unbounded");
      if (*b.max_rank <= previous) {
        throw std::invalid_argument("grade thresholds must be strictly increasing and >= 1");
      }
      previous = *b.max_rank;
    }
  }
}

GradeScale GradeScale::letter_default() {
  return GradeScale({{4, "A"}, {8, "B"}, {12, "C"}, {16, "D"}, {std::nullopt, "F"}});
}

GradeScale GradeScale::parse(std::string_view text) {
  std::vector<Bin> bins;
  std::stringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("grade bin '" + item + "' is not <max-rank>:<label>");
    }
    const std::string bound = item.substr(0, colon);
    Bin b;
    b.label = item.substr(colon + 1);
    if (bound != "*") {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(bound, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != bound.size() || bound.empty()) {
        throw std::invalid_argument("grade bin bound '" + bound + "' is not an integer or '*'");
      }
      b.max_rank = v;
    }
    bins.push_back(std::move(b));
  }
  return GradeScale(std::move(bins));
}

const std::string& GradeScale::grade(std::int64_t rank) const {
  for (const Bin& b : bins_) {
    if (!b.max_rank || rank <= *b.max_rank) return b.label;
  }
  return bins_.back().label;
}

std::vector<std::string> GradeScale::labels() const {
  std::vector<std::string> out;
  for (const Bin& b : bins_) out.push_back(b.label);
  return out;
}

std::string GradeScale::to_string() const {
  std::string out;
  for (const Bin& b : bins_) {
    if (!out.empty()) out += ',';
    out += (b.max_rank ? std::to_string(*b.max_rank) : std::string("*")) + ":" + b.label;
  }
  return out;
}

double loss_in_value(const DecisionValues& values, const ActionId& predicted) {
  const double predicted_value = values.value_of(predicted);
  return values.chosen_value() - predicted_value;
}

std::int64_t loss_in_rank(const DecisionValues& values, const RankAssignment& ranks,
                          const ActionId& predicted) {
  return ranks.rank_of(predicted) - ranks.rank_of(values.chosen());
}

std::int64_t loss_in_rank(const DecisionValues& values, const ActionId& predicted) {
  return loss_in_rank(values, RankAssignment(values), predicted);
}

std::string discretized_loss_in_rank(const DecisionValues& values, const ActionId& predicted,
                                     const GradeScale& scale) {
  return scale.grade(RankAssignment(values).rank_of(predicted));
}

namespace {

template <typename Weight>
double weighted_group_mean(std::span<const PredictionRecord> predictions, const DecisionValues& values,
                           Weight weight) {
  if (predictions.empty()) throw std::invalid_argument("empty prediction group");
  std::unordered_map<ActionId, std::int64_t> counts;
  for (const PredictionRecord& p : predictions) {
    if (p.decision_id != values.decision_id()) {
      throw std::invalid_argument("prediction for decision '" + p.decision_id +
                                  "' scored against '" + values.decision_id() + "'");
    }
    if (!values.contains(p.predicted)) {
      throw std::out_of_range("decision '" + values.decision_id() + "': unknown action " +
                              p.predicted.str());
    }
    ++counts[p.predicted];
  }
  // Sum over A in canonical order so the result does not depend on input order.
  double total = 0.0;
  for (const ActionValue& e : values.entries()) {
    auto it = counts.find(e.action);
    if (it != counts.end()) total += static_cast<double>(it->second) * weight(e.action);
  }
  return total / static_cast<double>(predictions.size());
}

}  // namespace

double av_score(std::span<const PredictionRecord> predictions, const DecisionValues& values) {
  return weighted_group_mean(predictions, values,
                             [&values](const ActionId& a) { return values.value_of(a); });
}

double ar_score(std::span<const PredictionRecord> predictions, const DecisionValues& values) {
  const RankAssignment ranks(values);
  return weighted_group_mean(predictions, values, [&ranks](const ActionId& a) {
    return static_cast<double>(ranks.rank_of(a));
  });
}

std::vector<MetricSample> score_dataset(std::span<const PredictionRecord> predictions,
                                        std::span<const DecisionValues> tables,
                                        const GradeScale& scale) {
  std::map<std::string, std::size_t, NaturalLess> table_index;
  for (std::size_t i = 0; i < tables.size(); ++i) table_index.emplace(tables[i].decision_id(), i);
  std::vector<RankAssignment> ranks;
  ranks.reserve(tables.size());
  for (const DecisionValues& t : tables) ranks.emplace_back(t);

  std::vector<MetricSample> out;
  out.reserve(predictions.size());
  for (const PredictionRecord& p : predictions) {
    auto it = table_index.find(p.decision_id);
    if (it == table_index.end()) {
      throw std::invalid_argument("no value table for decision '" + p.decision_id + "'");
    }
    const DecisionValues& values = tables[it->second];
    const RankAssignment& r = ranks[it->second];
    MetricSample s;
    s.participant_id = p.participant_id;
    s.decision_id = p.decision_id;
    s.treatment = p.treatment;
    s.predicted = p.predicted;
    s.lv = loss_in_value(values, p.predicted);
    s.rank = r.rank_of(p.predicted);
    s.lr = s.rank - r.rank_of(values.chosen());
    s.grade = scale.grade(s.rank);
    out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(), [](const MetricSample& a, const MetricSample& b) {
    if (auto c = natural_compare(a.participant_id, b.participant_id); c != 0) return c < 0;
    return natural_less(a.decision_id, b.decision_id);
  });
  return out;
}

}  // namespace pcredit::metrics
