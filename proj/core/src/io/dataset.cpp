#include "pcredit/io/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "pcredit/metrics.hpp"
#include "pcredit/rng.hpp"

namespace pcredit::io {
namespace {

using Json = nlohmann::ordered_json;

const std::vector<std::string> kValuesHeader = {"decision_id", "action", "value", "chosen"};
const std::vector<std::string> kOutcomeColumns = {"win", "loss", "draw"};
const std::vector<std::string> kPredictionsHeader = {"participant_id", "treatment", "decision_id",
                                                     "predicted_action"};

double numeric_field(const CsvRow& row, std::size_t col, const std::vector<std::string>& header,
                     const std::string& source) {
  auto v = parse_double(row.fields[col]);
  if (!v) {
    throw ParseError(source, row.line, header[col], "non-numeric value '" + row.fields[col] + "'");
  }
  return *v;
}

void check_width(const CsvRow& row, const std::vector<std::string>& header, const std::string& source) {
  if (row.fields.size() != header.size()) {
    throw ParseError(source, row.line, "",
                     "expected " + std::to_string(header.size()) + " fields, found " +
                         std::to_string(row.fields.size()));
  }
}

void require_nonempty(const CsvRow& row, std::size_t col, const std::vector<std::string>& header,
                      const std::string& source) {
  if (row.fields[col].empty()) throw ParseError(source, row.line, header[col], "empty field");
}

}  // namespace

std::string_view to_string(DomainKind kind) noexcept {
  switch (kind) {
    case DomainKind::mnk: return "mnk";
    case DomainKind::four_towers: return "four_towers";
    case DomainKind::custom: return "custom";
  }
  return "custom";
}

bool ActionManifest::contains(const ActionId& id) const {
  return std::any_of(actions.begin(), actions.end(), [&](const ManifestAction& a) { return a.id == id; });
}

void ActionManifest::validate() const {
  if (actions.empty()) throw std::invalid_argument("manifest lists no actions");
  std::unordered_set<ActionId> ids;
  std::set<std::string> names;
  for (const ManifestAction& a : actions) {
    if (!ids.insert(a.id).second) throw std::invalid_argument("manifest: duplicate action id " + a.id.str());
    if (!names.insert(a.name).second) throw std::invalid_argument("manifest: duplicate action name " + a.name);
  }
  if (domain.kind == DomainKind::mnk) {
    domain.board.validate();
    if (actions.size() != static_cast<std::size_t>(domain.board.squares())) {
      throw std::invalid_argument("manifest: mnk board needs " + std::to_string(domain.board.squares()) +
                                  " actions, found " + std::to_string(actions.size()));
    }
    for (const ManifestAction& a : actions) {
      mnk::SquareId sq;
      try {
        sq = mnk::SquareId::parse(a.id.str());
      } catch (const std::invalid_argument&) {
        throw std::invalid_argument("manifest: '" + a.id.str() + "' is not a square name");
      }
      if (sq.col >= domain.board.m || sq.row >= domain.board.n || sq.to_string() != a.id.str()) {
        throw std::invalid_argument("manifest: '" + a.id.str() + "' is not a square of the board");
      }
    }
  }
}

ActionManifest ActionManifest::for_board(std::string experiment_id, const mnk::BoardConfig& config) {
  config.validate();
  ActionManifest m;
  m.experiment_id = std::move(experiment_id);
  m.domain = {DomainKind::mnk, config};
  for (int col = 0; col < config.m; ++col) {
    for (int row = 0; row < config.n; ++row) {
      const std::string name = mnk::SquareId{col, row}.to_string();
      m.actions.push_back({ActionId(name), name});
    }
  }
  return m;
}

const DecisionValues* ExperimentBundle::find_decision(std::string_view id) const {
  for (const DecisionValues& d : decisions) {
    if (d.decision_id() == id) return &d;
  }
  return nullptr;
}

std::vector<std::string> ExperimentBundle::decision_ids() const {
  std::vector<std::string> ids;
  for (const DecisionValues& d : decisions) ids.push_back(d.decision_id());
  ids.insert(ids.end(), pending_decisions.begin(), pending_decisions.end());
  std::sort(ids.begin(), ids.end(), NaturalLess{});
  return ids;
}

void ExperimentBundle::validate() const {
  manifest.validate();
  std::set<std::string> seen_decisions;
  for (const DecisionValues& d : decisions) {
    if (!seen_decisions.insert(d.decision_id()).second) {
      throw std::invalid_argument("duplicate decision '" + d.decision_id() + "'");
    }
    for (const ActionValue& e : d.entries()) {
      if (!manifest.contains(e.action)) {
        throw std::invalid_argument("decision '" + d.decision_id() + "' uses action " + e.action.str() +
                                    " missing from the manifest");
      }
    }
  }
  for (const std::string& p : pending_decisions) {
    if (!seen_decisions.insert(p).second) throw std::invalid_argument("duplicate decision '" + p + "'");
  }
  std::set<std::string> treatment_set;
  for (const std::string& t : treatments) {
    if (!treatment_set.insert(t).second) throw std::invalid_argument("duplicate treatment '" + t + "'");
  }
  std::set<std::pair<std::string, std::string>> answered;
  for (const PredictionRecord& p : predictions) {
    const DecisionValues* d = find_decision(p.decision_id);
    if (!d) throw std::invalid_argument("prediction references unknown decision '" + p.decision_id + "'");
    if (!manifest.contains(p.predicted)) {
      throw std::invalid_argument("prediction names unknown action " + p.predicted.str());
    }
    if (!d->contains(p.predicted)) {
      throw std::invalid_argument("action " + p.predicted.str() + " is not available at decision '" +
                                  p.decision_id + "'");
    }
    if (!treatment_set.contains(p.treatment)) {
      throw std::invalid_argument("prediction uses undeclared treatment '" + p.treatment + "'");
    }
    if (!answered.insert({p.participant_id, p.decision_id}).second) {
      throw std::invalid_argument("participant '" + p.participant_id + "' predicted decision '" +
                                  p.decision_id + "' twice");
    }
  }
}

std::vector<DecisionValues> parse_values_csv(std::string_view text, const std::string& source) {
  const std::vector<CsvRow> rows = read_csv(text, source);
  if (rows.empty()) throw ParseError(source, 1, "", "missing header");
  const std::vector<std::string>& header = rows.front().fields;
  std::vector<std::string> with_outcome = kValuesHeader;
  with_outcome.insert(with_outcome.end(), kOutcomeColumns.begin(), kOutcomeColumns.end());
  const bool has_outcome = header == with_outcome;
  if (!has_outcome && header != kValuesHeader) {
    throw ParseError(source, 1, "", "header must be decision_id,action,value,chosen[,win,loss,draw]");
  }

  struct Pending {
    std::vector<ActionValue> entries;
    std::optional<ActionId> chosen;
    std::size_t first_line = 0;
    std::unordered_set<ActionId> actions;
  };
  std::vector<std::string> order;
  std::unordered_map<std::string, Pending> pending;

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    check_width(row, header, source);
    require_nonempty(row, 0, header, source);
    require_nonempty(row, 1, header, source);
    const std::string& decision = row.fields[0];
    ActionId action(row.fields[1]);
    const double value = numeric_field(row, 2, header, source);
    const std::string& chosen_flag = row.fields[3];
    if (chosen_flag != "0" && chosen_flag != "1") {
      throw ParseError(source, row.line, "chosen", "expected 0 or 1, found '" + chosen_flag + "'");
    }
    std::optional<OutcomeTriple> outcome;
    if (has_outcome) {
      const bool any = !row.fields[4].empty() || !row.fields[5].empty() || !row.fields[6].empty();
      if (any) {
        OutcomeTriple t{numeric_field(row, 4, header, source), numeric_field(row, 5, header, source),
                        numeric_field(row, 6, header, source)};
        if (!t.sums_to_one(1e-6)) throw ParseError(source, row.line, "draw", "win + loss + draw must equal 1");
        outcome = t;
      }
    }

    auto [it, inserted] = pending.try_emplace(decision);
    Pending& p = it->second;
    if (inserted) {
      order.push_back(decision);
      p.first_line = row.line;
    }
    if (!p.actions.insert(action).second) {
      throw ParseError(source, row.line, "action",
                       "duplicate action " + action.str() + " for decision '" + decision + "'");
    }
    if (chosen_flag == "1") {
      if (p.chosen) {
        throw ParseError(source, row.line, "chosen", "decision '" + decision + "' has more than one chosen action");
      }
      p.chosen = action;
    }
    p.entries.push_back({std::move(action), value, outcome});
  }

  std::vector<DecisionValues> out;
  out.reserve(order.size());
  for (const std::string& id : order) {
    Pending& p = pending.at(id);
    if (!p.chosen) throw ParseError(source, p.first_line, "chosen", "decision '" + id + "' has no chosen action");
    out.emplace_back(id, std::move(p.entries), *p.chosen);
  }
  return out;
}

std::string serialize_values_csv(const std::vector<DecisionValues>& decisions) {
  bool has_outcome = false;
  for (const DecisionValues& d : decisions) {
    for (const ActionValue& e : d.entries()) has_outcome = has_outcome || e.outcome.has_value();
  }
  std::vector<std::string> header = kValuesHeader;
  if (has_outcome) header.insert(header.end(), kOutcomeColumns.begin(), kOutcomeColumns.end());
  std::string out = csv_line(header);
  for (const DecisionValues& d : decisions) {
    for (const ActionValue& e : d.entries()) {
      std::vector<std::string> fields = {d.decision_id(), e.action.str(), format_double(e.value),
                                         e.action == d.chosen() ? "1" : "0"};
      if (has_outcome) {
        if (e.outcome) {
          fields.push_back(format_double(e.outcome->win));
          fields.push_back(format_double(e.outcome->loss));
          fields.push_back(format_double(e.outcome->draw));
        } else {
          fields.insert(fields.end(), 3, "");
        }
      }
      out += csv_line(fields);
    }
  }
  return out;
}

std::vector<PredictionRecord> parse_predictions_csv(std::string_view text, const ActionManifest& manifest,
                                                    const std::vector<DecisionValues>& decisions,
                                                    const std::string& source) {
  const std::vector<CsvRow> rows = read_csv(text, source);
  if (rows.empty()) throw ParseError(source, 1, "", "missing header");
  const std::vector<std::string>& header = rows.front().fields;
  if (header != kPredictionsHeader) {
    throw ParseError(source, 1, "", "header must be participant_id,treatment,decision_id,predicted_action");
  }
  std::unordered_map<std::string, const DecisionValues*> by_id;
  for (const DecisionValues& d : decisions) by_id.emplace(d.decision_id(), &d);

  std::vector<PredictionRecord> out;
  std::set<std::pair<std::string, std::string>> answered;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    check_width(row, header, source);
    for (std::size_t c = 0; c < header.size(); ++c) require_nonempty(row, c, header, source);
    PredictionRecord rec{row.fields[0], row.fields[1], row.fields[2], ActionId(row.fields[3])};
    auto d = by_id.find(rec.decision_id);
    if (d == by_id.end()) {
      throw ParseError(source, row.line, "decision_id", "unknown decision '" + rec.decision_id + "'");
    }
    if (!manifest.contains(rec.predicted)) {
      throw ParseError(source, row.line, "predicted_action", "unknown action '" + rec.predicted.str() + "'");
    }
    if (!d->second->contains(rec.predicted)) {
      throw ParseError(source, row.line, "predicted_action",
                       "action '" + rec.predicted.str() + "' is not available at decision '" + rec.decision_id + "'");
    }
    if (!answered.insert({rec.participant_id, rec.decision_id}).second) {
      throw ParseError(source, row.line, "participant_id",
                       "duplicate prediction for participant '" + rec.participant_id + "' at decision '" +
                           rec.decision_id + "'");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::string serialize_predictions_csv(const std::vector<PredictionRecord>& predictions) {
  std::string out = csv_line(kPredictionsHeader);
  for (const PredictionRecord& p : predictions) {
    out += csv_line({p.participant_id, p.treatment, p.decision_id, p.predicted.str()});
  }
  return out;
}

std::string serialize_score_tensor_csv(const mnk::ScoreTensor& tensor) {
  std::string out = csv_line({"decision_id", "action", "value", "sorted_rank"});
  for (std::size_t d = 0; d < tensor.decisions(); ++d) {
    std::unordered_map<ActionId, std::size_t> position;
    for (std::size_t i = 0; i < tensor.sorted[d].size(); ++i) position.emplace(tensor.sorted[d][i].action, i + 1);
    for (std::size_t s = 0; s < tensor.squares.size(); ++s) {
      const std::optional<double>& v = tensor.values[d][s];
      out += csv_line({tensor.decision_ids[d], tensor.squares[s].str(), v ? format_double(*v) : std::string(),
                       v ? std::to_string(position.at(tensor.squares[s])) : std::string()});
    }
  }
  return out;
}

std::string serialize_manifest_json(const ExperimentBundle& bundle) {
  const ActionManifest& m = bundle.manifest;
  Json domain = {{"kind", std::string(to_string(m.domain.kind))}};
  if (m.domain.kind == DomainKind::mnk) {
    domain["m"] = m.domain.board.m;
    domain["n"] = m.domain.board.n;
    domain["k"] = m.domain.board.k;
  }
  Json actions = Json::array();
  for (const ManifestAction& a : m.actions) actions.push_back({{"id", a.id.str()}, {"name", a.name}});
  Json doc = {{"experiment_id", m.experiment_id},
              {"domain", domain},
              {"actions", actions},
              {"treatments", bundle.treatments},
              {"pending_decisions", bundle.pending_decisions}};
  return doc.dump(2) + "\n";
}

void parse_manifest_json(std::string_view text, ExperimentBundle& bundle, const std::string& source) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source, 1, "", std::string("invalid JSON: ") + e.what());
  }
  auto field = [&](const Json& obj, const char* key) -> const Json& {
    if (!obj.is_object() || !obj.contains(key)) throw ParseError(source, 1, key, "missing field");
    return obj.at(key);
  };
  try {
    ActionManifest m;
    m.experiment_id = field(doc, "experiment_id").get<std::string>();
    const Json& domain = field(doc, "domain");
    const std::string kind = field(domain, "kind").get<std::string>();
    if (kind == "mnk") {
      m.domain = {DomainKind::mnk,
                  {field(domain, "m").get<int>(), field(domain, "n").get<int>(), field(domain, "k").get<int>()}};
    } else if (kind == "four_towers") {
      m.domain.kind = DomainKind::four_towers;
    } else if (kind == "custom") {
      m.domain.kind = DomainKind::custom;
    } else {
      throw ParseError(source, 1, "domain", "unknown domain kind '" + kind + "'");
    }
    for (const Json& a : field(doc, "actions")) {
      const std::string id = field(a, "id").get<std::string>();
      if (id.empty()) throw ParseError(source, 1, "actions", "empty action id");
      m.actions.push_back({ActionId(id), field(a, "name").get<std::string>()});
    }
    bundle.manifest = std::move(m);
    bundle.treatments = doc.contains("treatments") ? doc.at("treatments").get<std::vector<std::string>>()
                                                   : std::vector<std::string>{};
    bundle.pending_decisions = doc.contains("pending_decisions")
                                   ? doc.at("pending_decisions").get<std::vector<std::string>>()
                                   : std::vector<std::string>{};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source, 1, "", std::string("unexpected JSON type: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

void save_bundle(const ExperimentBundle& bundle, const std::filesystem::path& dir) {
  bundle.validate();
  write_file(dir / "manifest.json", serialize_manifest_json(bundle));
  write_file(dir / "values.csv", serialize_values_csv(bundle.decisions));
  write_file(dir / "predictions.csv", serialize_predictions_csv(bundle.predictions));
}

ExperimentBundle load_bundle(const std::filesystem::path& dir) {
  ExperimentBundle b;
  parse_manifest_json(read_file(dir / "manifest.json"), b);
  b.manifest.validate();
  b.decisions = parse_values_csv(read_file(dir / "values.csv"));
  b.predictions = parse_predictions_csv(read_file(dir / "predictions.csv"), b.manifest, b.decisions);
  b.validate();
  return b;
}

ParticipantModel ParticipantModel::geometric(double ratio, int ranks) {
  if (!(ratio > 0.0) || ranks < 1) throw std::invalid_argument("geometric model needs ratio > 0 and ranks >= 1");
  ParticipantModel m;
  double w = 1.0;
  for (int r = 0; r < ranks; ++r, w *= ratio) m.rank_weights.push_back(w);
  return m;
}

ParticipantModel ParticipantModel::parse(std::string_view text) {
  const std::string s(text);
  if (s == "rank1") return always_rank1();
  if (s == "uniform") return uniform();
  auto number = [&s](const std::string& part) {
    auto v = parse_double(part);
    if (!v || *v < 0.0) throw std::invalid_argument("bad participant model '" + s + "'");
    return *v;
  };
  if (s.rfind("geometric:", 0) == 0) return geometric(number(s.substr(10)), mnk::kMaxSquares);
  if (s.rfind("weights:", 0) == 0) {
    ParticipantModel m;
    std::stringstream ss(s.substr(8));
    std::string part;
    while (std::getline(ss, part, ',')) m.rank_weights.push_back(number(part));
    double total = 0.0;
    for (double w : m.rank_weights) total += w;
    if (!(total > 0.0)) throw std::invalid_argument("participant model weights must not all be zero");
    return m;
  }
  throw std::invalid_argument("unknown participant model '" + s +
                              "' (expected rank1, uniform, geometric:<r> or weights:<w1,w2,...>)");
}

const ParticipantModel& BehaviorSpec::model_for(const std::string& treatment) const {
  auto it = per_treatment.find(treatment);
  return it == per_treatment.end() ? default_model : it->second;
}

namespace {

std::size_t draw_rank(const ParticipantModel& model, std::size_t actions, Rng& rng) {
  if (model.rank_weights.empty()) return 1 + static_cast<std::size_t>(rng.below(actions));
  const std::size_t usable = std::min(actions, model.rank_weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < usable; ++i) total += model.rank_weights[i];
  if (!(total > 0.0)) throw std::invalid_argument("participant model puts no weight on available ranks");
  const double u = rng.uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < usable; ++i) {
    acc += model.rank_weights[i];
    if (u < acc) return i + 1;
  }
  // u can equal the rounded total only through accumulated rounding.
  std::size_t last = usable;
  while (last > 1 && model.rank_weights[last - 1] == 0.0) --last;
  return last;
}

}  // namespace

ExperimentBundle generate_synthetic_experiment(const SyntheticConfig& config) {
  config.board.validate();
  if (config.participants < 1) throw std::invalid_argument("need at least one participant");
  if (config.agents.empty()) throw std::invalid_argument("need at least one agent");
  if (config.decisions_per_game < 1) throw std::invalid_argument("need at least one decision per game");

  ExperimentBundle b;
  b.manifest = ActionManifest::for_board(config.experiment_id, config.board);
  b.treatments = config.treatments.empty() ? std::vector<std::string>{"all"} : config.treatments;
  Rng rng(config.seed);

  for (std::size_t g = 0; g < config.agents.size(); ++g) {
    const mnk::AgentSpec& agent = config.agents[g];
    mnk::Board board = mnk::new_game(config.board);
    int recorded = 0;
    while (board.status().outcome == mnk::Outcome::ongoing && recorded < config.decisions_per_game) {
      if (board.to_move() == mnk::Player::agent) {
        ++recorded;
        std::string id = config.agents.size() == 1
                             ? "P" + std::to_string(recorded)
                             : "G" + std::to_string(g + 1) + "P" + std::to_string(recorded);
        DecisionValues dv = mnk::value_oracle(board, agent, std::move(id));
        board = mnk::apply_move(board, mnk::choose_action(dv));
        b.decisions.push_back(std::move(dv));
      } else {
        const std::vector<mnk::SquareId> open = board.empty_squares();
        board = mnk::apply_move(board, open[rng.below(open.size())]);
      }
    }
  }

  std::vector<std::vector<ActionId>> orders;
  for (const DecisionValues& d : b.decisions) orders.push_back(metrics::RankAssignment(d).ordered());
  for (int p = 1; p <= config.participants; ++p) {
    const std::string& treatment = b.treatments[static_cast<std::size_t>(p - 1) % b.treatments.size()];
    const ParticipantModel& model = config.behavior.model_for(treatment);
    for (std::size_t d = 0; d < b.decisions.size(); ++d) {
      const std::size_t rank = draw_rank(model, orders[d].size(), rng);
      b.predictions.push_back({"p" + std::to_string(p), treatment, b.decisions[d].decision_id(), orders[d][rank - 1]});
    }
  }
  b.validate();
  return b;
}

ExperimentBundle load_four_towers_fixture() {
  ExperimentBundle b;
  b.manifest.experiment_id = "four-towers";
  b.manifest.domain.kind = DomainKind::four_towers;
  for (const char* q : {"NE", "NW", "SE", "SW"}) b.manifest.actions.push_back({ActionId(q), q});
  // Only the rank order of DP1's Q-values is known, not the quadrant of each.
  b.decisions.emplace_back("DP1",
                           std::vector<ActionValue>{{ActionId("NE"), 31.0, std::nullopt},
                                                    {ActionId("NW"), -28.0, std::nullopt},
                                                    {ActionId("SE"), -284.0, std::nullopt},
                                                    {ActionId("SW"), -313.0, std::nullopt}},
                           ActionId("NE"));
  for (int dp = 2; dp <= 14; ++dp) b.pending_decisions.push_back("DP" + std::to_string(dp));
  b.validate();
  return b;
}

}  // namespace pcredit::io
