#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pcredit/decision.hpp"
#include "pcredit/io/csv.hpp"
#include "pcredit/mnk/board.hpp"
#include "pcredit/mnk/oracle.hpp"

namespace pcredit::io {

enum class DomainKind { mnk, four_towers, custom };

std::string_view to_string(DomainKind kind) noexcept;

struct Domain {
  DomainKind kind = DomainKind::custom;
  mnk::BoardConfig board;  // meaningful for mnk only

  friend bool operator==(const Domain&, const Domain&) = default;
};

struct ManifestAction {
  ActionId id;
  std::string name;

  friend bool operator==(const ManifestAction&, const ManifestAction&) = default;
};

struct ActionManifest {
  std::string experiment_id;
  Domain domain;
  std::vector<ManifestAction> actions;

  bool contains(const ActionId& id) const;
  /// Throws std::invalid_argument: duplicate ids or names, or an mnk manifest
  /// that is not exactly the m*n canonical square names.
  void validate() const;

  /// Every square of the board, canonical order, named by its text form.
  static ActionManifest for_board(std::string experiment_id, const mnk::BoardConfig& config);

  friend bool operator==(const ActionManifest&, const ActionManifest&) = default;
};

/// Everything one experiment produces: actions, the agent's value tables,
/// and the participants' predictions.
struct ExperimentBundle {
  ActionManifest manifest;
  std::vector<DecisionValues> decisions;
  std::vector<PredictionRecord> predictions;
  std::vector<std::string> treatments;
  /// Decisions known to exist whose value tables are not available.
  std::vector<std::string> pending_decisions;

  const DecisionValues* find_decision(std::string_view id) const;
  /// Complete and pending decision ids, in natural order.
  std::vector<std::string> decision_ids() const;
  /// Throws std::invalid_argument describing the first broken reference.
  void validate() const;

  friend bool operator==(const ExperimentBundle&, const ExperimentBundle&) = default;
};

// values.csv: decision_id,action,value,chosen[,win,loss,draw]
std::vector<DecisionValues> parse_values_csv(std::string_view text, const std::string& source = "values.csv");
std::string serialize_values_csv(const std::vector<DecisionValues>& decisions);

// predictions.csv: participant_id,treatment,decision_id,predicted_action
std::vector<PredictionRecord> parse_predictions_csv(std::string_view text, const ActionManifest& manifest,
                                                    const std::vector<DecisionValues>& decisions,
                                                    const std::string& source = "predictions.csv");
std::string serialize_predictions_csv(const std::vector<PredictionRecord>& predictions);

// manifest.json: experiment_id, domain, actions, treatments, pending_decisions
std::string serialize_manifest_json(const ExperimentBundle& bundle);
/// Parses the manifest and fills manifest, treatments and pending decisions.
void parse_manifest_json(std::string_view text, ExperimentBundle& bundle,
                         const std::string& source = "manifest.json");

/// scores.csv: decision_id,action,value,sorted_rank with one row per
/// (decision, square) in canonical square order. Occupied squares have empty
/// value and sorted_rank; sorted_rank 1 is the decision's highest value.
std::string serialize_score_tensor_csv(const mnk::ScoreTensor& tensor);

/// Writes manifest.json, values.csv and predictions.csv into `dir`.
void save_bundle(const ExperimentBundle& bundle, const std::filesystem::path& dir);
/// Reads and validates a bundle directory. Throws ParseError or
/// std::invalid_argument; never returns a partial bundle.
ExperimentBundle load_bundle(const std::filesystem::path& dir);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Predictions copy the agent's rank-r action with probability proportional
/// to rank_weights[r - 1]; ranks beyond the vector get weight 0. An empty
/// weight vector means uniform over all available actions.
struct ParticipantModel {
  std::vector<double> rank_weights;

  static ParticipantModel always_rank1() { return {{1.0}}; }
  static ParticipantModel uniform() { return {}; }
  /// weight(r) = ratio^(r - 1) over `ranks` ranks.
  static ParticipantModel geometric(double ratio, int ranks);
  /// "rank1", "uniform", "geometric:<ratio>" or "weights:w1,w2,...".
  static ParticipantModel parse(std::string_view text);
};

struct BehaviorSpec {
  ParticipantModel default_model = ParticipantModel::always_rank1();
  std::map<std::string, ParticipantModel> per_treatment;

  const ParticipantModel& model_for(const std::string& treatment) const;
};

struct SyntheticConfig {
  std::string experiment_id = "synthetic";
  mnk::BoardConfig board{9, 4, 4};
  std::vector<mnk::AgentSpec> agents;
  int participants = 1;
  std::vector<std::string> treatments;
  BehaviorSpec behavior;
  std::uint64_t seed = 0;
  int decisions_per_game = 4;
};

/// Plays one game per agent (agent first, uniformly random opponent), records
/// the agent's value table at each of its decisions, then draws every
/// participant's prediction for every decision. Participants are assigned to
/// treatments round-robin. Fully determined by the config.
ExperimentBundle generate_synthetic_experiment(const SyntheticConfig& config);

/// The 14 Four Towers decision points. Only DP1's Q-values are known; DP2 to
/// DP14 are listed as pending.
ExperimentBundle load_four_towers_fixture();

inline constexpr double kFourTowersMinQ = -366.0;
inline constexpr double kFourTowersMaxQ = 53.0;

}  // namespace pcredit::io
