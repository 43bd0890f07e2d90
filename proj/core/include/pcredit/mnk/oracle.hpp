#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcredit/decision.hpp"
#include "pcredit/mnk/board.hpp"

namespace pcredit::mnk {

inline constexpr int kMaxExhaustiveEmpty = 12;

struct ExhaustiveOracle {};

struct SampledOracle {
  std::uint64_t rollouts = 256;
  std::uint64_t seed = 0;
};

/// Additive seeded noise on the flattened value; magnitude 0 is a no-op.
struct Mutation {
  std::uint64_t seed = 0;
  double magnitude = 0.0;
};

struct AgentSpec {
  bool exhaustive = true;
  SampledOracle sampled;  // used when !exhaustive
  /// Plies after the candidate move before an undecided completion is
  /// scored as a draw. Unset means play to the end.
  std::optional<int> depth_limit;
  std::optional<Mutation> mutation;

  static AgentSpec make_exhaustive() { return {}; }
  static AgentSpec make_sampled(std::uint64_t rollouts, std::uint64_t seed) {
    AgentSpec s;
    s.exhaustive = false;
    s.sampled = {rollouts, seed};
    return s;
  }
};

/// Exact outcome counts for one candidate square: the number of orderings of
/// the remaining empty squares (after the candidate move) that end in a win,
/// loss, or draw for the mover. Their sum is (empty - 1)!.
struct OutcomeCounts {
  std::uint64_t win = 0;
  std::uint64_t loss = 0;
  std::uint64_t draw = 0;

  std::uint64_t total() const noexcept { return win + loss + draw; }
  OutcomeTriple triple() const;
  /// (win - loss) / total with a single rounding, so equal advantages tie.
  double advantage() const;

  friend bool operator==(const OutcomeCounts&, const OutcomeCounts&) = default;
};

struct SquareCounts {
  SquareId square;
  OutcomeCounts counts;
};

/// Exhaustive uniform-random-completion counts for every empty square, in
/// canonical order. Throws std::invalid_argument when the game is over or
/// more than 12 squares are empty.
std::vector<SquareCounts> exhaustive_outcome_counts(const Board& board,
                                                    std::optional<int> depth_limit = std::nullopt);

/// Per-square (win, loss, draw) estimates for the mover, flattened to
/// win - loss (plus mutation noise) as the value. The chosen action is the
/// argmax. `decision_id` defaults to "ply<N>".
DecisionValues value_oracle(const Board& board, const AgentSpec& spec, std::string decision_id = {});

/// Argmax of the flattened value, ties to the lowest (col, row).
/// Throws std::invalid_argument for a table whose actions are not squares.
SquareId choose_action(const DecisionValues& values);

/// Per-decision (decision x square) values, with occupied squares absent,
/// plus each decision's value-sorted series.
struct ScoreTensor {
  struct Ranked {
    ActionId action;
    double value = 0.0;
  };

  BoardConfig config;
  std::vector<std::string> decision_ids;
  std::vector<ActionId> squares;  // canonical order, all m*n squares
  std::vector<std::vector<std::optional<double>>> values;  // [decision][square]
  std::vector<std::vector<Ranked>> sorted;                 // [decision], descending value

  std::size_t decisions() const noexcept { return decision_ids.size(); }
};

/// Throws std::invalid_argument for an empty history or a table naming a
/// square outside the board.
ScoreTensor export_score_tensor(const BoardConfig& config, std::span<const DecisionValues> history);

/// Board built by playing `moves` from an empty board.
Board replay(const BoardConfig& config, std::span<const SquareId> moves);

}  // namespace pcredit::mnk
