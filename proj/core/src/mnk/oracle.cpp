#include "pcredit/mnk/oracle.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <unordered_map>

#include "pcredit/rng.hpp"

namespace pcredit::mnk {
namespace {

constexpr std::array<std::uint64_t, 13> kFactorial = {
    1ULL,      1ULL,       2ULL,        6ULL,         24ULL,         120ULL,       720ULL,
    5040ULL,   40320ULL,   362880ULL,   3628800ULL,   39916800ULL,   479001600ULL};

struct AbsoluteCounts {
  std::uint64_t agent = 0;
  std::uint64_t opponent = 0;
  std::uint64_t draw = 0;

  void add_win(Player p, std::uint64_t n) { (p == Player::agent ? agent : opponent) += n; }
  AbsoluteCounts& operator+=(const AbsoluteCounts& o) {
    agent += o.agent;
    opponent += o.opponent;
    draw += o.draw;
    return *this;
  }
};

// Enumerates every ordering of the remaining empty squares. The state key
// stores 2 bits per originally-empty square, so the number of filled squares,
// and hence the mover and ply count, are functions of the key.
class CompletionCounter {
 public:
  CompletionCounter(const Board& board, std::optional<int> depth_limit)
      : config_(board.config()), cells_(board.squares().unpack()), depth_limit_(depth_limit) {
    for (const SquareId& sq : board.empty_squares()) empties_.push_back(board.index_of(sq));
  }

  const std::vector<int>& empties() const { return empties_; }

  OutcomeCounts candidate(std::size_t slot, Player mover) {
    const int remaining = static_cast<int>(empties_.size()) - 1;
    std::uint32_t key = place(0, slot, mover);
    AbsoluteCounts c;
    if (completes_run(cells_, config_, empties_[slot])) {
      c.add_win(mover, kFactorial[remaining]);
    } else if (remaining == 0) {
      c.draw = 1;
    } else {
      c = count(key, remaining, 0, other(mover));
    }
    unplace(slot);
    const bool agent_moves = mover == Player::agent;
    return {agent_moves ? c.agent : c.opponent, agent_moves ? c.opponent : c.agent, c.draw};
  }

 private:
  std::uint32_t place(std::uint32_t key, std::size_t slot, Player p) {
    cells_[static_cast<std::size_t>(empties_[slot])] = cell_of(p);
    return key | (static_cast<std::uint32_t>(p) << (2 * slot));
  }
  void unplace(std::size_t slot) { cells_[static_cast<std::size_t>(empties_[slot])] = Cell::empty; }

  AbsoluteCounts count(std::uint32_t key, int remaining, int plies, Player mover) {
    if (depth_limit_ && plies >= *depth_limit_) return {0, 0, kFactorial[remaining]};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    AbsoluteCounts total;
    for (std::size_t slot = 0; slot < empties_.size(); ++slot) {
      if (cells_[static_cast<std::size_t>(empties_[slot])] != Cell::empty) continue;
      const std::uint32_t next = place(key, slot, mover);
      if (completes_run(cells_, config_, empties_[slot])) {
        total.add_win(mover, kFactorial[remaining - 1]);
      } else if (remaining == 1) {
        total.draw += 1;
      } else {
        total += count(next, remaining - 1, plies + 1, other(mover));
      }
      unplace(slot);
    }
    memo_.emplace(key, total);
    return total;
  }

  BoardConfig config_;
  std::vector<Cell> cells_;
  std::vector<int> empties_;
  std::optional<int> depth_limit_;
  std::unordered_map<std::uint32_t, AbsoluteCounts> memo_;
};

std::uint64_t position_hash(const Board& board) {
  std::uint64_t h = mix_seed(static_cast<std::uint64_t>(board.config().squares()),
                             static_cast<std::uint64_t>(board.to_move()));
  for (std::uint64_t w : board.squares().words()) h = mix_seed(h ^ w, 0x5157);
  return h;
}

void require_playable(const Board& board) {
  if (board.status().outcome != Outcome::ongoing) {
    throw std::invalid_argument("value oracle needs an ongoing game");
  }
  if (board.empty_count() == 0) throw std::invalid_argument("no legal moves");
}

std::vector<OutcomeCounts> sampled_counts(const Board& board, const AgentSpec& spec) {
  if (spec.sampled.rollouts == 0) throw std::invalid_argument("sampled oracle needs rollouts >= 1");
  const BoardConfig& cfg = board.config();
  const std::vector<Cell> start = board.squares().unpack();
  const std::vector<SquareId> empties = board.empty_squares();
  const Player mover = board.to_move();
  Rng rng(mix_seed(spec.sampled.seed, position_hash(board)));

  std::vector<OutcomeCounts> out;
  out.reserve(empties.size());
  std::vector<Cell> cells;
  std::vector<int> open;
  for (const SquareId& sq : empties) {
    std::uint64_t wins = 0, losses = 0, draws = 0;
    for (std::uint64_t r = 0; r < spec.sampled.rollouts; ++r) {
      cells = start;
      const int first = board.index_of(sq);
      cells[static_cast<std::size_t>(first)] = cell_of(mover);
      if (completes_run(cells, cfg, first)) {
        ++wins;
        continue;
      }
      open.clear();
      for (const SquareId& e : empties) {
        if (!(e == sq)) open.push_back(board.index_of(e));
      }
      Player p = other(mover);
      int plies = 0;
      bool decided = false;
      while (!open.empty() && !(spec.depth_limit && plies >= *spec.depth_limit)) {
        const std::size_t pick = rng.below(open.size());
        const int idx = open[pick];
        open[pick] = open.back();
        open.pop_back();
        cells[static_cast<std::size_t>(idx)] = cell_of(p);
        ++plies;
        if (completes_run(cells, cfg, idx)) {
          (p == mover ? wins : losses) += 1;
          decided = true;
          break;
        }
        p = other(p);
      }
      if (!decided) ++draws;
    }
    out.push_back({wins, losses, draws});
  }
  return out;
}

}  // namespace

OutcomeTriple OutcomeCounts::triple() const {
  const double t = static_cast<double>(total());
  return {static_cast<double>(win) / t, static_cast<double>(loss) / t, static_cast<double>(draw) / t};
}

double OutcomeCounts::advantage() const {
  return (static_cast<double>(win) - static_cast<double>(loss)) / static_cast<double>(total());
}

std::vector<SquareCounts> exhaustive_outcome_counts(const Board& board,
                                                    std::optional<int> depth_limit) {
  require_playable(board);
  if (board.empty_count() > kMaxExhaustiveEmpty) {
    throw std::invalid_argument("exhaustive oracle limited to " + std::to_string(kMaxExhaustiveEmpty) +
                                " empty squares (board has " + std::to_string(board.empty_count()) +
                                "); use the sampled oracle");
  }
  if (depth_limit && *depth_limit < 0) throw std::invalid_argument("depth limit must be >= 0");
  CompletionCounter counter(board, depth_limit);
  std::vector<SquareCounts> out;
  for (std::size_t slot = 0; slot < counter.empties().size(); ++slot) {
    out.push_back({board.square_at(counter.empties()[slot]), counter.candidate(slot, board.to_move())});
  }
  return out;
}

DecisionValues value_oracle(const Board& board, const AgentSpec& spec, std::string decision_id) {
  require_playable(board);
  if (spec.mutation && !(spec.mutation->magnitude >= 0.0)) {
    throw std::invalid_argument("mutation magnitude must be >= 0");
  }
  const std::vector<SquareId> empties = board.empty_squares();
  std::vector<OutcomeCounts> counts;
  if (spec.exhaustive) {
    for (const SquareCounts& sc : exhaustive_outcome_counts(board, spec.depth_limit)) counts.push_back(sc.counts);
  } else {
    counts = sampled_counts(board, spec);
  }

  std::vector<ActionValue> entries;
  entries.reserve(empties.size());
  for (std::size_t i = 0; i < empties.size(); ++i) {
    entries.push_back({empties[i].action(), counts[i].advantage(), counts[i].triple()});
  }
  if (spec.mutation && spec.mutation->magnitude > 0.0) {
    Rng noise(mix_seed(spec.mutation->seed, position_hash(board)));
    for (ActionValue& e : entries) e.value += spec.mutation->magnitude * (2.0 * noise.uniform() - 1.0);
  }
  if (decision_id.empty()) decision_id = "ply" + std::to_string(board.history().size());

  // Chosen action is the argmax; compute it before DecisionValues needs one.
  const ActionValue* best = &entries.front();
  for (const ActionValue& e : entries) {
    if (e.value > best->value) best = &e;
  }
  ActionId chosen = best->action;
  return DecisionValues(std::move(decision_id), std::move(entries), std::move(chosen));
}

SquareId choose_action(const DecisionValues& values) {
  return SquareId::parse(argmax_action(values).str());
}

ScoreTensor export_score_tensor(const BoardConfig& config, std::span<const DecisionValues> history) {
  config.validate();
  if (history.empty()) throw std::invalid_argument("score tensor needs at least one decision");
  ScoreTensor t;
  t.config = config;
  for (int col = 0; col < config.m; ++col) {
    for (int row = 0; row < config.n; ++row) t.squares.push_back(SquareId{col, row}.action());
  }
  for (const DecisionValues& dv : history) {
    std::vector<std::optional<double>> row(t.squares.size());
    std::vector<ScoreTensor::Ranked> ranked;
    for (const ActionValue& e : dv.entries()) {
      const SquareId sq = SquareId::parse(e.action.str());
      if (sq.col >= config.m || sq.row >= config.n) {
        throw std::invalid_argument("decision '" + dv.decision_id() + "' names off-board square " +
                                    e.action.str());
      }
      row[static_cast<std::size_t>(sq.col * config.n + sq.row)] = e.value;
      ranked.push_back({e.action, e.value});
    }
    // Entries arrive in canonical order; a stable sort keeps that as the tie-break.
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.value > b.value; });
    t.decision_ids.push_back(dv.decision_id());
    t.values.push_back(std::move(row));
    t.sorted.push_back(std::move(ranked));
  }
  return t;
}

Board replay(const BoardConfig& config, std::span<const SquareId> moves) {
  Board b = new_game(config);
  for (const SquareId& sq : moves) b = apply_move(b, sq);
  return b;
}

}  // namespace pcredit::mnk
