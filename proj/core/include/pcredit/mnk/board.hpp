#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pcredit/action_id.hpp"

namespace pcredit::mnk {

/// Board geometry: m columns, n rows, k-in-a-row to win.
struct BoardConfig {
  int m = 0;
  int n = 0;
  int k = 0;

  /// Throws std::invalid_argument unless 1 <= k <= max(m, n), m, n >= 1 and
  /// m * n <= 10000.
  void validate() const;
  int squares() const noexcept { return m * n; }

  friend bool operator==(const BoardConfig&, const BoardConfig&) = default;
};

inline constexpr int kMaxSquares = 10'000;

/// A square addressed by 0-based column and row. Text form is the spreadsheet
/// column letters followed by the 1-based row: (5, 1) is "F2", (26, 0) "AA1".
struct SquareId {
  int col = 0;
  int row = 0;

  std::string to_string() const;
  ActionId action() const { return ActionId(to_string()); }
  /// Throws std::invalid_argument on malformed text.
  static SquareId parse(std::string_view text);

  friend bool operator==(const SquareId&, const SquareId&) = default;
  friend auto operator<=>(const SquareId&, const SquareId&) = default;
};

enum class Cell : std::uint8_t { empty = 0, agent = 1, opponent = 2 };
enum class Player : std::uint8_t { agent = 1, opponent = 2 };

constexpr Player other(Player p) noexcept {
  return p == Player::agent ? Player::opponent : Player::agent;
}
constexpr Cell cell_of(Player p) noexcept { return static_cast<Cell>(p); }
std::string_view to_string(Player p) noexcept;

struct Move {
  Player player = Player::agent;
  SquareId square;

  friend bool operator==(const Move&, const Move&) = default;
};

enum class Outcome : std::uint8_t { ongoing, win, draw };

struct GameStatus {
  Outcome outcome = Outcome::ongoing;
  Player winner = Player::agent;  // meaningful only when outcome == win

  static GameStatus ongoing() { return {}; }
  static GameStatus draw() { return {Outcome::draw, Player::agent}; }
  static GameStatus won_by(Player p) { return {Outcome::win, p}; }

  friend bool operator==(const GameStatus&, const GameStatus&) = default;
};

/// 2-bit-per-square packed storage, 32 squares per word.
class PackedSquares {
 public:
  PackedSquares() = default;
  explicit PackedSquares(int squares);

  static PackedSquares pack(std::span<const Cell> cells);
  std::vector<Cell> unpack() const;

  Cell get(int index) const noexcept {
    return static_cast<Cell>((words_[index >> 5] >> ((index & 31) * 2)) & 3U);
  }
  void set(int index, Cell c) noexcept {
    const int shift = (index & 31) * 2;
    std::uint64_t& w = words_[index >> 5];
    w = (w & ~(std::uint64_t{3} << shift)) | (std::uint64_t{static_cast<std::uint8_t>(c)} << shift);
  }

  int size() const noexcept { return size_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  friend bool operator==(const PackedSquares&, const PackedSquares&) = default;

 private:
  int size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Immutable game state. Moves produce new boards.
class Board {
 public:
  const BoardConfig& config() const noexcept { return config_; }
  const PackedSquares& squares() const noexcept { return squares_; }
  Player to_move() const noexcept { return to_move_; }
  const std::vector<Move>& history() const noexcept { return history_; }
  GameStatus status() const noexcept { return status_; }

  bool in_bounds(SquareId sq) const noexcept {
    return sq.col >= 0 && sq.row >= 0 && sq.col < config_.m && sq.row < config_.n;
  }
  int index_of(SquareId sq) const noexcept { return sq.col * config_.n + sq.row; }
  SquareId square_at(int index) const noexcept { return {index / config_.n, index % config_.n}; }
  Cell at(SquareId sq) const;

  /// Empty squares in canonical (col, row) order.
  std::vector<SquareId> empty_squares() const;
  int empty_count() const noexcept { return config_.squares() - static_cast<int>(history_.size()); }

  friend bool operator==(const Board&, const Board&) = default;

 private:
  friend Board new_game(const BoardConfig& config);
  friend Board apply_move(const Board& board, SquareId sq);

  BoardConfig config_;
  PackedSquares squares_;
  Player to_move_ = Player::agent;
  std::vector<Move> history_;
  GameStatus status_;
};

/// Empty board with the agent to move. Throws std::invalid_argument for an
/// invalid config.
Board new_game(const BoardConfig& config);

/// Places the mover's piece. Throws std::out_of_range for an off-board
/// square, std::invalid_argument for an occupied square or a finished game.
Board apply_move(const Board& board, SquareId sq);

GameStatus game_status(const Board& board);

/// Length of the run of `c` through square `index` along direction
/// (dcol, drow), counting both sides. Works on unpacked cells in board index
/// order (index = col * n + row).
int run_length(std::span<const Cell> cells, const BoardConfig& config, int index, int dcol,
               int drow);

/// True when the piece at `index` completes a k-run.
bool completes_run(std::span<const Cell> cells, const BoardConfig& config, int index);

}  // namespace pcredit::mnk
