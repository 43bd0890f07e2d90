#include "pcredit/mnk/board.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace pcredit::mnk {
namespace {

constexpr int kDirections[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};

template <typename CellAt>
int run_through(const CellAt& cell_at, const BoardConfig& cfg, int index, int dcol, int drow) {
  const Cell c = cell_at(index);
  if (c == Cell::empty) return 0;
  const int col0 = index / cfg.n;
  const int row0 = index % cfg.n;
  int run = 1;
  for (int sign : {1, -1}) {
    int col = col0 + sign * dcol;
    int row = row0 + sign * drow;
    while (col >= 0 && row >= 0 && col < cfg.m && row < cfg.n && cell_at(col * cfg.n + row) == c) {
      ++run;
      col += sign * dcol;
      row += sign * drow;
    }
  }
  return run;
}

template <typename CellAt>
bool completes(const CellAt& cell_at, const BoardConfig& cfg, int index) {
  for (const auto& d : kDirections) {
    if (run_through(cell_at, cfg, index, d[0], d[1]) >= cfg.k) return true;
  }
  return false;
}

}  // namespace

void BoardConfig::validate() const {
  if (m < 1 || n < 1) throw std::invalid_argument("board dimensions must be at least 1");
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (k > std::max(m, n)) {
    throw std::invalid_argument("k = " + std::to_string(k) + " exceeds both board dimensions");
  }
  if (static_cast<long long>(m) * n > kMaxSquares) {
    throw std::invalid_argument("board has more than 10000 squares");
  }
}

std::string SquareId::to_string() const {
  std::string letters;
  int c = col;
  do {
    letters.insert(letters.begin(), static_cast<char>('A' + c % 26));
    c = c / 26 - 1;
  } while (c >= 0);
  return letters + std::to_string(row + 1);
}

SquareId SquareId::parse(std::string_view text) {
  std::size_t i = 0;
  long long col = 0;
  while (i < text.size() && std::isupper(static_cast<unsigned char>(text[i]))) {
    col = col * 26 + (text[i] - 'A' + 1);
    if (col > kMaxSquares) throw std::invalid_argument("square column out of range: " + std::string(text));
    ++i;
  }
  if (i == 0 || i == text.size() || text[i] == '0') {
    throw std::invalid_argument("malformed square id: '" + std::string(text) + "'");
  }
  long long row = 0;
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw std::invalid_argument("malformed square id: '" + std::string(text) + "'");
    }
    row = row * 10 + (text[i] - '0');
    if (row > kMaxSquares) throw std::invalid_argument("square row out of range: " + std::string(text));
  }
  return {static_cast<int>(col - 1), static_cast<int>(row - 1)};
}

std::string_view to_string(Player p) noexcept { return p == Player::agent ? "agent" : "opponent"; }

PackedSquares::PackedSquares(int squares) : size_(squares), words_((squares + 31) / 32, 0) {}

PackedSquares PackedSquares::pack(std::span<const Cell> cells) {
  PackedSquares out(static_cast<int>(cells.size()));
  for (std::size_t i = 0; i < cells.size(); ++i) out.set(static_cast<int>(i), cells[i]);
  return out;
}

std::vector<Cell> PackedSquares::unpack() const {
  std::vector<Cell> cells(static_cast<std::size_t>(size_));
  for (int i = 0; i < size_; ++i) cells[static_cast<std::size_t>(i)] = get(i);
  return cells;
}

Cell Board::at(SquareId sq) const {
  if (!in_bounds(sq)) throw std::out_of_range("square " + sq.to_string() + " is off the board");
  return squares_.get(index_of(sq));
}

std::vector<SquareId> Board::empty_squares() const {
  std::vector<SquareId> out;
  out.reserve(static_cast<std::size_t>(empty_count()));
  for (int i = 0; i < config_.squares(); ++i) {
    if (squares_.get(i) == Cell::empty) out.push_back(square_at(i));
  }
  return out;
}

Board new_game(const BoardConfig& config) {
  config.validate();
  Board b;
  b.config_ = config;
  b.squares_ = PackedSquares(config.squares());
  return b;
}

Board apply_move(const Board& board, SquareId sq) {
  if (!board.in_bounds(sq)) {
    throw std::out_of_range("square (" + std::to_string(sq.col) + ", " + std::to_string(sq.row) +
                            ") is off the board");
  }
  if (board.status_.outcome != Outcome::ongoing) {
    throw std::invalid_argument("game is already over");
  }
  const int index = board.index_of(sq);
  if (board.squares_.get(index) != Cell::empty) {
    throw std::invalid_argument("square " + sq.to_string() + " is occupied");
  }
  Board next = board;
  const Player mover = board.to_move_;
  next.squares_.set(index, cell_of(mover));
  next.history_.push_back({mover, sq});
  next.to_move_ = other(mover);
  const auto cell_at = [&next](int i) { return next.squares_.get(i); };
  if (completes(cell_at, next.config_, index)) {
    next.status_ = GameStatus::won_by(mover);
  } else if (next.empty_count() == 0) {
    next.status_ = GameStatus::draw();
  }
  return next;
}

GameStatus game_status(const Board& board) { return board.status(); }

int run_length(std::span<const Cell> cells, const BoardConfig& config, int index, int dcol,
               int drow) {
  return run_through([cells](int i) { return cells[static_cast<std::size_t>(i)]; }, config, index,
                     dcol, drow);
}

bool completes_run(std::span<const Cell> cells, const BoardConfig& config, int index) {
  return completes([cells](int i) { return cells[static_cast<std::size_t>(i)]; }, config, index);
}

}  // namespace pcredit::mnk
