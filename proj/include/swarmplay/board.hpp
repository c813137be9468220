#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace swarmplay {

// Cross is the drone side, Nought the human side.
enum class Mark : std::int8_t { Empty = 0, Cross = 1, Nought = -1 };

enum class Outcome { Ongoing, CrossWins, NoughtWins, Draw };

constexpr int kCells = 9;

constexpr Mark opponent(Mark m) {
  return m == Mark::Cross ? Mark::Nought : m == Mark::Nought ? Mark::Cross : Mark::Empty;
}

constexpr int encode(Mark m) { return static_cast<int>(m); }

std::string_view to_string(Mark m);
std::string_view to_string(Outcome o);
std::optional<Outcome> outcome_from_string(std::string_view s);

// The eight winning lines, as 0-based cell indices.
inline constexpr std::array<std::array<int, 3>, 8> kLines{{
    {0, 1, 2}, {3, 4, 5}, {6, 7, 8},  // rows
    {0, 3, 6}, {1, 4, 7}, {2, 5, 8},  // columns
    {0, 4, 8}, {2, 4, 6},             // diagonals
}};

// Immutable 3x3 board. Cells are numbered 1..9 row-major from the top-left.
class Board {
 public:
  Board() { cells_.fill(Mark::Empty); }
  explicit Board(const std::array<Mark, kCells>& cells) : cells_(cells) {}

  // Convenience: place `mark` on each listed cell, no rule checks.
  static Board with(std::initializer_list<int> crosses, std::initializer_list<int> noughts = {});

  Mark at(int cell) const;  // cell in 1..9
  const std::array<Mark, kCells>& cells() const { return cells_; }

  int count(Mark m) const;
  bool full() const { return count(Mark::Empty) == 0; }
  bool empty() const { return count(Mark::Empty) == kCells; }

  // Board with `cell` set to `mark`, no legality checks. Used by search code
  // that already knows the move is legal.
  Board placed(int cell, Mark mark) const;

  // Every Cross becomes Nought and vice versa.
  Board swapped() const;

  // True if `m` holds a complete line.
  bool has_line(Mark m) const;

  friend bool operator==(const Board&, const Board&) = default;

 private:
  std::array<Mark, kCells> cells_;
};

// Raises InvalidCell, OccupiedCell, GameOver or EmptyMarkRejected.
Board apply_move(const Board& board, int cell, Mark mark);

Outcome outcome(const Board& board);

// Empty cells in ascending order; empty when the game is over.
std::vector<int> legal_moves(const Board& board);

// Row-major string over {X, O, .}.
std::string encode_key(const Board& board);
// Inverse of encode_key; nullopt on wrong length or alphabet.
std::optional<Board> decode_key(std::string_view key);

// Base-3 index in [0, 3^9) with Empty=0, Cross=1, Nought=2, cell 1 least
// significant. Bijective with encode_key; used for dense tables.
int board_index(const Board& board);

// Side to move given who opened the game; Empty when counts are inconsistent
// with that first mover.
Mark side_to_move(const Board& board, Mark first_mover);

// Multi-line text rendering for terminals.
std::string pretty(const Board& board);

}  // namespace swarmplay
