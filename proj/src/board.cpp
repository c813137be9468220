#include "swarmplay/board.hpp"

#include <algorithm>

#include "swarmplay/error.hpp"

namespace swarmplay {

std::string_view to_string(Mark m) {
  switch (m) {
    case Mark::Cross: return "X";
    case Mark::Nought: return "O";
    case Mark::Empty: return ".";
  }
  return "?";
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Ongoing: return "ongoing";
    case Outcome::CrossWins: return "cross_wins";
    case Outcome::NoughtWins: return "nought_wins";
    case Outcome::Draw: return "draw";
  }
  return "?";
}

std::optional<Outcome> outcome_from_string(std::string_view s) {
  for (Outcome o : {Outcome::Ongoing, Outcome::CrossWins, Outcome::NoughtWins, Outcome::Draw}) {
    if (to_string(o) == s) return o;
  }
  return std::nullopt;
}

Board Board::with(std::initializer_list<int> crosses, std::initializer_list<int> noughts) {
  Board b;
  for (int c : crosses) b.cells_.at(c - 1) = Mark::Cross;
  for (int c : noughts) b.cells_.at(c - 1) = Mark::Nought;
  return b;
}

Mark Board::at(int cell) const {
  if (cell < 1 || cell > kCells) {
    throw Error(ErrorCode::InvalidCell, "cell " + std::to_string(cell) + " outside 1..9");
  }
  return cells_[cell - 1];
}

int Board::count(Mark m) const {
  return static_cast<int>(std::count(cells_.begin(), cells_.end(), m));
}

Board Board::placed(int cell, Mark mark) const {
  Board b = *this;
  b.cells_[cell - 1] = mark;
  return b;
}

Board Board::swapped() const {
  Board b;
  for (int i = 0; i < kCells; ++i) b.cells_[i] = opponent(cells_[i]);
  return b;
}

bool Board::has_line(Mark m) const {
  for (const auto& line : kLines) {
    if (cells_[line[0]] == m && cells_[line[1]] == m && cells_[line[2]] == m) return true;
  }
  return false;
}

Outcome outcome(const Board& board) {
  if (board.has_line(Mark::Cross)) return Outcome::CrossWins;
  if (board.has_line(Mark::Nought)) return Outcome::NoughtWins;
  if (board.full()) return Outcome::Draw;
  return Outcome::Ongoing;
}

Board apply_move(const Board& board, int cell, Mark mark) {
  if (mark == Mark::Empty) throw Error(ErrorCode::EmptyMarkRejected, "cannot place an empty mark");
  if (board.at(cell) != Mark::Empty) {
    throw Error(ErrorCode::OccupiedCell, "cell " + std::to_string(cell) + " is occupied");
  }
  if (outcome(board) != Outcome::Ongoing) throw Error(ErrorCode::GameOver, "game is already over");
  return board.placed(cell, mark);
}

std::vector<int> legal_moves(const Board& board) {
  std::vector<int> moves;
  if (outcome(board) != Outcome::Ongoing) return moves;
  for (int c = 1; c <= kCells; ++c) {
    if (board.at(c) == Mark::Empty) moves.push_back(c);
  }
  return moves;
}

std::string encode_key(const Board& board) {
  std::string key(kCells, '.');
  for (int i = 0; i < kCells; ++i) key[i] = to_string(board.cells()[i])[0];
  return key;
}

std::optional<Board> decode_key(std::string_view key) {
  if (key.size() != kCells) return std::nullopt;
  std::array<Mark, kCells> cells{};
  for (int i = 0; i < kCells; ++i) {
    switch (key[i]) {
      case 'X': cells[i] = Mark::Cross; break;
      case 'O': cells[i] = Mark::Nought; break;
      case '.': cells[i] = Mark::Empty; break;
      default: return std::nullopt;
    }
  }
  return Board(cells);
}

int board_index(const Board& board) {
  int index = 0;
  for (int i = kCells - 1; i >= 0; --i) {
    const Mark m = board.cells()[i];
    index = index * 3 + (m == Mark::Empty ? 0 : m == Mark::Cross ? 1 : 2);
  }
  return index;
}

Mark side_to_move(const Board& board, Mark first_mover) {
  const int diff = board.count(first_mover) - board.count(opponent(first_mover));
  if (diff == 0) return first_mover;
  if (diff == 1) return opponent(first_mover);
  return Mark::Empty;
}

std::string pretty(const Board& board) {
  std::string out;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      const int cell = r * 3 + c + 1;
      const Mark m = board.at(cell);
      out += ' ';
      out += m == Mark::Empty ? static_cast<char>('0' + cell) : to_string(m)[0];
      out += c < 2 ? " |" : "\n";
    }
    if (r < 2) out += "---+---+---\n";
  }
  return out;
}

}  // namespace swarmplay
