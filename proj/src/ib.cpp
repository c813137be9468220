#include "swarmplay/ib.hpp"

#include "swarmplay/error.hpp"

namespace swarmplay::ib {
namespace {

int random_empty_cell(const Board& board, Rng& rng) {
  const auto moves = legal_moves(board);
  return moves[rng.uniform_index(moves.size())];
}

}  // namespace

std::optional<int> find_winning_cell(const Board& board, Mark mark) {
  for (int cell = 1; cell <= kCells; ++cell) {
    if (board.at(cell) == Mark::Empty && board.placed(cell, mark).has_line(mark)) return cell;
  }
  return std::nullopt;
}

std::optional<int> find_two_in_line_cell(const Board& board) {
  for (int cell = 1; cell <= kCells; ++cell) {
    if (board.at(cell) != Mark::Empty) continue;
    for (const auto& line : kLines) {
      int crosses = 0;
      int empties = 0;
      bool on_line = false;
      for (int i : line) {
        const Mark m = board.cells()[i];
        crosses += m == Mark::Cross;
        empties += m == Mark::Empty;
        on_line = on_line || i == cell - 1;
      }
      // Before the move: one Cross and two empties, one of them `cell`.
      if (on_line && crosses == 1 && empties == 2) return cell;
    }
  }
  return std::nullopt;
}

int ib_move(const Board& board, const IbConfig& cfg, Rng& rng, bool drones_move_first) {
  if (outcome(board) != Outcome::Ongoing) throw Error(ErrorCode::GameOver, encode_key(board));
  const Mark first = drones_move_first ? Mark::Cross : Mark::Nought;
  if (side_to_move(board, first) != Mark::Cross) {
    throw Error(ErrorCode::NotDronesTurn, encode_key(board));
  }

  if (auto win = find_winning_cell(board, Mark::Cross)) return *win;
  if (auto block = find_winning_cell(board, Mark::Nought)) return *block;

  if (board.empty() && drones_move_first) {
    return rng.bernoulli(cfg.p_random_opening) ? random_empty_cell(board, rng) : kOpeningCell;
  }
  if (!rng.bernoulli(cfg.p_random_midgame)) {
    if (auto build = find_two_in_line_cell(board)) return *build;
  }
  return random_empty_cell(board, rng);
}

}  // namespace swarmplay::ib
