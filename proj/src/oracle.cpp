#include "swarmplay/oracle.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <mutex>
#include <unordered_set>

#include "swarmplay/error.hpp"

namespace swarmplay::oracle {
namespace {

constexpr int kPositions = 19683;  // 3^9
constexpr std::int8_t kUnknown = 2;

int side_slot(Mark to_move) { return to_move == Mark::Cross ? 0 : 1; }

GameValue terminal_value(Outcome o) {
  switch (o) {
    case Outcome::CrossWins: return 1;
    case Outcome::NoughtWins: return -1;
    default: return 0;
  }
}

bool better(GameValue candidate, GameValue incumbent, Mark to_move) {
  return to_move == Mark::Cross ? candidate > incumbent : candidate < incumbent;
}

struct Memo {
  std::array<std::array<std::int8_t, 2>, kPositions> values;
  Memo() {
    for (auto& v : values) v.fill(kUnknown);
  }
};

GameValue solve(const Board& board, Mark to_move, Memo& memo) {
  auto& slot = memo.values[board_index(board)][side_slot(to_move)];
  if (slot != kUnknown) return slot;
  const Outcome o = outcome(board);
  GameValue best;
  if (o != Outcome::Ongoing) {
    best = terminal_value(o);
  } else {
    best = to_move == Mark::Cross ? -2 : 2;
    for (int cell : legal_moves(board)) {
      const GameValue v = solve(board.placed(cell, to_move), opponent(to_move), memo);
      if (better(v, best, to_move)) best = v;
    }
  }
  slot = static_cast<std::int8_t>(best);
  return best;
}

GameValue solve_plain(const Board& board, Mark to_move) {
  const Outcome o = outcome(board);
  if (o != Outcome::Ongoing) return terminal_value(o);
  GameValue best = to_move == Mark::Cross ? -2 : 2;
  for (int cell : legal_moves(board)) {
    const GameValue v = solve_plain(board.placed(cell, to_move), opponent(to_move));
    if (better(v, best, to_move)) best = v;
  }
  return best;
}

const Memo& full_memo() {
  static Memo memo;
  static std::once_flag once;
  std::call_once(once, [] {
    solve(Board{}, Mark::Cross, memo);
    solve(Board{}, Mark::Nought, memo);
  });
  return memo;
}

bool winner_finished_last(const Board& board, Mark winner) {
  // Some winner mark whose removal leaves no winning line.
  for (int cell = 1; cell <= kCells; ++cell) {
    if (board.at(cell) == winner && !board.placed(cell, Mark::Empty).has_line(winner)) return true;
  }
  return false;
}

}  // namespace

bool is_reachable(const Board& board, Mark to_move) {
  if (to_move == Mark::Empty) return false;
  const int crosses = board.count(Mark::Cross);
  const int noughts = board.count(Mark::Nought);
  const int diff = crosses - noughts;
  if (diff > 1 || diff < -1) return false;
  if (diff == 1 && to_move != Mark::Nought) return false;
  if (diff == -1 && to_move != Mark::Cross) return false;
  const bool cross_line = board.has_line(Mark::Cross);
  const bool nought_line = board.has_line(Mark::Nought);
  if (cross_line && nought_line) return false;
  if (cross_line) return to_move == Mark::Nought && winner_finished_last(board, Mark::Cross);
  if (nought_line) return to_move == Mark::Cross && winner_finished_last(board, Mark::Nought);
  return true;
}

void check_reachable(const Board& board, Mark to_move) {
  if (!is_reachable(board, to_move)) {
    throw Error(ErrorCode::UnreachableBoard,
                encode_key(board) + " with " + std::string(to_string(to_move)) + " to move");
  }
}

GameValue minimax_value(const Board& board, Mark to_move) {
  check_reachable(board, to_move);
  const GameValue v = full_memo().values[board_index(board)][side_slot(to_move)];
  if (v == kUnknown) {
    // Only positions not reachable from the empty board land here, which
    // check_reachable already excludes.
    throw Error(ErrorCode::UnreachableBoard, encode_key(board));
  }
  return v;
}

GameValue minimax_value_unmemoized(const Board& board, Mark to_move) {
  check_reachable(board, to_move);
  return solve_plain(board, to_move);
}

std::vector<int> best_moves(const Board& board, Mark to_move) {
  check_reachable(board, to_move);
  const GameValue target = minimax_value(board, to_move);
  std::vector<int> moves;
  for (int cell : legal_moves(board)) {
    if (minimax_value(board.placed(cell, to_move), opponent(to_move)) == target) moves.push_back(cell);
  }
  return moves;
}

ReachableStats enumerate_reachable(Mark first_mover) {
  ReachableStats stats;
  std::unordered_set<int> seen;
  std::deque<Board> queue{Board{}};
  seen.insert(board_index(Board{}));
  while (!queue.empty()) {
    const Board b = queue.front();
    queue.pop_front();
    ++stats.state_count;
    const Outcome o = outcome(b);
    if (o != Outcome::Ongoing) {
      ++stats.terminal_counts[o];
      continue;
    }
    const Mark mover = side_to_move(b, first_mover);
    for (int cell : legal_moves(b)) {
      const Board next = b.placed(cell, mover);
      if (seen.insert(board_index(next)).second) queue.push_back(next);
    }
  }
  return stats;
}

std::vector<Board> reachable_positions() {
  std::vector<Board> out;
  std::unordered_set<int> seen;
  for (Mark first : {Mark::Cross, Mark::Nought}) {
    std::deque<Board> queue{Board{}};
    std::unordered_set<int> local{board_index(Board{})};
    while (!queue.empty()) {
      const Board b = queue.front();
      queue.pop_front();
      if (seen.insert(board_index(b)).second) out.push_back(b);
      if (outcome(b) != Outcome::Ongoing) continue;
      const Mark mover = side_to_move(b, first);
      for (int cell : legal_moves(b)) {
        const Board next = b.placed(cell, mover);
        if (local.insert(board_index(next)).second) queue.push_back(next);
      }
    }
  }
  return out;
}

}  // namespace swarmplay::oracle
