#pragma once

#include <map>
#include <vector>

#include "swarmplay/board.hpp"

namespace swarmplay::oracle {

// Game-theoretic value from Cross's point of view: +1 Cross forces a win,
// -1 Nought forces a win, 0 best play draws.
using GameValue = int;

// Throws UnreachableBoard unless `board` can arise in legal play with
// `to_move` next (either side may have opened). Terminal boards must have
// been finished by the winner's last move.
void check_reachable(const Board& board, Mark to_move);
bool is_reachable(const Board& board, Mark to_move);

// Memoized exhaustive search. The memo covers every reachable
// (position, side to move) pair, is built once on first use and is read-only
// afterwards, so concurrent callers are safe.
GameValue minimax_value(const Board& board, Mark to_move);

// Same search with no memo at all; exponential, for cross-checking.
GameValue minimax_value_unmemoized(const Board& board, Mark to_move);

// All moves achieving the minimax value, ascending. Board must be Ongoing.
std::vector<int> best_moves(const Board& board, Mark to_move);

struct ReachableStats {
  long state_count = 0;
  std::map<Outcome, long> terminal_counts;  // CrossWins, NoughtWins, Draw
};

// Breadth-first enumeration of distinct positions reachable from the empty
// board with `first_mover` opening.
ReachableStats enumerate_reachable(Mark first_mover = Mark::Cross);

// Distinct positions reachable by legal play from the empty board under
// either first mover, in BFS order with Cross-first positions discovered
// first. A position reachable under both first movers appears once.
std::vector<Board> reachable_positions();

}  // namespace swarmplay::oracle
