#pragma once

#include <optional>

#include "swarmplay/board.hpp"
#include "swarmplay/rng.hpp"

// Improved Basic strategy for the drone (Cross) side: a rule-based player
// that wins or blocks when it can and otherwise mixes line-building with
// deliberate random moves so human opponents can still win.
namespace swarmplay::ib {

struct IbConfig {
  double p_random_opening = 0.5;  // chance the opening move is a random cell
  double p_random_midgame = 0.5;  // chance a quiet move is a random cell
  std::uint64_t seed = 0;         // root seed for callers that own the Rng

  friend bool operator==(const IbConfig&, const IbConfig&) = default;
};

inline constexpr int kOpeningCell = 5;

// Lowest empty cell that completes a line for `mark`, if any.
std::optional<int> find_winning_cell(const Board& board, Mark mark);

// Lowest empty cell that gives Cross two marks in a line whose third cell is
// still empty, if any.
std::optional<int> find_two_in_line_cell(const Board& board);

// Priority order:
//   1. complete a Cross line
//   2. block a Nought line
//   3. empty board with drones opening: center, or a random cell with
//      probability p_random_opening
//   4. otherwise a two-in-line cell, or a random cell with probability
//      p_random_midgame (also random when no two-in-line cell exists)
// Throws GameOver or NotDronesTurn.
int ib_move(const Board& board, const IbConfig& cfg, Rng& rng, bool drones_move_first);

}  // namespace swarmplay::ib
