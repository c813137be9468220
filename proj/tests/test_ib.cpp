#include "doctest.h"

#include <cmath>

#include "swarmplay/error.hpp"
#include "swarmplay/ib.hpp"
#include "swarmplay/oracle.hpp"

using namespace swarmplay;
using namespace swarmplay::ib;

namespace {

// Reachable positions with Cross to move, tagged with who opened.
std::vector<std::pair<Board, bool>> cross_to_move() {
  std::vector<std::pair<Board, bool>> out;
  for (const Board& b : oracle::reachable_positions()) {
    if (outcome(b) != Outcome::Ongoing) continue;
    for (bool drones_first : {true, false}) {
      if (side_to_move(b, drones_first ? Mark::Cross : Mark::Nought) == Mark::Cross) {
        out.emplace_back(b, drones_first);
      }
    }
  }
  return out;
}

bool wins_after(const Board& b, int cell, Mark m) { return b.placed(cell, m).has_line(m); }

}  // namespace

TEST_CASE("find_winning_cell") {
  CHECK(find_winning_cell(Board::with({1, 2}, {4, 5}), Mark::Cross) == 3);
  CHECK_FALSE(find_winning_cell(Board{}, Mark::Cross).has_value());
  CHECK(find_winning_cell(Board::with({1, 2, 5, 9}, {}), Mark::Cross) == 3);
  // two wins available: lowest cell
  CHECK(find_winning_cell(Board::with({1, 5, 3}, {2, 4}), Mark::Cross) == 7);
  CHECK(find_winning_cell(Board::with({7}, {1, 2}), Mark::Nought) == 3);
}

TEST_CASE("find_two_in_line_cell") {
  CHECK(find_two_in_line_cell(Board::with({5}, {1})) == 2);   // 2-5-8
  CHECK_FALSE(find_two_in_line_cell(Board{}).has_value());
}

TEST_CASE("ib_move examples") {
  Rng rng(1);
  CHECK(ib_move(Board::with({1, 2}, {4, 5}), {}, rng, true) == 3);  // win beats block
  CHECK(ib_move(Board::with({9}, {1, 2}), {}, rng, false) == 3);    // block
  IbConfig never_random{0.0, 0.0, 0};
  CHECK(ib_move(Board{}, never_random, rng, true) == kOpeningCell);

  auto code = [&](const Board& b, bool first) {
    try {
      ib_move(b, {}, rng, first);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  CHECK(code(Board::with({1, 2, 3}, {4, 5}), true) == ErrorCode::GameOver);
  CHECK(code(Board::with({5}), true) == ErrorCode::NotDronesTurn);
  CHECK(code(Board{}, false) == ErrorCode::NotDronesTurn);
}

TEST_CASE("ib_move wins and blocks whenever it can") {
  const auto positions = cross_to_move();
  Rng rng(42);
  long wins = 0, blocks = 0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const auto& [b, first] = positions[i];
    const bool can_win = find_winning_cell(b, Mark::Cross).has_value();
    int nought_threats = 0;
    for (int c : legal_moves(b)) nought_threats += wins_after(b, c, Mark::Nought);
    const int cell = ib_move(b, {}, rng, first);
    REQUIRE(b.at(cell) == Mark::Empty);
    if (can_win) {
      CHECK(wins_after(b, cell, Mark::Cross));
      ++wins;
    } else if (nought_threats == 1) {
      CHECK(wins_after(b, cell, Mark::Nought));
      ++blocks;
    }
  }
  CHECK(wins >= 1000);
  CHECK(blocks >= 900);  // 976 distinct positions have a single Nought threat
}

TEST_CASE("opening frequency of the centre") {
  Rng rng(2024);
  const long n = 10000;
  long centre = 0;
  for (long i = 0; i < n; ++i) centre += ib_move(Board{}, {}, rng, true) == 5;
  const double p = 0.5 + 0.5 / 9;
  CHECK(std::abs(centre - n * p) <= 3 * std::sqrt(n * p * (1 - p)));
}

TEST_CASE("midgame mixes line building with random moves") {
  // Board with a two-in-line option for Cross and no forced move.
  const Board b = Board::with({5}, {1});
  Rng rng(8);
  IbConfig always_line{0.5, 0.0, 0};
  for (int i = 0; i < 100; ++i) CHECK(ib_move(b, always_line, rng, true) == 2);
  IbConfig always_random{0.5, 1.0, 0};
  std::array<long, 10> hits{};
  for (int i = 0; i < 7000; ++i) ++hits[ib_move(b, always_random, rng, true)];
  for (int c : legal_moves(b)) CHECK(hits[c] > 700);
}
