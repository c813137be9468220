#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "swarmplay/board.hpp"
#include "swarmplay/ib.hpp"
#include "swarmplay/rng.hpp"
#include "swarmplay/strategy.hpp"

namespace swarmplay::harness {

enum class FirstMoverPolicy { AlternateEach, AlwaysA, AlwaysB };
std::string_view to_string(FirstMoverPolicy p);
std::optional<FirstMoverPolicy> first_mover_from_string(std::string_view s);

// Strategy A plays Cross (the drone side), B plays Nought.
struct TournamentSpec {
  std::string a = "ib";
  std::string b = "random";
  long games = 100;
  FirstMoverPolicy first_mover = FirstMoverPolicy::AlternateEach;
  std::uint64_t seed = 1;
  int jobs = 1;
  ib::IbConfig ib;
};

struct StratumResult {
  long games = 0;
  long a_wins = 0;
  long b_wins = 0;
  long draws = 0;
  long total_plies = 0;

  double mean_plies() const { return games ? static_cast<double>(total_plies) / games : 0.0; }
  StratumResult& operator+=(const StratumResult& o);
  friend bool operator==(const StratumResult&, const StratumResult&) = default;
};

struct TournamentResult {
  std::string a_name;
  std::string b_name;
  StratumResult a_first;
  StratumResult b_first;

  StratumResult total() const;
};

struct GameRecord {
  Outcome outcome = Outcome::Ongoing;
  std::vector<int> moves;
};

// One full game. Throws if a strategy returns an illegal move.
GameRecord play_game(const Strategy& cross, const Strategy& nought, bool cross_first, Rng& rng);

// Game g uses Rng(derive_seed(spec.seed, g)) and its first mover depends on
// g only, so results do not depend on how games are split across jobs.
TournamentResult run_tournament(const Strategy& a, const Strategy& b, const TournamentSpec& spec);
// Builds both strategies from their spec strings; throws PolicyLoadFailure.
TournamentResult run_tournament(const TournamentSpec& spec);

// CSV: first_mover,a_wins,b_wins,draws,mean_plies with rows A, B and all.
void write_tournament_csv(std::ostream& out, const TournamentResult& r);
// Outcome table stratified by first mover, for the console.
std::string format_table(const TournamentResult& r);

}  // namespace swarmplay::harness
