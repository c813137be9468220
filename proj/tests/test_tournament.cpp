#include "doctest.h"

#include <filesystem>
#include <sstream>

#include "swarmplay/error.hpp"
#include "swarmplay/rl.hpp"
#include "swarmplay/strategy.hpp"
#include "swarmplay/tournament.hpp"

using namespace swarmplay;
using namespace swarmplay::harness;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("strategy factory") {
  CHECK(make_strategy("random")->name() == "random");
  CHECK(make_strategy("minimax")->name() == "minimax");
  CHECK(make_strategy("ib")->name() == "ib");
  CHECK(code_of([] { make_strategy("alphazero"); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { make_strategy("rl:/nonexistent.json"); }) == ErrorCode::PolicyLoadFailure);
}

TEST_CASE("strategies only return legal moves for either mark") {
  rl::TDParams p;
  p.episodes = 2000;
  auto policy = std::make_shared<const rl::Policy>(rl::train(p).policy);
  const RandomStrategy random;
  const MinimaxStrategy minimax;
  const IbStrategy ib;
  const PolicyStrategy rl_player(policy);
  const std::vector<const Strategy*> all{&random, &minimax, &ib, &rl_player};
  Rng rng(3);
  for (const Strategy* x : all) {
    for (const Strategy* o : all) {
      for (bool cross_first : {true, false}) {
        const auto rec = play_game(*x, *o, cross_first, rng);
        CHECK(rec.outcome != Outcome::Ongoing);
        Board b;
        Mark m = cross_first ? Mark::Cross : Mark::Nought;
        for (int c : rec.moves) {
          b = apply_move(b, c, m);
          m = opponent(m);
        }
        CHECK(outcome(b) == rec.outcome);
      }
    }
  }
}

TEST_CASE("minimax against itself always draws") {
  TournamentSpec spec;
  spec.a = "minimax";
  spec.b = "minimax";
  spec.games = 100;
  const auto r = run_tournament(spec);
  CHECK(r.total().draws == 100);
}

TEST_CASE("random against random favours the first mover") {
  TournamentSpec spec;
  spec.a = "random";
  spec.b = "random";
  spec.games = 10000;
  const auto r = run_tournament(spec);
  const auto first_wins = r.a_first.a_wins + r.b_first.b_wins;
  const auto second_wins = r.a_first.b_wins + r.b_first.a_wins;
  CHECK(first_wins > second_wins);
  // frozen fixture for the default seed
  CHECK(r.a_first.games == 5000);
  CHECK(r.total().a_wins + r.total().b_wins + r.total().draws == 10000);
  CHECK(static_cast<double>(first_wins) / 10000 == doctest::Approx(0.585).epsilon(0.05));
}

TEST_CASE("tournaments are deterministic and independent of worker count") {
  TournamentSpec spec;
  spec.a = "ib";
  spec.b = "random";
  spec.games = 2000;
  spec.seed = 9;
  std::ostringstream one, four, again;
  write_tournament_csv(one, run_tournament(spec));
  spec.jobs = 4;
  write_tournament_csv(four, run_tournament(spec));
  write_tournament_csv(again, run_tournament(spec));
  CHECK(one.str() == four.str());
  CHECK(four.str() == again.str());
}

TEST_CASE("first-mover policies and table shape") {
  TournamentSpec spec;
  spec.a = "ib";
  spec.b = "minimax";
  spec.games = 50;
  spec.first_mover = FirstMoverPolicy::AlwaysB;
  const auto r = run_tournament(spec);
  CHECK(r.a_first.games == 0);
  CHECK(r.b_first.games == 50);
  CHECK(r.total().a_wins == 0);  // nobody beats minimax

  std::ostringstream csv;
  write_tournament_csv(csv, r);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "first_mover,a_wins,b_wins,draws,mean_plies");
  std::getline(lines, line);
  CHECK(line == "A,0,0,0,0.0000");
  std::getline(lines, line);
  CHECK(line.rfind("B,", 0) == 0);
  std::getline(lines, line);
  CHECK(line.rfind("all,", 0) == 0);

  CHECK(format_table(r).find("first mover") != std::string::npos);
  CHECK(first_mover_from_string("alternate") == FirstMoverPolicy::AlternateEach);
  CHECK_FALSE(first_mover_from_string("x").has_value());

  spec.games = 0;
  CHECK(code_of([&] { run_tournament(spec); }) == ErrorCode::InvalidParams);
}

TEST_CASE("policy strategy plays nought through the swapped board") {
  rl::TDParams p;
  p.episodes = 5000;
  const auto path = std::filesystem::temp_directory_path() / "swarmplay_tournament_policy.json";
  rl::save_policy(rl::train(p).policy, path);
  TournamentSpec spec;
  spec.a = "random";
  spec.b = "rl:" + path.string();
  spec.games = 200;
  const auto r = run_tournament(spec);
  CHECK(r.b_name == "rl-QL");
  CHECK(r.total().b_wins > r.total().a_wins);
  std::filesystem::remove(path);
}
