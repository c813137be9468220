#include "swarmplay/tournament.hpp"

#include <cstdio>
#include <ostream>
#include <thread>

#include "swarmplay/error.hpp"

namespace swarmplay::harness {

std::string_view to_string(FirstMoverPolicy p) {
  switch (p) {
    case FirstMoverPolicy::AlternateEach: return "alternate";
    case FirstMoverPolicy::AlwaysA: return "a";
    case FirstMoverPolicy::AlwaysB: return "b";
  }
  return "?";
}

std::optional<FirstMoverPolicy> first_mover_from_string(std::string_view s) {
  for (auto p : {FirstMoverPolicy::AlternateEach, FirstMoverPolicy::AlwaysA, FirstMoverPolicy::AlwaysB}) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

StratumResult& StratumResult::operator+=(const StratumResult& o) {
  games += o.games;
  a_wins += o.a_wins;
  b_wins += o.b_wins;
  draws += o.draws;
  total_plies += o.total_plies;
  return *this;
}

StratumResult TournamentResult::total() const {
  StratumResult t = a_first;
  t += b_first;
  return t;
}

GameRecord play_game(const Strategy& cross, const Strategy& nought, bool cross_first, Rng& rng) {
  GameRecord rec;
  Board board;
  Mark mover = cross_first ? Mark::Cross : Mark::Nought;
  while (outcome(board) == Outcome::Ongoing) {
    const Strategy& s = mover == Mark::Cross ? cross : nought;
    const bool opened = (mover == Mark::Cross) == cross_first;
    const int cell = s.choose(board, mover, opened, rng);
    board = apply_move(board, cell, mover);
    rec.moves.push_back(cell);
    mover = opponent(mover);
  }
  rec.outcome = outcome(board);
  return rec;
}

namespace {

bool a_moves_first(FirstMoverPolicy p, long game) {
  switch (p) {
    case FirstMoverPolicy::AlwaysA: return true;
    case FirstMoverPolicy::AlwaysB: return false;
    case FirstMoverPolicy::AlternateEach: return game % 2 == 0;
  }
  return true;
}

void play_range(const Strategy& a, const Strategy& b, const TournamentSpec& spec, long begin,
                long stride, TournamentResult& out) {
  for (long g = begin; g < spec.games; g += stride) {
    Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(g)));
    const bool a_first = a_moves_first(spec.first_mover, g);
    const GameRecord rec = play_game(a, b, a_first, rng);
    StratumResult& s = a_first ? out.a_first : out.b_first;
    ++s.games;
    s.total_plies += static_cast<long>(rec.moves.size());
    if (rec.outcome == Outcome::CrossWins) {
      ++s.a_wins;
    } else if (rec.outcome == Outcome::NoughtWins) {
      ++s.b_wins;
    } else {
      ++s.draws;
    }
  }
}

}  // namespace

TournamentResult run_tournament(const Strategy& a, const Strategy& b, const TournamentSpec& spec) {
  if (spec.games < 1) throw Error(ErrorCode::InvalidParams, "games must be >= 1");
  const int jobs = std::max(1, spec.jobs);
  std::vector<TournamentResult> parts(static_cast<std::size_t>(jobs));
  if (jobs == 1) {
    play_range(a, b, spec, 0, 1, parts[0]);
  } else {
    std::vector<std::jthread> workers;
    for (int j = 0; j < jobs; ++j) {
      workers.emplace_back([&, j] { play_range(a, b, spec, j, jobs, parts[static_cast<std::size_t>(j)]); });
    }
  }
  TournamentResult result;
  result.a_name = a.name();
  result.b_name = b.name();
  for (const auto& p : parts) {
    result.a_first += p.a_first;
    result.b_first += p.b_first;
  }
  return result;
}

TournamentResult run_tournament(const TournamentSpec& spec) {
  const auto a = make_strategy(spec.a, spec.ib);
  const auto b = make_strategy(spec.b, spec.ib);
  return run_tournament(*a, *b, spec);
}

void write_tournament_csv(std::ostream& out, const TournamentResult& r) {
  out << "first_mover,a_wins,b_wins,draws,mean_plies\n";
  auto row = [&out](std::string_view label, const StratumResult& s) {
    char plies[32];
    std::snprintf(plies, sizeof plies, "%.4f", s.mean_plies());
    out << label << ',' << s.a_wins << ',' << s.b_wins << ',' << s.draws << ',' << plies << '\n';
  };
  row("A", r.a_first);
  row("B", r.b_first);
  row("all", r.total());
}

std::string format_table(const TournamentResult& r) {
  auto pct = [](long n, long d) { return d ? 100.0 * static_cast<double>(n) / d : 0.0; };
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "A = %s (X)   B = %s (O)\n", r.a_name.c_str(), r.b_name.c_str());
  out += line;
  std::snprintf(line, sizeof line, "%-12s %8s %16s %16s %16s %10s\n", "first mover", "games",
                "A wins", "B wins", "draws", "mean plies");
  out += line;
  auto row = [&](const char* label, const StratumResult& s) {
    std::snprintf(line, sizeof line, "%-12s %8ld %8ld (%5.1f%%) %8ld (%5.1f%%) %8ld (%5.1f%%) %10.2f\n",
                  label, s.games, s.a_wins, pct(s.a_wins, s.games), s.b_wins, pct(s.b_wins, s.games),
                  s.draws, pct(s.draws, s.games), s.mean_plies());
    out += line;
  };
  row("A", r.a_first);
  row("B", r.b_first);
  row("all", r.total());
  return out;
}

}  // namespace swarmplay::harness
