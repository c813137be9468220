// swarmplay: training, tournaments, vision self-test, terminal play and the
// play service, behind one binary.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "swarmplay/config.hpp"
#include "swarmplay/error.hpp"
#include "swarmplay/http_server.hpp"
#include "swarmplay/oracle.hpp"
#include "swarmplay/rl.hpp"
#include "swarmplay/session.hpp"
#include "swarmplay/tournament.hpp"
#include "swarmplay/vision.hpp"

namespace sp = swarmplay;

namespace {

struct TrainArgs {
  std::string method = "ql";
  sp::rl::TDParams params;
  std::string opponent = "mixture";
  std::string policy_out;
  std::string trace_out;
  bool quiet = false;
};

int cmd_train(TrainArgs a) {
  const auto method = sp::rl::method_from_string(a.method);
  if (!method) throw sp::Error(sp::ErrorCode::InvalidParams, "unknown method '" + a.method + "'");
  const auto kind = sp::rl::opponent_kind_from_string(a.opponent);
  if (!kind) throw sp::Error(sp::ErrorCode::InvalidParams, "unknown opponent '" + a.opponent + "'");
  a.params.method = *method;
  a.params.opponent.kind = *kind;
  a.params.validate();

  const std::string stem = std::string(sp::rl::to_string(*method)) + "_seed" + std::to_string(a.params.seed);
  if (a.policy_out.empty()) a.policy_out = "policy_" + stem + ".json";
  if (a.trace_out.empty()) a.trace_out = "trace_" + stem + ".csv";

  sp::rl::Progress progress;
  progress.callback = [&](long done, std::chrono::duration<double> block) {
    if (!a.quiet) std::printf("episodes %7ld  %.3f s / 10K\n", done, block.count() * 1e4 / progress.interval);
    std::fflush(stdout);
  };
  const auto result = sp::rl::train(a.params, {}, progress);
  sp::rl::save_policy(result.policy, a.policy_out);
  sp::rl::save_trace(result.trace, a.trace_out);

  const double per10k = result.elapsed.count() * 1e4 / static_cast<double>(a.params.episodes);
  std::printf("method %s  episodes %ld  total %.3f s  (%.3f s / 10K)\n",
              std::string(sp::rl::to_string(*method)).c_str(), a.params.episodes, result.elapsed.count(), per10k);
  std::printf("final cumulative reward %.4f\n", result.trace.back().cumulative_reward);
  std::printf("policy -> %s\ntrace  -> %s\n", a.policy_out.c_str(), a.trace_out.c_str());
  return 0;
}

struct TournamentArgs {
  sp::harness::TournamentSpec spec;
  std::string first_mover = "alternate";
  std::string csv;
};

int cmd_tournament(TournamentArgs a) {
  const auto fm = sp::harness::first_mover_from_string(a.first_mover);
  if (!fm) throw sp::Error(sp::ErrorCode::InvalidParams, "first mover must be alternate, a or b");
  a.spec.first_mover = *fm;
  const auto result = sp::harness::run_tournament(a.spec);
  std::fputs(sp::harness::format_table(result).c_str(), stdout);
  if (!a.csv.empty()) {
    std::ofstream out(a.csv, std::ios::binary);
    if (!out) throw sp::Error(sp::ErrorCode::Io, "cannot write " + a.csv);
    sp::harness::write_tournament_csv(out, result);
  }
  return 0;
}

struct SelftestArgs {
  double noise = 0.0;
  long sample = -1;  // -1: every reachable position when noise-free, 500 otherwise
  std::uint64_t seed = 1;
  bool swap_bands = false;
  std::string config;
};

int cmd_vision_selftest(const SelftestArgs& a) {
  sp::vision::VisionConfig cfg;
  if (!a.config.empty()) cfg = sp::service::load_config(a.config).vision;
  cfg.render.noise_sigma = a.noise;
  if (a.swap_bands) std::swap(cfg.middle_band, cfg.upper_band);

  const auto positions = sp::oracle::reachable_positions();
  long n = a.sample >= 0 ? a.sample : (a.noise > 0 ? 500 : static_cast<long>(positions.size()));
  n = std::min<long>(n, static_cast<long>(positions.size()));
  // Noisy runs draw a seeded sample; noise-free runs walk the list in order.
  std::vector<std::size_t> order(positions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (n < static_cast<long>(positions.size())) {
    sp::Rng rng(a.seed);
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
      std::swap(order[i], order[i + rng.uniform_index(order.size() - i)]);
    }
  }

  long mismatched = 0, ambiguous = 0;
  std::map<std::pair<char, char>, long> confusions;
  for (long i = 0; i < n; ++i) {
    const sp::Board& truth = positions[order[static_cast<std::size_t>(i)]];
    const auto img = sp::vision::render_board(
        truth, cfg, a.noise > 0 ? std::optional(sp::derive_seed(a.seed, static_cast<std::uint64_t>(i))) : std::nullopt);
    sp::Board seen;
    try {
      seen = sp::vision::detect_board(img, cfg);
    } catch (const sp::Error& e) {
      if (e.code() != sp::ErrorCode::AmbiguousCell) throw;
      ++ambiguous;
      continue;
    }
    if (seen == truth) continue;
    ++mismatched;
    for (int c = 1; c <= sp::kCells; ++c) {
      if (seen.at(c) != truth.at(c)) {
        ++confusions[{sp::to_string(truth.at(c))[0], sp::to_string(seen.at(c))[0]}];
      }
    }
  }
  std::printf("positions %ld  noise_sigma %.1f  mismatched %ld  ambiguous %ld\n", n, a.noise, mismatched, ambiguous);
  for (const auto& [k, count] : confusions) std::printf("  %c read as %c: %ld cells\n", k.first, k.second, count);
  const bool ok = mismatched == 0 && ambiguous == 0;
  std::puts(ok ? "PASS" : "FAIL");
  return ok ? 0 : 1;
}

struct PlayArgs {
  std::string strategy = "ib";
  std::string policy;
  std::string first = "human";
  std::uint64_t seed = 1;
  std::string telemetry_out;
  std::string config;
};

void print_board(const sp::Board& b) { std::fputs(sp::pretty(b).c_str(), stdout); }

int cmd_play(const PlayArgs& a) {
  sp::service::ServiceConfig svc;
  if (!a.config.empty()) svc = sp::service::load_config(a.config);
  sp::service::SessionManager manager(svc);
  nlohmann::json body{{"strategy", a.strategy}, {"first_mover", a.first}, {"seed", a.seed}};
  if (!a.policy.empty()) body["policy_path"] = a.policy;
  auto session = manager.create(manager.session_config_from_json(body));

  auto view = session->view();
  while (view["status"] == "ongoing") {
    print_board(*sp::decode_key(view["board"].get<std::string>()));
    std::printf("your move (1-9): ");
    std::fflush(stdout);
    std::string token;
    if (!(std::cin >> token)) {
      std::puts("\ninput ended before the game finished");
      return 1;
    }
    int cell = 0;
    try {
      std::size_t used = 0;
      cell = std::stoi(token, &used);
      if (used != token.size()) cell = 0;
    } catch (const std::exception&) {
      cell = 0;
    }
    try {
      view = session->submit_move(cell);
    } catch (const sp::Error& e) {
      if (e.code() != sp::ErrorCode::InvalidCell && e.code() != sp::ErrorCode::OccupiedCell) throw;
      std::printf("%s: %s\n", std::string(sp::error_name(e.code())).c_str(), e.detail().c_str());
      continue;
    }
    if (!view["moves"]["drones"].is_null()) std::printf("drones play %d\n", view["moves"]["drones"].get<int>());
  }
  print_board(*sp::decode_key(view["board"].get<std::string>()));

  const auto transcript = session->transcript();
  std::printf("moves:");
  for (const auto& m : transcript["moves"]) {
    std::printf(" %c%d", m["mover"] == "human" ? 'O' : 'X', m["cell"].get<int>());
  }
  std::printf("\noutcome: %s\n", transcript["outcome"].get<std::string>().c_str());

  if (!a.telemetry_out.empty()) {
    std::ofstream out(a.telemetry_out, std::ios::binary);
    if (!out) throw sp::Error(sp::ErrorCode::Io, "cannot write " + a.telemetry_out);
    for (const auto& r : session->telemetry()->read_from(0, std::chrono::milliseconds(0)).records) out << r << '\n';
  }
  return 0;
}

struct ServeArgs {
  std::string config;
  int port = -1;
  std::string host;
};

int cmd_serve(const ServeArgs& a) {
  sp::service::ServiceConfig cfg;
  if (!a.config.empty()) cfg = sp::service::load_config(a.config);
  sp::service::apply_environment(cfg);
  if (a.port >= 0) cfg.port = a.port;
  if (!a.host.empty()) cfg.host = a.host;

  // Stop cleanly on SIGINT/SIGTERM: block them everywhere and wait in one thread.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  sp::service::HttpServer server(cfg);
  const int port = server.bind();
  std::printf("listening on http://%s:%d\n", cfg.host.c_str(), port);
  std::fflush(stdout);
  std::jthread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.listen();
  // listen() can also return on its own; wake the waiter so it can be joined.
  pthread_kill(waiter.native_handle(), SIGTERM);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SwarmPlay: tic-tac-toe against a drone swarm"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* t = app.add_subcommand("train", "train a tabular TD agent");
  t->add_option("--method", train.method, "ql, sarsa or sv")->capture_default_str();
  t->add_option("--episodes", train.params.episodes)->capture_default_str();
  t->add_option("--seed", train.params.seed)->capture_default_str();
  t->add_option("--alpha", train.params.learning_rate, "learning rate")->capture_default_str();
  t->add_option("--gamma", train.params.discount, "discount")->capture_default_str();
  t->add_option("--epsilon", train.params.epsilon, "exploration rate")->capture_default_str();
  t->add_option("--opponent", train.opponent, "random, minimax, mixture or selfplay")->capture_default_str();
  t->add_option("--p-random", train.params.opponent.p_random, "mixture: chance of a random move")
      ->capture_default_str();
  t->add_option("--snapshot-interval", train.params.opponent.snapshot_interval, "selfplay: episodes per snapshot")
      ->capture_default_str();
  t->add_option("--policy-out", train.policy_out, "default policy_<METHOD>_seed<N>.json");
  t->add_option("--trace-out", train.trace_out, "default trace_<METHOD>_seed<N>.csv");
  t->add_flag("--quiet", train.quiet, "no per-10K progress lines");

  TournamentArgs tour;
  auto* tm = app.add_subcommand("tournament", "play strategy A (X) against B (O)");
  tm->add_option("--a", tour.spec.a, "random, minimax, ib or rl:<policy file>")->capture_default_str();
  tm->add_option("--b", tour.spec.b)->capture_default_str();
  tm->add_option("--games", tour.spec.games)->capture_default_str();
  tm->add_option("--first-mover", tour.first_mover, "alternate, a or b")->capture_default_str();
  tm->add_option("--seed", tour.spec.seed)->capture_default_str();
  tm->add_option("--jobs", tour.spec.jobs, "worker threads")->capture_default_str();
  tm->add_option("--ib-p-opening", tour.spec.ib.p_random_opening)->capture_default_str();
  tm->add_option("--ib-p-midgame", tour.spec.ib.p_random_midgame)->capture_default_str();
  tm->add_option("--csv", tour.csv, "also write the table as CSV");

  SelftestArgs st;
  auto* vs = app.add_subcommand("vision-selftest", "render and re-detect reachable positions");
  vs->add_option("--noise", st.noise, "Gaussian pixel noise sigma")->capture_default_str();
  vs->add_option("--sample", st.sample, "positions to check (default: all, or 500 with noise)");
  vs->add_option("--seed", st.seed)->capture_default_str();
  vs->add_flag("--swap-bands", st.swap_bands, "fault injection: swap the cross and circle bands");
  vs->add_option("--config", st.config, "service config file for the vision settings");

  PlayArgs play;
  auto* pl = app.add_subcommand("play", "play in the terminal (you are O)");
  pl->add_option("--strategy", play.strategy, "ib or rl")->capture_default_str();
  pl->add_option("--policy", play.policy, "policy file for rl");
  pl->add_option("--first", play.first, "human or drones")->capture_default_str();
  pl->add_option("--seed", play.seed)->capture_default_str();
  pl->add_option("--telemetry-out", play.telemetry_out, "write flight telemetry as NDJSON");
  pl->add_option("--config", play.config, "service config file");

  ServeArgs serve;
  auto* sv = app.add_subcommand("serve", "run the HTTP play service");
  sv->add_option("--config", serve.config, "service config file");
  sv->add_option("--port", serve.port, "overrides config and SWARMPLAY_PORT");
  sv->add_option("--host", serve.host);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*t) return cmd_train(train);
    if (*tm) return cmd_tournament(tour);
    if (*vs) return cmd_vision_selftest(st);
    if (*pl) return cmd_play(play);
    if (*sv) return cmd_serve(serve);
  } catch (const sp::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
