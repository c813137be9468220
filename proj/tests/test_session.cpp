#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <thread>

#include "swarmplay/error.hpp"
#include "swarmplay/rl.hpp"
#include "swarmplay/session.hpp"

using namespace swarmplay;
using namespace swarmplay::service;

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

const std::string& policy_path() {
  static const std::string path = [] {
    rl::TDParams p;
    p.episodes = 5000;
    const auto file = std::filesystem::temp_directory_path() / "swarmplay_session_policy.json";
    rl::save_policy(rl::train(p).policy, file);
    return file.string();
  }();
  return path;
}

SessionConfig cfg_from(SessionManager& m, json body) { return m.session_config_from_json(body); }

// Plays the lowest empty cell until the game ends.
json play_out(Session& s) {
  json v = s.view();
  while (v["status"] == "ongoing") {
    const Board b = *decode_key(v["board"].get<std::string>());
    v = s.submit_move(legal_moves(b).front());
  }
  return v;
}

}  // namespace

TEST_CASE("creating sessions") {
  SessionManager m({});
  auto ib = m.create(cfg_from(m, {{"first_mover", "drones"}, {"ib", {{"p_random_opening", 0.0}}}}));
  const json v = ib->view();
  CHECK(v["board"] == "....X....");
  CHECK(v["turn"] == "human");
  CHECK(v["history"].size() == 1);
  CHECK(v["telemetry_records"].get<long>() > 0);

  auto rl = m.create(cfg_from(m, {{"strategy", "rl"}, {"policy_path", policy_path()}}));
  CHECK(rl->view()["board"] == ".........");
  CHECK(rl->view()["status"] == "ongoing");
  CHECK(rl->view()["turn"] == "human");

  CHECK(code_of([&] { m.create(cfg_from(m, {{"strategy", "rl"}, {"policy_path", "/nope.json"}})); }) ==
        ErrorCode::PolicyLoadFailure);
  CHECK(code_of([&] { cfg_from(m, {{"strategy", "chess"}}); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([&] { cfg_from(m, {{"first_mover", 3}}); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([&] { m.get("0000000000000000"); }) == ErrorCode::UnknownSession);
  CHECK(m.get(ib->id()) == ib);
  CHECK(ib->id().size() == 16);
  CHECK(m.size() == 2);
}

TEST_CASE("a move gets exactly one drone reply") {
  SessionManager m({});
  auto s = m.create(cfg_from(m, {{"strategy", "rl"}, {"policy_path", policy_path()}}));
  const json v = s->submit_move(1);
  CHECK(v["moves"]["human"] == 1);
  const int reply = v["moves"]["drones"].get<int>();
  CHECK(reply != 1);
  const Board b = *decode_key(v["board"].get<std::string>());
  CHECK(b.count(Mark::Cross) == 1);
  CHECK(b.at(reply) == Mark::Cross);
  CHECK(v["history"].size() == 2);
  CHECK(v["turn"] == "human");

  CHECK(code_of([&] { s->submit_move(1); }) == ErrorCode::OccupiedCell);
  CHECK(code_of([&] { s->submit_move(0); }) == ErrorCode::InvalidCell);

  const json done = play_out(*s);
  CHECK(done["status"] != "ongoing");
  CHECK(done["turn"] == "none");
  CHECK(code_of([&] { s->submit_move(legal_moves(Board{}).front()); }) == ErrorCode::GameOver);
}

TEST_CASE("realtime sessions refuse moves mid-flight") {
  SessionManager m({});
  auto s = m.create(cfg_from(m, {{"realtime", true}}));
  s->submit_move(5);
  const json v = s->view();
  CHECK(v["flight_pending"] == true);
  CHECK(v["turn"] == "drones");
  CHECK(code_of([&] { s->submit_move(1); }) == ErrorCode::OutOfTurn);
  // records trickle out at 100 per second until the drone lands
  const auto first = s->telemetry()->size();
  std::this_thread::sleep_for(std::chrono::milliseconds(100));
  s->advance();
  CHECK(s->telemetry()->size() > first);
  for (int i = 0; i < 200 && s->view()["flight_pending"] == true; ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  const json landed = s->view();
  CHECK(landed["flight_pending"] == false);
  CHECK(landed["turn"] == "human");
  CHECK(decode_key(landed["board"].get<std::string>())->count(Mark::Cross) == 1);
}

TEST_CASE("camera moves") {
  SessionManager m({});
  const vision::VisionConfig vc;
  auto s = m.create(cfg_from(m, {{"vision", true}, {"first_mover", "drones"}, {"ib", {{"p_random_opening", 0.0}}}}));
  const Board start = *decode_key(s->view()["board"].get<std::string>());

  CHECK(code_of([&] { s->submit_image(vision::render_board(start, vc)); }) == ErrorCode::NoChange);
  CHECK(code_of([&] { s->submit_image(vision::render_board(start.placed(1, Mark::Nought).placed(2, Mark::Nought), vc)); }) ==
        ErrorCode::MultipleChanges);
  CHECK(code_of([&] { s->submit_image(vision::render_board(Board{}, vc)); }) == ErrorCode::NonHumanChange);

  const json v = s->submit_image(vision::render_board(start.placed(7, Mark::Nought), vc));
  CHECK(v["moves"]["human"] == 7);
  CHECK(v["last_detected_board"] == encode_key(start.placed(7, Mark::Nought)));
  CHECK(v["history"].size() == 3);

  auto blind = m.create(cfg_from(m, {}));
  CHECK(code_of([&] { blind->submit_image(vision::render_board(Board::with({}, {1}), vc)); }) ==
        ErrorCode::VisionDisabled);
}

TEST_CASE("telemetry streams") {
  SessionManager m({});
  auto s = m.create(cfg_from(m, {}));
  auto log = s->telemetry();
  auto empty = log->read_from(0, std::chrono::milliseconds(0));
  CHECK(empty.records.empty());
  CHECK_FALSE(empty.finished);

  s->submit_move(5);
  const auto after_one = log->size();
  CHECK(after_one > 0);
  // a reader joining mid-way sees only the tail, in tick order
  const auto tail = log->read_from(after_one / 2, std::chrono::milliseconds(0));
  CHECK(tail.records.size() == after_one - after_one / 2);
  long last_tick = -1;
  for (const auto& r : tail.records) {
    const long tick = json::parse(r)["tick"].get<long>();
    CHECK(tick > last_tick);
    last_tick = tick;
  }

  play_out(*s);
  const auto all = log->read_from(0, std::chrono::milliseconds(0));
  CHECK(all.finished);
  CHECK(all.records.size() == log->size());
}

TEST_CASE("transcripts are deterministic and persisted") {
  const auto path = std::filesystem::temp_directory_path() / "swarmplay_transcripts.jsonl";
  std::filesystem::remove(path);
  ServiceConfig svc;
  svc.transcript_path = path.string();
  SessionManager m(svc);
  std::vector<json> transcripts;
  for (int run = 0; run < 2; ++run) {
    auto s = m.create(cfg_from(m, {{"first_mover", "drones"}, {"seed", 77}}));
    play_out(*s);
    transcripts.push_back(s->transcript());
  }
  CHECK(transcripts[0]["moves"] == transcripts[1]["moves"]);
  CHECK(transcripts[0]["outcome"] == transcripts[1]["outcome"]);

  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    CHECK(json::parse(line)["moves"] == transcripts[0]["moves"]);
    ++lines;
  }
  CHECK(lines == 2);
  std::filesystem::remove(path);
}

TEST_CASE("idle sessions expire") {
  ServiceConfig svc;
  svc.idle_timeout_s = 0.05;
  SessionManager m(svc);
  auto s = m.create(cfg_from(m, {}));
  const std::string id = s->id();
  CHECK(m.size() == 1);
  std::this_thread::sleep_for(std::chrono::milliseconds(120));
  m.expire_idle();
  CHECK(m.size() == 0);
  CHECK(s->telemetry()->closed());
  CHECK(code_of([&] { m.get(id); }) == ErrorCode::UnknownSession);
}

TEST_CASE("sessions run in parallel") {
  SessionManager m({});
  std::vector<std::jthread> players;
  std::atomic<int> finished{0};
  for (int t = 0; t < 8; ++t) {
    players.emplace_back([&, t] {
      for (int g = 0; g < 5; ++g) {
        auto s = m.create(m.session_config_from_json({{"seed", t * 100 + g}, {"first_mover", g % 2 ? "drones" : "human"}}));
        if (play_out(*s)["status"] != "ongoing") ++finished;
      }
    });
  }
  players.clear();
  CHECK(finished == 40);
  CHECK(m.size() == 40);
}
