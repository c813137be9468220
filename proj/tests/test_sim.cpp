#include "doctest.h"

#include "swarmplay/error.hpp"
#include "swarmplay/rng.hpp"
#include "swarmplay/sim.hpp"

using namespace swarmplay;
using namespace swarmplay::sim;

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

int airborne(const SwarmSim& s) {
  int n = 0;
  for (const auto& d : s.drones()) n += d.airborne();
  return n;
}

}  // namespace

TEST_CASE("dispatch") {
  SwarmSim s;
  const auto d = s.dispatch(5);
  CHECK(d.drone_id == 1);
  CHECK((d.plan.waypoints[2] - s.config().cell_center(5)).norm() == 0.0);
  CHECK(d.plan.waypoints[0].z() == s.config().cruise_altitude);
  CHECK(s.drones()[0].phase == Phase::TakingOff);
  CHECK(code_of([&] { s.dispatch(1); }) == ErrorCode::FlightInProgress);
}

TEST_CASE("cell centres follow board numbering") {
  const SimConfig c;
  CHECK(c.cell_center(1).isApprox(Vec3(1.0 / 6, 0.2, 0.0)));
  CHECK(c.cell_center(5).isApprox(Vec3(0.5, 0.6, 0.0)));
  CHECK(c.cell_center(9).isApprox(Vec3(5.0 / 6, 1.0, 0.0)));
}

TEST_CASE("fleet runs out after five flights") {
  SwarmSim s;
  for (int c : {1, 2, 3, 4, 5}) s.run_flight(c);
  CHECK(code_of([&] { s.run_flight(6); }) == ErrorCode::FleetExhausted);
  CHECK(code_of([&] { s.run_flight(3); }) == ErrorCode::CellOccupied);
}

TEST_CASE("occupied cell is refused") {
  SwarmSim s;
  s.run_flight(1);
  CHECK(code_of([&] { s.run_flight(1); }) == ErrorCode::CellOccupied);
  CHECK(code_of([&] { s.dispatch(0); }) == ErrorCode::InvalidCell);
}

TEST_CASE("100 ticks per simulated second") {
  SwarmSim s;
  for (int i = 0; i < 100; ++i) s.step();
  CHECK(s.tick() == 100);
  CHECK(s.time() == doctest::Approx(1.0));
}

TEST_CASE("every flight settles on its cell centre") {
  for (int cell = 1; cell <= 9; ++cell) {
    SwarmSim s;
    const auto log = s.run_flight(cell);
    const auto& d = s.drones()[0];
    CHECK(d.phase == Phase::Landed);
    CHECK((d.position - s.config().cell_center(cell)).norm() <= 0.02);
    CHECK(static_cast<long>(log.size()) < 1000);  // under 10 simulated seconds
    CHECK(log.back().tick == s.tick());
  }
}

TEST_CASE("landed drones stay put") {
  SwarmSim s;
  s.run_flight(7);
  const Vec3 at = s.drones()[0].position;
  for (int i = 0; i < 300; ++i) s.step();
  CHECK(s.drones()[0].position == at);
  CHECK(s.drones()[0].phase == Phase::Landed);
  s.run_flight(3);
  CHECK(s.drones()[0].position == at);
}

TEST_CASE("random dispatch sequences keep one drone in the air and respect caps") {
  Rng rng(77);
  const SimConfig cfg;
  for (int seq = 0; seq < 1000; ++seq) {
    SwarmSim s(cfg);
    std::vector<int> cells{1, 2, 3, 4, 5, 6, 7, 8, 9};
    const int flights = 1 + static_cast<int>(rng.uniform_index(5));
    for (int f = 0; f < flights; ++f) {
      const std::size_t k = rng.uniform_index(cells.size());
      const int cell = cells[k];
      cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(k));
      s.dispatch(cell);
      // interleave a rejected second dispatch mid-flight
      if (rng.bernoulli(0.2)) CHECK(code_of([&] { s.dispatch(cells.front()); }) == ErrorCode::FlightInProgress);
      long ticks = 0;
      while (s.in_flight()) {
        const auto t = s.step();
        CHECK(airborne(s) <= 1);
        for (const auto& d : t.drones) {
          CHECK(d.velocity.norm() <= cfg.max_speed + 1e-9);
          CHECK(d.acceleration.norm() <= cfg.max_acceleration + 1e-9);
        }
        REQUIRE(++ticks <= cfg.max_flight_ticks);
      }
    }
  }
}

TEST_CASE("identical inputs give identical telemetry") {
  SwarmSim a, b;
  for (int c : {5, 1, 9}) {
    const auto ta = a.run_flight(c);
    const auto tb = b.run_flight(c);
    REQUIRE(ta.size() == tb.size());
    for (std::size_t i = 0; i < ta.size(); ++i) CHECK(to_ndjson(ta[i]) == to_ndjson(tb[i]));
  }
}

TEST_CASE("tight timeout and bad configs") {
  SimConfig c;
  c.max_flight_ticks = 50;
  SwarmSim s(c);
  CHECK(code_of([&] { s.run_flight(9); }) == ErrorCode::ConvergenceTimeout);

  SimConfig bad;
  bad.max_speed = 0;
  CHECK(code_of([&] { bad.validate(); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("telemetry records") {
  SwarmSim s;
  s.dispatch(2);
  const std::string line = to_ndjson(s.step());
  for (const char* f : {"\"tick\":1", "\"drone_id\":1", "\"x\":", "\"vz\":", "\"phase\":\"taking_off\""}) {
    CHECK(line.find(f) != std::string::npos);
  }
  CHECK(line.back() == '\n');
}
