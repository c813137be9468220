#include "swarmplay/sim.hpp"

#include <charconv>

#include "swarmplay/board.hpp"
#include "swarmplay/error.hpp"

namespace swarmplay::sim {

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Idle: return "idle";
    case Phase::TakingOff: return "taking_off";
    case Phase::Cruising: return "cruising";
    case Phase::Descending: return "descending";
    case Phase::Landed: return "landed";
  }
  return "?";
}

void SimConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (!(arrival_tolerance > 0)) fail("arrival tolerance must be positive");
  if (!(kd.minCoeff() > 0)) fail("kd must be positive on every axis");
  if (!(kp.minCoeff() > 0)) fail("kp must be positive on every axis");
  if (!(max_speed > 0) || !(max_acceleration > 0)) fail("speed and acceleration caps must be positive");
  if (!(board_width > 0) || !(board_height > 0)) fail("board size must be positive");
  if (!(cruise_altitude > 0)) fail("cruise altitude must be positive");
  if (max_flight_ticks < 1) fail("flight tick cap must be >= 1");
}

Vec3 SimConfig::cell_center(int cell) const {
  if (cell < 1 || cell > kCells) throw Error(ErrorCode::InvalidCell, std::to_string(cell));
  const int col = (cell - 1) % 3;
  const int row = (cell - 1) / 3;
  return Vec3((col + 0.5) * board_width / 3.0, (row + 0.5) * board_height / 3.0, 0.0);
}

namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, end);
}

Vec3 clamp_norm(const Vec3& v, double cap) {
  const double n = v.norm();
  return n > cap ? Vec3(v * (cap / n)) : v;
}

}  // namespace

std::string to_ndjson(const Telemetry& t) {
  std::string out;
  for (const DroneSnapshot& d : t.drones) {
    out += "{\"tick\":" + std::to_string(t.tick) + ",\"drone_id\":" + std::to_string(d.drone_id);
    const char* names[] = {"x", "y", "z", "vx", "vy", "vz"};
    const double values[] = {d.position.x(), d.position.y(), d.position.z(),
                             d.velocity.x(), d.velocity.y(), d.velocity.z()};
    for (int i = 0; i < 6; ++i) {
      out += ",\"";
      out += names[i];
      out += "\":";
      append_number(out, values[i]);
    }
    out += ",\"phase\":\"";
    out += to_string(d.phase);
    out += "\"}\n";
  }
  return out;
}

SwarmSim::SwarmSim(const SimConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  for (int i = 0; i < kFleetSize; ++i) {
    DroneState d;
    d.id = i + 1;
    d.home = cfg_.homes[i];
    d.position = d.home;
    drones_.push_back(d);
  }
  plans_.resize(kFleetSize);
  next_waypoint_.assign(kFleetSize, 0);
}

bool SwarmSim::in_flight() const {
  for (const auto& d : drones_) {
    if (d.airborne()) return true;
  }
  return false;
}

SwarmSim::Dispatch SwarmSim::dispatch(int cell) {
  const Vec3 target = cfg_.cell_center(cell);
  for (const auto& d : drones_) {
    if (d.phase == Phase::Landed && d.assigned_cell == cell) {
      throw Error(ErrorCode::CellOccupied, "drone " + std::to_string(d.id) + " already on cell " +
                                               std::to_string(cell));
    }
  }
  if (in_flight()) throw Error(ErrorCode::FlightInProgress, "one drone flies at a time");
  for (std::size_t i = 0; i < drones_.size(); ++i) {
    DroneState& d = drones_[i];
    if (d.phase != Phase::Idle) continue;
    FlightPlan plan{{
        Vec3(d.home.x(), d.home.y(), cfg_.cruise_altitude),
        Vec3(target.x(), target.y(), cfg_.cruise_altitude),
        target,
    }};
    plans_[i] = plan;
    next_waypoint_[i] = 0;
    d.phase = Phase::TakingOff;
    d.assigned_cell = cell;
    return Dispatch{d.id, plan};
  }
  throw Error(ErrorCode::FleetExhausted, "all " + std::to_string(kFleetSize) + " drones used");
}

Telemetry SwarmSim::step() {
  ++tick_;
  Telemetry t;
  t.tick = tick_;
  for (std::size_t i = 0; i < drones_.size(); ++i) {
    DroneState& d = drones_[i];
    if (!d.airborne()) continue;
    int& wp = next_waypoint_[i];
    const Vec3 goal = plans_[i].waypoints[wp];

    const Vec3 error = goal - d.position;
    const Vec3 accel = clamp_norm(cfg_.kp.cwiseProduct(error) - cfg_.kd.cwiseProduct(d.velocity),
                                  cfg_.max_acceleration);
    d.velocity = clamp_norm(d.velocity + accel * kTickPeriod, cfg_.max_speed);
    d.position += d.velocity * kTickPeriod;

    const bool arrived = (plans_[i].waypoints[wp] - d.position).norm() <= cfg_.arrival_tolerance;
    if (wp < 2) {
      if (arrived) {
        ++wp;
        d.phase = wp == 1 ? Phase::Cruising : Phase::Descending;
      }
    } else if (arrived && d.velocity.norm() < cfg_.rest_speed) {
      d.phase = Phase::Landed;
      d.velocity.setZero();
    }
    t.drones.push_back(DroneSnapshot{d.id, d.position, d.velocity, accel, d.phase});
  }
  return t;
}

std::vector<Telemetry> SwarmSim::run_flight(int cell) {
  const Dispatch job = dispatch(cell);
  std::vector<Telemetry> log;
  const DroneState& drone = drones_[job.drone_id - 1];
  for (long n = 0; n < cfg_.max_flight_ticks; ++n) {
    log.push_back(step());
    if (drone.phase == Phase::Landed) return log;
  }
  throw Error(ErrorCode::ConvergenceTimeout, "drone " + std::to_string(job.drone_id) +
                                                 " did not land within " +
                                                 std::to_string(cfg_.max_flight_ticks) + " ticks");
}

}  // namespace swarmplay::sim
