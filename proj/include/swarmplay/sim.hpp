#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

// Point-mass simulation of the drone fleet. One drone flies at a time:
// it takes off from its home pad, cruises above the target cell and lands
// on the cell centre, driven by a PD law ticked at 100 Hz.
namespace swarmplay::sim {

using Vec3 = Eigen::Vector3d;

inline constexpr double kTickPeriod = 0.01;  // 100 Hz
inline constexpr int kFleetSize = 5;         // Cross never moves more than 5 times

enum class Phase { Idle, TakingOff, Cruising, Descending, Landed };
std::string_view to_string(Phase p);

struct SimConfig {
  // Board frame: origin at the top-left corner of the board, x to the right
  // across the 1.0 m side, y down the 1.2 m side, z up. Cell 1 is top-left.
  double board_width = 1.0;
  double board_height = 1.2;
  double cruise_altitude = 0.5;
  Vec3 kp = Vec3::Constant(9.0);
  Vec3 kd = Vec3::Constant(6.0);
  double max_speed = 1.5;         // m/s
  double max_acceleration = 4.0;  // m/s^2
  double arrival_tolerance = 0.02;  // m
  double rest_speed = 0.05;         // m/s; below this at the last waypoint = landed
  long max_flight_ticks = 3000;     // run_flight safety cap
  // Home pads beside the board's left edge.
  std::array<Vec3, kFleetSize> homes{
      Vec3(-0.3, 0.2, 0.0), Vec3(-0.3, 0.4, 0.0), Vec3(-0.3, 0.6, 0.0),
      Vec3(-0.3, 0.8, 0.0), Vec3(-0.3, 1.0, 0.0),
  };

  // Throws InvalidConfig.
  void validate() const;
  Vec3 cell_center(int cell) const;
};

struct DroneState {
  int id = 0;  // 1-based
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Phase phase = Phase::Idle;
  Vec3 home = Vec3::Zero();
  std::optional<int> assigned_cell;

  bool airborne() const {
    return phase == Phase::TakingOff || phase == Phase::Cruising || phase == Phase::Descending;
  }
};

// takeoff above home -> cruise above cell -> touchdown on cell centre.
struct FlightPlan {
  std::array<Vec3, 3> waypoints;
};

struct DroneSnapshot {
  int drone_id = 0;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();  // applied during this tick
  Phase phase = Phase::Idle;
};

// One tick of simulation. Holds the drones that were flying during the tick
// (including one that landed on it); empty when nothing flew.
struct Telemetry {
  long tick = 0;
  std::vector<DroneSnapshot> drones;
};

// Newline-delimited JSON, one record per drone snapshot:
// {"tick":..,"drone_id":..,"x":..,"y":..,"z":..,"vx":..,"vy":..,"vz":..,"phase":".."}
std::string to_ndjson(const Telemetry& t);

class SwarmSim {
 public:
  struct Dispatch {
    int drone_id = 0;
    FlightPlan plan;
  };

  explicit SwarmSim(const SimConfig& cfg = {});

  // Lowest-id idle drone takes off for `cell`.
  // Throws InvalidCell, CellOccupied, FlightInProgress or FleetExhausted.
  Dispatch dispatch(int cell);

  // Advance 0.01 s. Semi-implicit Euler: velocity first, then position.
  Telemetry step();

  // dispatch + step until the drone lands. Throws ConvergenceTimeout after
  // cfg.max_flight_ticks ticks, plus the dispatch errors.
  std::vector<Telemetry> run_flight(int cell);

  const SimConfig& config() const { return cfg_; }
  const std::vector<DroneState>& drones() const { return drones_; }
  long tick() const { return tick_; }
  double time() const { return static_cast<double>(tick_) * kTickPeriod; }
  bool in_flight() const;

 private:
  SimConfig cfg_;
  std::vector<DroneState> drones_;
  std::vector<FlightPlan> plans_;
  std::vector<int> next_waypoint_;
  long tick_ = 0;
};

}  // namespace swarmplay::sim
