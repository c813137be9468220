#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "swarmplay/sim.hpp"
#include "swarmplay/vision.hpp"

namespace swarmplay::service {

// Service settings. On disk this is a plain text file of `key = value`
// lines; '#' starts a comment. Recognised keys:
//
//   host, port, policy_path, idle_timeout_s, transcript_path
//   sim.cruise_altitude, sim.kp, sim.kd, sim.max_speed, sim.max_acceleration,
//   sim.arrival_tolerance, sim.rest_speed, sim.max_flight_ticks
//   vision.threshold, vision.empty_max, vision.cross_max, vision.guard_margin,
//   vision.board_x, vision.board_y, vision.board_size, vision.cell_margin
//
// sim.kp / sim.kd take one number for all axes or three comma-separated.
// The SWARMPLAY_PORT environment variable overrides `port`.
struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string policy_path;      // default policy for RL sessions
  double idle_timeout_s = 1800;
  std::string transcript_path;  // empty = transcripts not persisted
  sim::SimConfig sim;
  vision::VisionConfig vision;
};

inline constexpr const char* kPortEnvVar = "SWARMPLAY_PORT";

// Throws InvalidConfig naming the offending line.
ServiceConfig parse_config(std::string_view text, ServiceConfig base = {});
// Throws Io or InvalidConfig.
ServiceConfig load_config(const std::filesystem::path& path);
// Applies SWARMPLAY_PORT if set. Throws InvalidConfig on a bad value.
void apply_environment(ServiceConfig& cfg);

}  // namespace swarmplay::service
