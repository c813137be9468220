#include "swarmplay/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "swarmplay/error.hpp"

namespace swarmplay::service {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view v) {
  double out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) throw std::invalid_argument("not a number");
  return out;
}

long to_long(std::string_view v) {
  long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) throw std::invalid_argument("not an integer");
  return out;
}

sim::Vec3 to_gains(std::string_view v) {
  if (v.find(',') == std::string_view::npos) return sim::Vec3::Constant(to_double(v));
  sim::Vec3 g;
  for (int i = 0; i < 3; ++i) {
    const auto comma = v.find(',');
    if ((i < 2) == (comma == std::string_view::npos)) throw std::invalid_argument("need 1 or 3 values");
    g[i] = to_double(trim(v.substr(0, comma)));
    v = comma == std::string_view::npos ? std::string_view{} : v.substr(comma + 1);
  }
  return g;
}

using Setter = std::function<void(ServiceConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table{
      {"host", [](ServiceConfig& c, std::string_view v) { c.host = std::string(v); }},
      {"port", [](ServiceConfig& c, std::string_view v) { c.port = static_cast<int>(to_long(v)); }},
      {"policy_path", [](ServiceConfig& c, std::string_view v) { c.policy_path = std::string(v); }},
      {"idle_timeout_s", [](ServiceConfig& c, std::string_view v) { c.idle_timeout_s = to_double(v); }},
      {"transcript_path", [](ServiceConfig& c, std::string_view v) { c.transcript_path = std::string(v); }},
      {"sim.cruise_altitude", [](ServiceConfig& c, std::string_view v) { c.sim.cruise_altitude = to_double(v); }},
      {"sim.kp", [](ServiceConfig& c, std::string_view v) { c.sim.kp = to_gains(v); }},
      {"sim.kd", [](ServiceConfig& c, std::string_view v) { c.sim.kd = to_gains(v); }},
      {"sim.max_speed", [](ServiceConfig& c, std::string_view v) { c.sim.max_speed = to_double(v); }},
      {"sim.max_acceleration", [](ServiceConfig& c, std::string_view v) { c.sim.max_acceleration = to_double(v); }},
      {"sim.arrival_tolerance", [](ServiceConfig& c, std::string_view v) { c.sim.arrival_tolerance = to_double(v); }},
      {"sim.rest_speed", [](ServiceConfig& c, std::string_view v) { c.sim.rest_speed = to_double(v); }},
      {"sim.max_flight_ticks", [](ServiceConfig& c, std::string_view v) { c.sim.max_flight_ticks = to_long(v); }},
      {"vision.threshold", [](ServiceConfig& c, std::string_view v) { c.vision.threshold = static_cast<int>(to_long(v)); }},
      {"vision.empty_max", [](ServiceConfig& c, std::string_view v) { c.vision.empty_max = to_double(v); }},
      {"vision.cross_max", [](ServiceConfig& c, std::string_view v) { c.vision.cross_max = to_double(v); }},
      {"vision.guard_margin", [](ServiceConfig& c, std::string_view v) { c.vision.guard_margin = to_double(v); }},
      {"vision.board_x", [](ServiceConfig& c, std::string_view v) { c.vision.grid.board_x = static_cast<int>(to_long(v)); }},
      {"vision.board_y", [](ServiceConfig& c, std::string_view v) { c.vision.grid.board_y = static_cast<int>(to_long(v)); }},
      {"vision.board_size", [](ServiceConfig& c, std::string_view v) { c.vision.grid.board_size = static_cast<int>(to_long(v)); }},
      {"vision.cell_margin", [](ServiceConfig& c, std::string_view v) { c.vision.grid.cell_margin = static_cast<int>(to_long(v)); }},
  };
  return table;
}

void validate(const ServiceConfig& c) {
  if (c.port < 0 || c.port > 65535) throw Error(ErrorCode::InvalidConfig, "port out of range");
  if (!(c.vision.empty_max >= 0 && c.vision.empty_max < c.vision.cross_max && c.vision.cross_max <= 1)) {
    throw Error(ErrorCode::InvalidConfig, "vision bands need 0 <= empty_max < cross_max <= 1");
  }
  if (c.vision.threshold < 0 || c.vision.threshold > 256) {
    throw Error(ErrorCode::InvalidConfig, "vision threshold must be 0..256");
  }
  c.sim.validate();
}

}  // namespace

ServiceConfig parse_config(std::string_view text, ServiceConfig cfg) {
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no);
    if (eq == std::string_view::npos) throw Error(ErrorCode::InvalidConfig, where + ": expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    auto it = setters().find(key);
    if (it == setters().end()) {
      throw Error(ErrorCode::InvalidConfig, where + ": unknown key '" + std::string(key) + "'");
    }
    try {
      it->second(cfg, value);
    } catch (const std::invalid_argument& e) {
      throw Error(ErrorCode::InvalidConfig,
                  where + ": bad value for " + std::string(key) + " (" + e.what() + ")");
    }
  }
  validate(cfg);
  return cfg;
}

ServiceConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void apply_environment(ServiceConfig& cfg) {
  const char* port = std::getenv(kPortEnvVar);
  if (port == nullptr || *port == '\0') return;
  try {
    cfg.port = static_cast<int>(to_long(port));
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::InvalidConfig, std::string(kPortEnvVar) + " is not an integer");
  }
  validate(cfg);
}

}  // namespace swarmplay::service
