#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "swarmplay/board.hpp"
#include "swarmplay/config.hpp"
#include "swarmplay/ib.hpp"
#include "swarmplay/rng.hpp"
#include "swarmplay/sim.hpp"
#include "swarmplay/strategy.hpp"
#include "swarmplay/vision.hpp"

// Live games between a human (Nought) and the drone swarm (Cross).
namespace swarmplay::service {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

enum class StrategyKind { RL, IB };
enum class Player { Human, Drones };
std::string_view to_string(Player p);

struct SessionConfig {
  StrategyKind strategy = StrategyKind::IB;
  std::string policy_path;  // RL only
  ib::IbConfig ib;
  Player first_mover = Player::Human;
  bool vision_enabled = false;
  // Release telemetry at 100 records per wall-clock second; the drone's
  // Cross lands on the board when its last record is released.
  bool realtime = false;
  sim::SimConfig sim;
  vision::VisionConfig vision;
  std::uint64_t seed = 1;
};

struct HistoryEntry {
  Player mover = Player::Human;
  int cell = 0;
  double time = 0.0;  // simulated seconds since the session started
};

// Append-only telemetry record log with any number of readers, each keeping
// its own cursor.
class TelemetryLog {
 public:
  struct Batch {
    std::vector<std::string> records;
    bool finished = false;  // closed and nothing left past the cursor
  };

  void append(std::string record);
  void close();
  bool closed() const;
  std::size_t size() const;
  // Records from `cursor` on; waits up to `wait` when none are available.
  Batch read_from(std::size_t cursor, std::chrono::milliseconds wait) const;

 private:
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::vector<std::string> records_;
  bool closed_ = false;
};

class Session {
 public:
  // Plays the drones' opening move when they start.
  Session(std::string id, SessionConfig cfg, std::shared_ptr<const Strategy> strategy);

  const std::string& id() const { return id_; }

  // Throws InvalidCell, OccupiedCell, OutOfTurn or GameOver.
  json submit_move(int cell);
  // Throws VisionDisabled, the detection errors, then as submit_move.
  json submit_image(const vision::GrayImage& image);
  json view();

  std::shared_ptr<TelemetryLog> telemetry() const { return telemetry_; }
  // Moves realtime telemetry forward to the current wall-clock time.
  void advance();
  bool finished();
  Clock::time_point last_access();
  // Closes the telemetry stream; used on expiry and shutdown.
  void close();

  // Moves and outcome only; deterministic for a fixed seed and inputs.
  json transcript();

  // Called once, with the transcript, when the game ends.
  std::function<void(const json&)> on_finish;

 private:
  struct PendingFlight {
    int cell = 0;
    std::vector<std::string> records;
    std::size_t released = 0;
    Clock::time_point start;
  };

  Mark mark_of(Player p) const { return p == Player::Human ? Mark::Nought : Mark::Cross; }
  std::optional<Player> turn_locked() const;
  json submit_move_locked(int cell);
  json transcript_locked() const;
  Outcome status_locked() const { return outcome(board_); }
  void play_drones_locked();
  void land_locked(int cell);
  void advance_locked(Clock::time_point now);
  void check_invariants_locked() const;
  json view_locked() const;
  void touch_locked() { last_access_ = Clock::now(); }
  void notify_if_finished_locked();

  std::string id_;
  SessionConfig cfg_;
  std::shared_ptr<const Strategy> strategy_;
  Rng rng_;
  sim::SwarmSim sim_;
  Board board_;
  std::optional<Board> last_detected_;
  std::vector<HistoryEntry> history_;
  std::optional<int> last_human_;
  std::optional<int> last_drone_;
  std::optional<PendingFlight> pending_;
  std::shared_ptr<TelemetryLog> telemetry_ = std::make_shared<TelemetryLog>();
  Clock::time_point last_access_ = Clock::now();
  bool finish_reported_ = false;
  std::mutex mu_;
};

class SessionManager {
 public:
  explicit SessionManager(ServiceConfig cfg);
  ~SessionManager();

  // Missing fields fall back to the service config. Throws InvalidConfig.
  SessionConfig session_config_from_json(const json& body) const;

  // Throws PolicyLoadFailure or InvalidConfig.
  std::shared_ptr<Session> create(const SessionConfig& cfg);
  // Throws UnknownSession.
  std::shared_ptr<Session> get(const std::string& id);

  // Drops sessions idle longer than the configured timeout.
  void expire_idle();
  std::size_t size();
  void shutdown();
  const ServiceConfig& config() const { return cfg_; }

 private:
  std::shared_ptr<const Strategy> strategy_for(const SessionConfig& cfg);
  void persist(const json& transcript);

  ServiceConfig cfg_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::map<std::string, std::shared_ptr<const rl::Policy>> policies_;
  Rng id_rng_;
  std::mutex transcript_mu_;
};

}  // namespace swarmplay::service
