#include "swarmplay/session.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>

#include "swarmplay/error.hpp"

namespace swarmplay::service {

std::string_view to_string(Player p) { return p == Player::Human ? "human" : "drones"; }

// --- TelemetryLog ---------------------------------------------------------

void TelemetryLog::append(std::string record) {
  {
    std::lock_guard lock(mu_);
    if (closed_) return;
    records_.push_back(std::move(record));
  }
  cv_.notify_all();
}

void TelemetryLog::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

bool TelemetryLog::closed() const {
  std::lock_guard lock(mu_);
  return closed_;
}

std::size_t TelemetryLog::size() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

TelemetryLog::Batch TelemetryLog::read_from(std::size_t cursor, std::chrono::milliseconds wait) const {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, wait, [&] { return records_.size() > cursor || closed_; });
  Batch batch;
  if (cursor < records_.size()) {
    batch.records.assign(records_.begin() + static_cast<std::ptrdiff_t>(cursor), records_.end());
  }
  batch.finished = closed_;
  return batch;
}

// --- Session --------------------------------------------------------------

namespace {

constexpr auto kRecordPeriod = std::chrono::milliseconds(10);  // 100 records/s in realtime mode

std::vector<std::string> split_records(const std::vector<sim::Telemetry>& log) {
  std::vector<std::string> out;
  for (const auto& t : log) {
    const std::string text = sim::to_ndjson(t);
    std::size_t pos = 0;
    while (pos < text.size()) {
      const auto nl = text.find('\n', pos);
      out.push_back(text.substr(pos, nl - pos));
      pos = nl + 1;
    }
  }
  return out;
}

}  // namespace

Session::Session(std::string id, SessionConfig cfg, std::shared_ptr<const Strategy> strategy)
    : id_(std::move(id)),
      cfg_(std::move(cfg)),
      strategy_(std::move(strategy)),
      rng_(cfg_.seed),
      sim_(cfg_.sim) {
  std::lock_guard lock(mu_);
  if (cfg_.first_mover == Player::Drones) play_drones_locked();
}

std::optional<Player> Session::turn_locked() const {
  if (status_locked() != Outcome::Ongoing) return std::nullopt;
  if (pending_) return Player::Drones;
  const Mark next = side_to_move(board_, mark_of(cfg_.first_mover));
  return next == Mark::Cross ? Player::Drones : Player::Human;
}

void Session::play_drones_locked() {
  const bool drones_first = cfg_.first_mover == Player::Drones;
  const int cell = strategy_->choose(board_, Mark::Cross, drones_first, rng_);
  if (board_.at(cell) != Mark::Empty) {
    throw std::logic_error(strategy_->name() + " chose occupied cell " + std::to_string(cell));
  }
  last_drone_ = cell;
  auto records = split_records(sim_.run_flight(cell));
  if (cfg_.realtime) {
    pending_ = PendingFlight{cell, std::move(records), 0, Clock::now()};
    return;
  }
  for (auto& r : records) telemetry_->append(std::move(r));
  land_locked(cell);
}

void Session::land_locked(int cell) {
  board_ = apply_move(board_, cell, Mark::Cross);
  history_.push_back(HistoryEntry{Player::Drones, cell, sim_.time()});
  check_invariants_locked();
  notify_if_finished_locked();
}

void Session::advance_locked(Clock::time_point now) {
  if (!pending_) return;
  PendingFlight& p = *pending_;
  const auto due = static_cast<std::size_t>((now - p.start) / kRecordPeriod) + 1;
  while (p.released < p.records.size() && p.released < due) {
    telemetry_->append(std::move(p.records[p.released++]));
  }
  if (p.released == p.records.size()) {
    const int cell = p.cell;
    pending_.reset();
    land_locked(cell);
  }
}

void Session::advance() {
  std::lock_guard lock(mu_);
  advance_locked(Clock::now());
}

void Session::check_invariants_locked() const {
  Board replay;
  for (const auto& h : history_) replay = apply_move(replay, h.cell, mark_of(h.mover));
  if (replay != board_) throw std::logic_error("session " + id_ + ": history does not replay to board");
}

void Session::notify_if_finished_locked() {
  if (finish_reported_ || pending_ || status_locked() == Outcome::Ongoing) return;
  finish_reported_ = true;
  telemetry_->close();
  if (on_finish) on_finish(transcript_locked());
}

json Session::submit_move_locked(int cell) {
  advance_locked(Clock::now());
  if (cell < 1 || cell > kCells) {
    throw Error(ErrorCode::InvalidCell, "cell " + std::to_string(cell) + " outside 1..9");
  }
  if (status_locked() != Outcome::Ongoing) throw Error(ErrorCode::GameOver, "game is over");
  if (turn_locked() != Player::Human) throw Error(ErrorCode::OutOfTurn, "the drones are to move");
  board_ = apply_move(board_, cell, Mark::Nought);
  history_.push_back(HistoryEntry{Player::Human, cell, sim_.time()});
  check_invariants_locked();
  last_human_ = cell;
  last_drone_.reset();
  if (status_locked() == Outcome::Ongoing) {
    play_drones_locked();
  } else {
    notify_if_finished_locked();
  }
  return view_locked();
}

json Session::submit_move(int cell) {
  std::lock_guard lock(mu_);
  touch_locked();
  return submit_move_locked(cell);
}

json Session::submit_image(const vision::GrayImage& image) {
  std::lock_guard lock(mu_);
  touch_locked();
  if (!cfg_.vision_enabled) throw Error(ErrorCode::VisionDisabled, "session has vision disabled");
  advance_locked(Clock::now());
  if (status_locked() != Outcome::Ongoing) throw Error(ErrorCode::GameOver, "game is over");
  if (turn_locked() != Player::Human) throw Error(ErrorCode::OutOfTurn, "the drones are to move");
  const Board seen = vision::detect_board(image, cfg_.vision);
  last_detected_ = seen;
  // The camera sees landed drones as crosses, so the expected scene is the
  // current board and the human's move is the only difference.
  const int cell = vision::diff_move(board_, seen);
  return submit_move_locked(cell);
}

json Session::view() {
  std::lock_guard lock(mu_);
  touch_locked();
  advance_locked(Clock::now());
  return view_locked();
}

bool Session::finished() {
  std::lock_guard lock(mu_);
  advance_locked(Clock::now());
  return status_locked() != Outcome::Ongoing && !pending_;
}

Clock::time_point Session::last_access() {
  std::lock_guard lock(mu_);
  return last_access_;
}

void Session::close() { telemetry_->close(); }

json Session::view_locked() const {
  json history = json::array();
  for (const auto& h : history_) {
    history.push_back({{"mover", to_string(h.mover)}, {"cell", h.cell}, {"time", h.time}});
  }
  json drones = json::array();
  for (const auto& d : sim_.drones()) {
    drones.push_back({
        {"id", d.id},
        {"x", d.position.x()},
        {"y", d.position.y()},
        {"z", d.position.z()},
        {"phase", sim::to_string(d.phase)},
        {"cell", d.assigned_cell ? json(*d.assigned_cell) : json(nullptr)},
    });
  }
  const auto turn = turn_locked();
  json v{
      {"id", id_},
      {"board", encode_key(board_)},
      {"status", to_string(status_locked())},
      {"turn", turn ? json(to_string(*turn)) : json("none")},
      {"first_mover", to_string(cfg_.first_mover)},
      {"strategy", cfg_.strategy == StrategyKind::RL ? "rl" : "ib"},
      {"vision", cfg_.vision_enabled},
      {"realtime", cfg_.realtime},
      {"history", std::move(history)},
      {"moves",
       {{"human", last_human_ ? json(*last_human_) : json(nullptr)},
        {"drones", last_drone_ ? json(*last_drone_) : json(nullptr)}}},
      {"flight_pending", pending_.has_value()},
      {"drones", std::move(drones)},
      {"telemetry_records", telemetry_->size()},
  };
  if (last_detected_) v["last_detected_board"] = encode_key(*last_detected_);
  return v;
}

json Session::transcript_locked() const {
  json moves = json::array();
  for (const auto& h : history_) moves.push_back({{"mover", to_string(h.mover)}, {"cell", h.cell}});
  return json{
      {"id", id_},
      {"strategy", cfg_.strategy == StrategyKind::RL ? "rl" : "ib"},
      {"first_mover", to_string(cfg_.first_mover)},
      {"seed", cfg_.seed},
      {"moves", std::move(moves)},
      {"outcome", to_string(status_locked())},
  };
}

json Session::transcript() {
  std::lock_guard lock(mu_);
  return transcript_locked();
}

// --- SessionManager -------------------------------------------------------

SessionManager::SessionManager(ServiceConfig cfg) : cfg_(std::move(cfg)), id_rng_(std::random_device{}()) {}

SessionManager::~SessionManager() { shutdown(); }

SessionConfig SessionManager::session_config_from_json(const json& body) const {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (body.is_null()) return session_config_from_json(json::object());
  if (!body.is_object()) bad("session config must be a JSON object");
  SessionConfig cfg;
  cfg.sim = cfg_.sim;
  cfg.vision = cfg_.vision;
  cfg.policy_path = cfg_.policy_path;
  try {
    const std::string strategy = body.value("strategy", std::string("ib"));
    if (strategy == "rl") {
      cfg.strategy = StrategyKind::RL;
    } else if (strategy == "ib") {
      cfg.strategy = StrategyKind::IB;
    } else {
      bad("strategy must be 'rl' or 'ib'");
    }
    cfg.policy_path = body.value("policy_path", cfg.policy_path);
    const std::string first = body.value("first_mover", std::string("human"));
    if (first == "human") {
      cfg.first_mover = Player::Human;
    } else if (first == "drones") {
      cfg.first_mover = Player::Drones;
    } else {
      bad("first_mover must be 'human' or 'drones'");
    }
    cfg.vision_enabled = body.value("vision", false);
    cfg.realtime = body.value("realtime", false);
    cfg.seed = body.value("seed", std::uint64_t{1});
    if (auto it = body.find("ib"); it != body.end()) {
      cfg.ib.p_random_opening = it->value("p_random_opening", cfg.ib.p_random_opening);
      cfg.ib.p_random_midgame = it->value("p_random_midgame", cfg.ib.p_random_midgame);
    }
  } catch (const json::exception& e) {
    bad(std::string("bad session config field: ") + e.what());
  }
  for (double p : {cfg.ib.p_random_opening, cfg.ib.p_random_midgame}) {
    if (!(p >= 0.0 && p <= 1.0)) bad("IB probabilities must be in [0, 1]");
  }
  return cfg;
}

std::shared_ptr<const Strategy> SessionManager::strategy_for(const SessionConfig& cfg) {
  if (cfg.strategy == StrategyKind::IB) return std::make_shared<IbStrategy>(cfg.ib);
  if (cfg.policy_path.empty()) throw Error(ErrorCode::PolicyLoadFailure, "no policy path configured");
  std::shared_ptr<const rl::Policy> policy;
  {
    std::lock_guard lock(mu_);
    auto it = policies_.find(cfg.policy_path);
    if (it != policies_.end()) policy = it->second;
  }
  if (!policy) {
    try {
      policy = std::make_shared<const rl::Policy>(rl::load_policy(cfg.policy_path));
    } catch (const Error& e) {
      throw Error(ErrorCode::PolicyLoadFailure, cfg.policy_path + ": " + e.what());
    }
    std::lock_guard lock(mu_);
    policies_.emplace(cfg.policy_path, policy);
  }
  return std::make_shared<PolicyStrategy>(policy);
}

std::shared_ptr<Session> SessionManager::create(const SessionConfig& cfg) {
  try {
    cfg.sim.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidConfig, e.detail());
  }
  expire_idle();
  auto strategy = strategy_for(cfg);
  std::string id;
  {
    std::lock_guard lock(mu_);
    do {
      char buf[17];
      std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(id_rng_.next_u64()));
      id = buf;
    } while (sessions_.count(id) != 0);
  }
  auto session = std::make_shared<Session>(id, cfg, std::move(strategy));
  if (!cfg_.transcript_path.empty()) {
    session->on_finish = [this](const json& transcript) { persist(transcript); };
  }
  std::lock_guard lock(mu_);
  sessions_.emplace(id, session);
  return session;
}

std::shared_ptr<Session> SessionManager::get(const std::string& id) {
  expire_idle();
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "no session '" + id + "'");
  return it->second;
}

void SessionManager::expire_idle() {
  const auto cutoff = Clock::now() - std::chrono::duration_cast<Clock::duration>(
                                         std::chrono::duration<double>(cfg_.idle_timeout_s));
  std::lock_guard lock(mu_);
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    if (it->second->last_access() < cutoff) {
      it->second->close();
      it = sessions_.erase(it);
    } else {
      ++it;
    }
  }
}

std::size_t SessionManager::size() {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

void SessionManager::shutdown() {
  std::lock_guard lock(mu_);
  for (auto& [id, s] : sessions_) s->close();
}

void SessionManager::persist(const json& transcript) {
  std::lock_guard lock(transcript_mu_);
  std::ofstream out(cfg_.transcript_path, std::ios::app);
  out << transcript.dump() << '\n';
}

}  // namespace swarmplay::service
