#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "swarmplay/board.hpp"
#include "swarmplay/rng.hpp"

// Tabular temporal-difference learning for the drone (Cross) side.
//
// The agent always plays Cross. Either side may open a game; the state key
// alone tells which, so one table serves both first-mover roles. Opponents
// that need a Cross-side policy for Nought play on the swapped board.
namespace swarmplay::rl {

using StateKey = std::string;

enum class Method { QL, SARSA, SV };

std::string_view to_string(Method m);
std::optional<Method> method_from_string(std::string_view s);  // case-insensitive

struct RewardSchedule {
  double win = 1.0;
  double lose = -1.0;
  double draw_first_mover = 0.1;
  double draw_second_mover = 0.5;

  friend bool operator==(const RewardSchedule&, const RewardSchedule&) = default;
};

struct OpponentSpec {
  enum class Kind { Random, Minimax, MixtureRandomMinimax, SelfPlaySnapshot };
  Kind kind = Kind::MixtureRandomMinimax;
  double p_random = 0.5;          // MixtureRandomMinimax only
  long snapshot_interval = 1000;  // SelfPlaySnapshot: episodes between refreshes

  friend bool operator==(const OpponentSpec&, const OpponentSpec&) = default;
};

std::string_view to_string(OpponentSpec::Kind k);
std::optional<OpponentSpec::Kind> opponent_kind_from_string(std::string_view s);

struct TDParams {
  Method method = Method::QL;
  double learning_rate = 0.2;
  double discount = 0.9;
  double epsilon = 0.3;
  long episodes = 50000;
  std::uint64_t seed = 1;
  OpponentSpec opponent;

  // Throws InvalidParams.
  void validate() const;

  friend bool operator==(const TDParams&, const TDParams&) = default;
};

// Action values for (state, cell). Only entries that were written exist;
// reads of missing entries return 0.
class QTable {
 public:
  struct Row {
    std::array<double, kCells> values{};
    std::uint16_t present = 0;  // bit (cell - 1)
  };

  double get(const StateKey& state, int cell) const;
  bool contains(const StateKey& state, int cell) const;
  void set(const StateKey& state, int cell, double value);
  const Row* row(const StateKey& state) const;

  std::size_t entry_count() const;
  std::size_t state_count() const { return rows_.size(); }
  const std::unordered_map<StateKey, Row>& rows() const { return rows_; }

  friend bool operator==(const QTable& a, const QTable& b);

 private:
  std::unordered_map<StateKey, Row> rows_;
};

// Values of afterstates (the board right after a Cross move).
class VTable {
 public:
  double get(const StateKey& state) const;
  bool contains(const StateKey& state) const { return values_.count(state) != 0; }
  void set(const StateKey& state, double value) { values_[state] = value; }
  std::size_t size() const { return values_.size(); }
  const std::unordered_map<StateKey, double>& values() const { return values_; }

  friend bool operator==(const VTable& a, const VTable& b) { return a.values_ == b.values_; }

 private:
  std::unordered_map<StateKey, double> values_;
};

// One agent step: from S_t the agent played A_t and the world came back at
// S_{t+1} with reward R_{t+1}. next_action is SARSA's A_{t+1}.
struct Transition {
  StateKey state;
  int action = 0;
  double reward = 0.0;
  StateKey next_state;
  std::optional<int> next_action;
  bool terminal = false;
};

// Q(S,A) += alpha * (R + gamma * max_a Q(S',a) - Q(S,A)). Throws IllegalTransition.
void ql_update(QTable& q, const Transition& t, double alpha, double gamma);

// Q(S,A) += alpha * (R + gamma * Q(S',A') - Q(S,A)).
// Throws MissingNextAction or IllegalTransition.
void sarsa_update(QTable& q, const Transition& t, double alpha, double gamma);

// V(S) += alpha * (R + gamma * V(S') - V(S)); a terminal S' counts as 0.
// Throws IllegalTransition.
void sv_update(VTable& v, const StateKey& state, const StateKey& next_state, double reward,
               double alpha, double gamma);

// Epsilon-greedy choice of a Cross move. Greedy ties are broken uniformly.
// For a VTable each candidate is scored by the value of its afterstate.
// Throws NoLegalMoves.
int select_action(const QTable& q, const Board& board, double epsilon, Rng& rng);
int select_action(const VTable& v, const Board& board, double epsilon, Rng& rng);

// Throws OngoingGame.
double terminal_reward(Outcome outcome, bool agent_is_cross, bool agent_moved_first,
                       const RewardSchedule& sched);

struct Policy {
  Method method = Method::QL;
  TDParams params;
  RewardSchedule rewards;
  std::variant<QTable, VTable> table;

  // Cross move for `board` (Cross must be to move).
  int choose(const Board& board, double epsilon, Rng& rng) const;

  friend bool operator==(const Policy&, const Policy&) = default;
};

struct TraceRow {
  long episode = 0;  // 1-based
  double reward = 0.0;
  double cumulative_reward = 0.0;
  Outcome outcome = Outcome::Ongoing;
  bool agent_first = false;
};

using RewardTrace = std::vector<TraceRow>;

// CSV: episode,reward,cumulative_reward,outcome,agent_first
void write_trace_csv(std::ostream& out, const RewardTrace& trace);
void save_trace(const RewardTrace& trace, const std::filesystem::path& path);

struct TrainResult {
  Policy policy;
  RewardTrace trace;
  std::chrono::duration<double> elapsed{};
};

// Called every `interval` episodes with the episode count so far and the
// wall-clock time of that block.
struct Progress {
  long interval = 10000;
  std::function<void(long episodes_done, std::chrono::duration<double> block)> callback;
};

// Throws InvalidParams.
TrainResult train(const TDParams& params, const RewardSchedule& sched = {},
                  const Progress& progress = {});

inline constexpr std::string_view kPolicyFormat = "swarmplay-policy/1";

std::string serialize_policy(const Policy& policy);
Policy parse_policy(std::string_view text);  // FormatVersionMismatch, CorruptEntry
void save_policy(const Policy& policy, const std::filesystem::path& path);  // Io
Policy load_policy(const std::filesystem::path& path);  // Io, FormatVersionMismatch, CorruptEntry

}  // namespace swarmplay::rl
