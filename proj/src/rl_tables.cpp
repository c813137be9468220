#include <algorithm>
#include <bit>
#include <cctype>
#include <limits>

#include "swarmplay/error.hpp"
#include "swarmplay/rl.hpp"

namespace swarmplay::rl {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::QL: return "QL";
    case Method::SARSA: return "SARSA";
    case Method::SV: return "SV";
  }
  return "?";
}

std::optional<Method> method_from_string(std::string_view s) {
  std::string upper(s);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (Method m : {Method::QL, Method::SARSA, Method::SV}) {
    if (to_string(m) == upper) return m;
  }
  return std::nullopt;
}

std::string_view to_string(OpponentSpec::Kind k) {
  switch (k) {
    case OpponentSpec::Kind::Random: return "random";
    case OpponentSpec::Kind::Minimax: return "minimax";
    case OpponentSpec::Kind::MixtureRandomMinimax: return "mixture";
    case OpponentSpec::Kind::SelfPlaySnapshot: return "selfplay";
  }
  return "?";
}

std::optional<OpponentSpec::Kind> opponent_kind_from_string(std::string_view s) {
  using K = OpponentSpec::Kind;
  for (K k : {K::Random, K::Minimax, K::MixtureRandomMinimax, K::SelfPlaySnapshot}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

void TDParams::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidParams, what); };
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) fail("learning rate must be in (0, 1]");
  if (!(discount >= 0.0 && discount <= 1.0)) fail("discount must be in [0, 1]");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) fail("epsilon must be in [0, 1]");
  if (episodes < 1) fail("episodes must be >= 1");
  if (!(opponent.p_random >= 0.0 && opponent.p_random <= 1.0)) fail("p_random must be in [0, 1]");
  if (opponent.snapshot_interval < 1) fail("snapshot interval must be >= 1");
}

// --- tables ---------------------------------------------------------------

double QTable::get(const StateKey& state, int cell) const {
  const Row* r = row(state);
  if (r == nullptr || !(r->present & (1u << (cell - 1)))) return 0.0;
  return r->values[cell - 1];
}

bool QTable::contains(const StateKey& state, int cell) const {
  const Row* r = row(state);
  return r != nullptr && (r->present & (1u << (cell - 1)));
}

void QTable::set(const StateKey& state, int cell, double value) {
  Row& r = rows_[state];
  r.values[cell - 1] = value;
  r.present |= static_cast<std::uint16_t>(1u << (cell - 1));
}

const QTable::Row* QTable::row(const StateKey& state) const {
  auto it = rows_.find(state);
  return it == rows_.end() ? nullptr : &it->second;
}

std::size_t QTable::entry_count() const {
  std::size_t n = 0;
  for (const auto& [key, r] : rows_) n += static_cast<std::size_t>(std::popcount(r.present));
  return n;
}

bool operator==(const QTable& a, const QTable& b) {
  if (a.rows_.size() != b.rows_.size()) return false;
  for (const auto& [key, ra] : a.rows_) {
    const QTable::Row* rb = b.row(key);
    if (rb == nullptr || rb->present != ra.present) return false;
    for (int i = 0; i < kCells; ++i) {
      if ((ra.present & (1u << i)) && ra.values[i] != rb->values[i]) return false;
    }
  }
  return true;
}

double VTable::get(const StateKey& state) const {
  auto it = values_.find(state);
  return it == values_.end() ? 0.0 : it->second;
}

// --- updates --------------------------------------------------------------

namespace {

Board decode_or_throw(const StateKey& key) {
  auto b = decode_key(key);
  if (!b) throw Error(ErrorCode::IllegalTransition, "malformed state key '" + key + "'");
  return *b;
}

void check_action(const Board& state, int action, const StateKey& key) {
  if (action < 1 || action > kCells || state.at(action) != Mark::Empty ||
      outcome(state) != Outcome::Ongoing) {
    throw Error(ErrorCode::IllegalTransition,
                "cell " + std::to_string(action) + " is not legal in " + key);
  }
}

double max_action_value(const QTable& q, const StateKey& key, const Board& board) {
  const auto moves = legal_moves(board);
  if (moves.empty()) return 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (int c : moves) best = std::max(best, q.get(key, c));
  return best;
}

}  // namespace

void ql_update(QTable& q, const Transition& t, double alpha, double gamma) {
  const Board s = decode_or_throw(t.state);
  check_action(s, t.action, t.state);
  double bootstrap = 0.0;
  if (!t.terminal) bootstrap = max_action_value(q, t.next_state, decode_or_throw(t.next_state));
  const double old = q.get(t.state, t.action);
  q.set(t.state, t.action, old + alpha * (t.reward + gamma * bootstrap - old));
}

void sarsa_update(QTable& q, const Transition& t, double alpha, double gamma) {
  const Board s = decode_or_throw(t.state);
  check_action(s, t.action, t.state);
  double bootstrap = 0.0;
  if (!t.terminal) {
    if (!t.next_action) {
      throw Error(ErrorCode::MissingNextAction, "non-terminal SARSA step needs A_{t+1}");
    }
    check_action(decode_or_throw(t.next_state), *t.next_action, t.next_state);
    bootstrap = q.get(t.next_state, *t.next_action);
  }
  const double old = q.get(t.state, t.action);
  q.set(t.state, t.action, old + alpha * (t.reward + gamma * bootstrap - old));
}

void sv_update(VTable& v, const StateKey& state, const StateKey& next_state, double reward,
               double alpha, double gamma) {
  const Board s = decode_or_throw(state);
  const Board next = decode_or_throw(next_state);
  for (int c = 1; c <= kCells; ++c) {
    if (s.at(c) != Mark::Empty && next.at(c) != s.at(c)) {
      throw Error(ErrorCode::IllegalTransition, next_state + " does not follow " + state);
    }
  }
  const double bootstrap = outcome(next) == Outcome::Ongoing ? v.get(next_state) : 0.0;
  const double old = v.get(state);
  v.set(state, old + alpha * (reward + gamma * bootstrap - old));
}

// --- action selection -----------------------------------------------------

namespace {

template <typename Score>
int epsilon_greedy(const Board& board, double epsilon, Rng& rng, Score&& score) {
  const auto moves = legal_moves(board);
  if (moves.empty()) throw Error(ErrorCode::NoLegalMoves, encode_key(board));
  if (rng.bernoulli(epsilon)) return moves[rng.uniform_index(moves.size())];
  std::array<int, kCells> ties{};
  std::size_t n_ties = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int c : moves) {
    const double value = score(c);
    if (value > best) {
      best = value;
      n_ties = 0;
    }
    if (value == best) ties[n_ties++] = c;
  }
  return n_ties == 1 ? ties[0] : ties[rng.uniform_index(n_ties)];
}

}  // namespace

int select_action(const QTable& q, const Board& board, double epsilon, Rng& rng) {
  const StateKey key = encode_key(board);
  const QTable::Row* row = q.row(key);
  return epsilon_greedy(board, epsilon, rng, [row](int c) {
    return row != nullptr && (row->present & (1u << (c - 1))) ? row->values[c - 1] : 0.0;
  });
}

int select_action(const VTable& v, const Board& board, double epsilon, Rng& rng) {
  return epsilon_greedy(board, epsilon, rng, [&](int c) {
    return v.get(encode_key(board.placed(c, Mark::Cross)));
  });
}

double terminal_reward(Outcome o, bool agent_is_cross, bool agent_moved_first,
                       const RewardSchedule& sched) {
  switch (o) {
    case Outcome::Ongoing:
      throw Error(ErrorCode::OngoingGame, "no terminal reward for an ongoing game");
    case Outcome::Draw:
      return agent_moved_first ? sched.draw_first_mover : sched.draw_second_mover;
    case Outcome::CrossWins:
      return agent_is_cross ? sched.win : sched.lose;
    case Outcome::NoughtWins:
      return agent_is_cross ? sched.lose : sched.win;
  }
  return 0.0;
}

int Policy::choose(const Board& board, double epsilon, Rng& rng) const {
  return std::visit([&](const auto& t) { return select_action(t, board, epsilon, rng); }, table);
}

}  // namespace swarmplay::rl
