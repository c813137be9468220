#include <chrono>

#include "swarmplay/error.hpp"
#include "swarmplay/oracle.hpp"
#include "swarmplay/rl.hpp"

namespace swarmplay::rl {
namespace {

using Clock = std::chrono::steady_clock;

// Plays Nought during training.
class TrainingOpponent {
 public:
  TrainingOpponent(const OpponentSpec& spec, double epsilon) : spec_(spec), epsilon_(epsilon) {}

  void refresh(const Policy& policy) { snapshot_ = policy; }

  int choose(const Board& board, Rng& rng) const {
    using K = OpponentSpec::Kind;
    switch (spec_.kind) {
      case K::Random: return random_move(board, rng);
      case K::Minimax: return minimax_move(board, rng);
      case K::MixtureRandomMinimax:
        return rng.bernoulli(spec_.p_random) ? random_move(board, rng) : minimax_move(board, rng);
      case K::SelfPlaySnapshot:
        if (!snapshot_) return random_move(board, rng);
        return snapshot_->choose(board.swapped(), epsilon_, rng);
    }
    return random_move(board, rng);
  }

 private:
  static int random_move(const Board& board, Rng& rng) {
    const auto moves = legal_moves(board);
    return moves[rng.uniform_index(moves.size())];
  }

  static int minimax_move(const Board& board, Rng& rng) {
    const auto moves = oracle::best_moves(board, Mark::Nought);
    return moves[rng.uniform_index(moves.size())];
  }

  OpponentSpec spec_;
  double epsilon_;
  std::optional<Policy> snapshot_;
};

struct EpisodeContext {
  const TDParams& params;
  const RewardSchedule& sched;
  const TrainingOpponent& opponent;
  Rng& rng;
  bool agent_first;

  double reward(Outcome o) const { return terminal_reward(o, true, agent_first, sched); }

  Board opening() const {
    Board b;
    if (!agent_first) b = b.placed(opponent.choose(b, rng), Mark::Nought);
    return b;
  }
};

Outcome run_action_value_episode(QTable& q, const EpisodeContext& ctx) {
  const double alpha = ctx.params.learning_rate;
  const double gamma = ctx.params.discount;
  const double eps = ctx.params.epsilon;
  const bool sarsa = ctx.params.method == Method::SARSA;

  Board board = ctx.opening();
  StateKey state = encode_key(board);
  int action = select_action(q, board, eps, ctx.rng);
  for (;;) {
    const Board after = board.placed(action, Mark::Cross);
    Outcome o = outcome(after);
    if (o != Outcome::Ongoing) {
      Transition t{state, action, ctx.reward(o), encode_key(after), std::nullopt, true};
      sarsa ? sarsa_update(q, t, alpha, gamma) : ql_update(q, t, alpha, gamma);
      return o;
    }
    const Board next = after.placed(ctx.opponent.choose(after, ctx.rng), Mark::Nought);
    StateKey next_key = encode_key(next);
    o = outcome(next);
    if (o != Outcome::Ongoing) {
      Transition t{state, action, ctx.reward(o), std::move(next_key), std::nullopt, true};
      sarsa ? sarsa_update(q, t, alpha, gamma) : ql_update(q, t, alpha, gamma);
      return o;
    }
    int next_action;
    if (sarsa) {
      next_action = select_action(q, next, eps, ctx.rng);
      sarsa_update(q, Transition{state, action, 0.0, next_key, next_action, false}, alpha, gamma);
    } else {
      ql_update(q, Transition{state, action, 0.0, next_key, std::nullopt, false}, alpha, gamma);
      next_action = select_action(q, next, eps, ctx.rng);
    }
    board = next;
    state = std::move(next_key);
    action = next_action;
  }
}

// Afterstate TD(0): V-updates chain one Cross afterstate to the next.
Outcome run_state_value_episode(VTable& v, const EpisodeContext& ctx) {
  const double alpha = ctx.params.learning_rate;
  const double gamma = ctx.params.discount;

  Board board = ctx.opening();
  std::optional<StateKey> previous;
  for (;;) {
    const int action = select_action(v, board, ctx.params.epsilon, ctx.rng);
    const Board after = board.placed(action, Mark::Cross);
    StateKey after_key = encode_key(after);
    Outcome o = outcome(after);
    // A terminal afterstate takes its reward as value when first entered.
    if (o != Outcome::Ongoing && !v.contains(after_key)) v.set(after_key, ctx.reward(o));
    if (previous) {
      const double r = o == Outcome::Ongoing ? 0.0 : ctx.reward(o);
      sv_update(v, *previous, after_key, r, alpha, gamma);
    }
    if (o != Outcome::Ongoing) return o;

    const Board next = after.placed(ctx.opponent.choose(after, ctx.rng), Mark::Nought);
    o = outcome(next);
    if (o != Outcome::Ongoing) {
      sv_update(v, after_key, encode_key(next), ctx.reward(o), alpha, gamma);
      return o;
    }
    previous = std::move(after_key);
    board = next;
  }
}

}  // namespace

TrainResult train(const TDParams& params, const RewardSchedule& sched, const Progress& progress) {
  params.validate();
  const auto start = Clock::now();
  auto block_start = start;

  TrainResult result;
  Policy& policy = result.policy;
  policy.method = params.method;
  policy.params = params;
  policy.rewards = sched;
  if (params.method == Method::SV) {
    policy.table = VTable{};
  } else {
    policy.table = QTable{};
  }

  TrainingOpponent opponent(params.opponent, params.epsilon);
  const bool self_play = params.opponent.kind == OpponentSpec::Kind::SelfPlaySnapshot;

  result.trace.reserve(static_cast<std::size_t>(params.episodes));
  double cumulative = 0.0;
  for (long e = 0; e < params.episodes; ++e) {
    if (self_play && e > 0 && e % params.opponent.snapshot_interval == 0) opponent.refresh(policy);

    Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(e)));
    const bool agent_first = e % 2 == 0;
    const EpisodeContext ctx{params, sched, opponent, rng, agent_first};
    const Outcome o =
        params.method == Method::SV
            ? run_state_value_episode(std::get<VTable>(policy.table), ctx)
            : run_action_value_episode(std::get<QTable>(policy.table), ctx);

    const double r = ctx.reward(o);
    cumulative += r;
    result.trace.push_back(TraceRow{e + 1, r, cumulative, o, agent_first});

    if (progress.callback && (e + 1) % progress.interval == 0) {
      const auto now = Clock::now();
      progress.callback(e + 1, now - block_start);
      block_start = now;
    }
  }
  result.elapsed = Clock::now() - start;
  return result;
}

}  // namespace swarmplay::rl
