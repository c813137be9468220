#include "swarmplay/strategy.hpp"

#include "swarmplay/error.hpp"
#include "swarmplay/oracle.hpp"

namespace swarmplay {

int RandomStrategy::choose(const Board& board, Mark, bool, Rng& rng) const {
  const auto moves = legal_moves(board);
  if (moves.empty()) throw Error(ErrorCode::NoLegalMoves, encode_key(board));
  return moves[rng.uniform_index(moves.size())];
}

int MinimaxStrategy::choose(const Board& board, Mark me, bool, Rng& rng) const {
  const auto moves = oracle::best_moves(board, me);
  if (moves.empty()) throw Error(ErrorCode::NoLegalMoves, encode_key(board));
  return moves[rng.uniform_index(moves.size())];
}

int IbStrategy::choose(const Board& board, Mark me, bool i_moved_first, Rng& rng) const {
  const Board view = me == Mark::Cross ? board : board.swapped();
  return ib::ib_move(view, cfg_, rng, i_moved_first);
}

std::string PolicyStrategy::name() const {
  return "rl-" + std::string(rl::to_string(policy_->method));
}

int PolicyStrategy::choose(const Board& board, Mark me, bool, Rng& rng) const {
  const Board view = me == Mark::Cross ? board : board.swapped();
  return policy_->choose(view, epsilon_, rng);
}

std::unique_ptr<Strategy> make_strategy(std::string_view spec, const ib::IbConfig& ib_cfg) {
  if (spec == "random") return std::make_unique<RandomStrategy>();
  if (spec == "minimax") return std::make_unique<MinimaxStrategy>();
  if (spec == "ib") return std::make_unique<IbStrategy>(ib_cfg);
  if (spec.starts_with("rl:")) {
    const std::string path(spec.substr(3));
    try {
      return std::make_unique<PolicyStrategy>(
          std::make_shared<const rl::Policy>(rl::load_policy(path)));
    } catch (const Error& e) {
      throw Error(ErrorCode::PolicyLoadFailure, path + ": " + e.what());
    }
  }
  throw Error(ErrorCode::InvalidConfig,
              "unknown strategy '" + std::string(spec) + "' (random, minimax, ib, rl:<file>)");
}

}  // namespace swarmplay
