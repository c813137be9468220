#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "swarmplay/board.hpp"
#include "swarmplay/ib.hpp"
#include "swarmplay/rl.hpp"
#include "swarmplay/rng.hpp"

namespace swarmplay {

// A move-picking player usable for either mark. Strategies written for the
// drone side (RL policies, Improved Basic) play Nought on the swapped board.
class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual std::string name() const = 0;
  // `board` must be Ongoing with `me` to move; `i_moved_first` says whether
  // `me` opened this game.
  virtual int choose(const Board& board, Mark me, bool i_moved_first, Rng& rng) const = 0;
};

class RandomStrategy final : public Strategy {
 public:
  std::string name() const override { return "random"; }
  int choose(const Board& board, Mark me, bool i_moved_first, Rng& rng) const override;
};

// Uniform choice among the oracle's best moves.
class MinimaxStrategy final : public Strategy {
 public:
  std::string name() const override { return "minimax"; }
  int choose(const Board& board, Mark me, bool i_moved_first, Rng& rng) const override;
};

class IbStrategy final : public Strategy {
 public:
  explicit IbStrategy(const ib::IbConfig& cfg = {}) : cfg_(cfg) {}
  std::string name() const override { return "ib"; }
  int choose(const Board& board, Mark me, bool i_moved_first, Rng& rng) const override;

 private:
  ib::IbConfig cfg_;
};

// Greedy (epsilon = 0 by default) play from a trained table.
class PolicyStrategy final : public Strategy {
 public:
  explicit PolicyStrategy(std::shared_ptr<const rl::Policy> policy, double epsilon = 0.0)
      : policy_(std::move(policy)), epsilon_(epsilon) {}
  std::string name() const override;
  int choose(const Board& board, Mark me, bool i_moved_first, Rng& rng) const override;
  const rl::Policy& policy() const { return *policy_; }

 private:
  std::shared_ptr<const rl::Policy> policy_;
  double epsilon_;
};

// "random", "minimax", "ib" or "rl:<policy file>".
// Throws PolicyLoadFailure for unreadable policies and InvalidConfig for
// unknown names.
std::unique_ptr<Strategy> make_strategy(std::string_view spec, const ib::IbConfig& ib_cfg = {});

}  // namespace swarmplay
