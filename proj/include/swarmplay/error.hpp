#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace swarmplay {

enum class ErrorCode {
  // game-core
  InvalidCell,
  OccupiedCell,
  GameOver,
  EmptyMarkRejected,
  // oracle
  UnreachableBoard,
  // rl-agent
  IllegalTransition,
  MissingNextAction,
  NoLegalMoves,
  OngoingGame,
  InvalidParams,
  Io,
  FormatVersionMismatch,
  CorruptEntry,
  // ib-strategy
  NotDronesTurn,
  // board-vision
  GridOutOfBounds,
  AmbiguousCell,
  NoChange,
  MultipleChanges,
  NonHumanChange,
  InvalidImage,
  // swarm-sim
  CellOccupied,
  FlightInProgress,
  FleetExhausted,
  ConvergenceTimeout,
  // play-service
  PolicyLoadFailure,
  InvalidConfig,
  OutOfTurn,
  UnknownSession,
  VisionDisabled,
};

// Wire name of an error code, used in CLI messages and service error bodies.
std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace swarmplay
