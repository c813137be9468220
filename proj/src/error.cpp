#include "swarmplay/error.hpp"

namespace swarmplay {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidCell: return "InvalidCell";
    case ErrorCode::OccupiedCell: return "OccupiedCell";
    case ErrorCode::GameOver: return "GameOver";
    case ErrorCode::EmptyMarkRejected: return "EmptyMarkRejected";
    case ErrorCode::UnreachableBoard: return "UnreachableBoard";
    case ErrorCode::IllegalTransition: return "IllegalTransition";
    case ErrorCode::MissingNextAction: return "MissingNextAction";
    case ErrorCode::NoLegalMoves: return "NoLegalMoves";
    case ErrorCode::OngoingGame: return "OngoingGame";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::Io: return "Io";
    case ErrorCode::FormatVersionMismatch: return "FormatVersionMismatch";
    case ErrorCode::CorruptEntry: return "CorruptEntry";
    case ErrorCode::NotDronesTurn: return "NotDronesTurn";
    case ErrorCode::GridOutOfBounds: return "GridOutOfBounds";
    case ErrorCode::AmbiguousCell: return "AmbiguousCell";
    case ErrorCode::NoChange: return "NoChange";
    case ErrorCode::MultipleChanges: return "MultipleChanges";
    case ErrorCode::NonHumanChange: return "NonHumanChange";
    case ErrorCode::InvalidImage: return "InvalidImage";
    case ErrorCode::CellOccupied: return "CellOccupied";
    case ErrorCode::FlightInProgress: return "FlightInProgress";
    case ErrorCode::FleetExhausted: return "FleetExhausted";
    case ErrorCode::ConvergenceTimeout: return "ConvergenceTimeout";
    case ErrorCode::PolicyLoadFailure: return "PolicyLoadFailure";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::OutOfTurn: return "OutOfTurn";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::VisionDisabled: return "VisionDisabled";
  }
  return "Unknown";
}

}  // namespace swarmplay
