#include "pyreline/errors.hpp"

namespace pyreline {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::EdgeBetweenOldVertices: return "EdgeBetweenOldVertices";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::UnknownEndpoint: return "UnknownEndpoint";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::NonMonotoneQuery: return "NonMonotoneQuery";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::TurnOverflow: return "TurnOverflow";
    case ErrorCode::WrongCount: return "WrongCount";
    case ErrorCode::ResultDisconnected: return "ResultDisconnected";
    case ErrorCode::StrategyReturnedBurnedVertex: return "StrategyReturnedBurnedVertex";
    case ErrorCode::StrategyReturnedUnknownVertex: return "StrategyReturnedUnknownVertex";
    case ErrorCode::IllegalPass: return "IllegalPass";
    case ErrorCode::InvalidStage: return "InvalidStage";
    case ErrorCode::GraphTooLarge: return "GraphTooLarge";
    case ErrorCode::GraphDisconnected: return "GraphDisconnected";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::PrefixDisconnected: return "PrefixDisconnected";
    case ErrorCode::DominanceViolated: return "DominanceViolated";
    case ErrorCode::InvalidSource: return "InvalidSource";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::BadSchedule: return "BadSchedule";
    case ErrorCode::BadStrategy: return "BadStrategy";
    case ErrorCode::RoleMismatch: return "RoleMismatch";
    case ErrorCode::NotYourTurn: return "NotYourTurn";
    case ErrorCode::UnknownGame: return "UnknownGame";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

void fail(ErrorCode code, const std::string& message)
{
    throw Error(code, std::string(to_string(code)) + ": " + message);
}

} // namespace pyreline
