#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pyreline {

enum class ErrorCode {
    // graph_core
    EdgeBetweenOldVertices,
    DuplicateEdge,
    SelfLoop,
    UnknownEndpoint,
    UnknownVertex,
    // growth_schedule
    NonMonotoneQuery,
    InvalidParams,
    TurnOverflow,
    // engine
    WrongCount,
    ResultDisconnected,
    StrategyReturnedBurnedVertex,
    StrategyReturnedUnknownVertex,
    IllegalPass,
    InvalidStage,
    // burning_number
    GraphTooLarge,
    GraphDisconnected,
    EmptyGraph,
    // tree_reduction
    PrefixDisconnected,
    DominanceViolated,
    InvalidSource,
    // metrics
    EmptySeries,
    OutOfRange,
    // harness / service
    ConfigError,
    BadSchedule,
    BadStrategy,
    RoleMismatch,
    NotYourTurn,
    UnknownGame,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// All recoverable failures in the library are reported with this type.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

} // namespace pyreline
