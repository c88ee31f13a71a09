#pragma once

#include "pyreline/graph.hpp"

#include "json.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pyreline {

enum class ScheduleKind { Constant, Poly, Linear, Example1, Example2, Example3, Table };
enum class TableTail { RepeatLast, PolyTail };

struct ScheduleParams {
    std::uint64_t count = 1; // constant
    double c = 1.0;          // poly, linear, poly-tail scale
    double alpha = 0.5;      // exponent
    double beta = 1.0;       // example3 linear slope
    double eps = 0.25;       // example2 / example3 tolerance
    std::vector<std::uint64_t> values; // table
    TableTail tail = TableTail::RepeatLast;
};

/// One completed fluctuation cycle of an adaptive schedule.
struct CycleRecord {
    Turn n0 = 0;
    Turn n1 = 0;
    Turn n2 = 0;
    std::uint64_t vertices_at_n1 = 0;
    std::uint64_t vertices_at_n2 = 0;
};

/// Supplies f(n), the number of vertices Builder receives on turn n.
///
/// The example kinds are history-adaptive: they watch the running vertex
/// total and switch phase at the first turn where the threshold rule holds.
///   example1: f = 0 until the first n with total < n^a (N1), then floor(n^a)
///             for floor(N1^(a/2)) turns (ending at N2), repeat.
///   example2: f = floor(n^(2a-1)) until |V_n - n^(2a)/(2a)| <= eps n^(2a)
///             (N1), then floor(n^a) for floor(N1^a) turns, repeat.
///   example3: f = ceil(b n) + 1 until V_n > ((1-eps) b / 2) n^2 (N1), then
///             floor(n^a) for ceil(sqrt(2 V_N1)) turns, repeat.
/// V_n includes the turn's own f(n). Queries must use strictly increasing
/// turns; use fresh() to replay.
class GrowthSchedule {
public:
    static GrowthSchedule constant(std::uint64_t count);
    static GrowthSchedule poly(double c, double alpha);
    static GrowthSchedule linear(double c);
    static GrowthSchedule example1(double alpha);
    static GrowthSchedule example2(double alpha, double eps);
    static GrowthSchedule example3(double alpha, double beta, double eps);
    static GrowthSchedule table(std::vector<std::uint64_t> values, TableTail tail = TableTail::RepeatLast,
                                double c = 1.0, double alpha = 0.5);

    static GrowthSchedule from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    ScheduleKind kind() const noexcept { return kind_; }
    const ScheduleParams& params() const noexcept { return params_; }

    std::uint64_t next_count(Turn turn, std::uint64_t cumulative_total);

    /// Consumes the run of zero-growth turns starting at `from` (at most up to
    /// `limit`) and returns the last such turn, or from-1 if f(from) > 0.
    Turn skip_zero_turns(Turn from, std::uint64_t cumulative_total, Turn limit);

    /// Sum of f(1..n), computed on a fresh replay.
    std::uint64_t cumulative_through(Turn n) const;

    GrowthSchedule fresh() const;

    std::span<const CycleRecord> cycles() const noexcept { return cycles_; }
    std::string phase_label() const;
    Turn last_turn() const noexcept { return last_turn_; }

private:
    enum class Phase { Steady, Zero, Growth, Slow, Fast, Linear };

    GrowthSchedule(ScheduleKind kind, ScheduleParams params);
    void validate() const;
    std::uint64_t table_value(Turn turn) const;
    void close_cycle(Turn n2, std::uint64_t total);

    ScheduleKind kind_;
    ScheduleParams params_;
    Phase phase_ = Phase::Steady;
    Turn last_turn_ = 0;
    Turn n0_ = 0;
    Turn n1_ = 0;
    Turn n2_ = 0;
    std::uint64_t vertices_at_n1_ = 0;
    std::vector<CycleRecord> cycles_;
};

/// floor(c * n^alpha), snapping values within a relative 1e-12 of an integer
/// up to that integer so exact powers are not lost to rounding.
std::uint64_t floor_scaled_power(double c, long double n, double alpha);

} // namespace pyreline
