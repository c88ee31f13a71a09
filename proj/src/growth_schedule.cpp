#include "pyreline/growth_schedule.hpp"

#include "pyreline/burning_number.hpp"
#include "pyreline/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pyreline {

namespace {

constexpr long double kSnap = 1e-12L;

long double power(long double n, double alpha)
{
    return std::pow(n, static_cast<long double>(alpha));
}

std::uint64_t ceil_scaled(double c, long double n)
{
    const long double x = static_cast<long double>(c) * n;
    const std::uint64_t fl = floor_scaled_power(c, n, 1.0);
    return x > static_cast<long double>(fl) * (1 + kSnap) ? fl + 1 : fl;
}

double number_field(const nlohmann::json& j, const char* key, double fallback, bool required)
{
    if (!j.contains(key)) {
        if (required)
            fail(ErrorCode::BadSchedule, std::string("schedule field '") + key + "' is required");
        return fallback;
    }
    if (!j.at(key).is_number())
        fail(ErrorCode::BadSchedule, std::string("schedule field '") + key + "' must be a number");
    return j.at(key).get<double>();
}

} // namespace

std::uint64_t floor_scaled_power(double c, long double n, double alpha)
{
    const long double x = static_cast<long double>(c) * power(n, alpha);
    if (!(x >= 0))
        return 0;
    if (x >= static_cast<long double>(std::numeric_limits<std::uint64_t>::max() / 2))
        fail(ErrorCode::TurnOverflow, "schedule value overflows 64 bits");
    const long double snapped = std::floor(x * (1 + kSnap));
    const long double fl = std::floor(x);
    // Only snap upward when the integer is within relative rounding noise.
    return static_cast<std::uint64_t>(snapped > fl && snapped - x <= x * kSnap ? snapped : fl);
}

GrowthSchedule::GrowthSchedule(ScheduleKind kind, ScheduleParams params) : kind_(kind), params_(std::move(params))
{
    validate();
    switch (kind_) {
    case ScheduleKind::Example1: phase_ = Phase::Zero; break;
    case ScheduleKind::Example2: phase_ = Phase::Slow; break;
    case ScheduleKind::Example3: phase_ = Phase::Linear; break;
    default: phase_ = Phase::Steady; break;
    }
}

GrowthSchedule GrowthSchedule::constant(std::uint64_t count)
{
    ScheduleParams p;
    p.count = count;
    return {ScheduleKind::Constant, p};
}

GrowthSchedule GrowthSchedule::poly(double c, double alpha)
{
    ScheduleParams p;
    p.c = c;
    p.alpha = alpha;
    return {ScheduleKind::Poly, p};
}

GrowthSchedule GrowthSchedule::linear(double c)
{
    ScheduleParams p;
    p.c = c;
    p.alpha = 1.0;
    return {ScheduleKind::Linear, p};
}

GrowthSchedule GrowthSchedule::example1(double alpha)
{
    ScheduleParams p;
    p.alpha = alpha;
    return {ScheduleKind::Example1, p};
}

GrowthSchedule GrowthSchedule::example2(double alpha, double eps)
{
    ScheduleParams p;
    p.alpha = alpha;
    p.eps = eps;
    return {ScheduleKind::Example2, p};
}

GrowthSchedule GrowthSchedule::example3(double alpha, double beta, double eps)
{
    ScheduleParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.eps = eps;
    return {ScheduleKind::Example3, p};
}

GrowthSchedule GrowthSchedule::table(std::vector<std::uint64_t> values, TableTail tail, double c, double alpha)
{
    ScheduleParams p;
    p.values = std::move(values);
    p.tail = tail;
    p.c = c;
    p.alpha = alpha;
    return {ScheduleKind::Table, p};
}

void GrowthSchedule::validate() const
{
    const auto& p = params_;
    auto require = [](bool ok, const char* what) {
        if (!ok)
            fail(ErrorCode::InvalidParams, what);
    };
    switch (kind_) {
    case ScheduleKind::Constant: require(p.count >= 1, "constant schedule needs count >= 1"); break;
    case ScheduleKind::Poly:
        require(p.c > 0 && std::isfinite(p.c), "poly schedule needs c > 0");
        require(p.alpha >= 0 && std::isfinite(p.alpha), "poly schedule needs alpha >= 0");
        break;
    case ScheduleKind::Linear: require(p.c > 0 && std::isfinite(p.c), "linear schedule needs c > 0"); break;
    case ScheduleKind::Example1: require(p.alpha > 0 && p.alpha < 0.5, "example1 needs 0 < alpha < 1/2"); break;
    case ScheduleKind::Example2:
        require(p.alpha >= 0.5 && p.alpha < 1, "example2 needs 1/2 <= alpha < 1");
        require(p.eps > 0 && p.eps < 0.125, "example2 needs 0 < eps < 1/8");
        break;
    case ScheduleKind::Example3:
        require(p.alpha > 0 && p.alpha < 1, "example3 needs 0 < alpha < 1");
        require(p.beta > 0 && std::isfinite(p.beta), "example3 needs beta > 0");
        require(p.eps > 0 && p.eps < 0.5, "example3 needs 0 < eps < 1/2");
        break;
    case ScheduleKind::Table:
        require(!p.values.empty(), "table schedule needs at least one value");
        if (p.tail == TableTail::PolyTail)
            require(p.c > 0 && p.alpha >= 0, "poly-tail needs c > 0 and alpha >= 0");
        break;
    }
}

std::uint64_t GrowthSchedule::table_value(Turn turn) const
{
    const auto& v = params_.values;
    if (static_cast<std::uint64_t>(turn) <= v.size())
        return v[static_cast<std::size_t>(turn - 1)];
    if (params_.tail == TableTail::RepeatLast)
        return v.back();
    return std::max<std::uint64_t>(1, floor_scaled_power(params_.c, static_cast<long double>(turn), params_.alpha));
}

void GrowthSchedule::close_cycle(Turn n2, std::uint64_t total)
{
    cycles_.push_back({n0_, n1_, n2, vertices_at_n1_, total});
    n0_ = n2;
}

std::uint64_t GrowthSchedule::next_count(Turn turn, std::uint64_t cumulative_total)
{
    if (turn <= last_turn_ || turn < 1)
        fail(ErrorCode::NonMonotoneQuery,
             "turn " + std::to_string(turn) + " queried after turn " + std::to_string(last_turn_));
    last_turn_ = turn;
    const auto n = static_cast<long double>(turn);
    const auto& p = params_;

    switch (kind_) {
    case ScheduleKind::Constant: return p.count;
    case ScheduleKind::Poly: return std::max<std::uint64_t>(1, floor_scaled_power(p.c, n, p.alpha));
    case ScheduleKind::Linear: return std::max<std::uint64_t>(1, floor_scaled_power(p.c, n, 1.0));
    case ScheduleKind::Table: return table_value(turn);

    case ScheduleKind::Example1:
        if (phase_ == Phase::Zero) {
            if (static_cast<long double>(cumulative_total) < power(n, p.alpha)) {
                n1_ = turn;
                vertices_at_n1_ = cumulative_total;
                n2_ = n1_ + static_cast<Turn>(floor_scaled_power(1.0, n, p.alpha / 2));
                phase_ = Phase::Growth;
            }
            return 0;
        } else {
            const std::uint64_t f = floor_scaled_power(1.0, n, p.alpha);
            if (turn == n2_) {
                close_cycle(turn, cumulative_total + f);
                phase_ = Phase::Zero;
            }
            return f;
        }

    case ScheduleKind::Example2:
        if (phase_ == Phase::Slow) {
            const std::uint64_t f = floor_scaled_power(1.0, n, 2 * p.alpha - 1);
            const long double total = static_cast<long double>(cumulative_total + f);
            const long double x = power(n, 2 * p.alpha);
            if (std::fabs(total - x / (2 * p.alpha)) <= p.eps * x) {
                n1_ = turn;
                vertices_at_n1_ = cumulative_total + f;
                n2_ = n1_ + static_cast<Turn>(floor_scaled_power(1.0, n, p.alpha));
                phase_ = Phase::Fast;
            }
            return f;
        } else {
            const std::uint64_t f = floor_scaled_power(1.0, n, p.alpha);
            if (turn == n2_) {
                close_cycle(turn, cumulative_total + f);
                phase_ = Phase::Slow;
            }
            return f;
        }

    case ScheduleKind::Example3:
        if (phase_ == Phase::Linear) {
            const std::uint64_t f = ceil_scaled(p.beta, n) + 1;
            const std::uint64_t total = cumulative_total + f;
            if (static_cast<long double>(total) > (1 - p.eps) * p.beta / 2 * n * n) {
                n1_ = turn;
                vertices_at_n1_ = total;
                n2_ = n1_ + static_cast<Turn>(sqrt_2n_budget(total));
                phase_ = Phase::Slow;
            }
            return f;
        } else {
            const std::uint64_t f = floor_scaled_power(1.0, n, p.alpha);
            if (turn == n2_) {
                close_cycle(turn, cumulative_total + f);
                phase_ = Phase::Linear;
            }
            return f;
        }
    }
    return 0;
}

Turn GrowthSchedule::skip_zero_turns(Turn from, std::uint64_t cumulative_total, Turn limit)
{
    if (from <= last_turn_ || from < 1)
        fail(ErrorCode::NonMonotoneQuery,
             "turn " + std::to_string(from) + " queried after turn " + std::to_string(last_turn_));
    if (limit < from)
        return from - 1;

    if (kind_ == ScheduleKind::Table) {
        Turn t = from;
        const auto size = static_cast<Turn>(params_.values.size());
        while (t <= limit && t <= size && params_.values[static_cast<std::size_t>(t - 1)] == 0)
            ++t;
        if (t > size && t <= limit && params_.tail == TableTail::RepeatLast && params_.values.back() == 0)
            t = limit + 1;
        last_turn_ = std::max(last_turn_, t - 1);
        return t - 1;
    }
    if (kind_ != ScheduleKind::Example1 || phase_ != Phase::Zero)
        return from - 1;

    // Zero phase ends at the first n with total < n^alpha, i.e. n > total^(1/alpha).
    const double alpha = params_.alpha;
    const auto total = static_cast<long double>(cumulative_total);
    auto satisfied = [&](long double n) { return total < power(n, alpha); };
    long double candidate = static_cast<long double>(from);
    if (!satisfied(candidate)) {
        const long double estimate = std::floor(std::pow(total, 1.0L / alpha));
        // Past the limit there is nothing to refine, and beyond 2^63 a step of 1 is lost.
        if (estimate > static_cast<long double>(limit) + 2) {
            last_turn_ = limit;
            return limit;
        }
        candidate = std::max(candidate, estimate);
        while (candidate > from && satisfied(candidate - 1))
            candidate -= 1;
        while (!satisfied(candidate))
            candidate += 1;
    }
    if (candidate > static_cast<long double>(limit)) {
        last_turn_ = limit;
        return limit;
    }
    const auto n1 = static_cast<Turn>(candidate);
    n1_ = n1;
    vertices_at_n1_ = cumulative_total;
    n2_ = n1 + static_cast<Turn>(floor_scaled_power(1.0, candidate, alpha / 2));
    phase_ = Phase::Growth;
    last_turn_ = n1;
    return n1;
}

std::uint64_t GrowthSchedule::cumulative_through(Turn n) const
{
    GrowthSchedule replay = fresh();
    std::uint64_t total = 0;
    for (Turn t = 1; t <= n;) {
        const Turn last_zero = replay.skip_zero_turns(t, total, n);
        if (last_zero >= t) {
            t = last_zero + 1;
            continue;
        }
        total += replay.next_count(t, total);
        ++t;
    }
    return total;
}

GrowthSchedule GrowthSchedule::fresh() const
{
    return {kind_, params_};
}

std::string GrowthSchedule::phase_label() const
{
    switch (phase_) {
    case Phase::Steady: return "steady";
    case Phase::Zero: return "zero";
    case Phase::Growth: return "growth";
    case Phase::Slow: return "slow";
    case Phase::Fast: return "fast";
    case Phase::Linear: return "linear";
    }
    return "steady";
}

GrowthSchedule GrowthSchedule::from_json(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
        fail(ErrorCode::BadSchedule, "schedule must be an object with a string 'kind'");
    const auto kind = j.at("kind").get<std::string>();
    try {
        if (kind == "constant") {
            const double count = number_field(j, "count", 1, false);
            if (count < 1 || count != std::floor(count))
                fail(ErrorCode::BadSchedule, "constant 'count' must be a positive integer");
            return constant(static_cast<std::uint64_t>(count));
        }
        if (kind == "poly")
            return poly(number_field(j, "c", 1.0, false), number_field(j, "alpha", 0, true));
        if (kind == "linear")
            return linear(number_field(j, "c", 1.0, false));
        if (kind == "example1")
            return example1(number_field(j, "alpha", 0, true));
        if (kind == "example2")
            return example2(number_field(j, "alpha", 0, true), number_field(j, "eps", 0.1, false));
        if (kind == "example3")
            return example3(number_field(j, "alpha", 0, true), number_field(j, "beta", 1.0, false),
                            number_field(j, "eps", 0.25, false));
        if (kind == "table") {
            if (!j.contains("values") || !j.at("values").is_array())
                fail(ErrorCode::BadSchedule, "table schedule needs a 'values' array");
            std::vector<std::uint64_t> values;
            for (const auto& v : j.at("values")) {
                if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
                    fail(ErrorCode::BadSchedule, "table 'values' must be nonnegative integers");
                values.push_back(v.get<std::uint64_t>());
            }
            const std::string tail = j.value("tail", std::string("repeat-last"));
            if (tail != "repeat-last" && tail != "poly-tail")
                fail(ErrorCode::BadSchedule, "table 'tail' must be repeat-last or poly-tail");
            return table(std::move(values), tail == "poly-tail" ? TableTail::PolyTail : TableTail::RepeatLast,
                         number_field(j, "c", 1.0, false), number_field(j, "alpha", 0.5, false));
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidParams)
            throw Error(ErrorCode::BadSchedule, e.what());
        throw;
    }
    fail(ErrorCode::BadSchedule, "unknown schedule kind '" + kind + "'");
}

nlohmann::json GrowthSchedule::to_json() const
{
    const auto& p = params_;
    switch (kind_) {
    case ScheduleKind::Constant: return {{"kind", "constant"}, {"count", p.count}};
    case ScheduleKind::Poly: return {{"kind", "poly"}, {"c", p.c}, {"alpha", p.alpha}};
    case ScheduleKind::Linear: return {{"kind", "linear"}, {"c", p.c}};
    case ScheduleKind::Example1: return {{"kind", "example1"}, {"alpha", p.alpha}};
    case ScheduleKind::Example2: return {{"kind", "example2"}, {"alpha", p.alpha}, {"eps", p.eps}};
    case ScheduleKind::Example3:
        return {{"kind", "example3"}, {"alpha", p.alpha}, {"beta", p.beta}, {"eps", p.eps}};
    case ScheduleKind::Table: {
        nlohmann::json j{{"kind", "table"}, {"values", p.values}};
        if (p.tail == TableTail::PolyTail) {
            j["tail"] = "poly-tail";
            j["c"] = p.c;
            j["alpha"] = p.alpha;
        } else {
            j["tail"] = "repeat-last";
        }
        return j;
    }
    }
    return {};
}

} // namespace pyreline
