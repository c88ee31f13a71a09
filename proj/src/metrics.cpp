#include "pyreline/metrics.hpp"

#include "pyreline/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pyreline {

double density(std::uint64_t burning, std::uint64_t vertices) noexcept
{
    if (vertices == 0)
        return 1.0;
    return static_cast<double>(burning) / static_cast<double>(vertices);
}

double DensityRecord::density() const noexcept
{
    return pyreline::density(burning, vertices);
}

void DensitySeries::push(const DensityRecord& r)
{
    if (r.burning > r.vertices)
        fail(ErrorCode::InvalidParams, "turn " + std::to_string(r.n) + ": more burning vertices than vertices");
    if (!records_.empty()) {
        const DensityRecord& last = records_.back();
        if (r.n <= last.n)
            fail(ErrorCode::InvalidParams, "density series turns must increase");
        if (r.vertices < last.vertices || r.burning < last.burning)
            fail(ErrorCode::InvalidParams, "density series counts must not decrease");
    }
    records_.push_back(r);
}

const DensityRecord* DensitySeries::find(Turn n) const
{
    auto it = std::lower_bound(records_.begin(), records_.end(), n,
                               [](const DensityRecord& r, Turn t) { return r.n < t; });
    if (it == records_.end() || it->n != n)
        return nullptr;
    return &*it;
}

TailExtrema tail_extrema(const DensitySeries& series, double tail_fraction)
{
    if (series.empty())
        fail(ErrorCode::EmptySeries, "tail extrema of an empty series");
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
        fail(ErrorCode::InvalidParams, "tail_fraction must lie in (0, 1]");
    const auto records = series.records();
    auto len = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(records.size())));
    len = std::clamp<std::size_t>(len, 1, records.size());
    TailExtrema out{2.0, -1.0};
    for (const DensityRecord& r : records.last(len)) {
        const double d = r.density();
        out.min = std::min(out.min, d);
        out.max = std::max(out.max, d);
    }
    return out;
}

std::vector<double> checkpoint_densities(const DensitySeries& series, std::span<const Turn> checkpoints)
{
    std::vector<double> out;
    out.reserve(checkpoints.size());
    for (Turn n : checkpoints) {
        const DensityRecord* r = series.find(n);
        if (!r)
            fail(ErrorCode::OutOfRange, "no record for turn " + std::to_string(n));
        out.push_back(r->density());
    }
    return out;
}

nlohmann::json summary_json(const DensitySeries& series, double tail_fraction, std::span<const Turn> checkpoints)
{
    const TailExtrema tail = tail_extrema(series, tail_fraction);
    const auto values = checkpoint_densities(series, checkpoints);
    nlohmann::json cps = nlohmann::json::array();
    for (std::size_t i = 0; i < checkpoints.size(); ++i)
        cps.push_back({{"n", checkpoints[i]}, {"density", values[i]}});
    return {
        {"turns", series.back().n},
        {"final_density", series.back().density()},
        {"tail_min", tail.min},
        {"tail_max", tail.max},
        {"checkpoints", cps},
    };
}

} // namespace pyreline
