#pragma once

#include "pyreline/graph.hpp"

#include "json.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace pyreline {

struct DensityRecord {
    Turn n = 0;
    std::uint64_t vertices = 0;
    std::uint64_t burning = 0;

    double density() const noexcept;
};

/// |B|/|V| as a double. The empty graph counts as fully burned.
double density(std::uint64_t burning, std::uint64_t vertices) noexcept;

class DensitySeries {
public:
    /// Appends a record, rejecting anything that breaks the series invariants.
    void push(const DensityRecord& record);

    std::span<const DensityRecord> records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }
    const DensityRecord& back() const { return records_.back(); }

    /// Record for turn n, or nullptr.
    const DensityRecord* find(Turn n) const;

private:
    std::vector<DensityRecord> records_;
};

struct TailExtrema {
    double min = 0.0;
    double max = 0.0;
};

TailExtrema tail_extrema(const DensitySeries& series, double tail_fraction);
std::vector<double> checkpoint_densities(const DensitySeries& series, std::span<const Turn> checkpoints);

// {turns, final_density, tail_min, tail_max, checkpoints:[{n, density}]}
nlohmann::json summary_json(const DensitySeries& series, double tail_fraction, std::span<const Turn> checkpoints);

} // namespace pyreline
