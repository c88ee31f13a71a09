#pragma once

#include "pyreline/engine.hpp"
#include "pyreline/graph.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace pyreline {

// Spanning trees T_n of a legal construction G_n with T_n inside T_{n+1}.
class TreeSequence {
public:
    TreeSequence(const GrowingGraph& base, std::vector<EdgeId> kept, std::vector<std::size_t> kept_begin);

    const GrowingGraph& base() const noexcept { return *base_; }
    /// Kept edge ids, grouped by generation in arrival order.
    std::span<const EdgeId> kept_edges() const noexcept { return kept_; }
    /// Kept edges among vertices that exist after `turn`.
    std::span<const EdgeId> kept_through(Turn turn) const;
    /// Kept edges added with generation index i.
    std::span<const EdgeId> kept_in_generation(std::size_t i) const;

private:
    const GrowingGraph* base_;
    std::vector<EdgeId> kept_;
    std::vector<std::size_t> kept_begin_; // one entry per generation plus end
};

/// For each turn, spans that turn's new vertices by BFS from the vertices
/// already spanned, over that turn's edges. Each new vertex keeps its lowest
/// edge id towards the previous BFS layer.
TreeSequence incremental_spanning_tree(const GrowingGraph& graph);

struct DominancePair {
    Turn n = 0;
    std::uint64_t vertices = 0;
    std::uint64_t tree_burning = 0;
    std::uint64_t graph_burning = 0;
};

/// Replays G and T turn by turn with the same sources (sources[i] is ignited
/// on turn i+1; kPass for none). Throws DominanceViolated if T ever has more
/// burning vertices than G.
std::vector<DominancePair> dominance_check(const GrowingGraph& graph, const TreeSequence& trees,
                                           std::span<const VertexId> sources, Turn turns);

/// A random legal construction: every turn adds 1..max_new vertices, each
/// joined to 1..max_degree distinct earlier vertices.
GrowingGraph random_construction(std::uint64_t seed, Turn turns, std::uint32_t max_new = 4,
                                 std::uint32_t max_degree = 3);

/// Uniformly random unburned source per turn, replaying the burn on `graph`.
std::vector<VertexId> random_sources(const GrowingGraph& graph, Turn turns, std::uint64_t seed);

struct DominanceSummary {
    std::size_t samples = 0;
    std::size_t violations = 0;
    std::size_t strict_runs = 0; // runs where T burned strictly less at some turn
};

DominanceSummary verify_tree_dominance(std::size_t samples, std::uint64_t seed, Turn turns = 100);

} // namespace pyreline
