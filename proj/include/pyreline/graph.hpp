#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace pyreline {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
/// Turn index. Turns can run far past 2^32 in the fluctuating schedules.
using Turn = std::int64_t;

inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();
inline constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

struct Edge {
    VertexId u = 0;
    VertexId v = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// One add_generation call: vertices [first_vertex, next.first_vertex) and
/// edges [first_edge, next.first_edge) arrived at `turn`.
struct GenerationSpan {
    Turn turn = 0;
    VertexId first_vertex = 0;
    EdgeId first_edge = 0;
};

/// Append-only undirected graph. Vertex ids are dense and assigned in arrival
/// order, so the graph as it stood after turn m is exactly the prefix of
/// vertices with generation <= m. Adjacency lives in flat forward-star arrays
/// (one head per vertex, two half-edges per edge).
class GrowingGraph {
public:
    GrowingGraph() = default;

    VertexId vertex_count() const noexcept { return static_cast<VertexId>(head_.size()); }
    EdgeId edge_count() const noexcept { return static_cast<EdgeId>(half_to_.size() / 2); }
    Turn last_turn() const noexcept { return last_turn_; }

    /// Adds `count` vertices tagged with `turn` plus the given edges. Every
    /// edge must touch at least one of the new ids.
    std::vector<VertexId> add_generation(Turn turn, std::uint64_t count, std::span<const Edge> edges);

    template <class F>
    void for_each_neighbor(VertexId v, F&& f) const
    {
        for (std::uint32_t h = head_[v]; h != kNoVertex; h = half_next_[h])
            f(half_to_[h]);
    }

    /// Calls f(neighbor, edge id) for every incident edge.
    template <class F>
    void for_each_incident(VertexId v, F&& f) const
    {
        for (std::uint32_t h = head_[v]; h != kNoVertex; h = half_next_[h])
            f(half_to_[h], static_cast<EdgeId>(h / 2));
    }

    Edge edge(EdgeId e) const noexcept { return {half_to_[2 * e + 1], half_to_[2 * e]}; }
    std::uint32_t degree(VertexId v) const;

    Turn generation(VertexId v) const;
    Turn edge_generation(EdgeId e) const;

    /// Number of vertices (resp. edges) with generation <= turn.
    VertexId vertices_through(Turn turn) const;
    EdgeId edges_through(Turn turn) const;

    std::span<const GenerationSpan> generations() const noexcept { return generations_; }

    void reserve(std::size_t vertices, std::size_t edges);

private:
    void link(VertexId from, VertexId to);

    std::vector<std::uint32_t> head_;
    std::vector<VertexId> half_to_;
    std::vector<std::uint32_t> half_next_;
    std::vector<GenerationSpan> generations_;
    Turn last_turn_ = 0;
};

/// Read-only view of the prefix {0, ..., limit-1} of a growing graph, i.e.
/// the graph as it stood at some past turn.
class GraphView {
public:
    GraphView(const GrowingGraph& graph) : graph_(&graph), limit_(graph.vertex_count()) {}
    GraphView(const GrowingGraph& graph, VertexId limit) : graph_(&graph), limit_(limit) {}

    VertexId vertex_count() const noexcept { return limit_; }
    const GrowingGraph& graph() const noexcept { return *graph_; }

    template <class F>
    void for_each_neighbor(VertexId v, F&& f) const
    {
        graph_->for_each_neighbor(v, [&](VertexId w) {
            if (w < limit_)
                f(w);
        });
    }

private:
    const GrowingGraph* graph_;
    VertexId limit_;
};

/// Logical view of a past turn: vertex_count is the number of vertices with
/// generation <= turn.
struct GraphSnapshot {
    Turn turn = 0;
    VertexId vertex_count = 0;
};

GraphSnapshot snapshot_at(const GrowingGraph& graph, Turn turn);

bool is_connected(const GraphView& view);

std::unordered_map<VertexId, std::uint32_t>
bfs_distances(const GraphView& view, VertexId source, std::optional<std::uint32_t> cap = std::nullopt);

/// Multi-source BFS into a dense array (kUnreached for vertices not reached
/// within cap). `dist` is resized to the view size.
void bfs_fill(const GraphView& view, std::span<const VertexId> sources, std::vector<std::uint32_t>& dist,
              std::uint32_t cap = kUnreached);

/// Edge-list text format: first line `n m`, then m lines `u v` (0-based).
/// The whole graph is loaded as a single generation at turn 1.
GrowingGraph read_edge_list(std::istream& in);
void write_edge_list(const GraphView& view, std::ostream& out);

} // namespace pyreline
