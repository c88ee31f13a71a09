#include "pyreline/graph.hpp"

#include "pyreline/errors.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

namespace pyreline {

std::vector<VertexId> GrowingGraph::add_generation(Turn turn, std::uint64_t count, std::span<const Edge> edges)
{
    if (turn <= last_turn_)
        fail(ErrorCode::InvalidParams,
             "generation turn " + std::to_string(turn) + " does not follow turn " + std::to_string(last_turn_));
    const std::uint64_t old_count = vertex_count();
    const std::uint64_t new_total = old_count + count;
    if (new_total >= kNoVertex)
        fail(ErrorCode::InvalidParams, "vertex id space exhausted");

    std::vector<Edge> normalized;
    normalized.reserve(edges.size());
    for (const Edge& e : edges) {
        if (e.u >= new_total || e.v >= new_total)
            fail(ErrorCode::UnknownEndpoint,
                 "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") names a vertex that does not exist");
        if (e.u == e.v)
            fail(ErrorCode::SelfLoop, "self-loop at vertex " + std::to_string(e.u));
        if (e.u < old_count && e.v < old_count)
            fail(ErrorCode::EdgeBetweenOldVertices,
                 "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") joins two existing vertices");
        normalized.push_back({std::min(e.u, e.v), std::max(e.u, e.v)});
    }
    std::sort(normalized.begin(), normalized.end(),
              [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
    if (auto dup = std::adjacent_find(normalized.begin(), normalized.end()); dup != normalized.end())
        fail(ErrorCode::DuplicateEdge, "edge (" + std::to_string(dup->u) + "," + std::to_string(dup->v) + ") given twice");

    last_turn_ = turn;
    std::vector<VertexId> ids;
    if (count == 0 && edges.empty())
        return ids;

    generations_.push_back({turn, static_cast<VertexId>(old_count), edge_count()});
    ids.resize(count);
    for (std::uint64_t i = 0; i < count; ++i)
        ids[i] = static_cast<VertexId>(old_count + i);
    head_.resize(new_total, kNoVertex);
    // Insertion order is preserved so edge ids follow the caller's order.
    for (const Edge& e : edges) {
        link(e.u, e.v);
        link(e.v, e.u);
    }
    return ids;
}

void GrowingGraph::link(VertexId from, VertexId to)
{
    half_to_.push_back(to);
    half_next_.push_back(head_[from]);
    head_[from] = static_cast<std::uint32_t>(half_to_.size() - 1);
}

std::uint32_t GrowingGraph::degree(VertexId v) const
{
    std::uint32_t d = 0;
    for_each_neighbor(v, [&](VertexId) { ++d; });
    return d;
}

Turn GrowingGraph::generation(VertexId v) const
{
    if (v >= vertex_count())
        fail(ErrorCode::UnknownVertex, "vertex " + std::to_string(v));
    auto it = std::upper_bound(generations_.begin(), generations_.end(), v,
                               [](VertexId id, const GenerationSpan& g) { return id < g.first_vertex; });
    return std::prev(it)->turn;
}

Turn GrowingGraph::edge_generation(EdgeId e) const
{
    auto it = std::upper_bound(generations_.begin(), generations_.end(), e,
                               [](EdgeId id, const GenerationSpan& g) { return id < g.first_edge; });
    return std::prev(it)->turn;
}

VertexId GrowingGraph::vertices_through(Turn turn) const
{
    auto it = std::upper_bound(generations_.begin(), generations_.end(), turn,
                               [](Turn t, const GenerationSpan& g) { return t < g.turn; });
    return it == generations_.end() ? vertex_count() : it->first_vertex;
}

EdgeId GrowingGraph::edges_through(Turn turn) const
{
    auto it = std::upper_bound(generations_.begin(), generations_.end(), turn,
                               [](Turn t, const GenerationSpan& g) { return t < g.turn; });
    return it == generations_.end() ? edge_count() : it->first_edge;
}

void GrowingGraph::reserve(std::size_t vertices, std::size_t edges)
{
    head_.reserve(vertices);
    half_to_.reserve(2 * edges);
    half_next_.reserve(2 * edges);
}

GraphSnapshot snapshot_at(const GrowingGraph& graph, Turn turn)
{
    return {turn, graph.vertices_through(turn)};
}

bool is_connected(const GraphView& view)
{
    const VertexId n = view.vertex_count();
    if (n == 0)
        return true;
    std::vector<std::uint32_t> dist;
    const VertexId root = 0;
    bfs_fill(view, std::span(&root, 1), dist);
    return std::none_of(dist.begin(), dist.end(), [](std::uint32_t d) { return d == kUnreached; });
}

void bfs_fill(const GraphView& view, std::span<const VertexId> sources, std::vector<std::uint32_t>& dist,
              std::uint32_t cap)
{
    const VertexId n = view.vertex_count();
    dist.assign(n, kUnreached);
    std::vector<VertexId> queue;
    queue.reserve(sources.size());
    for (VertexId s : sources) {
        if (s >= n)
            fail(ErrorCode::UnknownVertex, "BFS source " + std::to_string(s));
        if (dist[s] != 0) {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const VertexId v = queue[head];
        const std::uint32_t next = dist[v] + 1;
        if (next > cap)
            continue;
        view.for_each_neighbor(v, [&](VertexId w) {
            if (dist[w] == kUnreached) {
                dist[w] = next;
                queue.push_back(w);
            }
        });
    }
}

std::unordered_map<VertexId, std::uint32_t>
bfs_distances(const GraphView& view, VertexId source, std::optional<std::uint32_t> cap)
{
    if (source >= view.vertex_count())
        fail(ErrorCode::UnknownVertex, "BFS source " + std::to_string(source));
    std::unordered_map<VertexId, std::uint32_t> out;
    std::vector<VertexId> queue{source};
    out.emplace(source, 0);
    const std::uint32_t limit = cap.value_or(kUnreached);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const VertexId v = queue[head];
        const std::uint32_t next = out[v] + 1;
        if (next > limit)
            continue;
        view.for_each_neighbor(v, [&](VertexId w) {
            if (out.emplace(w, next).second)
                queue.push_back(w);
        });
    }
    return out;
}

GrowingGraph read_edge_list(std::istream& in)
{
    std::uint64_t n = 0, m = 0;
    if (!(in >> n >> m))
        fail(ErrorCode::ConfigError, "edge list: expected header line `n m`");
    std::vector<Edge> edges;
    edges.reserve(m);
    for (std::uint64_t i = 0; i < m; ++i) {
        std::uint64_t u = 0, v = 0;
        if (!(in >> u >> v))
            fail(ErrorCode::ConfigError, "edge list: expected " + std::to_string(m) + " edges, got " + std::to_string(i));
        if (u >= n || v >= n)
            fail(ErrorCode::UnknownEndpoint,
                 "edge list line " + std::to_string(i + 2) + ": endpoint out of range for n=" + std::to_string(n));
        edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v)});
    }
    GrowingGraph g;
    g.add_generation(1, n, edges);
    return g;
}

void write_edge_list(const GraphView& view, std::ostream& out)
{
    std::vector<Edge> edges;
    const GrowingGraph& g = view.graph();
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const Edge ed = g.edge(e);
        if (ed.u < view.vertex_count() && ed.v < view.vertex_count())
            edges.push_back(ed);
    }
    out << view.vertex_count() << ' ' << edges.size() << '\n';
    for (const Edge& e : edges)
        out << e.u << ' ' << e.v << '\n';
}

} // namespace pyreline
