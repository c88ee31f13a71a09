#include "pyreline/tree_reduction.hpp"

#include "pyreline/errors.hpp"
#include "pyreline/strategies.hpp"

#include <algorithm>
#include <random>
#include <string>

namespace pyreline {

TreeSequence::TreeSequence(const GrowingGraph& base, std::vector<EdgeId> kept, std::vector<std::size_t> kept_begin)
    : base_(&base), kept_(std::move(kept)), kept_begin_(std::move(kept_begin))
{
}

std::span<const EdgeId> TreeSequence::kept_through(Turn turn) const
{
    const auto gens = base_->generations();
    auto it = std::upper_bound(gens.begin(), gens.end(), turn,
                               [](Turn t, const GenerationSpan& g) { return t < g.turn; });
    const auto count = static_cast<std::size_t>(it - gens.begin());
    return std::span<const EdgeId>(kept_).first(kept_begin_[count]);
}

std::span<const EdgeId> TreeSequence::kept_in_generation(std::size_t i) const
{
    return std::span<const EdgeId>(kept_).subspan(kept_begin_[i], kept_begin_[i + 1] - kept_begin_[i]);
}

TreeSequence incremental_spanning_tree(const GrowingGraph& graph)
{
    const auto gens = graph.generations();
    std::vector<EdgeId> kept;
    std::vector<std::size_t> kept_begin{0};
    kept.reserve(graph.vertex_count());

    constexpr EdgeId kNoEdge = kNoVertex;
    // state: 0 unspanned, 1 spanned, 2 joining the layer being built
    std::vector<std::uint8_t> state;
    std::vector<EdgeId> best;
    std::vector<VertexId> layer, next;

    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
        const VertexId a = gens[gi].first_vertex;
        const VertexId b = gi + 1 < gens.size() ? gens[gi + 1].first_vertex : graph.vertex_count();
        const EdgeId e_end = gi + 1 < gens.size() ? gens[gi + 1].first_edge : graph.edge_count();
        const VertexId count = b - a;
        state.assign(count, 0);
        best.assign(count, kNoEdge);
        layer.clear();

        if (a == 0 && count > 0) {
            state[0] = 1;
            layer.push_back(0);
        } else {
            for (VertexId v = a; v < b; ++v) {
                graph.for_each_incident(v, [&](VertexId w, EdgeId e) {
                    if (e < e_end && w < a)
                        best[v - a] = std::min(best[v - a], e);
                });
                if (best[v - a] != kNoEdge) {
                    state[v - a] = 1;
                    layer.push_back(v);
                }
            }
        }
        while (!layer.empty()) {
            next.clear();
            for (VertexId u : layer) {
                graph.for_each_incident(u, [&](VertexId w, EdgeId e) {
                    if (e >= e_end || w < a)
                        return;
                    std::uint8_t& s = state[w - a];
                    if (s == 0) {
                        s = 2;
                        best[w - a] = e;
                        next.push_back(w);
                    } else if (s == 2) {
                        best[w - a] = std::min(best[w - a], e);
                    }
                });
            }
            for (VertexId w : next)
                state[w - a] = 1;
            layer.swap(next);
        }

        const std::size_t begin = kept.size();
        for (VertexId i = 0; i < count; ++i) {
            if (state[i] == 0)
                fail(ErrorCode::PrefixDisconnected, "vertex " + std::to_string(a + i) + " of turn " +
                                                        std::to_string(gens[gi].turn) + " is not reachable");
            if (best[i] != kNoEdge)
                kept.push_back(best[i]);
        }
        std::sort(kept.begin() + static_cast<std::ptrdiff_t>(begin), kept.end());
        kept_begin.push_back(kept.size());
    }
    return TreeSequence(graph, std::move(kept), std::move(kept_begin));
}

std::vector<DominancePair> dominance_check(const GrowingGraph& graph, const TreeSequence& trees,
                                           std::span<const VertexId> sources, Turn turns)
{
    const auto gens = graph.generations();
    GrowingGraph g, t;
    BurnState bg, bt;
    std::vector<DominancePair> out;
    std::vector<Edge> edges;
    std::size_t gi = 0;
    for (Turn n = 1; n <= turns; ++n) {
        if (gi < gens.size() && gens[gi].turn == n) {
            const VertexId b = gi + 1 < gens.size() ? gens[gi + 1].first_vertex : graph.vertex_count();
            const EdgeId e_end = gi + 1 < gens.size() ? gens[gi + 1].first_edge : graph.edge_count();
            const std::uint64_t count = b - gens[gi].first_vertex;
            edges.clear();
            for (EdgeId e = gens[gi].first_edge; e < e_end; ++e)
                edges.push_back(graph.edge(e));
            g.add_generation(n, count, edges);
            edges.clear();
            for (EdgeId e : trees.kept_in_generation(gi))
                edges.push_back(graph.edge(e));
            t.add_generation(n, count, edges);
            ++gi;
        }
        bg.spread(g);
        bt.spread(t);
        const auto idx = static_cast<std::size_t>(n - 1);
        const VertexId s = idx < sources.size() ? sources[idx] : kPass;
        if (s != kPass) {
            if (s >= g.vertex_count() || bg.is_burning(s))
                fail(ErrorCode::InvalidSource,
                     "turn " + std::to_string(n) + ": source " + std::to_string(s) + " is not an unburned vertex");
            bg.ignite(n, s);
            if (!bt.is_burning(s))
                bt.ignite(n, s);
        }
        out.push_back({n, g.vertex_count(), bt.burning_count(), bg.burning_count()});
        if (bt.burning_count() > bg.burning_count())
            fail(ErrorCode::DominanceViolated, "turn " + std::to_string(n) + ": tree has " +
                                                   std::to_string(bt.burning_count()) + " burning vertices, graph " +
                                                   std::to_string(bg.burning_count()));
    }
    return out;
}

GrowingGraph random_construction(std::uint64_t seed, Turn turns, std::uint32_t max_new, std::uint32_t max_degree)
{
    std::mt19937_64 rng(seed);
    GrowingGraph g;
    std::vector<Edge> edges;
    std::vector<VertexId> picks;
    for (Turn n = 1; n <= turns; ++n) {
        const VertexId first = g.vertex_count();
        const auto count = std::uniform_int_distribution<std::uint32_t>(1, max_new)(rng);
        edges.clear();
        for (VertexId v = first; v < first + count; ++v) {
            if (v == 0)
                continue;
            const auto want = std::min<std::uint32_t>(std::uniform_int_distribution<std::uint32_t>(1, max_degree)(rng), v);
            picks.clear();
            std::uniform_int_distribution<VertexId> earlier(0, v - 1);
            while (picks.size() < want) {
                const VertexId u = earlier(rng);
                if (std::find(picks.begin(), picks.end(), u) == picks.end())
                    picks.push_back(u);
            }
            for (VertexId u : picks)
                edges.push_back({u, v});
        }
        g.add_generation(n, count, edges);
    }
    return g;
}

std::vector<VertexId> random_sources(const GrowingGraph& graph, Turn turns, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    const auto gens = graph.generations();
    GrowingGraph g;
    BurnState burn;
    std::vector<Edge> edges;
    std::vector<VertexId> unburned;
    std::vector<VertexId> out;
    std::size_t gi = 0;
    for (Turn n = 1; n <= turns; ++n) {
        if (gi < gens.size() && gens[gi].turn == n) {
            const VertexId b = gi + 1 < gens.size() ? gens[gi + 1].first_vertex : graph.vertex_count();
            const EdgeId e_end = gi + 1 < gens.size() ? gens[gi + 1].first_edge : graph.edge_count();
            edges.clear();
            for (EdgeId e = gens[gi].first_edge; e < e_end; ++e)
                edges.push_back(graph.edge(e));
            g.add_generation(n, b - gens[gi].first_vertex, edges);
            ++gi;
        }
        burn.spread(g);
        unburned.clear();
        for (VertexId v = 0; v < g.vertex_count(); ++v)
            if (!burn.is_burning(v))
                unburned.push_back(v);
        if (unburned.empty()) {
            out.push_back(kPass);
            continue;
        }
        const VertexId s = unburned[std::uniform_int_distribution<std::size_t>(0, unburned.size() - 1)(rng)];
        burn.ignite(n, s);
        out.push_back(s);
    }
    return out;
}

DominanceSummary verify_tree_dominance(std::size_t samples, std::uint64_t seed, Turn turns)
{
    DominanceSummary summary;
    for (std::size_t i = 0; i < samples; ++i) {
        const std::uint64_t s = derive_seed(seed, 100 + i);
        const GrowingGraph g = random_construction(s, turns);
        const TreeSequence trees = incremental_spanning_tree(g);
        const auto sources = random_sources(g, turns, derive_seed(s, 1));
        ++summary.samples;
        try {
            const auto pairs = dominance_check(g, trees, sources, turns);
            if (std::any_of(pairs.begin(), pairs.end(),
                            [](const DominancePair& p) { return p.tree_burning < p.graph_burning; }))
                ++summary.strict_runs;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DominanceViolated)
                throw;
            ++summary.violations;
        }
    }
    return summary;
}

} // namespace pyreline
