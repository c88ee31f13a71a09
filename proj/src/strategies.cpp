#include "pyreline/strategies.hpp"

#include "pyreline/errors.hpp"

#include <algorithm>
#include <iostream>
#include <string>

namespace pyreline {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

BuilderMove PathBuilder::move(const GameView& view, std::uint64_t count)
{
    BuilderMove m{count, {}};
    if (count == 0)
        return m;
    const VertexId first = view.graph.vertex_count();
    VertexId prev = first == 0 ? first : (endpoint_ == kNoVertex ? first - 1 : endpoint_);
    m.edges.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto v = static_cast<VertexId>(first + i);
        if (v != prev)
            m.edges.push_back({prev, v});
        prev = v;
    }
    endpoint_ = prev;
    return m;
}

BuilderMove StarBuilder::move(const GameView& view, std::uint64_t count)
{
    BuilderMove m{count, {}};
    const VertexId first = view.graph.vertex_count();
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto v = static_cast<VertexId>(first + i);
        if (v != 0)
            m.edges.push_back({0, v});
    }
    return m;
}

BuilderMove RandomRecursiveBuilder::move(const GameView& view, std::uint64_t count)
{
    BuilderMove m{count, {}};
    const VertexId first = view.graph.vertex_count();
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto v = static_cast<VertexId>(first + i);
        if (v == 0)
            continue;
        std::uniform_int_distribution<VertexId> parent(0, v - 1);
        m.edges.push_back({parent(rng_), v});
    }
    return m;
}

BuilderMove HumanBuilder::move(const GameView&, std::uint64_t)
{
    fail(ErrorCode::InvalidStage, "the builder move must come from the player");
}

VertexId HumanArsonist::choose(const GameView&)
{
    fail(ErrorCode::InvalidStage, "the ignition must come from the player");
}

// ---- greedy ----

void GreedyArsonist::push(VertexId v)
{
    heap_.push({eta_[v], v});
}

void GreedyArsonist::rebuild_heap(const GameView& view)
{
    std::vector<Entry> entries;
    entries.reserve(view.graph.vertex_count() - view.burn.burning_count());
    for (VertexId v = 0; v < view.graph.vertex_count(); ++v)
        if (!view.burn.is_burning(v))
            entries.push_back({eta_[v], v});
    heap_ = std::priority_queue<Entry>(std::less<Entry>(), std::move(entries));
}

VertexId GreedyArsonist::choose(const GameView& view)
{
    const GrowingGraph& g = view.graph;
    const BurnState& burn = view.burn;
    const Key now = view.turn;
    auto key = [&](VertexId v) { return burn.is_burning(v) ? now : eta_[v]; };

    const VertexId old_count = static_cast<VertexId>(eta_.size());
    eta_.resize(g.vertex_count(), kInfinite);
    for (VertexId v = old_count; v < g.vertex_count(); ++v)
        push(v);

    // Seeds: everything that caught fire since the last call, plus both ends
    // of each new edge. Unit weights, so a merge of the sorted seeds with a
    // FIFO yields labels in nondecreasing order (Dijkstra without a heap).
    seeds_.clear();
    const auto log = burn.burn_log();
    for (std::size_t i = seen_log_; i < log.size(); ++i)
        seeds_.emplace_back(now, log[i]);
    seen_log_ = log.size();
    for (EdgeId e = seen_edges_; e < g.edge_count(); ++e) {
        const Edge ed = g.edge(e);
        if (Key k = key(ed.u); k < kInfinite)
            seeds_.emplace_back(k, ed.u);
        if (Key k = key(ed.v); k < kInfinite)
            seeds_.emplace_back(k, ed.v);
    }
    seen_edges_ = g.edge_count();
    std::sort(seeds_.begin(), seeds_.end());

    fifo_.clear();
    std::size_t si = 0, fi = 0;
    while (si < seeds_.size() || fi < fifo_.size()) {
        std::pair<Key, VertexId> cur;
        if (fi == fifo_.size() || (si < seeds_.size() && seeds_[si].first <= fifo_[fi].first))
            cur = seeds_[si++];
        else
            cur = fifo_[fi++];
        const auto [label, v] = cur;
        if (label != key(v))
            continue;
        g.for_each_neighbor(v, [&](VertexId w) {
            if (!burn.is_burning(w) && label + 1 < eta_[w]) {
                eta_[w] = label + 1;
                fifo_.emplace_back(label + 1, w);
                push(w);
            }
        });
    }

    const std::uint64_t unburned = g.vertex_count() - burn.burning_count();
    if (heap_.size() > 2 * unburned + 1024)
        rebuild_heap(view);
    while (!heap_.empty()) {
        const Entry top = heap_.top();
        if (!burn.is_burning(top.v) && eta_[top.v] == top.key)
            return top.v;
        heap_.pop();
    }
    return kPass;
}

// ---- random ----

VertexId RandomArsonist::choose(const GameView& view)
{
    const VertexId n = view.graph.vertex_count();
    slot_.resize(n);
    for (VertexId v = seen_vertices_; v < n; ++v) {
        slot_[v] = static_cast<std::uint32_t>(unburned_.size());
        unburned_.push_back(v);
    }
    seen_vertices_ = n;
    const auto log = view.burn.burn_log();
    for (std::size_t i = seen_log_; i < log.size(); ++i) {
        const VertexId v = log[i];
        const std::uint32_t at = slot_[v];
        const VertexId last = unburned_.back();
        unburned_[at] = last;
        slot_[last] = at;
        unburned_.pop_back();
    }
    seen_log_ = log.size();
    if (unburned_.empty())
        return kPass;
    std::uniform_int_distribution<std::size_t> pick(0, unburned_.size() - 1);
    return unburned_[pick(rng_)];
}

// ---- phase ----

PhaseArsonist::PhaseArsonist(PhaseOptions options) : options_(options)
{
    if (options_.warmup < 1)
        fail(ErrorCode::InvalidParams, "phase warmup must be at least 1");
}

VertexId PhaseArsonist::lowest_unburned(const GameView& view)
{
    while (low_ < view.graph.vertex_count() && view.burn.is_burning(low_))
        ++low_;
    return low_ < view.graph.vertex_count() ? low_ : kPass;
}

void PhaseArsonist::start_phase(Turn turn, VertexId snapshot)
{
    current_ = PhaseRecord{};
    current_.k = static_cast<std::uint32_t>(phases_.size() + 1);
    current_.start = turn;
    current_.snapshot_vertices = snapshot;
    in_phase_ = true;
    planned_ = false;
    cursor_ = 0;
}

void PhaseArsonist::plan(const GameView& view)
{
    const auto snapshot = static_cast<VertexId>(current_.snapshot_vertices);
    std::vector<VertexId> targets;
    for (VertexId v = lowest_unburned(view) == kPass ? snapshot : low_; v < snapshot; ++v)
        if (!view.burn.is_burning(v))
            targets.push_back(v);
    Plan p = plan_cover(GraphView(view.graph, snapshot), targets, options_.planner);
    schedule_ = std::move(p.schedule);
    current_.targets = targets.size();
    current_.rounds = schedule_.rounds;
    current_.planner = p.kind;
    current_.budget = p.budget;
    current_.budget_violation = p.budget_violation;
    if (p.budget_violation)
        std::clog << "phase " << current_.k << ": " << to_string(p.kind) << " planner needed " << schedule_.rounds
                  << " rounds, over the budget of " << p.budget << " for " << snapshot << " vertices\n";
    planned_ = true;
    cursor_ = 0;
}

VertexId PhaseArsonist::choose(const GameView& view)
{
    const Turn t = view.turn;
    if (!in_phase_) {
        const VertexId v = lowest_unburned(view);
        if (t >= options_.warmup)
            start_phase(t, view.graph.vertex_count());
        return v;
    }
    if (!planned_)
        plan(view);

    VertexId v = cursor_ < schedule_.sources.size() ? schedule_.sources[cursor_] : kPass;
    ++cursor_;
    if (v == kPass || v >= view.graph.vertex_count() || view.burn.is_burning(v))
        v = lowest_unburned(view);

    if (cursor_ >= schedule_.rounds) {
        // Last source of the phase: the snapshot must now burn entirely,
        // counting the vertex about to be ignited.
        VertexId u = lowest_unburned(view);
        if (u == v && u != kPass) {
            u = v + 1;
            while (u < view.graph.vertex_count() && view.burn.is_burning(u))
                ++u;
        }
        current_.end = t;
        current_.invariant_ok = u == kPass || u >= current_.snapshot_vertices;
        phases_.push_back(current_);
        start_phase(t, view.graph.vertex_count());
    }
    return v;
}

// ---- registry ----

bool is_builder_name(std::string_view name)
{
    return name == "path" || name == "star" || name == "rrt" || name == "human";
}

bool is_arsonist_name(std::string_view name)
{
    return name == "phase" || name == "greedy" || name == "random" || name == "human";
}

std::unique_ptr<Builder> make_builder(std::string_view name, std::uint64_t game_seed)
{
    if (name == "path")
        return std::make_unique<PathBuilder>();
    if (name == "star")
        return std::make_unique<StarBuilder>();
    if (name == "rrt")
        return std::make_unique<RandomRecursiveBuilder>(derive_seed(game_seed, 1));
    if (name == "human")
        return std::make_unique<HumanBuilder>();
    fail(ErrorCode::BadStrategy, "unknown builder '" + std::string(name) + "'");
}

std::unique_ptr<Arsonist> make_arsonist(std::string_view name, std::uint64_t game_seed, const PhaseOptions& phase)
{
    if (name == "phase")
        return std::make_unique<PhaseArsonist>(phase);
    if (name == "greedy")
        return std::make_unique<GreedyArsonist>();
    if (name == "random")
        return std::make_unique<RandomArsonist>(derive_seed(game_seed, 2));
    if (name == "human")
        return std::make_unique<HumanArsonist>();
    fail(ErrorCode::BadStrategy, "unknown arsonist '" + std::string(name) + "'");
}

} // namespace pyreline
