#include "pyreline/engine.hpp"

#include "pyreline/disjoint_sets.hpp"
#include "pyreline/errors.hpp"

#include <algorithm>
#include <string>

namespace pyreline {

std::span<const VertexId> BurnState::spread(const GrowingGraph& graph)
{
    burning_.resize(graph.vertex_count(), 0);
    const std::size_t before = log_.size();

    // Edges added since the last round can connect long-burning vertices to
    // fresh ones. Collect first so nothing spreads twice in one round.
    scratch_.clear();
    for (EdgeId e = edge_mark_; e < graph.edge_count(); ++e) {
        const Edge ed = graph.edge(e);
        ++work_;
        if (burning_[ed.u] && !burning_[ed.v])
            scratch_.push_back(ed.v);
        else if (burning_[ed.v] && !burning_[ed.u])
            scratch_.push_back(ed.u);
    }
    edge_mark_ = graph.edge_count();
    for (VertexId v : scratch_) {
        if (!burning_[v]) {
            burning_[v] = 1;
            log_.push_back(v);
        }
    }

    // Older edges only matter around the frontier.
    for (std::size_t i = frontier_begin_; i < before; ++i) {
        graph.for_each_neighbor(log_[i], [&](VertexId w) {
            ++work_;
            if (!burning_[w]) {
                burning_[w] = 1;
                log_.push_back(w);
            }
        });
    }
    frontier_begin_ = before;
    return std::span<const VertexId>(log_).subspan(before);
}

void BurnState::ignite(Turn turn, VertexId v)
{
    if (v >= burning_.size())
        fail(ErrorCode::StrategyReturnedUnknownVertex, "vertex " + std::to_string(v) + " does not exist");
    if (burning_[v])
        fail(ErrorCode::StrategyReturnedBurnedVertex, "vertex " + std::to_string(v) + " is already burning");
    burning_[v] = 1;
    log_.push_back(v);
    sources_.push_back({turn, v});
}

void BurnState::record_pass(Turn turn)
{
    sources_.push_back({turn, kPass});
}

void validate_builder_move(const GrowingGraph& graph, const BuilderMove& move, std::uint64_t required_count)
{
    if (move.count != required_count)
        fail(ErrorCode::WrongCount, "expected " + std::to_string(required_count) + " new vertices, got " +
                                        std::to_string(move.count));
    const std::uint64_t old_count = graph.vertex_count();
    const std::uint64_t total = old_count + move.count;
    std::vector<Edge> normalized;
    normalized.reserve(move.edges.size());
    for (const Edge& e : move.edges) {
        auto pair = [&] { return "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")"; };
        if (e.u >= total || e.v >= total)
            fail(ErrorCode::UnknownEndpoint, "edge " + pair() + " names a vertex that does not exist");
        if (e.u == e.v)
            fail(ErrorCode::SelfLoop, "edge " + pair() + " is a self-loop");
        if (e.u < old_count && e.v < old_count)
            fail(ErrorCode::EdgeBetweenOldVertices, "edge " + pair() + " joins two existing vertices");
        normalized.push_back({std::min(e.u, e.v), std::max(e.u, e.v)});
    }
    std::sort(normalized.begin(), normalized.end(),
              [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
    if (auto dup = std::adjacent_find(normalized.begin(), normalized.end()); dup != normalized.end())
        fail(ErrorCode::DuplicateEdge,
             "edge (" + std::to_string(dup->u) + "," + std::to_string(dup->v) + ") given twice");
    if (move.count == 0)
        return;

    // Node 0 stands for the whole old graph, which is connected already.
    DisjointSets sets(move.count + 1);
    auto node = [&](VertexId v) { return v < old_count ? 0U : static_cast<std::uint32_t>(v - old_count + 1); };
    for (const Edge& e : normalized)
        sets.unite(node(e.u), node(e.v));
    const std::size_t expected = old_count == 0 ? 2 : 1;
    if (sets.components() != expected)
        fail(ErrorCode::ResultDisconnected,
             "the move leaves " + std::to_string(sets.components() - (expected - 1)) + " components");
}

Game::Game(GrowthSchedule schedule, std::unique_ptr<Builder> builder, std::unique_ptr<Arsonist> arsonist,
           std::uint64_t seed, GameOptions options)
    : schedule_(std::move(schedule)), builder_(std::move(builder)), arsonist_(std::move(arsonist)), seed_(seed),
      options_(options)
{
}

std::uint64_t Game::begin_turn()
{
    if (stage_ == Stage::AwaitBuilder)
        return pending_count_;
    if (stage_ == Stage::AwaitArsonist)
        fail(ErrorCode::InvalidStage, "turn " + std::to_string(completed_ + 1) + " is waiting for an ignition");
    pending_count_ = schedule_.next_count(completed_ + 1, graph_.vertex_count());
    stage_ = Stage::AwaitBuilder;
    return pending_count_;
}

void Game::submit_builder_move(const BuilderMove& move)
{
    if (stage_ != Stage::AwaitBuilder)
        fail(ErrorCode::InvalidStage, "no builder move is expected now");
    validate_builder_move(graph_, move, pending_count_);
    graph_.add_generation(completed_ + 1, move.count, move.edges);
    burn_.spread(graph_);
    stage_ = Stage::AwaitArsonist;
}

const TurnRecord& Game::submit_ignition(VertexId v)
{
    if (stage_ != Stage::AwaitArsonist)
        fail(ErrorCode::InvalidStage, "no ignition is expected now");
    const Turn turn = completed_ + 1;
    const std::uint64_t vertices = graph_.vertex_count();
    if (v == kPass) {
        if (burn_.burning_count() < vertices)
            fail(ErrorCode::IllegalPass, "pass while unburned vertices remain");
        burn_.record_pass(turn);
    } else {
        if (v >= vertices)
            fail(ErrorCode::StrategyReturnedUnknownVertex, "vertex " + std::to_string(v) + " does not exist");
        burn_.ignite(turn, v);
    }
    trace_.push_back({turn, pending_count_, vertices, burn_.burning_count(), v});
    completed_ = turn;
    stage_ = Stage::BetweenTurns;
    pending_count_ = 0;
    return trace_.back();
}

BuilderMove Game::builder_move()
{
    return builder_->move(GameView{completed_ + 1, graph_, burn_}, pending_count_);
}

VertexId Game::arsonist_choice()
{
    return arsonist_->choose(GameView{completed_ + 1, graph_, burn_});
}

const TurnRecord& Game::play_turn()
{
    begin_turn();
    submit_builder_move(builder_move());
    return submit_ignition(arsonist_choice());
}

bool Game::try_fast_forward(Turn limit)
{
    if (!options_.fast_forward || stage_ != Stage::BetweenTurns)
        return false;
    const std::uint64_t vertices = graph_.vertex_count();
    if (vertices == 0 || burn_.burning_count() < vertices)
        return false;
    if (!builder_->skippable() || !arsonist_->skippable())
        return false;
    const Turn last = schedule_.skip_zero_turns(completed_ + 1, vertices, limit);
    if (last <= completed_)
        return false;
    burn_.record_pass(last);
    trace_.push_back({last, 0, vertices, burn_.burning_count(), kPass});
    completed_ = last;
    return true;
}

void Game::run_until(Turn target)
{
    while (completed_ < target) {
        if (try_fast_forward(target))
            continue;
        play_turn();
    }
}

DensitySeries Game::run(Turn turns)
{
    if (turns < 1)
        fail(ErrorCode::InvalidParams, "run needs at least one turn");
    run_until(completed_ + turns);
    return series();
}

DensitySeries Game::series() const
{
    DensitySeries s;
    for (const TurnRecord& r : trace_)
        s.push({r.turn, r.vertex_total, r.burning_total});
    return s;
}

} // namespace pyreline
