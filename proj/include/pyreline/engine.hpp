#pragma once

#include "pyreline/graph.hpp"
#include "pyreline/growth_schedule.hpp"
#include "pyreline/metrics.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace pyreline {

/// Source value recorded when Arsonist has nothing left to ignite.
inline constexpr VertexId kPass = kNoVertex;

struct FireSource {
    Turn turn = 0;
    VertexId vertex = kPass;
};

/// Burning set B_n plus the ignition history. Vertices are logged in the
/// order they caught fire; the frontier is the tail of that log produced by
/// the latest spread and ignition.
class BurnState {
public:
    bool is_burning(VertexId v) const { return v < burning_.size() && burning_[v] != 0; }
    std::uint64_t burning_count() const noexcept { return log_.size(); }

    /// One synchronous round on `graph`. Only the frontier and the edges added
    /// since the previous round are scanned. Returns the newly burned vertices.
    std::span<const VertexId> spread(const GrowingGraph& graph);

    void ignite(Turn turn, VertexId v);
    void record_pass(Turn turn);

    std::span<const VertexId> burn_log() const noexcept { return log_; }
    std::span<const VertexId> frontier() const noexcept { return std::span(log_).subspan(frontier_begin_); }
    std::span<const FireSource> sources() const noexcept { return sources_; }
    /// Adjacency entries scanned by spread so far.
    std::uint64_t spread_work() const noexcept { return work_; }

private:
    std::vector<std::uint8_t> burning_;
    std::vector<VertexId> log_;
    std::size_t frontier_begin_ = 0;
    EdgeId edge_mark_ = 0;
    std::vector<FireSource> sources_;
    std::vector<VertexId> scratch_;
    std::uint64_t work_ = 0;
};

struct BuilderMove {
    std::uint64_t count = 0;
    std::vector<Edge> edges;
};

/// Throws the matching engine error unless `move` is a legal answer to a
/// turn that requires `required_count` new vertices.
void validate_builder_move(const GrowingGraph& graph, const BuilderMove& move, std::uint64_t required_count);

struct TurnRecord {
    Turn turn = 0;
    std::uint64_t added = 0;
    std::uint64_t vertex_total = 0;
    std::uint64_t burning_total = 0;
    VertexId source = kPass;

    friend bool operator==(const TurnRecord&, const TurnRecord&) = default;
};

/// What a strategy may inspect: the full current position.
struct GameView {
    Turn turn = 0; // turn being played
    const GrowingGraph& graph;
    const BurnState& burn;
};

class Builder {
public:
    virtual ~Builder() = default;
    virtual BuilderMove move(const GameView& view, std::uint64_t count) = 0;
    virtual std::string name() const = 0;
    /// True if turns with no growth leave the strategy untouched.
    virtual bool skippable() const { return true; }
};

class Arsonist {
public:
    virtual ~Arsonist() = default;
    /// An unburned vertex, or kPass when every vertex burns.
    virtual VertexId choose(const GameView& view) = 0;
    virtual std::string name() const = 0;
    /// True if the strategy may go uncalled on turns where everything burns.
    virtual bool skippable() const { return true; }
};

struct GameOptions {
    /// Collapse runs of zero-growth turns while every vertex burns into one
    /// record. Densities are unchanged on those turns.
    bool fast_forward = false;
};

enum class Stage { BetweenTurns, AwaitBuilder, AwaitArsonist };

class Game {
public:
    Game(GrowthSchedule schedule, std::unique_ptr<Builder> builder, std::unique_ptr<Arsonist> arsonist,
         std::uint64_t seed, GameOptions options = {});

    // Sub-steps of one turn. begin_turn asks the schedule for f(n);
    // submit_builder_move validates, grows and spreads; submit_ignition
    // finishes the turn.
    std::uint64_t begin_turn();
    void submit_builder_move(const BuilderMove& move);
    const TurnRecord& submit_ignition(VertexId v);

    BuilderMove builder_move();
    VertexId arsonist_choice();

    /// Runs the three sub-steps with the configured strategies.
    const TurnRecord& play_turn();
    /// Plays until `turns` more turns are complete (a fast-forwarded record
    /// may cover several). Returns the series for the whole game.
    DensitySeries run(Turn turns);
    /// Plays until the last completed turn is >= target.
    void run_until(Turn target);

    Turn turn() const noexcept { return completed_; }
    Stage stage() const noexcept { return stage_; }
    std::uint64_t pending_count() const noexcept { return pending_count_; }
    std::uint64_t seed() const noexcept { return seed_; }

    const GrowingGraph& graph() const noexcept { return graph_; }
    const BurnState& burn() const noexcept { return burn_; }
    const GrowthSchedule& schedule() const noexcept { return schedule_; }
    const std::vector<TurnRecord>& trace() const noexcept { return trace_; }
    DensitySeries series() const;

    Builder& builder() noexcept { return *builder_; }
    Arsonist& arsonist() noexcept { return *arsonist_; }

private:
    bool try_fast_forward(Turn limit);

    GrowingGraph graph_;
    BurnState burn_;
    GrowthSchedule schedule_;
    std::unique_ptr<Builder> builder_;
    std::unique_ptr<Arsonist> arsonist_;
    std::uint64_t seed_;
    GameOptions options_;
    std::vector<TurnRecord> trace_;

    Turn completed_ = 0;
    Stage stage_ = Stage::BetweenTurns;
    std::uint64_t pending_count_ = 0;
};

} // namespace pyreline
