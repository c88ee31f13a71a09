#pragma once

#include "pyreline/burning_number.hpp"
#include "pyreline/engine.hpp"

#include <cstdint>
#include <limits>
#include <memory>
#include <queue>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace pyreline {

/// splitmix64 of (seed, stream); gives each strategy its own RNG stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// ---- Builders ----

/// Grows a single path by appending every new vertex at the same end.
class PathBuilder final : public Builder {
public:
    BuilderMove move(const GameView& view, std::uint64_t count) override;
    std::string name() const override { return "path"; }
    VertexId endpoint() const noexcept { return endpoint_; }

private:
    VertexId endpoint_ = kNoVertex;
};

/// Attaches every new vertex to hub 0.
class StarBuilder final : public Builder {
public:
    BuilderMove move(const GameView& view, std::uint64_t count) override;
    std::string name() const override { return "star"; }
};

/// Uniform random recursive tree: each new vertex picks a parent uniformly
/// among all vertices that exist when it arrives.
class RandomRecursiveBuilder final : public Builder {
public:
    explicit RandomRecursiveBuilder(std::uint64_t seed) : rng_(seed) {}
    BuilderMove move(const GameView& view, std::uint64_t count) override;
    std::string name() const override { return "rrt"; }

private:
    std::mt19937_64 rng_;
};

/// Placeholder for a move supplied from outside (the service).
class HumanBuilder final : public Builder {
public:
    BuilderMove move(const GameView& view, std::uint64_t count) override;
    std::string name() const override { return "human"; }
};

// ---- Arsonists ----

/// Ignites an unburned vertex farthest from the burning set (lowest id on
/// ties). Keeps T(v) = turn + dist(v, B) for unburned v: spreading leaves it
/// unchanged, so only ignitions and new edges need relaxing.
class GreedyArsonist final : public Arsonist {
public:
    VertexId choose(const GameView& view) override;
    std::string name() const override { return "greedy"; }

private:
    using Key = std::int64_t;
    static constexpr Key kInfinite = std::numeric_limits<Key>::max() / 2;
    struct Entry {
        Key key;
        VertexId v;
        bool operator<(const Entry& o) const { return key != o.key ? key < o.key : v > o.v; }
    };

    void push(VertexId v);
    void rebuild_heap(const GameView& view);

    std::vector<Key> eta_;
    std::priority_queue<Entry> heap_;
    std::size_t seen_log_ = 0;
    EdgeId seen_edges_ = 0;
    std::vector<std::pair<Key, VertexId>> seeds_;
    std::vector<std::pair<Key, VertexId>> fifo_;
};

/// Uniform over unburned vertices.
class RandomArsonist final : public Arsonist {
public:
    explicit RandomArsonist(std::uint64_t seed) : rng_(seed) {}
    VertexId choose(const GameView& view) override;
    std::string name() const override { return "random"; }

private:
    std::mt19937_64 rng_;
    std::vector<VertexId> unburned_;
    std::vector<std::uint32_t> slot_;
    std::size_t seen_log_ = 0;
    VertexId seen_vertices_ = 0;
};

struct PhaseOptions {
    Turn warmup = 1;
    PlannerOptions planner;
};

struct PhaseRecord {
    std::uint32_t k = 0;
    Turn start = 0;                    // N_k
    std::uint64_t snapshot_vertices = 0; // |V_{N_k}|
    std::uint64_t targets = 0;         // snapshot vertices unburned when planned
    std::uint32_t rounds = 0;          // A_k
    PlannerKind planner = PlannerKind::Trivial;
    std::uint32_t budget = 0;
    bool budget_violation = false;
    Turn end = 0;                      // N_{k+1}
    bool invariant_ok = false;         // every snapshot vertex burning at N_{k+1}
};

/// Phase strategy: after a warmup of lowest-id ignitions ending at N_1, take
/// the graph at N_k as a frozen target, plan a cover of its unburned vertices
/// in A_k rounds and play it on turns N_k+1 .. N_k+A_k = N_{k+1}. A planned
/// source that already burns is replaced by the lowest unburned vertex of the
/// snapshot, then of the whole graph.
class PhaseArsonist final : public Arsonist {
public:
    explicit PhaseArsonist(PhaseOptions options = {});
    VertexId choose(const GameView& view) override;
    std::string name() const override { return "phase"; }
    bool skippable() const override { return false; }

    /// Completed phases.
    const std::vector<PhaseRecord>& phases() const noexcept { return phases_; }

private:
    VertexId lowest_unburned(const GameView& view);
    void start_phase(Turn turn, VertexId snapshot);
    void plan(const GameView& view);

    PhaseOptions options_;
    VertexId low_ = 0;
    bool in_phase_ = false;
    bool planned_ = false;
    PhaseRecord current_;
    BurnSchedule schedule_;
    std::uint32_t cursor_ = 0;
    std::vector<PhaseRecord> phases_;
};

class HumanArsonist final : public Arsonist {
public:
    VertexId choose(const GameView& view) override;
    std::string name() const override { return "human"; }
};

// ---- Registry ----

bool is_builder_name(std::string_view name);
bool is_arsonist_name(std::string_view name);
std::unique_ptr<Builder> make_builder(std::string_view name, std::uint64_t game_seed);
std::unique_ptr<Arsonist> make_arsonist(std::string_view name, std::uint64_t game_seed,
                                        const PhaseOptions& phase = {});

} // namespace pyreline
