#pragma once

#include "pyreline/graph.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace pyreline {

/// Sources x_1..x_k for a k-round burn. Source i (0-based) is lit in round
/// i+1, so by the end of round k its ball of radius k-1-i is burning. May
/// hold fewer than `rounds` sources when the graph has fewer vertices.
struct BurnSchedule {
    std::vector<VertexId> sources;
    std::uint32_t rounds = 0;

    std::uint32_t radius_of(std::size_t index) const noexcept
    {
        return rounds - 1 - static_cast<std::uint32_t>(index);
    }
};

struct ExactResult {
    std::uint32_t burning_number = 0;
    BurnSchedule schedule;
};

inline constexpr std::size_t kDefaultExactCap = 64;

/// ceil(sqrt(2n)) in exact integer arithmetic: the standing round budget.
std::uint64_t sqrt_2n_budget(std::uint64_t n);

/// b(G) by iterative deepening over the covering characterization.
ExactResult exact_burning_number(const GraphView& view, std::size_t cap = kDefaultExactCap);

/// Optimal schedule for the path 0-1-...-(n-1): ceil(sqrt(n)) rounds with
/// balls tiling the path left to right.
BurnSchedule path_schedule(std::uint64_t n);

/// Max-coverage greedy: for radii k-1 down to 0 pick the vertex whose ball
/// covers the most still-uncovered vertices (lowest id on ties).
std::optional<BurnSchedule> greedy_schedule(const GraphView& view, std::uint32_t budget);

/// Flags every vertex inside some ball B(x_i, k-1-i). Independent of how the
/// schedule was produced; used to verify feasibility.
std::vector<char> covered_by(const GraphView& view, const BurnSchedule& schedule);
bool is_feasible(const GraphView& view, const BurnSchedule& schedule);

// Target-restricted covering. Targets are the vertices that must end up
// inside a ball; balls are measured in the whole view.

/// Fewest rounds whose balls cover `targets`; nullopt if the view exceeds cap.
std::optional<BurnSchedule> exact_cover(const GraphView& view, std::span<const VertexId> targets,
                                        std::size_t cap = kDefaultExactCap);
std::optional<BurnSchedule> greedy_cover(const GraphView& view, std::span<const VertexId> targets,
                                         std::uint32_t budget);

/// Scalable cover for large snapshots. Works on a DFS spanning tree rooted at
/// vertex 0: repeatedly take the deepest uncovered target, centre a ball on
/// its ancestor at distance r and retire that ancestor's subtree together
/// with the r ancestors above it. Every retired target is within distance r
/// of the centre in the tree, hence in the graph.
class SubtreeCoverPlanner {
public:
    explicit SubtreeCoverPlanner(const GraphView& view);

    void set_targets(std::span<const VertexId> targets);
    std::optional<BurnSchedule> try_rounds(std::uint32_t rounds);
    /// Smallest k in [1, budget] for which try_rounds succeeds (binary search),
    /// or the first k above budget if none does.
    BurnSchedule minimal(std::uint32_t budget, bool& exceeded_budget);

private:
    bool covered(VertexId v) const;

    GraphView view_;
    std::vector<VertexId> parent_;
    std::vector<std::uint32_t> depth_;
    std::vector<std::uint32_t> tin_;
    std::vector<std::uint32_t> tout_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t run_ = 0;
    std::vector<VertexId> order_; // targets, deepest first
    std::map<std::uint32_t, std::uint32_t> covered_; // disjoint preorder intervals [tin, tout)
};

enum class PlannerKind { Exact, Greedy, SubtreeCover, Trivial };
std::string_view to_string(PlannerKind kind);

struct PlannerOptions {
    std::size_t exact_cap = kDefaultExactCap;
    std::size_t greedy_cap = 512;
};

struct Plan {
    BurnSchedule schedule;
    PlannerKind kind = PlannerKind::Trivial;
    std::uint32_t budget = 0;
    bool budget_violation = false;
};

/// Plans a burn of `targets` inside the view: exact search up to exact_cap
/// vertices, max-coverage greedy under sqrt_2n_budget up to greedy_cap, the
/// subtree planner beyond. The greedy tiers raise the budget until feasible
/// and flag the violation. An empty target list yields a 1-round plan.
Plan plan_cover(const GraphView& view, std::span<const VertexId> targets, const PlannerOptions& options = {});

} // namespace pyreline
