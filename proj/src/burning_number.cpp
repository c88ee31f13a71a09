#include "pyreline/burning_number.hpp"

#include "pyreline/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

namespace pyreline {

std::uint64_t sqrt_2n_budget(std::uint64_t n)
{
    const std::uint64_t target = 2 * n;
    auto k = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(target)));
    while (k * k < target)
        ++k;
    while (k > 0 && (k - 1) * (k - 1) >= target)
        --k;
    return k;
}

namespace {

std::uint64_t ceil_sqrt(std::uint64_t n)
{
    auto k = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (k * k < n)
        ++k;
    while (k > 0 && (k - 1) * (k - 1) >= n)
        --k;
    return k;
}

// Appends the lowest ids not already used until the schedule holds `rounds`
// sources (or the view runs out of vertices).
void fill_sources(BurnSchedule& schedule, VertexId vertex_count)
{
    if (schedule.sources.size() >= schedule.rounds)
        return;
    std::vector<VertexId> used = schedule.sources;
    std::sort(used.begin(), used.end());
    for (VertexId v = 0; v < vertex_count && schedule.sources.size() < schedule.rounds; ++v) {
        if (!std::binary_search(used.begin(), used.end(), v))
            schedule.sources.push_back(v);
    }
}

// Depth-first search over ball assignments for the covering formulation:
// targets T are covered by k balls of distinct radii k-1..0 with distinct
// centres. Each node branches on the uncovered target with the fewest
// candidate centres; candidates are tried in order of new coverage.
class CoverSearch {
public:
    CoverSearch(const GraphView& view, std::span<const VertexId> targets)
        : n_(view.vertex_count()), words_((n_ + 63) / 64)
    {
        dist_.resize(static_cast<std::size_t>(n_) * n_);
        std::vector<std::uint32_t> row;
        for (VertexId v = 0; v < n_; ++v) {
            bfs_fill(view, std::span(&v, 1), row);
            std::copy(row.begin(), row.end(), dist_.begin() + static_cast<std::ptrdiff_t>(v) * n_);
        }
        target_.assign(words_, 0);
        for (VertexId t : targets)
            target_[t / 64] |= std::uint64_t{1} << (t % 64);
        target_count_ = popcount(target_.data());

        // ball_[r][v] = targets within distance r of v; reach_[r][v] = all vertices within r.
        ball_.assign(static_cast<std::size_t>(n_) * n_ * words_, 0);
        reach_.assign(static_cast<std::size_t>(n_) * n_, 0);
        max_ball_.assign(n_, 0);
        for (std::uint32_t r = 0; r < n_; ++r) {
            for (VertexId v = 0; v < n_; ++v) {
                std::uint64_t* b = ball(r, v);
                std::uint32_t reach = 0;
                for (VertexId w = 0; w < n_; ++w) {
                    if (distance(v, w) <= r) {
                        ++reach;
                        if (is_target(w))
                            b[w / 64] |= std::uint64_t{1} << (w % 64);
                    }
                }
                reach_[static_cast<std::size_t>(r) * n_ + v] = reach;
                max_ball_[r] = std::max(max_ball_[r], popcount(b));
            }
        }
    }

    std::size_t target_count() const { return target_count_; }

    std::optional<BurnSchedule> solve(std::uint32_t k)
    {
        if (k == 0 || k > n_)
            return std::nullopt;
        k_ = k;
        used_radius_.assign(k, 0);
        used_center_.assign(n_, 0);
        assignment_.assign(k, kNoVertex);
        covered_.assign(static_cast<std::size_t>(k + 1) * words_, 0);
        if (!search(0))
            return std::nullopt;
        BurnSchedule schedule;
        schedule.rounds = k;
        // Unassigned slots are filled afterwards; keep slot order meanwhile.
        std::vector<VertexId> by_slot(k, kNoVertex);
        for (std::uint32_t r = 0; r < k; ++r)
            by_slot[k - 1 - r] = assignment_[r];
        std::vector<VertexId> used;
        for (VertexId v : by_slot)
            if (v != kNoVertex)
                used.push_back(v);
        std::sort(used.begin(), used.end());
        VertexId next = 0;
        for (VertexId& v : by_slot) {
            if (v != kNoVertex)
                continue;
            while (std::binary_search(used.begin(), used.end(), next))
                ++next;
            v = next++;
        }
        schedule.sources = std::move(by_slot);
        return schedule;
    }

private:
    std::uint32_t distance(VertexId a, VertexId b) const { return dist_[static_cast<std::size_t>(a) * n_ + b]; }
    std::uint64_t* ball(std::uint32_t r, VertexId v)
    {
        return ball_.data() + (static_cast<std::size_t>(r) * n_ + v) * words_;
    }
    bool is_target(VertexId v) const { return (target_[v / 64] >> (v % 64)) & 1U; }
    std::uint32_t popcount(const std::uint64_t* bits) const
    {
        std::uint32_t c = 0;
        for (std::size_t i = 0; i < words_; ++i)
            c += static_cast<std::uint32_t>(std::popcount(bits[i]));
        return c;
    }
    std::uint32_t gain(const std::uint64_t* b, const std::uint64_t* covered) const
    {
        std::uint32_t c = 0;
        for (std::size_t i = 0; i < words_; ++i)
            c += static_cast<std::uint32_t>(std::popcount(b[i] & ~covered[i]));
        return c;
    }

    bool search(std::uint32_t depth)
    {
        const std::uint64_t* covered = covered_.data() + static_cast<std::size_t>(depth) * words_;
        std::uint32_t uncovered = 0;
        for (std::size_t i = 0; i < words_; ++i)
            uncovered += static_cast<std::uint32_t>(std::popcount(target_[i] & ~covered[i]));
        if (uncovered == 0)
            return true;

        std::uint64_t capacity = 0;
        std::uint32_t largest = 0;
        bool any = false;
        for (std::uint32_t r = 0; r < k_; ++r) {
            if (!used_radius_[r]) {
                capacity += max_ball_[r];
                largest = r;
                any = true;
            }
        }
        if (!any || capacity < uncovered)
            return false;

        VertexId pick = kNoVertex;
        std::uint32_t fewest = kUnreached;
        for (VertexId v = 0; v < n_; ++v) {
            if (!is_target(v) || ((covered[v / 64] >> (v % 64)) & 1U))
                continue;
            const std::uint32_t options = reach_[static_cast<std::size_t>(largest) * n_ + v];
            if (options < fewest) {
                fewest = options;
                pick = v;
            }
        }

        struct Candidate {
            std::uint32_t gain;
            std::uint32_t radius;
            VertexId center;
        };
        std::vector<Candidate> candidates;
        for (std::uint32_t r = k_; r-- > 0;) {
            if (used_radius_[r])
                continue;
            for (VertexId c = 0; c < n_; ++c) {
                if (used_center_[c] || distance(c, pick) > r)
                    continue;
                candidates.push_back({gain(ball(r, c), covered), r, c});
            }
        }
        std::stable_sort(candidates.begin(), candidates.end(),
                         [](const Candidate& a, const Candidate& b) { return a.gain > b.gain; });

        std::uint64_t* next = covered_.data() + static_cast<std::size_t>(depth + 1) * words_;
        for (const Candidate& cand : candidates) {
            const std::uint64_t* b = ball(cand.radius, cand.center);
            for (std::size_t i = 0; i < words_; ++i)
                next[i] = covered[i] | b[i];
            used_radius_[cand.radius] = 1;
            used_center_[cand.center] = 1;
            assignment_[cand.radius] = cand.center;
            if (search(depth + 1))
                return true;
            used_radius_[cand.radius] = 0;
            used_center_[cand.center] = 0;
            assignment_[cand.radius] = kNoVertex;
        }
        return false;
    }

    VertexId n_;
    std::size_t words_;
    std::vector<std::uint32_t> dist_;
    std::vector<std::uint64_t> target_;
    std::size_t target_count_ = 0;
    std::vector<std::uint64_t> ball_;
    std::vector<std::uint32_t> reach_;
    std::vector<std::uint32_t> max_ball_;

    std::uint32_t k_ = 0;
    std::vector<char> used_radius_;
    std::vector<char> used_center_;
    std::vector<VertexId> assignment_; // indexed by radius
    std::vector<std::uint64_t> covered_; // one row per depth
};

} // namespace

std::optional<BurnSchedule> exact_cover(const GraphView& view, std::span<const VertexId> targets, std::size_t cap)
{
    const VertexId n = view.vertex_count();
    if (n > cap)
        return std::nullopt;
    for (VertexId t : targets)
        if (t >= n)
            fail(ErrorCode::UnknownVertex, "cover target " + std::to_string(t));
    CoverSearch search(view, targets);
    if (search.target_count() == 0)
        return BurnSchedule{{}, 0};
    for (std::uint32_t k = 1; k <= n; ++k) {
        if (auto s = search.solve(k))
            return s;
    }
    return std::nullopt; // unreachable: k = n always succeeds
}

ExactResult exact_burning_number(const GraphView& view, std::size_t cap)
{
    const VertexId n = view.vertex_count();
    if (n == 0)
        fail(ErrorCode::EmptyGraph, "burning number of the empty graph is undefined");
    if (n > cap)
        fail(ErrorCode::GraphTooLarge,
             std::to_string(n) + " vertices exceeds the exact-size cap of " + std::to_string(cap));
    if (!is_connected(view))
        fail(ErrorCode::GraphDisconnected, "exact burning number needs a connected graph");
    std::vector<VertexId> all(n);
    std::iota(all.begin(), all.end(), VertexId{0});
    auto schedule = exact_cover(view, all, cap);
    return {schedule->rounds, std::move(*schedule)};
}

BurnSchedule path_schedule(std::uint64_t n)
{
    BurnSchedule schedule;
    if (n == 0)
        return schedule;
    const auto k = static_cast<std::uint32_t>(ceil_sqrt(n));
    schedule.rounds = k;
    std::uint64_t pos = 0;
    for (std::uint32_t i = 0; i < k && pos < n; ++i) {
        const std::uint64_t r = k - 1 - i;
        const std::uint64_t len = std::min<std::uint64_t>(2 * r + 1, n - pos);
        schedule.sources.push_back(static_cast<VertexId>(pos + std::min(r, len - 1)));
        pos += len;
    }
    fill_sources(schedule, static_cast<VertexId>(n));
    return schedule;
}

std::optional<BurnSchedule> greedy_cover(const GraphView& view, std::span<const VertexId> targets, std::uint32_t budget)
{
    const VertexId n = view.vertex_count();
    std::vector<char> pending(n, 0);
    std::size_t uncovered = 0;
    for (VertexId t : targets) {
        if (t >= n)
            fail(ErrorCode::UnknownVertex, "cover target " + std::to_string(t));
        if (!pending[t]) {
            pending[t] = 1;
            ++uncovered;
        }
    }
    std::vector<char> used(n, 0);
    std::vector<std::uint32_t> seen(n, 0);
    std::uint32_t stamp = 0;
    std::vector<std::pair<VertexId, std::uint32_t>> queue;

    // Visits B(c, r), calling f on each vertex once.
    auto visit_ball = [&](VertexId c, std::uint32_t r, auto&& f) {
        ++stamp;
        queue.clear();
        queue.emplace_back(c, 0);
        seen[c] = stamp;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const auto [v, d] = queue[head];
            f(v);
            if (d == r)
                continue;
            view.for_each_neighbor(v, [&](VertexId w) {
                if (seen[w] != stamp) {
                    seen[w] = stamp;
                    queue.emplace_back(w, d + 1);
                }
            });
        }
    };

    BurnSchedule schedule;
    schedule.rounds = budget;
    for (std::uint32_t i = 0; i < budget; ++i) {
        const std::uint32_t r = budget - 1 - i;
        VertexId best = kNoVertex;
        std::size_t best_gain = 0;
        for (VertexId c = 0; c < n; ++c) {
            if (used[c])
                continue;
            if (uncovered == 0) {
                best = c;
                break;
            }
            std::size_t g = 0;
            visit_ball(c, r, [&](VertexId v) { g += pending[v] ? 1 : 0; });
            if (best == kNoVertex || g > best_gain) {
                best = c;
                best_gain = g;
            }
        }
        if (best == kNoVertex)
            break;
        used[best] = 1;
        schedule.sources.push_back(best);
        if (uncovered > 0) {
            visit_ball(best, r, [&](VertexId v) {
                if (pending[v]) {
                    pending[v] = 0;
                    --uncovered;
                }
            });
        }
    }
    if (uncovered > 0)
        return std::nullopt;
    return schedule;
}

std::optional<BurnSchedule> greedy_schedule(const GraphView& view, std::uint32_t budget)
{
    std::vector<VertexId> all(view.vertex_count());
    std::iota(all.begin(), all.end(), VertexId{0});
    return greedy_cover(view, all, budget);
}

std::vector<char> covered_by(const GraphView& view, const BurnSchedule& schedule)
{
    const VertexId n = view.vertex_count();
    // remaining[v] = largest leftover radius reaching v, or -1.
    std::vector<std::int64_t> remaining(n, -1);
    if (schedule.rounds == 0 || n == 0)
        return std::vector<char>(n, 0);
    std::vector<std::vector<VertexId>> buckets(schedule.rounds);
    for (std::size_t i = 0; i < schedule.sources.size() && i < schedule.rounds; ++i) {
        const VertexId s = schedule.sources[i];
        if (s >= n)
            fail(ErrorCode::UnknownVertex, "schedule source " + std::to_string(s));
        const std::uint32_t r = schedule.radius_of(i);
        if (remaining[s] < r) {
            remaining[s] = r;
            buckets[r].push_back(s);
        }
    }
    for (std::uint32_t r = schedule.rounds; r-- > 0;) {
        for (std::size_t idx = 0; idx < buckets[r].size(); ++idx) {
            const VertexId v = buckets[r][idx];
            if (remaining[v] != r || r == 0)
                continue;
            view.for_each_neighbor(v, [&](VertexId w) {
                if (remaining[w] < static_cast<std::int64_t>(r) - 1) {
                    remaining[w] = r - 1;
                    buckets[r - 1].push_back(w);
                }
            });
        }
        buckets[r].clear();
        buckets[r].shrink_to_fit();
    }
    std::vector<char> covered(n);
    for (VertexId v = 0; v < n; ++v)
        covered[v] = remaining[v] >= 0 ? 1 : 0;
    return covered;
}

bool is_feasible(const GraphView& view, const BurnSchedule& schedule)
{
    const auto covered = covered_by(view, schedule);
    return std::all_of(covered.begin(), covered.end(), [](char c) { return c != 0; });
}

SubtreeCoverPlanner::SubtreeCoverPlanner(const GraphView& view) : view_(view)
{
    const VertexId n = view.vertex_count();
    parent_.assign(n, kNoVertex);
    depth_.assign(n, kUnreached);
    tin_.assign(n, 0);
    tout_.assign(n, 1); // subtree sizes until converted
    stamp_.assign(n, 0);

    std::vector<VertexId> preorder;
    preorder.reserve(n);
    std::vector<VertexId> stack;
    for (VertexId root = 0; root < n; ++root) {
        if (depth_[root] != kUnreached)
            continue;
        depth_[root] = 0;
        stack.push_back(root);
        while (!stack.empty()) {
            const VertexId v = stack.back();
            stack.pop_back();
            tin_[v] = static_cast<std::uint32_t>(preorder.size());
            preorder.push_back(v);
            view.for_each_neighbor(v, [&](VertexId w) {
                if (depth_[w] == kUnreached) {
                    depth_[w] = depth_[v] + 1;
                    parent_[w] = v;
                    stack.push_back(w);
                }
            });
        }
    }
    // Marking on push keeps every push-subtree contiguous in pop order.
    for (auto it = preorder.rbegin(); it != preorder.rend(); ++it) {
        const VertexId v = *it;
        if (parent_[v] != kNoVertex)
            tout_[parent_[v]] += tout_[v];
        tout_[v] += tin_[v];
    }
}

void SubtreeCoverPlanner::set_targets(std::span<const VertexId> targets)
{
    order_.assign(targets.begin(), targets.end());
    std::sort(order_.begin(), order_.end(), [&](VertexId a, VertexId b) {
        return depth_[a] != depth_[b] ? depth_[a] > depth_[b] : a < b;
    });
    order_.erase(std::unique(order_.begin(), order_.end()), order_.end());
}

bool SubtreeCoverPlanner::covered(VertexId v) const
{
    if (stamp_[v] == run_)
        return true;
    const std::uint32_t pos = tin_[v];
    auto it = covered_.upper_bound(pos);
    if (it == covered_.begin())
        return false;
    --it;
    return pos < it->second;
}

std::optional<BurnSchedule> SubtreeCoverPlanner::try_rounds(std::uint32_t rounds)
{
    if (++run_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        run_ = 1;
    }
    covered_.clear();
    BurnSchedule schedule;
    schedule.rounds = rounds;
    std::size_t next = 0;
    for (std::uint32_t i = 0; i < rounds; ++i) {
        const std::uint32_t r = rounds - 1 - i;
        while (next < order_.size() && covered(order_[next]))
            ++next;
        if (next == order_.size())
            break;
        VertexId center = order_[next];
        for (std::uint32_t s = 0; s < r && parent_[center] != kNoVertex; ++s)
            center = parent_[center];
        schedule.sources.push_back(center);

        const std::uint32_t lo = tin_[center];
        const std::uint32_t hi = tout_[center];
        for (auto it = covered_.lower_bound(lo); it != covered_.end() && it->first < hi;)
            it = covered_.erase(it);
        covered_.emplace(lo, hi);
        VertexId up = center;
        for (std::uint32_t s = 0; s < r && parent_[up] != kNoVertex; ++s) {
            up = parent_[up];
            stamp_[up] = run_;
        }
    }
    while (next < order_.size() && covered(order_[next]))
        ++next;
    if (next < order_.size())
        return std::nullopt;
    fill_sources(schedule, view_.vertex_count());
    return schedule;
}

BurnSchedule SubtreeCoverPlanner::minimal(std::uint32_t budget, bool& exceeded_budget)
{
    exceeded_budget = false;
    if (order_.empty())
        return BurnSchedule{{}, 1};
    budget = std::max<std::uint32_t>(budget, 1);
    auto best = try_rounds(budget);
    if (!best) {
        exceeded_budget = true;
        std::uint32_t lo = budget + 1;
        std::uint32_t hi = budget * 2;
        while (!(best = try_rounds(hi))) {
            lo = hi + 1;
            hi *= 2;
        }
        while (lo < hi) {
            const std::uint32_t mid = lo + (hi - lo) / 2;
            if (auto s = try_rounds(mid)) {
                best = std::move(s);
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        return *best;
    }
    std::uint32_t lo = 1;
    std::uint32_t hi = budget;
    while (lo < hi) {
        const std::uint32_t mid = lo + (hi - lo) / 2;
        if (auto s = try_rounds(mid)) {
            best = std::move(s);
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return *best;
}

std::string_view to_string(PlannerKind kind)
{
    switch (kind) {
    case PlannerKind::Exact: return "exact";
    case PlannerKind::Greedy: return "greedy";
    case PlannerKind::SubtreeCover: return "subtree";
    case PlannerKind::Trivial: return "trivial";
    }
    return "trivial";
}

Plan plan_cover(const GraphView& view, std::span<const VertexId> targets, const PlannerOptions& options)
{
    const VertexId n = view.vertex_count();
    Plan plan;
    plan.budget = static_cast<std::uint32_t>(sqrt_2n_budget(std::max<VertexId>(n, 1)));
    if (targets.empty()) {
        plan.schedule = BurnSchedule{{}, 1};
        plan.kind = PlannerKind::Trivial;
        return plan;
    }
    if (n <= options.exact_cap) {
        plan.kind = PlannerKind::Exact;
        plan.schedule = *exact_cover(view, targets, options.exact_cap);
        plan.budget_violation = plan.schedule.rounds > plan.budget;
        return plan;
    }
    if (n <= options.greedy_cap) {
        plan.kind = PlannerKind::Greedy;
        for (std::uint32_t k = plan.budget;; ++k) {
            if (auto s = greedy_cover(view, targets, k)) {
                plan.schedule = std::move(*s);
                break;
            }
            plan.budget_violation = true;
        }
        return plan;
    }
    plan.kind = PlannerKind::SubtreeCover;
    SubtreeCoverPlanner planner(view);
    planner.set_targets(targets);
    plan.schedule = planner.minimal(plan.budget, plan.budget_violation);
    return plan;
}

} // namespace pyreline
