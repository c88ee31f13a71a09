#include "doctest.h"

#include "pyreline/burning_number.hpp"
#include "pyreline/errors.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace pyreline;

namespace {

ErrorCode code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::IoError;
}

std::uint32_t ceil_sqrt(std::uint64_t n)
{
    std::uint32_t r = 0;
    while (static_cast<std::uint64_t>(r) * r < n)
        ++r;
    return r;
}

// Ball expansion with the oracle's own distances.
bool covers(const oracle::Adjacency& adj, const BurnSchedule& s, const std::vector<VertexId>& targets)
{
    std::vector<char> hit(adj.size(), 0);
    for (std::size_t i = 0; i < s.sources.size(); ++i) {
        const auto d = oracle::bfs(adj, s.sources[i]);
        for (VertexId v = 0; v < adj.size(); ++v)
            if (d[v] <= static_cast<int>(s.rounds - 1 - i))
                hit[v] = 1;
    }
    for (VertexId t : targets)
        if (!hit[t])
            return false;
    return true;
}

std::vector<VertexId> all_vertices(std::size_t n)
{
    std::vector<VertexId> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

bool distinct(const std::vector<VertexId>& s)
{
    std::vector<VertexId> c = s;
    std::sort(c.begin(), c.end());
    return std::adjacent_find(c.begin(), c.end()) == c.end();
}

// Fewest rounds covering just `targets`, by unpruned tuple enumeration.
std::uint32_t brute_cover(const oracle::Adjacency& adj, const std::vector<VertexId>& targets)
{
    const auto d = oracle::all_pairs(adj);
    const std::size_t n = adj.size();
    for (std::uint32_t k = 1;; ++k) {
        std::vector<VertexId> pick(k, 0);
        for (;;) {
            bool ok = true;
            for (VertexId t : targets) {
                bool hit = false;
                for (std::uint32_t i = 0; i < k && !hit; ++i)
                    hit = d[pick[i]][t] <= static_cast<int>(k - 1 - i);
                ok = ok && hit;
            }
            if (ok)
                return k;
            std::uint32_t i = 0;
            while (i < k && ++pick[i] == n)
                pick[i++] = 0;
            if (i == k)
                break;
        }
    }
}

} // namespace

TEST_CASE("small exact values")
{
    CHECK(exact_burning_number(GraphView(oracle::one_shot(1, {}))).burning_number == 1);
    CHECK(exact_burning_number(GraphView(oracle::one_shot(9, oracle::path_edges(9)))).burning_number == 3);
    CHECK(exact_burning_number(GraphView(oracle::one_shot(10, oracle::path_edges(10)))).burning_number == 4);
}

TEST_CASE("solver errors")
{
    CHECK(code_of([] { exact_burning_number(GraphView(GrowingGraph{})); }) == ErrorCode::EmptyGraph);
    const GrowingGraph big = oracle::one_shot(65, oracle::path_edges(65));
    CHECK(code_of([&] { exact_burning_number(GraphView(big)); }) == ErrorCode::GraphTooLarge);
    CHECK(exact_burning_number(GraphView(big), 65).burning_number == 9);
    const GrowingGraph split = oracle::one_shot(3, {{0, 1}});
    CHECK(code_of([&] { exact_burning_number(GraphView(split)); }) == ErrorCode::GraphDisconnected);
}

TEST_CASE("exact solver agrees with exhaustive enumeration on random trees")
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 20)(rng);
        const auto edges = oracle::random_tree(n, rng);
        const auto adj = oracle::adjacency(n, edges);
        const ExactResult r = exact_burning_number(GraphView(oracle::one_shot(n, edges)));
        REQUIRE(r.burning_number == oracle::brute_burning_number(adj));
        CHECK(r.schedule.rounds == r.burning_number);
        CHECK(covers(adj, r.schedule, all_vertices(n)));
        CHECK(distinct(r.schedule.sources));
        CHECK(oracle::process_burns_all(adj, r.schedule.sources, r.schedule.rounds));
        CHECK(r.burning_number <= sqrt_2n_budget(n));
    }
}

TEST_CASE("exact solver on graphs with cycles")
{
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 13)(rng);
        auto edges = oracle::random_tree(n, rng);
        for (int extra = 0; extra < 4; ++extra) {
            const VertexId u = rng() % n, v = rng() % n;
            if (u != v && std::find_if(edges.begin(), edges.end(), [&](const Edge& e) {
                              return (e.u == u && e.v == v) || (e.u == v && e.v == u);
                          }) == edges.end())
                edges.push_back({u, v});
        }
        const auto adj = oracle::adjacency(n, edges);
        const ExactResult r = exact_burning_number(GraphView(oracle::one_shot(n, edges)));
        CHECK(r.burning_number == oracle::brute_burning_number(adj));
        CHECK(covers(adj, r.schedule, all_vertices(n)));
    }
}

TEST_CASE("relabeling leaves the burning number unchanged")
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 30)(rng);
        const auto edges = oracle::random_tree(n, rng);
        std::vector<VertexId> perm = all_vertices(n);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<Edge> relabeled;
        for (const Edge& e : edges)
            relabeled.push_back({perm[e.u], perm[e.v]});
        CHECK(exact_burning_number(GraphView(oracle::one_shot(n, edges))).burning_number ==
              exact_burning_number(GraphView(oracle::one_shot(n, relabeled))).burning_number);
    }
}

TEST_CASE("path schedules")
{
    const BurnSchedule one = path_schedule(1);
    CHECK(one.rounds == 1);
    CHECK(one.sources == std::vector<VertexId>{0});
    CHECK(path_schedule(4).rounds == 2);

    const BurnSchedule nine = path_schedule(9);
    REQUIRE(nine.rounds == 3);
    const auto adj9 = oracle::adjacency(9, oracle::path_edges(9));
    std::vector<std::size_t> lengths;
    for (std::size_t i = 0; i < nine.sources.size(); ++i) {
        const auto d = oracle::bfs(adj9, nine.sources[i]);
        lengths.push_back(static_cast<std::size_t>(
            std::count_if(d.begin(), d.end(), [&](int x) { return x <= static_cast<int>(nine.rounds - 1 - i); })));
    }
    CHECK(lengths == std::vector<std::size_t>{5, 3, 1});
    CHECK(covers(adj9, nine, all_vertices(9)));

    for (std::uint64_t n = 1; n <= 10000; ++n)
        REQUIRE(path_schedule(n).rounds == ceil_sqrt(n));
    for (std::uint64_t n = 1; n <= 200; ++n) {
        const auto adj = oracle::adjacency(n, oracle::path_edges(n));
        REQUIRE(covers(adj, path_schedule(n), all_vertices(n)));
    }
}

TEST_CASE("greedy schedules")
{
    const GrowingGraph star = oracle::one_shot(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    const auto s = greedy_schedule(GraphView(star), 2);
    REQUIRE(s.has_value());
    CHECK(s->sources.front() == 0);
    CHECK(is_feasible(GraphView(star), *s));

    const GrowingGraph p9 = oracle::one_shot(9, oracle::path_edges(9));
    CHECK_FALSE(greedy_schedule(GraphView(p9), 2).has_value());
    const auto p = greedy_schedule(GraphView(p9), 3);
    REQUIRE(p.has_value());
    CHECK(covers(oracle::adjacency(9, oracle::path_edges(9)), *p, all_vertices(9)));
}

TEST_CASE("round budget")
{
    CHECK(sqrt_2n_budget(50) == 10);
    CHECK(sqrt_2n_budget(2) == 2);
    CHECK(sqrt_2n_budget(1) == 2);
    for (std::uint64_t n = 1; n <= 5000; ++n)
        REQUIRE(sqrt_2n_budget(n) == ceil_sqrt(2 * n));
    CHECK(sqrt_2n_budget(2'000'000'000'000ULL) == 2'000'000);
}

TEST_CASE("covering only some targets")
{
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 11)(rng);
        const auto edges = oracle::random_tree(n, rng);
        const auto adj = oracle::adjacency(n, edges);
        const GrowingGraph g = oracle::one_shot(n, edges);
        std::vector<VertexId> targets;
        for (VertexId v = 0; v < n; ++v)
            if (rng() % 2)
                targets.push_back(v);
        if (targets.empty())
            targets.push_back(0);
        const auto exact = exact_cover(GraphView(g), targets);
        REQUIRE(exact.has_value());
        CHECK(exact->rounds == brute_cover(adj, targets));
        CHECK(covers(adj, *exact, targets));
        const auto greedy = greedy_cover(GraphView(g), targets, exact->rounds + 2);
        if (greedy)
            CHECK(covers(adj, *greedy, targets));
    }
}

TEST_CASE("planner tiers cover their targets")
{
    std::mt19937_64 rng(4);
    for (std::size_t n : {10, 40, 300, 3000}) {
        const auto edges = oracle::random_tree(n, rng);
        const auto adj = oracle::adjacency(n, edges);
        const GrowingGraph g = oracle::one_shot(n, edges);
        std::vector<VertexId> targets;
        for (VertexId v = 0; v < n; ++v)
            if (rng() % 3)
                targets.push_back(v);
        PlannerOptions options;
        options.exact_cap = 16;
        options.greedy_cap = 512;
        const Plan plan = plan_cover(GraphView(g), targets, options);
        CHECK(plan.kind == (n <= 16 ? PlannerKind::Exact : n <= 512 ? PlannerKind::Greedy : PlannerKind::SubtreeCover));
        CHECK(plan.schedule.rounds >= 1);
        CHECK(covers(adj, plan.schedule, targets));
        if (!plan.budget_violation)
            CHECK(plan.schedule.rounds <= sqrt_2n_budget(n));
    }
    const GrowingGraph p = oracle::one_shot(3, oracle::path_edges(3));
    CHECK(plan_cover(GraphView(p), {}).schedule.rounds == 1);
}

TEST_CASE("subtree planner on long paths stays within the budget")
{
    for (std::size_t n : {1000, 5000, 20000}) {
        const GrowingGraph g = oracle::one_shot(n, oracle::path_edges(n));
        const std::vector<VertexId> targets = all_vertices(n);
        SubtreeCoverPlanner planner{GraphView(g)};
        planner.set_targets(targets);
        bool exceeded = false;
        const BurnSchedule s = planner.minimal(static_cast<std::uint32_t>(sqrt_2n_budget(n)), exceeded);
        CHECK_FALSE(exceeded);
        CHECK(s.rounds <= sqrt_2n_budget(n));
        CHECK(is_feasible(GraphView(g), s));
    }
}
