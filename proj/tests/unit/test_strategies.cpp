#include "doctest.h"

#include "pyreline/engine.hpp"
#include "pyreline/errors.hpp"
#include "pyreline/strategies.hpp"
#include "support/oracles.hpp"

#include <array>
#include <random>

using namespace pyreline;

namespace {

GrowingGraph grow_path(std::uint64_t n)
{
    GrowingGraph g;
    g.add_generation(1, n, oracle::path_edges(n));
    return g;
}

// Pearson statistic for counts against a uniform expectation.
double chi_square(const std::vector<std::uint64_t>& counts)
{
    std::uint64_t total = 0;
    for (auto c : counts)
        total += c;
    const double expect = static_cast<double>(total) / static_cast<double>(counts.size());
    double x = 0;
    for (auto c : counts)
        x += (static_cast<double>(c) - expect) * (static_cast<double>(c) - expect) / expect;
    return x;
}

// 0.999 quantile of chi-square with 9 degrees of freedom.
constexpr double kChi9 = 27.88;

class CheckedGreedy final : public Arsonist {
public:
    VertexId choose(const GameView& view) override
    {
        const VertexId got = inner_.choose(view);
        const VertexId n = view.graph.vertex_count();
        std::vector<char> burning(n);
        for (VertexId v = 0; v < n; ++v)
            burning[v] = view.burn.is_burning(v) ? 1 : 0;
        const VertexId want = oracle::farthest_unburned(oracle::adjacency(n, oracle::edges_of(view.graph)), burning);
        ++calls;
        if (got != want)
            ++mismatches;
        return got;
    }
    std::string name() const override { return "checked"; }
    int calls = 0;
    int mismatches = 0;

private:
    GreedyArsonist inner_;
};

} // namespace

TEST_CASE("path builder extends from its endpoint")
{
    PathBuilder b;
    GrowingGraph g;
    BurnState burn;
    const BuilderMove first = b.move({1, g, burn}, 5);
    CHECK(first.edges == oracle::path_edges(5));
    g.add_generation(1, 5, first.edges);
    CHECK(b.endpoint() == 4);
    const BuilderMove next = b.move({2, g, burn}, 3);
    CHECK(next.edges == std::vector<Edge>{{4, 5}, {5, 6}, {6, 7}});
    g.add_generation(2, 3, next.edges);
    CHECK(b.endpoint() == 7);
    CHECK(b.move({3, g, burn}, 0).edges.empty());
    CHECK(b.endpoint() == 7);
}

TEST_CASE("path builder keeps a path: two leaves, interior degree two")
{
    Game game(GrowthSchedule::poly(1.0, 0.6), make_builder("path", 1), make_arsonist("greedy", 1), 1);
    for (int t = 0; t < 200; ++t) {
        game.play_turn();
        const GrowingGraph& g = game.graph();
        std::vector<int> deg(g.vertex_count(), 0);
        for (EdgeId e = 0; e < g.edge_count(); ++e) {
            ++deg[g.edge(e).u];
            ++deg[g.edge(e).v];
        }
        int ones = 0, twos = 0;
        for (int d : deg)
            (d == 1 ? ones : twos) += (d == 1 || d == 2) ? 1 : 0;
        REQUIRE(ones == (g.vertex_count() > 1 ? 2 : 0));
        REQUIRE(ones + twos == static_cast<int>(g.vertex_count() > 1 ? g.vertex_count() : 0));
    }
}

TEST_CASE("star builder hangs everything on vertex 0")
{
    StarBuilder b;
    GrowingGraph g;
    BurnState burn;
    const BuilderMove m = b.move({1, g, burn}, 4);
    CHECK(m.edges == std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}});
    g.add_generation(1, 4, m.edges);
    CHECK(b.move({2, g, burn}, 2).edges == std::vector<Edge>{{0, 4}, {0, 5}});
}

TEST_CASE("random recursive tree parents follow the seeded stream")
{
    RandomRecursiveBuilder b(12345);
    std::mt19937_64 ref(12345);
    GrowingGraph g;
    BurnState burn;
    std::vector<VertexId> parents;
    for (Turn t = 1; t <= 10; ++t) {
        const BuilderMove m = b.move({t, g, burn}, 2);
        const VertexId first = g.vertex_count();
        std::size_t i = 0;
        for (VertexId v = first; v < first + 2; ++v) {
            if (v == 0)
                continue;
            const VertexId want = std::uniform_int_distribution<VertexId>(0, v - 1)(ref);
            REQUIRE(i < m.edges.size());
            CHECK(m.edges[i] == Edge{want, v});
            parents.push_back(m.edges[i].u);
            ++i;
        }
        CHECK(i == m.edges.size());
        g.add_generation(t, 2, m.edges);
    }
    CHECK(parents.size() == 19);
    CHECK(parents[0] == 0);
    CHECK(is_connected(GraphView(g)));
}

TEST_CASE("random recursive tree parents are uniform")
{
    const GrowingGraph g = grow_path(10);
    BurnState burn;
    RandomRecursiveBuilder b(7);
    std::vector<std::uint64_t> counts(10, 0);
    for (int i = 0; i < 100000; ++i) {
        const BuilderMove m = b.move({2, g, burn}, 1);
        REQUIRE(m.edges.size() == 1);
        ++counts[m.edges[0].u];
    }
    CHECK(chi_square(counts) < kChi9);
}

TEST_CASE("random arsonist picks unburned vertices uniformly")
{
    const GrowingGraph g = grow_path(20);
    BurnState burn;
    burn.spread(g);
    // Burn the upper half so the pick ranges over 0..9.
    for (VertexId v = 10; v < 20; ++v)
        burn.ignite(1, v);
    RandomArsonist a(99);
    std::vector<std::uint64_t> counts(10, 0);
    for (int i = 0; i < 100000; ++i) {
        const VertexId v = a.choose({2, g, burn});
        REQUIRE(v < 10);
        ++counts[v];
    }
    CHECK(chi_square(counts) < kChi9);

    const GrowingGraph one = grow_path(1);
    BurnState all;
    all.spread(one);
    all.ignite(1, 0);
    RandomArsonist b(1);
    CHECK(b.choose({2, one, all}) == kPass);
}

TEST_CASE("greedy examples")
{
    const GrowingGraph p = grow_path(10);
    BurnState b;
    b.spread(p);
    b.ignite(1, 0);
    b.spread(p);
    REQUIRE(b.is_burning(1));
    GreedyArsonist a;
    CHECK(a.choose({2, p, b}) == 9);

    const GrowingGraph one = grow_path(1);
    BurnState all;
    all.spread(one);
    all.ignite(1, 0);
    GreedyArsonist c;
    CHECK(c.choose({2, one, all}) == kPass);

    // Vertex 2 is the centre; 0 and 4 tie at distance 2.
    const GrowingGraph five = grow_path(5);
    BurnState mid;
    mid.spread(five);
    mid.ignite(1, 2);
    GreedyArsonist d;
    CHECK(d.choose({2, five, mid}) == 0);

    GrowingGraph cold;
    cold.add_generation(1, 3, oracle::path_edges(3));
    BurnState none;
    none.spread(cold);
    GreedyArsonist e;
    CHECK(e.choose({1, cold, none}) == 0);
}

TEST_CASE("greedy agrees with a from-scratch search every turn")
{
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        std::mt19937_64 rng(seed);
        std::vector<std::uint64_t> counts;
        for (int i = 0; i < 32; ++i)
            counts.push_back(std::uniform_int_distribution<int>(0, 5)(rng));
        counts[0] = std::max<std::uint64_t>(counts[0], 1);
        auto checked = std::make_unique<CheckedGreedy>();
        CheckedGreedy* probe = checked.get();
        Game g(GrowthSchedule::table(counts), std::make_unique<oracle::FuzzBuilder>(seed), std::move(checked), seed);
        g.run(150);
        CHECK(probe->calls > 0);
        CHECK(probe->mismatches == 0);
    }
}

TEST_CASE("phase warmup ignites the lowest ids")
{
    PhaseOptions o;
    o.warmup = 3;
    Game g(GrowthSchedule::constant(3), make_builder("path", 1), make_arsonist("phase", 1, o), 1);
    g.run(3);
    // Turn 2 spreads 0 -> 1, turn 3 spreads to 3.
    std::vector<VertexId> sources;
    for (const auto& r : g.trace())
        sources.push_back(r.source);
    CHECK(sources == std::vector<VertexId>{0, 2, 4});
    const auto& phase = dynamic_cast<PhaseArsonist&>(g.arsonist());
    CHECK(phase.phases().empty());

    PhaseOptions bad;
    bad.warmup = 0;
    CHECK_THROWS_AS(PhaseArsonist{bad}, Error);
}

TEST_CASE("phase on one vertex per turn burns everything")
{
    Game g(GrowthSchedule::constant(1), make_builder("path", 1), make_arsonist("phase", 1), 1);
    g.run(500);
    for (const auto& r : g.trace())
        REQUIRE(r.burning_total == r.vertex_total);
}

TEST_CASE("phase boundaries follow the recursion N_{k+1} = N_k + A_k")
{
    PhaseOptions o;
    o.warmup = 10;
    Game g(GrowthSchedule::poly(1.0, 0.5), make_builder("path", 1), make_arsonist("phase", 1, o), 1);
    g.run(2000);
    const auto& phases = dynamic_cast<PhaseArsonist&>(g.arsonist()).phases();
    REQUIRE(phases.size() >= 5);

    // Independent replay: start from N_1 = warmup and add each phase's rounds.
    std::vector<Turn> replay{10};
    for (const PhaseRecord& p : phases)
        replay.push_back(replay.back() + p.rounds);
    std::vector<Turn> starts;
    for (std::size_t k = 0; k < phases.size(); ++k) {
        const PhaseRecord& p = phases[k];
        starts.push_back(p.start);
        CHECK(p.k == k + 1);
        CHECK(p.start == replay[k]);
        CHECK(p.end == replay[k + 1]);
        CHECK(p.snapshot_vertices == g.trace()[static_cast<std::size_t>(p.start - 1)].vertex_total);
        CHECK(p.invariant_ok);
        CHECK(g.trace()[static_cast<std::size_t>(p.end - 1)].burning_total >= p.snapshot_vertices);
        if (!p.budget_violation)
            CHECK(p.rounds <= p.budget);
    }
    // Frozen from the replay above.
    CHECK(std::vector<Turn>(starts.begin(), starts.begin() + 5) == std::vector<Turn>{10, 11, 13, 15, 17});
}

TEST_CASE("every strategy pair survives long randomized games")
{
    const std::array<const char*, 3> builders{"path", "star", "rrt"};
    const std::array<const char*, 3> arsonists{"greedy", "random", "phase"};
    std::uint64_t seed = 100;
    for (const char* b : builders)
        for (const char* a : arsonists) {
            ++seed;
            Game g(GrowthSchedule::poly(1.0, 0.3), make_builder(b, seed), make_arsonist(a, seed), seed);
            CAPTURE(b);
            CAPTURE(a);
            CHECK_NOTHROW(g.run(10000));
            CHECK(g.turn() == 10000);
            CHECK(g.trace().back().burning_total <= g.trace().back().vertex_total);
            CHECK(is_connected(GraphView(g.graph())));
        }
}
