#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

using namespace dhs;
using namespace dhs::testing;

namespace
{
    Solution at(double x, double y, double value)
    {
        return Solution{Vector{x, y}, value, 0};
    }
}

TEST_CASE("config requires N_d > N_s")
{
    MemoryConfig c;
    c.deep_capacity = 10;
    c.shallow_capacity = 20;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c.shallow_capacity = 10;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c.shallow_capacity = 9;
    CHECK_NOTHROW(c.validate());
    c.elite_depth = 0;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
}

TEST_CASE("first visit populates elite and frequency")
{
    const auto p = box(2, 0.0, 1.0);
    MemoryBank bank({}, p);
    const auto s = at(0.3, 0.7, 3.0);
    bank.record_visit(s);
    REQUIRE(bank.elite().deep().size() == 1);
    CHECK(bank.elite().deep().front().solution.value == 3.0);
    CHECK(bank.frequency().deep_count(bank.grid().cell_of(s.position)) == 1);
    CHECK(bank.recentness().size() == 1);
    REQUIRE(bank.best());
    CHECK(bank.best()->value == 3.0);
}

TEST_CASE("full deep elite evicts its worst")
{
    const auto p = box(2, 0.0, 20.0);
    MemoryConfig c;
    c.deep_capacity = 10;
    MemoryBank bank(c, p);
    std::vector<Solution> all;
    for (int v = 9; v >= 0; --v)
    {
        all.push_back(at(v, 1.0, v));
        bank.record_visit(all.back());
    }
    CHECK(bank.elite().deep().back().solution.value == 9.0);
    all.push_back(at(8.5, 2.0, 8.0));
    bank.record_visit(all.back());

    std::stable_sort(all.begin(), all.end(), better);
    all.resize(10);
    CHECK(bank.elite().deep_solutions() == all);
    CHECK(bank.elite().deep().back().solution.value == 8.0);
}

TEST_CASE("duplicate position refreshes depth without growing")
{
    TemporalStore store(10, 3, 3, 5);
    const auto a = at(1, 1, 1.0);
    store.insert(a, 1.0, 0);
    store.insert(at(2, 2, 2.0), 2.0, 1);
    store.tick();
    store.tick();
    REQUIRE(store.shallow().size() == 2);
    CHECK(store.shallow()[0].depth == 2);
    store.insert(a, 1.0, 2);
    CHECK(store.shallow().size() == 2);
    CHECK(store.shallow()[0].depth == 0);
    CHECK(store.shallow()[1].depth == 2);
    CHECK(store.deep().size() == 2);
}

TEST_CASE("expired shallow entry is replaced by the best extended one")
{
    TemporalStore store(10, 2, 2, 2);
    store.insert(at(0, 0, 1.0), 1.0, 0);
    store.tick();
    store.tick();
    store.insert(at(0, 1, 2.0), 2.0, 1);
    store.insert(at(0, 2, 3.0), 3.0, 2);
    store.insert(at(0, 3, 4.0), 4.0, 3);
    REQUIRE(store.shallow().size() == 2);
    CHECK(store.shallow()[0].depth == 2);
    CHECK(store.extended().size() == 2);

    store.tick();
    REQUIRE(store.shallow().size() == 2);
    CHECK(store.shallow()[0].solution.value == 2.0);
    CHECK(store.shallow()[1].solution.value == 3.0);
    REQUIRE(store.extended().size() == 1);
    CHECK(store.extended()[0].solution.value == 4.0);
}

TEST_CASE("eviction with an empty extended layer shrinks shallow")
{
    TemporalStore store(10, 3, 3, 1);
    store.insert(at(0, 0, 1.0), 1.0, 0);
    store.tick();
    store.insert(at(0, 1, 2.0), 2.0, 1);
    CHECK(store.extended().empty());
    store.tick();
    REQUIRE(store.shallow().size() == 1);
    CHECK(store.shallow()[0].solution.value == 2.0);
    store.tick();
    CHECK(store.shallow().empty());
    CHECK(store.deep().size() == 2);
}

TEST_CASE("double tick is a contract violation")
{
    const auto p = box(2, 0.0, 1.0);
    MemoryBank bank({}, p);
    bank.tick(1);
    CHECK_THROWS_AS(bank.tick(1), ContractViolation);
    CHECK_THROWS_AS(bank.tick(3), ContractViolation);
    CHECK_NOTHROW(bank.tick(2));
}

TEST_CASE("frequency window of depth 3")
{
    const auto p = box(2, 0.0, 1.0);
    MemoryConfig c;
    c.frequency_depth = 3;
    MemoryBank bank(c, p);
    for (int i = 0; i < 5; ++i)
        bank.tick(bank.iteration() + 1);
    const std::size_t t = bank.iteration();
    const auto s = at(0.1, 0.1, 1.0);
    const auto cell = bank.grid().cell_of(s.position);
    bank.record_visit(s);
    for (std::size_t k = 1; k <= 4; ++k)
    {
        bank.tick(t + k);
        CHECK(bank.frequency().deep_count(cell) == 1);
        CHECK(bank.frequency().shallow_count(cell) == (k <= 3 ? 1u : 0u));
    }
}

TEST_CASE("tabu examples")
{
    RecentnessMemory ring(4);
    CHECK_FALSE(ring.is_tabu(Vector{1, 2}, 10.0));
    ring.push(Vector{0, 0});
    CHECK(is_tabu(ring, Vector{0.3, 0.3}, 0.5));
    CHECK_FALSE(is_tabu(ring, Vector{0.3, 0.3}, 0.4));
    CHECK(is_tabu(ring, Vector{0, 0}, 1e-300));
}

TEST_CASE("tabu ring evicts the oldest entry")
{
    RecentnessMemory ring(3);
    for (int i = 0; i < 5; ++i)
        ring.push(Vector{static_cast<double>(i), 0});
    CHECK(ring.size() == 3);
    CHECK(ring.entries().front() == Vector{2, 0});
    CHECK_FALSE(ring.is_tabu(Vector{1, 0}, 0.1));
    CHECK(ring.is_tabu(Vector{4, 0}, 0.1));
}

TEST_CASE("least visited cells")
{
    const auto p = box(2, 0.0, 3.0);
    MemoryConfig c;
    c.partitions_per_dim = 3;
    MemoryBank fresh(c, p);
    CHECK(least_visited_cells(fresh.spatial(), 2) == std::vector<CellId>{0, 1});
    CHECK(least_visited_cells(fresh.spatial(), 100).size() == 9);

    // Cells A=0, B=1, C=2 along the first axis with counts 5, 0, 2.
    SpatialMemory spatial(Grid(p, 3, 8), 10);
    const auto visit = [&](double x, int times)
    {
        for (int i = 0; i < times; ++i)
            spatial.record(at(x, 0.5, 1.0), spatial.grid().cell_of(Vector{x, 0.5}), 0);
    };
    visit(0.5, 5);
    visit(2.5, 2);
    for (CellId other = 3; other < 9; ++other)
    {
        Rng rng(other);
        const auto x = spatial.grid().sample_in(other, rng);
        for (int i = 0; i < 9; ++i)
            spatial.record(Solution{x, 1.0, 0}, other, 0);
    }
    CHECK(least_visited_cells(spatial, 2) == std::vector<CellId>{1, 2});
}

TEST_CASE("grid cells")
{
    const auto p = box(3, -1.0, 1.0);
    Grid g(p, 4, 2);
    CHECK(g.cell_count() == 16);
    CHECK(g.gridded_dimensions() == 2);
    CHECK(g.cell_of(Vector{-1, -1, 0}) == 0);
    CHECK(g.cell_of(Vector{1, 1, 0}) == 15);
    CHECK(g.cell_of(Vector{-0.6, 0.1, 0.9}) == 0 + 2 * 4);
    Rng rng(1);
    for (CellId c = 0; c < 16; ++c)
        for (int i = 0; i < 20; ++i)
        {
            const auto x = g.sample_in(c, rng);
            CHECK(p.contains(x));
            CHECK(g.cell_of(x) == c);
        }
    CHECK_THROWS_AS(g.sample_in(16, rng), LookupError);
    CHECK_THROWS_AS(grid_cell_count(30, 4, 30), InvalidInput);
}

TEST_CASE("snapshot of fresh and once-visited banks")
{
    const auto p = box(2, 0.0, 1.0);
    MemoryBank bank({}, p);
    auto snap = bank.snapshot();
    CHECK(snap.coverage == 0.0);
    CHECK(snap.deep_elite.empty());
    bank.record_visit(at(0.5, 0.5, 1.0));
    snap = bank.snapshot();
    CHECK(snap.coverage == doctest::Approx(1.0 / 16.0));
    CHECK(snap.visits == 1);
    CHECK(snap.visit_histogram == std::map<std::uint64_t, std::uint64_t>{{1, 1}});
}

TEST_CASE("snapshot equals that of an identical re-run")
{
    const auto p = make_benchmark("sphere", 4);
    const auto once = [&]
    {
        Harness h(p, 99);
        auto sols = h.random_solutions(10);
        for (int i = 0; i < 9; ++i)
        {
            h.tick();
            h.random_solutions(10);
        }
        CHECK(h.evaluator.count() == 100);
        return h.bank.snapshot();
    };
    CHECK(once() == once());
}

TEST_CASE("characteristic memory ranks by feature score")
{
    const auto p = box(2, 0.0, 10.0);
    MemoryConfig c;
    c.deep_capacity = 4;
    c.shallow_capacity = 2;
    // Score: the first coordinate, regardless of objective value.
    MemoryBank bank(c, p, [](const Solution &s, const Solution *)
                    { return s.position[0]; });
    Rng rng(4);
    std::vector<double> firsts;
    for (int i = 0; i < 50; ++i)
    {
        const Vector x{uniform(rng, 0, 10), uniform(rng, 0, 10)};
        firsts.push_back(x[0]);
        bank.record_visit(Solution{x, p(x), 0});
    }
    std::sort(firsts.rbegin(), firsts.rend());
    const auto &deep = bank.characteristic().deep();
    REQUIRE(deep.size() == 4);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(deep[i].solution.position[0] == firsts[i]);
}

TEST_CASE("default characteristic feature rewards proximity to the incumbent")
{
    const Solution inc = at(0, 0, 0.0);
    CHECK(proximity_to_incumbent(at(3, 4, 1.0), &inc) == -5.0);
    CHECK(proximity_to_incumbent(at(3, 4, 1.0), nullptr) == 0.0);
}

TEST_CASE("clear_shallow empties recent layers only")
{
    const auto p = box(2, 0.0, 1.0);
    MemoryBank bank({}, p);
    Rng rng(8);
    for (int i = 0; i < 20; ++i)
        bank.record_visit(Solution{random_vector(rng, 2, 0, 1), uniform(rng, 0, 1), 0});
    bank.clear_shallow();
    CHECK(bank.elite().shallow().empty());
    CHECK(bank.elite().extended().empty());
    CHECK(bank.frequency().shallow_counts().empty());
    CHECK(bank.elite().deep().size() == 10);
    CHECK(bank.frequency().total() == 20);
}

TEST_CASE("random scripts agree with every oracle")
{
    Rng rng(20240601);
    const auto p = box(3, -2.0, 2.0);
    for (int trial = 0; trial < 40; ++trial)
    {
        const bool wide = trial % 2 == 0;
        const auto config = random_memory_config(rng, wide);
        const auto script = random_script(rng, p, 400);
        const auto problem = check_memory_script(p, config, script, rng);
        CHECK_MESSAGE(problem.empty(), problem);
    }
}

TEST_CASE("deep best never increases")
{
    const auto p = make_benchmark("rastrigin", 3);
    Harness h(p, 5);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 50; ++i)
    {
        h.random_solutions(7);
        h.tick();
        CHECK(h.bank.best()->value <= best);
        best = h.bank.best()->value;
    }
}
