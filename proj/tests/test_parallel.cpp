#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dhs/experiment.hpp"
#include "support.hpp"

#include <atomic>

using namespace dhs;

TEST_CASE("parallel batch equals serial batch")
{
    Rng rng(3);
    for (const auto &p : benchmark_registry(6))
    {
        std::vector<Vector> xs;
        for (int i = 0; i < 500; ++i)
            xs.push_back(dhs::testing::random_vector(rng, 6, p.lower()[0], p.upper()[0]));
        const auto a = evaluate_batch_serial(p, xs);
        const auto b = evaluate_batch_parallel(p, xs);
        CHECK(a == b);
        CHECK(evaluate_batch(p, xs, Execution::parallel) == a);
    }
}

TEST_CASE("batch errors propagate")
{
    const auto p = make_benchmark("sphere", 3);
    std::vector<Vector> xs(20, Vector(3, 0.0));
    xs[13] = Vector(2, 0.0);
    CHECK_THROWS_AS(evaluate_batch_parallel(p, xs), InvalidInput);
    CHECK_THROWS_AS(evaluate_batch_serial(p, xs), InvalidInput);
}

TEST_CASE("for_each_index visits every index once")
{
    for (auto exec : {Execution::serial, Execution::parallel})
    {
        std::vector<std::atomic<int>> hits(257);
        for_each_index(hits.size(), exec, [&](std::size_t i)
                       { ++hits[i]; });
        for (auto &h : hits)
            CHECK(h.load() == 1);
    }
}

TEST_CASE("for_each_index rethrows the lowest failing index")
{
    for (auto exec : {Execution::serial, Execution::parallel})
    {
        try
        {
            for_each_index(100, exec, [](std::size_t i)
                           {
                               if (i == 40 || i == 70)
                                   throw std::runtime_error("task " + std::to_string(i));
                           });
            FAIL("expected an exception");
        }
        catch (const std::runtime_error &e)
        {
            CHECK(std::string(e.what()) == "task 40");
        }
    }
}

TEST_CASE("parallel matrix equals serial matrix")
{
    ExperimentConfig c;
    c.problems = {{"sphere", 3}, {"rastrigin", 3}};
    c.drivers = {DriverKind::ga, DriverKind::es, DriverKind::ts};
    c.seeds = {1, 2};
    c.budget = 3000;
    c.settings.memory.partitions_per_dim = 3;
    c.settings.stages.gentry = 100;
    const auto serial = run_matrix(c, Execution::serial);
    const auto parallel = run_matrix(c, Execution::parallel);
    REQUIRE(serial.size() == 24);
    CHECK(serial == parallel);
}

TEST_CASE("run with parallel evaluation equals serial run")
{
    const auto p = make_benchmark("griewank", 4);
    RunSettings s;
    s.memory.partitions_per_dim = 3;
    s.stages.gentry = 100;
    RunOptions par;
    par.execution = Execution::parallel;
    for (auto d : {DriverKind::ga, DriverKind::es, DriverKind::ts})
        CHECK(run_dhs(p, d, s, 4000, 17) == run_dhs(p, d, s, 4000, 17, par));
}
