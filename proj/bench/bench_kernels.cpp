#include "dhs/experiment.hpp"
#include "dhs/parallel.hpp"

#include <benchmark/benchmark.h>

using namespace dhs;

namespace
{
    std::vector<Vector> positions(const Problem &p, std::size_t count)
    {
        Rng rng(7);
        std::vector<Vector> out(count, Vector(p.dimension()));
        for (auto &x : out)
            for (std::size_t j = 0; j < x.size(); ++j)
                x[j] = uniform(rng, p.lower()[j], p.upper()[j]);
        return out;
    }

    void batch(benchmark::State &state, Execution execution)
    {
        const auto p = make_benchmark("rastrigin", static_cast<std::size_t>(state.range(0)));
        const auto xs = positions(p, 4096);
        for (auto _ : state)
            benchmark::DoNotOptimize(evaluate_batch(p, xs, execution));
        state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(xs.size()));
    }

    void matrix(benchmark::State &state, Execution execution)
    {
        ExperimentConfig config;
        config.problems = {{"sphere", 5}, {"rastrigin", 5}};
        config.drivers = {DriverKind::ga, DriverKind::es, DriverKind::ts};
        config.seeds = {1, 2};
        config.budget = 5000;
        config.settings.memory.partitions_per_dim = 3;
        config.settings.stages.gentry = 100;
        for (auto _ : state)
            benchmark::DoNotOptimize(run_matrix(config, execution));
    }

    void batch_serial(benchmark::State &state) { batch(state, Execution::serial); }
    void batch_parallel(benchmark::State &state) { batch(state, Execution::parallel); }
    void matrix_serial(benchmark::State &state) { matrix(state, Execution::serial); }
    void matrix_parallel(benchmark::State &state) { matrix(state, Execution::parallel); }
}

BENCHMARK(batch_serial)->Arg(10)->Arg(100);
BENCHMARK(batch_parallel)->Arg(10)->Arg(100);
BENCHMARK(matrix_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(matrix_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
