#pragma once

#include "dhs/drivers.hpp"
#include "dhs/engine.hpp"

#include <cmath>
#include <memory>

namespace dhs::testing
{
    inline Vector random_vector(Rng &rng, std::size_t n, double lo, double hi)
    {
        Vector v(n);
        for (auto &x : v)
            x = uniform(rng, lo, hi);
        return v;
    }

    inline double sum_of_squares(std::span<const double> x)
    {
        double s = 0.0;
        for (double v : x)
            s += v * v;
        return s;
    }

    inline Problem box(std::size_t n, double lo, double hi, Problem::Objective f = sum_of_squares)
    {
        return Problem("box", Vector(n, lo), Vector(n, hi), std::move(f), 0.0);
    }

    inline Problem constant_problem(std::size_t n)
    {
        return Problem("flat", Vector(n, -1.0), Vector(n, 1.0), [](std::span<const double>)
                       { return 1.0; });
    }

    /// Everything a driver step needs, owned in one place.
    struct Harness
    {
        Problem problem;
        MemoryConfig memory;
        DriverParams params;
        Rng rng;
        Evaluator evaluator;
        MemoryBank bank;
        OperatorBaselines ops;

        Harness(Problem p, std::uint64_t seed, DriverParams dp = {}, MemoryConfig mc = {},
                OperatorSettings os = {})
            : problem(std::move(p)), memory(mc), params(dp), rng(seed), evaluator(problem),
              bank(memory, problem), ops(resolve(os, problem))
        {
        }

        StepContext context(std::size_t budget = std::numeric_limits<std::size_t>::max())
        {
            return StepContext{problem, evaluator, bank, rng, params, ops, budget, {}, {}};
        }

        std::vector<Solution> random_solutions(std::size_t count)
        {
            std::vector<Vector> xs;
            for (std::size_t i = 0; i < count; ++i)
                xs.push_back(random_vector(rng, problem.dimension(), problem.lower()[0], problem.upper()[0]));
            auto ctx = context();
            return ctx.evaluate(xs);
        }

        void tick() { bank.tick(bank.iteration() + 1); }
    };

    /// Short budget plan with a small grid so engine-level properties run fast.
    inline RunSettings small_settings()
    {
        RunSettings s;
        s.memory.partitions_per_dim = 3;
        s.stages.gentry = 50;
        return s;
    }
}
