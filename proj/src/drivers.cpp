#include "dhs/drivers.hpp"

#include <algorithm>
#include <cmath>

namespace dhs
{
    std::string_view to_string(DriverKind kind)
    {
        switch (kind)
        {
        case DriverKind::ga:
            return "ga";
        case DriverKind::es:
            return "es";
        case DriverKind::ts:
            return "ts";
        }
        return "?";
    }

    DriverKind parse_driver(std::string_view name)
    {
        if (name == "ga")
            return DriverKind::ga;
        if (name == "es")
            return DriverKind::es;
        if (name == "ts")
            return DriverKind::ts;
        throw LookupError("unknown driver '" + std::string(name) + "' (expected ga, es or ts)");
    }

    std::string_view to_string(OperatorKind kind)
    {
        switch (kind)
        {
        case OperatorKind::crossover:
            return "crossover";
        case OperatorKind::mutation:
            return "mutation";
        case OperatorKind::neighborhood:
            return "neighborhood";
        }
        return "?";
    }

    void DriverParams::validate() const
    {
        if (ga.mu < 2 || ga.offspring == 0)
            throw InvalidInput("ga.mu must be at least 2 and ga.offspring positive");
        if (!(ga.mutation_scale > 0.0))
            throw InvalidInput("ga.mutation_scale must be positive");
        if (ga.mutation_rate && !(*ga.mutation_rate >= 0.0 && *ga.mutation_rate <= 1.0))
            throw InvalidInput("ga.mutation_rate must lie in [0, 1]");
        if (es.mu == 0 || es.lambda < es.mu)
            throw InvalidInput("es requires mu >= 1 and lambda >= mu");
        if (!(es.sigma0 > 0.0))
            throw InvalidInput("es.sigma0 must be positive");
    }

    std::vector<Solution> StepContext::evaluate(std::span<const Vector> positions)
    {
        if (positions.size() > budget)
            throw ContractViolation("step asked for " + std::to_string(positions.size()) +
                                    " evaluations with " + std::to_string(budget) + " left");
        const std::size_t base = evaluator.count();
        auto solutions = evaluator.evaluate_all(positions, bank.iteration());
        budget -= positions.size();
        for (std::size_t i = 0; i < solutions.size(); ++i)
        {
            bank.record_visit(solutions[i]);
            if (on_evaluated)
                on_evaluated(solutions[i], base + i + 1);
        }
        return solutions;
    }

    const Solution &Population::best() const
    {
        if (members.empty())
            throw ContractViolation("best of an empty population");
        return *std::min_element(members.begin(), members.end(), better);
    }

    std::vector<Vector> initial_strategies(const Problem &problem, const EsParams &params, std::size_t count)
    {
        Vector sigma(problem.dimension());
        for (std::size_t j = 0; j < sigma.size(); ++j)
            sigma[j] = params.sigma0 * problem.width(j);
        return std::vector<Vector>(count, sigma);
    }

    Population make_population(std::vector<Solution> members, DriverKind kind, const Problem &problem,
                               const DriverParams &params)
    {
        Population pop;
        if (kind == DriverKind::es)
            pop.strategies = initial_strategies(problem, params.es, members.size());
        pop.members = std::move(members);
        return pop;
    }

    Population merge_truncate(const Population &a, const Population &b, std::size_t mu)
    {
        const bool strategic = !a.strategies.empty() || !b.strategies.empty();
        struct Ref
        {
            const Solution *s;
            const Vector *sigma;
        };
        std::vector<Ref> pool;
        for (const auto *p : {&a, &b})
            for (std::size_t i = 0; i < p->size(); ++i)
                pool.push_back({&p->members[i], strategic ? &p->strategies.at(i) : nullptr});
        std::stable_sort(pool.begin(), pool.end(), [](const Ref &x, const Ref &y)
                         { return x.s->value < y.s->value; });

        Population out;
        std::vector<const Ref *> skipped;
        for (const auto &r : pool)
        {
            if (out.size() == mu)
                break;
            const bool dup = std::any_of(out.members.begin(), out.members.end(), [&](const Solution &m)
                                         { return m.position == r.s->position; });
            if (dup)
            {
                skipped.push_back(&r);
                continue;
            }
            out.members.push_back(*r.s);
            if (strategic)
                out.strategies.push_back(*r.sigma);
        }
        // Not enough distinct positions: refill with duplicates in rank order.
        for (std::size_t i = 0; out.size() < mu && i < skipped.size(); ++i)
        {
            out.members.push_back(*skipped[i]->s);
            if (strategic)
                out.strategies.push_back(*skipped[i]->sigma);
        }
        return out;
    }

    namespace
    {
        const Solution &tournament(const Population &pop, Rng &rng)
        {
            const auto &a = pop.members[uniform_index(rng, pop.size())];
            const auto &b = pop.members[uniform_index(rng, pop.size())];
            return b.value < a.value ? b : a;
        }
    }

    PopulationStep ga_step(const Population &pop, OperationMode mode, StepContext &ctx)
    {
        if (pop.size() < 2)
            throw InvalidInput("ga_step needs at least two members");
        const std::size_t want = std::min(ctx.params.ga.offspring, ctx.budget);
        if (want == 0)
            return {pop, 0};

        const auto params = mode_params(mode, ctx.operators);
        const std::size_t n = ctx.problem.dimension();
        const double rate = ctx.params.ga.mutation_rate.value_or(1.0 / static_cast<double>(n));

        std::vector<Vector> children;
        children.reserve(want);
        while (children.size() < want)
        {
            const auto &p1 = tournament(pop, ctx.rng);
            const auto &p2 = tournament(pop, ctx.rng);
            const double lambda = sample_lambda(params.crossover, ctx.rng);
            ctx.note(OperatorKind::crossover, mode);
            auto [y1, y2] = arithmetic_crossover(p1.position, p2.position, lambda);

            for (auto *y : {&y1, &y2})
            {
                if (children.size() == want)
                    break;
                ctx.note(OperatorKind::mutation, mode);
                for (std::size_t j = 0; j < n; ++j)
                    if (uniform(ctx.rng, 0.0, 1.0) < rate)
                        (*y)[j] += params.mutation.sigma_scale * ctx.params.ga.mutation_scale *
                                   ctx.problem.width(j) * standard_normal(ctx.rng);
                children.push_back(ctx.problem.clip(*y));
            }
        }

        Population offspring;
        offspring.members = ctx.evaluate(children);

        // (mu + offspring) truncation; parents rank ahead of equal-valued children.
        Population next;
        std::vector<Solution> pool = pop.members;
        pool.insert(pool.end(), offspring.members.begin(), offspring.members.end());
        std::stable_sort(pool.begin(), pool.end(), better);
        pool.resize(pop.size());
        next.members = std::move(pool);
        return {std::move(next), children.size()};
    }

    PopulationStep es_step(const Population &pop, OperationMode mode, StepContext &ctx)
    {
        const std::size_t mu = pop.size();
        if (mu == 0 || pop.strategies.size() != mu)
            throw InvalidInput("es_step needs a non-empty population with one strategy vector per member");
        const std::size_t lambda = std::min(ctx.params.es.lambda, ctx.budget);
        if (lambda == 0)
            return {pop, 0};

        const auto params = mode_params(mode, ctx.operators);
        std::vector<Vector> children;
        std::vector<Vector> strategies;
        children.reserve(lambda);
        strategies.reserve(lambda);
        for (std::size_t i = 0; i < lambda; ++i)
        {
            const std::size_t parent = uniform_index(ctx.rng, mu);
            ctx.note(OperatorKind::mutation, mode);
            auto res = self_adaptive_mutation(pop.members[parent].position, pop.strategies[parent],
                                              params.mutation, ctx.rng);
            // The mode scales this draw only; the lineage keeps the unscaled step.
            for (double &s : res.step_sizes)
                s = std::max(s / params.mutation.sigma_scale, params.mutation.theta_min);
            children.push_back(ctx.problem.clip(res.child));
            strategies.push_back(std::move(res.step_sizes));
        }

        auto evaluated = ctx.evaluate(children);

        struct Candidate
        {
            Solution s;
            Vector sigma;
        };
        std::vector<Candidate> pool;
        const bool plus = ctx.params.es.plus || lambda < mu;
        if (plus)
            for (std::size_t i = 0; i < mu; ++i)
                pool.push_back({pop.members[i], pop.strategies[i]});
        for (std::size_t i = 0; i < lambda; ++i)
            pool.push_back({std::move(evaluated[i]), std::move(strategies[i])});
        std::stable_sort(pool.begin(), pool.end(), [](const Candidate &a, const Candidate &b)
                         { return a.s.value < b.s.value; });

        Population next;
        for (std::size_t i = 0; i < mu; ++i)
        {
            next.members.push_back(std::move(pool[i].s));
            next.strategies.push_back(std::move(pool[i].sigma));
        }
        return {std::move(next), lambda};
    }

    TsStep ts_step(const Solution &current, OperationMode mode, StepContext &ctx,
                   const NeighborhoodParams &neighborhood, const TrialConstraints &constraints)
    {
        TsStep out{current};
        if (ctx.budget == 0)
        {
            out.stalled = true;
            return out;
        }

        ctx.note(OperatorKind::neighborhood, mode);
        auto trials = neighborhood_trials(current.position, neighborhood, ctx.problem, ctx.bank.recentness(),
                                          ctx.bank.tabu_radius(), ctx.rng, constraints);
        out.dropped = trials.dropped;
        if (trials.points.size() > ctx.budget)
            trials.points.resize(ctx.budget);
        if (trials.points.empty())
        {
            out.stalled = true;
            return out;
        }

        const auto evaluated = ctx.evaluate(trials.points);
        out.evaluations = evaluated.size();
        // Best trial wins even when worse than current; ties go to the lower index.
        const auto best = std::min_element(evaluated.begin(), evaluated.end(), better);
        out.current = *best;
        ctx.bank.recentness().push(best->position);
        return out;
    }

    TsStep ts_step(const Solution &current, OperationMode mode, StepContext &ctx)
    {
        return ts_step(current, mode, ctx, mode_params(mode, ctx.operators).neighborhood);
    }
}
