#include "dhs/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dhs
{
    std::string_view to_string(Stage stage)
    {
        switch (stage)
        {
        case Stage::initial:
            return "initial";
        case Stage::exploratory:
            return "exploratory";
        case Stage::mixed:
            return "mixed";
        case Stage::intensive:
            return "intensive";
        case Stage::final:
            return "final";
        }
        return "?";
    }

    Stage parse_stage(std::string_view label)
    {
        for (Stage s : all_stages)
            if (to_string(s) == label)
                return s;
        throw LookupError("unknown stage label '" + std::string(label) + "'");
    }

    std::string_view to_string(BurstTag tag)
    {
        switch (tag)
        {
        case BurstTag::none:
            return "none";
        case BurstTag::intensify:
            return "intensify";
        case BurstTag::diversify:
            return "diversify";
        }
        return "?";
    }

    std::string_view to_string(Wrapper wrapper)
    {
        return wrapper == Wrapper::plain ? "plain" : "dhs";
    }

    Wrapper parse_wrapper(std::string_view name)
    {
        if (name == "plain")
            return Wrapper::plain;
        if (name == "dhs")
            return Wrapper::dhs;
        throw LookupError("unknown wrapper '" + std::string(name) + "' (expected plain or dhs)");
    }

    std::size_t StagePlan::total() const
    {
        return std::accumulate(budgets.begin(), budgets.end(), std::size_t{0});
    }

    StagePlan make_plan(const StageSettings &settings, std::size_t total_budget, std::size_t cell_count)
    {
        double sum = 0.0;
        for (double f : settings.fractions)
        {
            if (!(f > 0.0))
                throw InvalidInput("stage budget fractions must be positive");
            sum += f;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw InvalidInput("stage budget fractions must sum to 1");

        StagePlan plan;
        plan.rules = settings;
        std::size_t assigned = 0;
        for (std::size_t i = 0; i + 1 < stage_count; ++i)
        {
            plan.budgets[i] = static_cast<std::size_t>(std::floor(static_cast<double>(total_budget) * settings.fractions[i]));
            assigned += plan.budgets[i];
        }
        plan.budgets[stage_count - 1] = total_budget - std::min(assigned, total_budget);
        plan.gentry = settings.gentry.value_or(std::min<std::size_t>(10 * cell_count, 1000));
        return plan;
    }

    namespace
    {
        std::size_t driver_state_size(DriverKind driver, const DriverParams &params)
        {
            switch (driver)
            {
            case DriverKind::ga:
                return params.ga.mu;
            case DriverKind::es:
                return params.es.mu;
            case DriverKind::ts:
                return 1;
            }
            return 1;
        }
    }

    void validate_plan(const StagePlan &plan, const RunSettings &settings, DriverKind driver)
    {
        settings.memory.validate();
        settings.operators.validate();
        settings.drivers.validate();

        for (Stage s : all_stages)
            if (plan.budget(s) == 0)
                throw InvalidInput("stage '" + std::string(to_string(s)) + "' has a zero evaluation budget");
        if (plan.gentry == 0)
            throw InvalidInput("gentry size must be positive");
        if (plan.gentry > plan.budget(Stage::initial))
            throw InvalidInput("initial budget " + std::to_string(plan.budget(Stage::initial)) +
                               " is smaller than the gentry size " + std::to_string(plan.gentry));
        if (plan.gentry < driver_state_size(driver, settings.drivers))
            throw InvalidInput("gentry is smaller than the driver population");

        const auto &r = plan.rules;
        if (!(r.coverage >= 0.0 && r.coverage <= 1.0))
            throw InvalidInput("coverage threshold must lie in [0, 1]");
        if (!(r.agreement > 0.0 && r.agreement <= 1.0))
            throw InvalidInput("agreement fraction must lie in (0, 1]");
        if (!(r.similarity > 0.0))
            throw InvalidInput("similarity tolerance must be positive");
        if (r.candidates == 0)
            throw InvalidInput("intensive candidate count must be positive");
        if (r.explore_patience == 0 || r.mixed_patience == 0)
            throw InvalidInput("stagnation windows must be positive");
        if (!(r.restart_growth >= 1.0))
            throw InvalidInput("restart growth must be at least 1");
    }

    std::size_t Consensus::frozen_count() const
    {
        return static_cast<std::size_t>(std::count(frozen.begin(), frozen.end(), true));
    }

    Consensus analyze_consensus(std::span<const Solution> elites, const Problem &problem, double similarity,
                                double agreement)
    {
        const std::size_t n = problem.dimension();
        Consensus out{std::vector<bool>(n, false), Vector(n, 0.0)};
        const std::size_t m = elites.size();
        if (m == 0)
            return out;
        const double needed = agreement * static_cast<double>(m);

        for (std::size_t j = 0; j < n; ++j)
        {
            const double tol = similarity * problem.width(j);
            std::size_t best_size = 0;
            std::size_t best_anchor = 0;
            for (std::size_t a = 0; a < m; ++a)
            {
                std::size_t size = 0;
                for (std::size_t f = 0; f < m; ++f)
                    if (std::abs(elites[f].position[j] - elites[a].position[j]) <= tol)
                        ++size;
                if (size > best_size)
                {
                    best_size = size;
                    best_anchor = a;
                }
            }
            if (static_cast<double>(best_size) + 1e-9 < needed)
                continue;

            double sum = 0.0;
            const double anchor = elites[best_anchor].position[j];
            for (std::size_t f = 0; f < m; ++f)
                if (std::abs(elites[f].position[j] - anchor) <= tol)
                    sum += elites[f].position[j];
            out.frozen[j] = true;
            out.values[j] = sum / static_cast<double>(best_size);
        }
        return out;
    }

    SearchRun::SearchRun(const Problem &problem, DriverKind driver, const RunSettings &settings,
                         std::size_t budget, std::uint64_t seed, RunOptions options)
        : problem_(&problem), driver_(driver), settings_(settings),
          plan_(make_plan(settings.stages, budget,
                          grid_cell_count(problem.dimension(), settings.memory.partitions_per_dim,
                                          settings.memory.grid_dimension_cap))),
          seed_(seed), options_(std::move(options)), rng_(seed),
          evaluator_(problem, options_.execution),
          bank_(settings.memory, problem, options_.feature),
          baselines_(resolve(settings.operators, problem)),
          best_value_(std::numeric_limits<double>::infinity())
    {
        validate_plan(plan_, settings_, driver_);
    }

    StepContext SearchRun::context(std::size_t budget, const OperatorBaselines &ops)
    {
        StepContext ctx{*problem_, evaluator_, bank_, rng_, settings_.drivers, ops, budget, {}, {}};
        ctx.on_evaluated = [this](const Solution &s, std::size_t evaluation)
        {
            if (trace_.empty() || s.value < best_value_)
            {
                best_value_ = s.value;
                trace_.push_back({evaluation, s.value, stage_});
            }
            if (options_.observer.on_evaluation)
                options_.observer.on_evaluation(stage_, tag_, s);
        };
        if (options_.record_mode_log)
            ctx.on_operator = [this](OperatorKind op, OperationMode mode)
            { mode_log_.push_back({stage_, tag_, op, mode}); };
        return ctx;
    }

    void SearchRun::begin_stage(Stage stage, std::size_t nominal)
    {
        stage_ = stage;
        if (stage != Stage::initial)
            bank_.clear_shallow();
        if (!trace_.empty())
            trace_.push_back({evaluations(), best_value_, stage});
        stages_.push_back(StageRecord{stage, nominal + carry_, evaluations(), evaluations(), bank_.iteration(),
                                      bank_.iteration()});
        carry_ = 0;
    }

    void SearchRun::end_stage()
    {
        auto &rec = stages_.back();
        rec.end_evaluation = evaluations();
        rec.end_iteration = bank_.iteration();
        carry_ = rec.budget - rec.used();
    }

    std::size_t SearchRun::remaining() const
    {
        const auto &rec = stages_.back();
        return rec.budget - (evaluations() - rec.start_evaluation);
    }

    void SearchRun::advance()
    {
        bank_.tick(bank_.iteration() + 1);
    }

    std::size_t SearchRun::state_size() const
    {
        return driver_state_size(driver_, settings_.drivers);
    }

    double SearchRun::incumbent_value() const
    {
        const auto *best = bank_.best();
        return best ? best->value : std::numeric_limits<double>::infinity();
    }

    std::vector<Solution> SearchRun::evaluate_positions(const std::vector<Vector> &positions)
    {
        auto ctx = context(remaining(), baselines_);
        return ctx.evaluate(positions);
    }

    std::vector<Vector> SearchRun::sample_least_visited(std::size_t count)
    {
        const auto cells = bank_.spatial().least_visited_cells(count);
        std::vector<Vector> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i)
            out.push_back(bank_.grid().sample_in(cells[i % cells.size()], rng_));
        return out;
    }

    void SearchRun::reseed(std::vector<Solution> solutions)
    {
        if (driver_ == DriverKind::ts)
            current_ = *std::min_element(solutions.begin(), solutions.end(), better);
        else
            population_ = make_population(std::move(solutions), driver_, *problem_, settings_.drivers);
    }

    PopulationStep SearchRun::step_population(const Population &pop, OperationMode mode,
                                              const OperatorBaselines &ops)
    {
        auto ctx = context(remaining(), ops);
        return driver_ == DriverKind::ga ? ga_step(pop, mode, ctx) : es_step(pop, mode, ctx);
    }

    std::size_t SearchRun::driver_step(OperationMode mode, const OperatorBaselines &ops)
    {
        if (driver_ != DriverKind::ts)
        {
            auto step = step_population(population_, mode, ops);
            population_ = std::move(step.population);
            return step.evaluations;
        }

        auto ctx = context(remaining(), ops);
        auto step = ts_step(current_, mode, ctx);
        if (step.stalled && remaining() > 0)
        {
            // Every trial was tabu or ejected by the bounds: jump to a fresh cell.
            current_ = evaluate_positions(sample_least_visited(1)).front();
            return 1;
        }
        current_ = std::move(step.current);
        return step.evaluations;
    }

    void SearchRun::initial_search()
    {
        begin_stage(Stage::initial, plan_.budget(Stage::initial));
        const std::size_t cells = bank_.grid().cell_count();
        gentry_.clear();
        gentry_.reserve(plan_.gentry);
        while (gentry_.size() < plan_.gentry)
        {
            // One point per least-visited cell; re-query so passes go round-robin.
            const std::size_t want = std::min(plan_.gentry - gentry_.size(), cells);
            auto batch = evaluate_positions(sample_least_visited(want));
            gentry_.insert(gentry_.end(), batch.begin(), batch.end());
        }

        auto ranked = gentry_;
        std::stable_sort(ranked.begin(), ranked.end(), better);
        ranked.resize(std::min(state_size(), ranked.size()));
        reseed(std::move(ranked));
        advance();
        end_stage();
    }

    void SearchRun::exploratory_search()
    {
        begin_stage(Stage::exploratory, plan_.budget(Stage::exploratory));
        const auto &rules = plan_.rules;
        double boost = 1.0;
        std::size_t stall = 0;
        while (remaining() > 0)
        {
            const double before = incumbent_value();
            driver_step(OperationMode::expand, baselines_.boosted(boost));
            advance();
            stall = incumbent_value() < before ? 0 : stall + 1;

            if (bank_.spatial().coverage() >= rules.coverage)
                break;
            if (stall >= rules.explore_patience && restarts_.exploratory < rules.explore_restarts &&
                remaining() >= state_size())
            {
                ++restarts_.exploratory;
                boost *= rules.restart_growth;
                reseed(evaluate_positions(sample_least_visited(state_size())));
                advance();
                stall = 0;
            }
        }
        end_stage();
    }

    void SearchRun::intensify_burst(const Solution &trigger)
    {
        ++restarts_.intensify_bursts;
        tag_ = BurstTag::intensify;
        const std::size_t bursts = plan_.rules.burst_iterations;

        if (driver_ == DriverKind::ts)
        {
            if (options_.observer.on_intensify_burst)
                options_.observer.on_intensify_burst(trigger, std::span<const Solution>(&trigger, 1));
            current_ = trigger;
            for (std::size_t i = 0; i < bursts && remaining() > 0; ++i)
            {
                auto ctx = context(remaining(), baselines_);
                auto step = ts_step(current_, OperationMode::condense, ctx);
                advance();
                if (step.stalled)
                    break;
                current_ = std::move(step.current);
            }
            tag_ = BurstTag::none;
            return;
        }

        Population local;
        for (std::size_t i = 0; i < population_.size(); ++i)
            if (distance(population_.members[i].position, trigger.position) <= baselines_.radius)
            {
                local.members.push_back(population_.members[i]);
                if (!population_.strategies.empty())
                    local.strategies.push_back(population_.strategies[i]);
            }
        if (local.members.empty())
            local = make_population({trigger}, driver_, *problem_, settings_.drivers);
        if (driver_ == DriverKind::ga && local.size() < 2)
            local.members.push_back(local.members.front());

        if (options_.observer.on_intensify_burst)
            options_.observer.on_intensify_burst(trigger, local.members);

        for (std::size_t i = 0; i < bursts && remaining() > 0; ++i)
        {
            local = step_population(local, OperationMode::condense, baselines_).population;
            advance();
        }
        population_ = merge_truncate(population_, local, population_.size());
        tag_ = BurstTag::none;
    }

    void SearchRun::diversify_burst()
    {
        ++restarts_.mixed;
        tag_ = BurstTag::diversify;
        reseed(evaluate_positions(sample_least_visited(state_size())));
        if (remaining() > 0)
            driver_step(OperationMode::expand, baselines_);
        advance();
        tag_ = BurstTag::none;
    }

    void SearchRun::mixed_search()
    {
        begin_stage(Stage::mixed, plan_.budget(Stage::mixed));
        const auto &rules = plan_.rules;
        std::size_t stall = 0;
        while (remaining() > 0)
        {
            const double before = incumbent_value();
            driver_step(OperationMode::normal, baselines_);
            advance();

            if (incumbent_value() < before)
            {
                // A new solution took the deep elite's top position.
                stall = 0;
                if (rules.burst_iterations > 0 && remaining() > 0)
                    intensify_burst(*bank_.best());
                continue;
            }
            if (++stall < rules.mixed_patience)
                continue;
            if (restarts_.mixed < rules.mixed_restarts && remaining() >= state_size())
            {
                diversify_burst();
                stall = 0;
            }
            else if (bank_.spatial().coverage() >= rules.coverage)
            {
                break;
            }
        }
        end_stage();
    }

    void SearchRun::intensive_search()
    {
        begin_stage(Stage::intensive, plan_.budget(Stage::intensive));
        const auto &rules = plan_.rules;

        std::vector<Solution> pool = bank_.elite().deep_solutions();
        for (const auto &e : bank_.characteristic().deep())
            pool.push_back(e.solution);
        std::stable_sort(pool.begin(), pool.end(), better);
        std::vector<Solution> candidates;
        for (auto &s : pool)
        {
            if (candidates.size() == rules.candidates)
                break;
            const bool dup = std::any_of(candidates.begin(), candidates.end(), [&](const Solution &c)
                                         { return c.position == s.position; });
            if (!dup)
                candidates.push_back(std::move(s));
        }

        const auto condense = mode_params(OperationMode::condense, baselines_).neighborhood;
        const double bound = static_cast<double>(condense.zones) * condense.radius;

        for (std::size_t i = 0; i < candidates.size(); ++i)
        {
            const Solution &seed = candidates[i];
            const std::size_t share =
                i + 1 == candidates.size() ? remaining() : remaining() / (candidates.size() - i);
            if (share == 0)
                continue;
            if (options_.observer.on_intensive_seed)
                options_.observer.on_intensive_seed(seed, bound);

            const TrialConstraints confine{seed.position, bound, {}};
            NeighborhoodParams neighborhood = condense;
            Solution cur = seed;
            Solution local_best = seed;
            std::size_t used = 0;
            bool checked = false;
            while (used < share)
            {
                auto ctx = context(share - used, baselines_);
                auto step = ts_step(cur, OperationMode::condense, ctx, neighborhood, confine);
                advance();
                if (step.stalled)
                    break;
                used += step.evaluations;
                cur = std::move(step.current);
                if (cur.value < local_best.value)
                    local_best = cur;

                if (!checked && used >= share / 2)
                {
                    checked = true;
                    if (local_best.value < seed.value && restarts_.intensive < rules.intensive_restarts)
                    {
                        ++restarts_.intensive;
                        cur = local_best;
                        neighborhood.radius *= 0.5;
                    }
                }
            }
        }
        end_stage();
    }

    void SearchRun::walk(Solution start, const NeighborhoodParams &neighborhood,
                         const TrialConstraints &constraints)
    {
        while (remaining() > 0)
        {
            auto ctx = context(remaining(), baselines_);
            auto step = ts_step(start, OperationMode::condense, ctx, neighborhood, constraints);
            advance();
            if (step.stalled)
                break;
            start = std::move(step.current);
        }
    }

    void SearchRun::final_search()
    {
        begin_stage(Stage::final, plan_.budget(Stage::final));
        const auto &rules = plan_.rules;

        auto elites = bank_.elite().deep_solutions();
        if (elites.size() > rules.candidates)
            elites.resize(rules.candidates);
        consensus_ = analyze_consensus(elites, *problem_, rules.similarity, rules.agreement);

        const std::size_t n = problem_->dimension();
        const std::size_t frozen = consensus_.frozen_count();
        const auto condense = mode_params(OperationMode::condense, baselines_).neighborhood;
        Solution start = elites.front();

        if (frozen > 0 && remaining() > 0)
        {
            Vector point = start.position;
            for (std::size_t j = 0; j < n; ++j)
                if (consensus_.frozen[j])
                    point[j] = consensus_.values[j];
            start = evaluate_positions({problem_->clip(point)}).front();
            advance();
        }
        if (frozen < n)
        {
            TrialConstraints constraints;
            if (frozen > 0)
                constraints.frozen = consensus_.frozen;
            walk(std::move(start), condense, constraints);
        }
        end_stage();
    }

    RunReport SearchRun::run()
    {
        wrapper_ = Wrapper::dhs;
        initial_search();
        exploratory_search();
        mixed_search();
        intensive_search();
        final_search();
        return report();
    }

    RunReport SearchRun::plain()
    {
        wrapper_ = Wrapper::plain;
        const std::size_t total = plan_.total();

        begin_stage(Stage::initial, state_size());
        std::vector<Vector> positions;
        for (std::size_t i = 0; i < state_size(); ++i)
        {
            Vector x(problem_->dimension());
            for (std::size_t j = 0; j < x.size(); ++j)
                x[j] = uniform(rng_, problem_->lower()[j], problem_->upper()[j]);
            positions.push_back(std::move(x));
        }
        reseed(evaluate_positions(positions));
        advance();
        end_stage();

        begin_stage(Stage::mixed, total - evaluations());
        while (remaining() > 0)
        {
            driver_step(OperationMode::normal, baselines_);
            advance();
        }
        end_stage();
        return report();
    }

    RunReport SearchRun::report() const
    {
        RunReport r;
        r.problem = problem_->name();
        r.dimension = problem_->dimension();
        r.driver = driver_;
        r.wrapper = wrapper_;
        r.seed = seed_;
        r.budget = plan_.total();
        r.evaluations = evaluations();
        if (const auto *best = bank_.best())
            r.best = *best;
        r.trace = trace_;
        r.stages = stages_;
        r.restarts = restarts_;
        r.consensus = consensus_;
        r.memory = bank_.snapshot();
        r.mode_log = mode_log_;
        return r;
    }

    RunReport run_dhs(const Problem &problem, DriverKind driver, const RunSettings &settings, std::size_t budget,
                      std::uint64_t seed, RunOptions options)
    {
        return SearchRun(problem, driver, settings, budget, seed, std::move(options)).run();
    }

    RunReport run_plain(const Problem &problem, DriverKind driver, const RunSettings &settings, std::size_t budget,
                        std::uint64_t seed, RunOptions options)
    {
        return SearchRun(problem, driver, settings, budget, seed, std::move(options)).plain();
    }
}
