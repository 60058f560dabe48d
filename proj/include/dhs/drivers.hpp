#pragma once

#include "dhs/memory.hpp"
#include "dhs/operators.hpp"
#include "dhs/problems.hpp"

#include <functional>
#include <optional>
#include <string_view>

namespace dhs
{
    enum class DriverKind : std::uint8_t
    {
        ga,
        es,
        ts
    };

    std::string_view to_string(DriverKind kind);
    DriverKind parse_driver(std::string_view name);

    struct GaParams
    {
        std::size_t mu = 20;
        std::size_t offspring = 20;
        double mutation_scale = 0.1;         // sd as a fraction of coordinate width
        std::optional<double> mutation_rate; // unset: 1/n

        bool operator==(const GaParams &) const = default;
    };

    struct EsParams
    {
        std::size_t mu = 5;
        std::size_t lambda = 25;
        bool plus = true;
        double sigma0 = 0.2;  // initial step size as a fraction of coordinate width

        bool operator==(const EsParams &) const = default;
    };

    struct DriverParams
    {
        GaParams ga;
        EsParams es;

        void validate() const;
        bool operator==(const DriverParams &) const = default;
    };

    enum class OperatorKind : std::uint8_t
    {
        crossover,
        mutation,
        neighborhood
    };

    std::string_view to_string(OperatorKind kind);

    /// Everything a step function touches besides its own state.
    struct StepContext
    {
        const Problem &problem;
        Evaluator &evaluator;
        MemoryBank &bank;
        Rng &rng;
        const DriverParams &params;
        OperatorBaselines operators;

        std::size_t budget = std::numeric_limits<std::size_t>::max();
        std::function<void(const Solution &, std::size_t evaluation)> on_evaluated;  // 1-based index
        std::function<void(OperatorKind, OperationMode)> on_operator;

        /// Evaluates in order, records each result into the bank, and charges
        /// the budget. More positions than budget is a ContractViolation.
        std::vector<Solution> evaluate(std::span<const Vector> positions);

        void note(OperatorKind kind, OperationMode mode) const
        {
            if (on_operator)
                on_operator(kind, mode);
        }
    };

    struct Population
    {
        std::vector<Solution> members;
        std::vector<Vector> strategies;  // ES step sizes, parallel to members

        std::size_t size() const noexcept { return members.size(); }
        const Solution &best() const;
    };

    std::vector<Vector> initial_strategies(const Problem &problem, const EsParams &params, std::size_t count);

    /// Population from evaluated solutions; ES members get sigma0 step sizes.
    Population make_population(std::vector<Solution> members, DriverKind kind, const Problem &problem,
                               const DriverParams &params);

    /// Stable value-ordered truncation of a union, skipping duplicate positions.
    Population merge_truncate(const Population &a, const Population &b, std::size_t mu);

    struct PopulationStep
    {
        Population population;
        std::size_t evaluations = 0;
    };

    PopulationStep ga_step(const Population &pop, OperationMode mode, StepContext &ctx);
    PopulationStep es_step(const Population &pop, OperationMode mode, StepContext &ctx);

    struct TsStep
    {
        Solution current;
        std::size_t evaluations = 0;
        std::size_t dropped = 0;
        bool stalled = false;
    };

    TsStep ts_step(const Solution &current, OperationMode mode, StepContext &ctx,
                   const NeighborhoodParams &neighborhood, const TrialConstraints &constraints = {});

    /// Uses the mode's default neighborhood.
    TsStep ts_step(const Solution &current, OperationMode mode, StepContext &ctx);
}
