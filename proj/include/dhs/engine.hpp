#pragma once

#include "dhs/drivers.hpp"
#include "dhs/memory.hpp"
#include "dhs/operators.hpp"
#include "dhs/problems.hpp"

#include <array>
#include <optional>
#include <string_view>

namespace dhs
{
    enum class Stage : std::uint8_t
    {
        initial,
        exploratory,
        mixed,
        intensive,
        final
    };

    inline constexpr std::size_t stage_count = 5;
    inline constexpr std::array<Stage, stage_count> all_stages{Stage::initial, Stage::exploratory, Stage::mixed,
                                                              Stage::intensive, Stage::final};

    std::string_view to_string(Stage stage);
    Stage parse_stage(std::string_view label);

    enum class BurstTag : std::uint8_t
    {
        none,
        intensify,
        diversify
    };

    std::string_view to_string(BurstTag tag);

    enum class Wrapper : std::uint8_t
    {
        plain,
        dhs
    };

    std::string_view to_string(Wrapper wrapper);
    Wrapper parse_wrapper(std::string_view name);

    /// Stage schedule knobs as configured; budgets are fractions of the run total.
    struct StageSettings
    {
        std::array<double, stage_count> fractions{0.05, 0.20, 0.45, 0.20, 0.10};
        std::size_t explore_patience = 20;    // T_e
        std::size_t mixed_patience = 50;      // T_m
        std::size_t explore_restarts = 3;     // R_e
        std::size_t mixed_restarts = 5;       // R_m
        std::size_t intensive_restarts = 5;   // R_i
        double coverage = 0.6;                // c*
        std::optional<std::size_t> gentry;    // G; unset: min(10 x cells, 1000)
        std::size_t candidates = 5;           // K
        double similarity = 0.01;             // delta, fraction of coordinate width
        double agreement = 0.8;               // a*
        std::size_t burst_iterations = 10;    // I_b
        double restart_growth = 1.5;

        bool operator==(const StageSettings &) const = default;
    };

    struct StagePlan
    {
        std::array<std::size_t, stage_count> budgets{};
        std::size_t gentry = 0;
        StageSettings rules;

        std::size_t budget(Stage s) const { return budgets[static_cast<std::size_t>(s)]; }
        std::size_t total() const;
    };

    /// Splits `total_budget` by the configured fractions; the final stage takes the rounding remainder.
    StagePlan make_plan(const StageSettings &settings, std::size_t total_budget, std::size_t cell_count);

    struct RunSettings
    {
        MemoryConfig memory;
        StageSettings stages;
        OperatorSettings operators;
        DriverParams drivers;

        bool operator==(const RunSettings &) const = default;
    };

    /// Throws InvalidInput naming the first violated rule.
    void validate_plan(const StagePlan &plan, const RunSettings &settings, DriverKind driver);

    struct TraceRow
    {
        std::size_t evaluation;
        double best_value;
        Stage stage;

        bool operator==(const TraceRow &) const = default;
    };

    struct StageRecord
    {
        Stage stage;
        std::size_t budget = 0;            // nominal plus carried-over budget
        std::size_t start_evaluation = 0;
        std::size_t end_evaluation = 0;
        std::size_t start_iteration = 0;
        std::size_t end_iteration = 0;

        std::size_t used() const { return end_evaluation - start_evaluation; }
        bool operator==(const StageRecord &) const = default;
    };

    struct RestartCounts
    {
        std::size_t exploratory = 0;
        std::size_t mixed = 0;  // diversification bursts
        std::size_t intensive = 0;
        std::size_t intensify_bursts = 0;

        std::size_t total() const { return exploratory + mixed + intensive; }
        bool operator==(const RestartCounts &) const = default;
    };

    struct ModeEvent
    {
        Stage stage;
        BurstTag tag;
        OperatorKind op;
        OperationMode mode;

        bool operator==(const ModeEvent &) const = default;
    };

    struct Consensus
    {
        std::vector<bool> frozen;
        Vector values;  // meaningful where frozen

        std::size_t frozen_count() const;
        bool operator==(const Consensus &) const = default;
    };

    /// Per coordinate, the largest group of elites lying within
    /// similarity x width of one anchor elite; frozen at the group mean when
    /// the group holds at least `agreement` of the elites.
    Consensus analyze_consensus(std::span<const Solution> elites, const Problem &problem, double similarity,
                                double agreement);

    struct RunReport
    {
        std::string problem;
        std::size_t dimension = 0;
        DriverKind driver = DriverKind::es;
        Wrapper wrapper = Wrapper::dhs;
        std::uint64_t seed = 0;
        std::size_t budget = 0;
        std::size_t evaluations = 0;
        Solution best;
        std::vector<TraceRow> trace;
        std::vector<StageRecord> stages;
        RestartCounts restarts;
        Consensus consensus;
        MemorySnapshot memory;
        std::vector<ModeEvent> mode_log;

        bool operator==(const RunReport &) const = default;
    };

    /// Optional instrumentation hooks.
    struct RunObserver
    {
        std::function<void(Stage, BurstTag, const Solution &)> on_evaluation;
        std::function<void(const Solution &trigger, std::span<const Solution> start)> on_intensify_burst;
        std::function<void(const Solution &seed, double bound)> on_intensive_seed;
    };

    struct RunOptions
    {
        Execution execution = Execution::serial;
        bool record_mode_log = false;
        RunObserver observer;
        CharacteristicFeature feature;
    };

    /// Run state for one seeded DHS (or plain) run. Stage methods must be
    /// called in order; run() and plain() do that.
    class SearchRun
    {
    public:
        SearchRun(const Problem &problem, DriverKind driver, const RunSettings &settings, std::size_t budget,
                  std::uint64_t seed, RunOptions options = {});

        void initial_search();
        void exploratory_search();
        void mixed_search();
        void intensive_search();
        void final_search();

        RunReport run();
        RunReport plain();
        RunReport report() const;

        const StagePlan &plan() const noexcept { return plan_; }
        const MemoryBank &bank() const noexcept { return bank_; }
        const Population &population() const noexcept { return population_; }
        const Solution &current() const noexcept { return current_; }
        const std::vector<Solution> &gentry() const noexcept { return gentry_; }
        const RestartCounts &restarts() const noexcept { return restarts_; }
        const std::vector<StageRecord> &stages() const noexcept { return stages_; }
        const std::vector<TraceRow> &trace() const noexcept { return trace_; }
        const Consensus &consensus() const noexcept { return consensus_; }
        std::size_t evaluations() const noexcept { return evaluator_.count(); }
        const OperatorBaselines &baselines() const noexcept { return baselines_; }

    private:
        void begin_stage(Stage stage, std::size_t nominal);
        void end_stage();
        std::size_t remaining() const;
        void advance();

        StepContext context(std::size_t budget, const OperatorBaselines &ops);
        std::size_t state_size() const;
        std::size_t driver_step(OperationMode mode, const OperatorBaselines &ops);
        std::vector<Solution> evaluate_positions(const std::vector<Vector> &positions);
        std::vector<Vector> sample_least_visited(std::size_t count);
        void reseed(std::vector<Solution> solutions);
        double incumbent_value() const;

        void intensify_burst(const Solution &trigger);
        void diversify_burst();
        PopulationStep step_population(const Population &pop, OperationMode mode, const OperatorBaselines &ops);
        void walk(Solution start, const NeighborhoodParams &neighborhood, const TrialConstraints &constraints);

        const Problem *problem_;
        DriverKind driver_;
        RunSettings settings_;
        StagePlan plan_;
        std::uint64_t seed_;
        RunOptions options_;
        Wrapper wrapper_ = Wrapper::dhs;

        Rng rng_;
        Evaluator evaluator_;
        MemoryBank bank_;
        OperatorBaselines baselines_;

        Population population_;
        Solution current_;
        std::vector<Solution> gentry_;

        Stage stage_ = Stage::initial;
        BurstTag tag_ = BurstTag::none;
        std::size_t carry_ = 0;
        double best_value_;

        std::vector<TraceRow> trace_;
        std::vector<StageRecord> stages_;
        RestartCounts restarts_;
        Consensus consensus_;
        std::vector<ModeEvent> mode_log_;
    };

    RunReport run_dhs(const Problem &problem, DriverKind driver, const RunSettings &settings, std::size_t budget,
                      std::uint64_t seed, RunOptions options = {});

    /// Driver in normal mode for the whole budget; memories record but never steer.
    RunReport run_plain(const Problem &problem, DriverKind driver, const RunSettings &settings, std::size_t budget,
                        std::uint64_t seed, RunOptions options = {});
}
