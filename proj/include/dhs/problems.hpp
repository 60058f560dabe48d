#pragma once

#include "dhs/core.hpp"
#include "dhs/parallel.hpp"

#include <functional>
#include <optional>
#include <string_view>

namespace dhs
{
    /// Box-bounded black-box objective. Immutable after construction; safe to
    /// share across concurrent runs.
    class Problem
    {
    public:
        using Objective = std::function<double(std::span<const double>)>;

        Problem(std::string name, Vector lower, Vector upper, Objective objective,
                std::optional<double> known_optimum = std::nullopt,
                std::optional<Vector> known_optimizer = std::nullopt);

        const std::string &name() const noexcept { return name_; }
        std::size_t dimension() const noexcept { return lower_.size(); }
        const Vector &lower() const noexcept { return lower_; }
        const Vector &upper() const noexcept { return upper_; }
        const std::optional<double> &known_optimum() const noexcept { return known_optimum_; }
        const std::optional<Vector> &known_optimizer() const noexcept { return known_optimizer_; }

        /// Throws InvalidInput on a length mismatch.
        double operator()(std::span<const double> position) const;

        Vector clip(std::span<const double> position) const;
        bool contains(std::span<const double> position) const;

        double width(std::size_t i) const { return upper_[i] - lower_[i]; }
        double mean_width() const;
        double diagonal() const;

    private:
        std::string name_;
        Vector lower_;
        Vector upper_;
        Objective objective_;
        std::optional<double> known_optimum_;
        std::optional<Vector> known_optimizer_;
    };

    /// Counts objective evaluations for one run. The counter belongs to the
    /// run, never to the Problem.
    class Evaluator
    {
    public:
        explicit Evaluator(const Problem &problem, Execution execution = Execution::serial)
            : problem_(&problem), execution_(execution)
        {
        }

        Solution evaluate(std::span<const double> position, std::size_t iteration = 0);

        /// Results keep the order of `positions`.
        std::vector<Solution> evaluate_all(std::span<const Vector> positions, std::size_t iteration = 0);

        std::size_t count() const noexcept { return count_; }
        const Problem &problem() const noexcept { return *problem_; }

    private:
        const Problem *problem_;
        Execution execution_;
        std::size_t count_ = 0;
    };

    struct BenchmarkInfo
    {
        std::string name;
        double lower;
        double upper;
        std::string formula;
    };

    const std::vector<BenchmarkInfo> &benchmark_catalog();

    /// Throws LookupError for unknown names and InvalidInput for n < 2.
    Problem make_benchmark(std::string_view name, std::size_t dimension);

    std::vector<Problem> benchmark_registry(std::size_t dimension = 2);
}
