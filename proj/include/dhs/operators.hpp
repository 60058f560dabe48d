#pragma once

#include "dhs/core.hpp"
#include "dhs/memory.hpp"
#include "dhs/problems.hpp"

#include <optional>
#include <string_view>
#include <utility>

namespace dhs
{
    enum class OperationMode : std::uint8_t
    {
        normal,
        expand,
        condense
    };

    std::string_view to_string(OperationMode mode);

    struct Interval
    {
        double lo;
        double hi;

        bool operator==(const Interval &) const = default;
    };

    struct CrossoverParams
    {
        Interval lambda_range{0.0, 1.0};
    };

    struct MutationParams
    {
        double tau = 1.0;
        double tau_prime = 1.0;
        double sigma_scale = 1.0;
        double theta_min = 1e-12;

        /// tau' = c / sqrt(2n), tau = c / sqrt(2 sqrt(n)).
        static MutationParams defaults(std::size_t n, double c = 1.0);
    };

    struct NeighborhoodParams
    {
        double radius = 1.0;
        std::size_t zones = 3;
        std::size_t trials_per_zone = 4;
    };

    /// Problem-independent operator knobs, as they appear in configuration.
    struct OperatorSettings
    {
        double radius_fraction = 0.1;  // r* as a fraction of the mean domain width
        std::size_t zones = 3;
        std::size_t trials_per_zone = 4;
        double expand_sigma = 2.0;
        double condense_sigma = 0.5;
        double expand_radius = 2.0;
        double condense_radius = 0.5;
        double tau_scale = 1.0;
        double theta_min_fraction = 1e-8;  // of the domain diagonal

        void validate() const;
        bool operator==(const OperatorSettings &) const = default;
    };

    /// Normal-mode baselines resolved against a problem, plus the mode multipliers.
    struct OperatorBaselines
    {
        double radius = 1.0;  // r*
        std::size_t zones = 3;
        std::size_t trials_per_zone = 4;
        double expand_sigma = 2.0;
        double condense_sigma = 0.5;
        double expand_radius = 2.0;
        double condense_radius = 0.5;
        double tau = 1.0;
        double tau_prime = 1.0;
        double theta_min = 1e-12;

        /// Scales both expand multipliers by `factor` (restart adaptation).
        OperatorBaselines boosted(double factor) const;
    };

    OperatorBaselines resolve(const OperatorSettings &settings, const Problem &problem);

    struct ModeParams
    {
        CrossoverParams crossover;
        MutationParams mutation;
        NeighborhoodParams neighborhood;
    };

    ModeParams mode_params(OperationMode mode, const OperatorBaselines &baselines);

    /// y1 = l x1 + (1-l) x2, y2 = (1-l) x1 + l x2. Unclipped.
    std::pair<Vector, Vector> arithmetic_crossover(std::span<const double> x1, std::span<const double> x2,
                                                   double lambda);

    double sample_lambda(const CrossoverParams &params, Rng &rng);

    struct MutationResult
    {
        Vector child;
        Vector step_sizes;  // theta
    };

    /// Draw order: one global normal, then (h_i, k_i) per component.
    MutationResult self_adaptive_mutation(std::span<const double> x, std::span<const double> sigma,
                                          const MutationParams &params, Rng &rng);

    /// Extra restrictions on emitted trial points.
    struct TrialConstraints
    {
        // Points must stay within anchor_radius of anchor.
        std::optional<Vector> anchor;
        double anchor_radius = 0.0;
        // Coordinates flagged true are never perturbed. Empty means all free.
        std::vector<bool> frozen;
    };

    struct NeighborhoodTrials
    {
        std::vector<Vector> points;
        std::vector<std::size_t> zones;  // 1-based zone of each point
        std::size_t dropped = 0;

        bool exhausted() const noexcept { return dropped > 0; }
    };

    inline constexpr std::size_t trial_retries = 20;

    /// 1-based zone i with (i-1) r < d <= i r, or 0 when d lies outside every zone.
    std::size_t zone_of(double d, double radius, std::size_t zones);

    NeighborhoodTrials neighborhood_trials(std::span<const double> x, const NeighborhoodParams &params,
                                           const Problem &problem, const RecentnessMemory &tabu,
                                           double tabu_radius, Rng &rng, const TrialConstraints &constraints = {});
}
