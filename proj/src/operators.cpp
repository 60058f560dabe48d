#include "dhs/operators.hpp"

#include <algorithm>
#include <cmath>

namespace dhs
{
    std::string_view to_string(OperationMode mode)
    {
        switch (mode)
        {
        case OperationMode::normal:
            return "normal";
        case OperationMode::expand:
            return "expand";
        case OperationMode::condense:
            return "condense";
        }
        return "?";
    }

    MutationParams MutationParams::defaults(std::size_t n, double c)
    {
        const auto dn = static_cast<double>(n);
        MutationParams p;
        p.tau_prime = c / std::sqrt(2.0 * dn);
        p.tau = c / std::sqrt(2.0 * std::sqrt(dn));
        return p;
    }

    void OperatorSettings::validate() const
    {
        if (!(radius_fraction > 0.0))
            throw InvalidInput("operators.radius_fraction must be positive");
        if (zones == 0 || trials_per_zone == 0)
            throw InvalidInput("operators.zones and operators.trials_per_zone must be positive");
        if (!(expand_sigma > 1.0) || !(expand_radius > 1.0))
            throw InvalidInput("expand multipliers must exceed 1");
        if (!(condense_sigma > 0.0 && condense_sigma < 1.0) || !(condense_radius > 0.0 && condense_radius < 1.0))
            throw InvalidInput("condense multipliers must lie in (0, 1)");
        if (!(tau_scale >= 0.0))
            throw InvalidInput("operators.tau_scale must be non-negative");
        if (!(theta_min_fraction > 0.0))
            throw InvalidInput("operators.theta_min must be positive");
    }

    OperatorBaselines OperatorBaselines::boosted(double factor) const
    {
        OperatorBaselines b = *this;
        b.expand_sigma *= factor;
        b.expand_radius *= factor;
        return b;
    }

    OperatorBaselines resolve(const OperatorSettings &settings, const Problem &problem)
    {
        settings.validate();
        const auto mut = MutationParams::defaults(problem.dimension(), settings.tau_scale);
        OperatorBaselines b;
        b.radius = settings.radius_fraction * problem.mean_width();
        b.zones = settings.zones;
        b.trials_per_zone = settings.trials_per_zone;
        b.expand_sigma = settings.expand_sigma;
        b.condense_sigma = settings.condense_sigma;
        b.expand_radius = settings.expand_radius;
        b.condense_radius = settings.condense_radius;
        b.tau = mut.tau;
        b.tau_prime = mut.tau_prime;
        b.theta_min = settings.theta_min_fraction * problem.diagonal();
        return b;
    }

    ModeParams mode_params(OperationMode mode, const OperatorBaselines &baselines)
    {
        ModeParams p;
        p.mutation.tau = baselines.tau;
        p.mutation.tau_prime = baselines.tau_prime;
        p.mutation.theta_min = baselines.theta_min;
        p.neighborhood.zones = baselines.zones;
        p.neighborhood.trials_per_zone = baselines.trials_per_zone;

        switch (mode)
        {
        case OperationMode::normal:
            p.crossover.lambda_range = {0.0, 1.0};
            p.mutation.sigma_scale = 1.0;
            p.neighborhood.radius = baselines.radius;
            break;
        case OperationMode::expand:
            p.crossover.lambda_range = {-1.0, 1.0};
            p.mutation.sigma_scale = baselines.expand_sigma;
            p.neighborhood.radius = baselines.radius * baselines.expand_radius;
            break;
        case OperationMode::condense:
            p.crossover.lambda_range = {0.5, 1.0};
            p.mutation.sigma_scale = baselines.condense_sigma;
            p.neighborhood.radius = baselines.radius * baselines.condense_radius;
            break;
        }
        return p;
    }

    std::pair<Vector, Vector> arithmetic_crossover(std::span<const double> x1, std::span<const double> x2,
                                                   double lambda)
    {
        if (x1.size() != x2.size())
            throw InvalidInput("crossover: parents differ in length");
        Vector y1(x1.size());
        Vector y2(x1.size());
        for (std::size_t i = 0; i < x1.size(); ++i)
        {
            y1[i] = lambda * x1[i] + (1.0 - lambda) * x2[i];
            y2[i] = (1.0 - lambda) * x1[i] + lambda * x2[i];
        }
        return {std::move(y1), std::move(y2)};
    }

    double sample_lambda(const CrossoverParams &params, Rng &rng)
    {
        return uniform(rng, params.lambda_range.lo, params.lambda_range.hi);
    }

    MutationResult self_adaptive_mutation(std::span<const double> x, std::span<const double> sigma,
                                          const MutationParams &params, Rng &rng)
    {
        if (x.size() != sigma.size())
            throw InvalidInput("mutation: x and sigma differ in length");
        for (double s : sigma)
            if (!(s > 0.0))
                throw InvalidInput("mutation: step sizes must be positive");

        MutationResult out{Vector(x.size()), Vector(x.size())};
        const double global = standard_normal(rng);
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            const double h = standard_normal(rng);
            const double k = standard_normal(rng);
            const double theta =
                params.sigma_scale * sigma[i] * std::exp(params.tau_prime * global + params.tau * h);
            out.step_sizes[i] = std::max(theta, params.theta_min);
            out.child[i] = x[i] + out.step_sizes[i] * k;
        }
        return out;
    }

    std::size_t zone_of(double d, double radius, std::size_t zones)
    {
        for (std::size_t i = 1; i <= zones; ++i)
        {
            const double lo = static_cast<double>(i - 1) * radius;
            const double hi = static_cast<double>(i) * radius;
            if (lo < d && d <= hi)
                return i;
        }
        return 0;
    }

    NeighborhoodTrials neighborhood_trials(std::span<const double> x, const NeighborhoodParams &params,
                                           const Problem &problem, const RecentnessMemory &tabu,
                                           double tabu_radius, Rng &rng, const TrialConstraints &constraints)
    {
        if (!(params.radius > 0.0) || params.zones == 0)
            throw InvalidInput("neighborhood: radius must be positive and zones at least one");
        const std::size_t n = x.size();
        const bool masked = !constraints.frozen.empty();
        if (masked && constraints.frozen.size() != n)
            throw InvalidInput("neighborhood: frozen mask has wrong length");

        std::vector<std::size_t> free;
        for (std::size_t j = 0; j < n; ++j)
            if (!masked || !constraints.frozen[j])
                free.push_back(j);

        NeighborhoodTrials out;
        if (free.empty())
        {
            out.dropped = params.zones * params.trials_per_zone;
            return out;
        }

        Vector direction(n, 0.0);
        for (std::size_t zone = 1; zone <= params.zones; ++zone)
        {
            for (std::size_t t = 0; t < params.trials_per_zone; ++t)
            {
                bool placed = false;
                for (std::size_t attempt = 0; attempt <= trial_retries && !placed; ++attempt)
                {
                    double norm2 = 0.0;
                    for (std::size_t j : free)
                    {
                        direction[j] = standard_normal(rng);
                        norm2 += direction[j] * direction[j];
                    }
                    if (norm2 == 0.0)
                        continue;
                    // radius in ((zone-1) r, zone r]
                    const double rad = params.radius * (static_cast<double>(zone) - uniform(rng, 0.0, 1.0));
                    const double scale = rad / std::sqrt(norm2);

                    Vector p(x.begin(), x.end());
                    for (std::size_t j : free)
                        p[j] += scale * direction[j];
                    p = problem.clip(p);

                    if (zone_of(distance(p, x), params.radius, params.zones) != zone)
                        continue;
                    if (constraints.anchor && distance(p, *constraints.anchor) > constraints.anchor_radius)
                        continue;
                    if (tabu.is_tabu(p, tabu_radius))
                        continue;

                    out.points.push_back(std::move(p));
                    out.zones.push_back(zone);
                    placed = true;
                }
                if (!placed)
                    ++out.dropped;
            }
        }
        return out;
    }
}
