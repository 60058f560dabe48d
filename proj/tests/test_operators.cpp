#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace dhs;
using namespace dhs::testing;

TEST_CASE("crossover hand examples")
{
    auto [a1, a2] = arithmetic_crossover(Vector{0, 0}, Vector{2, 4}, 0.5);
    CHECK(a1 == Vector{1, 2});
    CHECK(a2 == Vector{1, 2});
    auto [b1, b2] = arithmetic_crossover(Vector{0, 0}, Vector{2, 4}, 0.25);
    CHECK(b1 == Vector{1.5, 3});
    CHECK(b2 == Vector{0.5, 1});
    const Vector x1{3, -1, 7}, x2{-2, 5, 0.5};
    auto [c1, c2] = arithmetic_crossover(x1, x2, 1.0);
    CHECK(c1 == x1);
    CHECK(c2 == x2);
    CHECK_THROWS_AS(arithmetic_crossover(Vector{1}, Vector{1, 2}, 0.5), InvalidInput);
}

TEST_CASE("crossover conserves the parent sum")
{
    Rng rng(1);
    for (int i = 0; i < 2000; ++i)
    {
        const std::size_t n = 1 + uniform_index(rng, 10);
        const auto x1 = random_vector(rng, n, -100, 100);
        const auto x2 = random_vector(rng, n, -100, 100);
        const double lambda = uniform(rng, -1.0, 1.0);
        auto [y1, y2] = arithmetic_crossover(x1, x2, lambda);
        for (std::size_t j = 0; j < n; ++j)
            CHECK(std::abs((y1[j] + y2[j]) - (x1[j] + x2[j])) <= 1e-12 * std::max(1.0, std::abs(x1[j] + x2[j])));
    }
}

TEST_CASE("crossover hull in normal mode, escapes in expand mode")
{
    Rng rng(2);
    const auto normal = mode_params(OperationMode::normal, OperatorBaselines{}).crossover;
    for (int i = 0; i < 1000; ++i)
    {
        const auto x1 = random_vector(rng, 4, -1, 1);
        const auto x2 = random_vector(rng, 4, -1, 1);
        auto [y1, y2] = arithmetic_crossover(x1, x2, sample_lambda(normal, rng));
        for (std::size_t j = 0; j < 4; ++j)
        {
            const double lo = std::min(x1[j], x2[j]);
            const double hi = std::max(x1[j], x2[j]);
            CHECK(y1[j] >= lo - 1e-15);
            CHECK(y1[j] <= hi + 1e-15);
            CHECK(y2[j] >= lo - 1e-15);
            CHECK(y2[j] <= hi + 1e-15);
        }
    }
    const auto expand = mode_params(OperationMode::expand, OperatorBaselines{}).crossover;
    int outside = 0;
    for (int i = 0; i < 1000; ++i)
    {
        const auto x1 = random_vector(rng, 4, -1, 1);
        auto x2 = random_vector(rng, 4, -1, 1);
        auto [y1, y2] = arithmetic_crossover(x1, x2, sample_lambda(expand, rng));
        for (std::size_t j = 0; j < 4; ++j)
            if (y1[j] < std::min(x1[j], x2[j]) || y1[j] > std::max(x1[j], x2[j]))
                ++outside;
    }
    CHECK(outside > 0);
}

TEST_CASE("lambda stays in the mode range")
{
    Rng rng(3);
    const OperatorBaselines b;
    for (auto [mode, lo, hi] : {std::tuple{OperationMode::normal, 0.0, 1.0}, std::tuple{OperationMode::expand, -1.0, 1.0},
                                std::tuple{OperationMode::condense, 0.5, 1.0}})
    {
        const auto params = mode_params(mode, b).crossover;
        CHECK(params.lambda_range == Interval{lo, hi});
        for (int i = 0; i < 500; ++i)
        {
            const double l = sample_lambda(params, rng);
            CHECK(l >= lo);
            CHECK(l <= hi);
        }
    }
}

TEST_CASE("mode table")
{
    OperatorBaselines b;
    b.radius = 0.7;
    const auto n = mode_params(OperationMode::normal, b);
    const auto e = mode_params(OperationMode::expand, b);
    const auto c = mode_params(OperationMode::condense, b);
    CHECK(n.mutation.sigma_scale == 1.0);
    CHECK(e.mutation.sigma_scale == 2.0);
    CHECK(c.mutation.sigma_scale == 0.5);
    CHECK(n.neighborhood.radius == 0.7);
    CHECK(e.neighborhood.radius == doctest::Approx(1.4));
    CHECK(c.neighborhood.radius == doctest::Approx(0.35));
    CHECK(e.neighborhood.radius > n.neighborhood.radius);
    CHECK(n.neighborhood.radius > c.neighborhood.radius);
    CHECK(to_string(OperationMode::condense) == "condense");
}

TEST_CASE("mode ordering for random baselines")
{
    Rng rng(31);
    for (int i = 0; i < 200; ++i)
    {
        OperatorSettings s;
        s.radius_fraction = uniform(rng, 0.001, 1.0);
        s.expand_radius = uniform(rng, 1.01, 5.0);
        s.condense_radius = uniform(rng, 0.01, 0.99);
        const auto b = resolve(s, box(3, -1.0, 1.0));
        CHECK(mode_params(OperationMode::expand, b).neighborhood.radius > b.radius);
        CHECK(mode_params(OperationMode::condense, b).neighborhood.radius < b.radius);
    }
}

TEST_CASE("operator settings validation")
{
    OperatorSettings s;
    CHECK_NOTHROW(s.validate());
    s.expand_sigma = 1.0;
    CHECK_THROWS_AS(s.validate(), InvalidInput);
    s = {};
    s.condense_radius = 1.0;
    CHECK_THROWS_AS(s.validate(), InvalidInput);
}

TEST_CASE("default tau values")
{
    const auto p = MutationParams::defaults(16);
    CHECK(p.tau_prime == doctest::Approx(1.0 / std::sqrt(32.0)));
    CHECK(p.tau == doctest::Approx(1.0 / std::sqrt(8.0)));
}

TEST_CASE("mutation with zero learning rates keeps sigma")
{
    Rng rng(4);
    MutationParams p;
    p.tau = 0.0;
    p.tau_prime = 0.0;
    p.sigma_scale = 1.0;
    p.theta_min = 1e-300;
    const Vector sigma{0.3, 1.7, 2.5e-3};
    const auto r = self_adaptive_mutation(Vector{1, 2, 3}, sigma, p, rng);
    CHECK(r.step_sizes == sigma);
}

TEST_CASE("mutation is deterministic under a seed")
{
    const auto draw = []
    {
        Rng rng(77);
        return self_adaptive_mutation(Vector{0.5, -0.5}, Vector{0.1, 0.2}, MutationParams::defaults(2), rng);
    };
    const auto a = draw();
    const auto b = draw();
    CHECK(a.child == b.child);
    CHECK(a.step_sizes == b.step_sizes);
}

TEST_CASE("mutation matches a replay of the draw order")
{
    Rng rng(5);
    Rng replay(5);
    auto p = MutationParams::defaults(3);
    p.sigma_scale = 2.0;
    const Vector x{1, 2, 3}, sigma{0.5, 0.25, 1.0};
    const auto r = self_adaptive_mutation(x, sigma, p, rng);
    const double g = standard_normal(replay);
    for (std::size_t i = 0; i < 3; ++i)
    {
        const double h = standard_normal(replay);
        const double k = standard_normal(replay);
        const double theta = 2.0 * sigma[i] * std::exp(p.tau_prime * g + p.tau * h);
        CHECK(r.step_sizes[i] == theta);
        CHECK(r.child[i] == x[i] + theta * k);
    }
}

TEST_CASE("mutation spread matches sigma")
{
    Rng rng(6);
    MutationParams p;
    p.tau = p.tau_prime = 0.0;
    double s0 = 0.0, s1 = 0.0;
    const int samples = 100000;
    for (int i = 0; i < samples; ++i)
    {
        const auto r = self_adaptive_mutation(Vector{0, 0}, Vector{1, 1}, p, rng);
        s0 += r.child[0] * r.child[0];
        s1 += r.child[1] * r.child[1];
    }
    CHECK(std::sqrt(s0 / samples) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(std::sqrt(s1 / samples) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("mutation floor keeps theta positive")
{
    Rng rng(7);
    MutationParams p = MutationParams::defaults(4, 30.0);
    p.theta_min = 1e-9;
    for (int i = 0; i < 1000; ++i)
    {
        const auto r = self_adaptive_mutation(Vector(4, 0.0), Vector(4, 1e-12), p, rng);
        for (double t : r.step_sizes)
        {
            CHECK(t > 0.0);
            CHECK(t >= 1e-9);
        }
    }
    CHECK_THROWS_AS(self_adaptive_mutation(Vector{0}, Vector{0.0}, p, rng), InvalidInput);
    CHECK_THROWS_AS(self_adaptive_mutation(Vector{0, 1}, Vector{1.0}, p, rng), InvalidInput);
}

TEST_CASE("zone_of partitions the punctured ball")
{
    CHECK(zone_of(0.0, 1.0, 3) == 0);
    CHECK(zone_of(1e-300, 1.0, 3) == 1);
    CHECK(zone_of(1.0, 1.0, 3) == 1);
    CHECK(zone_of(std::nextafter(1.0, 2.0), 1.0, 3) == 2);
    CHECK(zone_of(3.0, 1.0, 3) == 3);
    CHECK(zone_of(std::nextafter(3.0, 4.0), 1.0, 3) == 0);
}

TEST_CASE("trials from the origin sit in their annuli")
{
    Rng rng(8);
    const auto p = box(4, -10.0, 10.0);
    RecentnessMemory tabu(10);
    NeighborhoodParams params{1.0, 3, 5};
    const Vector x(4, 0.0);
    const auto t = neighborhood_trials(x, params, p, tabu, 1e-3, rng);
    CHECK_FALSE(t.exhausted());
    REQUIRE(t.points.size() == 15);
    std::vector<int> per_zone(4, 0);
    for (std::size_t i = 0; i < t.points.size(); ++i)
    {
        const double d = distance(t.points[i], x);
        const auto zone = t.zones[i];
        CHECK(static_cast<double>(zone - 1) < d);
        CHECK(d <= static_cast<double>(zone));
        ++per_zone[zone];
    }
    CHECK(per_zone[1] == 5);
    CHECK(per_zone[2] == 5);
    CHECK(per_zone[3] == 5);
}

TEST_CASE("single zone stays in the ball and never returns x")
{
    Rng rng(9);
    const auto p = box(3, -1.0, 1.0);
    RecentnessMemory tabu(10);
    const Vector x{0.1, -0.2, 0.3};
    for (int i = 0; i < 100; ++i)
    {
        const auto t = neighborhood_trials(x, NeighborhoodParams{0.4, 1, 4}, p, tabu, 1e-9, rng);
        for (const auto &pt : t.points)
        {
            const double d = distance(pt, x);
            CHECK(d > 0.0);
            CHECK(d <= 0.4);
        }
    }
}

TEST_CASE("everything tabu exhausts the sampler")
{
    Rng rng(10);
    const auto p = box(2, -5.0, 5.0);
    RecentnessMemory tabu(10);
    const Vector x{0, 0};
    tabu.push(x);
    const auto t = neighborhood_trials(x, NeighborhoodParams{0.5, 3, 4}, p, tabu, 1.5, rng);
    CHECK(t.points.empty());
    CHECK(t.exhausted());
    CHECK(t.dropped == 12);
}

TEST_CASE("clipping never leaves a trial outside its zone")
{
    Rng rng(11);
    const auto p = box(2, 0.0, 1.0);
    RecentnessMemory tabu(1);
    for (int i = 0; i < 300; ++i)
    {
        const Vector corner{uniform(rng, 0.0, 0.05), uniform(rng, 0.0, 0.05)};
        const auto t = neighborhood_trials(corner, NeighborhoodParams{0.2, 4, 3}, p, tabu, 1e-9, rng);
        for (std::size_t k = 0; k < t.points.size(); ++k)
        {
            CHECK(p.contains(t.points[k]));
            CHECK(zone_of(distance(t.points[k], corner), 0.2, 4) == t.zones[k]);
        }
        CHECK(t.points.size() + t.dropped == 12);
    }
}

TEST_CASE("anchor and frozen constraints")
{
    Rng rng(12);
    const auto p = box(3, -5.0, 5.0);
    RecentnessMemory tabu(1);
    const Vector seed{0, 0, 0};
    const Vector x{0.5, 0, 0};
    TrialConstraints confine{seed, 1.0, {}};
    for (int i = 0; i < 100; ++i)
        for (const auto &pt : neighborhood_trials(x, NeighborhoodParams{0.3, 2, 3}, p, tabu, 1e-9, rng, confine).points)
            CHECK(distance(pt, seed) <= 1.0);

    TrialConstraints frozen{std::nullopt, 0.0, {true, false, true}};
    for (const auto &pt : neighborhood_trials(x, NeighborhoodParams{0.3, 3, 4}, p, tabu, 1e-9, rng, frozen).points)
    {
        CHECK(pt[0] == x[0]);
        CHECK(pt[2] == x[2]);
        CHECK(pt[1] != x[1]);
    }
    TrialConstraints all{std::nullopt, 0.0, {true, true, true}};
    CHECK(neighborhood_trials(x, NeighborhoodParams{0.3, 3, 4}, p, tabu, 1e-9, rng, all).exhausted());
}

TEST_CASE("bad neighborhood parameters are rejected")
{
    Rng rng(13);
    const auto p = box(2, -1.0, 1.0);
    RecentnessMemory tabu(1);
    CHECK_THROWS_AS(neighborhood_trials(Vector{0, 0}, NeighborhoodParams{0.0, 3, 4}, p, tabu, 0.1, rng), InvalidInput);
    CHECK_THROWS_AS(neighborhood_trials(Vector{0, 0}, NeighborhoodParams{1.0, 0, 4}, p, tabu, 0.1, rng), InvalidInput);
}
