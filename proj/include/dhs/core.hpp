#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dhs
{
    using Vector = std::vector<double>;
    using Rng = std::mt19937_64;

    /// Input that violates an operation's preconditions (wrong length, bad bounds).
    class InvalidInput : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    /// Unknown benchmark or cell name.
    class LookupError : public std::out_of_range
    {
    public:
        using std::out_of_range::out_of_range;
    };

    /// Caller broke a sequencing rule (e.g. ticking a memory twice in one iteration).
    class ContractViolation : public std::logic_error
    {
    public:
        using std::logic_error::logic_error;
    };

    struct Solution
    {
        Vector position;
        double value = std::numeric_limits<double>::infinity();
        std::size_t birth_iteration = 0;

        bool operator==(const Solution &) const = default;
    };

    inline double standard_normal(Rng &rng)
    {
        return std::normal_distribution<double>{0.0, 1.0}(rng);
    }

    inline double uniform(Rng &rng, double lo, double hi)
    {
        return std::uniform_real_distribution<double>{lo, hi}(rng);
    }

    inline std::size_t uniform_index(Rng &rng, std::size_t n)
    {
        return std::uniform_int_distribution<std::size_t>{0, n - 1}(rng);
    }

    double distance(std::span<const double> a, std::span<const double> b);
    double squared_distance(std::span<const double> a, std::span<const double> b);

    /// %.17g rendering: 17 significant digits, so every double round-trips exactly.
    std::string format_double(double value);

    /// Strict-then-stable ordering used everywhere a solution set is ranked.
    inline bool better(const Solution &a, const Solution &b) { return a.value < b.value; }
}
