#include "dhs/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace dhs
{
    double squared_distance(std::span<const double> a, std::span<const double> b)
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
        {
            const double d = a[i] - b[i];
            sum += d * d;
        }
        return sum;
    }

    double distance(std::span<const double> a, std::span<const double> b)
    {
        return std::sqrt(squared_distance(a, b));
    }

    Problem::Problem(std::string name, Vector lower, Vector upper, Objective objective,
                     std::optional<double> known_optimum, std::optional<Vector> known_optimizer)
        : name_(std::move(name)), lower_(std::move(lower)), upper_(std::move(upper)),
          objective_(std::move(objective)), known_optimum_(known_optimum),
          known_optimizer_(std::move(known_optimizer))
    {
        if (lower_.empty() || lower_.size() != upper_.size())
            throw InvalidInput("problem '" + name_ + "': bound vectors must be non-empty and of equal length");
        for (std::size_t i = 0; i < lower_.size(); ++i)
            if (!(lower_[i] < upper_[i]))
                throw InvalidInput("problem '" + name_ + "': lower bound must be below upper bound in every coordinate");
        if (!objective_)
            throw InvalidInput("problem '" + name_ + "': missing objective");
        if (known_optimizer_ && known_optimizer_->size() != lower_.size())
            throw InvalidInput("problem '" + name_ + "': known optimizer has wrong length");
    }

    double Problem::operator()(std::span<const double> position) const
    {
        if (position.size() != dimension())
            throw InvalidInput("problem '" + name_ + "': expected " + std::to_string(dimension()) +
                               " coordinates, got " + std::to_string(position.size()));
        return objective_(position);
    }

    Vector Problem::clip(std::span<const double> position) const
    {
        if (position.size() != dimension())
            throw InvalidInput("clip: dimension mismatch");
        Vector out(position.begin(), position.end());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = std::clamp(out[i], lower_[i], upper_[i]);
        return out;
    }

    bool Problem::contains(std::span<const double> position) const
    {
        if (position.size() != dimension())
            return false;
        for (std::size_t i = 0; i < position.size(); ++i)
            if (position[i] < lower_[i] || position[i] > upper_[i])
                return false;
        return true;
    }

    double Problem::mean_width() const
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < dimension(); ++i)
            sum += width(i);
        return sum / static_cast<double>(dimension());
    }

    double Problem::diagonal() const
    {
        return distance(lower_, upper_);
    }

    Solution Evaluator::evaluate(std::span<const double> position, std::size_t iteration)
    {
        Solution s{Vector(position.begin(), position.end()), (*problem_)(position), iteration};
        ++count_;
        return s;
    }

    std::vector<Solution> Evaluator::evaluate_all(std::span<const Vector> positions, std::size_t iteration)
    {
        for (const auto &p : positions)
            if (p.size() != problem_->dimension())
                throw InvalidInput("evaluate: dimension mismatch");

        const auto values = evaluate_batch(*problem_, positions, execution_);
        std::vector<Solution> out;
        out.reserve(positions.size());
        for (std::size_t i = 0; i < positions.size(); ++i)
            out.push_back(Solution{positions[i], values[i], iteration});
        count_ += positions.size();
        return out;
    }

    namespace
    {
        double sphere(std::span<const double> x)
        {
            double s = 0.0;
            for (double v : x)
                s += v * v;
            return s;
        }

        double rosenbrock(std::span<const double> x)
        {
            double s = 0.0;
            for (std::size_t i = 0; i + 1 < x.size(); ++i)
            {
                const double a = x[i + 1] - x[i] * x[i];
                const double b = 1.0 - x[i];
                s += 100.0 * a * a + b * b;
            }
            return s;
        }

        double rastrigin(std::span<const double> x)
        {
            constexpr double A = 10.0;
            double s = A * static_cast<double>(x.size());
            for (double v : x)
                s += v * v - A * std::cos(2.0 * std::numbers::pi * v);
            return s;
        }

        double ackley(std::span<const double> x)
        {
            const double n = static_cast<double>(x.size());
            double sq = 0.0;
            double cs = 0.0;
            for (double v : x)
            {
                sq += v * v;
                cs += std::cos(2.0 * std::numbers::pi * v);
            }
            return -20.0 * std::exp(-0.2 * std::sqrt(sq / n)) - std::exp(cs / n) + 20.0 + std::numbers::e;
        }

        double griewank(std::span<const double> x)
        {
            double sum = 0.0;
            double prod = 1.0;
            for (std::size_t i = 0; i < x.size(); ++i)
            {
                sum += x[i] * x[i];
                prod *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
            }
            return 1.0 + sum / 4000.0 - prod;
        }

        struct Entry
        {
            BenchmarkInfo info;
            double (*fn)(std::span<const double>);
            double optimizer_coordinate;
        };

        const std::vector<Entry> &entries()
        {
            static const std::vector<Entry> table{
                {{"sphere", -5.12, 5.12, "sum x_i^2"}, sphere, 0.0},
                {{"rosenbrock", -5.0, 10.0, "sum 100(x_{i+1}-x_i^2)^2 + (1-x_i)^2"}, rosenbrock, 1.0},
                {{"rastrigin", -5.12, 5.12, "10n + sum x_i^2 - 10 cos(2 pi x_i)"}, rastrigin, 0.0},
                {{"ackley", -32.768, 32.768, "-20 exp(-0.2 sqrt(mean x_i^2)) - exp(mean cos 2 pi x_i) + 20 + e"}, ackley, 0.0},
                {{"griewank", -600.0, 600.0, "1 + sum x_i^2/4000 - prod cos(x_i/sqrt(i))"}, griewank, 0.0},
            };
            return table;
        }
    }

    const std::vector<BenchmarkInfo> &benchmark_catalog()
    {
        static const std::vector<BenchmarkInfo> catalog = []
        {
            std::vector<BenchmarkInfo> out;
            for (const auto &e : entries())
                out.push_back(e.info);
            return out;
        }();
        return catalog;
    }

    Problem make_benchmark(std::string_view name, std::size_t dimension)
    {
        const auto &table = entries();
        const auto it = std::find_if(table.begin(), table.end(), [&](const Entry &e)
                                     { return e.info.name == name; });
        if (it == table.end())
            throw LookupError("unknown benchmark '" + std::string(name) + "'");
        if (dimension < 2)
            throw InvalidInput("benchmark dimension must be at least 2");

        return Problem(it->info.name, Vector(dimension, it->info.lower), Vector(dimension, it->info.upper),
                       it->fn, 0.0, Vector(dimension, it->optimizer_coordinate));
    }

    std::vector<Problem> benchmark_registry(std::size_t dimension)
    {
        std::vector<Problem> out;
        for (const auto &info : benchmark_catalog())
            out.push_back(make_benchmark(info.name, dimension));
        return out;
    }
}
