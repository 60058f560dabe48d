#include "dhs/parallel.hpp"
#include "dhs/problems.hpp"

#include <exception>

#include <omp.h>

namespace dhs
{
    std::vector<double> evaluate_batch_serial(const Problem &problem, std::span<const Vector> positions)
    {
        std::vector<double> values(positions.size());
        for (std::size_t i = 0; i < positions.size(); ++i)
            values[i] = problem(positions[i]);
        return values;
    }

    std::vector<double> evaluate_batch_parallel(const Problem &problem, std::span<const Vector> positions)
    {
        std::vector<double> values(positions.size());
        std::vector<std::exception_ptr> errors(positions.size());
        const auto n = static_cast<std::ptrdiff_t>(positions.size());

#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i)
        {
            try
            {
                values[i] = problem(positions[i]);
            }
            catch (...)
            {
                errors[i] = std::current_exception();
            }
        }

        for (const auto &e : errors)
            if (e)
                std::rethrow_exception(e);
        return values;
    }

    std::vector<double> evaluate_batch(const Problem &problem, std::span<const Vector> positions, Execution execution)
    {
        // Small batches are not worth a parallel region.
        if (execution == Execution::parallel && positions.size() >= 8 && !omp_in_parallel())
            return evaluate_batch_parallel(problem, positions);
        return evaluate_batch_serial(problem, positions);
    }

    void for_each_index(std::size_t count, Execution execution, const std::function<void(std::size_t)> &task,
                        int threads)
    {
        std::vector<std::exception_ptr> errors(count);
        const auto n = static_cast<std::ptrdiff_t>(count);

        if (execution == Execution::serial)
        {
            for (std::ptrdiff_t i = 0; i < n; ++i)
                task(static_cast<std::size_t>(i));
            return;
        }

        const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(team)
        for (std::ptrdiff_t i = 0; i < n; ++i)
        {
            try
            {
                task(static_cast<std::size_t>(i));
            }
            catch (...)
            {
                errors[i] = std::current_exception();
            }
        }

        for (const auto &e : errors)
            if (e)
                std::rethrow_exception(e);
    }

    int available_threads()
    {
        return omp_get_max_threads();
    }
}
