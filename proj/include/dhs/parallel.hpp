#pragma once

#include "dhs/core.hpp"

#include <functional>

namespace dhs
{
    class Problem;

    enum class Execution
    {
        serial,
        parallel
    };

    // Batch objective kernels. The serial version is the reference; the
    // OpenMP version must return bit-identical values in the same order.
    std::vector<double> evaluate_batch_serial(const Problem &problem, std::span<const Vector> positions);
    std::vector<double> evaluate_batch_parallel(const Problem &problem, std::span<const Vector> positions);
    std::vector<double> evaluate_batch(const Problem &problem, std::span<const Vector> positions, Execution execution);

    /// Runs task(i) for i in [0, count). Exceptions are collected per task and
    /// the first one (lowest index) is rethrown after all tasks finish.
    void for_each_index(std::size_t count, Execution execution, const std::function<void(std::size_t)> &task,
                        int threads = 0);

    int available_threads();
}
