#pragma once

#include "dhs/config.hpp"
#include "dhs/report.hpp"

namespace dhs
{
    struct RunKey
    {
        ProblemSpec problem;
        DriverKind driver;
        Wrapper wrapper;
        std::uint64_t seed;

        bool operator==(const RunKey &) const = default;
    };

    /// problems x drivers x wrappers x seeds, seeds varying fastest.
    std::vector<RunKey> expand_matrix(const ExperimentConfig &config);

    /// "<problem>-<dim>_<driver>_<wrapper>_seed<seed>"
    std::string run_name(const RunKey &key);

    RunReport run_one(const RunKey &key, const ExperimentConfig &config, Execution execution = Execution::serial);

    /// Reports in expand_matrix order. Parallel execution runs whole tuples
    /// concurrently; the result is identical to the serial path.
    std::vector<RunReport> run_matrix(const ExperimentConfig &config, Execution execution = Execution::parallel);

    double threshold_target(const ExperimentConfig &config, const std::string &problem, std::size_t dimension);

    struct ExperimentResult
    {
        std::vector<RunReport> reports;
        std::vector<SummaryRow> summary;
    };

    /// Runs the matrix and writes traces/, reports/ and summary.csv under
    /// config.output. Throws OutputError when the directory is unusable.
    ExperimentResult run_experiment(const ExperimentConfig &config, Execution execution = Execution::parallel);
}
