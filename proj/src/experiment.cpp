#include "dhs/experiment.hpp"

#include <map>

namespace dhs
{
    std::vector<RunKey> expand_matrix(const ExperimentConfig &config)
    {
        std::vector<RunKey> keys;
        keys.reserve(config.problems.size() * config.drivers.size() * config.wrappers.size() * config.seeds.size());
        for (const auto &p : config.problems)
            for (DriverKind d : config.drivers)
                for (Wrapper w : config.wrappers)
                    for (std::uint64_t s : config.seeds)
                        keys.push_back({p, d, w, s});
        return keys;
    }

    std::string run_name(const RunKey &key)
    {
        return key.problem.name + "-" + std::to_string(key.problem.dimension) + "_" +
               std::string(to_string(key.driver)) + "_" + std::string(to_string(key.wrapper)) + "_seed" +
               std::to_string(key.seed);
    }

    RunReport run_one(const RunKey &key, const ExperimentConfig &config, Execution execution)
    {
        const Problem problem = make_benchmark(key.problem.name, key.problem.dimension);
        RunOptions options;
        options.execution = execution;
        SearchRun run(problem, key.driver, config.settings, config.budget, key.seed, std::move(options));
        return key.wrapper == Wrapper::dhs ? run.run() : run.plain();
    }

    std::vector<RunReport> run_matrix(const ExperimentConfig &config, Execution execution)
    {
        const auto keys = expand_matrix(config);
        std::vector<RunReport> reports(keys.size());
        // With a single tuple the parallelism moves into batch evaluation instead.
        const Execution inner = keys.size() == 1 ? execution : Execution::serial;
        for_each_index(
            keys.size(), execution,
            [&](std::size_t i)
            { reports[i] = run_one(keys[i], config, inner); },
            static_cast<int>(config.threads));
        return reports;
    }

    double threshold_target(const ExperimentConfig &config, const std::string &problem, std::size_t dimension)
    {
        const auto optimum = make_benchmark(problem, dimension).known_optimum();
        return optimum.value_or(0.0) + config.threshold;
    }

    ExperimentResult run_experiment(const ExperimentConfig &config, Execution execution)
    {
        validate_config(config);

        namespace fs = std::filesystem;
        const fs::path root(config.output);
        std::error_code ec;
        fs::create_directories(root / "traces", ec);
        if (!ec)
            fs::create_directories(root / "reports", ec);
        if (ec)
            throw OutputError("cannot create output directory '" + root.string() + "': " + ec.message());

        ExperimentResult result;
        result.reports = run_matrix(config, execution);

        const auto keys = expand_matrix(config);
        for_each_index(
            keys.size(), execution,
            [&](std::size_t i)
            {
                const auto name = run_name(keys[i]);
                write_trace(result.reports[i], root / "traces" / (name + ".csv"));
                write_text(root / "reports" / (name + ".json"), report_json(result.reports[i]));
            },
            static_cast<int>(config.threads));

        std::map<std::pair<std::string, std::size_t>, double> targets;
        for (const auto &p : config.problems)
            targets[{p.name, p.dimension}] = threshold_target(config, p.name, p.dimension);
        result.summary = summarize(result.reports, [&](const std::string &name, std::size_t dim)
                                   { return targets.at({name, dim}); });
        write_text(root / "summary.csv", summary_csv(result.summary));
        return result;
    }
}
