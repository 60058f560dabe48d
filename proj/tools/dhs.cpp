#include "dhs/experiment.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace
{
    constexpr int exit_ok = 0;
    constexpr int exit_config = 2;
    constexpr int exit_runtime = 3;

    struct ConfigFailure
    {
        std::string message;
    };

    dhs::ExperimentConfig load(const std::string &path, const std::vector<std::string> &overrides)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ConfigFailure{"cannot read config '" + path + "'"};
        std::ostringstream text;
        text << in.rdbuf();
        try
        {
            auto config = dhs::parse_config(text.str());
            if (!overrides.empty())
                dhs::apply_overrides(config, overrides);
            return config;
        }
        catch (const dhs::ConfigError &e)
        {
            throw ConfigFailure{path + ": " + e.what()};
        }
    }

    void print_summary(const std::vector<dhs::SummaryRow> &rows)
    {
        std::cout << dhs::summary_csv(rows);
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Deep heuristic search benchmark runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string output;
    std::size_t threads = 0;
    bool serial = false;
    bool quiet = false;

    auto *run = app.add_subcommand("run", "Run the experiment matrix described by a config file");
    run->add_option("config", config_path, "Config file")->required();
    run->add_option("--set", overrides, "Override a config key, e.g. --set budget=20000");
    run->add_option("-o,--output", output, "Output directory (overrides DHS_OUTPUT_DIR and the config)");
    run->add_option("-j,--threads", threads, "Worker threads for the run matrix (0: OpenMP default)");
    run->add_flag("--serial", serial, "Run the matrix on one thread");
    run->add_flag("-q,--quiet", quiet, "Do not print the summary table");

    bool print = false;
    auto *validate = app.add_subcommand("validate", "Check a config file and report the run count");
    validate->add_option("config", config_path, "Config file")->required();
    validate->add_option("--set", overrides, "Override a config key");
    validate->add_flag("-p,--print", print, "Print the config with every default filled in");

    auto *list = app.add_subcommand("list-benchmarks", "List the available benchmark problems");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try
    {
        if (*list)
        {
            for (const auto &b : dhs::benchmark_catalog())
                std::cout << b.name << "  [" << dhs::format_double(b.lower) << ", " << dhs::format_double(b.upper)
                          << "]^n  " << b.formula << '\n';
            return exit_ok;
        }

        auto config = load(config_path, overrides);

        if (*validate)
        {
            if (print)
                std::cout << dhs::render_config(config);
            else
                std::cout << "ok: " << dhs::expand_matrix(config).size() << " runs\n";
            return exit_ok;
        }

        if (const char *env = std::getenv("DHS_OUTPUT_DIR"); env && *env)
            config.output = env;
        if (!output.empty())
            config.output = output;
        if (threads > 0)
            config.threads = threads;

        const auto result =
            dhs::run_experiment(config, serial ? dhs::Execution::serial : dhs::Execution::parallel);
        if (!quiet)
            print_summary(result.summary);
        return exit_ok;
    }
    catch (const ConfigFailure &e)
    {
        std::cerr << "config error: " << e.message << '\n';
        return exit_config;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
}
