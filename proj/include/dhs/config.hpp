#pragma once

#include "dhs/engine.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace dhs
{
    struct ProblemSpec
    {
        std::string name;
        std::size_t dimension = 0;

        bool operator==(const ProblemSpec &) const = default;
    };

    struct ExperimentConfig
    {
        std::vector<ProblemSpec> problems;
        std::vector<DriverKind> drivers;
        std::vector<Wrapper> wrappers{Wrapper::plain, Wrapper::dhs};
        std::vector<std::uint64_t> seeds;
        std::size_t budget = 50000;
        double threshold = 1e-6;  // target gap to the known optimum
        std::size_t threads = 0;  // 0: OpenMP default
        std::string output = "dhs-out";
        RunSettings settings;

        bool operator==(const ExperimentConfig &) const = default;
    };

    /// Config failure with the 1-based line it refers to (0 when none applies).
    class ConfigError : public std::runtime_error
    {
    public:
        ConfigError(std::size_t line, const std::string &message);
        std::size_t line() const noexcept { return line_; }

    private:
        std::size_t line_;
    };

    /// One `dotted.key = value` per line, '#' starts a comment. Unknown keys,
    /// duplicates, malformed values, and violated invariants are errors.
    ExperimentConfig parse_config(std::string_view text);

    /// Overrides applied after parsing, e.g. from `--set key=value`. Each
    /// entry is "key=value". Revalidates the result.
    void apply_overrides(ExperimentConfig &config, const std::vector<std::string> &assignments);

    void validate_config(const ExperimentConfig &config);

    /// Every key with its current value, in canonical order.
    std::string render_config(const ExperimentConfig &config);

    const std::vector<std::string> &config_keys();
}
