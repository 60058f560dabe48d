#pragma once

#include "dhs/engine.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>

namespace dhs
{
    /// File-system failure while writing results; the message carries the path.
    class OutputError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    inline constexpr std::string_view trace_header = "evaluation,best_value,stage";
    inline constexpr std::string_view summary_header =
        "problem,dimension,driver,wrapper,seeds,best,median,worst,median_evals_to_threshold,restarts";

    void write_trace_csv(std::span<const TraceRow> trace, std::ostream &out);
    std::string trace_csv(const RunReport &report);
    void write_trace(const RunReport &report, const std::filesystem::path &path);

    /// First trace row whose best value is at or below `target`.
    std::optional<std::size_t> evaluations_to_target(std::span<const TraceRow> trace, double target);

    struct SummaryRow
    {
        std::string problem;
        std::size_t dimension = 0;
        DriverKind driver = DriverKind::es;
        Wrapper wrapper = Wrapper::dhs;
        std::size_t seeds = 0;
        double best = 0.0;
        double median = 0.0;
        double worst = 0.0;
        std::optional<double> median_evals_to_threshold;  // unset when the median run never reached it
        std::size_t restarts = 0;

        bool operator==(const SummaryRow &) const = default;
    };

    /// Median with the two middle values averaged for even counts.
    double median(std::vector<double> values);

    /// Target value for a (problem, dimension) pair: best values at or below it count as reached.
    using TargetFn = std::function<double(const std::string &problem, std::size_t dimension)>;

    /// One row per (problem, dimension, driver, wrapper), in first-appearance order.
    std::vector<SummaryRow> summarize(std::span<const RunReport> reports, const TargetFn &target);

    void write_summary_csv(std::span<const SummaryRow> rows, std::ostream &out);
    std::string summary_csv(std::span<const SummaryRow> rows);

    std::string report_json(const RunReport &report);
    void write_text(const std::filesystem::path &path, std::string_view text);
}
