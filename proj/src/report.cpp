#include "dhs/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dhs
{
    void write_trace_csv(std::span<const TraceRow> trace, std::ostream &out)
    {
        out << trace_header << '\n';
        for (const auto &row : trace)
            out << row.evaluation << ',' << format_double(row.best_value) << ',' << to_string(row.stage) << '\n';
    }

    std::string trace_csv(const RunReport &report)
    {
        std::ostringstream out;
        write_trace_csv(report.trace, out);
        return out.str();
    }

    void write_text(const std::filesystem::path &path, std::string_view text)
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw OutputError("cannot open '" + path.string() + "' for writing");
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        out.close();
        if (!out)
            throw OutputError("failed writing '" + path.string() + "'");
    }

    void write_trace(const RunReport &report, const std::filesystem::path &path)
    {
        write_text(path, trace_csv(report));
    }

    std::optional<std::size_t> evaluations_to_target(std::span<const TraceRow> trace, double target)
    {
        for (const auto &row : trace)
            if (row.best_value <= target)
                return row.evaluation;
        return std::nullopt;
    }

    double median(std::vector<double> values)
    {
        if (values.empty())
            throw InvalidInput("median of an empty set");
        std::sort(values.begin(), values.end());
        const std::size_t mid = values.size() / 2;
        if (values.size() % 2 == 1)
            return values[mid];
        return values[mid - 1] + (values[mid] - values[mid - 1]) / 2.0;
    }

    std::vector<SummaryRow> summarize(std::span<const RunReport> reports, const TargetFn &target)
    {
        struct Group
        {
            SummaryRow row;
            std::vector<double> finals;
            std::vector<double> hits;
        };
        std::vector<Group> groups;
        for (const auto &r : reports)
        {
            auto it = std::find_if(groups.begin(), groups.end(), [&](const Group &g)
                                   { return g.row.problem == r.problem && g.row.dimension == r.dimension &&
                                            g.row.driver == r.driver && g.row.wrapper == r.wrapper; });
            if (it == groups.end())
            {
                groups.push_back({});
                it = std::prev(groups.end());
                it->row.problem = r.problem;
                it->row.dimension = r.dimension;
                it->row.driver = r.driver;
                it->row.wrapper = r.wrapper;
            }
            ++it->row.seeds;
            it->row.restarts += r.restarts.total();
            it->finals.push_back(r.best.value);
            const auto hit = evaluations_to_target(r.trace, target(r.problem, r.dimension));
            it->hits.push_back(hit ? static_cast<double>(*hit) : std::numeric_limits<double>::infinity());
        }

        std::vector<SummaryRow> rows;
        rows.reserve(groups.size());
        for (auto &g : groups)
        {
            g.row.best = *std::min_element(g.finals.begin(), g.finals.end());
            g.row.worst = *std::max_element(g.finals.begin(), g.finals.end());
            g.row.median = median(g.finals);
            const double m = median(g.hits);
            if (std::isfinite(m))
                g.row.median_evals_to_threshold = m;
            rows.push_back(std::move(g.row));
        }
        return rows;
    }

    void write_summary_csv(std::span<const SummaryRow> rows, std::ostream &out)
    {
        out << summary_header << '\n';
        for (const auto &r : rows)
        {
            out << r.problem << ',' << r.dimension << ',' << to_string(r.driver) << ',' << to_string(r.wrapper)
                << ',' << r.seeds << ',' << format_double(r.best) << ',' << format_double(r.median) << ','
                << format_double(r.worst) << ','
                << (r.median_evals_to_threshold ? format_double(*r.median_evals_to_threshold) : "NA") << ','
                << r.restarts << '\n';
        }
    }

    std::string summary_csv(std::span<const SummaryRow> rows)
    {
        std::ostringstream out;
        write_summary_csv(rows, out);
        return out.str();
    }

    namespace
    {
        using nlohmann::ordered_json;

        ordered_json number(double v)
        {
            // JSON has no infinities; keep them readable instead of null.
            if (std::isfinite(v))
                return v;
            return format_double(v);
        }

        ordered_json solution_json(const Solution &s)
        {
            ordered_json pos = ordered_json::array();
            for (double x : s.position)
                pos.push_back(number(x));
            return {{"value", number(s.value)}, {"position", pos}, {"iteration", s.birth_iteration}};
        }
    }

    std::string report_json(const RunReport &r)
    {
        ordered_json j;
        j["problem"] = r.problem;
        j["dimension"] = r.dimension;
        j["driver"] = to_string(r.driver);
        j["wrapper"] = to_string(r.wrapper);
        j["seed"] = r.seed;
        j["budget"] = r.budget;
        j["evaluations"] = r.evaluations;
        j["best"] = solution_json(r.best);

        auto &stages = j["stages"] = ordered_json::array();
        for (const auto &s : r.stages)
            stages.push_back({{"stage", to_string(s.stage)},
                              {"budget", s.budget},
                              {"start_evaluation", s.start_evaluation},
                              {"end_evaluation", s.end_evaluation},
                              {"start_iteration", s.start_iteration},
                              {"end_iteration", s.end_iteration}});

        j["restarts"] = {{"exploratory", r.restarts.exploratory},
                         {"mixed", r.restarts.mixed},
                         {"intensive", r.restarts.intensive},
                         {"intensify_bursts", r.restarts.intensify_bursts}};

        ordered_json frozen = ordered_json::array();
        for (std::size_t i = 0; i < r.consensus.frozen.size(); ++i)
            if (r.consensus.frozen[i])
                frozen.push_back({{"coordinate", i}, {"value", number(r.consensus.values[i])}});
        j["consensus"] = frozen;

        const auto &m = r.memory;
        ordered_json elite = ordered_json::array();
        for (const auto &s : m.deep_elite)
            elite.push_back(solution_json(s));
        ordered_json histogram = ordered_json::array();
        for (const auto &[visits, cells] : m.visit_histogram)
            histogram.push_back({{"visits", visits}, {"cells", cells}});
        j["memory"] = {{"iteration", m.iteration},
                       {"visits", m.visits},
                       {"total_cells", m.total_cells},
                       {"visited_cells", m.visited_cells},
                       {"coverage", number(m.coverage)},
                       {"visit_histogram", histogram},
                       {"deep_elite", elite}};

        ordered_json trace = ordered_json::array();
        for (const auto &t : r.trace)
            trace.push_back({t.evaluation, number(t.best_value), to_string(t.stage)});
        j["trace"] = trace;
        return j.dump(2) + "\n";
    }
}
