#include "dhs/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace dhs
{
    ConfigError::ConfigError(std::size_t line, const std::string &message)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line)
    {
    }

    namespace
    {
        std::string_view trim(std::string_view s)
        {
            const auto first = s.find_first_not_of(" \t\r");
            if (first == std::string_view::npos)
                return {};
            const auto last = s.find_last_not_of(" \t\r");
            return s.substr(first, last - first + 1);
        }

        std::vector<std::string_view> split_list(std::string_view s)
        {
            std::vector<std::string_view> out;
            while (true)
            {
                const auto comma = s.find(',');
                const auto item = trim(s.substr(0, comma));
                if (!item.empty())
                    out.push_back(item);
                if (comma == std::string_view::npos)
                    break;
                s.remove_prefix(comma + 1);
            }
            return out;
        }

        std::uint64_t to_unsigned(std::string_view s)
        {
            std::uint64_t v = 0;
            const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
                throw InvalidInput("expected a non-negative integer, got '" + std::string(s) + "'");
            return v;
        }

        std::size_t to_size(std::string_view s) { return static_cast<std::size_t>(to_unsigned(s)); }

        std::size_t to_positive(std::string_view s)
        {
            const auto v = to_size(s);
            if (v == 0)
                throw InvalidInput("expected a positive integer, got '" + std::string(s) + "'");
            return v;
        }

        double to_double(std::string_view s)
        {
            // from_chars for doubles is missing from older libstdc++; strtod on a copy is exact.
            const std::string copy(s);
            char *end = nullptr;
            const double v = std::strtod(copy.c_str(), &end);
            if (copy.empty() || end != copy.c_str() + copy.size() || !std::isfinite(v))
                throw InvalidInput("expected a finite number, got '" + copy + "'");
            return v;
        }

        double to_positive_double(std::string_view s)
        {
            const double v = to_double(s);
            if (!(v > 0.0))
                throw InvalidInput("expected a positive number, got '" + std::string(s) + "'");
            return v;
        }

        double to_unit_interval(std::string_view s, bool include_zero)
        {
            const double v = to_double(s);
            if (v > 1.0 || v < 0.0 || (!include_zero && v == 0.0))
                throw InvalidInput(std::string("value ") + std::string(s) + " out of range " +
                                   (include_zero ? "[0, 1]" : "(0, 1]"));
            return v;
        }

        template <typename T, typename F>
        std::string join(const std::vector<T> &items, F render)
        {
            std::string out;
            for (std::size_t i = 0; i < items.size(); ++i)
            {
                if (i)
                    out += ", ";
                out += render(items[i]);
            }
            return out;
        }

        struct KeyDef
        {
            std::string key;
            std::function<void(ExperimentConfig &, std::string_view)> set;
            std::function<std::string(const ExperimentConfig &)> get;
        };

        template <typename Get>
        KeyDef size_key(std::string key, Get field, bool positive = true)
        {
            return {std::move(key),
                    [=](ExperimentConfig &c, std::string_view v)
                    { field(c) = positive ? to_positive(v) : to_size(v); },
                    [=](const ExperimentConfig &c)
                    { return std::to_string(field(const_cast<ExperimentConfig &>(c))); }};
        }

        template <typename Get>
        KeyDef double_key(std::string key, Get field, std::function<double(std::string_view)> parse)
        {
            return {std::move(key),
                    [=](ExperimentConfig &c, std::string_view v)
                    { field(c) = parse(v); },
                    [=](const ExperimentConfig &c)
                    { return format_double(field(const_cast<ExperimentConfig &>(c))); }};
        }

        const std::vector<KeyDef> &key_table()
        {
            static const std::vector<KeyDef> table = []
            {
                std::vector<KeyDef> t;
                t.push_back({"problems",
                             [](ExperimentConfig &c, std::string_view v)
                             {
                                 c.problems.clear();
                                 for (auto item : split_list(v))
                                 {
                                     const auto colon = item.find(':');
                                     if (colon == std::string_view::npos)
                                         throw InvalidInput("problem entries are name:dimension, got '" +
                                                            std::string(item) + "'");
                                     c.problems.push_back({std::string(trim(item.substr(0, colon))),
                                                           to_size(trim(item.substr(colon + 1)))});
                                 }
                             },
                             [](const ExperimentConfig &c)
                             {
                                 return join(c.problems, [](const ProblemSpec &p)
                                             { return p.name + ":" + std::to_string(p.dimension); });
                             }});
                t.push_back({"drivers",
                             [](ExperimentConfig &c, std::string_view v)
                             {
                                 c.drivers.clear();
                                 for (auto item : split_list(v))
                                     c.drivers.push_back(parse_driver(item));
                             },
                             [](const ExperimentConfig &c)
                             {
                                 return join(c.drivers, [](DriverKind d)
                                             { return std::string(to_string(d)); });
                             }});
                t.push_back({"wrappers",
                             [](ExperimentConfig &c, std::string_view v)
                             {
                                 c.wrappers.clear();
                                 for (auto item : split_list(v))
                                     c.wrappers.push_back(parse_wrapper(item));
                             },
                             [](const ExperimentConfig &c)
                             {
                                 return join(c.wrappers, [](Wrapper w)
                                             { return std::string(to_string(w)); });
                             }});
                t.push_back({"seeds",
                             [](ExperimentConfig &c, std::string_view v)
                             {
                                 c.seeds.clear();
                                 for (auto item : split_list(v))
                                 {
                                     const auto dots = item.find("..");
                                     if (dots == std::string_view::npos)
                                     {
                                         c.seeds.push_back(to_unsigned(item));
                                         continue;
                                     }
                                     const auto lo = to_unsigned(trim(item.substr(0, dots)));
                                     const auto hi = to_unsigned(trim(item.substr(dots + 2)));
                                     if (hi < lo || hi - lo > 100000)
                                         throw InvalidInput("bad seed range '" + std::string(item) + "'");
                                     for (auto s = lo; s <= hi; ++s)
                                         c.seeds.push_back(s);
                                 }
                             },
                             [](const ExperimentConfig &c)
                             {
                                 return join(c.seeds, [](std::uint64_t s)
                                             { return std::to_string(s); });
                             }});
                t.push_back(size_key("budget", [](ExperimentConfig &c) -> std::size_t & { return c.budget; }));
                t.push_back(double_key("threshold", [](ExperimentConfig &c) -> double & { return c.threshold; },
                                       [](std::string_view v)
                                       {
                                           const double x = to_double(v);
                                           if (x < 0.0)
                                               throw InvalidInput("threshold must be non-negative");
                                           return x;
                                       }));
                t.push_back(size_key("threads", [](ExperimentConfig &c) -> std::size_t & { return c.threads; }, false));
                t.push_back({"output",
                             [](ExperimentConfig &c, std::string_view v)
                             {
                                 if (v.empty())
                                     throw InvalidInput("output directory must not be empty");
                                 c.output = std::string(v);
                             },
                             [](const ExperimentConfig &c)
                             { return c.output; }});

                // memory
                t.push_back(size_key("memory.N_d", [](ExperimentConfig &c) -> std::size_t & { return c.settings.memory.deep_capacity; }));
                t.push_back(size_key("memory.N_s", [](ExperimentConfig &c) -> std::size_t & { return c.settings.memory.shallow_capacity; }));
                t.push_back(size_key("memory.N_x", [](ExperimentConfig &c) -> std::size_t & { return c.settings.memory.extended_capacity; }));
                t.push_back(size_key("memory.d_e", [](ExperimentConfig &c) -> std::size_t & { return c.settings.memory.elite_depth; }));
                t.push_back(size_key("memory.d_f", [](ExperimentConfig &c) -> std::size_t & { return c.settings.memory.frequency_depth; }));
                t.push_back(size_key("memory.d_c", [](ExperimentConfig &c) -> std::size_t & { return c.settings.memory.characteristic_depth; }));
                t.push_back(size_key("memory.d_s", [](ExperimentConfig &c) -> std::size_t & { return c.settings.memory.spatial_depth; }));
                t.push_back(size_key("memory.d_r", [](ExperimentConfig &c) -> std::size_t & { return c.settings.memory.recentness_depth; }));
                t.push_back({"memory.tabu_radius",
                             [](ExperimentConfig &c, std::string_view v)
                             {
                                 if (v == "auto")
                                     c.settings.memory.tabu_radius.reset();
                                 else
                                     c.settings.memory.tabu_radius = to_positive_double(v);
                             },
                             [](const ExperimentConfig &c)
                             {
                                 const auto &r = c.settings.memory.tabu_radius;
                                 return r ? format_double(*r) : std::string("auto");
                             }});
                t.push_back(size_key("memory.partitions", [](ExperimentConfig &c) -> std::size_t & { return c.settings.memory.partitions_per_dim; }));
                t.push_back(size_key("memory.n_cap", [](ExperimentConfig &c) -> std::size_t & { return c.settings.memory.grid_dimension_cap; }));

                // stages
                for (Stage s : all_stages)
                {
                    const auto i = static_cast<std::size_t>(s);
                    t.push_back(double_key("stage." + std::string(to_string(s)),
                                           [i](ExperimentConfig &c) -> double & { return c.settings.stages.fractions[i]; },
                                           [](std::string_view v)
                                           { return to_unit_interval(v, false); }));
                }
                t.push_back(size_key("stage.T_e", [](ExperimentConfig &c) -> std::size_t & { return c.settings.stages.explore_patience; }));
                t.push_back(size_key("stage.T_m", [](ExperimentConfig &c) -> std::size_t & { return c.settings.stages.mixed_patience; }));
                t.push_back(size_key("stage.R_e", [](ExperimentConfig &c) -> std::size_t & { return c.settings.stages.explore_restarts; }, false));
                t.push_back(size_key("stage.R_m", [](ExperimentConfig &c) -> std::size_t & { return c.settings.stages.mixed_restarts; }, false));
                t.push_back(size_key("stage.R_i", [](ExperimentConfig &c) -> std::size_t & { return c.settings.stages.intensive_restarts; }, false));
                t.push_back(double_key("stage.coverage", [](ExperimentConfig &c) -> double & { return c.settings.stages.coverage; },
                                       [](std::string_view v)
                                       { return to_unit_interval(v, false); }));
                t.push_back({"stage.gentry",
                             [](ExperimentConfig &c, std::string_view v)
                             {
                                 if (v == "auto")
                                     c.settings.stages.gentry.reset();
                                 else
                                     c.settings.stages.gentry = to_positive(v);
                             },
                             [](const ExperimentConfig &c)
                             {
                                 const auto &g = c.settings.stages.gentry;
                                 return g ? std::to_string(*g) : std::string("auto");
                             }});
                t.push_back(size_key("stage.K", [](ExperimentConfig &c) -> std::size_t & { return c.settings.stages.candidates; }));
                t.push_back(double_key("stage.delta", [](ExperimentConfig &c) -> double & { return c.settings.stages.similarity; }, to_positive_double));
                t.push_back(double_key("stage.agreement", [](ExperimentConfig &c) -> double & { return c.settings.stages.agreement; },
                                       [](std::string_view v)
                                       { return to_unit_interval(v, false); }));
                t.push_back(size_key("stage.burst", [](ExperimentConfig &c) -> std::size_t & { return c.settings.stages.burst_iterations; }, false));
                t.push_back(double_key("stage.restart_growth", [](ExperimentConfig &c) -> double & { return c.settings.stages.restart_growth; },
                                       [](std::string_view v)
                                       {
                                           const double x = to_double(v);
                                           if (x < 1.0)
                                               throw InvalidInput("restart growth must be at least 1");
                                           return x;
                                       }));

                // operators
                t.push_back(double_key("operators.radius", [](ExperimentConfig &c) -> double & { return c.settings.operators.radius_fraction; }, to_positive_double));
                t.push_back(size_key("operators.zones", [](ExperimentConfig &c) -> std::size_t & { return c.settings.operators.zones; }));
                t.push_back(size_key("operators.trials_per_zone", [](ExperimentConfig &c) -> std::size_t & { return c.settings.operators.trials_per_zone; }));
                t.push_back(double_key("operators.expand_sigma", [](ExperimentConfig &c) -> double & { return c.settings.operators.expand_sigma; }, to_positive_double));
                t.push_back(double_key("operators.condense_sigma", [](ExperimentConfig &c) -> double & { return c.settings.operators.condense_sigma; }, to_positive_double));
                t.push_back(double_key("operators.expand_radius", [](ExperimentConfig &c) -> double & { return c.settings.operators.expand_radius; }, to_positive_double));
                t.push_back(double_key("operators.condense_radius", [](ExperimentConfig &c) -> double & { return c.settings.operators.condense_radius; }, to_positive_double));
                t.push_back(double_key("operators.tau_scale", [](ExperimentConfig &c) -> double & { return c.settings.operators.tau_scale; },
                                       [](std::string_view v)
                                       {
                                           const double x = to_double(v);
                                           if (x < 0.0)
                                               throw InvalidInput("tau scale must be non-negative");
                                           return x;
                                       }));
                t.push_back(double_key("operators.theta_min", [](ExperimentConfig &c) -> double & { return c.settings.operators.theta_min_fraction; }, to_positive_double));

                // drivers
                t.push_back(size_key("ga.mu", [](ExperimentConfig &c) -> std::size_t & { return c.settings.drivers.ga.mu; }));
                t.push_back(size_key("ga.offspring", [](ExperimentConfig &c) -> std::size_t & { return c.settings.drivers.ga.offspring; }));
                t.push_back(double_key("ga.mutation_scale", [](ExperimentConfig &c) -> double & { return c.settings.drivers.ga.mutation_scale; }, to_positive_double));
                t.push_back({"ga.mutation_rate",
                             [](ExperimentConfig &c, std::string_view v)
                             {
                                 if (v == "auto")
                                     c.settings.drivers.ga.mutation_rate.reset();
                                 else
                                     c.settings.drivers.ga.mutation_rate = to_unit_interval(v, true);
                             },
                             [](const ExperimentConfig &c)
                             {
                                 const auto &r = c.settings.drivers.ga.mutation_rate;
                                 return r ? format_double(*r) : std::string("auto");
                             }});
                t.push_back(size_key("es.mu", [](ExperimentConfig &c) -> std::size_t & { return c.settings.drivers.es.mu; }));
                t.push_back(size_key("es.lambda", [](ExperimentConfig &c) -> std::size_t & { return c.settings.drivers.es.lambda; }));
                t.push_back({"es.selection",
                             [](ExperimentConfig &c, std::string_view v)
                             {
                                 if (v == "plus")
                                     c.settings.drivers.es.plus = true;
                                 else if (v == "comma")
                                     c.settings.drivers.es.plus = false;
                                 else
                                     throw InvalidInput("es.selection is plus or comma, got '" + std::string(v) + "'");
                             },
                             [](const ExperimentConfig &c)
                             { return std::string(c.settings.drivers.es.plus ? "plus" : "comma"); }});
                t.push_back(double_key("es.sigma0", [](ExperimentConfig &c) -> double & { return c.settings.drivers.es.sigma0; }, to_positive_double));
                return t;
            }();
            return table;
        }

        const KeyDef *find_key(std::string_view key)
        {
            const auto &table = key_table();
            const auto it = std::find_if(table.begin(), table.end(), [&](const KeyDef &k)
                                         { return k.key == key; });
            return it == table.end() ? nullptr : &*it;
        }

        using LineMap = std::map<std::string, std::size_t, std::less<>>;

        void set_key(ExperimentConfig &config, std::string_view key, std::string_view value, std::size_t line)
        {
            const auto *def = find_key(key);
            if (!def)
                throw ConfigError(line, "unknown key '" + std::string(key) + "'");
            try
            {
                def->set(config, value);
            }
            catch (const std::exception &e)
            {
                throw ConfigError(line, std::string(key) + ": " + e.what());
            }
        }

        /// Validation failures cite the latest line among the keys involved.
        void validate_with_lines(const ExperimentConfig &c, const LineMap &lines)
        {
            const auto fail = [&](std::initializer_list<std::string_view> keys, const std::string &message)
            {
                std::size_t line = 0;
                for (auto k : keys)
                    if (const auto it = lines.find(k); it != lines.end())
                        line = std::max(line, it->second);
                throw ConfigError(line, message);
            };

            if (c.problems.empty())
                fail({"problems"}, "problems: at least one problem is required");
            if (c.drivers.empty())
                fail({"drivers"}, "drivers: at least one driver is required");
            if (c.wrappers.empty())
                fail({"wrappers"}, "wrappers: at least one wrapper is required");
            if (c.seeds.empty())
                fail({"seeds"}, "seeds: at least one seed is required");
            if (c.budget == 0)
                fail({"budget"}, "budget must be positive");

            const auto has_duplicates = [](auto items)
            {
                std::sort(items.begin(), items.end());
                return std::adjacent_find(items.begin(), items.end()) != items.end();
            };
            std::vector<std::pair<std::string, std::size_t>> problem_keys;
            for (const auto &p : c.problems)
                problem_keys.emplace_back(p.name, p.dimension);
            if (has_duplicates(problem_keys))
                fail({"problems"}, "problems: duplicate entry");
            if (has_duplicates(c.drivers))
                fail({"drivers"}, "drivers: duplicate entry");
            if (has_duplicates(c.wrappers))
                fail({"wrappers"}, "wrappers: duplicate entry");
            if (has_duplicates(c.seeds))
                fail({"seeds"}, "seeds: duplicate entry");

            for (const auto &p : c.problems)
            {
                try
                {
                    (void)make_benchmark(p.name, p.dimension);
                }
                catch (const std::exception &e)
                {
                    fail({"problems"}, std::string("problems: ") + e.what());
                }
            }

            try
            {
                c.settings.memory.validate();
            }
            catch (const std::exception &e)
            {
                fail({"memory.N_d", "memory.N_s", "memory.N_x", "memory.d_e", "memory.d_f", "memory.d_c",
                      "memory.d_s", "memory.d_r", "memory.tabu_radius", "memory.partitions", "memory.n_cap"},
                     e.what());
            }
            try
            {
                c.settings.operators.validate();
            }
            catch (const std::exception &e)
            {
                fail({"operators.radius", "operators.zones", "operators.trials_per_zone", "operators.expand_sigma",
                      "operators.condense_sigma", "operators.expand_radius", "operators.condense_radius",
                      "operators.tau_scale", "operators.theta_min"},
                     e.what());
            }
            try
            {
                c.settings.drivers.validate();
            }
            catch (const std::exception &e)
            {
                fail({"ga.mu", "ga.offspring", "ga.mutation_scale", "ga.mutation_rate", "es.mu", "es.lambda",
                      "es.sigma0"},
                     e.what());
            }

            for (const auto &p : c.problems)
            {
                for (DriverKind d : c.drivers)
                {
                    try
                    {
                        const auto cells = grid_cell_count(p.dimension, c.settings.memory.partitions_per_dim,
                                                           c.settings.memory.grid_dimension_cap);
                        validate_plan(make_plan(c.settings.stages, c.budget, cells), c.settings, d);
                    }
                    catch (const std::exception &e)
                    {
                        fail({"budget", "stage.initial", "stage.exploratory", "stage.mixed", "stage.intensive",
                              "stage.final", "stage.gentry", "memory.partitions", "memory.n_cap", "problems"},
                             p.name + ":" + std::to_string(p.dimension) + " with " + std::string(to_string(d)) +
                                 ": " + e.what());
                    }
                }
            }
        }

        std::pair<std::string_view, std::string_view> split_assignment(std::string_view text, std::size_t line)
        {
            const auto eq = text.find('=');
            if (eq == std::string_view::npos)
                throw ConfigError(line, "expected 'key = value', got '" + std::string(text) + "'");
            const auto key = trim(text.substr(0, eq));
            if (key.empty())
                throw ConfigError(line, "missing key before '='");
            return {key, trim(text.substr(eq + 1))};
        }
    }

    ExperimentConfig parse_config(std::string_view text)
    {
        ExperimentConfig config;
        LineMap lines;
        std::size_t number = 0;
        while (!text.empty() || number == 0)
        {
            ++number;
            const auto nl = text.find('\n');
            std::string_view raw = text.substr(0, nl);
            text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

            if (const auto hash = raw.find('#'); hash != std::string_view::npos)
                raw = raw.substr(0, hash);
            raw = trim(raw);
            if (raw.empty())
            {
                if (text.empty())
                    break;
                continue;
            }

            const auto [key, value] = split_assignment(raw, number);
            if (lines.contains(key))
                throw ConfigError(number, "duplicate key '" + std::string(key) + "' (first set on line " +
                                              std::to_string(lines.find(key)->second) + ")");
            set_key(config, key, value, number);
            lines.emplace(std::string(key), number);
        }

        for (std::string_view required : {"problems", "drivers", "seeds"})
            if (!lines.contains(required))
                throw ConfigError(0, "missing required key '" + std::string(required) + "'");

        validate_with_lines(config, lines);
        return config;
    }

    void apply_overrides(ExperimentConfig &config, const std::vector<std::string> &assignments)
    {
        for (const auto &a : assignments)
        {
            const auto [key, value] = split_assignment(a, 0);
            set_key(config, key, value, 0);
        }
        validate_config(config);
    }

    void validate_config(const ExperimentConfig &config)
    {
        validate_with_lines(config, {});
    }

    std::string render_config(const ExperimentConfig &config)
    {
        std::ostringstream out;
        for (const auto &def : key_table())
            out << def.key << " = " << def.get(config) << '\n';
        return out.str();
    }

    const std::vector<std::string> &config_keys()
    {
        static const std::vector<std::string> keys = []
        {
            std::vector<std::string> out;
            for (const auto &def : key_table())
                out.push_back(def.key);
            return out;
        }();
        return keys;
    }
}
