// SPDX-License-Identifier: Apache-2.0
//
// pilotmimo: multi-cell TDD pilot contamination and precoding simulator
// Copyright (C) 2026 The pilotmimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "pilotmimo/experiment.hpp"
#include "pilotmimo/errors.hpp"
#include "pilotmimo/rates.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace pilotmimo
{
    std::string_view to_string(ExperimentKind kind)
    {
        switch (kind)
        {
        case ExperimentKind::theorem1_verify:
            return "theorem1_verify";
        case ExperimentKind::fig3_sweep:
            return "fig3_sweep";
        case ExperimentKind::fig4_msweep:
            return "fig4_msweep";
        case ExperimentKind::asymptote_demo:
            return "asymptote_demo";
        }
        return "?";
    }

    std::optional<ExperimentKind> parse_experiment_kind(std::string_view name)
    {
        for (ExperimentKind k : {ExperimentKind::theorem1_verify, ExperimentKind::fig3_sweep,
                                 ExperimentKind::fig4_msweep, ExperimentKind::asymptote_demo})
            if (name == to_string(k))
                return k;
        return std::nullopt;
    }

    namespace
    {
        std::string_view trim(std::string_view s)
        {
            const auto first = s.find_first_not_of(" \t\r\n");
            if (first == std::string_view::npos)
                return {};
            const auto last = s.find_last_not_of(" \t\r\n");
            return s.substr(first, last - first + 1);
        }

        std::string quoted(std::string_view key, std::string_view value)
        {
            return "'" + std::string(key) + "' = '" + std::string(value) + "'";
        }

        template <typename T>
        T parse_number(std::string_view key, std::string_view text)
        {
            text = trim(text);
            T value{};
            const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
            if (ec != std::errc{} || end != text.data() + text.size() || text.empty())
                throw InvalidSpec("Cannot parse " + quoted(key, text) + " as a number.");
            return value;
        }

        std::vector<std::string_view> split_list(std::string_view text)
        {
            std::vector<std::string_view> items;
            text = trim(text);
            if (text.empty())
                return items;
            std::size_t start = 0;
            while (true)
            {
                const auto comma = text.find(',', start);
                items.push_back(trim(text.substr(start, comma - start)));
                if (comma == std::string_view::npos)
                    break;
                start = comma + 1;
            }
            return items;
        }

        template <typename T>
        std::vector<T> parse_list(std::string_view key, std::string_view text)
        {
            std::vector<T> out;
            for (std::string_view item : split_list(text))
                out.push_back(parse_number<T>(key, item));
            return out;
        }

        std::string format_double(double x)
        {
            if (std::isinf(x))
                return x > 0 ? "inf" : "-inf";
            if (std::isnan(x))
                return "nan";
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.9g", x);
            return buf;
        }

        std::string csv_field(const std::string &s)
        {
            if (s.find_first_of(",\"\n\r") == std::string::npos)
                return s;
            std::string out = "\"";
            for (char c : s)
            {
                if (c == '"')
                    out += '"';
                out += c;
            }
            return out + "\"";
        }

        struct SweepPoint
        {
            double a, b;
            std::size_t M;
        };

        std::vector<SweepPoint> sweep_points(const ExperimentSpec &spec)
        {
            const std::vector<std::size_t> ms = spec.m_values.value_or(std::vector<std::size_t>{spec.config.antennas});
            std::vector<SweepPoint> points;
            switch (spec.kind)
            {
            case ExperimentKind::fig3_sweep:
                for (double a : spec.a_values.value_or(std::vector<double>{spec.a}))
                    for (double b : spec.b_values.value_or(std::vector<double>{spec.b}))
                        points.push_back({a, b, spec.config.antennas});
                break;
            case ExperimentKind::fig4_msweep:
                for (std::size_t M : ms)
                    points.push_back({spec.a, 0.1 * spec.a, M});
                break;
            case ExperimentKind::theorem1_verify:
            case ExperimentKind::asymptote_demo:
                for (std::size_t M : ms)
                    points.push_back({spec.a, spec.b, M});
                break;
            }
            return points;
        }

        bool single_user_kind(ExperimentKind kind)
        {
            return kind == ExperimentKind::theorem1_verify || kind == ExperimentKind::asymptote_demo;
        }

        ResultRow row_template(const ExperimentSpec &spec, const SystemConfig &config, const SweepPoint &p,
                               std::string method)
        {
            ResultRow row;
            row.experiment = std::string(to_string(spec.kind));
            row.method = std::move(method);
            row.a = p.a;
            row.b = p.b;
            row.M = config.antennas;
            row.K = config.users_per_cell;
            row.L = config.num_cells;
            row.tau = config.pilot_length;
            row.p_f_db = spec.p_f_db;
            row.p_r_db = spec.p_r_db;
            row.gamma = config.gamma;
            row.seed = config.rng_seed;
            row.trials = spec.kind == ExperimentKind::asymptote_demo ? 0 : spec.n_trials;
            row.min_rate = std::nan("");
            return row;
        }

        void fill_from_report(ResultRow &row, const RateReport &report)
        {
            for (const UserMoments &u : report.users)
            {
                row.rates.push_back(u.rate);
                row.stderrs.push_back(u.rate_stderr);
            }
            row.min_rate = report.min_rate;
        }

        std::vector<ResultRow> evaluate_point(const ExperimentSpec &spec, const SweepPoint &p, std::size_t mc_threads)
        {
            SystemConfig config = spec.config;
            config.antennas = p.M;
            if (single_user_kind(spec.kind))
                config.users_per_cell = 1;

            const std::vector<PrecoderMethod> methods = spec.effective_methods();
            std::vector<ResultRow> rows;

            if (spec.kind == ExperimentKind::asymptote_demo)
            {
                ResultRow row = row_template(spec, config, p, "ZF");
                try
                {
                    config.validate(true);
                    const Scenario sc = build_scenario(ScenarioSpec::shared_pilot(p.a, p.b, config.num_cells), config);
                    row.min_rate = std::numeric_limits<double>::infinity();
                    for (std::size_t j = 0; j < config.num_cells; ++j)
                    {
                        const double r = closed_form_rate(sc.gains, config, j);
                        row.rates.push_back(r);
                        row.stderrs.push_back(0.0);
                        row.closed_form.push_back(asymptotic_rate(sc.gains, config, j).value);
                        row.min_rate = std::min(row.min_rate, r);
                    }
                }
                catch (const Error &e)
                {
                    row.error = e.what();
                    row.rates.clear();
                    row.stderrs.clear();
                    row.closed_form.clear();
                    row.min_rate = std::nan("");
                }
                rows.push_back(std::move(row));
                return rows;
            }

            for (PrecoderMethod m : methods)
                rows.push_back(row_template(spec, config, p, std::string(to_string(m))));

            MonteCarloOptions options;
            options.chunks = spec.chunks;
            options.threads = mc_threads;
            try
            {
                config.validate(true);
                const ScenarioSpec scenario = spec.kind == ExperimentKind::theorem1_verify
                                                  ? ScenarioSpec::shared_pilot(p.a, p.b, config.num_cells)
                                                  : ScenarioSpec::benchmark(p.a, p.b, config.num_cells);
                const Scenario sc = build_scenario(scenario, config);

                std::vector<double> closed;
                if (spec.kind == ExperimentKind::theorem1_verify)
                    for (std::size_t j = 0; j < config.num_cells; ++j)
                        closed.push_back(closed_form_rate(sc.gains, config, j));

                std::vector<RateReport> reports;
                try
                {
                    reports = monte_carlo_rates(config, sc.gains, sc.pilots, methods, spec.n_trials, options);
                }
                catch (const Error &)
                {
                    // One method failed on the shared draws; rerun individually
                    // so the others still produce rows.
                    if (methods.size() == 1)
                        throw;
                    for (std::size_t i = 0; i < methods.size(); ++i)
                    {
                        try
                        {
                            fill_from_report(rows[i],
                                             monte_carlo_rates(config, sc.gains, sc.pilots, methods[i], spec.n_trials, options));
                            if (methods[i] == PrecoderMethod::zf)
                                rows[i].closed_form = closed;
                        }
                        catch (const Error &e)
                        {
                            rows[i].error = e.what();
                        }
                    }
                    return rows;
                }
                for (std::size_t i = 0; i < methods.size(); ++i)
                {
                    fill_from_report(rows[i], reports[i]);
                    if (methods[i] == PrecoderMethod::zf)
                        rows[i].closed_form = closed;
                }
            }
            catch (const Error &e)
            {
                for (ResultRow &row : rows)
                {
                    row.error = e.what();
                    row.rates.clear();
                    row.stderrs.clear();
                    row.closed_form.clear();
                    row.min_rate = std::nan("");
                }
            }
            return rows;
        }
    }

    std::vector<PrecoderMethod> ExperimentSpec::effective_methods() const
    {
        if (!methods.empty())
            return methods;
        switch (kind)
        {
        case ExperimentKind::theorem1_verify:
        case ExperimentKind::asymptote_demo:
            return {PrecoderMethod::zf};
        case ExperimentKind::fig3_sweep:
            return {PrecoderMethod::zf, PrecoderMethod::mcmmse};
        case ExperimentKind::fig4_msweep:
            return {PrecoderMethod::gps, PrecoderMethod::mcmmse};
        }
        return {};
    }

    void ExperimentSpec::validate() const
    {
        auto check_gain = [](double g, const char *name) {
            if (!(g >= 0.0 && g <= 1.0))
                throw InvalidSpec(std::string("Cross gain ") + name + " must lie in [0, 1].");
        };
        if (a_values && a_values->empty())
            throw InvalidSpec("Sweep axis a_values is empty.");
        if (b_values && b_values->empty())
            throw InvalidSpec("Sweep axis b_values is empty.");
        if (m_values && m_values->empty())
            throw InvalidSpec("Sweep axis M_values is empty.");
        check_gain(a, "a");
        check_gain(b, "b");
        for (double v : a_values.value_or(std::vector<double>{}))
            check_gain(v, "a");
        for (double v : b_values.value_or(std::vector<double>{}))
            check_gain(v, "b");
        for (std::size_t M : m_values.value_or(std::vector<std::size_t>{}))
            if (M == 0)
                throw InvalidSpec("M values must be positive.");
        if (kind != ExperimentKind::asymptote_demo && n_trials < 2)
            throw InvalidSpec("At least 2 trials are required.");
        if (chunks == 0)
            throw InvalidSpec("chunks must be positive.");
        if (!std::isfinite(p_f_db) || !std::isfinite(p_r_db))
            throw InvalidSpec("Powers must be finite.");
        if (!output_path.empty())
        {
            const std::filesystem::path parent = std::filesystem::path(output_path).parent_path();
            if (!parent.empty() && !std::filesystem::is_directory(parent))
                throw InvalidSpec("Output directory '" + parent.string() + "' does not exist.");
        }
        try
        {
            SystemConfig c = config;
            if (single_user_kind(kind))
                c.users_per_cell = 1;
            c.validate(true);
        }
        catch (const InvalidConfig &e)
        {
            throw InvalidSpec(e.what());
        }
    }

    void apply_setting(ExperimentSpec &spec, std::string_view key, std::string_view value)
    {
        key = trim(key);
        value = trim(value);
        if (key == "L")
            spec.config.num_cells = parse_number<std::size_t>(key, value);
        else if (key == "K")
            spec.config.users_per_cell = parse_number<std::size_t>(key, value);
        else if (key == "M")
            spec.config.antennas = parse_number<std::size_t>(key, value);
        else if (key == "tau")
            spec.config.pilot_length = parse_number<std::size_t>(key, value);
        else if (key == "p_f_db")
        {
            spec.p_f_db = parse_number<double>(key, value);
            spec.config.forward_power = db_to_linear(spec.p_f_db);
        }
        else if (key == "p_r_db")
        {
            spec.p_r_db = parse_number<double>(key, value);
            spec.config.reverse_power = db_to_linear(spec.p_r_db);
        }
        else if (key == "gamma")
            spec.config.gamma = parse_number<double>(key, value);
        else if (key == "a")
            spec.a = parse_number<double>(key, value);
        else if (key == "b")
            spec.b = parse_number<double>(key, value);
        else if (key == "seed")
            spec.config.rng_seed = parse_number<std::uint64_t>(key, value);
        else if (key == "trials")
            spec.n_trials = parse_number<std::size_t>(key, value);
        else if (key == "a_values")
            spec.a_values = parse_list<double>(key, value);
        else if (key == "b_values")
            spec.b_values = parse_list<double>(key, value);
        else if (key == "M_values")
            spec.m_values = parse_list<std::size_t>(key, value);
        else if (key == "chunks")
            spec.chunks = parse_number<std::size_t>(key, value);
        else if (key == "threads")
            spec.threads = parse_number<std::size_t>(key, value);
        else if (key == "out")
            spec.output_path = std::string(value);
        else if (key == "methods")
        {
            spec.methods.clear();
            for (std::string_view name : split_list(value))
            {
                const auto m = parse_precoder_method(name);
                if (!m)
                    throw InvalidSpec("Unknown precoding method '" + std::string(name) + "'.");
                spec.methods.push_back(*m);
            }
        }
        else
            throw InvalidSpec("Unknown config key '" + std::string(key) + "'.");
    }

    void load_config_file(ExperimentSpec &spec, const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw IoError("Cannot open config file '" + path + "'.");
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line))
        {
            ++line_no;
            std::string_view text(line);
            if (const auto hash = text.find('#'); hash != std::string_view::npos)
                text = text.substr(0, hash);
            text = trim(text);
            if (text.empty())
                continue;
            const auto eq = text.find('=');
            if (eq == std::string_view::npos)
                throw InvalidSpec(path + ":" + std::to_string(line_no) + ": expected 'key = value'.");
            try
            {
                apply_setting(spec, text.substr(0, eq), text.substr(eq + 1));
            }
            catch (const InvalidSpec &e)
            {
                throw InvalidSpec(path + ":" + std::to_string(line_no) + ": " + e.what());
            }
        }
    }

    std::vector<ResultRow> run_experiment(const ExperimentSpec &spec)
    {
        spec.validate();
        const std::vector<SweepPoint> points = sweep_points(spec);

        std::size_t workers = spec.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : spec.threads;
        workers = std::min(workers, points.size());
        // A single point gets the threads for its trials instead.
        const std::size_t mc_threads = points.size() == 1 ? spec.threads : 1;

        std::vector<std::vector<ResultRow>> per_point(points.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < points.size(); i = next++)
                per_point[i] = evaluate_point(spec, points[i], mc_threads);
        };
        if (workers <= 1)
            worker();
        else
        {
            std::vector<std::jthread> pool;
            for (std::size_t t = 0; t < workers; ++t)
                pool.emplace_back(worker);
        }

        std::vector<ResultRow> rows;
        for (auto &point_rows : per_point)
            for (ResultRow &row : point_rows)
                rows.push_back(std::move(row));
        return rows;
    }

    std::string format_results_csv(const std::vector<ResultRow> &rows)
    {
        std::ostringstream out;
        out << results_csv_header << '\n';
        for (const ResultRow &r : rows)
        {
            const std::string prefix = csv_field(r.experiment) + ',' + csv_field(r.method) + ',' + format_double(r.a) +
                                       ',' + format_double(r.b) + ',' + std::to_string(r.M) + ',' +
                                       std::to_string(r.K) + ',' + std::to_string(r.L) + ',' + std::to_string(r.tau) +
                                       ',' + format_double(r.p_f_db) + ',' + format_double(r.p_r_db) + ',' +
                                       format_double(r.gamma) + ',' + std::to_string(r.seed) + ',' +
                                       std::to_string(r.trials) + ',';
            if (!r.error.empty())
            {
                out << prefix << ",,,,,," << csv_field(r.error) << '\n';
                continue;
            }
            for (std::size_t u = 0; u < r.rates.size(); ++u)
            {
                out << prefix << u / r.K << ',' << u % r.K << ',' << format_double(r.rates[u]) << ','
                    << format_double(r.stderrs[u]) << ',' << format_double(r.min_rate) << ','
                    << (r.closed_form.empty() ? std::string() : format_double(r.closed_form[u])) << ",\n";
            }
        }
        return out.str();
    }

    void write_results(const std::vector<ResultRow> &rows, const std::string &path)
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("Cannot open '" + path + "' for writing.");
        out << format_results_csv(rows);
        out.flush();
        if (!out)
            throw IoError("Failed while writing '" + path + "'.");
    }
}
