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

// Experiment runner. Talks to the library only through the C API.

#include "pilotmimo/pilotmimo.h"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace
{
    struct Options
    {
        std::string config;
        std::string out;
        std::optional<std::uint64_t> seed;
        std::optional<std::size_t> trials;
        std::optional<std::size_t> threads;
        std::vector<std::string> settings;
        bool quiet = false;
    };

    int report_failure(pm_status status, const std::string &context)
    {
        std::cerr << "pilotmimo: " << context << ": " << pm_status_name(status);
        if (*pm_last_error())
            std::cerr << ": " << pm_last_error();
        std::cerr << '\n';
        return 1;
    }

    struct ExperimentHandle
    {
        pm_experiment *ptr = nullptr;
        ~ExperimentHandle() { pm_experiment_destroy(ptr); }
    };

    struct ResultsHandle
    {
        pm_results *ptr = nullptr;
        ~ResultsHandle() { pm_results_destroy(ptr); }
    };

    void print_summary(const pm_results *results)
    {
        std::printf("%-8s %6s %6s %5s %6s %10s %10s %12s  %s\n", "method", "a", "b", "M", "cell", "rate",
                    "stderr", "closed_form", "min_rate");
        const std::size_t n = pm_results_line_count(results);
        for (std::size_t i = 0; i < n; ++i)
        {
            pm_result_line line;
            if (pm_results_line(results, i, &line) != PM_OK)
                continue;
            if (!line.has_user)
            {
                std::printf("%-8s %6.3g %6.3g %5zu  error: %s\n", line.method, line.a, line.b, line.M, line.error);
                continue;
            }
            char closed[32] = "-";
            if (line.has_closed_form)
                std::snprintf(closed, sizeof closed, "%.6g", line.closed_form);
            std::printf("%-8s %6.3g %6.3g %5zu %3zu/%-2zu %10.6g %10.3g %12s  %.6g\n", line.method, line.a, line.b,
                        line.M, line.cell, line.user, line.rate, line.stderr_rate, closed, line.min_rate);
        }
    }

    int run(const std::string &name, const Options &opt)
    {
        ExperimentHandle exp;
        if (pm_status s = pm_experiment_create(name.c_str(), &exp.ptr); s != PM_OK)
            return report_failure(s, "create");

        if (!opt.config.empty())
            if (pm_status s = pm_experiment_load_config(exp.ptr, opt.config.c_str()); s != PM_OK)
                return report_failure(s, "config");

        for (const std::string &kv : opt.settings)
        {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
            {
                std::cerr << "pilotmimo: --set expects key=value, got '" << kv << "'\n";
                return 2;
            }
            if (pm_status s = pm_experiment_set(exp.ptr, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
                s != PM_OK)
                return report_failure(s, "--set " + kv);
        }

        std::map<std::string, std::string> overrides;
        if (opt.seed)
            overrides["seed"] = std::to_string(*opt.seed);
        if (opt.trials)
            overrides["trials"] = std::to_string(*opt.trials);
        if (opt.threads)
            overrides["threads"] = std::to_string(*opt.threads);
        if (!opt.out.empty())
            overrides["out"] = opt.out;
        for (const auto &[key, value] : overrides)
            if (pm_status s = pm_experiment_set(exp.ptr, key.c_str(), value.c_str()); s != PM_OK)
                return report_failure(s, "--" + key);

        if (pm_status s = pm_experiment_validate(exp.ptr); s != PM_OK)
            return report_failure(s, "validate");

        ResultsHandle results;
        if (pm_status s = pm_experiment_run(exp.ptr, &results.ptr); s != PM_OK)
            return report_failure(s, "run");

        const std::string out = pm_experiment_output_path(exp.ptr);
        if (!out.empty())
            if (pm_status s = pm_results_write_csv(results.ptr, out.c_str()); s != PM_OK)
                return report_failure(s, "write");

        if (!opt.quiet)
            print_summary(results.ptr);
        return 0;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Multi-cell TDD pilot contamination and precoding experiments"};
    app.set_version_flag("--version", pm_version());
    app.require_subcommand(1);

    Options opt;
    const std::vector<std::pair<std::string, std::string>> experiments = {
        {"theorem1_verify", "Monte Carlo vs closed-form rate, one user per cell, shared pilot, ZF"},
        {"fig3_sweep", "Min rate over a grid of cross gains (a, b), ZF vs multi-cell MMSE"},
        {"fig4_msweep", "Min rate over antenna counts with b = 0.1 a, GPS vs multi-cell MMSE"},
        {"asymptote_demo", "Closed-form rate over M next to its large-M limit"},
    };
    for (const auto &[name, description] : experiments)
    {
        CLI::App *sub = app.add_subcommand(name, description);
        sub->add_option("--config", opt.config, "Key/value config file")->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out, "CSV output path");
        sub->add_option("--seed", opt.seed, "Master RNG seed");
        sub->add_option("--trials", opt.trials, "Monte Carlo trials per sweep point");
        sub->add_option("--threads", opt.threads, "Worker threads (0 = all cores)");
        sub->add_option("--set", opt.settings, "Extra config entry key=value (repeatable)");
        sub->add_flag("-q,--quiet", opt.quiet, "Do not print the summary table");
    }

    CLI11_PARSE(app, argc, argv);

    for (CLI::App *sub : app.get_subcommands())
        return run(sub->get_name(), opt);
    return 2;
}
