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

#include "pilotmimo/pilotmimo.h"

#include "pilotmimo/errors.hpp"
#include "pilotmimo/experiment.hpp"
#include "pilotmimo/model.hpp"
#include "pilotmimo/rates.hpp"

#include <exception>
#include <memory>
#include <new>
#include <string>
#include <utility>
#include <vector>

struct pm_experiment
{
    pilotmimo::ExperimentSpec spec;
};

struct pm_results
{
    struct Line
    {
        std::size_t row;
        bool has_user;
        std::size_t user; // flat j * K + k
    };

    std::vector<pilotmimo::ResultRow> rows;
    std::vector<Line> lines;
};

namespace
{
    thread_local std::string last_error;

    pm_status fail(pm_status status, std::string message)
    {
        last_error = std::move(message);
        return status;
    }

    // Runs f and maps library exceptions onto status codes.
    template <typename F>
    pm_status guarded(F &&f)
    {
        try
        {
            last_error.clear();
            f();
            return PM_OK;
        }
        catch (const pilotmimo::InvalidConfig &e)
        {
            return fail(PM_ERR_INVALID_CONFIG, e.what());
        }
        catch (const pilotmimo::InvalidScenario &e)
        {
            return fail(PM_ERR_INVALID_SCENARIO, e.what());
        }
        catch (const pilotmimo::InvalidSpec &e)
        {
            return fail(PM_ERR_INVALID_SPEC, e.what());
        }
        catch (const pilotmimo::ShapeMismatch &e)
        {
            return fail(PM_ERR_SHAPE_MISMATCH, e.what());
        }
        catch (const pilotmimo::RankDeficient &e)
        {
            return fail(PM_ERR_RANK_DEFICIENT, e.what());
        }
        catch (const pilotmimo::PreconditionViolated &e)
        {
            return fail(PM_ERR_PRECONDITION, e.what());
        }
        catch (const pilotmimo::IoError &e)
        {
            return fail(PM_ERR_IO, e.what());
        }
        catch (const std::bad_alloc &)
        {
            return fail(PM_ERR_INTERNAL, "out of memory");
        }
        catch (const std::exception &e)
        {
            return fail(PM_ERR_INTERNAL, e.what());
        }
        catch (...)
        {
            return fail(PM_ERR_INTERNAL, "unknown error");
        }
    }
}

extern "C" {

const char *pm_status_name(pm_status status)
{
    switch (status)
    {
    case PM_OK:
        return "ok";
    case PM_ERR_INVALID_ARGUMENT:
        return "invalid argument";
    case PM_ERR_INVALID_CONFIG:
        return "invalid config";
    case PM_ERR_INVALID_SCENARIO:
        return "invalid scenario";
    case PM_ERR_INVALID_SPEC:
        return "invalid spec";
    case PM_ERR_SHAPE_MISMATCH:
        return "shape mismatch";
    case PM_ERR_RANK_DEFICIENT:
        return "rank deficient";
    case PM_ERR_PRECONDITION:
        return "precondition violated";
    case PM_ERR_IO:
        return "i/o error";
    case PM_ERR_OUT_OF_RANGE:
        return "out of range";
    case PM_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

const char *pm_last_error(void)
{
    return last_error.c_str();
}

const char *pm_version(void)
{
    return "0.1.0";
}

pm_status pm_experiment_create(const char *name, pm_experiment **out)
{
    if (!name || !out)
        return fail(PM_ERR_INVALID_ARGUMENT, "null argument");
    const auto kind = pilotmimo::parse_experiment_kind(name);
    if (!kind)
        return fail(PM_ERR_INVALID_ARGUMENT, std::string("unknown experiment '") + name + "'");
    return guarded([&] {
        auto *e = new pm_experiment{};
        e->spec.kind = *kind;
        *out = e;
    });
}

void pm_experiment_destroy(pm_experiment *experiment)
{
    delete experiment;
}

pm_status pm_experiment_set(pm_experiment *experiment, const char *key, const char *value)
{
    if (!experiment || !key || !value)
        return fail(PM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { pilotmimo::apply_setting(experiment->spec, key, value); });
}

pm_status pm_experiment_load_config(pm_experiment *experiment, const char *path)
{
    if (!experiment || !path)
        return fail(PM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { pilotmimo::load_config_file(experiment->spec, path); });
}

pm_status pm_experiment_validate(const pm_experiment *experiment)
{
    if (!experiment)
        return fail(PM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { experiment->spec.validate(); });
}

const char *pm_experiment_output_path(const pm_experiment *experiment)
{
    return experiment ? experiment->spec.output_path.c_str() : "";
}

pm_status pm_experiment_run(const pm_experiment *experiment, pm_results **out)
{
    if (!experiment || !out)
        return fail(PM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        auto results = std::make_unique<pm_results>();
        results->rows = pilotmimo::run_experiment(experiment->spec);
        for (std::size_t r = 0; r < results->rows.size(); ++r)
        {
            const auto &row = results->rows[r];
            if (!row.error.empty())
                results->lines.push_back({r, false, 0});
            else
                for (std::size_t u = 0; u < row.rates.size(); ++u)
                    results->lines.push_back({r, true, u});
        }
        *out = results.release();
    });
}

void pm_results_destroy(pm_results *results)
{
    delete results;
}

size_t pm_results_line_count(const pm_results *results)
{
    return results ? results->lines.size() : 0;
}

pm_status pm_results_line(const pm_results *results, size_t index, pm_result_line *out)
{
    if (!results || !out)
        return fail(PM_ERR_INVALID_ARGUMENT, "null argument");
    if (index >= results->lines.size())
        return fail(PM_ERR_OUT_OF_RANGE, "line index " + std::to_string(index) + " out of range");

    const auto &line = results->lines[index];
    const auto &row = results->rows[line.row];
    pm_result_line l{};
    l.experiment = row.experiment.c_str();
    l.method = row.method.c_str();
    l.a = row.a;
    l.b = row.b;
    l.M = row.M;
    l.K = row.K;
    l.L = row.L;
    l.tau = row.tau;
    l.p_f_db = row.p_f_db;
    l.p_r_db = row.p_r_db;
    l.gamma = row.gamma;
    l.seed = row.seed;
    l.trials = row.trials;
    l.has_user = line.has_user ? 1 : 0;
    l.error = row.error.c_str();
    if (line.has_user)
    {
        l.cell = line.user / row.K;
        l.user = line.user % row.K;
        l.rate = row.rates[line.user];
        l.stderr_rate = row.stderrs[line.user];
        l.min_rate = row.min_rate;
        l.has_closed_form = row.closed_form.empty() ? 0 : 1;
        l.closed_form = row.closed_form.empty() ? 0.0 : row.closed_form[line.user];
    }
    *out = l;
    last_error.clear();
    return PM_OK;
}

pm_status pm_results_write_csv(const pm_results *results, const char *path)
{
    if (!results || !path)
        return fail(PM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { pilotmimo::write_results(results->rows, path); });
}

double pm_db_to_linear(double x_db)
{
    return pilotmimo::db_to_linear(x_db);
}

pm_status pm_theta_moments(size_t M, double *m1, double *m2, double *var)
{
    if (!m1 || !m2 || !var)
        return fail(PM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto t = pilotmimo::theta_moments(M);
        *m1 = t.m1;
        *m2 = t.m2;
        *var = t.var;
    });
}

pm_status pm_two_cell_rates(double cross, size_t M, size_t tau, double p_f, double p_r, double *closed_form,
                            double *asymptotic)
{
    if (!closed_form || !asymptotic)
        return fail(PM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        pilotmimo::SystemConfig config;
        config.num_cells = 2;
        config.users_per_cell = 1;
        config.antennas = M;
        config.pilot_length = tau;
        config.forward_power = p_f;
        config.reverse_power = p_r;
        config.validate(true);
        const auto sc = pilotmimo::build_scenario(pilotmimo::ScenarioSpec::shared_pilot(cross, cross, 2), config);
        *closed_form = pilotmimo::closed_form_rate(sc.gains, config, 0);
        *asymptotic = pilotmimo::asymptotic_rate(sc.gains, config, 0).value;
    });
}

} // extern "C"
