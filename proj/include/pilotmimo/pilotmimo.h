/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * pilotmimo: multi-cell TDD pilot contamination and precoding simulator
 * Copyright (C) 2026 The pilotmimo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PILOTMIMO_H
#define PILOTMIMO_H

#include <stddef.h>
#include <stdint.h>

#if defined(PILOTMIMO_BUILDING_LIBRARY)
#define PM_API __attribute__((visibility("default")))
#else
#define PM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pm_status
{
    PM_OK = 0,
    PM_ERR_INVALID_ARGUMENT = 1, /* null handle, bad key, bad value */
    PM_ERR_INVALID_CONFIG = 2,
    PM_ERR_INVALID_SCENARIO = 3,
    PM_ERR_INVALID_SPEC = 4,
    PM_ERR_SHAPE_MISMATCH = 5,
    PM_ERR_RANK_DEFICIENT = 6,
    PM_ERR_PRECONDITION = 7,
    PM_ERR_IO = 8,
    PM_ERR_OUT_OF_RANGE = 9,
    PM_ERR_INTERNAL = 99
} pm_status;

/* Opaque handles. */
typedef struct pm_experiment pm_experiment;
typedef struct pm_results pm_results;

/* Static name of a status code. */
PM_API const char *pm_status_name(pm_status status);

/* Message of the last failing call on this thread; empty if none. */
PM_API const char *pm_last_error(void);

PM_API const char *pm_version(void);

/* Experiment description. The name is one of theorem1_verify, fig3_sweep,
 * fig4_msweep, asymptote_demo. Defaults describe the 4-cell benchmark
 * (L=4 K=2 M=8 tau=4, p_f=20 dB, p_r=10 dB, gamma=1, a=0.8, b=0.08). */
PM_API pm_status pm_experiment_create(const char *name, pm_experiment **out);
PM_API void pm_experiment_destroy(pm_experiment *experiment);

/* Same keys as the config file (L, K, M, tau, p_f_db, p_r_db, gamma, a, b,
 * seed, trials, a_values, b_values, M_values, methods, chunks, threads, out). */
PM_API pm_status pm_experiment_set(pm_experiment *experiment, const char *key, const char *value);
PM_API pm_status pm_experiment_load_config(pm_experiment *experiment, const char *path);
PM_API pm_status pm_experiment_validate(const pm_experiment *experiment);

/* Configured output path, or "" when unset. Valid until the next set call. */
PM_API const char *pm_experiment_output_path(const pm_experiment *experiment);

PM_API pm_status pm_experiment_run(const pm_experiment *experiment, pm_results **out);
PM_API void pm_results_destroy(pm_results *results);

/* Results are exposed per CSV line: one line per user of each evaluated
 * (sweep point, method), or a single line for a failed point. */
typedef struct pm_result_line
{
    const char *experiment;
    const char *method;
    double a, b;
    size_t M, K, L, tau;
    double p_f_db, p_r_db, gamma;
    uint64_t seed;
    size_t trials;
    int has_user;        /* 0 for error lines */
    size_t cell, user;
    double rate, stderr_rate, min_rate;
    int has_closed_form;
    double closed_form;
    const char *error;   /* "" on success */
} pm_result_line;

PM_API size_t pm_results_line_count(const pm_results *results);

/* Strings in *out stay valid for the lifetime of results. */
PM_API pm_status pm_results_line(const pm_results *results, size_t index, pm_result_line *out);

PM_API pm_status pm_results_write_csv(const pm_results *results, const char *path);

/* Analytic helpers. */
PM_API double pm_db_to_linear(double x_db);

PM_API pm_status pm_theta_moments(size_t M, double *m1, double *m2, double *var);

/* Two-cell, one-user, shared-pilot instance with direct gain 1 and cross gain
 * `cross`: rate of cell 0 for M antennas, and its large-M limit (inf when
 * cross == 0). */
PM_API pm_status pm_two_cell_rates(double cross, size_t M, size_t tau, double p_f, double p_r,
                                   double *closed_form, double *asymptotic);

#ifdef __cplusplus
}
#endif

#endif
