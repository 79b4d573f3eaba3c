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

#ifndef PILOTMIMO_EXPERIMENT_HPP
#define PILOTMIMO_EXPERIMENT_HPP

#include "pilotmimo/model.hpp"
#include "pilotmimo/precoding.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pilotmimo
{
    enum class ExperimentKind
    {
        theorem1_verify, // K = 1, shared pilot, ZF: Monte Carlo vs closed form over M
        fig3_sweep,      // benchmark layout, min rate over the (a, b) grid
        fig4_msweep,     // benchmark layout with b = 0.1 a, min rate over M
        asymptote_demo,  // closed form over M next to its large-M limit, no simulation
    };

    std::string_view to_string(ExperimentKind kind);
    std::optional<ExperimentKind> parse_experiment_kind(std::string_view name);

    struct ExperimentSpec
    {
        ExperimentKind kind = ExperimentKind::fig3_sweep;
        SystemConfig config; // powers here are linear and follow p_f_db / p_r_db
        double p_f_db = 20.0;
        double p_r_db = 10.0;
        double a = 0.8;
        double b = 0.08;

        // Unset axes fall back to the scalar a, b or config.antennas. An axis
        // that was set to an empty list is an error.
        std::optional<std::vector<double>> a_values;
        std::optional<std::vector<double>> b_values;
        std::optional<std::vector<std::size_t>> m_values;

        std::vector<PrecoderMethod> methods; // empty selects the experiment's default set
        std::size_t n_trials = 100000;
        std::size_t chunks = 16;
        std::size_t threads = 1; // sweep points evaluated concurrently; 0 = hardware
        std::string output_path;

        // Throws InvalidSpec.
        void validate() const;

        std::vector<PrecoderMethod> effective_methods() const;
    };

    // Applies one key/value pair using the config-file schema. Throws InvalidSpec
    // for unknown keys or unparseable values.
    void apply_setting(ExperimentSpec &spec, std::string_view key, std::string_view value);

    // Reads `key = value` lines; '#' starts a comment. Throws IoError / InvalidSpec.
    void load_config_file(ExperimentSpec &spec, const std::string &path);

    // One evaluated (sweep point, method). Per-user vectors are indexed j * K + k.
    struct ResultRow
    {
        std::string experiment;
        std::string method;
        double a = 0.0, b = 0.0;
        std::size_t M = 0, K = 0, L = 0, tau = 0;
        double p_f_db = 0.0, p_r_db = 0.0, gamma = 0.0;
        std::uint64_t seed = 0;
        std::size_t trials = 0;
        std::vector<double> rates;
        std::vector<double> stderrs;
        double min_rate = 0.0;
        std::vector<double> closed_form; // empty when there is no analytic reference
        std::string error;               // non-empty when this point failed
    };

    // Rows are ordered by sweep index, then by method. Module errors at one
    // point are recorded in that row's error column.
    std::vector<ResultRow> run_experiment(const ExperimentSpec &spec);

    inline constexpr std::string_view results_csv_header =
        "experiment,method,a,b,M,K,L,tau,p_f_db,p_r_db,gamma,seed,trials,cell,user,rate,stderr,min_rate,closed_form,error";

    // One CSV line per user of every successful row, one line per failed row.
    std::string format_results_csv(const std::vector<ResultRow> &rows);

    // Throws IoError naming the path.
    void write_results(const std::vector<ResultRow> &rows, const std::string &path);
}

#endif
