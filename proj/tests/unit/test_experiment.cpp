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

#include "oracles.hpp"

#include "pilotmimo/errors.hpp"
#include "pilotmimo/experiment.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pilotmimo;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;

namespace
{
    std::filesystem::path scratch(const std::string &name)
    {
        const auto dir = std::filesystem::temp_directory_path() / "pilotmimo_test_experiment";
        std::filesystem::create_directories(dir);
        return dir / name;
    }

    std::string slurp(const std::filesystem::path &p)
    {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    ExperimentSpec small_spec(ExperimentKind kind)
    {
        ExperimentSpec s;
        s.kind = kind;
        s.n_trials = 200;
        s.chunks = 4;
        return s;
    }
}

TEST_CASE("experiment names", "[experiment]")
{
    for (auto k : {ExperimentKind::theorem1_verify, ExperimentKind::fig3_sweep, ExperimentKind::fig4_msweep,
                   ExperimentKind::asymptote_demo})
        CHECK(parse_experiment_kind(to_string(k)) == k);
    CHECK(!parse_experiment_kind("fig5"));
}

TEST_CASE("settings use the config schema", "[experiment][config]")
{
    ExperimentSpec s;
    apply_setting(s, "L", "2");
    apply_setting(s, " p_f_db ", " 30 ");
    apply_setting(s, "p_r_db", "0");
    apply_setting(s, "M_values", "2, 4,8");
    apply_setting(s, "a_values", "0.1,0.5");
    apply_setting(s, "methods", "zf,MCMMSE");
    apply_setting(s, "seed", "18446744073709551615");
    CHECK(s.config.num_cells == 2);
    CHECK_THAT(s.config.forward_power, WithinRel(1000.0, 1e-12));
    CHECK(s.config.reverse_power == 1.0);
    CHECK(*s.m_values == std::vector<std::size_t>{2, 4, 8});
    CHECK(*s.a_values == std::vector<double>{0.1, 0.5});
    CHECK(s.methods == std::vector<PrecoderMethod>{PrecoderMethod::zf, PrecoderMethod::mcmmse});
    CHECK(s.config.rng_seed == 18446744073709551615ull);

    CHECK_THROWS_AS(apply_setting(s, "antennas", "8"), InvalidSpec);
    CHECK_THROWS_AS(apply_setting(s, "M", "eight"), InvalidSpec);
    CHECK_THROWS_AS(apply_setting(s, "M", "-8"), InvalidSpec);
    CHECK_THROWS_AS(apply_setting(s, "gamma", "1.0x"), InvalidSpec);
    CHECK_THROWS_AS(apply_setting(s, "methods", "zf,mmse"), InvalidSpec);
}

TEST_CASE("config files", "[experiment][config]")
{
    const auto path = scratch("good.cfg");
    {
        std::ofstream out(path);
        out << "# benchmark\nL = 4\n\nK=2   # two users\nb_values = 0.01, 0.1\ntrials = 500\n";
    }
    ExperimentSpec s;
    load_config_file(s, path.string());
    CHECK(s.config.num_cells == 4);
    CHECK(s.config.users_per_cell == 2);
    CHECK(s.b_values->size() == 2);
    CHECK(s.n_trials == 500);

    const auto bad = scratch("bad.cfg");
    {
        std::ofstream out(bad);
        out << "L = 4\nwhatever = 3\n";
    }
    CHECK_THROWS_WITH(load_config_file(s, bad.string()), ContainsSubstring("bad.cfg:2"));
    CHECK_THROWS_AS(load_config_file(s, scratch("missing.cfg").string()), IoError);
}

TEST_CASE("spec validation", "[experiment][errors]")
{
    auto s = small_spec(ExperimentKind::fig3_sweep);
    CHECK_NOTHROW(s.validate());

    SECTION("empty axes")
    {
        s.a_values = std::vector<double>{};
        CHECK_THROWS_AS(s.validate(), InvalidSpec);
        CHECK_THROWS_AS(run_experiment(s), InvalidSpec);
        s.a_values.reset();
        s.m_values = std::vector<std::size_t>{};
        CHECK_THROWS_AS(s.validate(), InvalidSpec);
    }
    SECTION("other problems")
    {
        s.n_trials = 1;
        CHECK_THROWS_AS(s.validate(), InvalidSpec);
        s = small_spec(ExperimentKind::fig3_sweep);
        s.b_values = std::vector<double>{0.5, 1.5};
        CHECK_THROWS_AS(s.validate(), InvalidSpec);
        s = small_spec(ExperimentKind::fig3_sweep);
        s.output_path = "/nonexistent_dir_for_sure/out.csv";
        CHECK_THROWS_AS(s.validate(), InvalidSpec);
        s = small_spec(ExperimentKind::fig3_sweep);
        s.config.users_per_cell = 20;
        CHECK_THROWS_AS(s.validate(), InvalidSpec);
    }
}

TEST_CASE("default method sets", "[experiment]")
{
    using V = std::vector<PrecoderMethod>;
    CHECK(small_spec(ExperimentKind::theorem1_verify).effective_methods() == V{PrecoderMethod::zf});
    CHECK(small_spec(ExperimentKind::fig3_sweep).effective_methods() == V{PrecoderMethod::zf, PrecoderMethod::mcmmse});
    CHECK(small_spec(ExperimentKind::fig4_msweep).effective_methods() == V{PrecoderMethod::gps, PrecoderMethod::mcmmse});
}

TEST_CASE("csv with no rows is just the header", "[experiment][csv]")
{
    CHECK(format_results_csv({}) == std::string(results_csv_header) + "\n");
    const auto path = scratch("empty.csv");
    write_results({}, path.string());
    CHECK(slurp(path) == std::string(results_csv_header) + "\n");
    CHECK_THROWS_AS(write_results({}, "/nonexistent_dir_for_sure/x.csv"), IoError);
}

TEST_CASE("csv round trip keeps nine significant digits", "[experiment][csv]")
{
    ResultRow row;
    row.experiment = "fig3_sweep";
    row.method = "ZF";
    row.a = 0.123456789123;
    row.b = 1.0 / 3.0;
    row.M = 8;
    row.K = 1;
    row.L = 2;
    row.tau = 4;
    row.seed = 42;
    row.trials = 10;
    row.rates = {1.23456789012345, 2.0e-7};
    row.stderrs = {0.001, 0.002};
    row.min_rate = 2.0e-7;
    row.closed_form = {1.2345678, std::numeric_limits<double>::infinity()};

    const auto t = oracle::parse_csv(format_results_csv({row}));
    CHECK(t.header == oracle::split_csv_line(std::string(results_csv_header)));
    REQUIRE(t.rows.size() == 2);
    for (std::size_t u = 0; u < 2; ++u)
    {
        const auto &r = t.rows[u];
        REQUIRE(r.size() == t.header.size());
        CHECK(std::stoul(r[t.column("cell")]) == u);
        CHECK(r[t.column("user")] == "0");
        CHECK_THAT(std::stod(r[t.column("rate")]), WithinRel(row.rates[u], 5e-9));
        CHECK_THAT(std::stod(r[t.column("a")]), WithinRel(row.a, 5e-9));
        CHECK(r[t.column("error")].empty());
    }
    CHECK(std::isinf(std::stod(t.rows[1][t.column("closed_form")])));
}

TEST_CASE("failed points become error rows", "[experiment][csv]")
{
    auto s = small_spec(ExperimentKind::fig3_sweep);
    s.config.pilot_length = 3; // only one pilot pool for K = 2
    s.a_values = std::vector<double>{0.2, 0.4};
    const auto rows = run_experiment(s);
    REQUIRE(rows.size() == 4);
    for (const auto &r : rows)
    {
        CHECK(!r.error.empty());
        CHECK(r.rates.empty());
    }
    const auto t = oracle::parse_csv(format_results_csv(rows));
    REQUIRE(t.rows.size() == 4);
    for (const auto &r : t.rows)
    {
        CHECK(r[t.column("rate")].empty());
        CHECK(r[t.column("cell")].empty());
        CHECK_THAT(r[t.column("error")], ContainsSubstring("pool"));
    }
}

TEST_CASE("sweeps are ordered and reproducible", "[experiment]")
{
    auto s = small_spec(ExperimentKind::fig3_sweep);
    s.a_values = std::vector<double>{0.2, 0.8};
    s.b_values = std::vector<double>{0.02, 0.08};
    s.threads = 2;
    const auto rows = run_experiment(s);
    REQUIRE(rows.size() == 8);
    CHECK(rows[0].a == 0.2);
    CHECK(rows[0].b == 0.02);
    CHECK(rows[0].method == "ZF");
    CHECK(rows[1].method == "MCMMSE");
    CHECK(rows[2].b == 0.08);
    CHECK(rows[4].a == 0.8);

    s.threads = 1;
    const auto again = run_experiment(s);
    CHECK(format_results_csv(rows) == format_results_csv(again));

    s.config.rng_seed = 2;
    CHECK(format_results_csv(rows) != format_results_csv(run_experiment(s)));
}

TEST_CASE("antenna sweep: rows and ordering of methods", "[experiment][mc]")
{
    auto s = small_spec(ExperimentKind::fig4_msweep);
    s.m_values = std::vector<std::size_t>{2, 4, 8, 16};
    s.n_trials = 2000;
    const auto rows = run_experiment(s);
    REQUIRE(rows.size() == 8);
    for (std::size_t i = 0; i < 4; ++i)
    {
        const auto &gps = rows[2 * i], &mc = rows[2 * i + 1];
        CHECK(gps.method == "GPS");
        CHECK(mc.method == "MCMMSE");
        CHECK(gps.M == (2u << i));
        CHECK(gps.b == 0.1 * gps.a);
        CHECK(mc.min_rate >= gps.min_rate);
    }
}

TEST_CASE("single-user verification run", "[experiment][mc]")
{
    auto s = small_spec(ExperimentKind::theorem1_verify);
    s.config.num_cells = 2;
    s.a = s.b = 0.5;
    s.m_values = std::vector<std::size_t>{8};
    s.n_trials = 20000;
    const auto rows = run_experiment(s);
    REQUIRE(rows.size() == 1);
    const auto &r = rows[0];
    CHECK(r.K == 1);
    REQUIRE(r.closed_form.size() == 2);
    for (std::size_t j = 0; j < 2; ++j)
        CHECK(std::abs(r.rates[j] - r.closed_form[j]) / r.closed_form[j] < 0.02);
}

TEST_CASE("asymptote demo is analytic", "[experiment]")
{
    auto s = small_spec(ExperimentKind::asymptote_demo);
    s.config.num_cells = 2;
    s.a = s.b = 0.0;
    s.m_values = std::vector<std::size_t>{4, 64};
    const auto rows = run_experiment(s);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].trials == 0);
    CHECK(rows[1].rates[0] > rows[0].rates[0]);
    CHECK(std::isinf(rows[0].closed_form[0]));
    CHECK_THAT(format_results_csv(rows), ContainsSubstring(",inf,"));
}
