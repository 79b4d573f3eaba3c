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

#include "pilotmimo/channel.hpp"
#include "pilotmimo/errors.hpp"
#include "pilotmimo/model.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>

using namespace pilotmimo;

namespace
{
    SystemConfig small_config(std::size_t L, std::size_t K, std::size_t M, std::size_t tau)
    {
        SystemConfig c;
        c.num_cells = L;
        c.users_per_cell = K;
        c.antennas = M;
        c.pilot_length = tau;
        return c;
    }

    // Y_l built entry by entry: y(t, m) = sum_j sum_k sqrt(p_r tau beta_jlk) psi_jk(t) h_jlk(m).
    arma::cx_mat training_by_loops(const ChannelSet &ch, const PilotBook &pilots, const GainTensor &betas,
                                   const SystemConfig &cfg, std::size_t l)
    {
        const std::size_t L = cfg.num_cells, K = cfg.users_per_cell, M = cfg.antennas, tau = cfg.pilot_length;
        arma::cx_mat y(tau, M, arma::fill::zeros);
        for (std::size_t t = 0; t < tau; ++t)
            for (std::size_t m = 0; m < M; ++m)
            {
                std::complex<double> acc = 0.0;
                for (std::size_t j = 0; j < L; ++j)
                    for (std::size_t k = 0; k < K; ++k)
                        acc += std::sqrt(cfg.reverse_power * tau * betas(j, l, k)) * pilots[j](t, k) * ch(j, l)(k, m);
                y(t, m) = acc;
            }
        return y;
    }
}

TEST_CASE("fading entries have unit variance", "[channel]")
{
    const auto cfg = small_config(1, 1, 1, 1);
    Rng rng(99);
    const int n = 100000;
    double power = 0.0, re2 = 0.0, im2 = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const std::complex<double> h = draw_channels(cfg, rng)(0, 0)(0, 0);
        power += std::norm(h);
        re2 += h.real() * h.real();
        im2 += h.imag() * h.imag();
    }
    CHECK(std::abs(power / n - 1.0) < 0.02);
    CHECK(std::abs(re2 / n - 0.5) < 0.01);
    CHECK(std::abs(im2 / n - 0.5) < 0.01);
}

TEST_CASE("channel draws are reproducible", "[channel]")
{
    auto cfg = small_config(2, 2, 4, 4);
    cfg.rng_seed = 1234;
    const auto a = draw_channels(cfg, 17);
    const auto b = draw_channels(cfg, 17);
    const auto c = draw_channels(cfg, 18);
    for (std::size_t i = 0; i < a.h.size(); ++i)
    {
        CHECK(arma::approx_equal(a.h[i], b.h[i], "absdiff", 0.0));
        CHECK(!arma::approx_equal(a.h[i], c.h[i], "absdiff", 1e-3));
    }
    CHECK(derive_seed(1, Stream::channels, 0) != derive_seed(1, Stream::training_noise, 0));
    CHECK(derive_seed(1, Stream::channels, 0) != derive_seed(2, Stream::channels, 0));
}

TEST_CASE("channels of different cells are uncorrelated", "[channel]")
{
    const auto cfg = small_config(2, 1, 4, 1);
    Rng rng(5);
    const int n = 100000;
    std::complex<double> cross = 0.0;
    double p11 = 0.0, p21 = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const auto ch = draw_channels(cfg, rng);
        const auto a = ch(0, 0)(0, 0), b = ch(1, 0)(0, 0);
        cross += a * std::conj(b);
        p11 += std::norm(a);
        p21 += std::norm(b);
    }
    CHECK(std::abs(cross) / std::sqrt(p11 * p21) < 0.02);
}

TEST_CASE("training without noise", "[channel]")
{
    SECTION("zero gains give zero observation")
    {
        const auto cfg = small_config(2, 2, 4, 4);
        const auto sc = build_scenario(ScenarioSpec::benchmark(0.5, 0.1, 2), cfg);
        const GainTensor zero(2, 2, 0.0);
        Rng rng(3);
        const auto ch = draw_channels(cfg, rng);
        const auto obs = synth_training(ch, sc.pilots, zero, cfg, rng, TrainingNoise::off);
        for (const auto &y : obs.y)
            CHECK(arma::norm(y, "fro") == 0.0);
    }

    SECTION("one cell one user is an outer product")
    {
        auto cfg = small_config(1, 1, 3, 2);
        const PilotBook pilots({dft_unitary(2).col(1)});
        GainTensor g(1, 1, 1.0);
        Rng rng(4);
        const auto ch = draw_channels(cfg, rng);
        const auto obs = synth_training(ch, pilots, g, cfg, rng, TrainingNoise::off);
        const arma::cx_mat expected = std::sqrt(cfg.reverse_power * 2.0) * pilots[0] * ch(0, 0);
        CHECK(arma::norm(obs.y[0] - expected, "fro") < 1e-12);
    }

    SECTION("shared pilot superposes both cells")
    {
        const auto cfg = small_config(2, 1, 4, 4);
        const auto sc = build_scenario(ScenarioSpec::shared_pilot(0.3, 0.3, 2), cfg);
        Rng rng(8);
        const auto ch = draw_channels(cfg, rng);
        const auto obs = synth_training(ch, sc.pilots, sc.gains, cfg, rng, TrainingNoise::off);
        const double prt = cfg.reverse_power * 4.0;
        for (std::size_t l = 0; l < 2; ++l)
        {
            const arma::cx_mat proj = sc.pilots[0].t() * obs.y[l];
            const arma::cx_mat expected =
                std::sqrt(prt) * (std::sqrt(sc.gains(0, l, 0)) * ch(0, l) + std::sqrt(sc.gains(1, l, 0)) * ch(1, l));
            CHECK(arma::norm(proj - expected, "fro") < 1e-12);
            CHECK(arma::norm(obs.y[l] - training_by_loops(ch, sc.pilots, sc.gains, cfg, l), "fro") < 1e-12);
        }
    }

    SECTION("orthogonal pilots separate users exactly")
    {
        const auto cfg = small_config(2, 2, 4, 4);
        const auto sc = build_scenario(ScenarioSpec::benchmark(0.6, 0.1, 2), cfg);
        Rng rng(9);
        const auto ch = draw_channels(cfg, rng);
        const auto obs = synth_training(ch, sc.pilots, sc.gains, cfg, rng, TrainingNoise::off);
        const double prt = cfg.reverse_power * 4.0;
        for (std::size_t l = 0; l < 2; ++l)
            for (std::size_t j = 0; j < 2; ++j)
                for (std::size_t k = 0; k < 2; ++k)
                {
                    const arma::cx_rowvec proj = sc.pilots[j].col(k).t() * obs.y[l];
                    const arma::cx_rowvec expected = std::sqrt(prt * sc.gains(j, l, k)) * ch(j, l).row(k);
                    CHECK(arma::norm(proj - expected) < 1e-12);
                }
    }
}

TEST_CASE("training with noise matches the loop construction plus noise", "[channel]")
{
    // Benchmark layout: four cells, two pools.
    auto cfg = small_config(4, 2, 8, 4);
    const auto sc = build_scenario(ScenarioSpec::benchmark(0.8, 0.08, 4), cfg);
    const int n = 10000;
    std::vector<arma::cx_mat> mean(4, arma::cx_mat(4, 8, arma::fill::zeros));
    std::vector<arma::mat> noise_power(4, arma::mat(4, 8, arma::fill::zeros));
    for (int i = 0; i < n; ++i)
    {
        auto rng = Rng::for_draw(11, Stream::training_noise, static_cast<std::uint64_t>(i));
        const auto ch = draw_channels(cfg, rng);
        const auto obs = synth_training(ch, sc.pilots, sc.gains, cfg, rng);
        for (std::size_t l = 0; l < 4; ++l)
        {
            mean[l] += obs.y[l];
            noise_power[l] += arma::square(arma::abs(obs.y[l] - training_by_loops(ch, sc.pilots, sc.gains, cfg, l)));
        }
    }
    // Entry variance of Y_l is 1 + p_r tau sum_j sum_k beta_jlk |psi_jk(t)|^2.
    for (std::size_t l = 0; l < 4; ++l)
    {
        double column_sum = 0.0;
        for (std::size_t j = 0; j < 4; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                column_sum += sc.gains(j, l, k) * 0.25; // |psi(t)|^2 = 1 / tau for DFT columns
        const double sd = std::sqrt(1.0 + cfg.reverse_power * 4.0 * column_sum);
        // Standardized empirical mean; its spread is 1 / sqrt(n) = 0.01.
        CHECK((arma::abs(mean[l] / n) / sd).max() < 0.05);
        CHECK(std::abs(arma::accu(noise_power[l]) / (n * 32.0) - 1.0) < 0.02);
    }
}

TEST_CASE("training rejects mismatched shapes", "[channel][errors]")
{
    const auto cfg = small_config(2, 2, 4, 4);
    const auto sc = build_scenario(ScenarioSpec::benchmark(0.5, 0.1, 2), cfg);
    Rng rng(1);
    const auto ch = draw_channels(cfg, rng);

    const PilotBook short_pilots({dft_unitary(2), dft_unitary(2)});
    CHECK_THROWS_AS(synth_training(ch, short_pilots, sc.gains, cfg, rng), ShapeMismatch);
    CHECK_THROWS_AS(synth_training(ch, sc.pilots, GainTensor(2, 1, 1.0), cfg, rng), ShapeMismatch);

    auto bad = ch;
    bad.h[1] = arma::cx_mat(2, 3, arma::fill::zeros);
    CHECK_THROWS_AS(synth_training(bad, sc.pilots, sc.gains, cfg, rng), ShapeMismatch);
}
