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

#ifndef PILOTMIMO_RATES_HPP
#define PILOTMIMO_RATES_HPP

#include "pilotmimo/model.hpp"
#include "pilotmimo/precoding.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace pilotmimo
{
    // Moments of theta = sqrt(sum_{m=1}^M |u_m|^2) with u_m i.i.d. CN(0, 1),
    // a chi variable with 2M degrees of freedom scaled by 1/sqrt(2).
    struct ThetaMoments
    {
        double m1 = 0.0;  // Gamma(M + 1/2) / Gamma(M)
        double m2 = 0.0;  // M
        double var = 0.0; // m2 - m1^2, computed without cancellation
    };

    ThetaMoments theta_moments(std::size_t M);

    // Worst-case-noise bound log2(1 + |E g|^2 / (1 + var g + sum E|g_int|^2)).
    double achievable_rate(std::complex<double> signal_mean, double signal_var, double interference_power);

    // Moment table of one user (j, k). Interference entries are indexed
    // l * K + i over all transmitted streams; the user's own entry is zero.
    struct UserMoments
    {
        std::complex<double> signal_mean;
        double signal_var = 0.0; // E|g - E g|^2 of the effective own-stream gain
        std::vector<double> interference_powers;
        double interference_total = 0.0;

        double stderr_signal_mean = 0.0;
        double stderr_signal_var = 0.0;
        double stderr_interference = 0.0;

        double rate = 0.0;
        double rate_stderr = 0.0; // delta method over the per-trial moment samples
    };

    struct RateReport
    {
        PrecoderMethod method = PrecoderMethod::zf;
        std::size_t num_cells = 0;
        std::size_t users_per_cell = 0;
        std::size_t trials = 0;
        std::vector<UserMoments> users; // index j * K + k

        double min_rate = 0.0;
        double min_rate_stderr = 0.0;
        std::size_t min_user = 0; // flat index of the user attaining min_rate

        const UserMoments &user(std::size_t j, std::size_t k) const { return users[j * users_per_cell + k]; }
        double rate(std::size_t j, std::size_t k) const { return user(j, k).rate; }
    };

    struct MonteCarloOptions
    {
        // Trials are split into this many contiguous chunks whose moment sums
        // are merged in chunk order; results depend on the chunk count but not
        // on the thread count.
        std::size_t chunks = 16;
        std::size_t threads = 1; // 0 selects std::thread::hardware_concurrency()
        bool perfect_csi = false; // test hook: precode on the true channel, delta = 0
    };

    // Simulates n_trials coherence blocks (channels, training, estimation,
    // precoding at every cell) and estimates the moments of every effective
    // gain. Trial t draws from streams seeded by (config.rng_seed, purpose, t).
    // Throws PreconditionViolated if n_trials < 2; RankDeficient propagates.
    RateReport monte_carlo_rates(const SystemConfig &config, const GainTensor &betas, const PilotBook &pilots,
                                 PrecoderMethod method, std::size_t n_trials, const MonteCarloOptions &options = {});

    // Evaluates several precoders on the same channel and training draws.
    std::vector<RateReport> monte_carlo_rates(const SystemConfig &config, const GainTensor &betas,
                                              const PilotBook &pilots, std::span<const PrecoderMethod> methods,
                                              std::size_t n_trials, const MonteCarloOptions &options = {});

    // Rebuilds rate and min_rate of a report from its stored moments.
    void assemble_rates(RateReport &report);

    // Closed-form moments for one user per cell, one pilot shared by all
    // cells and matched-filter (K = 1 ZF) precoding.
    struct ClosedFormMoments
    {
        double signal_mean = 0.0;
        double signal_var = 0.0;
        std::vector<double> interference; // per base station l; entry j is zero
        double interference_total = 0.0;
    };

    // Throws PreconditionViolated if K != 1.
    ClosedFormMoments closed_form_moments(const GainTensor &betas, const SystemConfig &config, std::size_t j);

    // Exact rate of the user in cell j for any M under the same hypotheses.
    double closed_form_rate(const GainTensor &betas, const SystemConfig &config, std::size_t j);

    struct AsymptoticRate
    {
        double value = 0.0;
        bool unbounded = false; // no contaminating cell: the rate grows without limit in M
    };

    // Limit of closed_form_rate as M grows.
    AsymptoticRate asymptotic_rate(const GainTensor &betas, const SystemConfig &config, std::size_t j);
}

#endif
