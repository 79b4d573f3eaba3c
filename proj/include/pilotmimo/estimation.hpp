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

#ifndef PILOTMIMO_ESTIMATION_HPP
#define PILOTMIMO_ESTIMATION_HPP

#include "pilotmimo/channel.hpp"
#include "pilotmimo/model.hpp"

#include <armadillo>
#include <vector>

namespace pilotmimo
{
    // Estimates H_hat_jl (K x M) held by base station l for every user cell j.
    struct ChannelEstimateSet
    {
        std::size_t num_cells = 0;
        std::vector<arma::cx_mat> h_hat; // index j * L + l

        const arma::cx_mat &operator()(std::size_t j, std::size_t l) const { return h_hat[j * num_cells + l]; }

        // Everything base station l knows: the L blocks H_hat_1l ... H_hat_Ll
        // stacked as an (L K) x M matrix, rows ordered by (cell, user).
        arma::cx_mat concatenated(std::size_t l) const;
    };

    // Per-antenna error energy delta_jl of the scaled estimation error
    // F_tilde_jl = sqrt(p_f) D_jl^{1/2} (H_jl - H_hat_jl):
    // E[F_tilde^H F_tilde] = delta_jl I_M.
    struct ErrorCovScalars
    {
        std::size_t num_cells = 0;
        std::vector<double> delta; // index j * L + l

        double operator()(std::size_t j, std::size_t l) const { return delta[j * num_cells + l]; }
    };

    // Linear MMSE estimator for fixed pilots and gains. The K x tau filters
    // sqrt(p_r tau) D_jl^{1/2} Psi_j^H C_l^{-1}, with
    // C_l = I + p_r tau sum_i Psi_i D_il Psi_i^H, are factored once and
    // reused for every observation.
    class MmseEstimator
    {
    public:
        MmseEstimator(const PilotBook &pilots, const GainTensor &betas, const SystemConfig &config);

        ChannelEstimateSet estimate(const TrainingObservation &obs) const;

        const arma::cx_mat &filter(std::size_t j, std::size_t l) const { return filters_[j * L_ + l]; }

    private:
        std::size_t L_, M_, tau_;
        std::vector<arma::cx_mat> filters_;
    };

    // H_hat_jl = sqrt(p_r tau) D_jl^{1/2} Psi_j^H C_l^{-1} Y_l for all (j, l).
    ChannelEstimateSet mmse_estimate(const TrainingObservation &obs, const PilotBook &pilots, const GainTensor &betas,
                                     const SystemConfig &config);

    // Test hook: treat the true channel as the estimate.
    ChannelEstimateSet perfect_csi(const ChannelSet &channels);

    ErrorCovScalars error_cov_scalars(const PilotBook &pilots, const GainTensor &betas, const SystemConfig &config);
}

#endif
