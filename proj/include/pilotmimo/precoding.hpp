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

#ifndef PILOTMIMO_PRECODING_HPP
#define PILOTMIMO_PRECODING_HPP

#include "pilotmimo/estimation.hpp"
#include "pilotmimo/model.hpp"

#include <armadillo>
#include <optional>
#include <string_view>

namespace pilotmimo
{
    enum class PrecoderMethod
    {
        zf,
        gps,
        mcmmse,
    };

    std::string_view to_string(PrecoderMethod method);

    // Accepts "ZF", "GPS", "MCMMSE" (case-insensitive).
    std::optional<PrecoderMethod> parse_precoder_method(std::string_view name);

    // M x K linear precoder of one base station, tr{A^H A} = 1.
    struct Precoder
    {
        arma::cx_mat a;
        PrecoderMethod method = PrecoderMethod::zf;
    };

    struct PrecoderParams
    {
        double gamma = 0.0;
        double eta = 0.0;   // delta_ll + gamma^2 sum_{j != l} delta_jl + K
        double alpha = 0.0; // Frobenius norm of the unnormalized solution
    };

    struct MmsePrecoder
    {
        Precoder precoder;
        PrecoderParams params;
    };

    // Reciprocal condition number below which the ZF Gram matrix counts as singular.
    inline constexpr double zf_rcond_threshold = 1e-12;

    // F_hat_jl = sqrt(p_f) D_jl^{1/2} H_hat_jl
    arma::cx_mat scaled_estimate(const ChannelEstimateSet &est, const GainTensor &betas, const SystemConfig &config,
                                 std::size_t j, std::size_t l);

    // A_l = G^H (G G^H)^{-1} / sqrt(tr{(G G^H)^{-1}}) with G = F_hat_ll.
    // Throws RankDeficient when G G^H is numerically singular.
    Precoder zf_precoder(const ChannelEstimateSet &est, const GainTensor &betas, const SystemConfig &config,
                         std::size_t l);

    // A_l = (1/alpha) (F_ll^H F_ll + gamma^2 sum_{j != l} F_jl^H F_jl + eta I)^{-1} F_ll^H
    // using the estimated F_hat and config.gamma. gamma = 0 yields GPS.
    MmsePrecoder mcmmse_precoder(const ChannelEstimateSet &est, const ErrorCovScalars &deltas, const GainTensor &betas,
                                 const SystemConfig &config, std::size_t l);

    // Same as mcmmse_precoder with gamma forced to zero.
    MmsePrecoder gps_precoder(const ChannelEstimateSet &est, const ErrorCovScalars &deltas, const GainTensor &betas,
                              const SystemConfig &config, std::size_t l);

    // Dispatches on method. deltas is ignored for ZF.
    Precoder make_precoder(PrecoderMethod method, const ChannelEstimateSet &est, const ErrorCovScalars &deltas,
                           const GainTensor &betas, const SystemConfig &config, std::size_t l);

    // Expected per-cell MMSE cost with the expectation over data symbols,
    // user noise and estimation error taken analytically:
    // J = tr{a^2 A^H (F_ll^H F_ll + gamma^2 sum F_jl^H F_jl + (delta_ll + gamma^2 sum delta_jl) I) A
    //        - a A^H F_ll^H - a F_ll A} + (a^2 + 1) K
    double objective_value(const arma::cx_mat &A, double alpha, const ChannelEstimateSet &est,
                           const ErrorCovScalars &deltas, const GainTensor &betas, const SystemConfig &config,
                           std::size_t l);
}

#endif
