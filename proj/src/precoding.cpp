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

#include "pilotmimo/precoding.hpp"
#include "pilotmimo/errors.hpp"

#include "linalg.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace pilotmimo
{
    namespace
    {
        void check_cell(const ChannelEstimateSet &est, const SystemConfig &config, std::size_t l)
        {
            if (est.num_cells != config.num_cells || est.h_hat.size() != config.num_cells * config.num_cells)
                throw ShapeMismatch("Estimate set does not match L = " + std::to_string(config.num_cells) + ".");
            if (l >= config.num_cells)
                throw ShapeMismatch("Cell index " + std::to_string(l) + " out of range.");
        }

        // F_ll^H F_ll + gamma^2 sum_{j != l} F_jl^H F_jl
        arma::cx_mat weighted_gram(const ChannelEstimateSet &est, const GainTensor &betas, const SystemConfig &config,
                                   std::size_t l, double gamma, const arma::cx_mat &own)
        {
            arma::cx_mat Q = own.t() * own;
            if (gamma != 0.0)
            {
                const double g2 = gamma * gamma;
                for (std::size_t j = 0; j < config.num_cells; ++j)
                {
                    if (j == l)
                        continue;
                    const arma::cx_mat F = scaled_estimate(est, betas, config, j, l);
                    Q += g2 * (F.t() * F);
                }
            }
            return Q;
        }

        double weighted_delta(const ErrorCovScalars &deltas, std::size_t num_cells, std::size_t l, double gamma)
        {
            double other = 0.0;
            for (std::size_t j = 0; j < num_cells; ++j)
                if (j != l)
                    other += deltas(j, l);
            return deltas(l, l) + gamma * gamma * other;
        }

        MmsePrecoder regularized_precoder(const ChannelEstimateSet &est, const ErrorCovScalars &deltas,
                                          const GainTensor &betas, const SystemConfig &config, std::size_t l,
                                          double gamma, PrecoderMethod tag)
        {
            check_cell(est, config, l);
            if (deltas.num_cells != config.num_cells)
                throw ShapeMismatch("Error covariance scalars do not match L.");
            if (!(gamma >= 0.0))
                throw InvalidConfig("gamma must be non-negative.");

            const arma::cx_mat own = scaled_estimate(est, betas, config, l, l);
            PrecoderParams params;
            params.gamma = gamma;
            params.eta = weighted_delta(deltas, config.num_cells, l, gamma) + static_cast<double>(config.users_per_cell);

            arma::cx_mat Q = weighted_gram(est, betas, config, l, gamma, own);
            Q.diag() += params.eta;
            const arma::cx_mat unnormalized = detail::hermitian_solve(Q, own.t(), "MMSE precoder system");

            params.alpha = arma::norm(unnormalized, "fro");
            if (!(params.alpha > 0.0))
                throw PreconditionViolated("Cell " + std::to_string(l) +
                                           " has no estimated channel to its own users; the precoder is undefined.");
            return MmsePrecoder{Precoder{unnormalized / params.alpha, tag}, params};
        }
    }

    std::string_view to_string(PrecoderMethod method)
    {
        switch (method)
        {
        case PrecoderMethod::zf:
            return "ZF";
        case PrecoderMethod::gps:
            return "GPS";
        case PrecoderMethod::mcmmse:
            return "MCMMSE";
        }
        return "?";
    }

    std::optional<PrecoderMethod> parse_precoder_method(std::string_view name)
    {
        std::string upper(name);
        std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
        if (upper == "ZF")
            return PrecoderMethod::zf;
        if (upper == "GPS")
            return PrecoderMethod::gps;
        if (upper == "MCMMSE")
            return PrecoderMethod::mcmmse;
        return std::nullopt;
    }

    arma::cx_mat scaled_estimate(const ChannelEstimateSet &est, const GainTensor &betas, const SystemConfig &config,
                                 std::size_t j, std::size_t l)
    {
        return std::sqrt(config.forward_power) * detail::scale_rows_sqrt(betas.diag(j, l), est(j, l));
    }

    Precoder zf_precoder(const ChannelEstimateSet &est, const GainTensor &betas, const SystemConfig &config,
                         std::size_t l)
    {
        check_cell(est, config, l);
        const arma::cx_mat G = scaled_estimate(est, betas, config, l, l);
        const arma::cx_mat gram = G * G.t();
        const double rc = arma::rcond(gram);
        if (!(rc >= zf_rcond_threshold))
            throw RankDeficient("ZF Gram matrix of cell " + std::to_string(l) + " is singular (rcond = " +
                                std::to_string(rc) + ").");
        const arma::cx_mat gram_inv =
            detail::hermitian_solve(gram, arma::eye<arma::cx_mat>(gram.n_rows, gram.n_cols), "ZF Gram matrix");
        const double power = std::real(arma::trace(gram_inv));
        return Precoder{G.t() * gram_inv / std::sqrt(power), PrecoderMethod::zf};
    }

    MmsePrecoder mcmmse_precoder(const ChannelEstimateSet &est, const ErrorCovScalars &deltas, const GainTensor &betas,
                                 const SystemConfig &config, std::size_t l)
    {
        return regularized_precoder(est, deltas, betas, config, l, config.gamma,
                                    config.gamma == 0.0 ? PrecoderMethod::gps : PrecoderMethod::mcmmse);
    }

    MmsePrecoder gps_precoder(const ChannelEstimateSet &est, const ErrorCovScalars &deltas, const GainTensor &betas,
                              const SystemConfig &config, std::size_t l)
    {
        return regularized_precoder(est, deltas, betas, config, l, 0.0, PrecoderMethod::gps);
    }

    Precoder make_precoder(PrecoderMethod method, const ChannelEstimateSet &est, const ErrorCovScalars &deltas,
                           const GainTensor &betas, const SystemConfig &config, std::size_t l)
    {
        switch (method)
        {
        case PrecoderMethod::zf:
            return zf_precoder(est, betas, config, l);
        case PrecoderMethod::gps:
            return gps_precoder(est, deltas, betas, config, l).precoder;
        case PrecoderMethod::mcmmse:
            return regularized_precoder(est, deltas, betas, config, l, config.gamma, PrecoderMethod::mcmmse).precoder;
        }
        throw InvalidConfig("Unknown precoder method.");
    }

    double objective_value(const arma::cx_mat &A, double alpha, const ChannelEstimateSet &est,
                           const ErrorCovScalars &deltas, const GainTensor &betas, const SystemConfig &config,
                           std::size_t l)
    {
        check_cell(est, config, l);
        const std::size_t K = config.users_per_cell;
        if (A.n_rows != config.antennas || A.n_cols != K)
            throw ShapeMismatch("Precoder must be M x K.");

        const arma::cx_mat own = scaled_estimate(est, betas, config, l, l);
        arma::cx_mat Q = weighted_gram(est, betas, config, l, config.gamma, own);
        Q.diag() += weighted_delta(deltas, config.num_cells, l, config.gamma);

        const std::complex<double> quadratic = arma::trace(A.t() * Q * A);
        const std::complex<double> cross = arma::trace(own * A);
        return alpha * alpha * std::real(quadratic) - 2.0 * alpha * std::real(cross) +
               (alpha * alpha + 1.0) * static_cast<double>(K);
    }
}
