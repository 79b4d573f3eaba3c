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

#include "pilotmimo/estimation.hpp"
#include "pilotmimo/errors.hpp"

#include "linalg.hpp"

#include <cmath>
#include <string>

namespace pilotmimo
{
    namespace
    {
        // I + p_r tau sum_{i in cells, i != skip} Psi_i D_il Psi_i^H
        arma::cx_mat training_covariance(const PilotBook &pilots, const GainTensor &betas, const SystemConfig &config,
                                         std::size_t l, std::size_t skip)
        {
            const std::size_t tau = config.pilot_length;
            const double prt = config.reverse_power * static_cast<double>(tau);
            arma::cx_mat C = arma::eye<arma::cx_mat>(tau, tau);
            for (std::size_t i = 0; i < config.num_cells; ++i)
            {
                if (i == skip)
                    continue;
                const arma::cx_mat &psi = pilots[i];
                const arma::cx_vec d = arma::conv_to<arma::cx_vec>::from(betas.diag(i, l));
                C += prt * (psi * arma::diagmat(d) * psi.t());
            }
            return C;
        }
    }

    arma::cx_mat ChannelEstimateSet::concatenated(std::size_t l) const
    {
        arma::cx_mat out;
        for (std::size_t j = 0; j < num_cells; ++j)
            out = arma::join_cols(out, (*this)(j, l));
        return out;
    }

    MmseEstimator::MmseEstimator(const PilotBook &pilots, const GainTensor &betas, const SystemConfig &config)
        : L_(config.num_cells), M_(config.antennas), tau_(config.pilot_length)
    {
        pilots.require_shape(L_, config.users_per_cell, tau_);
        betas.require_shape(L_, config.users_per_cell);

        const double prt = config.reverse_power * static_cast<double>(tau_);
        filters_.resize(L_ * L_);
        for (std::size_t l = 0; l < L_; ++l)
        {
            const arma::cx_mat C = training_covariance(pilots, betas, config, l, L_);
            for (std::size_t j = 0; j < L_; ++j)
            {
                // C is Hermitian, so Psi_j^H C^{-1} = (C^{-1} Psi_j)^H.
                const arma::cx_mat solved = detail::hermitian_solve(C, pilots[j], "training covariance");
                filters_[j * L_ + l] = std::sqrt(prt) * detail::scale_rows_sqrt(betas.diag(j, l), solved.t());
            }
        }
    }

    ChannelEstimateSet MmseEstimator::estimate(const TrainingObservation &obs) const
    {
        if (obs.y.size() != L_)
            throw ShapeMismatch("Training observation has " + std::to_string(obs.y.size()) + " cells, expected " +
                                std::to_string(L_) + ".");
        for (const auto &y : obs.y)
            if (y.n_rows != tau_ || y.n_cols != M_)
                throw ShapeMismatch("Training blocks must be tau x M.");

        ChannelEstimateSet est;
        est.num_cells = L_;
        est.h_hat.resize(L_ * L_);
        for (std::size_t j = 0; j < L_; ++j)
            for (std::size_t l = 0; l < L_; ++l)
                est.h_hat[j * L_ + l] = filters_[j * L_ + l] * obs.y[l];
        return est;
    }

    ChannelEstimateSet mmse_estimate(const TrainingObservation &obs, const PilotBook &pilots, const GainTensor &betas,
                                     const SystemConfig &config)
    {
        return MmseEstimator(pilots, betas, config).estimate(obs);
    }

    ChannelEstimateSet perfect_csi(const ChannelSet &channels)
    {
        return ChannelEstimateSet{channels.num_cells, channels.h};
    }

    ErrorCovScalars error_cov_scalars(const PilotBook &pilots, const GainTensor &betas, const SystemConfig &config)
    {
        const std::size_t L = config.num_cells, K = config.users_per_cell;
        pilots.require_shape(L, K, config.pilot_length);
        betas.require_shape(L, K);

        const double prt = config.reverse_power * static_cast<double>(config.pilot_length);
        ErrorCovScalars out;
        out.num_cells = L;
        out.delta.resize(L * L);
        for (std::size_t j = 0; j < L; ++j)
            for (std::size_t l = 0; l < L; ++l)
            {
                const arma::vec d = betas.diag(j, l);
                // Lambda_jl Psi_j with Lambda_jl the inverse of the covariance excluding cell j.
                const arma::cx_mat lambda_psi =
                    detail::hermitian_solve(training_covariance(pilots, betas, config, l, j), pilots[j], "Lambda_jl");
                arma::cx_mat inner = pilots[j].t() * lambda_psi;
                inner = detail::scale_rows_sqrt(d, detail::scale_rows_sqrt(d, inner).st()).st();
                inner = arma::eye<arma::cx_mat>(K, K) + prt * inner;
                const arma::cx_mat D = arma::conv_to<arma::cx_mat>::from(arma::diagmat(d));
                const arma::cx_mat solved = detail::hermitian_solve(inner, D, "error covariance");
                out.delta[j * L + l] = config.forward_power * std::real(arma::trace(solved));
            }
        return out;
    }
}
