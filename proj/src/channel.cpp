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

#include <cmath>

namespace pilotmimo
{
    namespace
    {
        std::uint64_t splitmix64(std::uint64_t x)
        {
            x += 0x9E3779B97F4A7C15ull;
            x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
            x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
            return x ^ (x >> 31);
        }
    }

    std::uint64_t derive_seed(std::uint64_t master, Stream purpose, std::uint64_t index)
    {
        std::uint64_t s = splitmix64(master);
        s = splitmix64(s ^ static_cast<std::uint64_t>(purpose));
        return splitmix64(s ^ splitmix64(index));
    }

    std::complex<double> Rng::complex_gaussian()
    {
        constexpr double half_sqrt = 0.70710678118654752440;
        const double re = unit_normal_(engine_);
        const double im = unit_normal_(engine_);
        return {half_sqrt * re, half_sqrt * im};
    }

    arma::cx_mat Rng::complex_gaussian(arma::uword rows, arma::uword cols)
    {
        arma::cx_mat out(rows, cols);
        // Column-major fill; draw order is part of the reproducibility contract.
        for (arma::uword i = 0; i < out.n_elem; ++i)
            out(i) = complex_gaussian();
        return out;
    }

    ChannelSet draw_channels(const SystemConfig &config, Rng &rng)
    {
        const std::size_t L = config.num_cells;
        ChannelSet set;
        set.num_cells = L;
        set.h.reserve(L * L);
        for (std::size_t i = 0; i < L * L; ++i)
            set.h.push_back(rng.complex_gaussian(config.users_per_cell, config.antennas));
        return set;
    }

    ChannelSet draw_channels(const SystemConfig &config, std::uint64_t index)
    {
        Rng rng = Rng::for_draw(config.rng_seed, Stream::channels, index);
        return draw_channels(config, rng);
    }

    TrainingObservation synth_training(const ChannelSet &channels, const PilotBook &pilots, const GainTensor &betas,
                                       const SystemConfig &config, Rng &rng, TrainingNoise noise)
    {
        const std::size_t L = config.num_cells, K = config.users_per_cell, M = config.antennas;
        const std::size_t tau = config.pilot_length;
        pilots.require_shape(L, K, tau);
        betas.require_shape(L, K);
        if (channels.num_cells != L || channels.h.size() != L * L)
            throw ShapeMismatch("Channel set does not match L = " + std::to_string(L) + ".");
        for (const auto &h : channels.h)
            if (h.n_rows != K || h.n_cols != M)
                throw ShapeMismatch("Channel matrices must be K x M.");

        const double gain = std::sqrt(config.reverse_power * static_cast<double>(tau));
        TrainingObservation obs;
        obs.y.reserve(L);
        for (std::size_t l = 0; l < L; ++l)
        {
            arma::cx_mat y(tau, M, arma::fill::zeros);
            for (std::size_t j = 0; j < L; ++j)
            {
                const arma::vec sqrt_d = arma::sqrt(betas.diag(j, l));
                y += pilots[j] * (arma::diagmat(arma::conv_to<arma::cx_vec>::from(sqrt_d)) * channels(j, l));
            }
            y *= gain;
            if (noise == TrainingNoise::on)
                y += rng.complex_gaussian(tau, M);
            obs.y.push_back(std::move(y));
        }
        return obs;
    }
}
