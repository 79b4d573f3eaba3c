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

#ifndef PILOTMIMO_CHANNEL_HPP
#define PILOTMIMO_CHANNEL_HPP

#include "pilotmimo/model.hpp"

#include <armadillo>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace pilotmimo
{
    // Independent random streams, one per logical purpose.
    enum class Stream : std::uint64_t
    {
        channels = 1,
        training_noise = 2,
        downlink_noise = 3,
        symbols = 4,
    };

    // Mixes (master seed, purpose, draw index) into a 64-bit engine seed.
    std::uint64_t derive_seed(std::uint64_t master, Stream purpose, std::uint64_t index);

    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed) : engine_(seed) {}

        static Rng for_draw(std::uint64_t master, Stream purpose, std::uint64_t index)
        {
            return Rng(derive_seed(master, purpose, index));
        }

        // CN(0, 1): real and imaginary parts are each N(0, 1/2).
        std::complex<double> complex_gaussian();
        arma::cx_mat complex_gaussian(arma::uword rows, arma::uword cols);

        double gaussian() { return unit_normal_(engine_); }
        std::mt19937_64 &engine() { return engine_; }

    private:
        std::mt19937_64 engine_;
        std::normal_distribution<double> unit_normal_{0.0, 1.0};
    };

    // Small-scale fading H_jl (K x M) for every user cell j and base station l.
    struct ChannelSet
    {
        std::size_t num_cells = 0;
        std::vector<arma::cx_mat> h; // index j * L + l

        const arma::cx_mat &operator()(std::size_t j, std::size_t l) const { return h[j * num_cells + l]; }
        arma::cx_mat &operator()(std::size_t j, std::size_t l) { return h[j * num_cells + l]; }
    };

    // Received training block Y_l (tau x M) at every base station.
    struct TrainingObservation
    {
        std::vector<arma::cx_mat> y;
    };

    // Test hook: disable the additive receiver noise W_l.
    enum class TrainingNoise
    {
        on,
        off,
    };

    ChannelSet draw_channels(const SystemConfig &config, Rng &rng);

    // Draw `index` of the channel stream seeded from config.rng_seed.
    ChannelSet draw_channels(const SystemConfig &config, std::uint64_t index);

    // Y_l = sqrt(p_r tau) sum_j Psi_j D_jl^{1/2} H_jl + W_l. Throws ShapeMismatch.
    TrainingObservation synth_training(const ChannelSet &channels, const PilotBook &pilots, const GainTensor &betas,
                                       const SystemConfig &config, Rng &rng,
                                       TrainingNoise noise = TrainingNoise::on);
}

#endif
