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

#ifndef PILOTMIMO_MODEL_HPP
#define PILOTMIMO_MODEL_HPP

#include <armadillo>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace pilotmimo
{
    // Scalar system parameters. Powers are linear (SNR-normalized, unit noise
    // variance at every terminal); dB conversion happens at config ingestion.
    struct SystemConfig
    {
        std::size_t num_cells = 4;      // L
        std::size_t users_per_cell = 2; // K
        std::size_t antennas = 8;       // M, per base station
        std::size_t pilot_length = 4;   // tau
        double forward_power = 100.0;   // p_f, base station
        double reverse_power = 10.0;    // p_r, per user
        double gamma = 1.0;             // weight of out-of-cell interference in the multi-cell MMSE objective
        std::uint64_t rng_seed = 1;

        // Throws InvalidConfig. When within_cell_orthogonal is set, tau >= K is
        // also required.
        void validate(bool within_cell_orthogonal = true) const;
    };

    // Large-scale gains beta[j][l][k]: user k of cell j seen from base station l.
    class GainTensor
    {
    public:
        GainTensor() = default;
        GainTensor(std::size_t num_cells, std::size_t users_per_cell, double fill = 0.0);

        std::size_t num_cells() const { return L_; }
        std::size_t users_per_cell() const { return K_; }

        double operator()(std::size_t j, std::size_t l, std::size_t k) const { return beta_[index(j, l, k)]; }

        // Throws InvalidConfig on negative or non-finite values.
        void set(std::size_t j, std::size_t l, std::size_t k, double value);

        // Sets beta[j][l][k] for every k.
        void set_all_users(std::size_t j, std::size_t l, double value);

        // Diagonal of D_jl as a vector of length K.
        arma::vec diag(std::size_t j, std::size_t l) const;

        // Throws ShapeMismatch unless the tensor is L x L x K.
        void require_shape(std::size_t num_cells, std::size_t users_per_cell) const;

    private:
        std::size_t index(std::size_t j, std::size_t l, std::size_t k) const { return (j * L_ + l) * K_ + k; }

        std::size_t L_ = 0, K_ = 0;
        std::vector<double> beta_;
    };

    // Training matrices Psi_j (tau x K) for every cell, unit-norm columns.
    class PilotBook
    {
    public:
        PilotBook() = default;

        // Throws InvalidScenario if shapes differ between cells or a column is
        // not unit norm. With within_cell_orthogonal, Psi_j^H Psi_j = I_K is
        // also enforced.
        explicit PilotBook(std::vector<arma::cx_mat> psi, bool within_cell_orthogonal = true);

        std::size_t num_cells() const { return psi_.size(); }
        std::size_t pilot_length() const { return psi_.empty() ? 0 : psi_.front().n_rows; }
        std::size_t users_per_cell() const { return psi_.empty() ? 0 : psi_.front().n_cols; }

        const arma::cx_mat &operator[](std::size_t j) const { return psi_[j]; }

        void require_shape(std::size_t num_cells, std::size_t users_per_cell, std::size_t pilot_length) const;

    private:
        std::vector<arma::cx_mat> psi_;
    };

    // Benchmark layout: cells are paired (0,1), (2,3), ...; the direct gain is
    // one, the gain inside a pair is a and every other cross gain is b.
    // pilot_reuse_map[j] selects which orthogonal pilot pool cell j uses.
    struct ScenarioSpec
    {
        double cross_gain_a = 0.8;
        double cross_gain_b = 0.08;
        std::vector<std::size_t> pilot_reuse_map;

        // Pools alternate between paired cells: 0,1,0,1,...
        static ScenarioSpec benchmark(double a, double b, std::size_t num_cells);

        // Every cell uses pool 0, i.e. the same pilots everywhere.
        static ScenarioSpec shared_pilot(double a, double b, std::size_t num_cells);
    };

    struct Scenario
    {
        GainTensor gains;
        PilotBook pilots;
    };

    // Columns of the tau x tau unitary DFT matrix: F(t, c) = exp(-2 pi i t c / tau) / sqrt(tau).
    arma::cx_mat dft_unitary(std::size_t tau);

    // Throws InvalidScenario if tau < K, L is odd, the reuse map has the wrong
    // length, a cross gain is outside [0, 1] or a pool index is beyond the
    // floor(tau / K) orthogonal pools available.
    Scenario build_scenario(const ScenarioSpec &spec, const SystemConfig &config);

    double db_to_linear(double x_db);
}

#endif
