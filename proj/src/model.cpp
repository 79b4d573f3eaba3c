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

#include "pilotmimo/model.hpp"
#include "pilotmimo/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pilotmimo
{
    void SystemConfig::validate(bool within_cell_orthogonal) const
    {
        if (num_cells == 0 || users_per_cell == 0 || antennas == 0 || pilot_length == 0)
            throw InvalidConfig("L, K, M and tau must all be positive.");
        if (users_per_cell > antennas)
            throw InvalidConfig("K = " + std::to_string(users_per_cell) + " exceeds M = " + std::to_string(antennas) + ".");
        if (within_cell_orthogonal && pilot_length < users_per_cell)
            throw InvalidConfig("tau = " + std::to_string(pilot_length) + " is too short for " +
                                std::to_string(users_per_cell) + " orthogonal pilots.");
        if (!(forward_power > 0.0) || !std::isfinite(forward_power))
            throw InvalidConfig("Forward power must be positive.");
        if (!(reverse_power > 0.0) || !std::isfinite(reverse_power))
            throw InvalidConfig("Reverse power must be positive.");
        if (!(gamma >= 0.0) || !std::isfinite(gamma))
            throw InvalidConfig("gamma must be non-negative.");
    }

    GainTensor::GainTensor(std::size_t num_cells, std::size_t users_per_cell, double fill)
        : L_(num_cells), K_(users_per_cell), beta_(num_cells * num_cells * users_per_cell, fill)
    {
        if (!(fill >= 0.0) || !std::isfinite(fill))
            throw InvalidConfig("Large-scale gains must be finite and non-negative.");
    }

    void GainTensor::set(std::size_t j, std::size_t l, std::size_t k, double value)
    {
        if (j >= L_ || l >= L_ || k >= K_)
            throw ShapeMismatch("Gain index out of range.");
        if (!(value >= 0.0) || !std::isfinite(value))
            throw InvalidConfig("Large-scale gains must be finite and non-negative.");
        beta_[index(j, l, k)] = value;
    }

    void GainTensor::set_all_users(std::size_t j, std::size_t l, double value)
    {
        for (std::size_t k = 0; k < K_; ++k)
            set(j, l, k, value);
    }

    arma::vec GainTensor::diag(std::size_t j, std::size_t l) const
    {
        arma::vec d(K_);
        for (std::size_t k = 0; k < K_; ++k)
            d(k) = beta_[index(j, l, k)];
        return d;
    }

    void GainTensor::require_shape(std::size_t num_cells, std::size_t users_per_cell) const
    {
        if (L_ != num_cells || K_ != users_per_cell)
            throw ShapeMismatch("Gain tensor is " + std::to_string(L_) + "x" + std::to_string(L_) + "x" +
                                std::to_string(K_) + ", expected " + std::to_string(num_cells) + "x" +
                                std::to_string(num_cells) + "x" + std::to_string(users_per_cell) + ".");
    }

    PilotBook::PilotBook(std::vector<arma::cx_mat> psi, bool within_cell_orthogonal)
        : psi_(std::move(psi))
    {
        constexpr double tol = 1e-10;
        for (std::size_t j = 0; j < psi_.size(); ++j)
        {
            const arma::cx_mat &p = psi_[j];
            if (p.n_rows != psi_.front().n_rows || p.n_cols != psi_.front().n_cols)
                throw InvalidScenario("Pilot matrices must share one shape.");
            for (arma::uword k = 0; k < p.n_cols; ++k)
                if (std::abs(arma::norm(p.col(k)) - 1.0) > tol)
                    throw InvalidScenario("Pilot column " + std::to_string(k) + " of cell " + std::to_string(j) +
                                          " is not unit norm.");
            if (within_cell_orthogonal)
            {
                const arma::cx_mat gram = p.t() * p;
                if (arma::abs(gram - arma::eye<arma::cx_mat>(p.n_cols, p.n_cols)).max() > tol)
                    throw InvalidScenario("Pilots of cell " + std::to_string(j) + " are not mutually orthogonal.");
            }
        }
    }

    void PilotBook::require_shape(std::size_t num_cells, std::size_t users_per_cell, std::size_t pilot_length) const
    {
        if (psi_.size() != num_cells || this->users_per_cell() != users_per_cell ||
            this->pilot_length() != pilot_length)
            throw ShapeMismatch("Pilot book does not match L = " + std::to_string(num_cells) +
                                ", K = " + std::to_string(users_per_cell) + ", tau = " + std::to_string(pilot_length) + ".");
    }

    ScenarioSpec ScenarioSpec::benchmark(double a, double b, std::size_t num_cells)
    {
        ScenarioSpec spec{a, b, {}};
        spec.pilot_reuse_map.resize(num_cells);
        for (std::size_t j = 0; j < num_cells; ++j)
            spec.pilot_reuse_map[j] = j % 2;
        return spec;
    }

    ScenarioSpec ScenarioSpec::shared_pilot(double a, double b, std::size_t num_cells)
    {
        return ScenarioSpec{a, b, std::vector<std::size_t>(num_cells, 0)};
    }

    arma::cx_mat dft_unitary(std::size_t tau)
    {
        arma::cx_mat F(tau, tau);
        const double scale = 1.0 / std::sqrt(static_cast<double>(tau));
        for (std::size_t t = 0; t < tau; ++t)
            for (std::size_t c = 0; c < tau; ++c)
            {
                // Reduce t*c mod tau first so the phase stays exact for large tau.
                const double phase = -2.0 * std::numbers::pi * static_cast<double>((t * c) % tau) / static_cast<double>(tau);
                F(t, c) = std::polar(scale, phase);
            }
        return F;
    }

    Scenario build_scenario(const ScenarioSpec &spec, const SystemConfig &config)
    {
        const std::size_t L = config.num_cells, K = config.users_per_cell, tau = config.pilot_length;
        if (K == 0 || L == 0)
            throw InvalidScenario("Scenario needs at least one cell and one user.");
        if (tau < K)
            throw InvalidScenario("tau = " + std::to_string(tau) + " < K = " + std::to_string(K) + ".");
        if (L % 2 != 0)
            throw InvalidScenario("The paired-cell layout needs an even number of cells, got L = " + std::to_string(L) + ".");
        if (spec.pilot_reuse_map.size() != L)
            throw InvalidScenario("Pilot reuse map has " + std::to_string(spec.pilot_reuse_map.size()) +
                                  " entries for " + std::to_string(L) + " cells.");
        for (double g : {spec.cross_gain_a, spec.cross_gain_b})
            if (!(g >= 0.0 && g <= 1.0))
                throw InvalidScenario("Cross gains must lie in [0, 1].");

        GainTensor gains(L, K);
        for (std::size_t j = 0; j < L; ++j)
            for (std::size_t l = 0; l < L; ++l)
            {
                double value = spec.cross_gain_b;
                if (j == l)
                    value = 1.0;
                else if (j / 2 == l / 2)
                    value = spec.cross_gain_a;
                gains.set_all_users(j, l, value);
            }

        const std::size_t pools = tau / K;
        const arma::cx_mat unitary = dft_unitary(tau);
        std::vector<arma::cx_mat> psi;
        psi.reserve(L);
        for (std::size_t j = 0; j < L; ++j)
        {
            const std::size_t pool = spec.pilot_reuse_map[j];
            if (pool >= pools)
                throw InvalidScenario("Cell " + std::to_string(j) + " references pilot pool " + std::to_string(pool) +
                                      " but only " + std::to_string(pools) + " orthogonal pools fit in tau = " +
                                      std::to_string(tau) + ".");
            psi.push_back(unitary.cols(pool * K, pool * K + K - 1));
        }
        return Scenario{std::move(gains), PilotBook(std::move(psi), true)};
    }

    double db_to_linear(double x_db)
    {
        return std::pow(10.0, x_db / 10.0);
    }
}
