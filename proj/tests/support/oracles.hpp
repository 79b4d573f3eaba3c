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

// Test-only reference computations. Nothing here calls into the code path it
// is used to check: estimates, objectives and moments are rebuilt from the
// defining expressions.

#ifndef PILOTMIMO_TESTS_ORACLES_HPP
#define PILOTMIMO_TESTS_ORACLES_HPP

#include "pilotmimo/model.hpp"

#include <algorithm>
#include <armadillo>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace oracle
{
    // Nelder-Mead simplex minimizer. Callers restart it from the returned point.
    inline std::vector<double> nelder_mead(const std::function<double(const std::vector<double> &)> &f,
                                           std::vector<double> x0, double step, int max_iter = 20000,
                                           double ftol = 1e-15)
    {
        const std::size_t n = x0.size();
        std::vector<std::vector<double>> simplex(n + 1, x0);
        for (std::size_t i = 0; i < n; ++i)
            simplex[i + 1][i] += step;
        std::vector<double> values(n + 1);
        for (std::size_t i = 0; i <= n; ++i)
            values[i] = f(simplex[i]);

        for (int it = 0; it < max_iter; ++it)
        {
            std::vector<std::size_t> order(n + 1);
            for (std::size_t i = 0; i <= n; ++i)
                order[i] = i;
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
            std::vector<std::vector<double>> s2;
            std::vector<double> v2;
            for (std::size_t i : order)
            {
                s2.push_back(simplex[i]);
                v2.push_back(values[i]);
            }
            simplex = s2;
            values = v2;
            if (std::abs(values[n] - values[0]) < ftol)
                break;

            std::vector<double> centroid(n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t d = 0; d < n; ++d)
                    centroid[d] += simplex[i][d] / static_cast<double>(n);
            auto along = [&](double t) {
                std::vector<double> p(n);
                for (std::size_t d = 0; d < n; ++d)
                    p[d] = centroid[d] + t * (simplex[n][d] - centroid[d]);
                return p;
            };
            const auto reflected = along(-1.0);
            const double fr = f(reflected);
            if (fr < values[0])
            {
                const auto expanded = along(-2.0);
                const double fe = f(expanded);
                if (fe < fr)
                {
                    simplex[n] = expanded;
                    values[n] = fe;
                }
                else
                {
                    simplex[n] = reflected;
                    values[n] = fr;
                }
            }
            else if (fr < values[n - 1])
            {
                simplex[n] = reflected;
                values[n] = fr;
            }
            else
            {
                const auto contracted = fr < values[n] ? along(-0.5) : along(0.5);
                const double fc = f(contracted);
                if (fc < std::min(fr, values[n]))
                {
                    simplex[n] = contracted;
                    values[n] = fc;
                }
                else
                {
                    for (std::size_t i = 1; i <= n; ++i)
                    {
                        for (std::size_t d = 0; d < n; ++d)
                            simplex[i][d] = simplex[0][d] + 0.5 * (simplex[i][d] - simplex[0][d]);
                        values[i] = f(simplex[i]);
                    }
                }
            }
        }
        const auto best = std::min_element(values.begin(), values.end()) - values.begin();
        return simplex[best];
    }

    // E[theta] for theta^2 ~ Gamma(M, 1). With x = u^2 the integrand
    // 2 u^{2M} e^{-u^2} / Gamma(M) is smooth; Simpson's rule on [0, U].
    inline double chi_mean_quadrature(std::size_t M)
    {
        const double m = static_cast<double>(M);
        const double upper = std::sqrt(m) + 12.0;
        const int n = 200000;
        const double h = upper / n;
        auto f = [&](double u) {
            if (u <= 0.0)
                return 0.0;
            return 2.0 * std::exp(2.0 * m * std::log(u) - u * u - std::lgamma(m));
        };
        double s = f(0.0) + f(upper);
        for (int i = 1; i < n; ++i)
            s += (i % 2 ? 4.0 : 2.0) * f(i * h);
        return s * h / 3.0;
    }

    // Covariance of one column of H_jl - H_hat_jl under the MMSE estimator:
    // I - p_r tau D^{1/2} Psi_j^H C_l^{-1} Psi_j D^{1/2}, using an explicit inverse.
    inline arma::cx_mat error_covariance(const pilotmimo::PilotBook &pilots, const pilotmimo::GainTensor &betas,
                                         const pilotmimo::SystemConfig &cfg, std::size_t j, std::size_t l)
    {
        const std::size_t tau = cfg.pilot_length, K = cfg.users_per_cell;
        const double prt = cfg.reverse_power * static_cast<double>(tau);
        arma::cx_mat C = arma::eye<arma::cx_mat>(tau, tau);
        for (std::size_t i = 0; i < cfg.num_cells; ++i)
        {
            arma::cx_mat D(K, K, arma::fill::zeros);
            for (std::size_t k = 0; k < K; ++k)
                D(k, k) = betas(i, l, k);
            C += prt * pilots[i] * D * pilots[i].t();
        }
        arma::cx_mat Dh(K, K, arma::fill::zeros);
        for (std::size_t k = 0; k < K; ++k)
            Dh(k, k) = std::sqrt(betas(j, l, k));
        return arma::eye<arma::cx_mat>(K, K) - prt * Dh * pilots[j].t() * arma::inv(C) * pilots[j] * Dh;
    }

    // Objective before the expectation is folded: for a unit-norm A,
    // ||a F_ll A - I||_F^2 + a^2 delta_ll ||A||^2 + a^2 K
    //   + sum_{j != l} a^2 g^2 (||F_jl A||_F^2 + delta_jl ||A||^2).
    inline double objective_by_expansion(const arma::cx_mat &A, double alpha,
                                         const std::vector<arma::cx_mat> &F_hat_to_l, // F_hat_jl for j = 0..L-1
                                         const std::vector<double> &delta_to_l, std::size_t l, double gamma)
    {
        const std::size_t K = A.n_cols;
        const double a2 = alpha * alpha, na = std::pow(arma::norm(A, "fro"), 2);
        const arma::cx_mat E = alpha * F_hat_to_l[l] * A - arma::eye<arma::cx_mat>(K, K);
        double J = std::pow(arma::norm(E, "fro"), 2) + a2 * delta_to_l[l] * na + a2 * static_cast<double>(K);
        for (std::size_t j = 0; j < F_hat_to_l.size(); ++j)
            if (j != l)
                J += a2 * gamma * gamma * (std::pow(arma::norm(F_hat_to_l[j] * A, "fro"), 2) + delta_to_l[j] * na);
        return J;
    }

    struct CsvTable
    {
        std::vector<std::string> header;
        std::vector<std::vector<std::string>> rows;

        std::size_t column(const std::string &name) const
        {
            return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
        }
    };

    inline std::vector<std::string> split_csv_line(const std::string &line)
    {
        std::vector<std::string> out;
        std::string cur;
        bool in_quotes = false;
        for (std::size_t i = 0; i < line.size(); ++i)
        {
            const char c = line[i];
            if (in_quotes)
            {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"')
                {
                    cur += '"';
                    ++i;
                }
                else if (c == '"')
                    in_quotes = false;
                else
                    cur += c;
            }
            else if (c == '"')
                in_quotes = true;
            else if (c == ',')
            {
                out.push_back(cur);
                cur.clear();
            }
            else
                cur += c;
        }
        out.push_back(cur);
        return out;
    }

    inline CsvTable parse_csv(const std::string &text)
    {
        CsvTable t;
        std::istringstream in(text);
        std::string line;
        bool first = true;
        while (std::getline(in, line))
        {
            if (first)
            {
                t.header = split_csv_line(line);
                first = false;
            }
            else if (!line.empty())
                t.rows.push_back(split_csv_line(line));
        }
        return t;
    }
}

#endif
