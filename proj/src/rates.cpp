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

#include "pilotmimo/rates.hpp"
#include "pilotmimo/channel.hpp"
#include "pilotmimo/errors.hpp"
#include "pilotmimo/estimation.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

namespace pilotmimo
{
    ThetaMoments theta_moments(std::size_t M)
    {
        if (M == 0)
            throw PreconditionViolated("theta_moments needs M >= 1.");
        const double m = static_cast<double>(M);
        ThetaMoments out;
        out.m2 = m;
        if (M < 32)
        {
            out.m1 = std::exp(std::lgamma(m + 0.5) - std::lgamma(m));
            out.var = m - out.m1 * out.m1;
            return out;
        }
        // ln(Gamma(m + 1/2) / (Gamma(m) sqrt(m))) from the Bernoulli-polynomial
        // expansion of the log-gamma difference; truncation error ~ m^-9.
        const double x = 1.0 / m, x2 = x * x;
        const double log_ratio = x * (-1.0 / 8.0 + x2 * (1.0 / 192.0 + x2 * (-1.0 / 640.0 + x2 * (17.0 / 14336.0))));
        out.m1 = std::sqrt(m) * std::exp(log_ratio);
        out.var = -m * std::expm1(2.0 * log_ratio);
        return out;
    }

    double achievable_rate(std::complex<double> signal_mean, double signal_var, double interference_power)
    {
        return std::log2(1.0 + std::norm(signal_mean) / (1.0 + signal_var + interference_power));
    }

    namespace
    {
        constexpr std::size_t kDim = 4; // Re g, Im g, |g|^2, total interference power

        struct Accumulator
        {
            double n = 0.0;
            std::array<double, kDim> mean{};
            std::array<double, kDim * kDim> comoment{};
            std::vector<double> interference_sum;

            void add(const std::array<double, kDim> &x)
            {
                n += 1.0;
                std::array<double, kDim> before{};
                for (std::size_t a = 0; a < kDim; ++a)
                {
                    before[a] = x[a] - mean[a];
                    mean[a] += before[a] / n;
                }
                for (std::size_t a = 0; a < kDim; ++a)
                    for (std::size_t b = 0; b < kDim; ++b)
                        comoment[a * kDim + b] += before[a] * (x[b] - mean[b]);
            }

            void merge(const Accumulator &o)
            {
                if (o.n == 0.0)
                    return;
                if (n == 0.0)
                {
                    *this = o;
                    return;
                }
                const double total = n + o.n;
                std::array<double, kDim> delta{};
                for (std::size_t a = 0; a < kDim; ++a)
                    delta[a] = o.mean[a] - mean[a];
                for (std::size_t a = 0; a < kDim; ++a)
                    for (std::size_t b = 0; b < kDim; ++b)
                        comoment[a * kDim + b] += o.comoment[a * kDim + b] + delta[a] * delta[b] * n * o.n / total;
                for (std::size_t a = 0; a < kDim; ++a)
                    mean[a] += delta[a] * o.n / total;
                for (std::size_t i = 0; i < interference_sum.size(); ++i)
                    interference_sum[i] += o.interference_sum[i];
                n = total;
            }

            // Covariance of the sample mean: comoment / (n - 1) / n.
            double mean_cov(std::size_t a, std::size_t b) const { return comoment[a * kDim + b] / (n - 1.0) / n; }
        };

        // Accumulators for every (method, user) pair.
        using ChunkState = std::vector<std::vector<Accumulator>>;

        class TrialRunner
        {
        public:
            TrialRunner(const SystemConfig &config, const GainTensor &betas, const PilotBook &pilots,
                        std::span<const PrecoderMethod> methods, const MonteCarloOptions &options)
                : config_(config), betas_(betas), pilots_(pilots), methods_(methods.begin(), methods.end()),
                  options_(options), estimator_(pilots, betas, config),
                  deltas_(options.perfect_csi ? zero_deltas(config.num_cells) : error_cov_scalars(pilots, betas, config))
            {
                const std::size_t L = config.num_cells, K = config.users_per_cell;
                amplitude_.resize(L * L * K);
                for (std::size_t j = 0; j < L; ++j)
                    for (std::size_t l = 0; l < L; ++l)
                        for (std::size_t k = 0; k < K; ++k)
                            amplitude_[(j * L + l) * K + k] = std::sqrt(config.forward_power * betas(j, l, k));
            }

            ChunkState empty_state() const
            {
                const std::size_t users = config_.num_cells * config_.users_per_cell;
                Accumulator blank;
                blank.interference_sum.assign(users, 0.0);
                return ChunkState(methods_.size(), std::vector<Accumulator>(users, blank));
            }

            void run(std::uint64_t trial, ChunkState &state) const
            {
                const std::size_t L = config_.num_cells, K = config_.users_per_cell;
                Rng channel_rng = Rng::for_draw(config_.rng_seed, Stream::channels, trial);
                const ChannelSet H = draw_channels(config_, channel_rng);

                ChannelEstimateSet est;
                if (options_.perfect_csi)
                    est = perfect_csi(H);
                else
                {
                    Rng noise_rng = Rng::for_draw(config_.rng_seed, Stream::training_noise, trial);
                    est = estimator_.estimate(synth_training(H, pilots_, betas_, config_, noise_rng));
                }

                std::vector<arma::cx_mat> gains(L * L);
                for (std::size_t m = 0; m < methods_.size(); ++m)
                {
                    for (std::size_t l = 0; l < L; ++l)
                    {
                        const Precoder A = make_precoder(methods_[m], est, deltas_, betas_, config_, l);
                        for (std::size_t j = 0; j < L; ++j)
                            gains[j * L + l] = H(j, l) * A.a;
                    }
                    for (std::size_t j = 0; j < L; ++j)
                        for (std::size_t k = 0; k < K; ++k)
                        {
                            Accumulator &acc = state[m][j * K + k];
                            std::complex<double> own;
                            double interference = 0.0;
                            for (std::size_t l = 0; l < L; ++l)
                            {
                                const double amp = amplitude_[(j * L + l) * K + k];
                                for (std::size_t i = 0; i < K; ++i)
                                {
                                    const std::complex<double> g = amp * gains[j * L + l](k, i);
                                    if (l == j && i == k)
                                        own = g;
                                    else
                                    {
                                        const double p = std::norm(g);
                                        acc.interference_sum[l * K + i] += p;
                                        interference += p;
                                    }
                                }
                            }
                            acc.add({own.real(), own.imag(), std::norm(own), interference});
                        }
                }
            }

        private:
            static ErrorCovScalars zero_deltas(std::size_t L) { return ErrorCovScalars{L, std::vector<double>(L * L, 0.0)}; }

            const SystemConfig &config_;
            const GainTensor &betas_;
            const PilotBook &pilots_;
            std::vector<PrecoderMethod> methods_;
            MonteCarloOptions options_;
            MmseEstimator estimator_;
            ErrorCovScalars deltas_;
            std::vector<double> amplitude_;
        };

        UserMoments summarize(const Accumulator &acc)
        {
            UserMoments u;
            const double re = acc.mean[0], im = acc.mean[1], abs2 = acc.mean[2];
            u.signal_mean = {re, im};
            u.signal_var = std::max(0.0, abs2 - (re * re + im * im));
            u.interference_total = acc.mean[3];
            u.interference_powers.resize(acc.interference_sum.size());
            for (std::size_t i = 0; i < acc.interference_sum.size(); ++i)
                u.interference_powers[i] = acc.interference_sum[i] / acc.n;

            u.stderr_signal_mean = std::sqrt(acc.mean_cov(0, 0) + acc.mean_cov(1, 1));
            u.stderr_interference = std::sqrt(acc.mean_cov(3, 3));

            auto quad = [&](const std::array<double, kDim> &grad) {
                double v = 0.0;
                for (std::size_t a = 0; a < kDim; ++a)
                    for (std::size_t b = 0; b < kDim; ++b)
                        v += grad[a] * grad[b] * acc.mean_cov(a, b);
                return std::sqrt(std::max(0.0, v));
            };
            u.stderr_signal_var = quad({-2.0 * re, -2.0 * im, 1.0, 0.0});

            // R = log2(N / D) with N = 1 + E|g|^2 + I and D = 1 + E|g|^2 - |E g|^2 + I.
            const double N = 1.0 + abs2 + u.interference_total;
            const double D = 1.0 + u.signal_var + u.interference_total;
            const double inv_ln2 = 1.0 / std::numbers::ln2;
            u.rate_stderr = quad({2.0 * re / D * inv_ln2, 2.0 * im / D * inv_ln2, (1.0 / N - 1.0 / D) * inv_ln2,
                                  (1.0 / N - 1.0 / D) * inv_ln2});
            return u;
        }
    }

    void assemble_rates(RateReport &report)
    {
        report.min_rate = std::numeric_limits<double>::infinity();
        for (std::size_t u = 0; u < report.users.size(); ++u)
        {
            UserMoments &m = report.users[u];
            m.rate = achievable_rate(m.signal_mean, m.signal_var, m.interference_total);
            if (m.rate < report.min_rate)
            {
                report.min_rate = m.rate;
                report.min_rate_stderr = m.rate_stderr;
                report.min_user = u;
            }
        }
    }

    std::vector<RateReport> monte_carlo_rates(const SystemConfig &config, const GainTensor &betas,
                                              const PilotBook &pilots, std::span<const PrecoderMethod> methods,
                                              std::size_t n_trials, const MonteCarloOptions &options)
    {
        if (n_trials < 2)
            throw PreconditionViolated("Monte Carlo rate estimation needs at least 2 trials.");
        if (methods.empty())
            throw PreconditionViolated("No precoding method requested.");
        config.validate(true);
        betas.require_shape(config.num_cells, config.users_per_cell);
        pilots.require_shape(config.num_cells, config.users_per_cell, config.pilot_length);

        const TrialRunner runner(config, betas, pilots, methods, options);
        const std::size_t chunks = std::clamp<std::size_t>(options.chunks, 1, n_trials);
        std::vector<ChunkState> states(chunks);

        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (std::size_t c = next++; c < chunks; c = next++)
            {
                try
                {
                    ChunkState state = runner.empty_state();
                    const std::size_t begin = c * n_trials / chunks, end = (c + 1) * n_trials / chunks;
                    for (std::size_t t = begin; t < end; ++t)
                        runner.run(t, state);
                    states[c] = std::move(state);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next = chunks;
                }
            }
        };

        std::size_t threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
        threads = std::min(threads, chunks);
        if (threads <= 1)
            worker();
        else
        {
            std::vector<std::jthread> pool;
            for (std::size_t i = 0; i < threads; ++i)
                pool.emplace_back(worker);
        }
        if (failure)
            std::rethrow_exception(failure);

        ChunkState merged = runner.empty_state();
        for (const ChunkState &state : states)
            for (std::size_t m = 0; m < methods.size(); ++m)
                for (std::size_t u = 0; u < merged[m].size(); ++u)
                    merged[m][u].merge(state[m][u]);

        std::vector<RateReport> reports;
        for (std::size_t m = 0; m < methods.size(); ++m)
        {
            RateReport report;
            report.method = methods[m];
            report.num_cells = config.num_cells;
            report.users_per_cell = config.users_per_cell;
            report.trials = n_trials;
            for (const Accumulator &acc : merged[m])
                report.users.push_back(summarize(acc));
            assemble_rates(report);
            reports.push_back(std::move(report));
        }
        return reports;
    }

    RateReport monte_carlo_rates(const SystemConfig &config, const GainTensor &betas, const PilotBook &pilots,
                                 PrecoderMethod method, std::size_t n_trials, const MonteCarloOptions &options)
    {
        const PrecoderMethod methods[] = {method};
        return std::move(monte_carlo_rates(config, betas, pilots, methods, n_trials, options).front());
    }

    namespace
    {
        void require_single_user(const GainTensor &betas, const SystemConfig &config, std::size_t j)
        {
            if (config.users_per_cell != 1)
                throw PreconditionViolated("Closed-form rates need one user per cell, got K = " +
                                           std::to_string(config.users_per_cell) + ".");
            betas.require_shape(config.num_cells, 1);
            if (j >= config.num_cells)
                throw ShapeMismatch("Cell index out of range.");
        }

        // kappa_l = 1 + p_r tau sum_i beta_il
        std::vector<double> kappas(const GainTensor &betas, const SystemConfig &config)
        {
            const double prt = config.reverse_power * static_cast<double>(config.pilot_length);
            std::vector<double> kappa(config.num_cells, 1.0);
            for (std::size_t l = 0; l < config.num_cells; ++l)
                for (std::size_t i = 0; i < config.num_cells; ++i)
                    kappa[l] += prt * betas(i, l, 0);
            return kappa;
        }
    }

    ClosedFormMoments closed_form_moments(const GainTensor &betas, const SystemConfig &config, std::size_t j)
    {
        require_single_user(betas, config, j);
        const std::size_t L = config.num_cells;
        const double pf = config.forward_power;
        const double prt = config.reverse_power * static_cast<double>(config.pilot_length);
        const std::vector<double> kappa = kappas(betas, config);
        const ThetaMoments theta = theta_moments(config.antennas);

        // Per-entry variances of the estimate and of its error at base station l.
        auto estimate_var = [&](std::size_t l) { return prt * betas(j, l, 0) / kappa[l]; };
        auto error_var = [&](std::size_t l) { return (kappa[l] - prt * betas(j, l, 0)) / kappa[l]; };

        ClosedFormMoments out;
        const double bjj = betas(j, j, 0);
        out.signal_mean = std::sqrt(pf * bjj * estimate_var(j)) * theta.m1;
        out.signal_var = pf * bjj * (estimate_var(j) * theta.var + error_var(j));
        out.interference.assign(L, 0.0);
        for (std::size_t l = 0; l < L; ++l)
        {
            if (l == j)
                continue;
            out.interference[l] = pf * betas(j, l, 0) * (estimate_var(l) * theta.m2 + error_var(l));
            out.interference_total += out.interference[l];
        }
        return out;
    }

    double closed_form_rate(const GainTensor &betas, const SystemConfig &config, std::size_t j)
    {
        require_single_user(betas, config, j);
        const std::size_t L = config.num_cells;
        const double pf = config.forward_power;
        const double prt = config.reverse_power * static_cast<double>(config.pilot_length);
        const std::vector<double> kappa = kappas(betas, config);
        const ThetaMoments theta = theta_moments(config.antennas);
        const double bjj = betas(j, j, 0);

        const double coherent = pf * bjj * (prt * bjj / kappa[j]);
        const double signal = coherent * theta.m1 * theta.m1;
        double denominator = 1.0 + coherent * theta.var;
        for (std::size_t l = 0; l < L; ++l)
        {
            const double bjl = betas(j, l, 0);
            if (l != j)
                denominator += pf * bjl * (prt * bjl / kappa[l]) * theta.m2;
            double others = 0.0;
            for (std::size_t i = 0; i < L; ++i)
                if (i != j)
                    others += betas(i, l, 0);
            denominator += pf * bjl * (1.0 + prt * others) / kappa[l];
        }
        return std::log2(1.0 + signal / denominator);
    }

    AsymptoticRate asymptotic_rate(const GainTensor &betas, const SystemConfig &config, std::size_t j)
    {
        require_single_user(betas, config, j);
        const std::vector<double> kappa = kappas(betas, config);
        const double bjj = betas(j, j, 0);
        double leakage = 0.0;
        for (std::size_t l = 0; l < config.num_cells; ++l)
            if (l != j)
                leakage += betas(j, l, 0) * betas(j, l, 0) / kappa[l];
        if (leakage == 0.0)
            return AsymptoticRate{std::numeric_limits<double>::infinity(), true};
        return AsymptoticRate{std::log2(1.0 + (bjj * bjj / kappa[j]) / leakage), false};
    }
}
