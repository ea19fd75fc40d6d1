// Copyright 2026 The phasecap Authors
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

#include "phasecap/inforate.hpp"

#include "batch_means.hpp"
#include "phasecap/error.hpp"
#include "phasecap/mathcore.hpp"
#include "phasecap/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace phasecap::inforate {

using channel::cplx;
using channel::CVector;
using mathcore::kTwoPi;

PhaseQuantizer::PhaseQuantizer(int q_levels, double sigma_delta)
    : levels_(q_levels), sigma_(sigma_delta)
{
    if (q_levels < 2 || q_levels > 65535)
        throw ConfigError("quantizer needs between 2 and 65535 levels");
    if (!(sigma_delta > 0.0) || !std::isfinite(sigma_delta))
        throw DomainError("quantizer phase-noise std must be positive");
    const mathcore::WrappedGaussian increment(sigma_delta);
    const double h = spacing();
    kernel_.resize(static_cast<std::size_t>(q_levels));
    for (int k = 0; k < q_levels; ++k)
        kernel_[static_cast<std::size_t>(k)] = increment.arc_mass(k * h - 0.5 * h, k * h + 0.5 * h);
    const double total = std::accumulate(kernel_.begin(), kernel_.end(), 0.0);
    for (auto& c : kernel_)
        c /= total;
    for (int k = 0; k < q_levels; ++k)
        if (kernel_[static_cast<std::size_t>(k)] > 1e-22)
            support_.emplace_back(k, kernel_[static_cast<std::size_t>(k)]);
}

double PhaseQuantizer::spacing() const noexcept
{
    return kTwoPi / levels_;
}

double PhaseQuantizer::grid(int i) const noexcept
{
    return spacing() * i;
}

double PhaseQuantizer::transition(int from, int to) const noexcept
{
    int k = (to - from) % levels_;
    if (k < 0)
        k += levels_;
    return kernel_[static_cast<std::size_t>(k)];
}

void PhaseQuantizer::predict(std::span<const double> in, std::span<double> out) const
{
    const auto q = static_cast<std::size_t>(levels_);
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& [shift, w] : support_) {
        const auto d = static_cast<std::size_t>(shift);
        // out[(j + d) mod q] += w * in[j], split to avoid the modulo.
        for (std::size_t j = 0; j + d < q; ++j)
            out[j + d] += w * in[j];
        for (std::size_t j = q - d; j < q && d > 0; ++j)
            out[j + d - q] += w * in[j];
    }
}

ForwardFilter::ForwardFilter(const PhaseQuantizer& quantizer)
    : quantizer_(&quantizer),
      state_(static_cast<std::size_t>(quantizer.levels())),
      predicted_(static_cast<std::size_t>(quantizer.levels()))
{
    reset();
}

void ForwardFilter::reset()
{
    std::fill(state_.begin(), state_.end(), 1.0 / static_cast<double>(state_.size()));
}

double ForwardFilter::step(std::span<const double> log_likelihood)
{
    quantizer_->predict(state_, predicted_);
    const double peak = *std::max_element(log_likelihood.begin(), log_likelihood.end());
    if (!std::isfinite(peak))
        throw NumericError("forward recursion: non-finite log-likelihood");
    double total = 0.0;
    for (std::size_t i = 0; i < state_.size(); ++i) {
        const double w = predicted_[i] * std::exp(log_likelihood[i] - peak);
        state_[i] = w;
        total += w;
    }
    if (!(total > 0.0) || !std::isfinite(total))
        throw NumericError("forward recursion weight underflowed; the phase quantizer is too coarse for this SNR");
    const double inv = 1.0 / total;
    for (auto& s : state_)
        s *= inv;
    return peak + std::log(total);
}

namespace {

void require_recursion_controls(int block_length, int n_blocks)
{
    if (block_length < 100)
        throw ConfigError("block_length must be at least 100");
    if (n_blocks < 1)
        throw ConfigError("n_blocks must be at least 1");
}

void require_matching_sigma(const channel::ChannelParams& params, const PhaseQuantizer& quantizer)
{
    if (std::abs(params.sigma_delta - quantizer.sigma()) > 1e-12 * std::max(1.0, params.sigma_delta))
        throw ConfigError("quantizer was built for a different phase-noise std than the channel");
}

// Output-mixture evaluator: log (1/|X|) sum_x exp(-||v_x||^2 + 2 Re(e^{-j theta} <v_x, y>))
// for every quantizer cell, with v_x = H x.
class MixtureModel {
public:
    MixtureModel(const channel::CMatrix& h, const std::vector<cplx>& symbols, int antennas, Rng& rng)
        : antennas_(antennas)
    {
        const auto m = static_cast<std::size_t>(antennas);
        const std::size_t k = symbols.size();
        if (h.is_diagonal()) {
            factorized_ = true;
            per_antenna_.resize(m);
            for (std::size_t a = 0; a < m; ++a)
                for (const auto& s : symbols)
                    per_antenna_[a].push_back(h(a, a) * s);
            return;
        }
        double total = 1.0;
        for (std::size_t a = 0; a < m; ++a)
            total *= static_cast<double>(k);
        std::vector<CVector> inputs;
        if (total <= static_cast<double>(kMixtureSubset)) {
            const auto count = static_cast<std::size_t>(total);
            for (std::size_t idx = 0; idx < count; ++idx) {
                CVector x(m);
                std::size_t rest = idx;
                for (std::size_t a = 0; a < m; ++a) {
                    x[a] = symbols[rest % k];
                    rest /= k;
                }
                inputs.push_back(std::move(x));
            }
        } else {
            sampled_ = true;
            std::uniform_int_distribution<std::size_t> pick(0, k - 1);
            for (std::size_t i = 0; i < kMixtureSubset; ++i) {
                CVector x(m);
                for (auto& v : x)
                    v = symbols[pick(rng)];
                inputs.push_back(std::move(x));
            }
        }
        for (const auto& x : inputs)
            vectors_.push_back(h.apply(x));
    }

    bool sampled() const noexcept { return sampled_; }

    void log_likelihood(const CVector& y, std::span<const double> cos_t, std::span<const double> sin_t,
                        std::span<double> out)
    {
        const std::size_t q = out.size();
        if (factorized_) {
            std::fill(out.begin(), out.end(), 0.0);
            for (std::size_t a = 0; a < per_antenna_.size(); ++a) {
                const auto& pts = per_antenna_[a];
                prepare(pts.size());
                for (std::size_t s = 0; s < pts.size(); ++s) {
                    const cplx u = std::conj(pts[s]) * y[a];
                    re_[s] = 2.0 * u.real();
                    im_[s] = 2.0 * u.imag();
                    en_[s] = -std::norm(pts[s]);
                }
                accumulate(cos_t, sin_t, out, q);
            }
            return;
        }
        prepare(vectors_.size());
        for (std::size_t s = 0; s < vectors_.size(); ++s) {
            cplx u = 0.0;
            double e = 0.0;
            for (std::size_t a = 0; a < y.size(); ++a) {
                u += std::conj(vectors_[s][a]) * y[a];
                e += std::norm(vectors_[s][a]);
            }
            re_[s] = 2.0 * u.real();
            im_[s] = 2.0 * u.imag();
            en_[s] = -e;
        }
        std::fill(out.begin(), out.end(), 0.0);
        accumulate(cos_t, sin_t, out, q);
    }

private:
    void prepare(std::size_t n)
    {
        re_.resize(n);
        im_.resize(n);
        en_.resize(n);
        tmp_.resize(n);
    }

    // out[i] += log mean_s exp(en_s + re_s cos t_i + im_s sin t_i)
    void accumulate(std::span<const double> cos_t, std::span<const double> sin_t, std::span<double> out,
                    std::size_t q)
    {
        const std::size_t n = re_.size();
        const double log_n = std::log(static_cast<double>(n));
        for (std::size_t i = 0; i < q; ++i) {
            double peak = -std::numeric_limits<double>::infinity();
            for (std::size_t s = 0; s < n; ++s) {
                tmp_[s] = en_[s] + re_[s] * cos_t[i] + im_[s] * sin_t[i];
                peak = std::max(peak, tmp_[s]);
            }
            double sum = 0.0;
            for (std::size_t s = 0; s < n; ++s)
                sum += std::exp(tmp_[s] - peak);
            out[i] += peak + std::log(sum) - log_n;
        }
    }

    int antennas_;
    bool factorized_ = false;
    bool sampled_ = false;
    std::vector<std::vector<cplx>> per_antenna_;
    std::vector<CVector> vectors_;
    std::vector<double> re_, im_, en_, tmp_;
};

} // namespace

RateEstimate qam_rate(const channel::ChannelParams& params, const channel::Constellation& constellation,
                      const PhaseQuantizer& quantizer, int block_length, int n_blocks, std::uint64_t seed,
                      const QamRateOptions& options)
{
    params.validate();
    require_recursion_controls(block_length, n_blocks);
    require_matching_sigma(params, quantizer);

    const auto m = static_cast<std::size_t>(params.antennas);
    const auto q = static_cast<std::size_t>(quantizer.levels());
    const channel::CMatrix h = params.effective_h();
    const auto symbols = constellation.scaled(params.snr, params.antennas, options.normalization);
    const std::size_t k = symbols.size();

    std::vector<double> cos_t(q), sin_t(q);
    for (std::size_t i = 0; i < q; ++i) {
        cos_t[i] = std::cos(quantizer.grid(static_cast<int>(i)));
        sin_t[i] = std::sin(quantizer.grid(static_cast<int>(i)));
    }

    Rng subset_rng(derive_seed(seed, 0x5b5e7));
    MixtureModel mixture(h, symbols, params.antennas, subset_rng);

    detail::BatchMeans stats;
    std::vector<double> ll_cond(q), ll_mix(q);
    ForwardFilter cond_filter(quantizer);
    ForwardFilter mix_filter(quantizer);
    const std::size_t steps = static_cast<std::size_t>(kBurnIn + block_length);

    for (int b = 0; b < n_blocks; ++b) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(b) + 1));
        Rng phase_rng(derive_seed(seed, 0x10000 + static_cast<std::uint64_t>(b)));
        const auto trajectory = channel::wiener_trajectory(params.sigma_delta, steps, phase_rng, options.simulation);
        std::uniform_int_distribution<std::size_t> pick(0, k - 1);
        cond_filter.reset();
        mix_filter.reset();
        CVector x(m);
        for (std::size_t t = 0; t < steps; ++t) {
            for (auto& v : x)
                v = symbols[pick(rng)];
            const CVector hx = h.apply(x);
            const cplx rot = std::polar(1.0, trajectory.theta[t]);
            CVector y(m);
            double hx_energy = 0.0;
            cplx corr = 0.0;
            for (std::size_t a = 0; a < m; ++a) {
                y[a] = rot * hx[a];
                if (options.simulation.add_noise)
                    y[a] += complex_normal(rng);
                hx_energy += std::norm(hx[a]);
                corr += std::conj(hx[a]) * y[a];
            }
            for (std::size_t i = 0; i < q; ++i)
                ll_cond[i] = -hx_energy + 2.0 * (corr.real() * cos_t[i] + corr.imag() * sin_t[i]);
            mixture.log_likelihood(y, cos_t, sin_t, ll_mix);
            const double lc = cond_filter.step(ll_cond);
            const double lm = mix_filter.step(ll_mix);
            if (t >= static_cast<std::size_t>(kBurnIn))
                stats.add(lc - lm);
        }
        stats.flush();
    }

    RateEstimate est;
    est.rate = stats.mean() / std::numbers::ln2;
    est.std_error = stats.std_error() / std::numbers::ln2;
    est.block_length = block_length;
    est.n_blocks = n_blocks;
    est.seed = seed;
    est.sampled_mixture = mixture.sampled();
    if (!std::isfinite(est.rate))
        throw NumericError("qam_rate: non-finite rate estimate");
    return est;
}

PhaseMemoryModel::PhaseMemoryModel(const channel::ChannelParams& params, const PhaseQuantizer& quantizer,
                                   int block_length, int n_blocks, std::uint64_t seed, int past_window)
    : sigma_(params.sigma_delta), snr_(params.snr), seed_(seed)
{
    params.validate();
    require_recursion_controls(block_length, n_blocks);
    require_matching_sigma(params, quantizer);
    if (past_window < 1)
        throw ConfigError("past_window must be positive");

    const auto q = static_cast<std::size_t>(quantizer.levels());
    grid_.resize(q);
    for (std::size_t i = 0; i < q; ++i)
        grid_[i] = quantizer.grid(static_cast<int>(i));

    ForwardFilter filter(quantizer);
    std::vector<double> loglik(q);
    const double root_snr = std::sqrt(snr_);
    const auto steps = static_cast<std::size_t>(past_window + block_length);
    samples_.reserve(static_cast<std::size_t>(block_length) * static_cast<std::size_t>(n_blocks));

    for (int b = 0; b < n_blocks; ++b) {
        Rng phase_rng(derive_seed(seed, 0x20000 + static_cast<std::uint64_t>(b)));
        Rng pilot_rng(derive_seed(seed, 0x30000 + static_cast<std::uint64_t>(b)));
        Rng probe_rng(derive_seed(seed, 0x40000 + static_cast<std::uint64_t>(b)));
        // One extra instant: the phase at which the current observation is made.
        const auto trajectory = channel::wiener_trajectory(sigma_, steps + 1, phase_rng);
        filter.reset();
        for (std::size_t t = 0; t < steps; ++t) {
            // Pilot at peak power: observed phase theta + arg(sqrt(snr) + z).
            const double u = trajectory.theta[t] + std::arg(root_snr + complex_normal(pilot_rng));
            for (std::size_t i = 0; i < q; ++i)
                loglik[i] = std::log(mathcore::rician_phase_pdf(u - grid_[i], snr_));
            filter.step(loglik);
            if (t < static_cast<std::size_t>(past_window))
                continue;
            const auto state = filter.state();
            const double peak = *std::max_element(state.begin(), state.end());
            Sample s{};
            s.offset = static_cast<std::uint32_t>(posterior_.size());
            for (std::size_t i = 0; i < q; ++i) {
                if (state[i] >= 1e-14 * peak) {
                    cell_.push_back(static_cast<std::uint16_t>(i));
                    posterior_.push_back(state[i]);
                }
            }
            s.count = static_cast<std::uint32_t>(posterior_.size() - s.offset);
            s.next_phase = trajectory.theta[t + 1];
            s.noise = complex_normal(probe_rng);
            samples_.push_back(s);
        }
    }
}

entropy::McEstimate PhaseMemoryModel::conditional_entropy(double xi) const
{
    if (!(xi >= 0.0) || xi > std::sqrt(snr_) * (1.0 + 1e-12))
        throw DomainError("conditional_entropy: amplitude must lie in [0, sqrt(snr)]");
    detail::BatchMeans stats;
    for (const auto& s : samples_) {
        const cplx w = xi + s.noise;
        const double kappa = 2.0 * std::abs(w) * xi;
        const double u = s.next_phase + std::arg(w);
        double p;
        if (kappa == 0.0) {
            p = 1.0 / kTwoPi;
        } else {
            const auto b = entropy::phase_sum_coefficients(sigma_, kappa);
            p = 0.0;
            for (std::uint32_t j = 0; j < s.count; ++j) {
                const std::size_t idx = s.offset + j;
                p += posterior_[idx] * entropy::phase_sum_density(b, u - grid_[cell_[idx]]);
            }
        }
        if (!(p > 0.0) || !std::isfinite(p))
            throw NumericError("conditional_entropy: predictive density vanished at the observation");
        stats.add(-std::log(p));
    }
    return {stats.mean(), stats.std_error(), stats.count(), seed_};
}

entropy::McEstimate conditional_phase_entropy(double xi, const channel::ChannelParams& params,
                                              const PhaseQuantizer& quantizer, int block_length, int n_blocks,
                                              std::uint64_t seed, int past_window)
{
    if (!(xi >= 0.0) || xi > std::sqrt(params.snr) * (1.0 + 1e-12))
        throw DomainError("conditional_phase_entropy: amplitude must lie in [0, sqrt(snr)]");
    return PhaseMemoryModel(params, quantizer, block_length, n_blocks, seed, past_window).conditional_entropy(xi);
}

} // namespace phasecap::inforate
