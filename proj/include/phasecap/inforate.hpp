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

#ifndef PHASECAP_INFORATE_HPP
#define PHASECAP_INFORATE_HPP

#include "phasecap/channel.hpp"
#include "phasecap/entropy.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace phasecap::inforate {

inline constexpr int kDefaultLevels = 200;
inline constexpr int kDefaultBlockLength = 2000;
inline constexpr int kBurnIn = 100;
inline constexpr int kDefaultPastWindow = 200;
/// Input vectors used for the output mixture when |S|^M is too large to enumerate.
inline constexpr std::size_t kMixtureSubset = 4096;

/// Uniform grid of q_levels phases on [0, 2pi) with a circulant transition
/// kernel: kernel()[k] is the wrapped-Gaussian mass of the cell k steps ahead.
class PhaseQuantizer {
public:
    PhaseQuantizer(int q_levels, double sigma_delta);

    int levels() const noexcept { return levels_; }
    double sigma() const noexcept { return sigma_; }
    double spacing() const noexcept;
    double grid(int i) const noexcept;
    const std::vector<double>& kernel() const noexcept { return kernel_; }
    double transition(int from, int to) const noexcept;

    /// out = in propagated one step through the transition kernel.
    void predict(std::span<const double> in, std::span<double> out) const;

private:
    int levels_;
    double sigma_;
    std::vector<double> kernel_;
    std::vector<std::pair<int, double>> support_;
};

/// Normalized forward recursion over the quantized phase.
class ForwardFilter {
public:
    explicit ForwardFilter(const PhaseQuantizer& quantizer);

    /// Uniform state (stationary phase).
    void reset();

    /// Predict through the kernel, weight by exp(log_likelihood) and
    /// renormalize. Returns log of the normalizer, i.e. the log predictive
    /// likelihood of the observation. Throws NumericError if every weight
    /// vanishes or turns non-finite.
    double step(std::span<const double> log_likelihood);

    std::span<const double> state() const noexcept { return state_; }

private:
    const PhaseQuantizer* quantizer_;
    std::vector<double> state_;
    std::vector<double> predicted_;
};

struct RateEstimate {
    double rate = 0.0;       ///< bits per channel use
    double std_error = 0.0;  ///< bits
    int block_length = kDefaultBlockLength;
    int n_blocks = 0;
    std::uint64_t seed = 0;
    bool sampled_mixture = false;  ///< output mixture used a random input subset
};

struct QamRateOptions {
    channel::Normalization normalization = channel::Normalization::peak;
    channel::SimulationOptions simulation{};
};

/// Achievable rate of iid per-antenna signaling over the Wiener phase-noise
/// channel: (1/n)[log q(y^n | x^n) - log q(y^n)] with q the quantized-phase
/// model, averaged over n_blocks blocks.
RateEstimate qam_rate(const channel::ChannelParams& params, const channel::Constellation& constellation,
                      const PhaseQuantizer& quantizer, int block_length, int n_blocks, std::uint64_t seed,
                      const QamRateOptions& options = {});

/// Stored filtering posteriors of the phase given peak-power pilot phase
/// observations, reusable across amplitudes xi with common random numbers.
class PhaseMemoryModel {
public:
    PhaseMemoryModel(const channel::ChannelParams& params, const PhaseQuantizer& quantizer, int block_length,
                     int n_blocks, std::uint64_t seed, int past_window = kDefaultPastWindow);

    /// h(theta_0 + phi_0(xi^2) | past observations, |xi + z_0|), nats.
    entropy::McEstimate conditional_entropy(double xi) const;

    std::size_t samples() const noexcept { return samples_.size(); }
    double sigma() const noexcept { return sigma_; }
    double snr() const noexcept { return snr_; }

private:
    struct Sample {
        std::uint32_t offset;        ///< first stored cell in posterior_
        std::uint32_t count;
        double next_phase;           ///< true theta at the evaluation instant
        std::complex<double> noise;  ///< z_0
    };
    double sigma_;
    double snr_;
    std::uint64_t seed_;
    std::vector<double> grid_;
    std::vector<std::uint16_t> cell_;
    std::vector<double> posterior_;
    std::vector<Sample> samples_;
};

entropy::McEstimate conditional_phase_entropy(double xi, const channel::ChannelParams& params,
                                              const PhaseQuantizer& quantizer, int block_length, int n_blocks,
                                              std::uint64_t seed, int past_window = kDefaultPastWindow);

} // namespace phasecap::inforate

#endif
