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

#ifndef PHASECAP_BOUNDS_HPP
#define PHASECAP_BOUNDS_HPP

#include "phasecap/channel.hpp"
#include "phasecap/entropy.hpp"
#include "phasecap/inforate.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace phasecap::bounds {

enum class Kind {
    upper,                 // "U"
    upper_simplified,      // "U_s"
    asymptotic,            // "asymptotic"
    memoryless_plus_corr,  // "memoryless_plus_corr"
    qam_lower,             // "qam_lower"
    nonunitary_upper,      // "nonunitary_upper"
    nonunitary_lower,      // "nonunitary_lower"
};

std::string_view kind_name(Kind kind) noexcept;
std::optional<Kind> parse_kind(std::string_view name) noexcept;
bool kind_optimizes(Kind kind) noexcept;

/// Gamma output law for the duality bound: shape alpha, scale (snr + M) / alpha.
struct DualityParams {
    double alpha;
    double beta;
    double d_alpha;  ///< log Gamma(alpha) - log Gamma(M) - M + 1

    static DualityParams make(double alpha, double snr, int antennas);
};

double d_alpha(double alpha, int antennas);

struct BoundRecord {
    double snr_db = 0.0;
    Kind kind = Kind::upper;
    double value_bits = 0.0;
    double std_error_bits = 0.0;
    std::optional<double> opt_alpha;
    std::optional<double> opt_xi;
    std::int64_t n_samples = 0;
    std::uint64_t seed = 0;
    std::string meta;
};

struct GridControls {
    int xi_points = 64;
    double alpha_min = 1e-3;
    double alpha_max_per_antenna = 10.0;  ///< bracket top is this times M
    double alpha_rel_width = 1e-4;
    double xi_rel_tol = 1e-3;             ///< golden refinement width / sqrt(snr)
    int max_iterations = 200;
};

struct McControls {
    std::int64_t n_samples = entropy::kDefaultSamples;
    int block_length = inforate::kDefaultBlockLength;
    int n_blocks = 4;
    int q_levels = inforate::kDefaultLevels;
    int past_window = inforate::kDefaultPastWindow;
};

/// The phase-entropy term subtracted in g_alpha. Implementations must return
/// the same value for the same xi (common random numbers).
class PhaseTerm {
public:
    virtual ~PhaseTerm() = default;
    virtual entropy::McEstimate at(double xi) = 0;
    virtual std::string describe() const = 0;
};

/// h(theta_0 + phi_0 | noisy past, |xi + z_0|) from the quantized forward recursion.
class MemoryPhaseTerm final : public PhaseTerm {
public:
    MemoryPhaseTerm(const channel::ChannelParams& params, const McControls& mc, std::uint64_t seed);
    entropy::McEstimate at(double xi) override;
    std::string describe() const override;

private:
    inforate::PhaseMemoryModel model_;
};

/// h(Delta + phi_0 | |xi + z_0|).
class SimplifiedPhaseTerm final : public PhaseTerm {
public:
    SimplifiedPhaseTerm(double sigma, std::int64_t n_samples, std::uint64_t seed);
    entropy::McEstimate at(double xi) override;
    std::string describe() const override;

private:
    entropy::PhaseSumEntropy table_;
    std::int64_t n_samples_;
    std::uint64_t seed_;
};

/// A fixed value, e.g. h(Delta) for the memoryless-plus-correction bound.
class ConstantPhaseTerm final : public PhaseTerm {
public:
    explicit ConstantPhaseTerm(double value) : value_(value) {}
    entropy::McEstimate at(double) override { return {value_, 0.0, 0, 0}; }
    std::string describe() const override;

private:
    double value_;
};

/// xi-dependent pieces of g_alpha, cached per amplitude.
struct GTerms {
    double expect_log = 0.0;      ///< E log(|xi + z_1|^2 + sum |z_j|^2)
    double entropy_abs_sq = 0.0;  ///< h(|xi + z_0|^2)
    entropy::McEstimate phase;    ///< phase-entropy term
};

class GFunction {
public:
    GFunction(const channel::ChannelParams& params, PhaseTerm& phase);

    const GTerms& terms(double xi);
    /// g_alpha(xi) in nats with the phase term's standard error.
    entropy::McEstimate value(double alpha, double xi);

    int antennas() const noexcept { return antennas_; }
    double snr() const noexcept { return snr_; }

private:
    int antennas_;
    double snr_;
    PhaseTerm* phase_;
    std::map<double, GTerms> cache_;
};

entropy::McEstimate g_alpha(double alpha, double xi, const channel::ChannelParams& params, PhaseTerm& phase);

struct Optimum {
    double value = 0.0;      ///< nats
    double std_error = 0.0;  ///< nats
    double alpha = 0.0;
    double xi = 0.0;
};

/// min over alpha of { alpha log((snr+M)/alpha) + d_alpha + log 2pi + max_xi g_alpha(xi) }.
Optimum minimize_bound(const channel::ChannelParams& params, PhaseTerm& phase, const GridControls& grid = {});

BoundRecord upper_bound_U(const channel::ChannelParams& params, const GridControls& grid, const McControls& mc,
                          std::uint64_t seed);
BoundRecord upper_bound_Us(const channel::ChannelParams& params, const GridControls& grid, const McControls& mc,
                           std::uint64_t seed);
BoundRecord memoryless_plus_correction(const channel::ChannelParams& params, const GridControls& grid = {});

/// High-SNR capacity expansion, nats.
double asymptotic_capacity_nats(int antennas, double sigma_delta, double snr);
BoundRecord asymptotic_capacity(const channel::ChannelParams& params);

/// High-SNR loss of the peak constraint relative to the average constraint, nats.
double avg_peak_gap(int antennas);

struct NonunitaryBounds {
    double lower;
    double upper;
};

/// (curve(lambda_min snr), curve(lambda_max snr)) for a unitary-channel curve.
NonunitaryBounds nonunitary_bounds(const std::function<double(double)>& curve, double lambda_min,
                                   double lambda_max, double snr);

BoundRecord qam_lower(const channel::ChannelParams& params, const channel::Constellation& constellation,
                      const McControls& mc, std::uint64_t seed,
                      channel::Normalization normalization = channel::Normalization::peak);

double db_to_linear(double db) noexcept;
double linear_to_db(double linear) noexcept;

} // namespace phasecap::bounds

#endif
