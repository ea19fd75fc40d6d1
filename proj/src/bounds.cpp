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

#include "phasecap/bounds.hpp"

#include "phasecap/error.hpp"
#include "phasecap/mathcore.hpp"
#include "phasecap/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace phasecap::bounds {

namespace {

constexpr std::array<std::pair<Kind, std::string_view>, 7> kKindNames{{
    {Kind::upper, "U"},
    {Kind::upper_simplified, "U_s"},
    {Kind::asymptotic, "asymptotic"},
    {Kind::memoryless_plus_corr, "memoryless_plus_corr"},
    {Kind::qam_lower, "qam_lower"},
    {Kind::nonunitary_upper, "nonunitary_upper"},
    {Kind::nonunitary_lower, "nonunitary_lower"},
}};

constexpr double kInvGolden = 0.61803398874989484820;

double to_bits(double nats) noexcept
{
    return nats / std::numbers::ln2;
}

void require_bound_params(const channel::ChannelParams& params)
{
    params.validate();
    if (!(params.sigma_delta > 0.0))
        throw DomainError("capacity bounds need a positive phase-noise std");
    if (!params.unitary())
        throw DomainError("capacity bounds assume a unitary channel; use nonunitary_bounds for general H");
}

struct InnerMax {
    double value;
    double xi;
    double std_error;
};

InnerMax maximize_over_xi(GFunction& g, double alpha, const std::vector<double>& grid, const GridControls& controls)
{
    InnerMax best{-std::numeric_limits<double>::infinity(), 0.0, 0.0};
    std::vector<entropy::McEstimate> seen;
    // A noiseless point (xi = 0) can tie with a noisy one; report the
    // largest std error among candidates that are statistically tied.
    auto finish = [&] {
        for (const auto& v : seen)
            if (v.value >= best.value - 3.0 * std::hypot(v.std_error, best.std_error))
                best.std_error = std::max(best.std_error, v.std_error);
        return best;
    };
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto v = g.value(alpha, grid[i]);
        seen.push_back(v);
        if (v.value > best.value) {
            best = {v.value, grid[i], v.std_error};
            best_index = i;
        }
    }
    if (grid.size() < 3)
        return finish();

    double a = grid[best_index == 0 ? 0 : best_index - 1];
    double b = grid[std::min(best_index + 1, grid.size() - 1)];
    const double tol = controls.xi_rel_tol * grid.back();
    auto probe = [&](double xi) {
        const auto v = g.value(alpha, xi);
        seen.push_back(v);
        if (v.value > best.value)
            best = {v.value, xi, v.std_error};
        return v.value;
    };
    double c = b - kInvGolden * (b - a);
    double d = a + kInvGolden * (b - a);
    double fc = probe(c);
    double fd = probe(d);
    for (int it = 0; b - a > tol; ++it) {
        if (it > controls.max_iterations)
            throw OptimizationError("golden-section search over xi did not converge", best.xi, best.value);
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvGolden * (b - a);
            fc = probe(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvGolden * (b - a);
            fd = probe(d);
        }
    }
    return finish();
}

} // namespace

std::string_view kind_name(Kind kind) noexcept
{
    for (const auto& [k, name] : kKindNames)
        if (k == kind)
            return name;
    return "unknown";
}

std::optional<Kind> parse_kind(std::string_view name) noexcept
{
    for (const auto& [k, n] : kKindNames)
        if (n == name)
            return k;
    return std::nullopt;
}

bool kind_optimizes(Kind kind) noexcept
{
    return kind == Kind::upper || kind == Kind::upper_simplified || kind == Kind::memoryless_plus_corr
           || kind == Kind::nonunitary_upper;
}

double d_alpha(double alpha, int antennas)
{
    if (!(alpha > 0.0) || antennas < 1)
        throw DomainError("d_alpha: need alpha > 0 and M >= 1");
    return mathcore::log_gamma(alpha) - mathcore::log_gamma(antennas) - antennas + 1.0;
}

DualityParams DualityParams::make(double alpha, double snr, int antennas)
{
    if (!(snr > 0.0))
        throw DomainError("DualityParams: snr must be positive");
    return {alpha, (snr + antennas) / alpha, bounds::d_alpha(alpha, antennas)};
}

MemoryPhaseTerm::MemoryPhaseTerm(const channel::ChannelParams& params, const McControls& mc, std::uint64_t seed)
    : model_(params, inforate::PhaseQuantizer(mc.q_levels, params.sigma_delta), mc.block_length, mc.n_blocks,
             seed, mc.past_window)
{
}

entropy::McEstimate MemoryPhaseTerm::at(double xi)
{
    return model_.conditional_entropy(xi);
}

std::string MemoryPhaseTerm::describe() const
{
    return "memory-recursion samples=" + std::to_string(model_.samples());
}

SimplifiedPhaseTerm::SimplifiedPhaseTerm(double sigma, std::int64_t n_samples, std::uint64_t seed)
    : table_(sigma), n_samples_(n_samples), seed_(seed)
{
}

entropy::McEstimate SimplifiedPhaseTerm::at(double xi)
{
    return entropy::entropy_delta_plus_phase(xi, table_, n_samples_, seed_);
}

std::string SimplifiedPhaseTerm::describe() const
{
    return "one-step samples=" + std::to_string(n_samples_);
}

std::string ConstantPhaseTerm::describe() const
{
    std::ostringstream os;
    os.precision(17);
    os << "constant " << value_;
    return os.str();
}

GFunction::GFunction(const channel::ChannelParams& params, PhaseTerm& phase)
    : antennas_(params.antennas), snr_(params.snr), phase_(&phase)
{
}

const GTerms& GFunction::terms(double xi)
{
    auto it = cache_.find(xi);
    if (it != cache_.end())
        return it->second;
    GTerms t;
    t.expect_log = entropy::expect_log_noncentral(xi, antennas_);
    t.entropy_abs_sq = entropy::entropy_abs_sq(xi);
    t.phase = phase_->at(xi);
    return cache_.emplace(xi, t).first->second;
}

entropy::McEstimate GFunction::value(double alpha, double xi)
{
    if (!(alpha > 0.0))
        throw DomainError("g_alpha: alpha must be positive");
    if (!(xi >= 0.0) || xi > std::sqrt(snr_) * (1.0 + 1e-12))
        throw DomainError("g_alpha: xi must lie in [0, sqrt(snr)]");
    const GTerms& t = terms(xi);
    const double m = antennas_;
    const double v = (m - alpha) * t.expect_log + alpha * (xi * xi + m) / (snr_ + m) - t.entropy_abs_sq
                     - t.phase.value;
    return {v, t.phase.std_error, t.phase.n_samples, t.phase.seed};
}

entropy::McEstimate g_alpha(double alpha, double xi, const channel::ChannelParams& params, PhaseTerm& phase)
{
    GFunction g(params, phase);
    return g.value(alpha, xi);
}

Optimum minimize_bound(const channel::ChannelParams& params, PhaseTerm& phase, const GridControls& controls)
{
    if (controls.xi_points < 2)
        throw ConfigError("xi grid needs at least 2 points");
    if (!(controls.alpha_min > 0.0) || !(controls.alpha_max_per_antenna * params.antennas > controls.alpha_min))
        throw ConfigError("alpha bracket is empty");
    GFunction g(params, phase);
    const double root = std::sqrt(params.snr);
    std::vector<double> grid(static_cast<std::size_t>(controls.xi_points));
    for (std::size_t i = 0; i < grid.size(); ++i)
        grid[i] = root * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
    grid.back() = root;

    const double m = params.antennas;
    const double log_scale = std::log(params.snr + m);
    Optimum best{std::numeric_limits<double>::infinity(), 0.0, 0.0, 0.0};
    auto objective = [&](double log_alpha) {
        const double alpha = std::exp(log_alpha);
        const InnerMax inner = maximize_over_xi(g, alpha, grid, controls);
        const double value = alpha * (log_scale - log_alpha) + d_alpha(alpha, params.antennas)
                             + mathcore::kLogTwoPi + inner.value;
        if (value < best.value)
            best = {value, inner.std_error, alpha, inner.xi};
        return value;
    };

    double a = std::log(controls.alpha_min);
    double b = std::log(controls.alpha_max_per_antenna * m);
    const double tol = std::log1p(controls.alpha_rel_width);
    double c = b - kInvGolden * (b - a);
    double d = a + kInvGolden * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    for (int it = 0; b - a > tol; ++it) {
        if (it > controls.max_iterations)
            throw OptimizationError("golden-section search over alpha did not converge", best.alpha, best.value);
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvGolden * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvGolden * (b - a);
            fd = objective(d);
        }
    }
    if (!std::isfinite(best.value))
        throw NumericError("bound optimization produced a non-finite value");
    return best;
}

namespace {

BoundRecord record_from(const Optimum& opt, const channel::ChannelParams& params, Kind kind, std::int64_t samples,
                        std::uint64_t seed, std::string meta)
{
    BoundRecord r;
    r.snr_db = linear_to_db(params.snr);
    r.kind = kind;
    r.value_bits = to_bits(opt.value);
    r.std_error_bits = to_bits(opt.std_error);
    r.opt_alpha = opt.alpha;
    r.opt_xi = opt.xi;
    r.n_samples = samples;
    r.seed = seed;
    r.meta = std::move(meta);
    return r;
}

} // namespace

BoundRecord upper_bound_U(const channel::ChannelParams& params, const GridControls& grid, const McControls& mc,
                          std::uint64_t seed)
{
    require_bound_params(params);
    MemoryPhaseTerm term(params, mc, seed);
    const Optimum opt = minimize_bound(params, term, grid);
    return record_from(opt, params, Kind::upper, static_cast<std::int64_t>(mc.block_length) * mc.n_blocks, seed,
                       term.describe());
}

BoundRecord upper_bound_Us(const channel::ChannelParams& params, const GridControls& grid, const McControls& mc,
                           std::uint64_t seed)
{
    require_bound_params(params);
    SimplifiedPhaseTerm term(params.sigma_delta, mc.n_samples, seed);
    const Optimum opt = minimize_bound(params, term, grid);
    return record_from(opt, params, Kind::upper_simplified, mc.n_samples, seed, term.describe());
}

BoundRecord memoryless_plus_correction(const channel::ChannelParams& params, const GridControls& grid)
{
    require_bound_params(params);
    ConstantPhaseTerm term(mathcore::wrapped_gaussian_entropy(params.sigma_delta));
    const Optimum opt = minimize_bound(params, term, grid);
    return record_from(opt, params, Kind::memoryless_plus_corr, 0, 0, term.describe());
}

double asymptotic_capacity_nats(int antennas, double sigma_delta, double snr)
{
    if (antennas < 1 || !(snr > 0.0))
        throw DomainError("asymptotic_capacity: need M >= 1 and snr > 0");
    const double dof = antennas - 0.5;
    return dof * std::log(snr) - std::log(dof) - mathcore::log_gamma(antennas) + 0.5 * std::log(mathcore::kPi)
           - dof - mathcore::wrapped_gaussian_entropy(sigma_delta);
}

BoundRecord asymptotic_capacity(const channel::ChannelParams& params)
{
    BoundRecord r;
    r.snr_db = linear_to_db(params.snr);
    r.kind = Kind::asymptotic;
    r.value_bits = to_bits(asymptotic_capacity_nats(params.antennas, params.sigma_delta, params.snr));
    return r;
}

double avg_peak_gap(int antennas)
{
    if (antennas < 1)
        throw DomainError("avg_peak_gap: M must be at least 1");
    const double half = antennas - 0.5;
    return mathcore::log_gamma(half) - (antennas - 1.5) * std::log(1.0 / half) + half;
}

NonunitaryBounds nonunitary_bounds(const std::function<double(double)>& curve, double lambda_min,
                                   double lambda_max, double snr)
{
    if (!(lambda_min > 0.0))
        throw DomainError("nonunitary_bounds: lambda_min must be positive");
    if (!(lambda_max >= lambda_min))
        throw DomainError("nonunitary_bounds: lambda_max must not be below lambda_min");
    return {curve(lambda_min * snr), curve(lambda_max * snr)};
}

BoundRecord qam_lower(const channel::ChannelParams& params, const channel::Constellation& constellation,
                      const McControls& mc, std::uint64_t seed, channel::Normalization normalization)
{
    const inforate::PhaseQuantizer quantizer(mc.q_levels, params.sigma_delta);
    inforate::QamRateOptions options;
    options.normalization = normalization;
    const auto est = inforate::qam_rate(params, constellation, quantizer, mc.block_length, mc.n_blocks, seed, options);
    BoundRecord r;
    r.snr_db = linear_to_db(params.snr);
    r.kind = Kind::qam_lower;
    r.value_bits = est.rate;
    r.std_error_bits = est.std_error;
    r.n_samples = static_cast<std::int64_t>(mc.block_length) * mc.n_blocks;
    r.seed = seed;
    r.meta = constellation.name() + (est.sampled_mixture ? " sampled-mixture" : "");
    return r;
}

double db_to_linear(double db) noexcept
{
    return std::pow(10.0, db / 10.0);
}

double linear_to_db(double linear) noexcept
{
    return 10.0 * std::log10(linear);
}

} // namespace phasecap::bounds
