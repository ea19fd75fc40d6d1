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

#include "phasecap/entropy.hpp"

#include "cosine_synthesis.hpp"
#include "phasecap/error.hpp"
#include "phasecap/mathcore.hpp"
#include "phasecap/rng.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace phasecap::entropy {

using mathcore::kTwoPi;

namespace {

void require_xi(double xi, const char* who)
{
    if (!(xi >= 0.0) || !std::isfinite(xi))
        throw DomainError(std::string(who) + ": amplitude must be finite and nonnegative");
}

void require_antennas(int antennas, const char* who)
{
    if (antennas < 1)
        throw DomainError(std::string(who) + ": antenna count must be at least 1");
}

// Largest order worth keeping in a phase-sum cosine series.
constexpr std::size_t kMaxOrder = std::size_t{1} << 15;
// exp(-41.5) ~ 1e-18 relative to the constant term.
constexpr double kNegligibleExponent = 41.5;

} // namespace

double abs_sq_log_pdf(double t, double xi, int antennas)
{
    require_xi(xi, "abs_sq_log_pdf");
    require_antennas(antennas, "abs_sq_log_pdf");
    if (t < 0.0)
        return -std::numeric_limits<double>::infinity();
    const double m1 = antennas - 1.0;
    if (xi == 0.0) {
        if (t == 0.0)
            return antennas == 1 ? 0.0 : -std::numeric_limits<double>::infinity();
        return m1 * std::log(t) - t - std::lgamma(static_cast<double>(antennas));
    }
    if (t == 0.0)
        return antennas == 1 ? -xi * xi : -std::numeric_limits<double>::infinity();
    return -(t + xi * xi) + 0.5 * m1 * (std::log(t) - 2.0 * std::log(xi))
           + mathcore::log_bessel_i(antennas - 1, 2.0 * xi * std::sqrt(t));
}

double expect_abs_sq(double xi, int antennas, const std::function<double(double, double)>& g)
{
    require_xi(xi, "expect_abs_sq");
    require_antennas(antennas, "expect_abs_sq");
    const double mean = xi * xi + antennas;
    const double sd = std::sqrt(2.0 * xi * xi + antennas);

    // Integrate over s = log t; breakpoints follow the mean and spread of T.
    const double lower_t = mean - 12.0 * sd;
    const double s_lo = lower_t > 0.0 ? std::log(lower_t) : std::log(mean) - 60.0 / antennas;
    const double s_hi = std::log(mean + 40.0 * sd + 60.0);
    std::vector<double> breaks{s_lo, s_hi};
    for (double k : {-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0, 16.0}) {
        const double t = mean + k * sd;
        if (t > 0.0) {
            const double s = std::log(t);
            if (s > s_lo && s < s_hi)
                breaks.push_back(s);
        }
    }
    std::sort(breaks.begin(), breaks.end());

    const auto integrand = [&](double s) {
        const double t = std::exp(s);
        const double lp = abs_sq_log_pdf(t, xi, antennas);
        if (!std::isfinite(lp))
            return 0.0;
        const double w = std::exp(lp + s);
        return w == 0.0 ? 0.0 : g(t, lp) * w;
    };
    const mathcore::Quadrature quad{1e-12, 1 << 10};
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        total += quad.integrate(integrand, breaks[i], breaks[i + 1]);
    return total;
}

double expect_log_noncentral(double xi, int antennas)
{
    return expect_abs_sq(xi, antennas, [](double t, double) { return std::log(t); });
}

double entropy_abs_sq(double xi)
{
    return expect_abs_sq(xi, 1, [](double, double log_p) { return -log_p; });
}

std::vector<double> phase_sum_coefficients(double sigma, double kappa)
{
    if (!(sigma > 0.0))
        throw DomainError("phase_sum_coefficients: sigma must be positive");
    if (!(kappa >= 0.0) || !std::isfinite(kappa))
        throw DomainError("phase_sum_coefficients: kappa must be finite and nonnegative");
    if (kappa == 0.0)
        return {};
    const double by_sigma = std::ceil(std::sqrt(2.0 * kNegligibleExponent) / sigma);
    const double by_kappa = std::ceil(std::sqrt(2.0 * kNegligibleExponent * (kappa + 1.0))) + 45.0;
    const double order = std::min(by_sigma, by_kappa);
    if (order > static_cast<double>(kMaxOrder))
        throw DomainError("phase_sum_coefficients: sigma too small for the requested concentration");
    std::vector<double> b(static_cast<std::size_t>(order));
    mathcore::bessel_i_ratios(kappa, b);
    const double half_var = 0.5 * sigma * sigma;
    for (std::size_t n = 0; n < b.size(); ++n) {
        const double k = static_cast<double>(n + 1);
        b[n] *= std::exp(-half_var * k * k);
    }
    while (!b.empty() && b.back() < 1e-18)
        b.pop_back();
    return b;
}

double phase_sum_density(const std::vector<double>& coefficients, double x)
{
    // Clenshaw recurrence for sum_{n=1}^N b_n cos(n x).
    const double c = std::cos(x);
    double bk1 = 0.0;
    double bk2 = 0.0;
    for (std::size_t n = coefficients.size(); n >= 1; --n) {
        const double bk = coefficients[n - 1] + 2.0 * c * bk1 - bk2;
        bk2 = bk1;
        bk1 = bk;
    }
    const double series = bk1 * c - bk2;
    return (1.0 + 2.0 * series) / kTwoPi;
}

double phase_sum_entropy(double sigma, double kappa)
{
    const auto b = phase_sum_coefficients(sigma, kappa);
    if (b.empty())
        return mathcore::kLogTwoPi;
    std::size_t n_points = 256;
    while (n_points < 4 * (b.size() + 1))
        n_points *= 2;
    const auto samples = detail::synthesize_cosine_series(b, n_points);
    double sum = 0.0;
    for (double s : samples) {
        const double p = s / kTwoPi;
        if (p > 0.0)
            sum -= p * std::log(p);
    }
    return sum * kTwoPi / static_cast<double>(n_points);
}

struct PhaseSumEntropy::Spline {
    boost::math::interpolators::cardinal_cubic_b_spline<double> spline;
};

namespace {
constexpr double kTableLogKappaMin = -9.210340371976184; // log 1e-4
constexpr double kTableLogKappaMax = 16.11809565095832;  // log 1e7
constexpr double kTableStep = 0.02;
} // namespace

PhaseSumEntropy::PhaseSumEntropy(double sigma)
    : sigma_(sigma), log_kappa_min_(kTableLogKappaMin), log_kappa_max_(kTableLogKappaMax)
{
    if (!(sigma > 0.0))
        throw DomainError("PhaseSumEntropy: sigma must be positive");
    const auto n = static_cast<std::size_t>(std::ceil((log_kappa_max_ - log_kappa_min_) / kTableStep)) + 1;
    log_kappa_max_ = log_kappa_min_ + kTableStep * static_cast<double>(n - 1);
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i)
        values[i] = phase_sum_entropy(sigma, std::exp(log_kappa_min_ + kTableStep * static_cast<double>(i)));
    spline_ = std::make_shared<const Spline>(
        Spline{boost::math::interpolators::cardinal_cubic_b_spline<double>(values.begin(), values.end(),
                                                                            log_kappa_min_, kTableStep)});
}

double PhaseSumEntropy::operator()(double kappa) const
{
    if (!(kappa >= 0.0))
        throw DomainError("PhaseSumEntropy: kappa must be nonnegative");
    if (kappa == 0.0)
        return mathcore::kLogTwoPi;
    const double s = std::log(kappa);
    if (s < log_kappa_min_ || s > log_kappa_max_)
        return phase_sum_entropy(sigma_, kappa);
    return spline_->spline(s);
}

McEstimate entropy_delta_plus_phase(double xi, const PhaseSumEntropy& table, std::int64_t n_samples,
                                    std::uint64_t seed)
{
    require_xi(xi, "entropy_delta_plus_phase");
    if (n_samples < 100)
        throw ConfigError("entropy_delta_plus_phase: n_samples must be at least 100");
    Rng rng(seed);
    double mean = 0.0;
    double m2 = 0.0;
    for (std::int64_t i = 0; i < n_samples; ++i) {
        const double r = std::abs(xi + complex_normal(rng));
        const double h = table(2.0 * r * xi);
        const double delta = h - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (h - mean);
    }
    const double var = n_samples > 1 ? m2 / static_cast<double>(n_samples - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(n_samples)), n_samples, seed};
}

McEstimate entropy_delta_plus_phase(double xi, double sigma, std::int64_t n_samples, std::uint64_t seed)
{
    return entropy_delta_plus_phase(xi, PhaseSumEntropy(sigma), n_samples, seed);
}

} // namespace phasecap::entropy
