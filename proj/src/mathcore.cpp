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

#include "phasecap/mathcore.hpp"

#include "phasecap/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace phasecap::mathcore {

namespace {

constexpr double kInvSqrtTwo = 0.70710678118654752440;
constexpr double kInvSqrtTwoPi = 0.39894228040143267794;

void require_positive_sigma(double sigma, const char* who)
{
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw DomainError(std::string(who) + ": sigma must be positive and finite");
}

// Upper tail of N(0, sigma^2) beyond x >= 0.
double gaussian_tail(double x, double sigma)
{
    return 0.5 * std::erfc(x * kInvSqrtTwo / sigma);
}

} // namespace

double wrap_angle(double x)
{
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0)
        r += kTwoPi;
    if (r >= kTwoPi)
        r = 0.0;
    return r;
}

double wrap_centered(double x)
{
    double r = wrap_angle(x + kPi) - kPi;
    return r;
}

double gaussian_interval_mass(double a, double b, double sigma)
{
    if (b <= a)
        return 0.0;
    if (a >= 0.0)
        return gaussian_tail(a, sigma) - gaussian_tail(b, sigma);
    if (b <= 0.0)
        return gaussian_tail(-b, sigma) - gaussian_tail(-a, sigma);
    return 1.0 - gaussian_tail(-a, sigma) - gaussian_tail(b, sigma);
}

WrappedGaussian::WrappedGaussian(double sigma)
    : sigma_(sigma)
{
    require_positive_sigma(sigma, "WrappedGaussian");
    truncation_order_ = static_cast<int>(std::ceil(8.0 * sigma / kTwoPi)) + 2;
}

double WrappedGaussian::pdf(double delta) const
{
    const double d = wrap_centered(delta);
    const double norm = kInvSqrtTwoPi / sigma_;
    double sum = 0.0;
    for (int l = -truncation_order_; l <= truncation_order_; ++l) {
        const double u = (d - kTwoPi * l) / sigma_;
        sum += std::exp(-0.5 * u * u);
    }
    return norm * sum;
}

double WrappedGaussian::arc_mass(double lo, double hi) const
{
    const double width = hi - lo;
    if (width <= 0.0)
        return 0.0;
    if (width >= kTwoPi)
        return 1.0;
    const double a = wrap_centered(lo);
    const double b = a + width;
    double sum = 0.0;
    for (int l = -truncation_order_ - 1; l <= truncation_order_ + 1; ++l)
        sum += gaussian_interval_mass(a - kTwoPi * l, b - kTwoPi * l, sigma_);
    return sum;
}

double WrappedGaussian::entropy() const
{
    // Below 0.01 rad the aliased terms are smaller than exp(-1e5) and the
    // density is an ordinary Gaussian on the circle.
    if (sigma_ < 1e-2)
        return 0.5 * std::log(kTwoPi * std::numbers::e * sigma_ * sigma_);
    const Quadrature quad{1e-12, 1 << 12};
    return quad.integrate_periodic([this](double x) {
        const double p = pdf(x);
        return p > 0.0 ? -p * std::log(p) : 0.0;
    });
}

double wrapped_gaussian_pdf(double delta, double sigma)
{
    return WrappedGaussian(sigma).pdf(delta);
}

double wrapped_gaussian_entropy(double sigma)
{
    return WrappedGaussian(sigma).entropy();
}

double log_bessel_i(int order, double x)
{
    if (order < 0)
        throw DomainError("log_bessel_i: order must be nonnegative");
    if (!(x >= 0.0))
        throw DomainError("log_bessel_i: argument must be nonnegative");
    if (x == 0.0)
        return order == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    if (std::isinf(x))
        return x;

    const double n = order;
    const double threshold = std::max(30.0, 2.0 * n * n + 20.0);
    if (x <= threshold) {
        // Power series; all terms positive.
        const double half_sq = 0.25 * x * x;
        double base = n * std::log(0.5 * x) - std::lgamma(n + 1.0);
        double acc = 1.0;
        double cur = 1.0;
        for (int m = 0; m < 100000; ++m) {
            const double q = half_sq / ((m + 1.0) * (m + 1.0 + n));
            cur *= q;
            acc += cur;
            if (acc > 1e280) {
                base += std::log(acc);
                cur /= acc;
                acc = 1.0;
            }
            if (q < 1.0 && cur < 1e-17 * acc)
                break;
        }
        return base + std::log(acc);
    }

    // Large-argument expansion I_n(x) ~ e^x / sqrt(2 pi x) sum (-1)^k a_k.
    const double mu = 4.0 * n * n;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = -term * (mu - odd * odd) / (8.0 * k * x);
        if (std::abs(next) > std::abs(term))
            break;
        term = next;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum))
            break;
    }
    return x - 0.5 * std::log(kTwoPi * x) + std::log(sum);
}

double log_bessel_i0(double kappa)
{
    if (!(kappa >= 0.0))
        throw DomainError("log_bessel_i0: kappa must be nonnegative");
    return log_bessel_i(0, kappa);
}

void bessel_i_ratios(double kappa, std::span<double> out)
{
    if (!(kappa >= 0.0))
        throw DomainError("bessel_i_ratios: kappa must be nonnegative");
    if (out.empty())
        return;
    if (kappa == 0.0) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    // Backward recurrence for r_n = I_n / I_{n-1}; the start index is far
    // enough past both N and sqrt(kappa) for the truncation error to vanish.
    const std::size_t big_n = out.size();
    const std::size_t start = big_n + 30 + static_cast<std::size_t>(std::ceil(8.0 * std::sqrt(kappa)));
    double r = 0.0;
    for (std::size_t n = start; n > big_n; --n)
        r = 1.0 / (2.0 * static_cast<double>(n) / kappa + r);
    // r now holds r_{N+1}; fill r_N .. r_1.
    for (std::size_t n = big_n; n >= 1; --n) {
        r = 1.0 / (2.0 * static_cast<double>(n) / kappa + r);
        out[n - 1] = r;
    }
    double prod = 1.0;
    for (std::size_t n = 0; n < big_n; ++n) {
        prod *= out[n];
        out[n] = prod;
    }
}

double log_gamma(double x)
{
    if (!(x > 0.0))
        throw DomainError("log_gamma: argument must be positive");
    return boost::math::lgamma(x);
}

double digamma(double x)
{
    if (!(x > 0.0))
        throw DomainError("digamma: argument must be positive");
    return boost::math::digamma(x);
}

double upper_incomplete_gamma(double a, double x)
{
    if (!(a > 0.0))
        throw DomainError("upper_incomplete_gamma: shape must be positive");
    if (!(x >= 0.0))
        throw DomainError("upper_incomplete_gamma: argument must be nonnegative");
    return boost::math::tgamma(a, x);
}

double erfcx(double x)
{
    if (x < 0.0)
        return 2.0 * std::exp(x * x) - erfcx(-x);
    if (x < 25.0)
        return std::exp(x * x) * std::erfc(x);
    // Asymptotic series 1/(x sqrt(pi)) sum (-1)^k (2k-1)!! / (2x^2)^k.
    const double inv = 1.0 / (2.0 * x * x);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 30; ++k) {
        term *= -(2.0 * k - 1.0) * inv;
        sum += term;
        if (std::abs(term) < 1e-17)
            break;
    }
    return sum / (x * std::sqrt(kPi));
}

double rician_phase_pdf(double phi, double a)
{
    if (!(a >= 0.0) || std::isinf(a))
        throw DomainError("rician_phase_pdf: snr must be finite and nonnegative");
    constexpr double inv_two_pi = 1.0 / kTwoPi;
    if (a == 0.0)
        return inv_two_pi;
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const double root_a = std::sqrt(a);
    const double scale = inv_two_pi * std::sqrt(kPi * a) * c;
    // e^{-a} e^{a c^2} (1 + erf(sqrt(a) c)) rewritten to avoid overflow.
    double second;
    if (c >= 0.0)
        second = scale * std::exp(-a * s * s) * (2.0 - std::erfc(root_a * c));
    else
        second = scale * std::exp(-a) * erfcx(-root_a * c);
    return inv_two_pi * std::exp(-a) + second;
}

double Quadrature::integrate(const std::function<double(double)>& f, double a, double b) const
{
    const unsigned depth = static_cast<unsigned>(std::max(1.0, std::ceil(std::log2(std::max(2, max_panels)))));
    double error = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, depth, rel_tol, &error);
    if (!std::isfinite(value))
        throw NumericError("quadrature produced a non-finite value");
    return value;
}

double Quadrature::integrate_periodic(const std::function<double(double)>& f) const
{
    std::size_t n = 2048;
    const std::size_t max_nodes = std::size_t{2048} << 10;
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        sum += f(kTwoPi * static_cast<double>(k) / static_cast<double>(n));
    double estimate = sum * kTwoPi / static_cast<double>(n);
    while (n < max_nodes) {
        // Doubling only adds the midpoints.
        const std::size_t m = 2 * n;
        for (std::size_t k = 1; k < m; k += 2)
            sum += f(kTwoPi * static_cast<double>(k) / static_cast<double>(m));
        n = m;
        const double next = sum * kTwoPi / static_cast<double>(n);
        const bool converged = std::abs(next - estimate) <= rel_tol * std::max(std::abs(next), 1e-300);
        estimate = next;
        if (converged)
            break;
    }
    if (!std::isfinite(estimate))
        throw NumericError("periodic quadrature produced a non-finite value");
    return estimate;
}

} // namespace phasecap::mathcore
