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

#include "phasecap/error.hpp"
#include "phasecap/mathcore.hpp"
#include "phasecap/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

using namespace phasecap;
using namespace phasecap::mathcore;

namespace {

// Independent oracles.

double trapezoid_periodic(auto f, int n)
{
    double s = 0.0;
    for (int k = 0; k < n; ++k)
        s += f(kTwoPi * k / n);
    return s * kTwoPi / n;
}

double wrapped_series(double delta, double sigma, int terms)
{
    long double s = 0.0L;
    for (int l = -terms; l <= terms; ++l) {
        const long double d = delta - kTwoPi * l;
        s += std::exp(-d * d / (2.0L * sigma * sigma));
    }
    return static_cast<double>(s / std::sqrt(2.0L * kPi * sigma * sigma));
}

double log_bessel_series(int n, double x)
{
    // I_n(x) = sum_m (x/2)^{2m+n} / (m! (m+n)!), summed in long double.
    long double term = std::pow(0.5L * x, n) / std::tgamma(static_cast<long double>(n) + 1.0L);
    long double sum = term;
    for (int m = 1; m < 400; ++m) {
        term *= 0.25L * x * x / (static_cast<long double>(m) * (m + n));
        sum += term;
        if (term < 1e-22L * sum)
            break;
    }
    return static_cast<double>(std::log(sum));
}

} // namespace

TEST_CASE("wrapped gaussian pdf: uniform limit and normalization")
{
    for (double d : {0.0, 1.0, 3.0, 6.0})
        CHECK(wrapped_gaussian_pdf(d, 10.0) == doctest::Approx(1.0 / kTwoPi).epsilon(1e-6));
    for (double sigma : {0.05, 6.0 * kPi / 180.0, 0.5, 2.0, 10.0}) {
        const double total = trapezoid_periodic([&](double x) { return wrapped_gaussian_pdf(x, sigma); }, 8192);
        CHECK(std::abs(total - 1.0) < 1e-10);
    }
}

TEST_CASE("wrapped gaussian pdf matches the long lattice sum")
{
    const double sigma = 6.0 * kPi / 180.0;
    const double oracle = wrapped_series(0.0, sigma, 5000);
    CHECK(wrapped_gaussian_pdf(0.0, sigma) == doctest::Approx(oracle).epsilon(1e-13));
    CHECK(oracle == doctest::Approx(3.8096).epsilon(1e-4));
    for (double sigma2 : {0.3, 1.7, 4.0})
        for (double d : {0.1, 2.0, 5.5})
            CHECK(wrapped_gaussian_pdf(d, sigma2) == doctest::Approx(wrapped_series(d, sigma2, 5000)).epsilon(1e-13));
}

TEST_CASE("wrapped gaussian pdf is periodic and symmetric")
{
    const double sigma = 0.8;
    for (double d : {0.2, 1.3, 2.9}) {
        CHECK(wrapped_gaussian_pdf(d, sigma) == doctest::Approx(wrapped_gaussian_pdf(kTwoPi - d, sigma)).epsilon(1e-13));
        CHECK(wrapped_gaussian_pdf(d + kTwoPi, sigma) == doctest::Approx(wrapped_gaussian_pdf(d, sigma)).epsilon(1e-12));
    }
    CHECK(WrappedGaussian(0.1).truncation_order() == 3);
    CHECK(WrappedGaussian(10.0).truncation_order() == 15);
}

TEST_CASE("wrapped gaussian arc mass")
{
    WrappedGaussian wg(0.7);
    CHECK(wg.arc_mass(0.0, kTwoPi) == doctest::Approx(1.0).epsilon(1e-12));
    const double direct = trapezoid_periodic([&](double x) { return x < 0.5 ? wg.pdf(x) : 0.0; }, 1 << 20);
    CHECK(wg.arc_mass(0.0, 0.5) == doctest::Approx(direct).epsilon(1e-5));
}

TEST_CASE("wrapped gaussian entropy")
{
    CHECK(wrapped_gaussian_entropy(10.0) == doctest::Approx(kLogTwoPi).epsilon(1e-6));
    const double sigma = 6.0 * kPi / 180.0;
    const double gauss = 0.5 * std::log(2.0 * kPi * std::exp(1.0) * sigma * sigma);
    CHECK(std::abs(wrapped_gaussian_entropy(sigma) - gauss) < 1e-3);
    CHECK(wrapped_gaussian_entropy(3.0 * kPi / 180.0) < wrapped_gaussian_entropy(sigma));
    double prev = -1e300;
    for (double s : {0.02, 0.1, 0.5, 2.0, 4.0}) {
        const double h = wrapped_gaussian_entropy(s);
        CHECK(h > prev);
        CHECK(h <= kLogTwoPi + 1e-12);
        prev = h;
        const double oracle = -trapezoid_periodic(
            [&](double x) {
                const double p = wrapped_series(x, s, 8);
                return p > 0.0 ? p * std::log(p) : 0.0;
            },
            1 << 14);
        CHECK(h == doctest::Approx(oracle).epsilon(1e-8));
    }
    CHECK_THROWS_AS(wrapped_gaussian_entropy(0.0), DomainError);
    CHECK_THROWS_AS(wrapped_gaussian_pdf(0.1, -1.0), DomainError);
}

TEST_CASE("log bessel i0")
{
    CHECK(log_bessel_i0(0.0) == 0.0);
    CHECK(log_bessel_i0(5.0) == doctest::Approx(log_bessel_series(0, 5.0)).epsilon(1e-12));
    CHECK(std::abs(log_bessel_i0(5.0) - std::log(27.239871823604442)) < 1e-9);
    const double k = 1000.0;
    CHECK(log_bessel_i0(k) == doctest::Approx(k - 0.5 * std::log(kTwoPi * k)).epsilon(1e-4));
    const double refined = k - 0.5 * std::log(kTwoPi * k) + std::log1p(1.0 / (8 * k) + 9.0 / (128 * k * k));
    CHECK(log_bessel_i0(k) == doctest::Approx(refined).epsilon(1e-12));
    CHECK(std::isfinite(log_bessel_i0(1e6)));
    CHECK_THROWS_AS(log_bessel_i0(-1.0), DomainError);
}

TEST_CASE("log bessel i_n at pseudo-random arguments")
{
    Rng rng(12345);
    std::uniform_real_distribution<double> ux(0.01, 60.0);
    std::uniform_int_distribution<int> un(0, 12);
    for (int i = 0; i < 20; ++i) {
        const int n = un(rng);
        const double x = ux(rng);
        CHECK(log_bessel_i(n, x) == doctest::Approx(log_bessel_series(n, x)).epsilon(1e-11));
    }
}

TEST_CASE("bessel ratios")
{
    for (double kappa : {0.0, 0.3, 7.0, 150.0, 4000.0}) {
        std::vector<double> r(20);
        bessel_i_ratios(kappa, r);
        for (int n = 1; n <= 20; ++n) {
            const double expected = kappa == 0.0 ? 0.0 : std::exp(log_bessel_i(n, kappa) - log_bessel_i0(kappa));
            CHECK(r[n - 1] == doctest::Approx(expected).epsilon(1e-10));
        }
    }
}

TEST_CASE("gamma family")
{
    CHECK(log_gamma(1.0) == 0.0);
    CHECK(log_gamma(4.0) == doctest::Approx(std::log(6.0)).epsilon(1e-15));
    CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(kPi)).epsilon(1e-14));
    CHECK(digamma(1.0) == doctest::Approx(-kEulerGamma).epsilon(1e-14));
    CHECK(digamma(2.0) == doctest::Approx(1.0 - kEulerGamma).epsilon(1e-14));
    CHECK(upper_incomplete_gamma(2.0, 0.0) == doctest::Approx(1.0));
    for (double x : {0.1, 1.0, 5.0})
        CHECK(upper_incomplete_gamma(2.0, x) == doctest::Approx((1.0 + x) * std::exp(-x)).epsilon(1e-13));
    CHECK_THROWS_AS(log_gamma(0.0), DomainError);
    CHECK_THROWS_AS(digamma(-1.0), DomainError);
    CHECK_THROWS_AS(upper_incomplete_gamma(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(upper_incomplete_gamma(1.0, -1.0), DomainError);
}

TEST_CASE("erfcx and interval mass")
{
    for (double x : {-3.0, -0.5, 0.0, 0.7, 4.0, 20.0})
        CHECK(erfcx(x) == doctest::Approx(std::exp(x * x) * std::erfc(x)).epsilon(1e-12));
    CHECK(erfcx(1e4) == doctest::Approx(1.0 / (std::sqrt(kPi) * 1e4)).epsilon(1e-8));
    const double s = 0.3;
    CHECK(gaussian_interval_mass(-0.2, 0.4, s)
          == doctest::Approx(0.5 * (std::erf(0.4 / (s * std::sqrt(2.0))) + std::erf(0.2 / (s * std::sqrt(2.0)))))
                 .epsilon(1e-13));
    // Far tail keeps relative accuracy.
    const double tail = gaussian_interval_mass(10.0, 11.0, 1.0);
    CHECK(tail == doctest::Approx(0.5 * (std::erfc(10.0 / std::sqrt(2.0)) - std::erfc(11.0 / std::sqrt(2.0)))).epsilon(1e-10));
}

TEST_CASE("rician phase pdf")
{
    for (double phi : {-3.0, 0.0, 1.0})
        CHECK(rician_phase_pdf(phi, 0.0) == doctest::Approx(1.0 / kTwoPi).epsilon(1e-14));
    for (double a : {0.1, 1.0, 10.0, 1000.0, 1e5}) {
        const double total = trapezoid_periodic([&](double x) { return rician_phase_pdf(wrap_centered(x), a); }, 1 << 16);
        CHECK(std::abs(total - 1.0) < 1e-9);
    }
    // Closed form as printed, where it does not overflow.
    const double a = 2.0;
    for (double phi : {-2.0, 0.3, 1.2}) {
        const double c = std::cos(phi);
        const double printed = std::exp(-a) / kTwoPi
                               * (1.0 + std::sqrt(kPi * a) * c * std::exp(a * c * c) * (1.0 + std::erf(std::sqrt(a) * c)));
        CHECK(rician_phase_pdf(phi, a) == doctest::Approx(printed).epsilon(1e-12));
    }
}

TEST_CASE("rician phase pdf matches a sampling histogram")
{
    const double a = 10.0;
    const double half = 0.05;
    Rng rng(99);
    const int n = 1'000'000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        const auto z = complex_normal(rng);
        if (std::abs(std::arg(1.0 + z / std::sqrt(a))) < half)
            ++hits;
    }
    const double p_hat = static_cast<double>(hits) / n;
    const double se = std::sqrt(p_hat * (1 - p_hat) / n);
    Quadrature q;
    const double p = q.integrate([&](double x) { return rician_phase_pdf(x, a); }, -half, half);
    CHECK(std::abs(p - p_hat) < 3.0 * se);
}

TEST_CASE("rician phase pdf concentrates at high snr")
{
    const double a = 1e4;
    const double h = -trapezoid_periodic(
        [&](double x) {
            const double p = rician_phase_pdf(wrap_centered(x), a);
            return p > 0.0 ? p * std::log(p) : 0.0;
        },
        1 << 18);
    const double gauss = 0.5 * std::log(kTwoPi * std::exp(1.0) / (2.0 * a));
    CHECK(std::abs(h - gauss) < 0.01 * std::abs(gauss));
}

TEST_CASE("quadrature")
{
    Quadrature q;
    CHECK(q.integrate([](double x) { return std::exp(x); }, 0.0, 1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
    CHECK(q.integrate([](double x) { return std::exp(-x); }, 0.0, std::numeric_limits<double>::infinity())
          == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(q.integrate_periodic([](double x) { return std::cos(x) * std::cos(x); }) == doctest::Approx(kPi).epsilon(1e-13));
    const double a = q.integrate([](double x) { return std::sin(3 * x) * x; }, 0.0, 2.0);
    CHECK(a == q.integrate([](double x) { return std::sin(3 * x) * x; }, 0.0, 2.0));
    CHECK_THROWS_AS(q.integrate([](double) { return std::nan(""); }, 0.0, 1.0), NumericError);
}

TEST_CASE("angle wrapping")
{
    CHECK(wrap_angle(-0.5) == doctest::Approx(kTwoPi - 0.5));
    CHECK(wrap_angle(7.0) == doctest::Approx(7.0 - kTwoPi));
    CHECK(wrap_centered(4.0) == doctest::Approx(4.0 - kTwoPi));
    CHECK(wrap_centered(-4.0) == doctest::Approx(kTwoPi - 4.0));
    const double w = wrap_angle(kTwoPi);
    CHECK(w >= 0.0);
    CHECK(w < kTwoPi);
}
