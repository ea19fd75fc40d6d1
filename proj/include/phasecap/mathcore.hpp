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

#ifndef PHASECAP_MATHCORE_HPP
#define PHASECAP_MATHCORE_HPP

#include <functional>
#include <numbers>
#include <span>

namespace phasecap::mathcore {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kLogTwoPi = 1.8378770664093454836;
inline constexpr double kEulerGamma = std::numbers::egamma;

/// Reduce an angle to [0, 2pi).
double wrap_angle(double x);

/// Reduce an angle to [-pi, pi).
double wrap_centered(double x);

/// Gaussian of standard deviation `sigma` folded onto the circle.
///
/// The lattice sum keeps terms |l| <= truncation_order with
/// truncation_order = ceil(8 sigma / 2pi) + 2, which leaves the first omitted
/// term below 1e-16 of the peak.
class WrappedGaussian {
public:
    explicit WrappedGaussian(double sigma);

    double sigma() const noexcept { return sigma_; }
    int truncation_order() const noexcept { return truncation_order_; }

    double pdf(double delta) const;

    /// Probability mass of the arc [lo, hi] (hi - lo <= 2pi).
    double arc_mass(double lo, double hi) const;

    /// Differential entropy in nats.
    double entropy() const;

private:
    double sigma_;
    int truncation_order_;
};

double wrapped_gaussian_pdf(double delta, double sigma);
double wrapped_gaussian_entropy(double sigma);

/// Mass of N(0, sigma^2) on [a, b], accurate in both tails.
double gaussian_interval_mass(double a, double b, double sigma);

double log_bessel_i0(double kappa);

/// log I_order(x) for integer order >= 0 and x >= 0.
double log_bessel_i(int order, double x);

/// Fills out[n-1] = I_n(kappa) / I_0(kappa) for n = 1..out.size().
void bessel_i_ratios(double kappa, std::span<double> out);

double log_gamma(double x);
double digamma(double x);
/// Non-regularized upper incomplete gamma function Gamma(a, x).
double upper_incomplete_gamma(double a, double x);

/// Scaled complementary error function exp(x^2) erfc(x).
double erfcx(double x);

/// Density of the phase of 1 + z / sqrt(a), z ~ CN(0, 1), at phi.
double rician_phase_pdf(double phi, double a);

/// Adaptive integration settings shared by the quadrature-based estimators.
struct Quadrature {
    double rel_tol = 1e-9;
    int max_panels = 1 << 12;

    /// Gauss-Kronrod on a finite or semi-infinite interval (pass +inf as b).
    double integrate(const std::function<double(double)>& f, double a, double b) const;

    /// Integral of a 2pi-periodic function over one period. Starts from a
    /// 2048-node trapezoid rule and doubles until two successive values agree
    /// to rel_tol.
    double integrate_periodic(const std::function<double(double)>& f) const;
};

} // namespace phasecap::mathcore

#endif
