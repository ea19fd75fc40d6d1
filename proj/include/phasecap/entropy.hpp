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

#ifndef PHASECAP_ENTROPY_HPP
#define PHASECAP_ENTROPY_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace phasecap::entropy {

/// Monte-Carlo estimate with its standard error (sample std / sqrt(n)).
struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t n_samples = 0;
    std::uint64_t seed = 0;
};

inline constexpr std::int64_t kDefaultSamples = 100000;

/// log-density of T = |xi + z_1|^2 + sum_{j=2}^M |z_j|^2 with z_j iid CN(0,1).
double abs_sq_log_pdf(double t, double xi, int antennas);

/// E[g(T)] for T distributed as in abs_sq_log_pdf, by adaptive quadrature in
/// log t. `g` receives (t, log p(t)).
double expect_abs_sq(double xi, int antennas, const std::function<double(double, double)>& g);

/// E[log(|xi + z_1|^2 + sum_{j>=2} |z_j|^2)] in nats.
double expect_log_noncentral(double xi, int antennas);

/// Differential entropy of |xi + z|^2 in nats.
double entropy_abs_sq(double xi);

/// Fourier coefficients b_n = exp(-n^2 sigma^2 / 2) I_n(kappa) / I_0(kappa),
/// n = 1..N, of the circular law of Delta + phi where Delta is wrapped
/// Gaussian(sigma) and phi is von Mises(kappa). Trailing negligible terms are
/// dropped.
std::vector<double> phase_sum_coefficients(double sigma, double kappa);

/// Evaluate (1/2pi)(1 + 2 sum b_n cos(n x)).
double phase_sum_density(const std::vector<double>& coefficients, double x);

/// Entropy (nats) of Delta + phi given the von Mises concentration, by FFT
/// synthesis of the density and periodic quadrature.
double phase_sum_entropy(double sigma, double kappa);

/// phase_sum_entropy tabulated on a log-kappa grid and interpolated with a
/// cubic B-spline. Arguments outside the table fall back to direct evaluation.
class PhaseSumEntropy {
public:
    explicit PhaseSumEntropy(double sigma);

    double sigma() const noexcept { return sigma_; }
    double operator()(double kappa) const;

private:
    struct Spline;
    double sigma_;
    double log_kappa_min_;
    double log_kappa_max_;
    std::shared_ptr<const Spline> spline_;
};

/// h(Delta + phi_0(xi^2) | |xi + z_0|) in nats: Monte Carlo over the received
/// amplitude r, phase-sum entropy at concentration 2 r xi for each draw.
McEstimate entropy_delta_plus_phase(double xi, double sigma, std::int64_t n_samples, std::uint64_t seed);
McEstimate entropy_delta_plus_phase(double xi, const PhaseSumEntropy& table, std::int64_t n_samples,
                                    std::uint64_t seed);

} // namespace phasecap::entropy

#endif
