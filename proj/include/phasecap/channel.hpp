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

#ifndef PHASECAP_CHANNEL_HPP
#define PHASECAP_CHANNEL_HPP

#include "phasecap/rng.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace phasecap::channel {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

/// Speed of light used to convert carrier frequency to wavelength.
inline constexpr double kSpeedOfLight = 2.99792458e8;

/// Dense row-major complex matrix; only what the channel model needs.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols);
    static CMatrix identity(std::size_t n);
    static CMatrix diagonal(std::span<const cplx> entries);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    CVector apply(std::span<const cplx> x) const;
    bool is_diagonal() const noexcept;
    bool operator==(const CMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

/// Extreme eigenvalues of H^H H (squared extreme singular values of H).
struct EigenBounds {
    double lambda_min;
    double lambda_max;
};

/// Throws RankError when the smallest singular value is below 1e-12 of the
/// largest. Closed form for M <= 2, cyclic Jacobi otherwise.
EigenBounds singular_value_bounds(const CMatrix& h);

/// Parameters of y_k = e^{j theta_k} H x_k + w_k under ||x_k||^2 <= snr.
struct ChannelParams {
    int antennas = 1;
    double sigma_delta = 0.0;         ///< std of the phase increment, radians
    double snr = 1.0;                 ///< peak power rho, linear
    std::optional<CMatrix> h_matrix;  ///< empty means unitary (H = I)

    bool unitary() const noexcept { return !h_matrix.has_value(); }
    CMatrix effective_h() const;
    void validate() const;
};

struct PhaseTrajectory {
    std::vector<double> theta;
};

struct SimulationOptions {
    bool random_initial_phase = true;  ///< stationary start, theta_0 ~ U[0, 2pi)
    double initial_phase = 0.0;        ///< used when random_initial_phase is false
    bool add_noise = true;
};

/// Wiener phase process of length n, values in [0, 2pi).
PhaseTrajectory wiener_trajectory(double sigma_delta, std::size_t n, Rng& rng, const SimulationOptions& options = {});

struct SimulationResult {
    std::vector<CVector> outputs;
    PhaseTrajectory trajectory;
};

/// Runs the channel over `inputs`. Each input must satisfy the peak
/// constraint; violations raise ConstraintError naming the index.
SimulationResult simulate(const ChannelParams& params, std::span<const CVector> inputs, std::uint64_t seed,
                          const SimulationOptions& options = {});

enum class Normalization { peak, average };

/// Finite symbol alphabet used independently on each antenna.
class Constellation {
public:
    Constellation(std::string name, std::vector<cplx> points);

    /// Square QAM with `order` a perfect square (4, 16, 64, 256, ...).
    static Constellation qam(int order);
    static Constellation psk(int order);
    /// Parses "QAM-64", "PSK-8", ...
    static Constellation from_name(const std::string& name);

    const std::string& name() const noexcept { return name_; }
    const std::vector<cplx>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    double max_abs() const noexcept;
    double mean_power() const noexcept;

    /// Per-antenna scale factor. Peak: sqrt(snr / M) / max|s|, so the largest
    /// symbol vector has ||x||^2 = snr. Average: E||x||^2 = snr.
    double scale(double snr, int antennas, Normalization mode = Normalization::peak) const;
    std::vector<cplx> scaled(double snr, int antennas, Normalization mode = Normalization::peak) const;

private:
    std::string name_;
    std::vector<cplx> points_;
};

double wavelength_from_frequency(double frequency_hz);

/// Antenna spacing sqrt(lambda R / M) that makes a LoS MIMO channel unitary.
double los_antenna_spacing(double wavelength_m, double range_m, int antennas);

/// Draw from the truncated isotropic input law: x = sqrt(snr) z with radial
/// density proportional to r^{2M-2} on [sqrt(snr0 / snr), 1].
CVector sample_lb_input(int antennas, double snr, double snr0, Rng& rng);
CVector sample_lb_input(int antennas, double snr, double snr0, std::uint64_t seed);

/// Plain-text matrix format: one row per line, entries like "0.5-1.25j"
/// separated by whitespace. Blank lines and '#' comments are ignored.
CMatrix read_matrix(std::istream& in);
CMatrix load_matrix(const std::string& path);
void write_matrix(std::ostream& out, const CMatrix& h);
cplx parse_complex(const std::string& token);

} // namespace phasecap::channel

#endif
