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

#include "phasecap/channel.hpp"

#include "phasecap/error.hpp"
#include "phasecap/mathcore.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace phasecap::channel {

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols)
{
}

CMatrix CMatrix::identity(std::size_t n)
{
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diagonal(std::span<const cplx> entries)
{
    CMatrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i)
        m(i, i) = entries[i];
    return m;
}

CVector CMatrix::apply(std::span<const cplx> x) const
{
    if (x.size() != cols_)
        throw DomainError("matrix-vector size mismatch");
    CVector y(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        cplx acc = 0.0;
        for (std::size_t c = 0; c < cols_; ++c)
            acc += (*this)(r, c) * x[c];
        y[r] = acc;
    }
    return y;
}

bool CMatrix::is_diagonal() const noexcept
{
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if (r != c && (*this)(r, c) != cplx{})
                return false;
    return true;
}

namespace {

// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t n)
{
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
    double norm = 0.0;
    for (double v : a)
        norm += v * v;
    norm = std::sqrt(norm);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                off += at(p, q) * at(p, q);
        if (std::sqrt(off) <= 1e-15 * norm)
            break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (std::abs(apq) <= 1e-300)
                    continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = at(p, k);
                    const double aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i)
        eig[i] = at(i, i);
    return eig;
}

} // namespace

EigenBounds singular_value_bounds(const CMatrix& h)
{
    const std::size_t n = h.rows();
    if (n == 0 || h.cols() != n)
        throw DomainError("singular_value_bounds: matrix must be square and non-empty");
    // Gram matrix G = H^H H.
    CMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                acc += std::conj(h(k, i)) * h(k, j);
            g(i, j) = acc;
        }

    double lo = 0.0;
    double hi = 0.0;
    if (n == 1) {
        lo = hi = g(0, 0).real();
    } else if (n == 2) {
        const double a = g(0, 0).real();
        const double d = g(1, 1).real();
        const double half_diff = 0.5 * (a - d);
        const double root = std::hypot(half_diff, std::abs(g(0, 1)));
        const double mid = 0.5 * (a + d);
        hi = mid + root;
        // Product form avoids cancellation in the smaller root.
        const double det = a * d - std::norm(g(0, 1));
        lo = hi > 0.0 ? det / hi : 0.0;
    } else {
        // Complex Hermitian G maps to the real symmetric [[Re, -Im], [Im, Re]]
        // whose spectrum is that of G with every eigenvalue doubled.
        const std::size_t m = 2 * n;
        std::vector<double> real(m * m);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                real[i * m + j] = g(i, j).real();
                real[(i + n) * m + (j + n)] = g(i, j).real();
                real[i * m + (j + n)] = -g(i, j).imag();
                real[(i + n) * m + j] = g(i, j).imag();
            }
        const auto eig = jacobi_eigenvalues(std::move(real), m);
        lo = *std::min_element(eig.begin(), eig.end());
        hi = *std::max_element(eig.begin(), eig.end());
    }
    if (!(hi > 0.0) || !(lo > 1e-24 * hi))
        throw RankError("channel matrix is rank deficient");
    return {lo, hi};
}

CMatrix ChannelParams::effective_h() const
{
    if (h_matrix)
        return *h_matrix;
    return CMatrix::identity(static_cast<std::size_t>(antennas));
}

void ChannelParams::validate() const
{
    if (antennas < 1)
        throw DomainError("antenna count must be at least 1");
    if (!(sigma_delta >= 0.0) || !std::isfinite(sigma_delta))
        throw DomainError("phase-noise std must be finite and nonnegative");
    if (!(snr > 0.0) || !std::isfinite(snr))
        throw DomainError("snr must be positive and finite");
    if (h_matrix) {
        const auto n = static_cast<std::size_t>(antennas);
        if (h_matrix->rows() != n || h_matrix->cols() != n)
            throw DomainError("channel matrix must be M x M");
        singular_value_bounds(*h_matrix);
    }
}

PhaseTrajectory wiener_trajectory(double sigma_delta, std::size_t n, Rng& rng, const SimulationOptions& options)
{
    PhaseTrajectory traj;
    traj.theta.resize(n);
    if (n == 0)
        return traj;
    std::uniform_real_distribution<double> uniform(0.0, mathcore::kTwoPi);
    std::normal_distribution<double> normal(0.0, 1.0);
    double theta = options.random_initial_phase ? uniform(rng) : mathcore::wrap_angle(options.initial_phase);
    traj.theta[0] = theta;
    for (std::size_t k = 1; k < n; ++k) {
        theta = mathcore::wrap_angle(theta + sigma_delta * normal(rng));
        traj.theta[k] = theta;
    }
    return traj;
}

SimulationResult simulate(const ChannelParams& params, std::span<const CVector> inputs, std::uint64_t seed,
                          const SimulationOptions& options)
{
    params.validate();
    const auto m = static_cast<std::size_t>(params.antennas);
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        if (inputs[k].size() != m)
            throw DomainError("input vector " + std::to_string(k) + " has the wrong dimension");
        double power = 0.0;
        for (const auto& v : inputs[k])
            power += std::norm(v);
        if (power > params.snr * (1.0 + 1e-12))
            throw ConstraintError("peak-power constraint violated at input index " + std::to_string(k), k);
    }

    Rng phase_rng(derive_seed(seed, 1));
    Rng noise_rng(derive_seed(seed, 2));
    SimulationResult result;
    result.trajectory = wiener_trajectory(params.sigma_delta, inputs.size(), phase_rng, options);
    const CMatrix h = params.effective_h();
    result.outputs.reserve(inputs.size());
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        CVector y = h.apply(inputs[k]);
        const cplx rot = std::polar(1.0, result.trajectory.theta[k]);
        for (auto& v : y) {
            v *= rot;
            if (options.add_noise)
                v += complex_normal(noise_rng);
        }
        result.outputs.push_back(std::move(y));
    }
    return result;
}

Constellation::Constellation(std::string name, std::vector<cplx> points)
    : name_(std::move(name)), points_(std::move(points))
{
    if (points_.empty())
        throw DomainError("constellation must have at least one point");
    std::set<std::pair<double, double>> seen;
    for (const auto& p : points_)
        if (!seen.emplace(p.real(), p.imag()).second)
            throw DomainError("constellation points must be distinct");
}

Constellation Constellation::qam(int order)
{
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
    if (order < 1 || side * side != order)
        throw DomainError("QAM order must be a perfect square");
    std::vector<cplx> pts;
    pts.reserve(static_cast<std::size_t>(order));
    for (int i = 0; i < side; ++i)
        for (int q = 0; q < side; ++q)
            pts.emplace_back(2.0 * i - (side - 1), 2.0 * q - (side - 1));
    if (order == 1)
        pts = {cplx{1.0, 0.0}};
    return Constellation("QAM-" + std::to_string(order), std::move(pts));
}

Constellation Constellation::psk(int order)
{
    if (order < 1)
        throw DomainError("PSK order must be positive");
    std::vector<cplx> pts;
    pts.reserve(static_cast<std::size_t>(order));
    for (int i = 0; i < order; ++i)
        pts.push_back(std::polar(1.0, mathcore::kTwoPi * i / order));
    return Constellation("PSK-" + std::to_string(order), std::move(pts));
}

Constellation Constellation::from_name(const std::string& name)
{
    const auto dash = name.find('-');
    if (dash == std::string::npos)
        throw DomainError("constellation name must look like QAM-64 or PSK-8: " + name);
    std::string family = name.substr(0, dash);
    std::transform(family.begin(), family.end(), family.begin(), [](unsigned char c) { return std::toupper(c); });
    int order = 0;
    const auto tail = name.substr(dash + 1);
    auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), order);
    if (ec != std::errc{} || ptr != tail.data() + tail.size())
        throw DomainError("bad constellation order: " + name);
    if (family == "QAM")
        return qam(order);
    if (family == "PSK")
        return psk(order);
    throw DomainError("unknown constellation family: " + family);
}

double Constellation::max_abs() const noexcept
{
    double m = 0.0;
    for (const auto& p : points_)
        m = std::max(m, std::abs(p));
    return m;
}

double Constellation::mean_power() const noexcept
{
    double s = 0.0;
    for (const auto& p : points_)
        s += std::norm(p);
    return s / static_cast<double>(points_.size());
}

double Constellation::scale(double snr, int antennas, Normalization mode) const
{
    if (!(snr > 0.0) || antennas < 1)
        throw DomainError("constellation scaling needs snr > 0 and M >= 1");
    const double per_antenna = snr / antennas;
    if (mode == Normalization::peak)
        return std::sqrt(per_antenna) / max_abs();
    return std::sqrt(per_antenna / mean_power());
}

std::vector<cplx> Constellation::scaled(double snr, int antennas, Normalization mode) const
{
    const double a = scale(snr, antennas, mode);
    std::vector<cplx> out(points_);
    for (auto& p : out)
        p *= a;
    return out;
}

double wavelength_from_frequency(double frequency_hz)
{
    if (!(frequency_hz > 0.0))
        throw DomainError("frequency must be positive");
    return kSpeedOfLight / frequency_hz;
}

double los_antenna_spacing(double wavelength_m, double range_m, int antennas)
{
    if (!(wavelength_m > 0.0) || !(range_m > 0.0) || antennas < 1)
        throw DomainError("los_antenna_spacing: all inputs must be positive");
    return std::sqrt(wavelength_m * range_m / antennas);
}

CVector sample_lb_input(int antennas, double snr, double snr0, Rng& rng)
{
    if (antennas < 1)
        throw DomainError("sample_lb_input: antenna count must be at least 1");
    if (!(snr0 > 0.0) || !(snr0 < snr))
        throw ConfigError("sample_lb_input: requires 0 < snr0 < snr");
    const auto m = static_cast<std::size_t>(antennas);
    CVector v(m);
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (auto& c : v) {
            c = complex_normal(rng);
            norm2 += std::norm(c);
        }
    } while (norm2 == 0.0);
    // Inverse CDF of the radial law: r^{2M-1} uniform on [r0^{2M-1}, 1].
    const double p = 2.0 * antennas - 1.0;
    const double low = std::pow(snr0 / snr, 0.5 * p);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const double r = std::pow(low + uniform(rng) * (1.0 - low), 1.0 / p);
    const double a = std::sqrt(snr) * r / std::sqrt(norm2);
    for (auto& c : v)
        c *= a;
    return v;
}

CVector sample_lb_input(int antennas, double snr, double snr0, std::uint64_t seed)
{
    Rng rng(seed);
    return sample_lb_input(antennas, snr, snr0, rng);
}

namespace {

double parse_real(std::string_view s, const std::string& token)
{
    if (s.empty() || s == "+")
        return 1.0;
    if (s == "-")
        return -1.0;
    if (s.front() == '+')
        s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw SchemaError("malformed complex entry: " + token);
    return v;
}

} // namespace

cplx parse_complex(const std::string& token)
{
    if (token.empty())
        throw SchemaError("empty complex entry");
    std::string_view t(token);
    const bool imaginary = t.back() == 'j' || t.back() == 'J';
    if (!imaginary) {
        if (t.front() == '+' || t.front() == '-') {
            if (t.size() == 1)
                throw SchemaError("malformed complex entry: " + token);
        }
        return {parse_real(t, token), 0.0};
    }
    t.remove_suffix(1);
    // Split at the last sign that is not an exponent sign or the leading sign.
    std::size_t split = std::string_view::npos;
    for (std::size_t i = t.size(); i-- > 1;) {
        if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string_view::npos)
        return {0.0, parse_real(t, token)};
    const auto re = t.substr(0, split);
    if (re.empty() || re == "+" || re == "-")
        throw SchemaError("malformed complex entry: " + token);
    return {parse_real(re, token), parse_real(t.substr(split), token)};
}

CMatrix read_matrix(std::istream& in)
{
    std::vector<std::vector<cplx>> rows;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::vector<cplx> row;
        std::string tok;
        while (ls >> tok)
            row.push_back(parse_complex(tok));
        if (!row.empty())
            rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw SchemaError("matrix file contains no rows");
    const std::size_t cols = rows.front().size();
    CMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols)
            throw SchemaError("matrix row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size())
                              + " entries, expected " + std::to_string(cols));
        for (std::size_t c = 0; c < cols; ++c)
            m(r, c) = rows[r][c];
    }
    return m;
}

CMatrix load_matrix(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open matrix file: " + path);
    return read_matrix(in);
}

void write_matrix(std::ostream& out, const CMatrix& h)
{
    std::ostringstream os;
    os << std::setprecision(17);
    for (std::size_t r = 0; r < h.rows(); ++r) {
        for (std::size_t c = 0; c < h.cols(); ++c) {
            const auto v = h(r, c);
            if (c)
                os << ' ';
            os << v.real() << (std::signbit(v.imag()) ? '-' : '+') << std::abs(v.imag()) << 'j';
        }
        os << '\n';
    }
    out << os.str();
}

} // namespace phasecap::channel
