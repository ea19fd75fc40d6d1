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

// End-to-end acceptance run: sweeps both antenna configurations at full
// budget and prints one PASS/FAIL line per criterion.
//
//   acceptance [--out DIR] [--strict]
//
// Exits 0 once every criterion has been evaluated; with --strict any FAIL
// gives exit 1.

#include "phasecap/bounds.hpp"
#include "phasecap/entropy.hpp"
#include "phasecap/inforate.hpp"
#include "phasecap/mathcore.hpp"
#include "phasecap/sweep.hpp"

#include "oracles.hpp"

#include <boost/math/special_functions/digamma.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace phasecap;
using bounds::Kind;

namespace {

struct Point {
    double value;
    double se;
};

using Curve = std::map<double, Point>;
using Curves = std::map<std::string, Curve>;

struct Outcome {
    bool pass;
    std::string detail;
};

std::vector<std::pair<std::string, bool>> g_results;

void report(int id, const std::string& title, const Outcome& o)
{
    std::printf("%s criterion %d: %s | %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str());
    std::fflush(stdout);
    g_results.emplace_back(title, o.pass);
}

std::string fmt(double v, int prec = 3)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

std::string config_text(int antennas, const std::string& kinds, double start, double stop, double step,
                        const std::string& csv)
{
    std::ostringstream os;
    os << "[channel]\nantennas = " << antennas << "\nsigma_delta_deg = 6\n"
       << "[snr]\nstart_db = " << start << "\nstop_db = " << stop << "\nstep_db = " << step << "\n"
       << "[bounds]\nkinds = " << kinds << "\n"
       << "[montecarlo]\nn_samples = 20000\nblock_length = 2000\nn_blocks = 4\nq_levels = 200\n"
       << "constellation = QAM-64\nnormalization = peak\n"
       << "[run]\nmaster_seed = 2014\nthreads = 1\noutput_csv = " << csv << "\n";
    return os.str();
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Curves run(const fs::path& dir, const std::string& text, const fs::path& csv)
{
    const auto cfg = sweep::parse_config(text, dir);
    const auto t0 = std::chrono::steady_clock::now();
    const auto summary = sweep::run_sweep(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("  sweep %s: %zu rows, %zu failed, %.0f s\n", csv.filename().c_str(), summary.rows, summary.failed,
                secs);
    std::ifstream in(dir / csv);
    const auto table = sweep::read_csv(in);
    const auto c_snr = table.column("snr_db");
    const auto c_kind = table.column("kind");
    const auto c_val = table.column("value_bits");
    const auto c_se = table.column("std_error_bits");
    Curves out;
    for (const auto& row : table.rows) {
        if (row[c_kind] == "failed")
            continue;
        const double se = row[c_se].empty() ? 0.0 : std::stod(row[c_se]);
        out[row[c_kind]][std::stod(row[c_snr])] = {std::stod(row[c_val]), se};
    }
    return out;
}

void print_curves(int antennas, const Curves& c)
{
    std::printf("  M=%d   snr       U     U_s    asym     mpc     qam\n", antennas);
    for (const auto& [snr, u] : c.at("U")) {
        auto get = [&](const char* k) {
            const auto it = c.find(k);
            if (it == c.end() || !it->second.count(snr))
                return std::string("      -");
            char buf[16];
            std::snprintf(buf, sizeof buf, "%7.3f", it->second.at(snr).value);
            return std::string(buf);
        };
        std::printf("       %5.1f %s %s %s %s %s\n", snr, get("U").c_str(), get("U_s").c_str(),
                    get("asymptotic").c_str(), get("memoryless_plus_corr").c_str(), get("qam_lower").c_str());
    }
}

// SNR (dB) at which the increasing curve reaches `bits`, by linear
// interpolation; the end segments are extended.
double inverse(const Curve& curve, double bits)
{
    std::vector<std::pair<double, double>> pts;
    for (const auto& [snr, p] : curve)
        pts.emplace_back(snr, p.value);
    std::size_t i = 1;
    while (i + 1 < pts.size() && pts[i].second < bits)
        ++i;
    const auto [x0, y0] = pts[i - 1];
    const auto [x1, y1] = pts[i];
    return x0 + (bits - y0) * (x1 - x0) / (y1 - y0);
}

Outcome gap_check(const Curves& c, double min_snr, double lo, double hi)
{
    bool ok = true;
    std::string detail = "gap dB at";
    for (const auto& [snr, q] : c.at("qam_lower")) {
        if (snr < min_snr)
            continue;
        const double gap = snr - inverse(c.at("U"), q.value);
        ok = ok && gap >= lo && gap <= hi;
        detail += " " + fmt(snr, 0) + ":" + fmt(gap, 2);
    }
    detail += " (want [" + fmt(lo, 1) + ", " + fmt(hi, 1) + "])";
    return {ok, detail};
}

Outcome tracking_check(const Curves& c1, const Curves& c2)
{
    bool ok2 = true;
    double worst = 0.0;
    for (const auto& [snr, u] : c2.at("U")) {
        if (snr < 10.0)
            continue;
        const double d = std::abs(u.value - c2.at("asymptotic").at(snr).value);
        worst = std::max(worst, d);
        ok2 = ok2 && d <= 0.5;
    }
    bool below = true;
    bool shrinking = true;
    std::string diffs;
    double prev = 0.0;
    double prev_se = 0.0;
    bool first = true;
    for (const auto& [snr, u] : c1.at("U")) {
        if (snr < 16.0)
            continue;
        const double d = c1.at("asymptotic").at(snr).value - u.value;
        below = below && d > -3.0 * u.se;
        if (!first)
            shrinking = shrinking && d <= prev + 3.0 * std::hypot(u.se, prev_se);
        diffs += " " + fmt(snr, 0) + ":" + fmt(d, 2);
        prev = d;
        prev_se = u.se;
        first = false;
    }
    const bool ok1 = below && shrinking;
    std::string detail = "M=2 max|U-asym|=" + fmt(worst) + " bits" + (ok2 ? "" : " (> 0.5)") + "; M=1 asym-U at"
                         + diffs + (below ? "" : " (U above asym)") + (shrinking ? "" : " (not shrinking)");
    return {ok1 && ok2, detail};
}

Outcome slope_check(const Curves& c1, const Curves& c2)
{
    bool ok = true;
    std::string detail;
    const std::pair<int, const Curves*> all[] = {{1, &c1}, {2, &c2}};
    for (const auto& [m, c] : all) {
        const double expected = (m - 0.5) * std::log2(10.0);
        const auto& a = c->at("asymptotic");
        const auto& u = c->at("U");
        const double sa = (a.at(30.0).value - a.at(26.0).value) / 0.4;
        const double su = (u.at(30.0).value - u.at(26.0).value) / 0.4;
        const double rel = std::abs(su - expected) / expected;
        const bool exact = std::abs(sa - expected) <= 1e-9 * expected;
        ok = ok && exact && rel <= 0.10;
        detail += (detail.empty() ? "" : "; ") + std::string("M=") + std::to_string(m) + " target "
                  + fmt(expected, 4) + " asym " + fmt(sa, 6) + (exact ? "" : " (inexact)") + " U " + fmt(su) + " ("
                  + fmt(100.0 * rel, 1) + "% off)";
    }
    return {ok, detail};
}

Outcome identity_check()
{
    const double sigma = 6.0 * mathcore::kPi / 180.0;
    auto curve = [&](double snr) { return bounds::asymptotic_capacity_nats(2, sigma, snr); };
    double worst = 0.0;
    for (double db : {10.0, 20.0, 30.0}) {
        const auto b = bounds::nonunitary_bounds(curve, 0.5, 2.0, bounds::db_to_linear(db));
        worst = std::max(worst, std::abs((b.upper - b.lower) - 1.5 * std::log(4.0)));
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "max deviation %.2e nats", worst);
    return {worst <= 1e-9, buf};
}

Outcome ordering_check(const Curves& c1, const Curves& c2)
{
    int checked = 0;
    std::string bad;
    auto leq = [&](const char* lo, const char* hi, const Curves& c, int m) {
        for (const auto& [snr, a] : c.at(lo)) {
            const auto& b = c.at(hi).at(snr);
            ++checked;
            if (a.value > b.value + 3.0 * std::hypot(a.se, b.se))
                bad += " M=" + std::to_string(m) + " " + lo + ">" + hi + "@" + fmt(snr, 0);
        }
    };
    for (const auto& [m, c] : {std::pair<int, const Curves*>{1, &c1}, {2, &c2}}) {
        leq("qam_lower", "U", *c, m);
        leq("U", "U_s", *c, m);
        leq("U_s", "memoryless_plus_corr", *c, m);
    }
    return {bad.empty(), std::to_string(checked) + " comparisons" + (bad.empty() ? "" : ", violations:" + bad)};
}

Outcome oracle_suite()
{
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> failed;
    auto expect = [&](bool cond, const std::string& what) {
        if (!cond)
            failed.push_back(what);
    };
    const double sigma = 6.0 * mathcore::kPi / 180.0;

    {
        const int n = 1 << 14;
        double total = 0.0;
        for (int i = 0; i < n; ++i)
            total += mathcore::wrapped_gaussian_pdf(mathcore::kTwoPi * i / n, sigma);
        expect(std::abs(total * mathcore::kTwoPi / n - 1.0) <= 1e-10, "normalization");
    }
    const double gauss = 0.5 * std::log(2.0 * mathcore::kPi * std::exp(1.0) * sigma * sigma);
    expect(std::abs(mathcore::wrapped_gaussian_entropy(sigma) - gauss) <= 1e-3, "h(delta)");
    const double gamma = -boost::math::digamma(1.0);
    expect(std::abs(entropy::expect_log_noncentral(0.0, 1) + gamma) <= 1e-6, "expect_log M=1");
    expect(std::abs(entropy::expect_log_noncentral(0.0, 2) - boost::math::digamma(2.0)) <= 1e-6, "expect_log M=2");
    expect(std::abs(entropy::entropy_abs_sq(0.0) - 1.0) <= 1e-6, "entropy_abs_sq(0)");

    channel::ChannelParams p;
    p.antennas = 1;
    p.sigma_delta = 10.0;
    p.snr = 10.0;
    {
        inforate::PhaseQuantizer q(64, p.sigma_delta);
        const auto est = inforate::qam_rate(p, channel::Constellation::psk(8), q, 2000, 4, 5);
        expect(std::abs(est.rate) <= 3.0 * est.std_error + 1e-12, "uniform-phase PSK");
    }
    {
        p.sigma_delta = 1e-4;
        p.snr = bounds::db_to_linear(12.0);
        inforate::PhaseQuantizer q(200, p.sigma_delta);
        inforate::QamRateOptions opts;
        opts.normalization = channel::Normalization::average;
        const auto est = inforate::qam_rate(p, channel::Constellation::qam(64), q, 2000, 4, 17, opts);
        const auto ref = oracles::coherent_qam64(p.snr, 100000, 23);
        expect(std::abs(est.rate - ref.bits) <= 3.0 * std::hypot(est.std_error, ref.se), "coherent AWGN");
    }
    {
        p.sigma_delta = sigma;
        p.snr = bounds::db_to_linear(16.0);
        const auto qam = channel::Constellation::qam(64);
        const auto a = inforate::qam_rate(p, qam, inforate::PhaseQuantizer(200, sigma), 2000, 2, 31);
        const auto b = inforate::qam_rate(p, qam, inforate::PhaseQuantizer(400, sigma), 2000, 2, 31);
        expect(std::abs(a.rate - b.rate) < 0.02, "quantizer doubling");
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    expect(secs < 60.0, "time budget");
    std::string detail = "9 checks in " + fmt(secs, 1) + " s";
    for (const auto& f : failed)
        detail += ", failed: " + f;
    return {failed.empty(), detail};
}

} // namespace

int main(int argc, char** argv)
{
    fs::path out = "acceptance_out";
    bool strict = false;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--strict")) {
            strict = true;
        } else if (!std::strcmp(argv[i], "--out") && i + 1 < argc) {
            out = argv[++i];
        } else {
            std::fprintf(stderr, "usage: %s [--out DIR] [--strict]\n", argv[0]);
            return 2;
        }
    }
    try {
        fs::create_directories(out);
        const std::string kinds = "U, U_s, asymptotic, memoryless_plus_corr, qam_lower";
        std::printf("sweeping (sigma_delta = 6 deg, 10-30 dB step 2)\n");
        const auto c1 = run(out, config_text(1, kinds, 10, 30, 2, "m1.csv"), "m1.csv");
        print_curves(1, c1);
        const auto c2 = run(out, config_text(2, kinds, 10, 30, 2, "m2.csv"), "m2.csv");
        print_curves(2, c2);

        report(1, "M=1 gap between U and 64-QAM", gap_check(c1, 15.0, 1.5, 3.5));
        report(2, "M=2 high-SNR gap between U and 64-QAM", gap_check(c2, 20.0, 2.5, 4.5));
        report(3, "asymptotic tracking", tracking_check(c1, c2));
        report(4, "high-SNR slope", slope_check(c1, c2));
        report(5, "non-unitary bound identity", identity_check());
        report(6, "bound ordering", ordering_check(c1, c2));
        report(7, "oracle suite", oracle_suite());

        const auto det_text = config_text(1, kinds, 16, 28, 6, "det_a.csv");
        run(out, det_text, "det_a.csv");
        auto cfg = sweep::parse_config(det_text, out);
        cfg.output_csv = "det_b.csv";
        cfg.threads = 2;
        run(out, sweep::canonical_text(cfg), "det_b.csv");
        const bool same = slurp(out / "det_a.csv") == slurp(out / "det_b.csv");
        report(8, "determinism", {same, same ? "rerun CSV identical" : "rerun CSV differs"});
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance run aborted: %s\n", e.what());
        return 2;
    }

    int passed = 0;
    for (const auto& r : g_results)
        passed += r.second;
    std::printf("%d/%zu criteria passed\n", passed, g_results.size());
    return strict && passed != static_cast<int>(g_results.size()) ? 1 : 0;
}
