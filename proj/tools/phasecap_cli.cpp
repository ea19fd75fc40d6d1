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

// phasecap command-line front end. Talks to the library only through the C API.

#include "phasecap/phasecap.h"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;

int exit_code(phasecap_status s)
{
    switch (s) {
    case PHASECAP_OK:
        return kExitOk;
    case PHASECAP_E_USAGE:
    case PHASECAP_E_CONFIG:
    case PHASECAP_E_SCHEMA:
    case PHASECAP_E_IO:
        return kExitUsage;
    default:
        return kExitNumeric;
    }
}

int report(phasecap_status s)
{
    if (s != PHASECAP_OK)
        std::fprintf(stderr, "phasecap: %s: %s\n", phasecap_status_name(s), phasecap_last_error());
    return exit_code(s);
}

struct ConfigHandle {
    phasecap_config* ptr = nullptr;
    ~ConfigHandle() { phasecap_config_free(ptr); }
};

int cmd_validate(const std::string& path)
{
    ConfigHandle cfg;
    if (auto s = phasecap_config_load(path.c_str(), &cfg.ptr))
        return report(s);
    if (auto s = phasecap_config_validate(cfg.ptr))
        return report(s);
    size_t needed = 0;
    phasecap_config_canonical(cfg.ptr, nullptr, 0, &needed);
    std::string text(needed, '\0');
    if (auto s = phasecap_config_canonical(cfg.ptr, text.data(), text.size(), &needed))
        return report(s);
    text.resize(needed - 1);
    std::fputs(text.c_str(), stdout);
    return kExitOk;
}

int cmd_sweep(const std::string& path, int threads, const std::string& output, bool quiet)
{
    ConfigHandle cfg;
    if (auto s = phasecap_config_load(path.c_str(), &cfg.ptr))
        return report(s);
    if (threads >= 0) {
        if (auto s = phasecap_config_set(cfg.ptr, "run", "threads", std::to_string(threads).c_str()))
            return report(s);
    }
    if (!output.empty()) {
        if (auto s = phasecap_config_set(cfg.ptr, "run", "output_csv", output.c_str()))
            return report(s);
    }
    phasecap_sweep_summary summary{};
    const auto s = phasecap_sweep_run(cfg.ptr, quiet ? 0 : 1, &summary);
    if (s == PHASECAP_OK || s == PHASECAP_E_NUMERIC)
        std::printf("rows=%zu computed=%zu cached=%zu failed=%zu\n", summary.rows, summary.computed, summary.cached,
                    summary.failed);
    return report(s);
}

int cmd_plot(const std::string& csv, const std::string& figure, const std::string& output)
{
    char written[4096];
    size_t needed = 0;
    const auto s = phasecap_plot_emit(csv.c_str(), figure.c_str(), output.empty() ? nullptr : output.c_str(), written,
                                      sizeof written, &needed);
    if (s == PHASECAP_OK)
        std::printf("%s\n", written);
    return report(s);
}

int cmd_spacing(double freq_ghz, double range_m, int antennas)
{
    double lambda = 0.0;
    double d = 0.0;
    if (auto s = phasecap_wavelength(freq_ghz * 1e9, &lambda))
        return report(s);
    if (auto s = phasecap_los_spacing(freq_ghz * 1e9, range_m, antennas, &d))
        return report(s);
    std::printf("wavelength_m=%.9g spacing_m=%.9g\n", lambda, d);
    return kExitOk;
}

int cmd_gap(int antennas)
{
    double nats = 0.0;
    if (auto s = phasecap_avg_peak_gap(antennas, &nats))
        return report(s);
    std::printf("gap_nats=%.6f gap_bits=%.6f\n", nats, nats / std::log(2.0));
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Capacity bounds for Wiener phase-noise MIMO channels"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(phasecap_version()));

    std::string config_path;
    int threads = -1;
    std::string output;
    bool quiet = false;
    auto* sweep = app.add_subcommand("sweep", "Run an SNR sweep and write the CSV");
    sweep->add_option("config", config_path, "Experiment config file")->required();
    sweep->add_option("--threads", threads, "Override run.threads")->check(CLI::NonNegativeNumber);
    sweep->add_option("--output", output, "Override run.output_csv");
    sweep->add_flag("--quiet", quiet, "No per-row progress on stderr");

    std::string csv_path;
    std::string figure;
    std::string plot_out;
    auto* plot = app.add_subcommand("plot", "Emit a gnuplot script for a result CSV");
    plot->add_option("csv", csv_path, "Result CSV")->required();
    plot->add_option("--figure", figure, "Figure id, used in the script and image names")->required();
    plot->add_option("-o,--output", plot_out, "Script path (default: next to the CSV)");

    double freq_ghz = 0.0;
    double range_m = 0.0;
    int antennas = 0;
    auto* spacing = app.add_subcommand("spacing", "Line-of-sight antenna spacing");
    spacing->add_option("--freq-ghz", freq_ghz, "Carrier frequency in GHz")->required();
    spacing->add_option("--range-m", range_m, "Link distance in metres")->required();
    spacing->add_option("--antennas", antennas, "Antennas per side")->required();

    int gap_antennas = 0;
    auto* gap = app.add_subcommand("gap", "High-SNR average-versus-peak capacity gap");
    gap->add_option("--antennas", gap_antennas, "Number of antennas")->required();

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Check a config and print its canonical form");
    validate->add_option("config", validate_path, "Experiment config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    if (*sweep)
        return cmd_sweep(config_path, threads, output, quiet);
    if (*plot)
        return cmd_plot(csv_path, figure, plot_out);
    if (*spacing)
        return cmd_spacing(freq_ghz, range_m, antennas);
    if (*gap)
        return cmd_gap(gap_antennas);
    return cmd_validate(validate_path);
}
