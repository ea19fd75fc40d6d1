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

#ifndef PHASECAP_SWEEP_HPP
#define PHASECAP_SWEEP_HPP

#include "phasecap/bounds.hpp"
#include "phasecap/channel.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace phasecap::sweep {

struct ExperimentConfig {
    // [channel]
    int antennas = 1;
    double sigma_delta_deg = 6.0;
    std::string h_matrix = "unitary";  ///< "unitary" or a matrix file path
    // [snr]
    double start_db = 10.0;
    double stop_db = 30.0;
    double step_db = 2.0;
    // [bounds]
    std::vector<bounds::Kind> kinds;
    // [grid]
    bounds::GridControls grid;
    // [montecarlo]
    bounds::McControls mc;
    std::string constellation = "QAM-64";
    channel::Normalization normalization = channel::Normalization::peak;
    // [run]
    std::uint64_t master_seed = 1;
    int threads = 0;  ///< 0: hardware concurrency
    std::string output_csv = "results.csv";
    std::string cache;  ///< empty: no cache
    bool record_runtime = false;

    /// Directory relative paths are resolved against; not part of the text form.
    std::filesystem::path base_dir;

    bool operator==(const ExperimentConfig&) const;
};

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
std::string canonical_text(const ExperimentConfig& config);

/// Sets one field by section and key, with the same checks as the parser.
void set_field(ExperimentConfig& config, std::string_view section, std::string_view key, std::string_view value);

/// Cross-field checks; also loads the channel matrix if one is named.
void validate(const ExperimentConfig& config);

std::filesystem::path resolve(const ExperimentConfig& config, const std::string& path);
channel::ChannelParams channel_params(const ExperimentConfig& config, double snr_db);

std::vector<double> snr_points(const ExperimentConfig& config);
std::uint64_t task_seed(std::uint64_t master_seed, bounds::Kind kind, double snr_db);
/// Hex digest of every input that determines the row.
std::string row_key(const ExperimentConfig& config, bounds::Kind kind, double snr_db);

struct Row {
    bounds::BoundRecord record;
    double runtime_s = 0.0;
    bool failed = false;
    std::string error;
};

/// Computes one row; backend failures are returned as a failed row.
Row evaluate(const ExperimentConfig& config, bounds::Kind kind, double snr_db);

struct Summary {
    std::size_t rows = 0;
    std::size_t computed = 0;
    std::size_t cached = 0;
    std::size_t failed = 0;
};

Summary run_sweep(const ExperimentConfig& config, std::ostream* log = nullptr);

inline constexpr std::string_view kCsvHeader =
    "snr_db,kind,value_bits,std_error_bits,opt_alpha,opt_xi,n_samples,seed,runtime_s";

std::string format_number(double v);
std::string csv_line(const Row& row, bool record_runtime);
/// Rows sorted by (kind, snr_db).
void write_csv(std::ostream& out, std::vector<Row> rows, bool record_runtime);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::size_t column(std::string_view name) const;
};

CsvTable read_csv(std::istream& in);

/// Gnuplot script with inline data, one series per kind. Throws SchemaError
/// on a missing column or empty table.
std::string plot_script(const CsvTable& table, const std::string& figure_id);
/// Writes the script next to the CSV unless out_path is given; returns the path.
std::filesystem::path emit_plot_script(const std::filesystem::path& csv_path, const std::string& figure_id,
                                       const std::filesystem::path& out_path = {});

void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

} // namespace phasecap::sweep

#endif
