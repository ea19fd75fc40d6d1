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
#include "phasecap/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <unistd.h>

namespace phasecap::sweep {

namespace {

constexpr std::string_view kCacheMagic = "# phasecap cache v1";

std::vector<std::string> split(std::string_view line, char sep)
{
    std::vector<std::string> out;
    while (true) {
        const auto pos = line.find(sep);
        out.emplace_back(line.substr(0, pos));
        if (pos == std::string_view::npos)
            break;
        line.remove_prefix(pos + 1);
    }
    return out;
}

double number_or_nan(const std::string& s)
{
    if (s.empty())
        return std::nan("");
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw SchemaError("bad number '" + s + "'");
    return v;
}

bool row_from_fields(const std::vector<std::string>& f, Row& row)
{
    if (f.size() != 9)
        return false;
    const auto kind = bounds::parse_kind(f[1]);
    if (!kind)
        return false;
    try {
        row = Row{};
        row.record.snr_db = number_or_nan(f[0]);
        row.record.kind = *kind;
        row.record.value_bits = number_or_nan(f[2]);
        row.record.std_error_bits = number_or_nan(f[3]);
        if (!f[4].empty())
            row.record.opt_alpha = number_or_nan(f[4]);
        if (!f[5].empty())
            row.record.opt_xi = number_or_nan(f[5]);
        row.record.n_samples = std::stoll(f[6]);
        row.record.seed = std::stoull(f[7]);
        row.runtime_s = number_or_nan(f[8]);
    } catch (const std::exception&) {
        return false;
    }
    return std::isfinite(row.record.value_bits);
}

std::map<std::string, Row> load_cache(const std::filesystem::path& path)
{
    std::map<std::string, Row> entries;
    std::ifstream in(path);
    if (!in)
        return entries;
    std::string line;
    if (!std::getline(in, line) || line != kCacheMagic)
        return entries;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            continue;
        Row row;
        if (row_from_fields(split(std::string_view(line).substr(comma + 1), ','), row))
            entries.emplace(line.substr(0, comma), row);
    }
    return entries;
}

void save_cache(const std::filesystem::path& path, const std::map<std::string, Row>& entries)
{
    std::string text(kCacheMagic);
    text += '\n';
    for (const auto& [key, row] : entries)
        text += key + "," + csv_line(row, true) + "\n";
    write_file_atomic(path, text);
}

std::string row_kind(const Row& row)
{
    return row.failed ? "failed" : std::string(bounds::kind_name(row.record.kind));
}

bool unit_spectrum(const channel::EigenBounds& eb)
{
    return std::abs(eb.lambda_min - 1.0) < 1e-9 && std::abs(eb.lambda_max - 1.0) < 1e-9;
}

} // namespace

std::string format_number(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string csv_line(const Row& row, bool record_runtime)
{
    const auto& r = row.record;
    std::string s = format_number(r.snr_db) + "," + row_kind(row) + ",";
    if (!row.failed) {
        s += format_number(r.value_bits) + "," + format_number(r.std_error_bits) + ",";
        s += (r.opt_alpha ? format_number(*r.opt_alpha) : std::string()) + ",";
        s += (r.opt_xi ? format_number(*r.opt_xi) : std::string()) + ",";
    } else {
        s += ",,,,";
    }
    s += std::to_string(r.n_samples) + "," + std::to_string(r.seed) + ",";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", record_runtime ? row.runtime_s : 0.0);
    return s + buf;
}

void write_csv(std::ostream& out, std::vector<Row> rows, bool record_runtime)
{
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        const auto ka = row_kind(a);
        const auto kb = row_kind(b);
        if (ka != kb)
            return ka < kb;
        return a.record.snr_db < b.record.snr_db;
    });
    out << kCsvHeader << '\n';
    for (const auto& row : rows)
        out << csv_line(row, record_runtime) << '\n';
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out)
            throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot replace " + path.string());
    }
}

Row evaluate(const ExperimentConfig& config, bounds::Kind kind, double snr_db)
{
    using bounds::Kind;
    Row row;
    row.record.snr_db = snr_db;
    row.record.kind = kind;
    const auto seed = task_seed(config.master_seed, kind, snr_db);
    row.record.seed = seed;
    const auto start = std::chrono::steady_clock::now();
    try {
        const auto params = channel_params(config, snr_db);
        channel::EigenBounds eb{1.0, 1.0};
        if (params.h_matrix)
            eb = channel::singular_value_bounds(*params.h_matrix);
        auto identity = params;
        identity.h_matrix.reset();
        if (params.h_matrix && !unit_spectrum(eb) && kind != Kind::qam_lower && kind != Kind::nonunitary_upper
            && kind != Kind::nonunitary_lower)
            throw DomainError(std::string(bounds::kind_name(kind)) + " needs a unitary channel");
        const auto constellation = channel::Constellation::from_name(config.constellation);
        bounds::BoundRecord rec;
        switch (kind) {
        case Kind::upper:
            rec = bounds::upper_bound_U(identity, config.grid, config.mc, seed);
            break;
        case Kind::upper_simplified:
            rec = bounds::upper_bound_Us(identity, config.grid, config.mc, seed);
            break;
        case Kind::memoryless_plus_corr:
            rec = bounds::memoryless_plus_correction(identity, config.grid);
            break;
        case Kind::asymptotic:
            rec = bounds::asymptotic_capacity(identity);
            break;
        case Kind::qam_lower:
            rec = bounds::qam_lower(params, constellation, config.mc, seed, config.normalization);
            break;
        case Kind::nonunitary_upper: {
            auto shifted = identity;
            shifted.snr *= eb.lambda_max;
            rec = bounds::upper_bound_U(shifted, config.grid, config.mc, seed);
            break;
        }
        case Kind::nonunitary_lower: {
            auto shifted = identity;
            shifted.snr *= eb.lambda_min;
            rec = bounds::qam_lower(shifted, constellation, config.mc, seed, config.normalization);
            break;
        }
        }
        rec.snr_db = snr_db;
        rec.kind = kind;
        if (!std::isfinite(rec.value_bits) || !(rec.std_error_bits >= 0.0))
            throw NumericError("non-finite result");
        row.record = std::move(rec);
    } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
    }
    row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

Summary run_sweep(const ExperimentConfig& config, std::ostream* log)
{
    validate(config);
    const auto points = snr_points(config);
    struct Task {
        bounds::Kind kind;
        double snr_db;
        std::string key;
    };
    std::vector<Task> tasks;
    for (const auto kind : config.kinds)
        for (const double snr : points)
            tasks.push_back({kind, snr, row_key(config, kind, snr)});

    const bool use_cache = !config.cache.empty();
    const auto cache_path = use_cache ? resolve(config, config.cache) : std::filesystem::path{};
    auto cache = use_cache ? load_cache(cache_path) : std::map<std::string, Row>{};

    Summary summary;
    summary.rows = tasks.size();
    std::vector<Row> rows(tasks.size());
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto it = cache.find(tasks[i].key);
        if (it != cache.end()) {
            rows[i] = it->second;
            rows[i].record.kind = tasks[i].kind;
            rows[i].record.snr_db = tasks[i].snr_db;
            ++summary.cached;
        } else {
            pending.push_back(i);
        }
    }

    std::mutex log_mutex;
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    auto worker = [&] {
        for (std::size_t j = next++; j < pending.size(); j = next++) {
            const auto& t = tasks[pending[j]];
            rows[pending[j]] = evaluate(config, t.kind, t.snr_db);
            const auto& row = rows[pending[j]];
            const auto finished = ++done;
            if (log) {
                std::lock_guard lock(log_mutex);
                *log << "[" << finished << "/" << pending.size() << "] " << bounds::kind_name(t.kind) << " @ "
                     << format_number(t.snr_db) << " dB: ";
                if (row.failed)
                    *log << "FAILED: " << row.error;
                else
                    *log << format_number(row.record.value_bits) << " bits";
                *log << "\n";
            }
        }
    };
    unsigned n_threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                            : std::max(1u, std::thread::hardware_concurrency());
    n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, pending.size()));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < n_threads; ++i)
            pool.emplace_back(worker);
    }

    for (std::size_t j : pending) {
        if (rows[j].failed)
            ++summary.failed;
        else {
            ++summary.computed;
            if (use_cache)
                cache[tasks[j].key] = rows[j];
        }
    }
    if (use_cache)
        save_cache(cache_path, cache);

    std::ostringstream csv;
    write_csv(csv, rows, config.record_runtime);
    write_file_atomic(resolve(config, config.output_csv), csv.str());
    return summary;
}

} // namespace phasecap::sweep
