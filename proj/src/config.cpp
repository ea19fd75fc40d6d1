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
#include "phasecap/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace phasecap::sweep {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view v)
{
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError("expected a number, got '" + std::string(v) + "'");
    return out;
}

template <typename Int>
Int parse_int(std::string_view v)
{
    Int out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ConfigError("expected an integer, got '" + std::string(v) + "'");
    return out;
}

bool parse_bool(std::string_view v)
{
    if (v == "true" || v == "yes" || v == "1")
        return true;
    if (v == "false" || v == "no" || v == "0")
        return false;
    throw ConfigError("expected true or false, got '" + std::string(v) + "'");
}

std::vector<bounds::Kind> parse_kinds(std::string_view v)
{
    std::vector<bounds::Kind> kinds;
    while (!v.empty()) {
        const auto comma = v.find(',');
        const auto item = trim(v.substr(0, comma));
        if (item.empty())
            throw ConfigError("empty entry in kind list");
        const auto kind = bounds::parse_kind(item);
        if (!kind)
            throw ConfigError("unknown kind '" + std::string(item) + "'");
        if (std::find(kinds.begin(), kinds.end(), *kind) != kinds.end())
            throw ConfigError("kind '" + std::string(item) + "' listed twice");
        kinds.push_back(*kind);
        if (comma == std::string_view::npos)
            break;
        v.remove_prefix(comma + 1);
    }
    return kinds;
}

template <typename T>
std::string to_text(T v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

struct Field {
    std::string_view section;
    std::string_view key;
    std::function<void(ExperimentConfig&, std::string_view)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

#define PC_DOUBLE(sec, name, member)                                                                    \
    Field{sec, name, [](ExperimentConfig& c, std::string_view v) { c.member = parse_double(v); },      \
          [](const ExperimentConfig& c) { return to_text(c.member); }}
#define PC_INT(sec, name, member)                                                                         \
    Field{sec, name,                                                                                      \
          [](ExperimentConfig& c, std::string_view v) { c.member = parse_int<decltype(c.member)>(v); }, \
          [](const ExperimentConfig& c) { return to_text(c.member); }}
#define PC_STRING(sec, name, member)                                                               \
    Field{sec, name, [](ExperimentConfig& c, std::string_view v) { c.member = std::string(v); }, \
          [](const ExperimentConfig& c) { return c.member; }}

const std::vector<Field>& fields()
{
    static const std::vector<Field> table{
        PC_INT("channel", "antennas", antennas),
        PC_DOUBLE("channel", "sigma_delta_deg", sigma_delta_deg),
        PC_STRING("channel", "h_matrix", h_matrix),
        PC_DOUBLE("snr", "start_db", start_db),
        PC_DOUBLE("snr", "stop_db", stop_db),
        PC_DOUBLE("snr", "step_db", step_db),
        Field{"bounds", "kinds", [](ExperimentConfig& c, std::string_view v) { c.kinds = parse_kinds(v); },
              [](const ExperimentConfig& c) {
                  std::string out;
                  for (const auto k : c.kinds) {
                      if (!out.empty())
                          out += ", ";
                      out += bounds::kind_name(k);
                  }
                  return out;
              }},
        PC_INT("grid", "xi_points", grid.xi_points),
        PC_DOUBLE("grid", "alpha_min", grid.alpha_min),
        PC_DOUBLE("grid", "alpha_max_per_antenna", grid.alpha_max_per_antenna),
        PC_DOUBLE("grid", "alpha_rel_width", grid.alpha_rel_width),
        PC_DOUBLE("grid", "xi_rel_tol", grid.xi_rel_tol),
        PC_INT("grid", "max_iterations", grid.max_iterations),
        PC_INT("montecarlo", "n_samples", mc.n_samples),
        PC_INT("montecarlo", "block_length", mc.block_length),
        PC_INT("montecarlo", "n_blocks", mc.n_blocks),
        PC_INT("montecarlo", "q_levels", mc.q_levels),
        PC_INT("montecarlo", "past_window", mc.past_window),
        PC_STRING("montecarlo", "constellation", constellation),
        Field{"montecarlo", "normalization",
              [](ExperimentConfig& c, std::string_view v) {
                  if (v == "peak")
                      c.normalization = channel::Normalization::peak;
                  else if (v == "average")
                      c.normalization = channel::Normalization::average;
                  else
                      throw ConfigError("expected peak or average, got '" + std::string(v) + "'");
              },
              [](const ExperimentConfig& c) {
                  return std::string(c.normalization == channel::Normalization::peak ? "peak" : "average");
              }},
        PC_INT("run", "master_seed", master_seed),
        PC_INT("run", "threads", threads),
        PC_STRING("run", "output_csv", output_csv),
        PC_STRING("run", "cache", cache),
        Field{"run", "record_runtime", [](ExperimentConfig& c, std::string_view v) { c.record_runtime = parse_bool(v); },
              [](const ExperimentConfig& c) { return std::string(c.record_runtime ? "true" : "false"); }},
    };
    return table;
}

#undef PC_DOUBLE
#undef PC_INT
#undef PC_STRING

bool requires_unitary(bounds::Kind k)
{
    return k == bounds::Kind::upper || k == bounds::Kind::upper_simplified || k == bounds::Kind::asymptotic
           || k == bounds::Kind::memoryless_plus_corr;
}

} // namespace

bool ExperimentConfig::operator==(const ExperimentConfig& other) const
{
    return canonical_text(*this) == canonical_text(other);
}

void set_field(ExperimentConfig& config, std::string_view section, std::string_view key, std::string_view value)
{
    for (const auto& f : fields()) {
        if (f.section == section && f.key == key) {
            try {
                f.set(config, trim(value));
            } catch (const ConfigError& e) {
                throw ConfigError("field " + std::string(section) + "." + std::string(key) + ": " + e.what());
            }
            return;
        }
    }
    throw ConfigError("unknown field " + std::string(section) + "." + std::string(key));
}

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir)
{
    ExperimentConfig config;
    config.base_dir = base_dir;
    std::string section;
    std::vector<std::string> seen;
    int line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(where + "unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            bool known = false;
            for (const auto& f : fields())
                known = known || f.section == section;
            if (!known)
                throw ConfigError(where + "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(where + "expected key = value");
        if (section.empty())
            throw ConfigError(where + "key outside of any section");
        const auto key = std::string(trim(line.substr(0, eq)));
        const std::string full = section + "." + key;
        if (std::find(seen.begin(), seen.end(), full) != seen.end())
            throw ConfigError(where + "field " + full + " set twice");
        seen.push_back(full);
        try {
            set_field(config, section, key, line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

std::string canonical_text(const ExperimentConfig& config)
{
    std::string out;
    std::string_view section;
    for (const auto& f : fields()) {
        if (f.section != section) {
            if (!section.empty())
                out += '\n';
            section = f.section;
            out += "[" + std::string(section) + "]\n";
        }
        out += std::string(f.key) + " = " + f.get(config) + "\n";
    }
    return out;
}

std::filesystem::path resolve(const ExperimentConfig& config, const std::string& path)
{
    const std::filesystem::path p(path);
    if (p.is_absolute() || config.base_dir.empty())
        return p;
    return config.base_dir / p;
}

void validate(const ExperimentConfig& c)
{
    auto fail = [](const std::string& field, const std::string& msg) {
        throw ConfigError("field " + field + ": " + msg);
    };
    if (c.antennas < 1 || c.antennas > 16)
        fail("channel.antennas", "must be between 1 and 16");
    if (!(c.sigma_delta_deg > 0.0))
        fail("channel.sigma_delta_deg", "must be positive");
    if (!(c.step_db > 0.0))
        fail("snr.step_db", "must be positive");
    if (!(c.stop_db >= c.start_db))
        fail("snr.stop_db", "must not be below start_db");
    if ((c.stop_db - c.start_db) / c.step_db > 1e5)
        fail("snr.step_db", "too many sweep points");
    if (c.kinds.empty())
        fail("bounds.kinds", "at least one kind is required");
    if (c.grid.xi_points < 3)
        fail("grid.xi_points", "must be at least 3");
    if (!(c.grid.alpha_min > 0.0))
        fail("grid.alpha_min", "must be positive");
    if (!(c.grid.alpha_max_per_antenna * c.antennas > c.grid.alpha_min))
        fail("grid.alpha_max_per_antenna", "bracket is empty");
    if (!(c.grid.alpha_rel_width > 0.0 && c.grid.alpha_rel_width < 1.0))
        fail("grid.alpha_rel_width", "must lie in (0, 1)");
    if (!(c.grid.xi_rel_tol > 0.0 && c.grid.xi_rel_tol < 1.0))
        fail("grid.xi_rel_tol", "must lie in (0, 1)");
    if (c.grid.max_iterations < 10)
        fail("grid.max_iterations", "must be at least 10");
    if (c.mc.n_samples < 100)
        fail("montecarlo.n_samples", "must be at least 100");
    if (c.mc.block_length < 200)
        fail("montecarlo.block_length", "must be at least 200");
    if (c.mc.n_blocks < 1)
        fail("montecarlo.n_blocks", "must be at least 1");
    if (c.mc.q_levels < 2 || c.mc.q_levels > 65535)
        fail("montecarlo.q_levels", "must be between 2 and 65535");
    if (c.mc.past_window < 1)
        fail("montecarlo.past_window", "must be at least 1");
    try {
        channel::Constellation::from_name(c.constellation);
    } catch (const Error& e) {
        fail("montecarlo.constellation", e.what());
    }
    if (c.threads < 0)
        fail("run.threads", "must be nonnegative");
    if (c.output_csv.empty())
        fail("run.output_csv", "must not be empty");
    if (c.h_matrix.empty())
        fail("channel.h_matrix", "must be 'unitary' or a file path");
    if (c.h_matrix != "unitary") {
        channel::CMatrix h;
        try {
            h = channel::load_matrix(resolve(c, c.h_matrix).string());
        } catch (const Error& e) {
            fail("channel.h_matrix", e.what());
        }
        const auto n = static_cast<std::size_t>(c.antennas);
        if (h.rows() != n || h.cols() != n)
            fail("channel.h_matrix", "matrix must be " + std::to_string(n) + " x " + std::to_string(n));
        channel::EigenBounds eb{};
        try {
            eb = channel::singular_value_bounds(h);
        } catch (const Error& e) {
            fail("channel.h_matrix", e.what());
        }
        const bool unitary = std::abs(eb.lambda_min - 1.0) < 1e-9 && std::abs(eb.lambda_max - 1.0) < 1e-9;
        if (!unitary)
            for (const auto k : c.kinds)
                if (requires_unitary(k))
                    fail("bounds.kinds", "kind " + std::string(bounds::kind_name(k))
                                             + " needs a unitary channel; use nonunitary_upper/nonunitary_lower");
    }
}

channel::ChannelParams channel_params(const ExperimentConfig& config, double snr_db)
{
    channel::ChannelParams p;
    p.antennas = config.antennas;
    p.sigma_delta = config.sigma_delta_deg * mathcore::kPi / 180.0;
    p.snr = bounds::db_to_linear(snr_db);
    if (config.h_matrix != "unitary")
        p.h_matrix = channel::load_matrix(resolve(config, config.h_matrix).string());
    return p;
}

std::vector<double> snr_points(const ExperimentConfig& config)
{
    const auto n = static_cast<std::size_t>(std::floor((config.stop_db - config.start_db) / config.step_db + 1e-9)) + 1;
    std::vector<double> pts(n);
    for (std::size_t i = 0; i < n; ++i)
        pts[i] = std::round((config.start_db + static_cast<double>(i) * config.step_db) * 1e9) / 1e9;
    return pts;
}

std::uint64_t task_seed(std::uint64_t master_seed, bounds::Kind kind, double snr_db)
{
    const std::string tag = std::string(bounds::kind_name(kind)) + "@" + to_text(snr_db);
    return derive_seed(master_seed, hash_bytes(tag));
}

std::string row_key(const ExperimentConfig& c, bounds::Kind kind, double snr_db)
{
    using bounds::Kind;
    std::ostringstream s;
    s << "phasecap-row-v1;kind=" << bounds::kind_name(kind) << ";snr=" << to_text(snr_db)
      << ";M=" << c.antennas << ";sigma=" << to_text(c.sigma_delta_deg) << ";H=";
    if (c.h_matrix == "unitary")
        s << "unitary";
    else
        channel::write_matrix(s, channel::load_matrix(resolve(c, c.h_matrix).string()));
    const bool optimizes = bounds::kind_optimizes(kind);
    const bool memory = kind == Kind::upper || kind == Kind::nonunitary_upper;
    const bool qam = kind == Kind::qam_lower || kind == Kind::nonunitary_lower;
    if (optimizes)
        s << ";grid=" << c.grid.xi_points << "," << to_text(c.grid.alpha_min) << ","
          << to_text(c.grid.alpha_max_per_antenna) << "," << to_text(c.grid.alpha_rel_width) << ","
          << to_text(c.grid.xi_rel_tol) << "," << c.grid.max_iterations;
    if (memory)
        s << ";mem=" << c.mc.block_length << "," << c.mc.n_blocks << "," << c.mc.q_levels << "," << c.mc.past_window;
    if (kind == Kind::upper_simplified)
        s << ";n=" << c.mc.n_samples;
    if (qam)
        s << ";qam=" << c.mc.block_length << "," << c.mc.n_blocks << "," << c.mc.q_levels << "," << c.constellation
          << "," << (c.normalization == channel::Normalization::peak ? "peak" : "average");
    if (memory || qam || kind == Kind::upper_simplified)
        s << ";seed=" << task_seed(c.master_seed, kind, snr_db);
    const std::string text = s.str();
    char buf[40];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(hash_bytes(text)),
                  static_cast<unsigned long long>(hash_bytes(text, 0x9e3779b97f4a7c15ULL)));
    return buf;
}

} // namespace phasecap::sweep
