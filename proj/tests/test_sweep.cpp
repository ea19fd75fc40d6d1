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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

using namespace phasecap;
using namespace phasecap::sweep;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir()
    {
        std::random_device rd;
        path = fs::temp_directory_path() / ("phasecap_test_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const char* kSmall = R"(# small sweep
[channel]
antennas = 1
sigma_delta_deg = 6

[snr]
start_db = 10
stop_db = 14
step_db = 2

[bounds]
kinds = asymptotic, memoryless_plus_corr, U_s

[grid]
xi_points = 12
alpha_rel_width = 1e-3
xi_rel_tol = 1e-2

[montecarlo]
n_samples = 500

[run]
master_seed = 7
threads = 1
output_csv = out.csv
cache = out.cache
)";

std::string error_text(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("config text round trip")
{
    const auto cfg = parse_config(kSmall);
    CHECK(cfg.antennas == 1);
    CHECK(cfg.kinds.size() == 3);
    CHECK(cfg.kinds[0] == bounds::Kind::asymptotic);
    CHECK(cfg.grid.xi_points == 12);
    CHECK(cfg.mc.n_samples == 500);
    CHECK(cfg.master_seed == 7u);
    CHECK(cfg.cache == "out.cache");
    const auto text = canonical_text(cfg);
    const auto again = parse_config(text);
    CHECK(again == cfg);
    CHECK(canonical_text(again) == text);
    CHECK(snr_points(cfg) == std::vector<double>{10.0, 12.0, 14.0});
}

TEST_CASE("config errors name the line and field")
{
    CHECK(error_text("[channel]\nantenna = 2\n").find("line 2") != std::string::npos);
    CHECK(error_text("[channel]\nantenna = 2\n").find("channel.antenna") != std::string::npos);
    CHECK(error_text("[channel]\nantennas = two\n").find("channel.antennas") != std::string::npos);
    CHECK(error_text("[nope]\n").find("line 1") != std::string::npos);
    CHECK(error_text("antennas = 2\n").find("line 1") != std::string::npos);
    CHECK(error_text("[channel]\nantennas = 2\nantennas = 3\n").find("line 3") != std::string::npos);
    CHECK(error_text("[bounds]\nkinds = U, V\n").find("bounds.kinds") != std::string::npos);

    auto cfg = parse_config(kSmall);
    CHECK_NOTHROW(validate(cfg));
    set_field(cfg, "channel", "antennas", "0");
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    CHECK_THROWS_AS(set_field(cfg, "channel", "bogus", "1"), ConfigError);
    cfg = parse_config(kSmall);
    set_field(cfg, "snr", "stop_db", "5");
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = parse_config(kSmall);
    set_field(cfg, "montecarlo", "constellation", "QAM-7");
    CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("non-unitary channel files")
{
    TempDir dir;
    {
        std::ofstream(dir.path / "h.txt") << "1.4142135623730951 0\n0 0.7071067811865476\n";
        std::ofstream(dir.path / "bad.txt") << "1 2\n2 4\n";
    }
    auto cfg = parse_config(kSmall, dir.path);
    cfg.antennas = 2;
    cfg.h_matrix = "h.txt";
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg.kinds = {bounds::Kind::nonunitary_upper, bounds::Kind::nonunitary_lower};
    CHECK_NOTHROW(validate(cfg));
    CHECK(resolve(cfg, "h.txt") == dir.path / "h.txt");
    cfg.h_matrix = "bad.txt";
    CHECK_THROWS(validate(cfg));
    cfg.h_matrix = "missing.txt";
    CHECK_THROWS(validate(cfg));
}

TEST_CASE("seeds are a pure function of their inputs")
{
    const auto a = task_seed(7, bounds::Kind::upper, 12.0);
    CHECK(a == task_seed(7, bounds::Kind::upper, 12.0));
    CHECK(a != task_seed(8, bounds::Kind::upper, 12.0));
    CHECK(a != task_seed(7, bounds::Kind::upper_simplified, 12.0));
    CHECK(a != task_seed(7, bounds::Kind::upper, 14.0));
}

TEST_CASE("row keys track only relevant inputs")
{
    const auto cfg = parse_config(kSmall);
    auto other = cfg;
    other.mc.n_samples = 600;
    CHECK(row_key(cfg, bounds::Kind::upper_simplified, 10) != row_key(other, bounds::Kind::upper_simplified, 10));
    CHECK(row_key(cfg, bounds::Kind::asymptotic, 10) == row_key(other, bounds::Kind::asymptotic, 10));
    CHECK(row_key(cfg, bounds::Kind::memoryless_plus_corr, 10)
          == row_key(other, bounds::Kind::memoryless_plus_corr, 10));
    other = cfg;
    other.sigma_delta_deg = 7;
    CHECK(row_key(cfg, bounds::Kind::asymptotic, 10) != row_key(other, bounds::Kind::asymptotic, 10));
    other = cfg;
    other.output_csv = "elsewhere.csv";
    other.threads = 3;
    CHECK(row_key(cfg, bounds::Kind::upper_simplified, 10) == row_key(other, bounds::Kind::upper_simplified, 10));
}

TEST_CASE("sweep output is reproducible and cached")
{
    TempDir dir;
    auto cfg = parse_config(kSmall, dir.path);
    const auto first = run_sweep(cfg);
    CHECK(first.rows == 9);
    CHECK(first.computed == 9);
    CHECK(first.cached == 0);
    CHECK(first.failed == 0);
    const auto csv = slurp(dir.path / "out.csv");
    CHECK(csv.rfind(std::string(kCsvHeader), 0) == 0);

    const auto second = run_sweep(cfg);
    CHECK(second.cached == 9);
    CHECK(second.computed == 0);
    CHECK(slurp(dir.path / "out.csv") == csv);

    // Without a cache, two threads give the same bytes.
    auto fresh = cfg;
    fresh.cache.clear();
    fresh.threads = 2;
    fresh.output_csv = "fresh.csv";
    run_sweep(fresh);
    CHECK(slurp(dir.path / "fresh.csv") == csv);

    // Only the rows that depend on the sample count are recomputed.
    cfg.mc.n_samples = 700;
    const auto third = run_sweep(cfg);
    CHECK(third.computed == 3);
    CHECK(third.cached == 6);
}

TEST_CASE("asymptotic sweep is increasing")
{
    TempDir dir;
    auto cfg = parse_config(kSmall, dir.path);
    cfg.kinds = {bounds::Kind::asymptotic};
    cfg.start_db = 0;
    cfg.stop_db = 30;
    cfg.cache.clear();
    CHECK(run_sweep(cfg).rows == 16);
    std::ifstream in(dir.path / "out.csv");
    const auto table = read_csv(in);
    REQUIRE(table.rows.size() == 16);
    const auto col = table.column("value_bits");
    for (std::size_t i = 1; i < table.rows.size(); ++i)
        CHECK(std::stod(table.rows[i][col]) > std::stod(table.rows[i - 1][col]));
}

TEST_CASE("failed rows are reported and kept out of the cache")
{
    TempDir dir;
    auto cfg = parse_config(kSmall, dir.path);
    cfg.kinds = {bounds::Kind::asymptotic, bounds::Kind::memoryless_plus_corr};
    cfg.grid.max_iterations = 10;
    std::ostringstream log;
    const auto s = run_sweep(cfg, &log);
    CHECK(s.failed == 3);
    CHECK(s.computed == 3);
    CHECK(log.str().find("FAILED") != std::string::npos);
    const auto csv = slurp(dir.path / "out.csv");
    CHECK(csv.find(",failed,") != std::string::npos);
    const auto again = run_sweep(cfg);
    CHECK(again.cached == 3);
    CHECK(again.failed == 3);
}

TEST_CASE("csv formatting")
{
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(2.0) == "2");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
    std::istringstream in("a,b\n1,2\n3,4\n");
    const auto t = read_csv(in);
    CHECK(t.header == std::vector<std::string>{"a", "b"});
    CHECK(t.rows.size() == 2);
    CHECK(t.column("b") == 1);
    CHECK_THROWS_AS(t.column("c"), SchemaError);
}

TEST_CASE("plot scripts")
{
    TempDir dir;
    const std::string csv = std::string(kCsvHeader) + "\n10,U,2.9,0.01,,,,,0\n12,U,3.5,0.01,,,,,0\n"
                            + "10,asymptotic,3.9,0,,,,,0\n";
    {
        std::ofstream(dir.path / "r.csv") << csv;
        std::ofstream(dir.path / "empty.csv") << "";
        std::ofstream(dir.path / "header.csv") << kCsvHeader << "\n";
    }
    const auto out = emit_plot_script(dir.path / "r.csv", "fig1");
    CHECK(out == dir.path / "r_fig1.gp");
    const auto script = slurp(out);
    CHECK(script.find("title 'U'") != std::string::npos);
    CHECK(script.find("title 'asymptotic'") != std::string::npos);
    std::size_t blocks = 0;
    for (std::size_t pos = 0; (pos = script.find("<< EOD", pos)) != std::string::npos; ++pos)
        ++blocks;
    CHECK(blocks == 2);

    CHECK_THROWS_AS(emit_plot_script(dir.path / "empty.csv", "x"), SchemaError);
    CHECK_FALSE(fs::exists(dir.path / "empty_x.gp"));
    CHECK_THROWS_AS(emit_plot_script(dir.path / "header.csv", "x"), SchemaError);
    CHECK_THROWS_AS(emit_plot_script(dir.path / "r.csv", "../bad"), ConfigError);
    CHECK_THROWS_AS(emit_plot_script(dir.path / "missing.csv", "x"), IoError);
    const auto custom = emit_plot_script(dir.path / "r.csv", "fig1", dir.path / "custom.gp");
    CHECK(slurp(custom) == script);
}
