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
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace phasecap::sweep {

namespace {

std::vector<std::string> split_csv(std::string line)
{
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    std::vector<std::string> out;
    std::string_view rest(line);
    while (true) {
        const auto pos = rest.find(',');
        out.emplace_back(rest.substr(0, pos));
        if (pos == std::string_view::npos)
            break;
        rest.remove_prefix(pos + 1);
    }
    return out;
}

bool parse_number(const std::string& s, double& out)
{
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return !s.empty() && ec == std::errc{} && ptr == s.data() + s.size();
}

bool valid_figure_id(const std::string& id)
{
    return !id.empty() && id.size() <= 64 && std::all_of(id.begin(), id.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    });
}

} // namespace

std::size_t CsvTable::column(std::string_view name) const
{
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
        throw SchemaError("CSV is missing column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(std::istream& in)
{
    CsvTable table;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r")
            continue;
        auto fields = split_csv(line);
        if (table.header.empty()) {
            table.header = std::move(fields);
            continue;
        }
        if (fields.size() != table.header.size())
            throw SchemaError("CSV row " + std::to_string(table.rows.size() + 1) + " has " +
                              std::to_string(fields.size()) + " fields, header has " +
                              std::to_string(table.header.size()));
        table.rows.push_back(std::move(fields));
    }
    return table;
}

std::string plot_script(const CsvTable& table, const std::string& figure_id)
{
    if (table.header.empty())
        throw SchemaError("CSV is empty");
    std::string_view header = kCsvHeader;
    while (!header.empty()) {
        const auto pos = header.find(',');
        table.column(header.substr(0, pos));
        if (pos == std::string_view::npos)
            break;
        header.remove_prefix(pos + 1);
    }
    const auto c_snr = table.column("snr_db");
    const auto c_kind = table.column("kind");
    const auto c_value = table.column("value_bits");
    const auto c_err = table.column("std_error_bits");

    std::vector<std::string> order;
    std::map<std::string, std::vector<std::array<double, 3>>> series;
    for (const auto& row : table.rows) {
        const auto& kind = row[c_kind];
        if (kind == "failed")
            continue;
        if (!bounds::parse_kind(kind))
            throw SchemaError("unknown kind '" + kind + "' in CSV");
        std::array<double, 3> p{};
        if (!parse_number(row[c_snr], p[0]) || !parse_number(row[c_value], p[1]))
            throw SchemaError("non-numeric snr_db or value_bits for kind '" + kind + "'");
        if (!parse_number(row[c_err], p[2]))
            p[2] = 0.0;
        if (!series.count(kind))
            order.push_back(kind);
        series[kind].push_back(p);
    }
    if (order.empty())
        throw SchemaError("CSV has no data rows");

    std::ostringstream s;
    s << "# " << figure_id << ": rate versus SNR, one series per kind\n";
    s << "set terminal pngcairo size 900,600 noenhanced\n";
    s << "set output '" << figure_id << ".png'\n";
    s << "set title '" << figure_id << "'\n";
    s << "set xlabel 'SNR [dB]'\n";
    s << "set ylabel 'rate [bit/channel use]'\n";
    s << "set key top left\n";
    s << "set grid\n\n";
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto& pts = series[order[i]];
        std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a[0] < b[0]; });
        s << "$series" << i << " << EOD\n";
        for (const auto& p : pts)
            s << format_number(p[0]) << ' ' << format_number(p[1]) << ' ' << format_number(p[2]) << '\n';
        s << "EOD\n";
    }
    s << "\nplot";
    for (std::size_t i = 0; i < order.size(); ++i)
        s << (i ? ", \\\n    " : " ") << "$series" << i << " using 1:2 with linespoints title '" << order[i] << "'";
    s << "\n";
    return s.str();
}

std::filesystem::path emit_plot_script(const std::filesystem::path& csv_path, const std::string& figure_id,
                                       const std::filesystem::path& out_path)
{
    if (!valid_figure_id(figure_id))
        throw ConfigError("figure id must be 1-64 characters from [A-Za-z0-9_.-]");
    std::ifstream in(csv_path);
    if (!in)
        throw IoError("cannot open " + csv_path.string());
    const auto script = plot_script(read_csv(in), figure_id);
    auto target = out_path;
    if (target.empty()) {
        target = csv_path;
        target.replace_filename(csv_path.stem().string() + "_" + figure_id + ".gp");
    }
    write_file_atomic(target, script);
    return target;
}

} // namespace phasecap::sweep
