/*
   Copyright 2026 The hyperell Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef HYPERELL_REPORT_HPP
#define HYPERELL_REPORT_HPP

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "arith.hpp"
#include "cache.hpp"

namespace hyperell {

enum class ReportFormat { Csv, Json };

inline ReportFormat parse_format(const std::string& s) {
    if (s == "csv") return ReportFormat::Csv;
    if (s == "json") return ReportFormat::Json;
    throw std::invalid_argument("unknown report format '" + s + "' (csv or json)");
}

/// Shortest round-trip decimal; fixed formatting keeps reports byte-stable.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// One table of results plus the parameters that produced it. Everything in
/// here is deterministic; run-specific data (time, workers) lives in Meta.
struct Report {
    std::string name;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;

    void add_row(std::vector<std::string> row) {
        if (row.size() != columns.size()) throw std::logic_error("report row has " + std::to_string(row.size()) + " cells, expected " + std::to_string(columns.size()));
        rows.push_back(std::move(row));
    }
};

struct ReportMeta {
    double wall_seconds = 0;
    unsigned workers = 1;
    std::string cache_dir;
};

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

namespace detail {

inline std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

inline std::string csv_line(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) line += (i ? "," : "") + csv_cell(cells[i]);
    return line + "\n";
}

}  // namespace detail

/// The first line carries the timestamp and run metadata; the rest is a pure
/// function of the report.
inline std::string render(const Report& r, ReportFormat fmt, const ReportMeta& meta) {
    std::ostringstream os;
    if (fmt == ReportFormat::Csv) {
        os << "# generated " << utc_timestamp() << " wall_seconds=" << format_double(meta.wall_seconds) << " workers=" << meta.workers << "\n";
        os << "# report " << r.name << "\n";
        for (const auto& [k, v] : r.params) os << "# " << k << "=" << v << "\n";
        for (const auto& n : r.notes) os << "# note: " << n << "\n";
        os << detail::csv_line(r.columns);
        for (const auto& row : r.rows) os << detail::csv_line(row);
        return os.str();
    }
    nlohmann::ordered_json m;
    m["generated"] = utc_timestamp();
    m["wall_seconds"] = meta.wall_seconds;
    m["workers"] = meta.workers;
    m["cache_dir"] = meta.cache_dir;
    nlohmann::ordered_json body;
    body["name"] = r.name;
    body["params"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.params) body["params"][k] = v;
    body["columns"] = r.columns;
    body["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < row.size(); ++i) obj[r.columns[i]] = row[i];
        body["rows"].push_back(std::move(obj));
    }
    body["notes"] = r.notes;
    os << "{\"meta\":" << m.dump() << ",\n\"report\":" << body.dump(2) << "}\n";
    return os.str();
}

/// Write to a file atomically, or to stdout when path is empty or "-".
inline void emit(const Report& r, ReportFormat fmt, const ReportMeta& meta, const std::string& path) {
    const std::string text = render(r, fmt, meta);
    if (path.empty() || path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    atomic_write(path, text);
}

/// Drop the first (run metadata) line.
inline std::string strip_meta_line(const std::string& text) {
    const auto nl = text.find('\n');
    return nl == std::string::npos ? std::string() : text.substr(nl + 1);
}

}  // namespace hyperell

#endif  // HYPERELL_REPORT_HPP
