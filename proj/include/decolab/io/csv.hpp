#pragma once

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "decolab/errors.hpp"

namespace decolab::io {

// Shortest decimal that round-trips to the same double; locale-independent.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ValidationError("csv: cannot parse number '" + std::string(s) + "'");
    }
    return v;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t columns() const { return header.size(); }

    void add_row(std::vector<double> row) {
        if (row.size() != header.size()) throw ValidationError("csv: row width mismatch");
        rows.push_back(std::move(row));
    }

    std::vector<double> column(std::size_t j) const {
        std::vector<double> c;
        c.reserve(rows.size());
        for (const auto& r : rows) c.push_back(r.at(j));
        return c;
    }
};

inline std::string to_csv_string(const CsvTable& t) {
    std::string out;
    for (std::size_t j = 0; j < t.header.size(); ++j) {
        if (j) out += ',';
        out += t.header[j];
    }
    out += '\n';
    for (const auto& r : t.rows) {
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (j) out += ',';
            out += format_double(r[j]);
        }
        out += '\n';
    }
    return out;
}

inline void write_csv(const std::filesystem::path& path, const CsvTable& t) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << to_csv_string(t);
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        parts.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

// Strict reader: header row, then rows of the same width holding numbers only.
inline CsvTable parse_csv(const std::string& text, const std::string& origin = "csv") {
    std::istringstream is(text);
    std::string line;
    CsvTable t;
    if (!std::getline(is, line) || line.empty()) {
        throw ValidationError(origin + ": missing header");
    }
    for (auto h : split(line, ',')) t.header.emplace_back(h);
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto parts = split(line, ',');
        if (parts.size() != t.header.size()) {
            throw ValidationError(origin + ": line " + std::to_string(lineno) + " has " +
                                  std::to_string(parts.size()) + " fields, expected " +
                                  std::to_string(t.header.size()));
        }
        std::vector<double> row;
        row.reserve(parts.size());
        for (auto p : parts) row.push_back(parse_double(p));
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ValidationError("cannot open " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_csv(ss.str(), path.string());
}

}  // namespace decolab::io
