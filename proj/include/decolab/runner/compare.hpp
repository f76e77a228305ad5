#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "decolab/errors.hpp"
#include "decolab/io/csv.hpp"
#include "decolab/runner/config.hpp"

namespace decolab::runner {

// ---- schemas ----------------------------------------------------------------

struct ArtifactSchema {
    std::vector<std::vector<std::string>> headers;  // CSV: accepted header rows
    std::vector<std::string> json_keys;             // JSON: required keys
    bool is_csv() const { return !headers.empty(); }
};

inline std::map<std::string, ArtifactSchema> artifact_schemas(Experiment e) {
    switch (e) {
        case Experiment::spin_fidelity:
            return {{"fidelity.csv", {{{"t", "F"}}, {}}},
                    {"report.json", {{}, {"label", "n_sites", "mean", "variance", "sigma", "points"}}}};
        case Experiment::hmh_check:
            return {{"hmh.json", {{}, {"n_values", "sigma_sq", "c_lower", "local_bound", "passed"}}}};
        case Experiment::dicke_analytic:
            return {{"fidelity.csv",
                     {{{"t", "F_analytic", "F_gaussian"}, {"t", "F_analytic", "F_gaussian", "F_oracle"}}, {}}},
                    {"report.json", {{}, {"label", "sigma_effective", "variance_effective", "sigma_formula"}}}};
        case Experiment::dicke_oracle:
            return {{"fidelity.csv", {{{"t", "F_oracle"}, {"t", "F_oracle", "F_full_dicke"}}, {}}},
                    {"report.json", {{}, {"label", "n_max", "doublings", "variance_effective"}}}};
        case Experiment::scaling:
            return {{"scaling.json", {{}, {"n_values", "sigma_fit", "exponent", "exponent_stderr", "r_squared"}}},
                    {"peaks.csv", {{{"n", "k", "t", "height", "width"}}, {}}}};
        case Experiment::periodogram:
            return {{"samples.csv", {{{"index", "sample"}}, {}}},
                    {"periodogram.csv", {{{"freq_hz", "power"}}, {}}},
                    {"report.json", {{}, {"mode", "peak_freq_hz", "peak_power", "median_power"}}}};
        case Experiment::rng_demo:
            return {{"uniform.csv", {{{"index", "u"}}, {}}},
                    {"uniformity.json", {{}, {"chi2", "dof", "p_value", "bins"}}}};
    }
    return {};
}

struct Manifest {
    std::filesystem::path path;
    Experiment experiment{};
    std::vector<std::string> artifacts;
    json doc;

    std::filesystem::path dir() const { return path.parent_path(); }
};

inline Manifest load_manifest(const std::filesystem::path& path) {
    std::filesystem::path p = path;
    if (std::filesystem::is_directory(p)) p /= "manifest.json";
    Manifest m;
    m.path = p;
    m.doc = load_json_file(p);
    const json& d = m.doc;
    for (const char* key : {"status", "experiment", "config", "artifacts", "versions", "wall_time_s"}) {
        if (!d.contains(key)) throw ValidationError(p.string() + ": manifest lacks '" + key + "'");
    }
    if (d["status"] != "ok") throw ValidationError(p.string() + ": manifest status is not ok");
    m.experiment = parse_experiment(d["experiment"]);
    if (!d["artifacts"].is_array()) throw ValidationError(p.string() + ": 'artifacts' must be an array");
    for (const auto& a : d["artifacts"]) {
        if (!a.is_string()) throw ValidationError(p.string() + ": artifact names must be strings");
        m.artifacts.push_back(a.get<std::string>());
    }
    return m;
}

// Checks every artifact listed in the manifest against its schema: CSV
// headers exactly as declared with all cells numeric, JSON objects with their
// required keys. Returns the number of files checked.
inline std::size_t validate_artifacts(const std::filesystem::path& manifest_path) {
    const Manifest m = load_manifest(manifest_path);
    const auto schemas = artifact_schemas(m.experiment);
    std::size_t checked = 0;
    for (const auto& name : m.artifacts) {
        const auto it = schemas.find(name);
        if (it == schemas.end()) {
            throw ValidationError(name + ": not a declared artifact of " + to_string(m.experiment));
        }
        const ArtifactSchema& s = it->second;
        const auto file = m.dir() / name;
        if (s.is_csv()) {
            const io::CsvTable t = io::read_csv(file);
            if (std::find(s.headers.begin(), s.headers.end(), t.header) == s.headers.end()) {
                throw ValidationError(name + ": unexpected CSV header");
            }
        } else {
            const json j = load_json_file(file);
            if (!j.is_object()) throw ValidationError(name + ": expected a JSON object");
            for (const auto& key : s.json_keys) {
                if (!j.contains(key)) throw ValidationError(name + ": missing key '" + key + "'");
            }
        }
        ++checked;
    }
    return checked;
}

// ---- compare ----------------------------------------------------------------

struct ColumnDiff {
    std::string column_a;
    std::string column_b;
    double max_abs_diff{0.0};
};

struct FileDiff {
    std::string file;
    std::vector<ColumnDiff> columns;
    double max_abs_diff{0.0};
};

struct CompareReport {
    double tolerance{0.0};
    std::vector<FileDiff> files;
    double max_abs_diff{0.0};
    bool passed{false};

    json to_json() const {
        json f = json::array();
        for (const auto& fd : files) {
            json cols = json::array();
            for (const auto& c : fd.columns) {
                cols.push_back({{"column_a", c.column_a}, {"column_b", c.column_b}, {"max_abs_diff", c.max_abs_diff}});
            }
            f.push_back({{"file", fd.file}, {"columns", cols}, {"max_abs_diff", fd.max_abs_diff}});
        }
        return json{{"tolerance", tolerance}, {"files", f}, {"max_abs_diff", max_abs_diff}, {"passed", passed}};
    }
};

namespace detail {

// NaN matches NaN; any other non-finite mismatch is an infinite difference.
inline double cell_diff(double a, double b) {
    if (std::isnan(a) && std::isnan(b)) return 0.0;
    if (a == b) return 0.0;
    const double d = std::abs(a - b);
    return std::isnan(d) ? std::numeric_limits<double>::infinity() : d;
}

}  // namespace detail

// CSV artifacts present in both runs under the same file name are compared
// column by position after the first. The first column is the sampling grid
// and has to agree exactly; nothing is interpolated.
inline CompareReport compare(const std::filesystem::path& run_a, const std::filesystem::path& run_b,
                             double tolerance) {
    if (!(tolerance >= 0.0) || !std::isfinite(tolerance)) {
        throw ValidationError("compare: tolerance must be finite and >= 0");
    }
    const Manifest a = load_manifest(run_a);
    const Manifest b = load_manifest(run_b);
    CompareReport r;
    r.tolerance = tolerance;
    for (const auto& name : a.artifacts) {
        if (name.size() < 4 || name.substr(name.size() - 4) != ".csv") continue;
        if (std::find(b.artifacts.begin(), b.artifacts.end(), name) == b.artifacts.end()) continue;
        const io::CsvTable ta = io::read_csv(a.dir() / name);
        const io::CsvTable tb = io::read_csv(b.dir() / name);
        if (ta.rows.size() != tb.rows.size()) {
            throw ValidationError("compare: " + name + " has " + std::to_string(ta.rows.size()) +
                                  " rows in one run and " + std::to_string(tb.rows.size()) + " in the other");
        }
        if (ta.columns() < 2 || tb.columns() < 2) {
            throw ValidationError("compare: " + name + " has no value columns");
        }
        for (std::size_t i = 0; i < ta.rows.size(); ++i) {
            if (detail::cell_diff(ta.rows[i][0], tb.rows[i][0]) != 0.0) {
                throw ValidationError("compare: " + name + " grids differ at row " + std::to_string(i + 1) +
                                      " (" + io::format_double(ta.rows[i][0]) + " vs " +
                                      io::format_double(tb.rows[i][0]) + "); no interpolation is done");
            }
        }
        FileDiff fd;
        fd.file = name;
        const std::size_t cols = std::min(ta.columns(), tb.columns());
        for (std::size_t j = 1; j < cols; ++j) {
            ColumnDiff cd{ta.header[j], tb.header[j], 0.0};
            for (std::size_t i = 0; i < ta.rows.size(); ++i) {
                cd.max_abs_diff = std::max(cd.max_abs_diff, detail::cell_diff(ta.rows[i][j], tb.rows[i][j]));
            }
            fd.max_abs_diff = std::max(fd.max_abs_diff, cd.max_abs_diff);
            fd.columns.push_back(cd);
        }
        r.max_abs_diff = std::max(r.max_abs_diff, fd.max_abs_diff);
        r.files.push_back(std::move(fd));
    }
    if (r.files.empty()) throw ValidationError("compare: the runs share no CSV artifact");
    r.passed = r.max_abs_diff <= tolerance;
    return r;
}

}  // namespace decolab::runner
