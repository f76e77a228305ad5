#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "decolab/errors.hpp"

namespace decolab::runner {

using json = nlohmann::json;

enum class Experiment { spin_fidelity, hmh_check, dicke_analytic, dicke_oracle, scaling, periodogram, rng_demo };

inline const std::map<std::string, Experiment>& experiment_names() {
    static const std::map<std::string, Experiment> names{
        {"spin-fidelity", Experiment::spin_fidelity}, {"hmh-check", Experiment::hmh_check},
        {"dicke-analytic", Experiment::dicke_analytic}, {"dicke-oracle", Experiment::dicke_oracle},
        {"scaling", Experiment::scaling},             {"periodogram", Experiment::periodogram},
        {"rng-demo", Experiment::rng_demo}};
    return names;
}

inline std::string to_string(Experiment e) {
    for (const auto& [name, value] : experiment_names()) {
        if (value == e) return name;
    }
    return "unknown";
}

enum class ParamType { integer, number, boolean, string, digits, number_list, integer_list, object };

struct ParamSpec {
    ParamType type;
    json fallback;  // null: required unless optional
    bool optional{false};
};

using Schema = std::map<std::string, ParamSpec>;

namespace schema_detail {

inline ParamSpec req(ParamType t) { return {t, nullptr, false}; }
inline ParamSpec def(ParamType t, json v) { return {t, std::move(v), false}; }
inline ParamSpec opt(ParamType t) { return {t, nullptr, true}; }

inline void add_grid(Schema& s) {
    s["t_min"] = def(ParamType::number, 0.0);
    s["t_max"] = opt(ParamType::number);
    s["t_max_periods"] = opt(ParamType::number);
    s["points"] = def(ParamType::integer, 200);
    s["times"] = opt(ParamType::number_list);
}

inline void add_spin_couplings(Schema& s) {
    s["coupling_zz"] = def(ParamType::number, 1.0);
    s["coupling_xx"] = def(ParamType::number, 0.0);
    s["coupling_yy"] = def(ParamType::number, 0.0);
    s["field_x"] = def(ParamType::number, 1.0);
    s["field_z"] = def(ParamType::number, 0.0);
    s["boundary"] = def(ParamType::string, "open");
    s["state"] = opt(ParamType::object);
}

inline void add_dicke(Schema& s) {
    s["n_atoms"] = req(ParamType::integer);
    s["coupling"] = req(ParamType::number);
    s["mode_freq"] = def(ParamType::number, 1.0);
    s["level_split"] = def(ParamType::number, 0.0);
    s["state"] = def(ParamType::object, json{{"fock", 0}});
    s["tol"] = def(ParamType::number, 1e-12);
}

inline void add_sine(Schema& s) {
    s["freq_hz"] = req(ParamType::digits);
    s["freq_den"] = def(ParamType::digits, "1");
    s["sample_rate"] = def(ParamType::integer, 1000000);
    s["count"] = req(ParamType::integer);
    s["phase0_num"] = def(ParamType::integer, 0);
    s["phase0_den"] = def(ParamType::integer, 1);
}

}  // namespace schema_detail

inline Schema parameter_schema(Experiment e) {
    using namespace schema_detail;
    Schema s;
    switch (e) {
        case Experiment::spin_fidelity:
            s["n_sites"] = req(ParamType::integer);
            add_spin_couplings(s);
            s["t_max"] = opt(ParamType::number);
            s["points"] = def(ParamType::integer, 200);
            s["times"] = opt(ParamType::number_list);
            s["tol"] = def(ParamType::number, 1e-12);
            s["tau_max"] = opt(ParamType::number);
            break;
        case Experiment::hmh_check:
            add_spin_couplings(s);
            s["n_values"] = req(ParamType::integer_list);
            break;
        case Experiment::dicke_analytic:
            add_dicke(s);
            add_grid(s);
            s["oracle"] = def(ParamType::boolean, false);
            break;
        case Experiment::dicke_oracle:
            add_dicke(s);
            add_grid(s);
            s["full_dicke"] = def(ParamType::boolean, false);
            break;
        case Experiment::scaling:
            s["system"] = req(ParamType::string);
            s["n_values"] = req(ParamType::integer_list);
            // dicke
            s["coupling"] = opt(ParamType::number);
            s["mode_freq"] = def(ParamType::number, 1.0);
            s["fock"] = def(ParamType::integer, 0);
            s["t_max"] = opt(ParamType::number);
            s["recurrence_periods"] = def(ParamType::integer, 3);
            s["recurrence_points_per_period"] = def(ParamType::integer, 4000);
            // spin
            add_spin_couplings(s);
            s["tau_window"] = def(ParamType::number, 0.5);
            s["points"] = def(ParamType::integer, 200);
            s["tol"] = def(ParamType::number, 1e-12);
            break;
        case Experiment::periodogram:
            add_sine(s);
            s["window"] = def(ParamType::string, "none");
            s["mode"] = def(ParamType::string, "exact");
            break;
        case Experiment::rng_demo:
            add_sine(s);
            s["bins"] = def(ParamType::integer, 64);
            s["significance"] = def(ParamType::number, 0.001);
            break;
    }
    return s;
}

struct ExperimentConfig {
    Experiment experiment{Experiment::spin_fidelity};
    json parameters = json::object();  // validated, defaults filled in
    std::filesystem::path output_dir;
    std::int64_t seed{0};  // reserved; every pipeline is deterministic

    json to_json() const {
        return json{{"experiment", to_string(experiment)},
                    {"parameters", parameters},
                    {"output_dir", output_dir.string()},
                    {"seed", seed}};
    }
};

namespace detail {

inline bool matches(ParamType t, const json& v) {
    switch (t) {
        case ParamType::integer: return v.is_number_integer();
        case ParamType::number: return v.is_number();
        case ParamType::boolean: return v.is_boolean();
        case ParamType::string: return v.is_string();
        case ParamType::digits:
            return v.is_number_unsigned() ||
                   (v.is_number_integer() && v.get<std::int64_t>() >= 0) ||
                   (v.is_string() && !v.get<std::string>().empty() &&
                    v.get<std::string>().find_first_not_of("0123456789") == std::string::npos);
        case ParamType::number_list:
            if (!v.is_array()) return false;
            for (const auto& x : v) {
                if (!x.is_number()) return false;
            }
            return true;
        case ParamType::integer_list:
            if (!v.is_array()) return false;
            for (const auto& x : v) {
                if (!x.is_number_integer()) return false;
            }
            return true;
        case ParamType::object: return v.is_object();
    }
    return false;
}

inline const char* type_name(ParamType t) {
    switch (t) {
        case ParamType::integer: return "integer";
        case ParamType::number: return "number";
        case ParamType::boolean: return "boolean";
        case ParamType::string: return "string";
        case ParamType::digits: return "non-negative integer (or digit string)";
        case ParamType::number_list: return "array of numbers";
        case ParamType::integer_list: return "array of integers";
        case ParamType::object: return "object";
    }
    return "?";
}

}  // namespace detail

inline json validate_parameters(Experiment e, const json& params) {
    if (!params.is_object()) throw ValidationError("config: 'parameters' must be an object");
    const Schema schema = parameter_schema(e);
    for (const auto& [key, value] : params.items()) {
        if (!schema.count(key)) {
            throw ValidationError("config: unknown parameter '" + key + "' for experiment " +
                                  to_string(e));
        }
    }
    json out = json::object();
    for (const auto& [key, spec] : schema) {
        if (params.contains(key)) {
            const json& v = params.at(key);
            if (!detail::matches(spec.type, v)) {
                throw ValidationError("config: parameter '" + key + "' must be " +
                                      detail::type_name(spec.type));
            }
            out[key] = v;
        } else if (!spec.fallback.is_null()) {
            out[key] = spec.fallback;
        } else if (!spec.optional) {
            throw ValidationError("config: missing required parameter '" + key + "'");
        }
    }
    return out;
}

inline Experiment parse_experiment(const json& v) {
    if (!v.is_string()) throw ValidationError("config: 'experiment' must be a string");
    const auto& names = experiment_names();
    const auto it = names.find(v.get<std::string>());
    if (it == names.end()) {
        throw ValidationError("config: unknown experiment '" + v.get<std::string>() + "'");
    }
    return it->second;
}

// "key=value": value is read as JSON when it parses, else as a plain string.
// Keys experiment/output_dir/seed address the document; anything else is a
// parameter, with dots descending into nested objects (state.fock=2).
inline void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ValidationError("--set expects key=value, got '" + assignment + "'");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    if (key == "experiment" || key == "output_dir" || key == "seed") {
        doc[key] = value;
        return;
    }
    json* node = &doc["parameters"];
    std::string_view rest = key;
    for (;;) {
        const auto dot = rest.find('.');
        const std::string part(rest.substr(0, dot));
        if (part.empty()) throw ValidationError("--set: malformed key '" + key + "'");
        if (dot == std::string_view::npos) {
            (*node)[part] = value;
            return;
        }
        node = &(*node)[part];
        if (!node->is_null() && !node->is_object()) {
            throw ValidationError("--set: '" + part + "' is not an object");
        }
        rest = rest.substr(dot + 1);
    }
}

inline ExperimentConfig parse_config(json doc, const std::vector<std::string>& overrides = {},
                                     const std::optional<std::filesystem::path>& out_dir = {}) {
    if (!doc.is_object()) throw ValidationError("config: document must be a JSON object");
    for (const auto& o : overrides) apply_override(doc, o);
    for (const auto& [key, value] : doc.items()) {
        if (key != "experiment" && key != "parameters" && key != "output_dir" && key != "seed") {
            throw ValidationError("config: unknown top-level key '" + key + "'");
        }
    }
    if (!doc.contains("experiment")) throw ValidationError("config: missing 'experiment'");
    ExperimentConfig cfg;
    cfg.experiment = parse_experiment(doc["experiment"]);
    cfg.parameters =
        validate_parameters(cfg.experiment, doc.contains("parameters") ? doc["parameters"] : json::object());
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_integer()) throw ValidationError("config: 'seed' must be an integer");
        cfg.seed = doc["seed"].get<std::int64_t>();
    }
    if (out_dir) {
        cfg.output_dir = *out_dir;
    } else if (doc.contains("output_dir")) {
        if (!doc["output_dir"].is_string()) throw ValidationError("config: 'output_dir' must be a string");
        cfg.output_dir = doc["output_dir"].get<std::string>();
    } else {
        throw ValidationError("config: no output directory (use --out or 'output_dir')");
    }
    return cfg;
}

inline json load_json_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot open " + path.string());
    json doc = json::parse(is, nullptr, false);
    if (doc.is_discarded()) throw ValidationError(path.string() + ": not valid JSON");
    return doc;
}

}  // namespace decolab::runner
