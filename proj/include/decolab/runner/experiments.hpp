#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "decolab/core/dicke.hpp"
#include "decolab/core/fock_truncation.hpp"
#include "decolab/core/moments.hpp"
#include "decolab/core/propagator.hpp"
#include "decolab/core/spin_chain.hpp"
#include "decolab/dicke/analytic.hpp"
#include "decolab/errors.hpp"
#include "decolab/io/csv.hpp"
#include "decolab/numeric/interpolate.hpp"
#include "decolab/runner/config.hpp"
#include "decolab/runner/parallel.hpp"
#include "decolab/sampling/sampling.hpp"
#include "decolab/scaling/scaling.hpp"
#include "decolab/spin/fidelity.hpp"
#include "decolab/version.hpp"

namespace decolab::runner {

inline constexpr std::int64_t kMaxGridPoints = 10'000'000;
inline constexpr std::int64_t kMaxSamples = 100'000'000;

enum ExitCode : int { ok = 0, failure = 1, validation = 2, capacity = 3, convergence = 4 };

// ---- parameter readers ------------------------------------------------------

namespace detail {

inline double num(const json& p, const char* key) { return p.at(key).get<double>(); }
inline std::int64_t integer(const json& p, const char* key) { return p.at(key).get<std::int64_t>(); }

inline int small_int(const json& p, const char* key, int lo, int hi) {
    const std::int64_t v = integer(p, key);
    if (v < lo || v > hi) {
        throw ValidationError(std::string(key) + " must lie in [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "], got " + std::to_string(v));
    }
    return static_cast<int>(v);
}

inline std::string digits(const json& p, const char* key) {
    const json& v = p.at(key);
    return v.is_string() ? v.get<std::string>() : std::to_string(v.get<std::uint64_t>());
}

inline std::vector<int> ascending_n_values(const json& p) {
    std::vector<int> n;
    for (const auto& v : p.at("n_values")) {
        const auto x = v.get<std::int64_t>();
        if (x < 1 || x > 1'000'000) throw ValidationError("n_values entries must lie in [1, 10^6]");
        n.push_back(static_cast<int>(x));
    }
    if (n.empty()) throw ValidationError("n_values is empty");
    for (std::size_t i = 1; i < n.size(); ++i) {
        if (n[i] <= n[i - 1]) throw ValidationError("n_values must be strictly ascending");
    }
    return n;
}

inline Boundary parse_boundary(const std::string& s) {
    if (s == "open") return Boundary::open;
    if (s == "periodic") return Boundary::periodic;
    throw ValidationError("boundary must be 'open' or 'periodic', got '" + s + "'");
}

inline SpinChainSpec spin_spec(const json& p, int n_sites) {
    SpinChainSpec s;
    s.n_sites = n_sites;
    s.coupling_zz = num(p, "coupling_zz");
    s.coupling_xx = num(p, "coupling_xx");
    s.coupling_yy = num(p, "coupling_yy");
    s.field_x = num(p, "field_x");
    s.field_z = num(p, "field_z");
    s.boundary = parse_boundary(p.at("boundary").get<std::string>());
    s.validate();
    return s;
}

inline ProductStateRule spin_state(const json& p) {
    if (!p.contains("state")) return ProductStateRule::all_up();
    const json& s = p.at("state");
    for (const auto& [key, v] : s.items()) {
        if (key != "theta" && key != "phi" && key != "theta_odd" && key != "phi_odd") {
            throw ValidationError("state: unknown key '" + key + "'");
        }
        if (!v.is_number() || !std::isfinite(v.get<double>())) {
            throw ValidationError("state: '" + key + "' must be a finite number");
        }
    }
    const auto get = [&](const char* k, double d) { return s.contains(k) ? s.at(k).get<double>() : d; };
    ProductStateRule rule;
    rule.even = {get("theta", 0.0), get("phi", 0.0)};
    if (s.contains("theta_odd") || s.contains("phi_odd")) {
        rule.odd = BlochAngles{get("theta_odd", rule.even.theta), get("phi_odd", rule.even.phi)};
    }
    return rule;
}

inline DickeParams dicke_params(const json& p) {
    DickeParams d;
    d.n_atoms = small_int(p, "n_atoms", 1, 1'000'000);
    d.coupling = num(p, "coupling");
    d.mode_freq = num(p, "mode_freq");
    d.level_split = num(p, "level_split");
    d.n_max = 1;
    d.validate();
    return d;
}

// {"fock": n} | {"superposition": n} | {"coeffs": [c0, c1, ...]} with each c a
// number or a [re, im] pair.
struct ParsedRadiationState {
    RadiationState state;
    std::optional<double> sigma_formula;
};

inline ParsedRadiationState radiation_state(const json& s, const DickeParams& p) {
    if (s.size() != 1) {
        throw ValidationError("state: exactly one of 'fock', 'superposition', 'coeffs' expected");
    }
    const auto& [key, v] = *s.items().begin();
    if (key == "fock" || key == "superposition") {
        if (!v.is_number_integer()) throw ValidationError("state." + key + " must be an integer");
        const auto n = v.get<std::int64_t>();
        if (n < 0 || n > 100000) throw ValidationError("state." + key + " out of range");
        const int ni = static_cast<int>(n);
        if (key == "fock") return {RadiationState::fock(ni), sigma_fock(ni, p)};
        return {RadiationState::superposition(ni), sigma_superposition(ni, p)};
    }
    if (key == "coeffs") {
        if (!v.is_array() || v.empty()) throw ValidationError("state.coeffs must be a non-empty array");
        std::vector<Complex> c;
        for (const auto& x : v) {
            if (x.is_number()) {
                c.emplace_back(x.get<double>(), 0.0);
            } else if (x.is_array() && x.size() == 2 && x[0].is_number() && x[1].is_number()) {
                c.emplace_back(x[0].get<double>(), x[1].get<double>());
            } else {
                throw ValidationError("state.coeffs entries must be numbers or [re, im] pairs");
            }
        }
        return {RadiationState::from_coeffs(std::move(c)), std::nullopt};
    }
    throw ValidationError("state: unknown key '" + key + "'");
}

inline int highest_occupied(const RadiationState& s) {
    int h = 0;
    for (std::size_t n = 0; n < s.coeffs.size(); ++n) {
        if (s.coeffs[n] != Complex(0.0)) h = static_cast<int>(n);
    }
    return h;
}

// Explicit times, or points over [t_min, t_max] with t_max optionally given in
// periods 2 pi / omega.
inline std::vector<double> time_grid(const json& p, std::optional<double> omega) {
    if (p.contains("times")) {
        std::vector<double> t = p.at("times").get<std::vector<double>>();
        check_time_grid(t);
        return t;
    }
    const std::int64_t points = integer(p, "points");
    if (points < 1) throw ValidationError("time grid is empty (points = " + std::to_string(points) + ")");
    if (points > kMaxGridPoints) throw CapacityError("time grid exceeds " + std::to_string(kMaxGridPoints) + " points");
    const double t_min = num(p, "t_min");
    double t_max;
    if (p.contains("t_max") && p.contains("t_max_periods")) {
        throw ValidationError("give t_max or t_max_periods, not both");
    } else if (p.contains("t_max")) {
        t_max = num(p, "t_max");
    } else if (p.contains("t_max_periods") && omega) {
        t_max = num(p, "t_max_periods") * 2.0 * std::numbers::pi / *omega;
    } else {
        throw ValidationError("time grid needs t_max, t_max_periods or times");
    }
    if (!std::isfinite(t_min) || !std::isfinite(t_max) || t_min < 0.0) {
        throw ValidationError("time grid bounds must be finite with t_min >= 0");
    }
    if (points == 1) return {t_min};
    if (!(t_max > t_min)) throw ValidationError("time grid needs t_max > t_min");
    std::vector<double> t = numeric::linspace(t_min, t_max, static_cast<std::size_t>(points));
    check_time_grid(t);
    return t;
}

inline SineSamplingSpec sine_spec(const json& p) {
    SineSamplingSpec s;
    s.freq_num = SineSamplingSpec::parse_bigint(digits(p, "freq_hz"));
    s.freq_den = SineSamplingSpec::parse_bigint(digits(p, "freq_den"));
    const auto fs = integer(p, "sample_rate");
    const auto count = integer(p, "count");
    const auto p0n = integer(p, "phase0_num");
    const auto p0d = integer(p, "phase0_den");
    if (fs < 1) throw ValidationError("sample_rate must be >= 1");
    if (count < 1) throw ValidationError("count must be >= 1");
    if (count > kMaxSamples) throw CapacityError("count exceeds " + std::to_string(kMaxSamples));
    if (p0n < 0 || p0d < 1) throw ValidationError("phase0 must be a non-negative rational");
    s.sample_rate = static_cast<std::uint64_t>(fs);
    s.count = static_cast<std::uint64_t>(count);
    s.phase0_num = static_cast<std::uint64_t>(p0n);
    s.phase0_den = static_cast<std::uint64_t>(p0d);
    s.validate();
    return s;
}

inline Window parse_window(const std::string& w) {
    if (w == "none") return Window::none;
    if (w == "hann") return Window::hann;
    throw ValidationError("window must be 'none' or 'hann', got '" + w + "'");
}

inline double median(std::vector<double> v) {
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

// |+>^N (sigma_x = +1 on every atom) tensor chi on the full Dicke basis.
inline QuantumState dicke_product_state(const DickeParams& p, const RadiationState& chi) {
    const Basis basis = Basis::spins_and_fock(p.n_atoms, p.n_max);
    Vector v = Vector::Zero(basis.dim());
    const double amp = std::pow(2.0, -0.5 * p.n_atoms);
    for (Index s = 0; s < basis.spin_dim(); ++s) {
        for (std::size_t n = 0; n < chi.coeffs.size(); ++n) {
            v(s * basis.fock_dim() + static_cast<Index>(n)) = amp * chi.coeffs[n];
        }
    }
    return QuantumState::from_amplitudes(basis, std::move(v));
}

}  // namespace detail

// ---- artifacts --------------------------------------------------------------

class ArtifactWriter {
public:
    explicit ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void csv(const std::string& name, const io::CsvTable& t) {
        io::write_csv(dir_ / name, t);
        names_.push_back(name);
    }

    void json_file(const std::string& name, const json& j) {
        write_json(dir_ / name, j);
        names_.push_back(name);
    }

    const std::vector<std::string>& names() const { return names_; }
    const std::filesystem::path& dir() const { return dir_; }

    static void write_json(const std::filesystem::path& path, const json& j) {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
        os << j.dump(2) << '\n';
    }

private:
    std::filesystem::path dir_;
    std::vector<std::string> names_;
};

inline json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// ---- experiments ------------------------------------------------------------

inline void run_spin_fidelity(const json& p, ArtifactWriter& out) {
    const int n = detail::small_int(p, "n_sites", 2, 64);
    const SpinChainSpec spec = detail::spin_spec(p, n);
    const OperatorHandle h = build_spin_hamiltonian(spec);
    const QuantumState phi = detail::spin_state(p).build(n);
    const Moments m = moments(h, phi);
    const double sigma = std::sqrt(m.variance);
    std::vector<double> times;
    if (p.contains("times")) {
        times = p.at("times").get<std::vector<double>>();
    } else {
        const std::int64_t points = detail::integer(p, "points");
        if (points < 2) throw ValidationError("time grid is empty or degenerate (points < 2)");
        if (points > kMaxGridPoints) throw CapacityError("time grid too large");
        if (p.contains("t_max")) {
            const double t_max = detail::num(p, "t_max");
            if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ValidationError("t_max must be positive");
            times = numeric::linspace(0.0, t_max, static_cast<std::size_t>(points));
        } else {
            if (!(sigma > 0.0)) throw ValidationError("state has zero energy variance; give t_max");
            times = default_time_grid(sigma, static_cast<std::size_t>(points));
        }
    }
    const FidelityCurve c = fidelity_curve(h, phi, times, detail::num(p, "tol"));
    io::CsvTable t{{"t", "F"}, {}};
    for (std::size_t i = 0; i < c.size(); ++i) t.add_row({c.times[i], c.values[i]});
    out.csv("fidelity.csv", t);

    json report{{"label", spec.label()},
                {"n_sites", n},
                {"mean", m.mean},
                {"variance", m.variance},
                {"sigma", sigma},
                {"points", c.size()}};
    if (p.contains("tau_max")) {
        report["tau_max"] = detail::num(p, "tau_max");
        report["gaussian_deviation"] = gaussian_deviation({c, sigma}, detail::num(p, "tau_max"));
    }
    out.json_file("report.json", report);
}

inline void run_hmh_check(const json& p, ArtifactWriter& out, unsigned threads) {
    const std::vector<int> n_values = detail::ascending_n_values(p);
    const ProductStateRule rule = detail::spin_state(p);
    const SpinFamily family = [&p](int n) { return detail::spin_spec(p, n); };
    for (int n : n_values) family(n);  // validate every member before computing
    const auto parts = parallel_map(
        n_values.size(),
        [&](std::size_t i) {
            const int n = n_values[i];
            return hmh_condition_check(family, rule, std::span<const int>(&n, 1));
        },
        threads);
    HMHReport r;
    r.c_lower = std::numeric_limits<double>::infinity();
    for (const auto& part : parts) {
        r.n_values.push_back(part.n_values.front());
        r.sigma_sq.push_back(part.sigma_sq.front());
        r.c_lower = std::min(r.c_lower, part.c_lower);
        r.local_bound = std::max(r.local_bound, part.local_bound);
    }
    r.passed = r.c_lower > 0.0 && std::isfinite(r.local_bound);
    out.json_file("hmh.json", json{{"n_values", r.n_values},
                                   {"sigma_sq", r.sigma_sq},
                                   {"c_lower", r.c_lower},
                                   {"local_bound", r.local_bound},
                                   {"passed", r.passed}});
}

namespace detail {

struct OracleRun {
    std::vector<double> fidelity;
    FockCutoff cutoff;
};

inline OracleRun dicke_oracle_curve(const DickeParams& base, const RadiationState& chi,
                                    std::span<const double> times, double tol, unsigned threads) {
    OracleRun r;
    r.cutoff = adapt_fock_cutoff(base, chi.coeffs, times);
    DickeParams p = base;
    p.n_max = r.cutoff.n_max;
    const OperatorHandle h = build_effective_radiation_hamiltonian(p);
    r.fidelity = parallel_map(
        times.size(),
        [&](std::size_t i) {
            return clamp_fidelity(std::norm(propagated_survival_amplitude(h, chi.coeffs, times[i], tol)));
        },
        threads);
    return r;
}

inline std::vector<double> full_dicke_curve(const DickeParams& base, int n_max,
                                            const RadiationState& chi, std::span<const double> times,
                                            double tol, unsigned threads) {
    DickeParams p = base;
    p.n_max = n_max;
    const OperatorHandle h = build_full_dicke_hamiltonian(p);
    const QuantumState phi = dicke_product_state(p, chi);
    return parallel_map(
        times.size(),
        [&](std::size_t i) {
            const Vector psi = evolve_vector(h, phi.amplitudes(), times[i], tol);
            return clamp_fidelity(std::norm(phi.amplitudes().dot(psi)));
        },
        threads);
}

// Energy variance of chi under the effective Hamiltonian and, for small N,
// of |+>^N chi under the full Dicke Hamiltonian (level splitting included).
inline json dicke_variances(const DickeParams& base, const RadiationState& chi) {
    DickeParams p = base;
    p.n_max = highest_occupied(chi) + 2;
    const double v_eff = variance(build_effective_radiation_hamiltonian(p), chi.to_state(p.n_max));
    json j{{"variance_effective", v_eff}, {"sigma_effective", std::sqrt(v_eff)}};
    if (p.n_atoms <= DickeBuildOptions{}.max_atoms) {
        j["variance_full_dicke"] =
            variance(build_full_dicke_hamiltonian(p), dicke_product_state(p, chi));
    } else {
        j["variance_full_dicke"] = nullptr;
    }
    return j;
}

}  // namespace detail

inline void run_dicke_analytic(const json& p, ArtifactWriter& out, unsigned threads) {
    const DickeParams params = detail::dicke_params(p);
    const auto parsed = detail::radiation_state(p.at("state"), params);
    const std::vector<double> times = detail::time_grid(p, params.mode_freq);
    const bool with_oracle = p.at("oracle").get<bool>();

    json report = detail::dicke_variances(params, parsed.state);
    const double sigma = report["sigma_effective"].get<double>();
    report["label"] = params.label(false);
    report["sigma_formula"] = parsed.sigma_formula ? json(*parsed.sigma_formula) : json(nullptr);

    const auto amps = parallel_map(
        times.size(), [&](std::size_t i) { return survival_amplitude(parsed.state, times[i], params); },
        threads);
    double bound = 0.0;
    for (const auto& a : amps) bound = std::max(bound, a.truncation_error_bound);
    report["max_truncation_error_bound"] = bound;

    std::optional<detail::OracleRun> oracle;
    if (with_oracle) {
        oracle = detail::dicke_oracle_curve(params, parsed.state, times, detail::num(p, "tol"), threads);
        report["oracle_n_max"] = oracle->cutoff.n_max;
    }
    io::CsvTable t{{"t", "F_analytic", "F_gaussian"}, {}};
    if (oracle) t.header.push_back("F_oracle");
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::vector<double> row{times[i], clamp_fidelity(std::norm(amps[i].value)),
                                gaussian_limit_fidelity(sigma, times[i])};
        if (oracle) row.push_back(oracle->fidelity[i]);
        t.add_row(std::move(row));
    }
    out.csv("fidelity.csv", t);
    out.json_file("report.json", report);
}

inline void run_dicke_oracle(const json& p, ArtifactWriter& out, unsigned threads) {
    const DickeParams params = detail::dicke_params(p);
    const auto parsed = detail::radiation_state(p.at("state"), params);
    const std::vector<double> times = detail::time_grid(p, params.mode_freq);
    const bool full = p.at("full_dicke").get<bool>();
    if (full && params.n_atoms > DickeBuildOptions{}.max_atoms) {
        throw CapacityError("full_dicke: n_atoms=" + std::to_string(params.n_atoms) +
                            " exceeds " + std::to_string(DickeBuildOptions{}.max_atoms));
    }
    const double tol = detail::num(p, "tol");
    const detail::OracleRun oracle = detail::dicke_oracle_curve(params, parsed.state, times, tol, threads);

    json report = detail::dicke_variances(params, parsed.state);
    DickeParams used = params;
    used.n_max = oracle.cutoff.n_max;
    report["label"] = used.label();
    report["n_max"] = oracle.cutoff.n_max;
    report["doublings"] = oracle.cutoff.doublings;
    report["last_change"] = oracle.cutoff.last_change;

    io::CsvTable t{{"t", "F_oracle"}, {}};
    std::vector<double> full_curve;
    if (full) {
        full_curve = detail::full_dicke_curve(params, oracle.cutoff.n_max, parsed.state, times, tol, threads);
        t.header.push_back("F_full_dicke");
        double worst = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            worst = std::max(worst, std::abs(full_curve[i] - oracle.fidelity[i]));
        }
        report["max_full_vs_effective"] = worst;
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::vector<double> row{times[i], oracle.fidelity[i]};
        if (full) row.push_back(full_curve[i]);
        t.add_row(std::move(row));
    }
    out.csv("fidelity.csv", t);
    out.json_file("report.json", report);
}

inline void run_scaling(const json& p, ArtifactWriter& out, unsigned threads) {
    const std::vector<int> n_values = detail::ascending_n_values(p);
    const std::string system = p.at("system").get<std::string>();
    const std::int64_t points = detail::integer(p, "points");
    if (points < 10) throw ValidationError("scaling needs points >= 10");
    if (points > kMaxGridPoints) throw CapacityError("time grid too large");
    std::vector<double> sigma;
    json extra = json::object();

    if (system == "dicke") {
        if (!p.contains("coupling")) throw ValidationError("scaling/dicke: missing 'coupling'");
        const int fock = detail::small_int(p, "fock", 0, 100000);
        const double omega = detail::num(p, "mode_freq");
        const double t_max = p.contains("t_max") ? detail::num(p, "t_max") : 0.3;
        if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ValidationError("t_max must be positive");
        const int periods = detail::small_int(p, "recurrence_periods", 1, 1000);
        const int per_period = detail::small_int(p, "recurrence_points_per_period", 8, 1'000'000);
        const std::vector<double> fit_grid = numeric::linspace(0.0, t_max, static_cast<std::size_t>(points));
        const std::vector<double> rec_grid = numeric::linspace(
            0.0, periods * 2.0 * std::numbers::pi / omega,
            static_cast<std::size_t>(periods) * static_cast<std::size_t>(per_period) + 1);
        const RadiationState chi = RadiationState::fock(fock);
        std::vector<DickeParams> members;
        for (int n : n_values) {
            DickeParams d;
            d.n_atoms = n;
            d.coupling = detail::num(p, "coupling");
            d.mode_freq = omega;
            d.validate();
            members.push_back(d);
        }
        struct Point {
            double sigma;
            std::vector<RecurrencePeak> peaks;
        };
        const auto results = parallel_map(
            members.size(),
            [&](std::size_t i) {
                const FidelityCurve c = analytic_fidelity_curve(chi, members[i], fit_grid);
                const FidelityCurve r = analytic_fidelity_curve(chi, members[i], rec_grid);
                return Point{fit_gaussian(c).sigma, recurrence_peaks(r, omega)};
            },
            threads);
        io::CsvTable peaks{{"n", "k", "t", "height", "width"}, {}};
        for (std::size_t i = 0; i < results.size(); ++i) {
            sigma.push_back(results[i].sigma);
            for (const auto& pk : results[i].peaks) {
                peaks.add_row({static_cast<double>(n_values[i]), static_cast<double>(pk.period_index),
                               pk.time, pk.height, pk.width});
            }
        }
        out.csv("peaks.csv", peaks);
        extra["fit_t_max"] = t_max;
    } else if (system == "spin") {
        const ProductStateRule rule = detail::spin_state(p);
        const double tau_window = detail::num(p, "tau_window");
        if (!(tau_window > 0.0)) throw ValidationError("tau_window must be positive");
        const double tol = detail::num(p, "tol");
        for (int n : n_values) detail::spin_spec(p, n);
        sigma = parallel_map(
            n_values.size(),
            [&](std::size_t i) {
                const int n = n_values[i];
                const OperatorHandle h = build_spin_hamiltonian(detail::spin_spec(p, n));
                const QuantumState phi = rule.build(n);
                const double s_est = std::sqrt(variance(h, phi));
                if (!(s_est > 0.0)) throw ValidationError("scaling/spin: zero energy variance");
                const auto grid = numeric::linspace(0.0, tau_window / s_est, static_cast<std::size_t>(points));
                return fit_gaussian(fidelity_curve(h, phi, grid, tol)).sigma;
            },
            threads);
        extra["tau_window"] = tau_window;
    } else {
        throw ValidationError("scaling: system must be 'dicke' or 'spin', got '" + system + "'");
    }
    const ScalingReport r = make_scaling_report(n_values, sigma);
    json j{{"system", system},
           {"n_values", r.n_values},
           {"sigma_fit", r.sigma_fit},
           {"exponent", r.exponent},
           {"exponent_stderr", nullable(r.exponent_stderr)},
           {"r_squared", r.r_squared}};
    j.update(extra);
    out.json_file("scaling.json", j);
}

inline void run_periodogram(const json& p, ArtifactWriter& out) {
    const SineSamplingSpec spec = detail::sine_spec(p);
    const Window window = detail::parse_window(p.at("window").get<std::string>());
    const std::string mode = p.at("mode").get<std::string>();
    std::vector<double> samples;
    if (mode == "exact") {
        samples = sample_sine(spec);
    } else if (mode == "naive") {
        const double f = spec.freq_num.convert_to<double>() / spec.freq_den.convert_to<double>();
        samples = sample_sine_naive(f, static_cast<double>(spec.sample_rate), spec.count,
                                    static_cast<double>(spec.phase0_num) / static_cast<double>(spec.phase0_den));
    } else {
        throw ValidationError("mode must be 'exact' or 'naive', got '" + mode + "'");
    }
    const Periodogram pg = periodogram(samples, static_cast<double>(spec.sample_rate), window);

    io::CsvTable s{{"index", "sample"}, {}};
    for (std::size_t i = 0; i < samples.size(); ++i) s.add_row({static_cast<double>(i), samples[i]});
    io::CsvTable g{{"freq_hz", "power"}, {}};
    for (std::size_t i = 0; i < pg.freqs.size(); ++i) g.add_row({pg.freqs[i], pg.power[i]});
    out.csv("samples.csv", s);
    out.csv("periodogram.csv", g);

    const std::size_t peak = pg.peak_bin();
    const double med = detail::median(pg.power);
    out.json_file("report.json",
                  json{{"mode", mode},
                       {"window", std::string(to_string(window))},
                       {"bin_width_hz", static_cast<double>(spec.sample_rate) / static_cast<double>(samples.size())},
                       {"peak_freq_hz", pg.freqs[peak]},
                       {"peak_power", pg.power[peak]},
                       {"median_power", med},
                       {"peak_over_median_db", nullable(10.0 * std::log10(pg.power[peak] / med))}});
}

inline void run_rng_demo(const json& p, ArtifactWriter& out) {
    const SineSamplingSpec spec = detail::sine_spec(p);
    const int bins = detail::small_int(p, "bins", 2, 1'000'000);
    const double significance = detail::num(p, "significance");
    if (!(significance > 0.0 && significance < 1.0)) throw ValidationError("significance must lie in (0, 1)");
    const std::vector<double> u = undersampled_uniform(spec);
    const ChiSquareReport r = chi_square_uniformity(u, bins);
    io::CsvTable t{{"index", "u"}, {}};
    for (std::size_t i = 0; i < u.size(); ++i) t.add_row({static_cast<double>(i), u[i]});
    out.csv("uniform.csv", t);
    out.json_file("uniformity.json", json{{"chi2", r.chi2},
                                          {"dof", r.dof},
                                          {"p_value", r.p_value},
                                          {"bins", r.bins},
                                          {"counts", r.counts},
                                          {"significance", significance},
                                          {"passed", r.passes(significance)}});
}

// ---- run --------------------------------------------------------------------

inline std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline int exit_code_for(std::exception_ptr e) {
    try {
        std::rethrow_exception(e);
    } catch (const ValidationError&) {
        return ExitCode::validation;
    } catch (const RangeError&) {
        return ExitCode::validation;
    } catch (const json::exception&) {
        return ExitCode::validation;
    } catch (const CapacityError&) {
        return ExitCode::capacity;
    } catch (const ConvergenceError&) {
        return ExitCode::convergence;
    } catch (...) {
        return ExitCode::failure;
    }
}

inline const char* exit_kind(int code) {
    switch (code) {
        case ExitCode::validation: return "validation";
        case ExitCode::capacity: return "capacity";
        case ExitCode::convergence: return "convergence";
        default: return "failure";
    }
}

inline json error_json(std::exception_ptr e) {
    const int code = exit_code_for(e);
    std::string message = "unknown error";
    try {
        std::rethrow_exception(e);
    } catch (const std::exception& ex) {
        message = ex.what();
    } catch (...) {
    }
    return json{{"status", "error"}, {"kind", exit_kind(code)}, {"exit_code", code}, {"message", message}};
}

struct RunOutcome {
    int exit_code{ExitCode::ok};
    json error;  // null on success
    std::filesystem::path manifest;
};

inline constexpr const char* kManifestName = "manifest.json";

// Runs one experiment into cfg.output_dir and writes manifest.json (the only
// file carrying wall time and a timestamp). Errors never escape: they come back
// as an exit code plus a JSON description, also written to error.json when the
// directory is usable.
inline RunOutcome run(const ExperimentConfig& cfg) {
    RunOutcome outcome;
    const auto start = std::chrono::steady_clock::now();
    try {
        std::filesystem::create_directories(cfg.output_dir);
        std::filesystem::remove(cfg.output_dir / "error.json");
        const unsigned threads = thread_count();
        ArtifactWriter out(cfg.output_dir);
        const json& p = cfg.parameters;
        switch (cfg.experiment) {
            case Experiment::spin_fidelity: run_spin_fidelity(p, out); break;
            case Experiment::hmh_check: run_hmh_check(p, out, threads); break;
            case Experiment::dicke_analytic: run_dicke_analytic(p, out, threads); break;
            case Experiment::dicke_oracle: run_dicke_oracle(p, out, threads); break;
            case Experiment::scaling: run_scaling(p, out, threads); break;
            case Experiment::periodogram: run_periodogram(p, out); break;
            case Experiment::rng_demo: run_rng_demo(p, out); break;
        }
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        outcome.manifest = cfg.output_dir / kManifestName;
        ArtifactWriter::write_json(outcome.manifest,
                                   json{{"status", "ok"},
                                        {"experiment", to_string(cfg.experiment)},
                                        {"config", cfg.to_json()},
                                        {"artifacts", out.names()},
                                        {"versions",
                                         {{"decolab", kVersion},
                                          {"eigen", eigen_version()},
                                          {"boost", boost_version()}}},
                                        {"threads", threads},
                                        {"wall_time_s", wall},
                                        {"created_utc", utc_now()}});
    } catch (...) {
        outcome.exit_code = exit_code_for(std::current_exception());
        outcome.error = error_json(std::current_exception());
        std::error_code ec;
        if (std::filesystem::is_directory(cfg.output_dir, ec)) {
            try {
                ArtifactWriter::write_json(cfg.output_dir / "error.json", outcome.error);
            } catch (...) {
            }
        }
    }
    return outcome;
}

}  // namespace decolab::runner
