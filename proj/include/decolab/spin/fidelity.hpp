#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "decolab/core/moments.hpp"
#include "decolab/core/operator.hpp"
#include "decolab/core/propagator.hpp"
#include "decolab/core/spin_chain.hpp"
#include "decolab/errors.hpp"
#include "decolab/numeric/interpolate.hpp"
#include "decolab/spin/fidelity_curve.hpp"
#include "decolab/spin/product_state.hpp"

namespace decolab {

// Propagates phi along the grid, one segment at a time (grid must start at 0).
inline FidelityCurve fidelity_curve(const OperatorHandle& h, const QuantumState& phi,
                                    std::span<const double> times, double tol,
                                    const PropagatorOptions& opts = {}) {
    check_time_grid(times);
    if (times.front() != 0.0) throw ValidationError("fidelity_curve: time grid must start at 0");
    FidelityCurve c;
    c.times.assign(times.begin(), times.end());
    c.source = CurveSource::exact_propagation;
    c.params_label = h.description();
    c.values.reserve(times.size());
    Vector psi = phi.amplitudes();
    double t_prev = 0.0;
    for (double t : times) {
        psi = evolve_vector(h, psi, t - t_prev, tol, opts);
        t_prev = t;
        c.values.push_back(clamp_fidelity(std::norm(phi.amplitudes().dot(psi))));
    }
    return c;
}

// 200 points over [0, 3 / sigma_est].
inline std::vector<double> default_time_grid(double sigma_est, std::size_t points = 200) {
    if (!(sigma_est > 0.0)) {
        throw ValidationError("default_time_grid: sigma estimate must be positive");
    }
    return numeric::linspace(0.0, 3.0 / sigma_est, points);
}

struct HMHReport {
    std::vector<int> n_values;
    std::vector<double> sigma_sq;
    double c_lower{0.0};      // min_N sigma^2 / N
    double local_bound{0.0};  // max local-term operator norm
    bool passed{false};
};

using SpinFamily = std::function<SpinChainSpec(int)>;

inline HMHReport hmh_condition_check(const SpinFamily& family, const ProductStateRule& rule,
                                     std::span<const int> n_values,
                                     const SpinBuildOptions& opts = {}) {
    if (n_values.empty()) throw ValidationError("hmh_condition_check: empty N list");
    for (std::size_t i = 1; i < n_values.size(); ++i) {
        if (!(n_values[i] > n_values[i - 1])) {
            throw ValidationError("hmh_condition_check: N values must be ascending");
        }
    }
    HMHReport r;
    r.c_lower = std::numeric_limits<double>::infinity();
    for (int n : n_values) {
        const SpinChainSpec spec = family(n);
        const OperatorHandle h = build_spin_hamiltonian(spec, opts);
        const double var = variance(h, rule.build(n));
        r.n_values.push_back(n);
        r.sigma_sq.push_back(var);
        r.c_lower = std::min(r.c_lower, var / n);
        r.local_bound = std::max(r.local_bound, local_term_bound(spec));
    }
    r.passed = r.c_lower > 0.0 && std::isfinite(r.local_bound);
    return r;
}

struct SigmaCurve {
    FidelityCurve curve;
    double sigma{0.0};
};

// sup over tau in [0, tau_max] of |F(tau / sigma) - e^{-tau^2}|, with F
// interpolated monotone-cubically in tau and probed on a grid ten times finer
// than the samples inside the window.
inline double gaussian_deviation(const SigmaCurve& sc, double tau_max) {
    const FidelityCurve& c = sc.curve;
    if (!(sc.sigma > 0.0)) throw ValidationError("gaussian_convergence: sigma must be positive");
    if (c.size() < 2) throw ValidationError("gaussian_convergence: curve too short");
    if (c.times.front() != 0.0) throw ValidationError("gaussian_convergence: curve must start at t=0");
    std::vector<double> tau(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) tau[i] = sc.sigma * c.times[i];
    if (tau.back() < tau_max * (1.0 - 1e-12)) {
        throw RangeError("gaussian_convergence: curve covers tau <= " + std::to_string(tau.back()) +
                         " < tau_max = " + std::to_string(tau_max));
    }
    const numeric::MonotoneCubic interp(tau, c.values);
    const auto inside = static_cast<std::size_t>(
        std::count_if(tau.begin(), tau.end(), [&](double x) { return x <= tau_max; }));
    const std::size_t probes = 10 * std::max<std::size_t>(inside, 1) + 1;
    double worst = 0.0;
    for (double x : numeric::linspace(0.0, std::min(tau_max, tau.back()), probes)) {
        worst = std::max(worst, std::abs(interp(x) - std::exp(-x * x)));
    }
    return worst;
}

inline std::vector<double> gaussian_convergence(std::span<const SigmaCurve> curves,
                                                double tau_max) {
    if (!(tau_max > 0.0)) throw ValidationError("gaussian_convergence: tau_max must be positive");
    std::vector<double> out;
    out.reserve(curves.size());
    for (const auto& sc : curves) out.push_back(gaussian_deviation(sc, tau_max));
    return out;
}

}  // namespace decolab
