#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "decolab/core/dicke.hpp"
#include "decolab/core/propagator.hpp"
#include "decolab/core/state.hpp"
#include "decolab/errors.hpp"

namespace decolab {

// Propagated <chi|e^{-i H_eff t}|chi> with chi given by Fock coefficients
// (padded with zeros up to p.n_max).
inline Complex propagated_survival_amplitude(const OperatorHandle& h_eff,
                                             const std::vector<Complex>& coeffs, double t,
                                             double tol, const PropagatorOptions& opts = {}) {
    if (static_cast<Index>(coeffs.size()) > h_eff.dim()) {
        throw ValidationError("propagated_survival_amplitude: state exceeds Fock truncation");
    }
    Vector chi = Vector::Zero(h_eff.dim());
    for (std::size_t n = 0; n < coeffs.size(); ++n) chi(static_cast<Index>(n)) = coeffs[n];
    const Vector out = evolve_vector(h_eff, chi, t, tol, opts);
    return chi.dot(out);
}

struct FockCutoff {
    int n_max{0};
    int doublings{0};
    double last_change{0.0};
};

// Start at highest occupied level + ceil(10 |alpha|_max + 20), then double
// n_max until the survival amplitude at the worst sampled time (largest
// |alpha(t)|) moves by less than change_tol.
inline FockCutoff adapt_fock_cutoff(DickeParams p, const std::vector<Complex>& coeffs,
                                    std::span<const double> times, double change_tol = 1e-10,
                                    int max_doublings = 6) {
    if (coeffs.empty()) throw ValidationError("adapt_fock_cutoff: empty state");
    int highest = 0;
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
        if (coeffs[n] != Complex(0.0)) highest = static_cast<int>(n);
    }
    double worst_t = 0.0;
    double worst_disp = -1.0;
    for (double t : times) {
        const double d = std::abs(std::sin(0.5 * p.mode_freq * t));
        if (d > worst_disp) {
            worst_disp = d;
            worst_t = t;
        }
    }
    p.n_max = std::max(initial_fock_cutoff(p, highest), highest + 1);
    Complex previous =
        propagated_survival_amplitude(build_effective_radiation_hamiltonian(p), coeffs, worst_t, 1e-13);
    for (int d = 1; d <= max_doublings; ++d) {
        p.n_max *= 2;
        const Complex current = propagated_survival_amplitude(
            build_effective_radiation_hamiltonian(p), coeffs, worst_t, 1e-13);
        const double change = std::abs(current - previous);
        if (change < change_tol) return {p.n_max, d, change};
        previous = current;
    }
    throw ConvergenceError("adapt_fock_cutoff: survival amplitude not converged after " +
                           std::to_string(max_doublings) + " doublings");
}

}  // namespace decolab
