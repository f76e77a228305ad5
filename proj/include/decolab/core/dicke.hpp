#pragma once

#include <Eigen/Sparse>

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "decolab/core/operator.hpp"
#include "decolab/core/state.hpp"
#include "decolab/errors.hpp"

namespace decolab {

// (N, g, omega, Delta) plus the Fock truncation n_max.
struct DickeParams {
    int n_atoms{1};
    double coupling{0.0};
    double mode_freq{1.0};
    double level_split{0.0};
    int n_max{1};

    void validate() const {
        if (n_atoms < 1) throw ValidationError("DickeParams: n_atoms must be >= 1");
        if (!(mode_freq > 0.0) || !std::isfinite(mode_freq)) {
            throw ValidationError("DickeParams: mode_freq must be positive and finite");
        }
        if (!std::isfinite(coupling) || !std::isfinite(level_split)) {
            throw ValidationError("DickeParams: non-finite coupling or level splitting");
        }
        if (n_max < 1) throw ValidationError("DickeParams: n_max must be >= 1");
    }

    // N g, the collective coupling of the frozen atomic sector.
    double collective_coupling() const { return n_atoms * coupling; }

    // max_t |alpha(t)| = 2 N |g| / omega
    double max_displacement() const { return 2.0 * std::abs(collective_coupling()) / mode_freq; }

    std::string label(bool with_cutoff = true) const {
        std::ostringstream os;
        os << "dicke(N=" << n_atoms << ",g=" << coupling << ",w=" << mode_freq << ",D=" << level_split;
        if (with_cutoff) os << ",n_max=" << n_max;
        os << ")";
        return os.str();
    }
};

inline constexpr int kMaxFockCutoff = 1'000'000;

inline void check_fock_capacity(double n_max) {
    if (!(n_max <= kMaxFockCutoff)) {
        throw CapacityError("Fock cutoff " + std::to_string(n_max) + " exceeds the limit of " +
                            std::to_string(kMaxFockCutoff) + " levels");
    }
}

// Starting Fock cutoff: highest occupied level plus ceil(10 |alpha|_max + 20).
inline int initial_fock_cutoff(const DickeParams& p, int highest_occupied) {
    const double n = highest_occupied + std::ceil(10.0 * p.max_displacement() + 20.0);
    check_fock_capacity(n);
    return static_cast<int>(n);
}

namespace detail {

// omega a^dagger a + lambda (a^dagger + a) on levels 0..n_max
inline SparseMatrix displaced_oscillator_matrix(int n_max, double omega, double lambda) {
    const Index dim = n_max + 1;
    std::vector<Eigen::Triplet<Complex>> t;
    t.reserve(3 * dim);
    for (Index n = 0; n < dim; ++n) {
        if (n > 0) t.emplace_back(n, n, omega * static_cast<double>(n));
        if (n + 1 < dim && lambda != 0.0) {
            const double amp = lambda * std::sqrt(static_cast<double>(n + 1));
            t.emplace_back(n + 1, n, amp);
            t.emplace_back(n, n + 1, amp);
        }
    }
    SparseMatrix m(dim, dim);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

}  // namespace detail

// Integrable-limit radiation Hamiltonian with the atoms frozen in the
// sum(sigma_x) = N sector: omega a^dagger a + N g (a^dagger + a).
inline OperatorHandle build_effective_radiation_hamiltonian(const DickeParams& p) {
    p.validate();
    check_fock_capacity(p.n_max);
    return OperatorHandle::from_sparse(
        Basis::fock(p.n_max),
        detail::displaced_oscillator_matrix(p.n_max, p.mode_freq, p.collective_coupling()), true,
        "effective-radiation " + p.label());
}

struct DickeBuildOptions {
    int max_atoms{8};
};

// (Delta/2) sum sigma_z + omega a^dagger a + g sum sigma_x (a^dagger + a)
// on 2^N (n_max + 1) states. Small-N oracle only.
inline OperatorHandle build_full_dicke_hamiltonian(const DickeParams& p,
                                                   const DickeBuildOptions& opts = {}) {
    p.validate();
    if (p.n_atoms > opts.max_atoms) {
        throw CapacityError("build_full_dicke_hamiltonian: n_atoms=" + std::to_string(p.n_atoms) +
                            " exceeds configured maximum " + std::to_string(opts.max_atoms));
    }
    const Basis basis = Basis::spins_and_fock(p.n_atoms, p.n_max);
    const Index levels = basis.fock_dim();
    const auto spin_dim = static_cast<std::uint64_t>(basis.spin_dim());
    std::vector<Eigen::Triplet<Complex>> t;
    t.reserve(static_cast<std::size_t>(basis.dim()) * (1 + 2 * p.n_atoms));
    for (std::uint64_t s = 0; s < spin_dim; ++s) {
        double sz = 0.0;
        for (int i = 0; i < p.n_atoms; ++i) sz += ((s >> i) & 1U) ? -1.0 : 1.0;
        for (Index n = 0; n < levels; ++n) {
            const Index row = static_cast<Index>(s) * levels + n;
            const double diag = 0.5 * p.level_split * sz + p.mode_freq * static_cast<double>(n);
            if (diag != 0.0) t.emplace_back(row, row, diag);
            if (p.coupling == 0.0) continue;
            for (int i = 0; i < p.n_atoms; ++i) {
                const Index flipped = static_cast<Index>(s ^ (std::uint64_t{1} << i)) * levels;
                if (n + 1 < levels) {
                    t.emplace_back(row, flipped + n + 1,
                                   p.coupling * std::sqrt(static_cast<double>(n + 1)));
                }
                if (n > 0) {
                    t.emplace_back(row, flipped + n - 1,
                                   p.coupling * std::sqrt(static_cast<double>(n)));
                }
            }
        }
    }
    SparseMatrix m(basis.dim(), basis.dim());
    m.setFromTriplets(t.begin(), t.end());
    return OperatorHandle::from_sparse(basis, std::move(m), true, "full-dicke " + p.label());
}

}  // namespace decolab
