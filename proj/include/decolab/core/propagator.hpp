#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "decolab/core/operator.hpp"
#include "decolab/core/state.hpp"
#include "decolab/errors.hpp"

namespace decolab {

struct PropagatorOptions {
    int krylov_dim{30};
    int max_steps{100000};     // accepted Krylov steps per call
    Index dense_up_to{256};    // dense eigendecomposition route at or below this dimension
    double max_phase{1e9};     // refuse |t| * ||H|| above this
};

namespace detail {

inline void check_propagation_args(const OperatorHandle& h, Index dim, double t, double tol,
                                   const PropagatorOptions& opts) {
    if (!h.hermitian()) throw ValidationError("evolve: operator is not flagged Hermitian");
    if (dim != h.dim()) {
        throw ValidationError("evolve: state dimension " + std::to_string(dim) +
                              " does not match operator dimension " + std::to_string(h.dim()));
    }
    if (!std::isfinite(t)) throw ValidationError("evolve: non-finite time");
    if (!(tol > 1e-15 && tol < 1e-6)) {
        throw ValidationError("evolve: tolerance must lie in (1e-15, 1e-6)");
    }
    if (t != 0.0 && std::abs(t) * h.norm_estimate() > opts.max_phase) {
        throw ValidationError("evolve: |t| * ||H|| exceeds " + std::to_string(opts.max_phase) +
                              "; accumulated phase would be meaningless");
    }
}

// (e^z - 1) / z
inline Complex phi1(Complex z) {
    if (std::abs(z) < 1e-4) return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0;
    return (std::exp(z) - 1.0) / z;
}

inline Vector dense_evolve(const OperatorHandle& h, const Vector& psi, double t) {
    const DenseSpectrum& sp = h.spectrum();
    Vector coeffs = sp.vectors.adjoint() * psi;
    for (Index k = 0; k < coeffs.size(); ++k) coeffs(k) *= std::polar(1.0, -sp.energies(k) * t);
    return sp.vectors * coeffs;
}

// Lanczos with full reorthogonalization. Each step of length dt is accepted
// when the a posteriori estimate dt * beta_m * |e_m^T phi1(-i dt T) e_1|
// stays below tol * dt / |t|, so the accumulated error is at most tol. The
// basis stops growing as soon as the remaining time passes that test.
inline Vector krylov_evolve(const OperatorHandle& h, const Vector& psi, double t, double tol,
                            const PropagatorOptions& opts) {
    const Index n = h.dim();
    const int m_max = static_cast<int>(std::min<Index>(opts.krylov_dim, n));
    const double total = std::abs(t);
    const double sign = t < 0 ? -1.0 : 1.0;
    const double breakdown_tol = 1e-13 * std::max(1.0, h.norm_estimate());
    constexpr int kMinBasis = 4;

    Vector w = psi;
    double remaining = total;
    std::vector<Vector> basis;
    basis.reserve(static_cast<std::size_t>(m_max));
    Vector hv(n);
    int steps = 0;

    std::vector<double> diag;
    std::vector<double> off;
    Eigen::VectorXd lam;
    Eigen::MatrixXd q;
    double w_norm = 0.0;
    double beta_last = 0.0;

    auto diagonalize = [&] {
        const auto m = static_cast<Index>(diag.size());
        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
        for (Index i = 0; i < m; ++i) tri(i, i) = diag[static_cast<std::size_t>(i)];
        for (Index i = 0; i + 1 < m; ++i) {
            tri(i, i + 1) = tri(i + 1, i) = off[static_cast<std::size_t>(i)];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
        lam = es.eigenvalues();
        q = es.eigenvectors();
    };
    auto estimate = [&](double dt) {
        const Index m = lam.size();
        Complex acc = 0.0;
        for (Index k = 0; k < m; ++k) {
            acc += q(m - 1, k) * phi1(Complex(0.0, -sign * dt * lam(k))) * q(0, k);
        }
        return w_norm * dt * beta_last * std::abs(acc);
    };

    while (remaining > 0.0) {
        if (++steps > opts.max_steps) {
            throw ConvergenceError("evolve: Krylov step budget (" + std::to_string(opts.max_steps) +
                                   ") exhausted with t remaining = " + std::to_string(remaining));
        }
        w_norm = w.norm();
        basis.clear();
        basis.push_back(w / w_norm);
        diag.clear();
        off.clear();
        beta_last = 0.0;
        bool invariant = false;
        bool converged = false;
        for (int j = 0; j < m_max; ++j) {
            h.apply(basis[static_cast<std::size_t>(j)], hv);
            const double a = basis[static_cast<std::size_t>(j)].dot(hv).real();
            diag.push_back(a);
            for (int pass = 0; pass < 2; ++pass) {
                for (int k = 0; k <= j; ++k) {
                    const Vector& v = basis[static_cast<std::size_t>(k)];
                    hv -= v.dot(hv) * v;
                }
            }
            const double b = hv.norm();
            if (b <= breakdown_tol) {
                invariant = true;
                break;
            }
            beta_last = b;
            if (j + 1 >= kMinBasis && j + 1 < m_max) {
                diagonalize();
                if (estimate(remaining) <= tol * remaining / total) {
                    converged = true;
                    break;
                }
            }
            if (j + 1 < m_max) {
                off.push_back(b);
                basis.push_back(hv / b);
            }
        }
        if (!invariant && m_max == n) invariant = true;  // the Krylov space is the whole space
        if (!converged) diagonalize();
        const auto m = lam.size();

        double dt = remaining;
        if (!invariant && !converged) {
            int halvings = 0;
            while (estimate(dt) > tol * dt / total) {
                dt *= 0.5;
                if (++halvings > 200) {
                    throw ConvergenceError("evolve: Krylov step size underflow");
                }
            }
        }

        Eigen::VectorXcd y(m);
        for (Index i = 0; i < m; ++i) {
            Complex acc = 0.0;
            for (Index k = 0; k < m; ++k) {
                acc += q(i, k) * std::polar(1.0, -sign * dt * lam(k)) * q(0, k);
            }
            y(i) = acc * w_norm;
        }
        w.setZero();
        for (Index i = 0; i < m; ++i) w += y(i) * basis[static_cast<std::size_t>(i)];
        remaining = (dt >= remaining) ? 0.0 : remaining - dt;
    }
    return w;
}

}  // namespace detail

// e^{-iHt} psi with error at most tol in norm. Dense eigendecomposition for
// small operators, Krylov stepping otherwise.
inline Vector evolve_vector(const OperatorHandle& h, const Vector& psi, double t, double tol,
                            const PropagatorOptions& opts = {}) {
    detail::check_propagation_args(h, psi.size(), t, tol, opts);
    if (t == 0.0) return psi;
    if (h.dim() <= opts.dense_up_to) return detail::dense_evolve(h, psi, t);
    return detail::krylov_evolve(h, psi, t, tol, opts);
}

inline QuantumState evolve(const OperatorHandle& h, const QuantumState& state, double t,
                           double tol, const PropagatorOptions& opts = {}) {
    if (!(state.basis() == h.basis())) {
        throw ValidationError("evolve: state basis " + state.basis().describe() +
                              " does not match operator basis " + h.basis().describe());
    }
    return QuantumState::unchecked(state.basis(),
                                   evolve_vector(h, state.amplitudes(), t, tol, opts));
}

}  // namespace decolab
