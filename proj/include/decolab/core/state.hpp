#pragma once

// Spin convention used throughout: bare Pauli matrices (eigenvalues +-1).
// Basis index bit i == 0 means site i is up along z (sigma_z = +1), so the
// all-up product state is index 0. Tensor products order the spins as the
// slow index and the Fock level as the fast index.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>

#include "decolab/errors.hpp"

namespace decolab {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double kNormTolerance = 1e-12;

struct Basis {
    int spin_sites{0};   // number of two-level factors
    int fock_levels{0};  // n_max + 1, or 0 when there is no bosonic mode

    static Basis spins(int n) { return {n, 0}; }
    static Basis fock(int n_max) { return {0, n_max + 1}; }
    static Basis spins_and_fock(int n, int n_max) { return {n, n_max + 1}; }

    Index spin_dim() const { return Index{1} << spin_sites; }
    Index fock_dim() const { return fock_levels > 0 ? fock_levels : 1; }
    Index dim() const { return spin_dim() * fock_dim(); }

    std::string describe() const {
        std::string s;
        if (spin_sites > 0) s += "spins(" + std::to_string(spin_sites) + ")";
        if (fock_levels > 0) {
            if (!s.empty()) s += " x ";
            s += "fock(n_max=" + std::to_string(fock_levels - 1) + ")";
        }
        return s.empty() ? "trivial" : s;
    }

    friend bool operator==(const Basis&, const Basis&) = default;
};

// Unit-norm amplitude vector over a declared basis.
class QuantumState {
public:
    enum class Normalize { no, yes };

    static QuantumState from_amplitudes(Basis basis, Vector amps,
                                        Normalize normalize = Normalize::no) {
        if (amps.size() != basis.dim()) {
            throw ValidationError("QuantumState: amplitude count " + std::to_string(amps.size()) +
                                  " does not match basis dimension " +
                                  std::to_string(basis.dim()));
        }
        if (!amps.allFinite()) throw ValidationError("QuantumState: non-finite amplitude");
        const double norm = amps.norm();
        if (normalize == Normalize::yes) {
            if (norm == 0.0) throw ValidationError("QuantumState: cannot normalize zero vector");
            amps /= norm;
        } else if (std::abs(norm - 1.0) > kNormTolerance) {
            throw ValidationError("QuantumState: norm " + std::to_string(norm) + " is not 1");
        }
        return QuantumState(basis, std::move(amps));
    }

    static QuantumState basis_state(Basis basis, Index index) {
        if (index < 0 || index >= basis.dim()) {
            throw ValidationError("QuantumState: basis index out of range");
        }
        Vector v = Vector::Zero(basis.dim());
        v(index) = 1.0;
        return QuantumState(basis, std::move(v));
    }

    // Skips the norm check. For outputs of norm-preserving schemes (the
    // propagator), whose deviation is bounded by their own tolerance.
    static QuantumState unchecked(Basis basis, Vector amps) {
        return QuantumState(basis, std::move(amps));
    }

    const Basis& basis() const noexcept { return basis_; }
    const Vector& amplitudes() const noexcept { return amps_; }
    Index dim() const noexcept { return amps_.size(); }
    double norm() const { return amps_.norm(); }

    // <this|other>
    Complex overlap(const QuantumState& other) const {
        if (other.dim() != dim()) throw ValidationError("overlap: dimension mismatch");
        return amps_.dot(other.amps_);
    }

    QuantumState with_global_phase(double phase) const {
        return QuantumState(basis_, amps_ * std::polar(1.0, phase));
    }

private:
    QuantumState(Basis basis, Vector amps) : basis_(basis), amps_(std::move(amps)) {}

    Basis basis_;
    Vector amps_;
};

}  // namespace decolab
