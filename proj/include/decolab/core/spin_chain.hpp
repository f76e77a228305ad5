#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <cstdint>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "decolab/core/operator.hpp"
#include "decolab/core/state.hpp"
#include "decolab/errors.hpp"

namespace decolab {

enum class Boundary { open, periodic };

// H = sum_bonds (Jzz Z Z + Jxx X X + Jyy Y Y) + sum_sites (hx X + hz Z)
struct SpinChainSpec {
    int n_sites{2};
    double coupling_zz{0.0};
    double coupling_xx{0.0};
    double coupling_yy{0.0};
    double field_x{0.0};
    double field_z{0.0};
    Boundary boundary{Boundary::open};

    static SpinChainSpec transverse_field_ising(int n, double j, double h,
                                                Boundary b = Boundary::open) {
        SpinChainSpec s;
        s.n_sites = n;
        s.coupling_zz = j;
        s.field_x = h;
        s.boundary = b;
        return s;
    }

    SpinChainSpec scaled(double lambda) const {
        SpinChainSpec s = *this;
        s.coupling_zz *= lambda;
        s.coupling_xx *= lambda;
        s.coupling_yy *= lambda;
        s.field_x *= lambda;
        s.field_z *= lambda;
        return s;
    }

    void validate() const {
        if (n_sites < 2) throw ValidationError("SpinChainSpec: n_sites must be >= 2");
        if (boundary == Boundary::periodic && n_sites < 3) {
            throw ValidationError("SpinChainSpec: periodic chain needs n_sites >= 3");
        }
        for (double c : {coupling_zz, coupling_xx, coupling_yy, field_x, field_z}) {
            if (!std::isfinite(c)) throw ValidationError("SpinChainSpec: non-finite coupling");
        }
    }

    std::vector<std::pair<int, int>> bonds() const {
        std::vector<std::pair<int, int>> b;
        for (int i = 0; i + 1 < n_sites; ++i) b.emplace_back(i, i + 1);
        if (boundary == Boundary::periodic) b.emplace_back(n_sites - 1, 0);
        return b;
    }

    std::string label() const {
        std::ostringstream os;
        os << "spin-chain(N=" << n_sites << ",Jzz=" << coupling_zz << ",Jxx=" << coupling_xx
           << ",Jyy=" << coupling_yy << ",hx=" << field_x << ",hz=" << field_z << ","
           << (boundary == Boundary::open ? "open" : "periodic") << ")";
        return os.str();
    }
};

struct SpinBuildOptions {
    int max_sites{20};
    int materialize_up_to{12};  // sparse matrix at or below this size, matrix-free above
};

namespace detail {

// Row-wise ("pull") kernel: every output entry is computed from the input
// independently, so rows can be split across workers.
struct SpinChainKernel {
    int n{0};
    std::vector<std::pair<int, int>> bonds;
    double jzz{0}, jxx{0}, jyy{0}, hx{0}, hz{0};

    static int spin(std::uint64_t x, int i) { return ((x >> i) & 1U) ? -1 : 1; }

    double diagonal(std::uint64_t x) const {
        double d = 0.0;
        if (jzz != 0.0) {
            for (auto [i, j] : bonds) d += jzz * spin(x, i) * spin(x, j);
        }
        if (hz != 0.0) {
            for (int i = 0; i < n; ++i) d += hz * spin(x, i);
        }
        return d;
    }

    // Amplitude of the two-spin flip on bond (i, j) between x and x ^ mask.
    // sigma_y sigma_y contributes -1 on aligned pairs and +1 on anti-aligned ones.
    double flip_amplitude(std::uint64_t x, int i, int j) const {
        const bool aligned = spin(x, i) == spin(x, j);
        return jxx + (aligned ? -jyy : jyy);
    }

    template <class Emit>
    void row(std::uint64_t x, Emit&& emit) const {
        emit(x, diagonal(x));
        if (hx != 0.0) {
            for (int i = 0; i < n; ++i) emit(x ^ (std::uint64_t{1} << i), hx);
        }
        if (jxx != 0.0 || jyy != 0.0) {
            for (auto [i, j] : bonds) {
                const double amp = flip_amplitude(x, i, j);
                if (amp != 0.0) {
                    emit(x ^ (std::uint64_t{1} << i) ^ (std::uint64_t{1} << j), amp);
                }
            }
        }
    }

    void apply(const Vector& in, Vector& out) const {
        const auto dim = static_cast<std::uint64_t>(in.size());
        for (std::uint64_t x = 0; x < dim; ++x) {
            Complex acc = 0.0;
            row(x, [&](std::uint64_t y, double amp) { acc += amp * in(static_cast<Index>(y)); });
            out(static_cast<Index>(x)) = acc;
        }
    }
};

// Spectral norm of a small Hermitian matrix.
inline double hermitian_norm(const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace detail

// Spectral norm of the largest local term H_i = bond(i, i+1) + fields on site i.
inline double local_term_bound(const SpinChainSpec& spec) {
    using M = Eigen::Matrix2cd;
    M x, y, z, id;
    x << 0, 1, 1, 0;
    y << 0, Complex(0, -1), Complex(0, 1), 0;
    z << 1, 0, 0, -1;
    id.setIdentity();
    auto kron = [](const M& a, const M& b) {
        Eigen::Matrix4cd k;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        return k;
    };
    const M site = spec.field_x * x + spec.field_z * z;
    const Eigen::Matrix4cd bond = spec.coupling_zz * kron(z, z) + spec.coupling_xx * kron(x, x) +
                                  spec.coupling_yy * kron(y, y) + kron(site, id);
    return std::max(detail::hermitian_norm(bond), detail::hermitian_norm(site));
}

inline OperatorHandle build_spin_hamiltonian(const SpinChainSpec& spec,
                                             const SpinBuildOptions& opts = {}) {
    spec.validate();
    if (spec.n_sites > opts.max_sites) {
        throw CapacityError("build_spin_hamiltonian: n_sites=" + std::to_string(spec.n_sites) +
                            " exceeds configured maximum " + std::to_string(opts.max_sites));
    }
    auto kernel = std::make_shared<detail::SpinChainKernel>();
    kernel->n = spec.n_sites;
    kernel->bonds = spec.bonds();
    kernel->jzz = spec.coupling_zz;
    kernel->jxx = spec.coupling_xx;
    kernel->jyy = spec.coupling_yy;
    kernel->hx = spec.field_x;
    kernel->hz = spec.field_z;

    const Basis basis = Basis::spins(spec.n_sites);
    if (spec.n_sites <= opts.materialize_up_to) {
        const auto dim = static_cast<std::uint64_t>(basis.dim());
        std::vector<Eigen::Triplet<Complex>> triplets;
        triplets.reserve(dim * (1 + spec.n_sites + kernel->bonds.size()));
        for (std::uint64_t x = 0; x < dim; ++x) {
            kernel->row(x, [&](std::uint64_t y, double amp) {
                if (amp != 0.0) {
                    triplets.emplace_back(static_cast<Index>(x), static_cast<Index>(y), amp);
                }
            });
        }
        SparseMatrix m(basis.dim(), basis.dim());
        m.setFromTriplets(triplets.begin(), triplets.end());
        return OperatorHandle::from_sparse(basis, std::move(m), true, spec.label());
    }

    const double bound =
        static_cast<double>(kernel->bonds.size()) *
            (std::abs(spec.coupling_zz) + std::abs(spec.coupling_xx) + std::abs(spec.coupling_yy)) +
        spec.n_sites * (std::abs(spec.field_x) + std::abs(spec.field_z));
    return OperatorHandle(
        basis, [kernel](const Vector& in, Vector& out) { kernel->apply(in, out); }, true,
        spec.label() + " [matrix-free]", bound);
}

}  // namespace decolab
