#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <utility>

#include "decolab/core/state.hpp"
#include "decolab/errors.hpp"

namespace decolab {

using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
using DenseMatrix = Eigen::MatrixXcd;

// Eigendecomposition H = V diag(E) V^dagger, used by the dense propagation route.
struct DenseSpectrum {
    Eigen::VectorXd energies;
    DenseMatrix vectors;
};

inline constexpr Index kDenseSpectrumMaxDim = 4096;

// A linear operator on a declared basis, exposed as apply-to-vector plus
// metadata. Immutable after construction; copies share the same realization,
// and lazily computed caches (norm estimate, spectrum) are thread-safe.
class OperatorHandle {
public:
    using ApplyFn = std::function<void(const Vector& in, Vector& out)>;

    OperatorHandle(Basis basis, ApplyFn apply, bool hermitian, std::string description,
                   double norm_bound = std::numeric_limits<double>::quiet_NaN())
        : impl_(std::make_shared<Impl>()) {
        impl_->basis = basis;
        impl_->apply = std::move(apply);
        impl_->hermitian = hermitian;
        impl_->description = std::move(description);
        impl_->norm_bound = norm_bound;
    }

    static OperatorHandle from_sparse(Basis basis, SparseMatrix m, bool hermitian,
                                      std::string description) {
        if (m.rows() != basis.dim() || m.cols() != basis.dim()) {
            throw ValidationError("OperatorHandle: matrix shape does not match basis");
        }
        m.makeCompressed();
        auto shared = std::make_shared<const SparseMatrix>(std::move(m));
        double inf_norm = 0.0;
        for (Index r = 0; r < shared->outerSize(); ++r) {
            double row = 0.0;
            for (SparseMatrix::InnerIterator it(*shared, r); it; ++it) row += std::abs(it.value());
            inf_norm = std::max(inf_norm, row);
        }
        OperatorHandle op(
            basis, [shared](const Vector& in, Vector& out) { out.noalias() = (*shared) * in; },
            hermitian, std::move(description), inf_norm);
        op.impl_->sparse = shared;
        return op;
    }

    static OperatorHandle from_dense(Basis basis, const DenseMatrix& m, bool hermitian,
                                     std::string description) {
        return from_sparse(basis, m.sparseView(0.0, 0.0), hermitian, std::move(description));
    }

    const Basis& basis() const noexcept { return impl_->basis; }
    Index dim() const noexcept { return impl_->basis.dim(); }
    bool hermitian() const noexcept { return impl_->hermitian; }
    const std::string& description() const noexcept { return impl_->description; }
    // Materialized matrix, or nullptr for a matrix-free operator.
    const SparseMatrix* sparse() const noexcept { return impl_->sparse.get(); }

    void apply(const Vector& in, Vector& out) const {
        if (in.size() != dim()) throw ValidationError("OperatorHandle::apply: dimension mismatch");
        out.resize(dim());
        impl_->apply(in, out);
    }

    Vector apply(const Vector& in) const {
        Vector out(dim());
        apply(in, out);
        return out;
    }

    DenseMatrix to_dense() const {
        if (impl_->sparse) return DenseMatrix(*impl_->sparse);
        DenseMatrix m(dim(), dim());
        Vector e = Vector::Zero(dim());
        Vector col(dim());
        for (Index j = 0; j < dim(); ++j) {
            e(j) = 1.0;
            apply(e, col);
            m.col(j) = col;
            e(j) = 0.0;
        }
        return m;
    }

    // Upper bound on the spectral norm when the builder knows one (row-sum
    // norm for materialized operators); otherwise a power-iteration estimate.
    double norm_estimate() const {
        if (std::isfinite(impl_->norm_bound)) return impl_->norm_bound;
        std::call_once(impl_->norm_once, [this] { impl_->norm_cached = power_iteration_norm(); });
        return impl_->norm_cached;
    }

    const DenseSpectrum& spectrum() const {
        if (!hermitian()) throw ValidationError("spectrum: operator is not flagged Hermitian");
        if (dim() > kDenseSpectrumMaxDim) {
            throw CapacityError("spectrum: dimension " + std::to_string(dim()) +
                                " exceeds dense limit " + std::to_string(kDenseSpectrumMaxDim));
        }
        std::call_once(impl_->spectrum_once, [this] {
            Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(to_dense());
            if (solver.info() != Eigen::Success) {
                throw ConvergenceError("spectrum: eigen decomposition failed");
            }
            impl_->spectrum = DenseSpectrum{solver.eigenvalues(), solver.eigenvectors()};
        });
        return impl_->spectrum;
    }

private:
    struct Impl {
        Basis basis;
        ApplyFn apply;
        bool hermitian{false};
        std::string description;
        double norm_bound{std::numeric_limits<double>::quiet_NaN()};
        std::shared_ptr<const SparseMatrix> sparse;

        mutable std::once_flag norm_once;
        mutable double norm_cached{0.0};
        mutable std::once_flag spectrum_once;
        mutable DenseSpectrum spectrum;
    };

    double power_iteration_norm() const {
        std::mt19937_64 rng(0x5eed);
        std::normal_distribution<double> gauss;
        Vector v(dim());
        for (Index i = 0; i < dim(); ++i) v(i) = Complex(gauss(rng), gauss(rng));
        v.normalize();
        Vector w(dim());
        double estimate = 0.0;
        for (int it = 0; it < 50; ++it) {
            apply(v, w);
            estimate = w.norm();
            if (estimate == 0.0) return 0.0;
            v = w / estimate;
        }
        // Power iteration converges from below.
        return 1.5 * estimate;
    }

    std::shared_ptr<Impl> impl_;
};

// Largest |<a|H b> - conj(<b|H a>)| over random probe pairs.
inline double hermiticity_defect(const OperatorHandle& op, int probes = 8,
                                 std::uint64_t seed = 1234) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    auto random_vector = [&] {
        Vector v(op.dim());
        for (Index i = 0; i < op.dim(); ++i) v(i) = Complex(gauss(rng), gauss(rng));
        return Vector(v.normalized());
    };
    double worst = 0.0;
    for (int p = 0; p < probes; ++p) {
        const Vector a = random_vector();
        const Vector b = random_vector();
        const Complex ab = a.dot(op.apply(b));
        const Complex ba = b.dot(op.apply(a));
        worst = std::max(worst, std::abs(ab - std::conj(ba)));
    }
    return worst;
}

}  // namespace decolab
