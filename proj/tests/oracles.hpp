#pragma once

// Independent reference computations used by the test suites. Each one takes a
// route the library does not: scaling-and-squaring exponentials, explicit
// multiprecision sums, and Kronecker-product Hamiltonians.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "decolab/core/operator.hpp"
#include "decolab/core/spin_chain.hpp"
#include "decolab/core/state.hpp"

namespace oracle {

using decolab::Complex;
using decolab::DenseMatrix;
using decolab::Index;
using decolab::Vector;

// e^{-iHt} by scaling and squaring (Eigen MatrixFunctions).
inline DenseMatrix expm_propagator(const DenseMatrix& h, double t) {
    const DenseMatrix a = Complex(0.0, -t) * h;
    return a.exp();
}

inline Vector expm_evolve(const DenseMatrix& h, const Vector& psi, double t) {
    return expm_propagator(h, t) * psi;
}

// Pauli matrices and site embedding through Kronecker products. Site 0 is the
// least significant bit of the basis index; bit 0 = up.
inline DenseMatrix pauli(char which) {
    DenseMatrix m(2, 2);
    switch (which) {
        case 'x': m << 0, 1, 1, 0; break;
        case 'y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
        case 'z': m << 1, 0, 0, -1; break;
        default: m = DenseMatrix::Identity(2, 2);
    }
    return m;
}

inline DenseMatrix embed(int n, const std::vector<std::pair<int, char>>& ops) {
    DenseMatrix out = DenseMatrix::Identity(1, 1);
    for (int site = n - 1; site >= 0; --site) {
        DenseMatrix local = DenseMatrix::Identity(2, 2);
        for (const auto& [s, c] : ops) {
            if (s == site) local = pauli(c);
        }
        DenseMatrix next = Eigen::kroneckerProduct(out, local).eval();
        out = std::move(next);
    }
    return out;
}

inline DenseMatrix spin_hamiltonian(const decolab::SpinChainSpec& s) {
    const int n = s.n_sites;
    const Index dim = Index{1} << n;
    DenseMatrix h = DenseMatrix::Zero(dim, dim);
    for (const auto& [i, j] : s.bonds()) {
        h += s.coupling_zz * embed(n, {{i, 'z'}, {j, 'z'}});
        h += s.coupling_xx * embed(n, {{i, 'x'}, {j, 'x'}});
        h += s.coupling_yy * embed(n, {{i, 'y'}, {j, 'y'}});
    }
    for (int i = 0; i < n; ++i) {
        h += s.field_x * embed(n, {{i, 'x'}});
        h += s.field_z * embed(n, {{i, 'z'}});
    }
    return h;
}

// Creation operator a^dagger on levels 0..n_max.
inline DenseMatrix creation(int n_max) {
    DenseMatrix a = DenseMatrix::Zero(n_max + 1, n_max + 1);
    for (int n = 0; n < n_max; ++n) a(n + 1, n) = std::sqrt(static_cast<double>(n + 1));
    return a;
}

// exp(alpha a^dagger - conj(alpha) a) on a space large enough that the
// requested low block is free of truncation effects.
inline DenseMatrix displacement_series(Complex alpha, int n_max) {
    const DenseMatrix ad = creation(n_max);
    const DenseMatrix gen = alpha * ad - std::conj(alpha) * DenseMatrix(ad.adjoint());
    return gen.exp();
}

// <(H - <H>)^2> from the dense matrix.
inline double dense_variance(const DenseMatrix& h, const Vector& psi) {
    const Vector hp = h * psi;
    const double mean = psi.dot(hp).real();
    const Vector hhp = h * hp;
    return psi.dot(hhp).real() - mean * mean;
}

using Big = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<300>>;

// L_n^k(x) = sum_j (-1)^j C(n+k, n-j) x^j / j! at 300 decimal digits (k >= 0).
inline Big laguerre_exact_big(int n, int k, double x) {
    Big sum = 0;
    const Big bx = x;
    // term_j = (-1)^j C(n+k, n-j) x^j / j!, built from C(n+k, n) by ratios.
    Big binom = 1;
    for (int i = 1; i <= n; ++i) binom = binom * Big(k + i) / Big(i);
    Big term = binom;
    for (int j = 0; j <= n; ++j) {
        sum += term;
        if (j == n) break;
        // C(n+k, n-j-1) / C(n+k, n-j) = (n-j) / (k+j+1)
        term = -term * Big(n - j) / Big(k + j + 1) * bx / Big(j + 1);
    }
    return sum;
}

inline double laguerre_exact(int n, int k, double x) {
    return static_cast<double>(laguerre_exact_big(n, k, x));
}

inline Vector random_state(Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) v(i) = Complex(g(rng), g(rng));
    return v.normalized();
}

}  // namespace oracle
