#pragma once

#include <algorithm>
#include <limits>

#include "decolab/core/operator.hpp"
#include "decolab/core/state.hpp"
#include "decolab/errors.hpp"

namespace decolab {

struct Moments {
    double mean{0.0};
    double variance{0.0};
};

// mean = <psi|H psi>, variance = ||H psi||^2 - mean^2. Variances inside the
// round-off band of ||H psi||^2 are reported as exactly zero.
inline Moments moments(const OperatorHandle& h, const QuantumState& psi) {
    if (!h.hermitian()) throw ValidationError("moments: operator is not flagged Hermitian");
    if (psi.dim() != h.dim()) throw ValidationError("moments: dimension mismatch");
    const Vector hpsi = h.apply(psi.amplitudes());
    const double mean = psi.amplitudes().dot(hpsi).real();
    const double second = hpsi.squaredNorm();
    double var = second - mean * mean;
    if (var <= 1e-14 * second) var = 0.0;
    return {mean, var};
}

inline double expectation(const OperatorHandle& h, const QuantumState& psi) {
    return moments(h, psi).mean;
}

inline double variance(const OperatorHandle& h, const QuantumState& psi) {
    return moments(h, psi).variance;
}

}  // namespace decolab
