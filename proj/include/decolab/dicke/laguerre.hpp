#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "decolab/errors.hpp"

namespace decolab {

// value = mantissa * 2^exponent; carries magnitudes far outside double range.
struct ScaledReal {
    double mantissa{0.0};
    int exponent{0};

    double value() const { return std::ldexp(mantissa, exponent); }
    double log_abs() const {
        return mantissa == 0.0 ? -std::numeric_limits<double>::infinity()
                               : std::log(std::abs(mantissa)) + exponent * std::log(2.0);
    }
    int sign() const { return (mantissa > 0) - (mantissa < 0); }
};

// Associated Laguerre L_n^k(x) by the upward three-term recurrence in n,
//   (j+1) L_{j+1} = (2j+1+k-x) L_j - (j+k) L_{j-1},
// rescaling by exact powers of two whenever the iterates grow past 2^500.
inline ScaledReal laguerre_assoc_scaled(int n, int k, double x) {
    if (n < 0) throw ValidationError("laguerre_assoc: n must be >= 0");
    if (n + std::min(k, 0) < 0) {
        throw ValidationError("laguerre_assoc: need n + min(k, 0) >= 0, got n=" +
                              std::to_string(n) + " k=" + std::to_string(k));
    }
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw ValidationError("laguerre_assoc: x must be finite and >= 0");
    }
    if (n == 0) return {1.0, 0};
    // Extended precision keeps the relative error near 1e-13 even where the
    // cancellation close to a root of L_n^k costs a few digits.
    using Real = long double;
    constexpr Real kBig = 0x1p500L;
    constexpr int kShift = 500;
    const Real kd = k;
    const Real xd = x;
    Real prev = 1.0L;
    Real cur = 1.0L + kd - xd;
    int shifts = 0;
    for (int j = 1; j < n; ++j) {
        const Real jd = j;
        const Real next = ((2.0L * jd + 1.0L + kd - xd) * cur - (jd + kd) * prev) / (jd + 1.0L);
        prev = cur;
        cur = next;
        if (std::abs(cur) > kBig) {
            cur = std::ldexp(cur, -kShift);
            prev = std::ldexp(prev, -kShift);
            ++shifts;
        }
    }
    int e = 0;
    const Real m = std::frexp(cur, &e);
    return {static_cast<double>(m), shifts * kShift + e};
}

// Plain double result; +-inf when |L| exceeds the double range.
inline double laguerre_assoc(int n, int k, double x) {
    return laguerre_assoc_scaled(n, k, x).value();
}

inline double laguerre(int n, double x) { return laguerre_assoc(n, 0, x); }

}  // namespace decolab
