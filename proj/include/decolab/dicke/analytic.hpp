#pragma once

// Closed-form survival amplitudes of the integrable-limit Dicke model with the
// atoms frozen in the sum(sigma_x) = N sector. The radiation propagator
// factorizes as
//   U_R(t) = e^{i xi(t)} e^{-i omega t a^dagger a} D(alpha(t)),
//   xi(t)    = (N g / omega)^2 (omega t - sin omega t),
//   alpha(t) = (N g / omega) (1 - e^{i omega t}),
// so <chi|U_R|chi> = e^{i xi} sum_{m,n} c_m^* c_n e^{-i m omega t} <m|D(alpha)|n>.

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "decolab/core/dicke.hpp"
#include "decolab/core/state.hpp"
#include "decolab/dicke/laguerre.hpp"
#include "decolab/errors.hpp"
#include "decolab/spin/fidelity_curve.hpp"

namespace decolab {

inline double xi(double t, const DickeParams& p) {
    if (!(p.mode_freq > 0.0)) throw ValidationError("xi: mode_freq must be positive");
    const double w = p.mode_freq;
    const double x = w * t;
    double x_minus_sin;
    if (std::abs(x) < 0.1) {
        const double x2 = x * x;
        x_minus_sin = x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)));
    } else {
        x_minus_sin = x - std::sin(x);
    }
    const double lam = p.collective_coupling() / w;
    return lam * lam * x_minus_sin;
}

inline Complex alpha(double t, const DickeParams& p) {
    if (!(p.mode_freq > 0.0)) throw ValidationError("alpha: mode_freq must be positive");
    const double lam = p.collective_coupling() / p.mode_freq;
    const double x = p.mode_freq * t;
    // 1 - e^{ix} = 2 sin^2(x/2) - i sin x
    const double s = std::sin(0.5 * x);
    return lam * Complex(2.0 * s * s, -std::sin(x));
}

// <m|D(alpha)|n>, D(alpha) = exp(alpha a^dagger - alpha^* a), in the unitary
// normalization sqrt(n!/m!) e^{-|alpha|^2/2} alpha^{m-n} L_n^{m-n}(|alpha|^2)
// for m >= n; m < n via <m|D(alpha)|n> = conj(<n|D(-alpha)|m>). Magnitudes are
// assembled in the log domain.
inline Complex displaced_element(int m, int n, Complex a) {
    if (m < 0 || n < 0) throw ValidationError("displaced_element: indices must be >= 0");
    if (m < n) return std::conj(displaced_element(n, m, -a));
    const int k = m - n;
    const double r = std::abs(a);
    if (r == 0.0) return k == 0 ? Complex(1.0) : Complex(0.0);
    const double x = r * r;
    const ScaledReal lag = laguerre_assoc_scaled(n, k, x);
    if (lag.mantissa == 0.0) return 0.0;
    const double log_mag = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0)) - 0.5 * x +
                           k * std::log(r) + lag.log_abs();
    return static_cast<double>(lag.sign()) * std::polar(std::exp(log_mag), k * std::arg(a));
}

// Radiation state sum_n c_n |n>.
struct RadiationState {
    std::vector<Complex> coeffs;

    static RadiationState fock(int n) {
        if (n < 0) throw ValidationError("RadiationState::fock: n must be >= 0");
        RadiationState s;
        s.coeffs.assign(static_cast<std::size_t>(n) + 1, 0.0);
        s.coeffs.back() = 1.0;
        return s;
    }

    // (|n> + |n-1>) / sqrt(2)
    static RadiationState superposition(int n) {
        if (n < 1) throw ValidationError("RadiationState::superposition: n must be >= 1");
        RadiationState s;
        s.coeffs.assign(static_cast<std::size_t>(n) + 1, 0.0);
        s.coeffs[static_cast<std::size_t>(n)] = s.coeffs[static_cast<std::size_t>(n - 1)] =
            1.0 / std::sqrt(2.0);
        return s;
    }

    static RadiationState from_coeffs(std::vector<Complex> c) {
        RadiationState s{std::move(c)};
        s.validate();
        return s;
    }

    int n_max() const { return static_cast<int>(coeffs.size()) - 1; }

    void validate() const {
        if (coeffs.empty()) throw ValidationError("RadiationState: no coefficients");
        double w = 0.0;
        for (const Complex& c : coeffs) {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
                throw ValidationError("RadiationState: non-finite coefficient");
            }
            w += std::norm(c);
        }
        if (std::abs(w - 1.0) > kNormTolerance) {
            throw ValidationError("RadiationState: sum |c_n|^2 = " + std::to_string(w) + " != 1");
        }
    }

    QuantumState to_state(int n_max) const {
        if (n_max < this->n_max()) throw ValidationError("RadiationState: truncation below support");
        Vector v = Vector::Zero(n_max + 1);
        for (std::size_t i = 0; i < coeffs.size(); ++i) v(static_cast<Index>(i)) = coeffs[i];
        return QuantumState::from_amplitudes(Basis::fock(n_max), std::move(v));
    }
};

struct SurvivalAmplitude {
    Complex value{1.0};
    double truncation_error_bound{0.0};
};

struct SurvivalOptions {
    double coeff_cutoff{1e-14};  // coefficients at or below this are dropped
    double window_scale{10.0};   // pairs restricted to |m - n| <= scale |alpha| + offset
    int window_offset{20};
    double window_bound_tol{1e-12};
    int max_doublings{4};
    bool include_phase{true};  // false forces xi = 0
};

namespace detail {

// sum over m outside [n - w, n + w] of |<m|D(alpha)|n>|^2, summed explicitly.
// Above the classical turning point (sqrt(n) + |alpha|)^2 the terms decay
// faster than geometrically; summation stops once they are negligible.
inline double displacement_column_tail(int n, Complex a, int w) {
    double tail = 0.0;
    for (int m = 0; m < n - w; ++m) tail += std::norm(displaced_element(m, n, a));
    const double turning = std::pow(std::sqrt(static_cast<double>(n)) + std::abs(a), 2);
    double prev = std::numeric_limits<double>::infinity();
    for (int m = n + w + 1;; ++m) {
        const double term = std::norm(displaced_element(m, n, a));
        tail += term;
        if (m > turning && term < 1e-40 && term < 0.5 * prev) {
            tail += 2.0 * term;
            break;
        }
        prev = term;
        if (m > n + w + 1000000) throw ConvergenceError("displacement tail did not decay");
    }
    return tail;
}

}  // namespace detail

inline SurvivalAmplitude survival_amplitude(const RadiationState& chi, double t,
                                            const DickeParams& p,
                                            const SurvivalOptions& opts = {}) {
    chi.validate();
    if (!std::isfinite(t)) throw ValidationError("survival_amplitude: non-finite time");
    if (!(p.mode_freq > 0.0)) throw ValidationError("survival_amplitude: mode_freq must be positive");

    const Complex a = alpha(t, p);
    std::vector<int> support;
    double dropped = 0.0;
    for (std::size_t i = 0; i < chi.coeffs.size(); ++i) {
        if (std::abs(chi.coeffs[i]) > opts.coeff_cutoff) {
            support.push_back(static_cast<int>(i));
        } else {
            dropped += std::norm(chi.coeffs[i]);
        }
    }

    int window = static_cast<int>(std::ceil(opts.window_scale * std::abs(a))) + opts.window_offset;
    for (int attempt = 0;; ++attempt) {
        Complex sum = 0.0;
        double window_bound = 0.0;
        for (int n : support) {
            const Complex cn = chi.coeffs[static_cast<std::size_t>(n)];
            double skipped_weight = 0.0;
            for (int m : support) {
                const Complex cm = chi.coeffs[static_cast<std::size_t>(m)];
                if (std::abs(m - n) <= window) {
                    sum += std::conj(cm) * cn * std::polar(1.0, -m * p.mode_freq * t) *
                           displaced_element(m, n, a);
                } else {
                    skipped_weight += std::norm(cm);
                }
            }
            if (skipped_weight > 0.0) {
                window_bound += std::abs(cn) * std::sqrt(skipped_weight) *
                                std::sqrt(detail::displacement_column_tail(n, a, window));
            }
        }
        if (window_bound <= opts.window_bound_tol) {
            const Complex phase = opts.include_phase ? std::polar(1.0, xi(t, p)) : Complex(1.0);
            return {phase * sum, window_bound + 2.0 * std::sqrt(dropped)};
        }
        if (attempt >= opts.max_doublings) {
            throw ConvergenceError("survival_amplitude: series window not converged (bound " +
                                   std::to_string(window_bound) + ")");
        }
        window *= 2;
    }
}

// F_0 = exp(-2 (N g / omega)^2 (1 - cos omega t))
inline double fidelity_ground_exact(double t, const DickeParams& p) {
    const double lam = p.collective_coupling() / p.mode_freq;
    const double s = std::sin(0.5 * p.mode_freq * t);
    return std::exp(-4.0 * lam * lam * s * s);  // 1 - cos x = 2 sin^2(x/2)
}

// Small-time Fock-state law e^{-x} L_n(x)^2, x = (N g t)^2.
inline double fidelity_fock_smalltime(int n, double t, const DickeParams& p) {
    const double lt = p.collective_coupling() * t;
    const double x = lt * lt;
    const double l = laguerre(n, x);
    return std::exp(-x) * l * l;
}

// Gaussian comparator e^{-(2n+1)(N g t)^2}.
inline double fidelity_fock_gaussian(int n, double t, const DickeParams& p) {
    const double lt = p.collective_coupling() * t;
    return std::exp(-(2.0 * n + 1.0) * lt * lt);
}

inline double sigma_fock(int n, const DickeParams& p) {
    if (n < 0) throw ValidationError("sigma_fock: n must be >= 0");
    return std::sqrt(2.0 * n + 1.0) * std::abs(p.collective_coupling());
}

// Width for (|n> + |n-1>) / sqrt(2).
inline double sigma_superposition(int n, const DickeParams& p) {
    if (n < 1) throw ValidationError("sigma_superposition: n must be >= 1");
    const double lam = p.collective_coupling();
    return std::sqrt(n * lam * lam + 0.25 * p.mode_freq * p.mode_freq);
}

inline double gaussian_limit_fidelity(double sigma, double t) {
    return std::exp(-sigma * sigma * t * t);
}

inline FidelityCurve analytic_fidelity_curve(const RadiationState& chi, const DickeParams& p,
                                             std::span<const double> times,
                                             const SurvivalOptions& opts = {}) {
    return make_curve(
        times, [&](double t) { return std::norm(survival_amplitude(chi, t, p, opts).value); },
        CurveSource::analytic_formula, "analytic " + p.label());
}

inline FidelityCurve ground_exact_curve(const DickeParams& p, std::span<const double> times) {
    return make_curve(
        times, [&](double t) { return fidelity_ground_exact(t, p); },
        CurveSource::analytic_formula, "ground-exact " + p.label());
}

}  // namespace decolab
