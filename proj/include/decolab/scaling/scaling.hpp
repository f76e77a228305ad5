#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "decolab/errors.hpp"
#include "decolab/spin/fidelity_curve.hpp"

namespace decolab {

// Points with F at or below this are excluded from Gaussian fits: -ln F
// amplifies propagation noise there.
inline constexpr double kFitFloor = 0.05;
// A maximum counts as a recurrence only if it reaches this height.
inline constexpr double kPeakThreshold = 0.99;

struct GaussianFit {
    double sigma{0.0};
    double rmse{0.0};  // in -ln F
    std::size_t points_used{0};
};

// Least squares for -ln F = sigma^2 t^2 over points with F > 0.05.
inline GaussianFit fit_gaussian(const FidelityCurve& c) {
    if (c.times.size() != c.values.size()) throw ValidationError("fit_gaussian: ragged curve");
    double sty = 0.0;
    double st4 = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double f = c.values[i];
        if (!(f > kFitFloor && f <= 1.0)) continue;
        const double t2 = c.times[i] * c.times[i];
        sty += t2 * -std::log(f);
        st4 += t2 * t2;
        ++used;
    }
    if (used < 10) {
        throw ValidationError("fit_gaussian: " + std::to_string(used) +
                              " usable points (need >= 10 with F in (0.05, 1])");
    }
    if (!(st4 > 0.0)) throw ValidationError("fit_gaussian: all usable points at t = 0");
    const double s = sty / st4;
    if (!(s > 0.0)) throw ValidationError("fit_gaussian: curve shows no decay to fit");
    double sse = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double f = c.values[i];
        if (!(f > kFitFloor && f <= 1.0)) continue;
        const double r = -std::log(f) - s * c.times[i] * c.times[i];
        sse += r * r;
    }
    return {std::sqrt(s), std::sqrt(sse / static_cast<double>(used)), used};
}

struct PowerLawFit {
    double exponent{0.0};
    double intercept{0.0};  // ln prefactor
    double exponent_stderr{0.0};  // NaN with only two points
    double r_squared{0.0};
};

// Ordinary least squares of ln sigma against ln N.
inline PowerLawFit loglog_slope(std::span<const double> n_values, std::span<const double> sigma) {
    if (n_values.size() != sigma.size()) throw ValidationError("loglog_slope: length mismatch");
    const std::size_t n = n_values.size();
    if (n < 2) throw ValidationError("loglog_slope: need at least two points");
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(n_values[i] > 0.0) || !(sigma[i] > 0.0)) {
            throw ValidationError("loglog_slope: values must be positive");
        }
        x[i] = std::log(n_values[i]);
        y[i] = std::log(sigma[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw ValidationError("loglog_slope: N values must not all coincide");
    PowerLawFit fit;
    fit.exponent = sxy / sxx;
    fit.intercept = my - fit.exponent * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.exponent * x[i]);
        ssr += r * r;
    }
    fit.exponent_stderr = n > 2 ? std::sqrt(ssr / static_cast<double>(n - 2) / sxx)
                                : std::numeric_limits<double>::quiet_NaN();
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
    return fit;
}

struct ScalingReport {
    std::vector<int> n_values;
    std::vector<double> sigma_fit;
    double exponent{0.0};
    double exponent_stderr{0.0};
    double r_squared{0.0};
};

inline ScalingReport make_scaling_report(std::span<const int> n_values,
                                         std::span<const double> sigma_fit) {
    std::vector<double> nd(n_values.begin(), n_values.end());
    const PowerLawFit f = loglog_slope(nd, sigma_fit);
    return {{n_values.begin(), n_values.end()},
            {sigma_fit.begin(), sigma_fit.end()},
            f.exponent,
            f.exponent_stderr,
            f.r_squared};
}

namespace detail {

inline double crossing(double t0, double f0, double t1, double f1, double level) {
    return t0 + (level - f0) * (t1 - t0) / (f1 - f0);
}

// Width between half-maximum crossings around the peak at index p. A peak at
// t = 0 on a one-sided grid uses F(-t) = F(t).
inline std::optional<double> half_width_around(const FidelityCurve& c, std::size_t p) {
    const double half = 0.5 * c.values[p];
    std::optional<double> right;
    for (std::size_t i = p + 1; i < c.size(); ++i) {
        if (c.values[i] < half) {
            right = crossing(c.times[i - 1], c.values[i - 1], c.times[i], c.values[i], half);
            break;
        }
    }
    if (!right) return std::nullopt;
    if (p == 0 && c.times[0] == 0.0) return 2.0 * *right;
    for (std::size_t i = p; i-- > 0;) {
        if (c.values[i] < half) {
            const double left = crossing(c.times[i], c.values[i], c.times[i + 1], c.values[i + 1], half);
            return *right - left;
        }
    }
    return std::nullopt;
}

}  // namespace detail

// Full width at half maximum of the highest peak.
inline double fwhm(const FidelityCurve& c) {
    if (c.size() < 3 || c.values.size() != c.size()) throw ValidationError("fwhm: curve too short");
    std::size_t p = 0;
    for (std::size_t i = 1; i < c.size(); ++i) {
        if (c.values[i] > c.values[p]) p = i;
    }
    if (c.values[p] < kPeakThreshold) {
        throw ValidationError("fwhm: no peak reaching " + std::to_string(kPeakThreshold));
    }
    const auto w = detail::half_width_around(c, p);
    if (!w) throw ValidationError("fwhm: peak not bracketed by half-maximum crossings");
    return *w;
}

struct RecurrencePeak {
    double time{0.0};
    double height{0.0};
    double width{std::numeric_limits<double>::quiet_NaN()};  // NaN when unresolved
    long period_index{0};  // nearest k with t ~ 2 pi k / omega
};

// Local maxima of height >= 0.99. The first sample counts only when it sits at
// t = 0 (F is even in t there); the last sample never counts.
inline std::vector<RecurrencePeak> recurrence_peaks(const FidelityCurve& c, double omega) {
    if (!(omega > 0.0)) throw ValidationError("recurrence_peaks: omega must be positive");
    if (c.size() < 3) throw ValidationError("recurrence_peaks: curve too short");
    std::vector<RecurrencePeak> peaks;
    const double period = 2.0 * std::numbers::pi / omega;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        const double v = c.values[i];
        if (v < kPeakThreshold) continue;
        bool is_max;
        if (i == 0) {
            is_max = c.times[0] == 0.0 && v >= c.values[1];
        } else {
            is_max = v >= c.values[i - 1] && v > c.values[i + 1];
        }
        if (!is_max) continue;
        RecurrencePeak pk;
        pk.time = c.times[i];
        pk.height = v;
        if (auto w = detail::half_width_around(c, i)) pk.width = *w;
        pk.period_index = std::lround(c.times[i] / period);
        peaks.push_back(pk);
    }
    return peaks;
}

}  // namespace decolab
