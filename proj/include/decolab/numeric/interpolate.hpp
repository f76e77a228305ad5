#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "decolab/errors.hpp"

namespace decolab::numeric {

// Monotone piecewise-cubic Hermite interpolant: three-point slopes with the
// Hyman filter, zero slope at local extrema of the data.
class MonotoneCubic {
public:
    MonotoneCubic(std::span<const double> x, std::span<const double> y)
        : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n) {
            throw ValidationError("MonotoneCubic: need >= 2 points and matching lengths");
        }
        for (std::size_t i = 1; i < n; ++i) {
            if (!(x_[i] > x_[i - 1])) throw ValidationError("MonotoneCubic: x must be increasing");
        }
        std::vector<double> delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        }
        slope_.assign(n, 0.0);
        if (n == 2) {
            slope_[0] = slope_[1] = delta[0];
        } else {
            slope_[0] = end_slope(x_[1] - x_[0], x_[2] - x_[1], delta[0], delta[1]);
            slope_[n - 1] = end_slope(x_[n - 1] - x_[n - 2], x_[n - 2] - x_[n - 3], delta[n - 2],
                                      delta[n - 3]);
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] <= 0.0) {
                slope_[i] = 0.0;
            } else {
                // centered three-point derivative, Hyman-limited to 3 min(|delta|)
                const double h0 = x_[i] - x_[i - 1];
                const double h1 = x_[i + 1] - x_[i];
                const double d = (h1 * delta[i - 1] + h0 * delta[i]) / (h0 + h1);
                const double cap = 3.0 * std::min(std::abs(delta[i - 1]), std::abs(delta[i]));
                slope_[i] = std::abs(d) > cap ? std::copysign(cap, d) : d;
            }
        }
    }

    double operator()(double xq) const {
        if (xq < x_.front() || xq > x_.back()) {
            throw RangeError("MonotoneCubic: query outside sampled range");
        }
        auto it = std::upper_bound(x_.begin(), x_.end(), xq);
        std::size_t i = (it == x_.begin()) ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
        if (i >= x_.size() - 1) i = x_.size() - 2;
        const double h = x_[i + 1] - x_[i];
        const double s = (xq - x_[i]) / h;
        const double s2 = s * s;
        const double s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1;
        const double h10 = s3 - 2 * s2 + s;
        const double h01 = -2 * s3 + 3 * s2;
        const double h11 = s3 - s2;
        return h00 * y_[i] + h10 * h * slope_[i] + h01 * y_[i + 1] + h11 * h * slope_[i + 1];
    }

private:
    // Three-point one-sided derivative, limited to keep the end interval monotone.
    static double end_slope(double h0, double h1, double d0, double d1) {
        double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (d * d0 <= 0.0) {
            d = 0.0;
        } else if (d0 * d1 <= 0.0 && std::abs(d) > 3.0 * std::abs(d0)) {
            d = 3.0 * d0;
        }
        return d;
    }

    std::vector<double> x_, y_, slope_;
};

inline std::vector<double> linspace(double a, double b, std::size_t points) {
    if (points == 0) return {};
    if (points == 1) return {a};
    std::vector<double> v(points);
    const double step = (b - a) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) v[i] = a + step * static_cast<double>(i);
    v.back() = b;
    return v;
}

}  // namespace decolab::numeric
