#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "decolab/errors.hpp"

namespace decolab {

enum class CurveSource { exact_propagation, analytic_formula, gaussian_model };

inline std::string_view to_string(CurveSource s) {
    switch (s) {
        case CurveSource::exact_propagation: return "exact-propagation";
        case CurveSource::analytic_formula: return "analytic-formula";
        case CurveSource::gaussian_model: return "gaussian-model";
    }
    return "unknown";
}

// Sampled survival probability F(t) = |<phi|e^{-iHt}|phi>|^2 (hbar = 1).
struct FidelityCurve {
    std::vector<double> times;
    std::vector<double> values;
    CurveSource source{CurveSource::exact_propagation};
    std::string params_label;

    std::size_t size() const { return times.size(); }
};

inline constexpr double kFidelitySlack = 1e-12;

inline void check_time_grid(std::span<const double> times) {
    if (times.empty()) throw ValidationError("time grid is empty");
    for (double t : times) {
        if (!std::isfinite(t)) throw ValidationError("time grid contains a non-finite value");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw ValidationError("time grid must be strictly ascending");
    }
}

// Values outside [-slack, 1 + slack] indicate a bug upstream; inside, clamp to [0, 1].
inline double clamp_fidelity(double f) {
    if (!(f >= -kFidelitySlack && f <= 1.0 + kFidelitySlack)) {
        throw RangeError("fidelity value " + std::to_string(f) + " outside [0, 1]");
    }
    return std::clamp(f, 0.0, 1.0);
}

template <class F>
FidelityCurve make_curve(std::span<const double> times, F&& fidelity, CurveSource source,
                         std::string label) {
    check_time_grid(times);
    FidelityCurve c;
    c.times.assign(times.begin(), times.end());
    c.values.reserve(times.size());
    for (double t : times) c.values.push_back(clamp_fidelity(fidelity(t)));
    c.source = source;
    c.params_label = std::move(label);
    return c;
}

inline FidelityCurve gaussian_model_curve(double sigma, std::span<const double> times) {
    return make_curve(
        times, [sigma](double t) { return std::exp(-sigma * sigma * t * t); },
        CurveSource::gaussian_model, "gaussian(sigma=" + std::to_string(sigma) + ")");
}

}  // namespace decolab
