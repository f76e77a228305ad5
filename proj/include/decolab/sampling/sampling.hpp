#pragma once

#include <unsupported/Eigen/FFT>

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "decolab/errors.hpp"
#include "decolab/sampling/rational_phase.hpp"

namespace decolab {

// Samples [offset, offset + count) of sin(2 pi frac(phase0 + k f / fs)).
// Chunks computed independently concatenate to the full sequence bit for bit.
inline std::vector<double> sample_sine_chunk(const SineSamplingSpec& spec, std::uint64_t offset,
                                             std::uint64_t count) {
    PhaseAccumulator acc(spec);
    acc.seek(offset);
    std::vector<double> out;
    out.reserve(count);
    for (std::uint64_t k = 0; k < count; ++k) {
        out.push_back(std::sin(2.0 * std::numbers::pi * acc.turns()));
        acc.advance();
    }
    return out;
}

inline std::vector<double> sample_sine(const SineSamplingSpec& spec) {
    return sample_sine_chunk(spec, 0, spec.count);
}

// sin(2 pi f k / fs) with the argument formed in double precision. For huge
// f the product f k carries no information about the true phase.
inline std::vector<double> sample_sine_naive(double freq_hz, double sample_rate,
                                             std::uint64_t count, double phase0_turns = 0.0) {
    std::vector<double> out;
    out.reserve(count);
    for (std::uint64_t k = 0; k < count; ++k) {
        const double t = static_cast<double>(k) / sample_rate;
        out.push_back(std::sin(2.0 * std::numbers::pi * (freq_hz * t + phase0_turns)));
    }
    return out;
}

enum class Window { none, hann };

inline std::string_view to_string(Window w) { return w == Window::none ? "none" : "hann"; }

struct Periodogram {
    std::vector<double> freqs;  // Hz, 0 .. fs/2
    std::vector<double> power;
    Window window{Window::none};

    std::size_t peak_bin() const {
        return static_cast<std::size_t>(std::max_element(power.begin(), power.end()) -
                                        power.begin());
    }
};

inline constexpr std::size_t kMinPeriodogramSamples = 64;

// One-sided |DFT|^2 of the (optionally windowed) samples, normalized by the
// window energy; interior bins doubled so a unit-amplitude tone carries power ~1/2.
inline Periodogram periodogram(std::span<const double> samples, double sample_rate,
                               Window window = Window::none) {
    const std::size_t n = samples.size();
    if (n < kMinPeriodogramSamples) {
        throw ValidationError("periodogram: need at least " +
                              std::to_string(kMinPeriodogramSamples) + " samples, got " +
                              std::to_string(n));
    }
    if (!(sample_rate > 0.0)) throw ValidationError("periodogram: sample rate must be positive");
    std::vector<double> x(samples.begin(), samples.end());
    double energy = static_cast<double>(n);
    if (window == Window::hann) {
        energy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                                  static_cast<double>(n));
            x[i] *= w;
            energy += w * w;
        }
    }
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spectrum;
    fft.fwd(spectrum, x);

    Periodogram p;
    p.window = window;
    const std::size_t bins = n / 2 + 1;
    p.freqs.resize(bins);
    p.power.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        p.freqs[k] = sample_rate * static_cast<double>(k) / static_cast<double>(n);
        double pw = std::norm(spectrum[k]) / (energy * static_cast<double>(n));
        const bool nyquist = (n % 2 == 0) && k == n / 2;
        if (k != 0 && !nyquist) pw *= 2.0;
        p.power[k] = pw;
    }
    return p;
}

// CDF of sin(theta) for uniform theta (arcsine law): 1/2 + arcsin(x)/pi.
inline double arcsine_cdf(double x) {
    if (!(x >= -1.0 && x <= 1.0)) throw ValidationError("arcsine_cdf: x outside [-1, 1]");
    return 0.5 + std::asin(x) / std::numbers::pi;
}

inline const BigInt kMinEntropyDenominator{10000};

// Undersampled sine pushed through the arcsine CDF. Rejects phase steps whose
// reduced denominator is below 10^4: those sequences cycle through too few
// phases to pass for random.
inline std::vector<double> undersampled_uniform(const SineSamplingSpec& spec) {
    const PhaseAccumulator probe(spec);
    if (probe.step_denominator() < kMinEntropyDenominator) {
        throw ValidationError(
            "undersampled_uniform: phase step frac(f/fs) has reduced denominator " +
            probe.step_denominator().str() +
            " < 10^4; the sampled sine is (nearly) periodic, not random (rationality guard)");
    }
    std::vector<double> u = sample_sine(spec);
    for (double& v : u) {
        v = arcsine_cdf(v);
        if (v >= 1.0) v = std::nextafter(1.0, 0.0);
    }
    return u;
}

struct ChiSquareReport {
    double chi2{0.0};
    int dof{0};
    double p_value{0.0};
    int bins{0};
    std::vector<std::uint64_t> counts;

    bool passes(double significance) const { return p_value > significance; }
};

// Pearson chi-square of values in [0, 1) against the uniform law.
inline ChiSquareReport chi_square_uniformity(std::span<const double> values, int bins = 64) {
    if (bins < 2) throw ValidationError("chi_square_uniformity: need >= 2 bins");
    if (values.empty()) throw ValidationError("chi_square_uniformity: no values");
    ChiSquareReport r;
    r.bins = bins;
    r.counts.assign(static_cast<std::size_t>(bins), 0);
    for (double v : values) {
        if (!(v >= 0.0 && v < 1.0)) throw ValidationError("chi_square_uniformity: value outside [0, 1)");
        auto b = static_cast<std::size_t>(v * bins);
        if (b >= r.counts.size()) b = r.counts.size() - 1;
        ++r.counts[b];
    }
    const double expected = static_cast<double>(values.size()) / bins;
    for (auto c : r.counts) {
        const double d = static_cast<double>(c) - expected;
        r.chi2 += d * d / expected;
    }
    r.dof = bins - 1;
    r.p_value = boost::math::gamma_q(0.5 * r.dof, 0.5 * r.chi2);
    return r;
}

}  // namespace decolab
