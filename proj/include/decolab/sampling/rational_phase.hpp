#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <string>

#include "decolab/errors.hpp"

namespace decolab {

using BigInt = boost::multiprecision::cpp_int;

// sin(2 pi f t) sampled at rate fs, with f = freq_num / freq_den Hz held exactly.
struct SineSamplingSpec {
    BigInt freq_num{0};
    BigInt freq_den{1};
    std::uint64_t sample_rate{1};
    std::uint64_t count{1};
    std::uint64_t phase0_num{0};  // initial phase, in turns
    std::uint64_t phase0_den{1};

    static SineSamplingSpec from_hz(const std::string& freq_hz, std::uint64_t fs,
                                    std::uint64_t count) {
        SineSamplingSpec s;
        s.freq_num = parse_bigint(freq_hz);
        s.sample_rate = fs;
        s.count = count;
        return s;
    }

    static BigInt parse_bigint(const std::string& text) {
        if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
            throw ValidationError("expected a non-negative decimal integer, got '" + text + "'");
        }
        return BigInt(text);
    }

    void validate() const {
        if (freq_num < 0) throw ValidationError("SineSamplingSpec: frequency must be >= 0");
        if (freq_den <= 0) throw ValidationError("SineSamplingSpec: freq_den must be > 0");
        if (sample_rate == 0) throw ValidationError("SineSamplingSpec: sample_rate must be > 0");
        if (count == 0) throw ValidationError("SineSamplingSpec: count must be >= 1");
        if (phase0_den == 0 || phase0_num >= phase0_den) {
            throw ValidationError("SineSamplingSpec: phase0 must be a rational in [0, 1)");
        }
    }
};

// Phase in turns, frac(phase0 + k f / fs), kept as position / denominator with
// integer arithmetic modulo the denominator. Never drifts.
class PhaseAccumulator {
public:
    explicit PhaseAccumulator(const SineSamplingSpec& spec) {
        spec.validate();
        // step = frac(f / fs) = (freq_num mod (freq_den fs)) / (freq_den fs), reduced
        BigInt step_den = spec.freq_den * BigInt(spec.sample_rate);
        BigInt step_num = spec.freq_num % step_den;
        BigInt g = boost::multiprecision::gcd(step_num, step_den);
        if (g == 0) g = 1;
        step_num /= g;
        step_den /= g;
        if (step_num == 0) step_den = 1;
        step_den_reduced_ = step_den;

        BigInt p_num = spec.phase0_num;
        BigInt p_den = spec.phase0_den;
        BigInt gp = boost::multiprecision::gcd(p_num, p_den);
        if (gp == 0) gp = 1;
        p_num /= gp;
        p_den /= gp;

        const BigInt den = boost::multiprecision::lcm(step_den, p_den);
        if (den > BigInt((std::numeric_limits<std::uint64_t>::max)() >> 1)) {
            throw CapacityError("PhaseAccumulator: reduced phase denominator exceeds 63 bits");
        }
        den_ = den.convert_to<std::uint64_t>();
        step_ = (step_num * (den / step_den)).convert_to<std::uint64_t>();
        start_ = (p_num * (den / p_den)).convert_to<std::uint64_t>();
        pos_ = start_;
    }

    std::uint64_t denominator() const noexcept { return den_; }
    std::uint64_t step() const noexcept { return step_; }
    std::uint64_t position() const noexcept { return pos_; }
    // Denominator of frac(f / fs) in lowest terms.
    const BigInt& step_denominator() const noexcept { return step_den_reduced_; }

    double turns() const {
        return static_cast<double>(pos_) / static_cast<double>(den_);
    }

    void advance() noexcept {
        pos_ += step_;  // both < 2^63, no overflow
        if (pos_ >= den_) pos_ -= den_;
    }

    // Position after k steps from phase0, computed directly.
    std::uint64_t position_at(std::uint64_t k) const noexcept {
        const unsigned __int128 prod = static_cast<unsigned __int128>(step_) * k;
        return static_cast<std::uint64_t>((prod % den_ + start_) % den_);
    }

    void seek(std::uint64_t k) noexcept { pos_ = position_at(k); }

private:
    std::uint64_t den_{1};
    std::uint64_t step_{0};
    std::uint64_t start_{0};
    std::uint64_t pos_{0};
    BigInt step_den_reduced_{1};
};

}  // namespace decolab
