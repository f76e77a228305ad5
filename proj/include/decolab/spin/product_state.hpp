#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include "decolab/core/state.hpp"
#include "decolab/errors.hpp"

namespace decolab {

// Site state cos(theta/2)|up> + e^{i phi} sin(theta/2)|down>.
struct BlochAngles {
    double theta{0.0};
    double phi{0.0};
};

// Per-site Bloch direction, uniform or alternating between even and odd sites.
struct ProductStateRule {
    BlochAngles even{};
    std::optional<BlochAngles> odd{};

    static ProductStateRule all_up() { return {}; }
    static ProductStateRule uniform(BlochAngles a) { return {a, std::nullopt}; }
    static ProductStateRule alternating(BlochAngles even, BlochAngles odd) { return {even, odd}; }

    BlochAngles site(int i) const { return (odd && (i % 2 == 1)) ? *odd : even; }

    QuantumState build(int n_sites) const {
        if (n_sites < 1) throw ValidationError("ProductStateRule: n_sites must be >= 1");
        const Basis basis = Basis::spins(n_sites);
        Vector amps(basis.dim());
        for (Index x = 0; x < basis.dim(); ++x) {
            Complex a = 1.0;
            for (int i = 0; i < n_sites; ++i) {
                const BlochAngles b = site(i);
                const bool down = (static_cast<std::uint64_t>(x) >> i) & 1U;
                a *= down ? std::polar(std::sin(0.5 * b.theta), b.phi)
                          : Complex(std::cos(0.5 * b.theta));
            }
            amps(x) = a;
        }
        return QuantumState::from_amplitudes(basis, std::move(amps),
                                             QuantumState::Normalize::yes);
    }
};

}  // namespace decolab
