// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "decolab/decolab.hpp"

using namespace decolab;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
    bool pass{false};
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), f, args...);
    return buf;
}

Verdict verdict(bool pass, std::string detail) { return {pass, std::move(detail)}; }

DickeParams dicke(int n, double g, double omega = 1.0) { return {n, g, omega, 0.0, 1}; }

// 1. Analytic survival amplitude against propagation under the truncated
//    effective Hamiltonian, n_max doubled until converged.
Verdict oracle_equivalence() {
    const auto times = numeric::linspace(0.0, 4 * kPi, 400);
    const std::vector<std::pair<const char*, RadiationState>> states{
        {"|0>", RadiationState::fock(0)},
        {"|1>", RadiationState::fock(1)},
        {"|3>", RadiationState::fock(3)},
        {"(|1>+|0>)/sqrt2", RadiationState::superposition(1)}};
    double worst = 0.0;
    std::string where;
    for (int n : {1, 2, 4, 8}) {
        for (const auto& [name, chi] : states) {
            DickeParams p = dicke(n, 0.1);
            p.n_max = adapt_fock_cutoff(p, chi.coeffs, times).n_max;
            const OperatorHandle h = build_effective_radiation_hamiltonian(p);
            for (double t : times) {
                const Complex a = survival_amplitude(chi, t, p).value;
                const Complex b = propagated_survival_amplitude(h, chi.coeffs, t, 1e-12);
                const double d = std::abs(a - b);
                if (d > worst) {
                    worst = d;
                    where = fmt("N=%d chi=%s t=%.4f", n, name, t);
                }
            }
        }
    }
    return verdict(worst <= 1e-8, fmt("max |analytic - propagated| = %.3e (%s), bound 1e-8", worst, where.c_str()));
}

// 2. |A(t)|^2 for the vacuum against the closed form exp(-|alpha|^2).
Verdict ground_state_closed_form() {
    const auto times = numeric::linspace(0.0, 4 * kPi, 400);
    double worst = 0.0;
    for (int n : {1, 2, 4, 8}) {
        const DickeParams p = dicke(n, 0.1);
        for (double t : times) {
            const double f = std::norm(survival_amplitude(RadiationState::fock(0), t, p).value);
            worst = std::max(worst, std::abs(f - fidelity_ground_exact(t, p)));
        }
    }
    return verdict(worst <= 1e-10, fmt("max |F - F_ground_exact| = %.3e, bound 1e-10", worst));
}

// 3. Width formulas against the exact second moment of H_eff.
Verdict sigma_formulas() {
    double worst = 0.0;
    for (int n_atoms : {1, 3, 10}) {
        for (double g : {0.05, 0.5}) {
            for (int n = 0; n <= 5; ++n) {
                DickeParams p = dicke(n_atoms, g);
                p.n_max = initial_fock_cutoff(p, n);
                const OperatorHandle h = build_effective_radiation_hamiltonian(p);
                auto rel = [](double s, double var) { return std::abs(s * s - var) / var; };
                worst = std::max(worst, rel(sigma_fock(n, p), variance(h, RadiationState::fock(n).to_state(p.n_max))));
                if (n >= 1) {
                    const double v = variance(h, RadiationState::superposition(n).to_state(p.n_max));
                    worst = std::max(worst, rel(sigma_superposition(n, p), v));
                }
            }
        }
    }
    return verdict(worst <= 1e-9, fmt("max relative |sigma^2 - Var(H_eff)| / Var = %.3e, bound 1e-9", worst));
}

// 4. Small-time series against the Gaussian e^{-(2n+1)(Ngt)^2}.
Verdict small_time_window() {
    double worst = 0.0;
    for (int n_atoms : {1, 10, 100}) {
        for (double g : {0.001, 0.01, 0.1}) {
            const DickeParams p = dicke(n_atoms, g);
            const double t_max = std::min(0.05 / (n_atoms * g), 0.1 / p.mode_freq);
            for (int n = 0; n <= 3; ++n) {
                for (double t : numeric::linspace(0.0, t_max, 101)) {
                    worst = std::max(worst, std::abs(fidelity_fock_smalltime(n, t, p) - fidelity_fock_gaussian(n, t, p)));
                }
            }
        }
    }
    return verdict(worst <= 0.01, fmt("max |F_series - F_gauss| = %.3e, bound 0.01", worst));
}

// 5. Revivals at 2 pi k / omega and FWHM proportional to 1/N.
Verdict recurrence_law() {
    const double omega = 1.0;
    const DickeParams p = dicke(100, 0.1, omega);
    const auto grid = numeric::linspace(0.0, 3.5 * 2 * kPi / omega, 14001);
    const auto peaks = recurrence_peaks(ground_exact_curve(p, grid), omega);
    const double step = grid[1] - grid[0];
    bool ok = peaks.size() == 4;
    double worst_height = 0.0;
    for (std::size_t k = 0; k < peaks.size(); ++k) {
        ok = ok && peaks[k].period_index == static_cast<long>(k) &&
             std::abs(peaks[k].time - 2 * kPi * static_cast<double>(k) / omega) < step;
        worst_height = std::max(worst_height, std::abs(peaks[k].height - 1.0));
    }
    ok = ok && worst_height <= 1e-9;

    const auto fine = numeric::linspace(0.0, 0.3, 30001);
    double worst_ratio = 0.0;
    for (double ng : {10.0, 20.0}) {
        const int n = static_cast<int>(std::lround(ng / 0.1));
        const double w1 = fwhm(ground_exact_curve(dicke(n, 0.1, omega), fine));
        const double w2 = fwhm(ground_exact_curve(dicke(2 * n, 0.1, omega), fine));
        worst_ratio = std::max(worst_ratio, std::abs(w1 / w2 - 2.0) / 2.0);
    }
    ok = ok && worst_ratio <= 0.01;
    return verdict(ok, fmt("%zu peaks (k<=3), max |height-1| = %.3e; max |FWHM(N)/FWHM(2N)/2 - 1| = %.3e",
                           peaks.size(), worst_height, worst_ratio));
}

// 6. Fitted Gaussian width of the analytic curves grows linearly in N.
Verdict dicke_scaling_exponent() {
    const std::vector<int> ns{5, 10, 20, 40};
    const auto grid = numeric::linspace(0.0, 0.3, 200);
    std::vector<double> sigma;
    for (int n : ns) sigma.push_back(fit_gaussian(analytic_fidelity_curve(RadiationState::fock(0), dicke(n, 0.1), grid)).sigma);
    const ScalingReport r = make_scaling_report(ns, sigma);
    return verdict(std::abs(r.exponent - 1.0) <= 0.02, fmt("exponent = %.5f, target 1.00 +- 0.02", r.exponent));
}

// 7. Transverse Ising chain: extensive variance, convergence to the Gaussian,
//    sqrt(N) width scaling.
Verdict spin_hmh_and_trend() {
    auto tfi = [](int n) { return SpinChainSpec::transverse_field_ising(n, 1.0, 1.0); };
    const auto rule = ProductStateRule::all_up();

    std::vector<int> ns_a;
    for (int n = 4; n <= 12; ++n) ns_a.push_back(n);
    const HMHReport hmh = hmh_condition_check(tfi, rule, ns_a);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < ns_a.size(); ++i) {
        sxy += ns_a[i] * hmh.sigma_sq[i];
        sxx += static_cast<double>(ns_a[i]) * ns_a[i];
    }
    const double slope = sxy / sxx;
    const bool a = std::abs(slope - 1.0) <= 1e-6;

    std::vector<double> dev;
    for (int n : {6, 10, 14}) {
        const OperatorHandle h = build_spin_hamiltonian(tfi(n));
        const QuantumState phi = rule.build(n);
        const double sigma = std::sqrt(variance(h, phi));
        const auto grid = numeric::linspace(0.0, 1.5 / sigma, 200);
        dev.push_back(gaussian_deviation({fidelity_curve(h, phi, grid, 1e-12), sigma}, 1.5));
    }
    const bool b = dev[1] < dev[0] && dev[2] < dev[1];

    const std::vector<int> ns_c{6, 8, 10, 12};
    std::vector<double> fitted;
    for (int n : ns_c) {
        const OperatorHandle h = build_spin_hamiltonian(tfi(n));
        const QuantumState phi = rule.build(n);
        const double sigma_est = std::sqrt(variance(h, phi));
        const auto grid = numeric::linspace(0.0, 0.5 / sigma_est, 200);
        fitted.push_back(fit_gaussian(fidelity_curve(h, phi, grid, 1e-12)).sigma);
    }
    const double exponent = make_scaling_report(ns_c, fitted).exponent;
    const bool c = std::abs(exponent - 0.5) <= 0.05;
    return verdict(a && b && c,
                   fmt("(a) slope %.9f %s; (b) deviation N=6,10,14: %.4f, %.4f, %.4f %s; (c) exponent %.4f %s", slope,
                       a ? "ok" : "FAIL", dev[0], dev[1], dev[2], b ? "ok" : "FAIL", exponent, c ? "ok" : "FAIL"));
}

// 8. Zero coupling: the fidelity factorizes into single-site fidelities,
//    F_1 = cos^2(|h| t) + sin^2(|h| t) <n.sigma>^2 for H_1 = h.sigma.
Verdict factorization() {
    const double hx = 0.9, hz = 0.4;
    const double hn = std::hypot(hx, hz);
    const auto rule = ProductStateRule::uniform({0.7, 0.3});
    const double theta = 0.7, phi = 0.3;
    // Bloch vector of cos(theta/2)|up> + e^{i phi} sin(theta/2)|down>
    const double sx = std::sin(theta) * std::cos(phi);
    const double sz = std::cos(theta);
    const double proj = (hx * sx + hz * sz) / hn;
    const auto times = numeric::linspace(0.0, 6.0, 121);
    double worst = 0.0;
    for (int n = 2; n <= 10; ++n) {
        SpinChainSpec s;
        s.n_sites = n;
        s.coupling_zz = 0.0;
        s.field_x = hx;
        s.field_z = hz;
        const auto c = fidelity_curve(build_spin_hamiltonian(s), rule.build(n), times, 1e-12);
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double ct = std::cos(hn * times[i]);
            const double st = std::sin(hn * times[i]);
            const double f1 = ct * ct + st * st * proj * proj;
            worst = std::max(worst, std::abs(c.values[i] - std::pow(f1, n)));
        }
    }
    return verdict(worst <= 1e-10, fmt("max |F_N - F_1^N| = %.3e over N=2..10, bound 1e-10", worst));
}

// 9. Columns of the displacement matrix have unit norm.
Verdict displacement_unitarity() {
    double worst = 0.0;
    for (double mag : {0.0, 0.5, 2.0, 5.0, 8.0}) {
        for (double arg : {0.0, 1.1, -2.5}) {
            const Complex a = std::polar(mag, arg);
            for (int n = 0; n <= 50; ++n) {
                double sum = 0.0;
                for (int m = 0; m <= n + 400; ++m) sum += std::norm(displaced_element(m, n, a));
                worst = std::max(worst, std::abs(sum - 1.0));
            }
        }
    }
    return verdict(worst <= 1e-8, fmt("max |sum_m |<m|D|n>|^2 - 1| = %.3e, bound 1e-8", worst));
}

// 10. Exact-phase sampling: tone periodogram, arcsine-uniform chi-square,
//     aliasing bit-identity.
Verdict sampling_pipeline() {
    const auto tone = sample_sine(SineSamplingSpec::from_hz("100000", 1000000, 4096));
    const Periodogram pg = periodogram(tone, 1e6);
    std::vector<double> sorted = pg.power;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
    const double median = sorted[sorted.size() / 2];
    const double peak_f = pg.freqs[pg.peak_bin()];
    const double db = 10.0 * std::log10(pg.power[pg.peak_bin()] / median);
    const bool a = std::abs(peak_f - 1e5) <= 1e6 / 4096.0 && db >= 40.0;

    const std::string f = "10000000000000000000000000000000000000007919";  // 1e43 + 7919
    const std::string f_alias = "10000000000000000000000000000000000001007919";  // f + fs
    const auto spec = SineSamplingSpec::from_hz(f, 1000000, 100000);
    const ChiSquareReport chi = chi_square_uniformity(undersampled_uniform(spec), 64);
    const bool b1 = chi.passes(0.001);
    const auto x1 = sample_sine(spec);
    const auto x2 = sample_sine(SineSamplingSpec::from_hz(f_alias, 1000000, 100000));
    const bool b2 = x1.size() == x2.size() && std::equal(x1.begin(), x1.end(), x2.begin(), [](double u, double v) {
                        return std::bit_cast<std::uint64_t>(u) == std::bit_cast<std::uint64_t>(v);
                    });
    return verdict(a && b1 && b2, fmt("(a) peak %.2f Hz, %.1f dB over median; (b) chi2 = %.2f (dof %d), p = %.4f; "
                                      "f vs f+fs bit-identical: %s",
                                      peak_f, db, chi.chi2, chi.dof, chi.p_value, b2 ? "yes" : "no"));
}

// 11. Propagator contracts on random instances of each Hamiltonian family.
Verdict propagator_contracts() {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> tdist(0.05, 3.0);
    std::normal_distribution<double> gauss;
    auto random_state = [&](Index dim) {
        Vector v(dim);
        for (Index i = 0; i < dim; ++i) v(i) = Complex(gauss(rng), gauss(rng));
        return Vector(v.normalized());
    };
    double worst_norm = 0.0, worst_comp = 0.0;
    auto check = [&](const OperatorHandle& h) {
        const Vector psi = random_state(h.dim());
        const double t1 = tdist(rng), t2 = tdist(rng);
        const Vector once = evolve_vector(h, psi, t1 + t2, 1e-12);
        const Vector twice = evolve_vector(h, evolve_vector(h, psi, t1, 1e-12), t2, 1e-12);
        worst_norm = std::max(worst_norm, std::abs(once.norm() - 1.0));
        worst_comp = std::max(worst_comp, (once - twice).norm());
    };
    std::uniform_int_distribution<int> spins(3, 10);
    for (int i = 0; i < 20; ++i) {
        SpinChainSpec s;
        s.n_sites = spins(rng);
        s.coupling_zz = u(rng);
        s.coupling_xx = u(rng);
        s.coupling_yy = u(rng);
        s.field_x = u(rng);
        s.field_z = u(rng);
        check(build_spin_hamiltonian(s));
    }
    std::uniform_int_distribution<int> atoms(1, 12);
    for (int i = 0; i < 20; ++i) {
        DickeParams p{atoms(rng), 0.2 * u(rng), 0.5 + std::abs(u(rng)), 0.0, 1};
        p.n_max = initial_fock_cutoff(p, 5);
        check(build_effective_radiation_hamiltonian(p));
    }
    std::uniform_int_distribution<int> small(1, 4);
    for (int i = 0; i < 20; ++i) {
        DickeParams p{small(rng), 0.3 * u(rng), 0.5 + std::abs(u(rng)), u(rng), 1};
        p.n_max = 20 + 10 * small(rng);
        check(build_full_dicke_hamiltonian(p));
    }
    return verdict(worst_norm <= 1e-10 && worst_comp <= 1e-9,
                   fmt("60 triples (spin, effective Dicke, full Dicke): max norm defect %.3e (<= 1e-10), "
                       "max composition defect %.3e (<= 1e-9)",
                       worst_norm, worst_comp));
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"Dicke oracle equivalence", oracle_equivalence},
        {"ground-state closed form", ground_state_closed_form},
        {"sigma formulas", sigma_formulas},
        {"small-time Gaussian window", small_time_window},
        {"recurrence law", recurrence_law},
        {"Dicke scaling exponent", dicke_scaling_exponent},
        {"spin HMH and Gaussian trend", spin_hmh_and_trend},
        {"product-state factorization", factorization},
        {"displacement unitarity", displacement_unitarity},
        {"exact-phase sampling", sampling_pipeline},
        {"propagator contracts", propagator_contracts},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!v.pass) ++failures;
        std::printf("%s %2zu  %-28s %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    v.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
    return failures == 0 ? 0 : 1;
}
