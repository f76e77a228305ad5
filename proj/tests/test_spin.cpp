#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "decolab/core/moments.hpp"
#include "decolab/core/spin_chain.hpp"
#include "decolab/numeric/interpolate.hpp"
#include "decolab/spin/fidelity.hpp"
#include "decolab/spin/fidelity_curve.hpp"
#include "decolab/spin/product_state.hpp"
#include "oracles.hpp"

using namespace decolab;

namespace {

SpinChainSpec tfi(int n, double j = 1.0, double h = 1.0) {
    return SpinChainSpec::transverse_field_ising(n, j, h);
}

FidelityCurve tfi_curve(int n, std::span<const double> times, double j = 1.0, double h = 1.0) {
    return fidelity_curve(build_spin_hamiltonian(tfi(n, j, h)), ProductStateRule::all_up().build(n),
                          times, 1e-12);
}

}  // namespace

TEST(ProductState, AllUpIsBasisStateZero) {
    const auto s = ProductStateRule::all_up().build(4);
    EXPECT_EQ(s.amplitudes()(0), Complex(1.0));
    EXPECT_NEAR(s.amplitudes().norm(), 1.0, 1e-15);
}

TEST(ProductState, AlternatingRuleFactorizes) {
    const auto rule = ProductStateRule::alternating({0.3, 0.0}, {2.0, 1.1});
    const auto s = rule.build(3);
    // amplitude of |down, up, down> (bits 0 and 2 set)
    const Complex even_down = std::polar(std::sin(0.15), 0.0);
    const Complex odd_up = std::cos(1.0);
    EXPECT_NEAR(std::abs(s.amplitudes()(5) - even_down * odd_up * even_down), 0.0, 1e-15);
    EXPECT_THROW(rule.build(0), ValidationError);
}

TEST(FidelityCurveTest, EigenstateGivesConstantOne) {
    const auto times = numeric::linspace(0.0, 5.0, 40);
    const auto c = tfi_curve(6, times, 1.0, 0.0);
    for (double v : c.values) EXPECT_NEAR(v, 1.0, 1e-14);
    EXPECT_EQ(c.source, CurveSource::exact_propagation);
}

TEST(FidelityCurveTest, QuadraticShortTimeLaw) {
    const std::vector<double> times{0.0, 0.05, 0.1};
    const auto c = tfi_curve(6, times);
    EXPECT_EQ(c.values[0], 1.0);
    EXPECT_NEAR(c.values[1], 0.9851, 5e-4);
    EXPECT_NEAR(c.values[1], 1.0 - 6.0 * 0.05 * 0.05, 5e-4);
}

TEST(FidelityCurveTest, ZeroCouplingIsCosineToTheEighth) {
    const auto times = numeric::linspace(0.0, 3.0, 61);
    const auto c = tfi_curve(4, times, 0.0, 1.0);
    for (std::size_t i = 0; i < times.size(); ++i) {
        EXPECT_NEAR(c.values[i], std::pow(std::cos(times[i]), 8), 1e-12);
    }
}

TEST(FidelityCurveTest, ProductDynamicsFactorizes) {
    const auto rule = ProductStateRule::uniform({0.7, 0.3});
    const auto times = numeric::linspace(0.0, 4.0, 41);
    SpinChainSpec single;
    single.field_x = 0.9;
    single.field_z = 0.4;
    const DenseMatrix h1 = 0.9 * oracle::pauli('x') + 0.4 * oracle::pauli('z');
    const Vector phi1 = rule.build(1).amplitudes();
    for (int n = 2; n <= 10; n += 2) {
        single.n_sites = n;
        const auto c = fidelity_curve(build_spin_hamiltonian(single), rule.build(n), times, 1e-12);
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double f1 = std::norm(phi1.dot(oracle::expm_evolve(h1, phi1, times[i])));
            EXPECT_NEAR(c.values[i], std::pow(f1, n), 1e-10);
        }
    }
}

TEST(FidelityCurveTest, RescalingInvariance) {
    const auto times = numeric::linspace(0.0, 2.0, 21);
    SpinChainSpec s = tfi(7, 0.8, 1.1);
    s.coupling_xx = 0.3;
    const auto rule = ProductStateRule::uniform({0.4, 0.2});
    const auto base = fidelity_curve(build_spin_hamiltonian(s), rule.build(7), times, 1e-12);
    for (double lambda : {0.5, 3.0}) {
        std::vector<double> scaled_t;
        for (double t : times) scaled_t.push_back(t / lambda);
        const auto c = fidelity_curve(build_spin_hamiltonian(s.scaled(lambda)), rule.build(7), scaled_t, 1e-12);
        for (std::size_t i = 0; i < times.size(); ++i) EXPECT_NEAR(c.values[i], base.values[i], 1e-9);
    }
}

TEST(FidelityCurveTest, GridPreconditions) {
    const auto h = build_spin_hamiltonian(tfi(4));
    const auto phi = ProductStateRule::all_up().build(4);
    EXPECT_THROW(fidelity_curve(h, phi, std::vector<double>{}, 1e-12), ValidationError);
    EXPECT_THROW(fidelity_curve(h, phi, std::vector<double>{0.1, 0.2}, 1e-12), ValidationError);
    EXPECT_THROW(fidelity_curve(h, phi, std::vector<double>{0.0, 0.2, 0.1}, 1e-12), ValidationError);
    EXPECT_THROW(default_time_grid(0.0), ValidationError);
    const auto g = default_time_grid(2.0);
    EXPECT_EQ(g.size(), 200u);
    EXPECT_DOUBLE_EQ(g.back(), 1.5);
}

TEST(FidelityCurveTest, ClampingContract) {
    EXPECT_EQ(clamp_fidelity(1.0 + 5e-13), 1.0);
    EXPECT_EQ(clamp_fidelity(-5e-13), 0.0);
    EXPECT_THROW(clamp_fidelity(1.0 + 1e-9), RangeError);
}

TEST(HMHCheck, TransverseIsingIsExactlyLinear) {
    const std::vector<int> ns{4, 6, 8, 10};
    const auto r = hmh_condition_check([](int n) { return tfi(n); }, ProductStateRule::all_up(), ns);
    for (std::size_t i = 0; i < ns.size(); ++i) EXPECT_NEAR(r.sigma_sq[i], ns[i], 1e-12);
    EXPECT_NEAR(r.c_lower, 1.0, 1e-12);
    EXPECT_TRUE(r.passed);
    EXPECT_GT(r.local_bound, 0.0);
    EXPECT_TRUE(std::isfinite(r.local_bound));
}

TEST(HMHCheck, ZeroHamiltonianAndEigenstateFail) {
    const std::vector<int> ns{4, 6};
    const auto zero = hmh_condition_check([](int n) { return tfi(n, 0.0, 0.0); },
                                          ProductStateRule::all_up(), ns);
    EXPECT_EQ(zero.sigma_sq, std::vector<double>({0.0, 0.0}));
    EXPECT_FALSE(zero.passed);
    const auto eig = hmh_condition_check([](int n) { return tfi(n, 1.0, 0.0); },
                                         ProductStateRule::all_up(), ns);
    EXPECT_FALSE(eig.passed);
}

TEST(HMHCheck, AgreesWithDenseSecondMoment) {
    const auto rule = ProductStateRule::alternating({0.5, 0.1}, {1.9, -0.7});
    auto family = [](int n) {
        SpinChainSpec s = tfi(n, 0.7, 1.3);
        s.coupling_yy = -0.4;
        s.field_z = 0.2;
        return s;
    };
    const std::vector<int> ns{2, 3, 5, 8, 10};
    const auto r = hmh_condition_check(family, rule, ns);
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double ref = oracle::dense_variance(oracle::spin_hamiltonian(family(ns[i])),
                                                  rule.build(ns[i]).amplitudes());
        EXPECT_NEAR(r.sigma_sq[i], ref, 1e-10);
    }
}

TEST(HMHCheck, RejectsUnorderedInput) {
    const std::vector<int> ns{6, 4};
    EXPECT_THROW(hmh_condition_check([](int n) { return tfi(n); }, ProductStateRule::all_up(), ns),
                 ValidationError);
    EXPECT_THROW(hmh_condition_check([](int n) { return tfi(n); }, ProductStateRule::all_up(),
                                     std::span<const int>{}),
                 ValidationError);
}

TEST(GaussianConvergence, GaussianModelHasInterpolationErrorOnly) {
    const double sigma = 2.5;
    const auto times = numeric::linspace(0.0, 3.0 / sigma, 200);
    const SigmaCurve sc{gaussian_model_curve(sigma, times), sigma};
    EXPECT_LE(gaussian_deviation(sc, 1.5), 1e-6);
}

TEST(GaussianConvergence, DeviationShrinksWithChainLength) {
    std::vector<SigmaCurve> curves;
    for (int n : {6, 14}) {
        const double sigma = std::sqrt(static_cast<double>(n));
        const auto times = numeric::linspace(0.0, 1.5 / sigma, 120);
        curves.push_back({tfi_curve(n, times), sigma});
    }
    const auto dev = gaussian_convergence(curves, 1.5);
    EXPECT_LT(dev[1], dev[0]);
}

TEST(GaussianConvergence, SingleSpinHasNoGaussianRegime) {
    // |<up|e^{-i sigma_x t}|up>|^2 = cos^2 t, sigma = 1
    const auto times = numeric::linspace(0.0, 3.0, 301);
    std::vector<double> v;
    for (double t : times) v.push_back(std::pow(std::cos(t), 2));
    const SigmaCurve sc{{times, v, CurveSource::analytic_formula, "single spin"}, 1.0};
    EXPECT_GT(gaussian_deviation(sc, 3.0), 0.5);
}

TEST(GaussianConvergence, ShortCoverageIsARangeError) {
    const auto times = numeric::linspace(0.0, 0.5, 50);
    const SigmaCurve sc{gaussian_model_curve(1.0, times), 1.0};
    EXPECT_THROW(gaussian_deviation(sc, 1.5), RangeError);
    EXPECT_THROW(gaussian_convergence(std::span<const SigmaCurve>(&sc, 1), 0.0), ValidationError);
}
