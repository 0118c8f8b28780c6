#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "entlab/brems.hpp"
#include "test_support.hpp"

using namespace entlab;

namespace {

// Independent oracle: adaptive Gauss-Kronrod on int_0^u (1 - e^{is}) / s ds.
Complex phi_quadrature(double u) {
    using boost::math::quadrature::gauss_kronrod;
    const double re = gauss_kronrod<double, 61>::integrate(
        [](double s) { return s == 0.0 ? 0.0 : (1.0 - std::cos(s)) / s; }, 0.0, u, 15, 1e-14);
    const double im = gauss_kronrod<double, 61>::integrate(
        [](double s) { return s == 0.0 ? 1.0 : std::sin(s) / s; }, 0.0, u, 15, 1e-14);
    return {re, -im};
}

BremsParams unit_prefactor() {
    BremsParams p;
    p.v_over_c = 0.5;
    p.alpha0 = 3.0 * std::numbers::pi / (8.0 * 0.25);
    return p;
}

std::vector<BremsParams> parameter_sets() {
    std::vector<BremsParams> out;
    const double v[] = {0.1, 0.3, 0.5, 0.7, 0.9};
    const double omega[] = {0.5, 2.0, 5.0, 10.0, 40.0};
    const double vf[] = {1.0, 0.5, 2.0, 1.0, 3.0};
    const double alpha[] = {1.0 / 137.036, 0.05, 1.0 / 137.036, 0.2, 0.5};
    for (int i = 0; i < 5; ++i) out.push_back({alpha[i], v[i], omega[i], vf[i]});
    return out;
}

}  // namespace

TEST(KernelPhi, VanishesAtOrigin) {
    EXPECT_EQ(kernel_phi(0.0, BremsParams{}), Complex{});
}

TEST(KernelPhi, UnitArgumentReference) {
    const BremsParams p = unit_prefactor();
    ASSERT_NEAR(p.prefactor(), 1.0, 1e-15);
    const Complex phi = kernel_phi(1.0, p);
    EXPECT_NEAR(phi.real(), 0.239811742, 1e-9);
    EXPECT_NEAR(phi.imag(), -0.946083070, 1e-9);
    const Complex oracle = phi_quadrature(1.0);
    EXPECT_NEAR(std::abs(phi - oracle), 0.0, 1e-12);
}

TEST(KernelPhi, ConjugateSymmetric) {
    const BremsParams p{0.1, 0.4, 3.0, 1.5};
    for (double x : {0.01, 0.3, 1.0, 7.5, 40.0}) EXPECT_EQ(kernel_phi(-x, p), std::conj(kernel_phi(x, p)));
}

// Property: series / special-function evaluation agrees with quadrature.
TEST(KernelPhiProperty, MatchesQuadratureOracle) {
    const BremsParams p = unit_prefactor();
    Rng rng(41);
    for (int n = 0; n < 200; ++n) {
        const double u = std::exp(rng.uniform(std::log(1e-4), std::log(60.0)));
        const Complex phi = kernel_phi(u, p);
        const Complex oracle = phi_quadrature(u);
        EXPECT_LE(std::abs(phi - oracle), 1e-8 * std::abs(oracle)) << "u " << u;
        EXPECT_GE(phi.real(), 0.0);
    }
}

TEST(Brems, ZeroPrefactorLeavesRhoUnchanged) {
    BremsParams p;
    p.alpha0 = 0.0;
    const GridDensityMatrix rho = gaussian_packet(-8.0, 8.0, 64, 0.0, 1.0, 1.5);
    const GridDensityMatrix out = apply_brems(rho, p);
    EXPECT_EQ(out.elements, rho.elements);
    const MomentumDistribution a = momentum_diagonal(rho);
    const MomentumDistribution b = momentum_diagonal(out);
    EXPECT_EQ(a.probability, b.probability);
}

TEST(Brems, GaussianPacketIsValidDensity) {
    const GridDensityMatrix rho = gaussian_packet(-10.0, 10.0, 256, 0.5, 1.2, 2.0);
    EXPECT_NEAR(von_neumann(rho.elements).bits, 0.0, 1e-10);
    EXPECT_NEAR(rho.elements.trace().real(), 1.0, 1e-12);
}

TEST(Brems, GridKernelIsGramian) {
    for (const BremsParams& p : parameter_sets()) {
        for (Eigen::Index n : {64, 256, 512}) {
            const DecoherenceMatrix beta = brems_beta(n, 20.0 / static_cast<double>(n - 1), p);
            const GramianCheck check = is_gramian(beta, 1e-8);
            EXPECT_TRUE(check.gramian) << "n " << n << " v/c " << p.v_over_c << " min " << check.min_eigenvalue;
            for (Eigen::Index i = 0; i < n; ++i) EXPECT_EQ(beta(i, i), Complex(1.0, 0.0));
        }
    }
}

TEST(Brems, EntropyStrictlyIncreasesAndDiagonalIsKept) {
    for (const BremsParams& p : parameter_sets()) {
        GridDensityMatrix rho = gaussian_packet(-10.0, 10.0, 256, 0.0, 1.0, 1.0);
        const Eigen::VectorXd diag = rho.elements.diagonal().real();
        const std::vector<double> s = iterate_brems(rho, p, 10);
        for (std::size_t i = 1; i < s.size(); ++i) EXPECT_GT(s[i], s[i - 1]) << "v/c " << p.v_over_c << " i " << i;
        for (int i = 0; i < 3; ++i) rho = apply_brems(rho, p);
        EXPECT_TRUE((rho.elements.diagonal().real().array() == diag.array()).all());
    }
}

TEST(Brems, MomentumDistributionChanges) {
    const BremsParams p{0.05, 0.5, 5.0, 1.0};
    const GridDensityMatrix rho = gaussian_packet(-10.0, 10.0, 128, 0.0, 1.0, 2.0);
    const MomentumDistribution before = momentum_diagonal(rho);
    const MomentumDistribution after = momentum_diagonal(apply_brems(rho, p));
    double l1 = 0.0;
    for (std::size_t i = 0; i < before.probability.size(); ++i)
        l1 += std::abs(before.probability[i] - after.probability[i]);
    EXPECT_GT(l1, 1e-3);
}

TEST(Brems, WidePacketHasNarrowMomentum) {
    const GridDensityMatrix rho = gaussian_packet(-40.0, 40.0, 256, 0.0, 8.0, 1.0);
    const MomentumDistribution m = momentum_diagonal(rho);
    double near = 0.0;
    for (std::size_t i = 0; i < m.k.size(); ++i)
        if (std::abs(m.k[i] - 1.0) < 0.25) near += m.probability[i];
    EXPECT_GT(near, 0.99);
}

// Property: H-theorem instance for random mixed inputs on the grid.
TEST(BremsProperty, EntropyNeverDecreases) {
    Rng rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        const BremsParams p{rng.uniform(0.0, 0.5), rng.uniform(0.05, 0.95), rng.uniform(0.1, 20.0),
                            rng.uniform(0.2, 3.0)};
        GridDensityMatrix rho = gaussian_packet(-6.0, 6.0, 48, rng.uniform(-1.0, 1.0), rng.uniform(0.3, 2.0));
        rho.elements = 0.5 * rho.elements + 0.5 * random_density_matrix(48, rng);
        EXPECT_GE(von_neumann(apply_brems(rho, p).elements).bits, von_neumann(rho.elements).bits - 1e-9);
    }
}

TEST(BremsParams, Validation) {
    BremsParams p;
    p.v_over_c = 1.0;
    EXPECT_THROW(p.validate(), Error);
    p = BremsParams{};
    p.omega_cutoff = 0.0;
    EXPECT_THROW(kernel_phi(1.0, p), Error);
}
