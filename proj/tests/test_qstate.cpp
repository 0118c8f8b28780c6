#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "entlab/entropy.hpp"
#include "entlab/qstate.hpp"
#include "test_support.hpp"

using namespace entlab;

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

BasisLabel label(std::int64_t site, Direction d, std::size_t width, std::initializer_list<std::size_t> flipped = {}) {
    SpinConfig spins(width);
    for (auto b : flipped) spins.flip(b);
    return {site, d, spins};
}

}  // namespace

TEST(SpinConfig, ComplementKeepsWidth) {
    SpinConfig s(70);
    s.flip(3);
    s.flip(69);
    const SpinConfig c = s.complemented();
    EXPECT_EQ(c.count(), 68u);
    EXPECT_FALSE(c.test(3));
    EXPECT_TRUE(c.test(4));
    EXPECT_EQ(c.complemented(), s);
}

TEST(Normalize, RescalesSingleTerm) {
    GrandState s(0);
    s.add(label(0, Direction::Right, 0), 2.0);
    const GrandState n = normalize(s);
    EXPECT_DOUBLE_EQ(n.amplitude(label(0, Direction::Right, 0)).real(), 1.0);
}

TEST(Normalize, EqualWeights) {
    GrandState s(1);
    s.add(label(0, Direction::Right, 1), 1.0);
    s.add(label(1, Direction::Left, 1, {0}), 1.0);
    const GrandState n = normalize(s);
    EXPECT_NEAR(n.amplitude(label(0, Direction::Right, 1)).real(), kInvSqrt2, 1e-15);
    EXPECT_NEAR(n.amplitude(label(1, Direction::Left, 1, {0})).real(), kInvSqrt2, 1e-15);
    EXPECT_NEAR(n.norm_squared(), 1.0, 1e-15);
}

TEST(Normalize, PreservesRelativePhase) {
    GrandState s(0);
    s.add(label(0, Direction::Right, 0), Complex{0.0, 3.0});
    s.add(label(1, Direction::Right, 0), Complex{4.0, 0.0});
    const GrandState n = normalize(s);
    EXPECT_NEAR(std::arg(n.amplitude(label(0, Direction::Right, 0))), std::numbers::pi / 2, 1e-15);
    EXPECT_NEAR(std::abs(n.amplitude(label(1, Direction::Right, 0))), 0.8, 1e-15);
}

TEST(Normalize, ZeroNorm) {
    GrandState s(0);
    s.add(label(0, Direction::Right, 0), 0.0);
    s.add(label(1, Direction::Right, 0), 0.0);
    try {
        normalize(s);
        FAIL() << "expected ZeroNorm";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroNorm);
    }
}

TEST(GrandState, PruneDropsTinyTermsWithoutRenormalizing) {
    GrandState s(0);
    s.add(label(0, Direction::Right, 0), 1.0);
    s.add(label(1, Direction::Right, 0), 1e-15);
    EXPECT_NEAR(s.prune(), 1e-30, 1e-40);
    EXPECT_EQ(s.size(), 1u);
    EXPECT_NEAR(s.pruned_weight(), 1e-30, 1e-40);
}

TEST(GrandState, RejectsWrongSpinWidth) {
    GrandState s(2);
    EXPECT_THROW(s.add(label(0, Direction::Right, 3), 1.0), Error);
}

TEST(PartialTrace, ProductStateIsPure) {
    GrandState s = GrandState::basis(0, Direction::Right, 1);
    const DensityMatrix rho = partial_trace(s);
    ASSERT_EQ(rho.dim(), 1);
    EXPECT_DOUBLE_EQ(rho.elements(0, 0).real(), 1.0);
}

TEST(PartialTrace, OrthogonalSpinStatesKillCoherence) {
    // Transmitted part flipped the spin, reflected part did not.
    const Complex t{kInvSqrt2, 0.0};
    const Complex r{0.0, kInvSqrt2};
    GrandState s(1);
    s.add(label(1, Direction::Right, 1, {0}), t);
    s.add(label(0, Direction::Left, 1), r);
    const DensityMatrix rho = partial_trace(s);
    ASSERT_EQ(rho.dim(), 2);
    EXPECT_NEAR(std::abs(rho.elements(0, 1)), 0.0, 1e-15);
    EXPECT_NEAR(rho.elements(0, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(rho.elements(1, 1).real(), 0.5, 1e-15);
}

TEST(PartialTrace, SharedSpinStateKeepsCoherence) {
    const Complex t{kInvSqrt2, 0.0};
    const Complex r{0.0, kInvSqrt2};
    GrandState s(1);
    s.add(label(1, Direction::Right, 1), t);
    s.add(label(0, Direction::Left, 1), r);
    const DensityMatrix rho = partial_trace(s);
    const auto a = *rho.index_of({1, Direction::Right});
    const auto b = *rho.index_of({0, Direction::Left});
    EXPECT_NEAR(std::abs(rho.elements(a, b) - t * std::conj(r)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(rho.elements(a, b) - Complex{0.0, -0.5}), 0.0, 1e-15);
    const Eigen::VectorXd eig = hermitian_eigenvalues(rho.elements);
    EXPECT_NEAR(eig.minCoeff(), 0.0, 1e-14);
    EXPECT_NEAR(eig.maxCoeff(), 1.0, 1e-14);
}

TEST(PartialTrace, PaddingAddsEmptyLabels) {
    GrandState s = GrandState::basis(0, Direction::Right, 0);
    const std::vector<SystemLabel> pad{{5, Direction::Left}};
    const DensityMatrix rho = partial_trace(s, pad);
    ASSERT_EQ(rho.dim(), 2);
    EXPECT_EQ(rho.elements(1, 1), Complex{});
}

TEST(PartialTraceProperty, RandomStatesGiveValidDensityMatrices) {
    Rng rng(20240611);
    for (int trial = 0; trial < 300; ++trial) {
        const auto terms = static_cast<std::size_t>(rng.uniform_int(1, 40));
        const auto width = static_cast<std::size_t>(rng.uniform_int(0, 6));
        const GrandState s = test_support::random_grand_state(rng, terms, width);
        const DensityMatrix rho = partial_trace(s);
        EXPECT_LE(max_hermitian_defect(rho.elements), 1e-12);
        EXPECT_NEAR(rho.elements.trace().real(), 1.0, 1e-10);
        EXPECT_GE(hermitian_eigenvalues(rho.elements).minCoeff(), -1e-10);
        EXPECT_NO_THROW(von_neumann(rho));
    }
}

TEST(PartialTraceProperty, SingleReservoirConfigurationIsPure) {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        SpinConfig spins(5);
        for (std::size_t b = 0; b < 5; ++b) spins.set(b, rng.uniform() < 0.5);
        GrandState s(5);
        const auto terms = rng.uniform_int(1, 12);
        for (std::int64_t n = 0; n < terms; ++n)
            s.add({rng.uniform_int(-6, 6), rng.uniform() < 0.5 ? Direction::Right : Direction::Left, spins},
                  rng.complex_normal());
        const DensityMatrix rho = partial_trace(normalize(s));
        EXPECT_LE((rho.elements * rho.elements - rho.elements).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(Fidelity, Examples) {
    GrandState a(0);
    a.add(label(0, Direction::Right, 0), 1.0);
    GrandState b(0);
    b.add(label(0, Direction::Right, 0), kInvSqrt2);
    b.add(label(1, Direction::Right, 0), kInvSqrt2);
    GrandState c(0);
    c.add(label(3, Direction::Left, 0), 1.0);
    EXPECT_NEAR(fidelity(a, a), 1.0, 1e-15);
    EXPECT_NEAR(fidelity(a, c), 0.0, 1e-15);
    EXPECT_NEAR(fidelity(a, b), 0.5, 1e-15);
}

TEST(FidelityProperty, SymmetricAndPhaseInvariant) {
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const GrandState a = test_support::random_grand_state(rng, 10, 3, 2);
        const GrandState b = test_support::random_grand_state(rng, 10, 3, 2);
        const double fab = fidelity(a, b);
        EXPECT_NEAR(fab, fidelity(b, a), 1e-14);
        EXPECT_GE(fab, 0.0);
        EXPECT_LE(fab, 1.0 + 1e-12);
        GrandState rotated = a;
        const Complex phase = std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi));
        rotated.transform_amplitudes([&](const BasisLabel&, Complex x) { return x * phase; });
        EXPECT_NEAR(fidelity(rotated, b), fab, 1e-14);
    }
}
