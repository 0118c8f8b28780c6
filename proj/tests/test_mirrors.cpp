#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "entlab/mirrors.hpp"

using namespace entlab;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

WavePacket standard_packet() { return WavePacket::gaussian(16384, 0.0025, 1.0); }

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / static_cast<double>(x.size());
        my += y[i] / static_cast<double>(y.size());
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace

TEST(EvolveFree, ZeroTimeMatchesDirectFourierSum) {
    const WavePacket p = WavePacket::gaussian(256, 0.1, 1.0, 0.7, 1.5);
    const SpatialWave psi = evolve_free(p, 0.0);
    for (Eigen::Index j = 0; j < p.size(); j += 17) {
        Complex direct{};
        for (Eigen::Index n = 0; n < p.size(); ++n) direct += p.dk / kTwoPi * p.f[n] * std::polar(1.0, p.k(n) * psi.x(j));
        EXPECT_NEAR(std::abs(psi.psi[j] - direct), 0.0, 1e-12);
    }
}

TEST(EvolveFree, NormPreserved) {
    const WavePacket p = standard_packet();
    for (double tau : {0.0, 1.0, 10.0, 60.0, 120.0}) EXPECT_NEAR(evolve_free(p, tau).norm_squared(), 1.0, 1e-10);
}

TEST(EvolveFree, InnerProductsPreserved) {
    const WavePacket a = WavePacket::gaussian(8192, 0.005, 1.0, 0.5, -3.0);
    const WavePacket b = WavePacket::gaussian(8192, 0.005, 0.7, -0.2, 2.0);
    const Complex before = overlap(evolve_free(a, 0.0), evolve_free(b, 0.0));
    for (double tau : {5.0, 25.0, 50.0})
        EXPECT_NEAR(std::abs(overlap(evolve_free(a, tau), evolve_free(b, tau)) - before), 0.0, 1e-10);
}

TEST(EvolveFree, ApproachesStationaryPhaseEnvelope) {
    const WavePacket p = standard_packet();
    double previous = 1e9;
    for (double tau : {5.0, 20.0, 80.0}) {
        const SpatialWave psi = evolve_free(p, tau);
        double dev = 0.0;
        for (Eigen::Index j = 0; j < psi.size(); ++j) {
            const double k = psi.x(j) / tau;  // m = hbar = 1
            const double env = std::exp(-k * k / 4.0) * std::abs(p.f[p.size() / 2]) / std::sqrt(kTwoPi * tau);
            dev += std::pow(std::abs(psi.psi[j]) - env, 2) * psi.dx;
        }
        EXPECT_LT(dev, previous);
        previous = dev;
    }
    EXPECT_LT(previous, 1e-3);
}

TEST(EvolveFree, ReportsAliasingWithUsableSuggestion) {
    WavePacket p = WavePacket::gaussian(4096, 0.01, 1.0);
    try {
        evolve_free(p, 200.0);
        FAIL();
    } catch (const GridAliasingError& e) {
        EXPECT_EQ(e.code(), ErrorCode::GridAliasing);
        const double dk = 0.99 * e.suggested_dk();
        EXPECT_LT(dk, 0.01);
        const WavePacket q = WavePacket::gaussian(16384, dk, 1.0);
        EXPECT_NO_THROW(evolve_free(q, 200.0));
    }
}

TEST(PlanMirrors, TilesKeepResidualBelowEpsilon) {
    const WavePacket p = standard_packet();
    for (double tau : {10.0, 40.0}) {
        const SpatialWave psi = evolve_free(p, tau);
        for (double eps : {0.4, 0.1, 0.02}) {
            const MirrorPlan plan = plan_mirrors(psi, tau, eps);
            ASSERT_EQ(plan.edges.size(), plan.count() + 1);
            EXPECT_TRUE(std::is_sorted(plan.positions.begin(), plan.positions.end()));
            for (Eigen::Index j = 0; j < psi.size(); ++j) EXPECT_LE(plan.residual_phase(psi.x(j)), eps * (1 + 1e-12));
        }
    }
}

TEST(PlanMirrors, CountScalesAsRootTauOverEpsilon) {
    const WavePacket p = standard_packet();
    const auto n = [&](double tau, double eps) { return static_cast<double>(plan_mirrors(p, tau, eps).count()); };
    EXPECT_NEAR(n(100.0, 0.1) / n(25.0, 0.1), 2.0, 0.4);
    EXPECT_NEAR(n(40.0, 0.025) / n(40.0, 0.1), 2.0, 0.4);
    EXPECT_EQ(n(10.0, 1e4), 1.0);
}

TEST(Conjugation, SingleTileResidualIsFullQuadraticPhase) {
    const WavePacket p = standard_packet();
    const SpatialWave psi = evolve_free(p, 10.0);
    const MirrorPlan plan = plan_mirrors(psi, 10.0, 1e4);
    ASSERT_EQ(plan.count(), 1u);
    const SpatialWave approx = apply_approximate_conjugation(psi, plan);
    const double centre = plan.positions.front();
    for (Eigen::Index j = 0; j < psi.size(); j += 97) {
        if (!plan.covers(psi.x(j)) || std::abs(psi.psi[j]) < 1e-6) continue;
        const double d = psi.x(j) - centre;
        const Complex expected = std::conj(psi.psi[j]) * std::polar(1.0, d * d / 20.0);
        EXPECT_NEAR(std::abs(approx.psi[j] - expected), 0.0, 1e-14);
    }
}

TEST(Conjugation, DenseMirrorsConvergeToConjugate) {
    const WavePacket p = standard_packet();
    const SpatialWave psi = evolve_free(p, 30.0);
    double previous = 1e9;
    for (double eps : {0.1, 0.01, 1e-3, 1e-4}) {
        const MirrorPlan plan = plan_mirrors(psi, 30.0, eps);
        const double d = covered_conjugation_distance(psi, apply_approximate_conjugation(psi, plan), plan);
        EXPECT_LT(d, previous);
        previous = d;
    }
    EXPECT_LT(previous, 1e-4);
}

// Property: ||psi~ - psi*|| <= max |alpha| for every constructed plan.
TEST(ConjugationProperty, NormDistanceBound) {
    const WavePacket p = standard_packet();
    for (double tau : {5.0, 12.0, 30.0, 75.0})
        for (double eps : {0.6, 0.3, 0.1, 0.03, 0.01}) {
            const SpatialWave psi = evolve_free(p, tau);
            const MirrorPlan plan = plan_mirrors(psi, tau, eps);
            EXPECT_LE(covered_conjugation_distance(psi, apply_approximate_conjugation(psi, plan), plan), eps)
                << "tau " << tau << " eps " << eps;
        }
}

TEST(Refocus, ExactConjugationRestoresPacket) {
    const WavePacket p = standard_packet();
    for (double tau : {10.0, 100.0}) EXPECT_GE(refocus_fidelity_exact(p, tau), 1.0 - 1e-8);
}

TEST(Refocus, PiecewiseConjugationDeficitIsSmall) {
    const RefocusResult r = refocus_fidelity(standard_packet(), 60.0, 0.1);
    EXPECT_LE(1.0 - r.fidelity, 0.01);
    EXPECT_LT(r.deficit_coefficient, 1.0);
    EXPECT_NEAR(r.tail_weight, 1.0 - kMirrorCoverage, 2e-4);
}

TEST(Refocus, NoConjugationDoesNotRefocus) {
    const WavePacket p = standard_packet();
    const SpatialWave back = propagate(evolve_free(p, 100.0), p, 100.0);
    EXPECT_LT(std::norm(overlap(evolve_free(p, 0.0).conjugate(), back)), 0.02);
}

TEST(RefocusProperty, DeficitShrinksWithEpsilon) {
    const WavePacket p = standard_packet();
    for (double tau : {10.0, 50.0}) {
        double previous = 1.0;
        for (double eps : {0.4, 0.2, 0.1, 0.05}) {
            const double deficit = 1.0 - refocus_fidelity(p, tau, eps).fidelity;
            EXPECT_LE(deficit, previous) << "tau " << tau << " eps " << eps;
            previous = deficit;
        }
    }
}

TEST(PlanMirrorsProperty, LogLogSlopes) {
    const WavePacket p = standard_packet();
    std::vector<double> lt, ln_tau, le, ln_eps;
    for (double tau : {10.0, 17.8, 31.6, 56.2, 100.0}) {
        lt.push_back(std::log(tau));
        ln_tau.push_back(std::log(static_cast<double>(plan_mirrors(p, tau, 0.1).count())));
    }
    for (double eps : {0.01, 0.0316, 0.1, 0.316, 1.0}) {
        le.push_back(std::log(eps));
        ln_eps.push_back(std::log(static_cast<double>(plan_mirrors(p, 100.0, eps).count())));
    }
    EXPECT_NEAR(slope(lt, ln_tau), 0.5, 0.1);
    EXPECT_NEAR(slope(le, ln_eps), -0.5, 0.1);
}
