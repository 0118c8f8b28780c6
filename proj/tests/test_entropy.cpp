#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "entlab/decoherence.hpp"
#include "entlab/entropy.hpp"
#include "test_support.hpp"

using namespace entlab;

namespace {

ComplexMatrix diag(std::initializer_list<double> values) {
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(values.size()),
                                          static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double v : values) {
        m(i, i) = v;
        ++i;
    }
    return m;
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(VonNeumann, MaximallyMixedQubit) {
    EXPECT_NEAR(von_neumann(diag({0.5, 0.5})).bits, 1.0, 1e-15);
}

TEST(VonNeumann, PureProjector) {
    Rng rng(3);
    const ComplexVector v = random_unit_vector(6, rng);
    EXPECT_NEAR(von_neumann(ComplexMatrix(v * v.adjoint())).bits, 0.0, 1e-12);
}

TEST(VonNeumann, BinaryEntropyClosedForm) {
    const double expected = -0.4 * std::log2(0.4) - 0.6 * std::log2(0.6);
    EXPECT_NEAR(expected, 0.9709505944546686, 1e-15);
    const EntropyValue s = von_neumann(diag({0.4, 0.6}));
    EXPECT_NEAR(s.bits, expected, 1e-14);
    EXPECT_NEAR(s.nats, s.bits * std::log(2.0), 1e-12);
}

TEST(VonNeumann, ClampsTinyNegativeEigenvalues) {
    ComplexMatrix m = diag({1.0 + 5e-11, -5e-11});
    EXPECT_NEAR(von_neumann(m).bits, 0.0, 1e-9);
}

TEST(VonNeumann, RejectsInvalidMatrices) {
    ComplexMatrix nonherm = diag({0.5, 0.5});
    nonherm(0, 1) = 0.1;
    EXPECT_EQ(code_of([&] { von_neumann(nonherm); }), ErrorCode::NotHermitian);
    EXPECT_EQ(code_of([&] { von_neumann(diag({0.5, 0.6})); }), ErrorCode::TraceNotOne);
    EXPECT_EQ(code_of([&] { von_neumann(diag({1.1, -0.1})); }), ErrorCode::NotPSD);
}

TEST(Shannon, Examples) {
    EXPECT_NEAR(shannon(std::vector<double>{1.0, 0.0}).bits, 0.0, 1e-15);
    EXPECT_NEAR(shannon(std::vector<double>{0.5, 0.5}).bits, 1.0, 1e-15);
    EXPECT_NEAR(shannon(std::vector<double>{0.4, 0.6}).bits, 0.9709505944546686, 1e-14);
    EXPECT_EQ(code_of([] { shannon(std::vector<double>{0.4, 0.4}); }), ErrorCode::NotNormalized);
    EXPECT_EQ(code_of([] { shannon(std::vector<double>{1.2, -0.2}); }), ErrorCode::NotNormalized);
}

TEST(EntropyProperty, UnitaryInvariance) {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto dim = static_cast<Eigen::Index>(rng.uniform_int(2, 12));
        const ComplexMatrix rho = random_density_matrix(dim, rng);
        const ComplexMatrix u = test_support::random_unitary(dim, rng);
        ComplexMatrix rotated = u * rho * u.adjoint();
        rotated = (rotated + rotated.adjoint()) * 0.5;
        EXPECT_NEAR(von_neumann(rotated).bits, von_neumann(rho).bits, 1e-9);
    }
}

TEST(EntropyProperty, DiagonalMatchesShannon) {
    Rng rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const auto dim = rng.uniform_int(1, 16);
        std::vector<double> p(static_cast<std::size_t>(dim));
        double total = 0.0;
        for (double& x : p) total += (x = rng.uniform() * (rng.uniform() < 0.2 ? 0.0 : 1.0));
        if (total == 0.0) p[0] = total = 1.0;
        for (double& x : p) x /= total;
        ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) m(i, i) = p[static_cast<std::size_t>(i)];
        EXPECT_NEAR(von_neumann(m).bits, shannon(p).bits, 1e-10);
    }
}

TEST(EntropyProperty, Concavity) {
    Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const auto dim = static_cast<Eigen::Index>(rng.uniform_int(2, 10));
        ComplexMatrix a = random_density_matrix(dim, rng);
        // Mix in low-rank states so the check is not dominated by near-maximal entropies.
        const ComplexVector v = random_unit_vector(dim, rng);
        const ComplexMatrix b = v * v.adjoint();
        const ComplexMatrix mix = 0.5 * a + 0.5 * b;
        EXPECT_GE(von_neumann(mix).bits, 0.5 * von_neumann(a).bits + 0.5 * von_neumann(b).bits - 1e-9);
    }
}
