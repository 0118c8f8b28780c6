#pragma once

#include <cmath>
#include <numbers>
#include <span>

#include <Eigen/Eigenvalues>

#include "entlab/errors.hpp"
#include "entlab/qstate.hpp"

namespace entlab {

struct EntropyValue {
    double bits = 0.0;
    double nats = 0.0;

    static EntropyValue from_nats(double nats) { return {nats / std::numbers::ln2, nats}; }
};

namespace tolerance {
inline constexpr double kHermitian = 1e-12;
inline constexpr double kTrace = 1e-10;
inline constexpr double kNegativeEigenvalue = 1e-10;
inline constexpr double kProbabilitySum = 1e-10;
}  // namespace tolerance

inline double max_hermitian_defect(const ComplexMatrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

// Throws NotHermitian / TraceNotOne / NotPSD; returns the eigenvalues on success.
inline Eigen::VectorXd validate_density(const ComplexMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw Error(ErrorCode::DimensionMismatch, "density matrix must be square and non-empty");
    if (const double d = max_hermitian_defect(m); d > tolerance::kHermitian)
        throw Error(ErrorCode::NotHermitian, "max |rho - rho^dagger| = " + std::to_string(d));
    if (const double tr = m.trace().real(); std::abs(tr - 1.0) > tolerance::kTrace)
        throw Error(ErrorCode::TraceNotOne, "trace = " + std::to_string(tr));
    Eigen::VectorXd eig = hermitian_eigenvalues(m);
    if (eig.minCoeff() < -tolerance::kNegativeEigenvalue)
        throw Error(ErrorCode::NotPSD, "smallest eigenvalue " + std::to_string(eig.minCoeff()));
    return eig;
}

namespace detail {
inline double entropy_nats(const Eigen::Ref<const Eigen::VectorXd>& p) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const double x = p[i] < 0.0 ? 0.0 : p[i];  // clamped window [-1e-10, 0)
        if (x > 0.0) s -= x * std::log(x);
    }
    return s;
}
}  // namespace detail

// S = -tr(rho log rho) with 0 log 0 = 0.
inline EntropyValue von_neumann(const ComplexMatrix& rho) {
    return EntropyValue::from_nats(detail::entropy_nats(validate_density(rho)));
}

inline EntropyValue von_neumann(const DensityMatrix& rho) { return von_neumann(rho.elements); }

inline EntropyValue shannon(std::span<const double> p) {
    double total = 0.0;
    for (double x : p) {
        if (x < 0.0) throw Error(ErrorCode::NotNormalized, "negative probability");
        total += x;
    }
    if (std::abs(total - 1.0) > tolerance::kProbabilitySum)
        throw Error(ErrorCode::NotNormalized, "probabilities sum to " + std::to_string(total));
    double s = 0.0;
    for (double x : p)
        if (x > 0.0) s -= x * std::log(x);
    return EntropyValue::from_nats(s);
}

}  // namespace entlab
