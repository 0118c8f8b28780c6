#pragma once

// Decoherence-matrix channels rho_ij -> beta_ij rho_ij. beta collects the
// reservoir overlaps <chi_i|chi_j>, so it is unit-diagonal and Hermitian, and
// whenever it is a Gram matrix the channel cannot lower von Neumann entropy.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entlab/entropy.hpp"
#include "entlab/errors.hpp"
#include "entlab/qstate.hpp"
#include "entlab/rng.hpp"

namespace entlab {

class DecoherenceMatrix {
public:
    static constexpr double kTolerance = 1e-12;

    explicit DecoherenceMatrix(ComplexMatrix elements) : elements_(std::move(elements)) {
        if (elements_.rows() != elements_.cols())
            throw Error(ErrorCode::DimensionMismatch, "decoherence matrix must be square");
        if (elements_.size() > 0 && max_hermitian_defect(elements_) > kTolerance)
            throw Error(ErrorCode::NotHermitian, "decoherence matrix is not Hermitian");
        for (Eigen::Index i = 0; i < elements_.rows(); ++i)
            if (std::abs(elements_(i, i) - Complex{1.0, 0.0}) > kTolerance)
                throw Error(ErrorCode::InvalidArgument,
                            "diagonal element " + std::to_string(i) + " differs from 1");
    }

    // Gram matrix of identical vectors: leaves every rho unchanged.
    static DecoherenceMatrix ones(Eigen::Index n) {
        return DecoherenceMatrix(ComplexMatrix::Ones(n, n));
    }

    // Orthogonal reservoir states: full dephasing.
    static DecoherenceMatrix identity(Eigen::Index n) {
        return DecoherenceMatrix(ComplexMatrix::Identity(n, n));
    }

    // Qubit-style pure dephasing: every off-diagonal element equals `coherence`
    // (e^{-tau/T2} for a T1 >> T2 qubit observed at time tau).
    static DecoherenceMatrix uniform_dephasing(Eigen::Index n, double coherence) {
        ComplexMatrix m = ComplexMatrix::Constant(n, n, Complex{coherence, 0.0});
        m.diagonal().setOnes();
        return DecoherenceMatrix(std::move(m));
    }

    const ComplexMatrix& elements() const noexcept { return elements_; }
    Eigen::Index dim() const { return elements_.rows(); }
    Complex operator()(Eigen::Index i, Eigen::Index j) const { return elements_(i, j); }

private:
    ComplexMatrix elements_;
};

struct GramianCheck {
    bool gramian = false;
    double min_eigenvalue = 0.0;

    explicit operator bool() const noexcept { return gramian; }
};

// PSD test: smallest eigenvalue >= -tol * max |eigenvalue|.
inline GramianCheck is_gramian(const ComplexMatrix& beta, double tol = 1e-10) {
    const Eigen::VectorXd eig = hermitian_eigenvalues(beta);
    const double scale = std::max(eig.cwiseAbs().maxCoeff(), 1.0e-300);
    return {eig.minCoeff() >= -tol * scale, eig.minCoeff()};
}

inline GramianCheck is_gramian(const DecoherenceMatrix& beta, double tol = 1e-10) {
    return is_gramian(beta.elements(), tol);
}

// beta_ij = <v_i|v_j>
inline DecoherenceMatrix gramian_from_vectors(std::span<const ComplexVector> vectors) {
    const auto n = static_cast<Eigen::Index>(vectors.size());
    if (n == 0) return DecoherenceMatrix(ComplexMatrix(0, 0));
    const Eigen::Index len = vectors.front().size();
    ComplexMatrix stacked(len, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& v = vectors[static_cast<std::size_t>(i)];
        if (v.size() != len) throw Error(ErrorCode::DimensionMismatch, "vectors differ in length");
        if (std::abs(v.norm() - 1.0) > 1e-10)
            throw Error(ErrorCode::NotUnitNorm, "vector " + std::to_string(i) + " has norm " +
                                                     std::to_string(v.norm()));
        stacked.col(i) = v;
    }
    ComplexMatrix gram = stacked.adjoint() * stacked;
    gram.diagonal().setOnes();
    // Symmetrize away rounding so the Hermitian invariant holds to the last bit.
    ComplexMatrix herm = (gram + gram.adjoint()) * 0.5;
    return DecoherenceMatrix(std::move(herm));
}

// rho~_ij = beta_ij rho_ij. The diagonal is copied verbatim. The output is
// checked for positivity because a non-Gramian beta can break it.
inline DensityMatrix schur_apply(const DecoherenceMatrix& beta, const DensityMatrix& rho) {
    if (beta.dim() != rho.dim())
        throw Error(ErrorCode::DimensionMismatch, "beta is " + std::to_string(beta.dim()) +
                                                      "-dimensional, rho is " +
                                                      std::to_string(rho.dim()));
    DensityMatrix out{rho.basis, beta.elements().cwiseProduct(rho.elements)};
    out.elements.diagonal() = rho.elements.diagonal();
    if (out.dim() > 0) {
        const double min_eig = hermitian_eigenvalues(out.elements).minCoeff();
        if (min_eig < -tolerance::kNegativeEigenvalue)
            throw Error(ErrorCode::NotPSDResult,
                        "output eigenvalue " + std::to_string(min_eig) + " (beta not Gramian?)");
    }
    return out;
}

inline DensityMatrix schur_apply(const DecoherenceMatrix& beta, const ComplexMatrix& rho) {
    return schur_apply(beta, DensityMatrix{{}, rho});
}

// Reservoir |F> = sum_n f(q_n)|q_n> with weights |f(q_n)|^2 and interaction
// phases phi(q_n, s): rows index the reservoir mode n, columns the system index s.
struct PhaseKickSpec {
    std::vector<double> weights;
    Eigen::MatrixXd phases;

    void validate() const {
        if (static_cast<Eigen::Index>(weights.size()) != phases.rows())
            throw Error(ErrorCode::DimensionMismatch, "weights and phase rows differ");
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw Error(ErrorCode::InvalidArgument, "negative weight");
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-10)
            throw Error(ErrorCode::NotNormalized, "weights sum to " + std::to_string(total));
    }

    Eigen::Index system_dim() const { return phases.cols(); }
    Eigen::Index modes() const { return phases.rows(); }
};

// beta(s, s') = sum_n |f(q_n)|^2 exp(i(phi(q_n, s) - phi(q_n, s'))) = <F(s)|F(s')>
inline DecoherenceMatrix phase_kick_beta(const PhaseKickSpec& spec) {
    spec.validate();
    const Eigen::Index dim = spec.system_dim();
    ComplexMatrix beta = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index n = 0; n < spec.modes(); ++n) {
        const double w = spec.weights[static_cast<std::size_t>(n)];
        for (Eigen::Index s = 0; s < dim; ++s)
            for (Eigen::Index sp = 0; sp < dim; ++sp)
                beta(s, sp) += w * std::polar(1.0, spec.phases(n, s) - spec.phases(n, sp));
    }
    beta.diagonal().setOnes();
    return DecoherenceMatrix(std::move(beta));
}

// The entangled system-reservoir state produced by the phase kick,
// sum_s sum_n a(s) f(q_n) e^{i phi(q_n, s)} |s>|q_n>, for a mixed input
// rho = sum_k lambda_k |a_k><a_k| purified with an ancilla |k>. Reservoir
// mode n is spin bit n; ancilla k is spin bit modes + k. System index s is
// stored as lattice site s, direction Right.
inline GrandState phase_kick_grand_state(const PhaseKickSpec& spec, const ComplexMatrix& rho) {
    spec.validate();
    if (rho.rows() != spec.system_dim())
        throw Error(ErrorCode::DimensionMismatch, "rho dimension differs from phase columns");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(rho);
    const Eigen::Index modes = spec.modes();
    const Eigen::Index ancillas = rho.rows();
    const auto width = static_cast<std::size_t>(modes + ancillas);
    GrandState state(width);
    for (Eigen::Index k = 0; k < ancillas; ++k) {
        const double lambda = eig.eigenvalues()[k];
        if (lambda <= 1e-300) continue;
        const ComplexVector a = eig.eigenvectors().col(k) * std::sqrt(lambda);
        for (Eigen::Index n = 0; n < modes; ++n) {
            const double f = std::sqrt(spec.weights[static_cast<std::size_t>(n)]);
            if (f == 0.0) continue;
            SpinConfig spins(width);
            spins.flip(static_cast<std::size_t>(n));
            spins.flip(static_cast<std::size_t>(modes + k));
            for (Eigen::Index s = 0; s < rho.rows(); ++s)
                state.add({s, Direction::Right, spins}, a[s] * f * std::polar(1.0, spec.phases(n, s)));
        }
    }
    return state;
}

// A*A^dagger / tr with complex standard-normal A: full rank almost surely.
inline ComplexMatrix random_density_matrix(Eigen::Index dim, Rng& rng) {
    ComplexMatrix a(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
        for (Eigen::Index i = 0; i < dim; ++i) a(i, j) = rng.complex_normal();
    ComplexMatrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    return (rho + rho.adjoint()) * 0.5;
}

inline ComplexVector random_unit_vector(Eigen::Index len, Rng& rng) {
    ComplexVector v(len);
    for (Eigen::Index i = 0; i < len; ++i) v[i] = rng.complex_normal();
    return v / v.norm();
}

// Gram matrix of `dim` random unit vectors whose length (the reservoir rank)
// is drawn uniformly from [1, dim].
inline DecoherenceMatrix random_gramian(Eigen::Index dim, Rng& rng) {
    const auto len = static_cast<Eigen::Index>(rng.uniform_int(1, dim));
    std::vector<ComplexVector> vectors;
    vectors.reserve(static_cast<std::size_t>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) vectors.push_back(random_unit_vector(len, rng));
    return gramian_from_vectors(vectors);
}

struct LemmaTrial {
    double s_before = 0.0;  // bits
    double s_after = 0.0;   // bits

    bool holds(double slack = 1e-9) const { return s_after >= s_before - slack; }
};

inline LemmaTrial lemma_check(const DecoherenceMatrix& beta, const ComplexMatrix& rho) {
    const DensityMatrix after = schur_apply(beta, rho);
    return {von_neumann(rho).bits, von_neumann(after).bits};
}

// One randomized trial on stream (seed, task): random rho and random Gramian beta.
inline LemmaTrial lemma_trial(Eigen::Index dim, std::uint64_t seed, std::uint64_t task = 0) {
    if (dim < 2) throw Error(ErrorCode::InvalidArgument, "lemma trials need dim >= 2");
    Rng rng(seed, task);
    const ComplexMatrix rho = random_density_matrix(dim, rng);
    const DecoherenceMatrix beta = random_gramian(dim, rng);
    return lemma_check(beta, rho);
}

// beta_ij = rho_after_ij / rho_before_ij. Entries with |rho_before_ij| below
// 1e-13 count as exact zeros: 0/0 is reported as 1, x/0 throws
// DivergentElementError carrying the first offending (row, col).
inline DecoherenceMatrix reversal_beta(const DensityMatrix& before, const DensityMatrix& after) {
    constexpr double kZero = 1e-13;
    if (before.dim() != after.dim() || before.basis != after.basis)
        throw Error(ErrorCode::DimensionMismatch, "density matrices use different bases");
    const Eigen::Index n = before.dim();
    ComplexMatrix beta(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const Complex b = before.elements(i, j);
            const Complex a = after.elements(i, j);
            if (std::abs(b) < kZero) {
                if (std::abs(a) >= kZero)
                    throw DivergentElementError(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
                beta(i, j) = 1.0;
            } else {
                beta(i, j) = a / b;
            }
        }
        if (std::abs(beta(i, i) - 1.0) > 1e-10)
            throw Error(ErrorCode::InvalidArgument,
                        "diagonal element " + std::to_string(i) + " changed; not a decoherence process");
        beta(i, i) = 1.0;
    }
    return DecoherenceMatrix((beta + beta.adjoint()) * 0.5);
}

}  // namespace entlab
