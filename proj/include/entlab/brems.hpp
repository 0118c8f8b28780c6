#pragma once

// Photon-emission dephasing of an electron in coordinate representation:
// rho(x, x') -> rho(x, x') exp(-Phi(x - x')).

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include <gsl/gsl_sf_expint.h>

#include "entlab/decoherence.hpp"
#include "entlab/entropy.hpp"
#include "entlab/errors.hpp"
#include "entlab/qstate.hpp"

namespace entlab {

struct BremsParams {
    double alpha0 = 1.0 / 137.036;
    double v_over_c = 0.1;
    double omega_cutoff = 1.0;
    double v_fermi = 1.0;

    void validate() const {
        if (!(alpha0 >= 0.0) || !std::isfinite(alpha0))
            throw Error(ErrorCode::InvalidArgument, "alpha0 must be finite and >= 0");
        if (!(v_over_c > 0.0 && v_over_c < 1.0))
            throw Error(ErrorCode::InvalidArgument, "v/c must lie in (0, 1)");
        if (!(omega_cutoff > 0.0) || !(v_fermi > 0.0))
            throw Error(ErrorCode::InvalidArgument, "cutoff and Fermi velocity must be positive");
    }

    double prefactor() const { return 8.0 * alpha0 / (3.0 * std::numbers::pi) * v_over_c * v_over_c; }
};

// Cin(u) = int_0^u (1 - cos s)/s ds, entire; the power series avoids the
// cancellation in gamma + ln u - Ci(u) at small u.
inline double cin(double u) {
    u = std::abs(u);
    if (u == 0.0) return 0.0;
    if (u < 2.0) {
        const double u2 = u * u;
        double term = u2 / 2.0;  // u^{2n} / (2n)! at n = 1
        double sum = term / 2.0;
        for (int n = 2; n < 40; ++n) {
            term *= -u2 / ((2.0 * n - 1.0) * (2.0 * n));
            const double add = term / (2.0 * n);
            sum += add;
            if (std::abs(add) < 1e-18 * sum) break;
        }
        return sum;
    }
    return std::numbers::egamma + std::log(u) - gsl_sf_Ci(u);
}

inline double sine_integral(double u) { return u == 0.0 ? 0.0 : gsl_sf_Si(u); }

// Phi(x) = pref [Cin(u) - i sign(x) Si(u)], u = Omega |x| / v_F.
inline Complex kernel_phi(double x, const BremsParams& p) {
    p.validate();
    if (x == 0.0) return {};
    const double u = p.omega_cutoff * std::abs(x) / p.v_fermi;
    const double sign = x > 0.0 ? 1.0 : -1.0;
    return p.prefactor() * Complex{cin(u), -sign * sine_integral(u)};
}

struct GridDensityMatrix {
    double x_min = 0.0;
    double dx = 1.0;
    ComplexMatrix elements;  // rho(x_i, x_j) dx

    Eigen::Index size() const { return elements.rows(); }
    double x(Eigen::Index i) const { return x_min + static_cast<double>(i) * dx; }
};

// Pure Gaussian exp(-(x-x0)^2 / (4 sigma^2) + i k0 x) on n points of
// [x_min, x_max], normalized on the grid.
inline GridDensityMatrix gaussian_packet(double x_min, double x_max, Eigen::Index n, double x0, double sigma,
                                         double k0 = 0.0) {
    if (n < 2 || !(x_max > x_min) || !(sigma > 0.0))
        throw Error(ErrorCode::InvalidArgument, "grid needs n >= 2, x_max > x_min and sigma > 0");
    GridDensityMatrix rho;
    rho.x_min = x_min;
    rho.dx = (x_max - x_min) / static_cast<double>(n - 1);
    ComplexVector psi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = rho.x(i) - x0;
        psi[i] = std::polar(std::exp(-d * d / (4.0 * sigma * sigma)), k0 * rho.x(i));
    }
    psi /= psi.norm();  // sum |psi|^2 dx = 1 with dx absorbed
    rho.elements = psi * psi.adjoint();
    return rho;
}

// beta[i][j] = exp(-Phi((i - j) dx)); depends only on the index offset.
inline DecoherenceMatrix brems_beta(Eigen::Index n, double dx, const BremsParams& p) {
    p.validate();
    std::vector<Complex> by_offset(static_cast<std::size_t>(n));
    for (Eigen::Index d = 0; d < n; ++d)
        by_offset[static_cast<std::size_t>(d)] = std::exp(-kernel_phi(static_cast<double>(d) * dx, p));
    ComplexMatrix beta(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) {
            const Complex b = by_offset[static_cast<std::size_t>(i >= j ? i - j : j - i)];
            beta(i, j) = i >= j ? b : std::conj(b);
        }
    return DecoherenceMatrix(beta);
}

inline GridDensityMatrix apply_brems(const GridDensityMatrix& rho, const BremsParams& p) {
    GridDensityMatrix out = rho;
    out.elements = schur_apply(brems_beta(rho.size(), rho.dx, p), rho.elements).elements;
    return out;
}

// Entropy (bits) after 0..iterations successive scatterings.
inline std::vector<double> iterate_brems(GridDensityMatrix rho, const BremsParams& p, std::size_t iterations) {
    const DecoherenceMatrix beta = brems_beta(rho.size(), rho.dx, p);
    std::vector<double> bits{von_neumann(rho.elements).bits};
    for (std::size_t n = 0; n < iterations; ++n) {
        rho.elements = schur_apply(beta, rho.elements).elements;
        bits.push_back(von_neumann(rho.elements).bits);
    }
    return bits;
}

struct MomentumDistribution {
    std::vector<double> k;
    std::vector<double> probability;
};

// diag(F rho F^dagger) with F_nj = exp(-i k_n x_j) / sqrt(N), k_n = 2 pi (n - N/2) / (N dx).
inline MomentumDistribution momentum_diagonal(const GridDensityMatrix& rho) {
    const Eigen::Index n = rho.size();
    const double dk = 2.0 * std::numbers::pi / (static_cast<double>(n) * rho.dx);
    ComplexMatrix f(n, n);
    MomentumDistribution out;
    for (Eigen::Index a = 0; a < n; ++a) {
        const double k = static_cast<double>(a - n / 2) * dk;
        out.k.push_back(k);
        for (Eigen::Index j = 0; j < n; ++j) f(a, j) = std::polar(1.0 / std::sqrt(double(n)), -k * rho.x(j));
    }
    const ComplexMatrix rk = f * rho.elements * f.adjoint();
    double total = 0.0;
    for (Eigen::Index a = 0; a < n; ++a) total += rk(a, a).real();
    for (Eigen::Index a = 0; a < n; ++a) out.probability.push_back(rk(a, a).real() / total);
    return out;
}

}  // namespace entlab
