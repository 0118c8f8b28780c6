#pragma once

// Reversal of a freely spreading packet by a row of switched mirrors. Free
// evolution is exact on a Fourier grid; the mirror row acts as one operator
// that conjugates the packet tile by tile and leaves the quadratic phase
// m (x - x_n)^2 / (2 hbar tau) of each tile uncorrected.
//
// Grids: k_n = (n - N/2) dk, x_j = (j - N/2) dx, dx = 2 pi / (N dk).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "entlab/errors.hpp"
#include "entlab/qstate.hpp"

namespace entlab {

struct WavePacket {
    double dk = 0.01;
    ComplexVector f;  // f(k_n)
    double mass = 1.0;
    double hbar = 1.0;

    Eigen::Index size() const { return f.size(); }
    double k(Eigen::Index n) const { return static_cast<double>(n - size() / 2) * dk; }
    double dx() const { return 2.0 * std::numbers::pi / (static_cast<double>(size()) * dk); }

    // sum |f|^2 dk / 2pi
    double norm_squared() const { return f.squaredNorm() * dk / (2.0 * std::numbers::pi); }

    void validate() const {
        if (size() < 4 || size() % 2 != 0) throw Error(ErrorCode::InvalidArgument, "k-grid size must be even and >= 4");
        if (!(dk > 0.0) || !(mass > 0.0) || !(hbar > 0.0))
            throw Error(ErrorCode::InvalidArgument, "dk, mass and hbar must be positive");
        if (std::abs(norm_squared() - 1.0) > 1e-10)
            throw Error(ErrorCode::NotNormalized, "sum |f|^2 dk/2pi = " + std::to_string(norm_squared()));
    }

    // Largest |k| carrying amplitude above 1e-10 of the peak.
    double k_max() const {
        const double peak = f.cwiseAbs().maxCoeff();
        double km = 0.0;
        for (Eigen::Index n = 0; n < size(); ++n)
            if (std::abs(f[n]) > 1e-10 * peak) km = std::max(km, std::abs(k(n)));
        return km;
    }

    // f(k) ~ exp(-(k - k0)^2 / (4 sigma_k^2) - i k x0), normalized on the grid.
    static WavePacket gaussian(Eigen::Index points, double dk, double sigma_k, double k0 = 0.0, double x0 = 0.0,
                               double mass = 1.0, double hbar = 1.0) {
        WavePacket p{dk, ComplexVector(points), mass, hbar};
        for (Eigen::Index n = 0; n < points; ++n) {
            const double q = p.k(n) - k0;
            p.f[n] = std::polar(std::exp(-q * q / (4.0 * sigma_k * sigma_k)), -p.k(n) * x0);
        }
        p.f /= std::sqrt(p.norm_squared());
        return p;
    }
};

struct SpatialWave {
    double dx = 1.0;
    ComplexVector psi;

    Eigen::Index size() const { return psi.size(); }
    double x(Eigen::Index j) const { return static_cast<double>(j - size() / 2) * dx; }
    double norm_squared() const { return psi.squaredNorm() * dx; }
    SpatialWave conjugate() const { return {dx, psi.conjugate()}; }
};

inline Complex overlap(const SpatialWave& a, const SpatialWave& b) { return a.psi.dot(b.psi) * a.dx; }

namespace detail {

inline double alternating(Eigen::Index n) { return n % 2 == 0 ? 1.0 : -1.0; }

// psi_j = sum_n (dk / 2pi) f_n e^{i k_n x_j}
inline ComplexVector to_position(const ComplexVector& f, double dk) {
    const Eigen::Index n = f.size();
    std::vector<Complex> in(static_cast<std::size_t>(n)), out;
    for (Eigen::Index i = 0; i < n; ++i) in[static_cast<std::size_t>(i)] = f[i] * alternating(i);
    Eigen::FFT<double> fft;
    fft.inv(out, in);
    ComplexVector psi(n);
    const double scale = dk / (2.0 * std::numbers::pi) * static_cast<double>(n) * alternating(n / 2);
    for (Eigen::Index j = 0; j < n; ++j) psi[j] = out[static_cast<std::size_t>(j)] * (scale * alternating(j));
    return psi;
}

// f_n = sum_j dx psi_j e^{-i k_n x_j}
inline ComplexVector to_momentum(const ComplexVector& psi, double dx) {
    const Eigen::Index n = psi.size();
    std::vector<Complex> in(static_cast<std::size_t>(n)), out;
    for (Eigen::Index j = 0; j < n; ++j) in[static_cast<std::size_t>(j)] = psi[j] * alternating(j);
    Eigen::FFT<double> fft;
    fft.fwd(out, in);
    ComplexVector f(n);
    const double scale = dx * alternating(n / 2);
    for (Eigen::Index i = 0; i < n; ++i) f[i] = out[static_cast<std::size_t>(i)] * (scale * alternating(i));
    return f;
}

// The position box must hold the packet after tau: hbar k_max dk tau / m <= pi.
inline void check_aliasing(const WavePacket& p, double tau) {
    const double per_cell = p.hbar * p.k_max() * p.dk * tau / p.mass;
    if (per_cell > std::numbers::pi)
        throw GridAliasingError(per_cell, std::numbers::pi * p.mass / (p.hbar * p.k_max() * tau));
}

inline void free_phase(ComplexVector& f, const WavePacket& grid, double tau) {
    for (Eigen::Index n = 0; n < f.size(); ++n) {
        const double k = grid.k(n);
        f[n] *= std::polar(1.0, -grid.hbar * k * k * tau / (2.0 * grid.mass));
    }
}

}  // namespace detail

// psi(x, tau) = sum_k (dk / 2pi) f(k) e^{ikx - i hbar k^2 tau / 2m}
inline SpatialWave evolve_free(const WavePacket& packet, double tau) {
    packet.validate();
    if (!(tau >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tau must be >= 0");
    detail::check_aliasing(packet, tau);
    ComplexVector f = packet.f;
    detail::free_phase(f, packet, tau);
    return {packet.dx(), detail::to_position(f, packet.dk)};
}

// Free evolution of an arbitrary position-space wave on the grid of a
// reference packet. Aliasing is judged from the reference packet: tile-edge
// phase jumps give the wave a broadband tail that carries negligible weight.
inline SpatialWave propagate(const SpatialWave& wave, const WavePacket& grid, double tau) {
    detail::check_aliasing(grid, tau);
    ComplexVector f = detail::to_momentum(wave.psi, wave.dx);
    detail::free_phase(f, grid, tau);
    return {wave.dx, detail::to_position(f, grid.dk)};
}

struct MirrorPlan {
    double tau = 0.0;
    double epsilon = 0.0;
    double mass = 1.0;
    double hbar = 1.0;
    double tile_width = 0.0;           // 2 sqrt(2 hbar tau eps / m)
    double covered_lo = 0.0;           // coverage quantile edges
    double covered_hi = 0.0;
    std::vector<double> positions;     // tile centres x_n, ascending
    std::vector<double> edges;         // N + 1 tile boundaries, last one clipped to covered_hi

    std::size_t count() const noexcept { return positions.size(); }

    // Uncorrected phase m (x - x_n)^2 / (2 hbar tau) at x; 0 outside the covered region.
    double residual_phase(double x) const {
        if (x < covered_lo || x > covered_hi || positions.empty()) return 0.0;
        auto it = std::upper_bound(edges.begin(), edges.end(), x);
        std::size_t tile = it == edges.begin() ? 0 : static_cast<std::size_t>(it - edges.begin()) - 1;
        tile = std::min(tile, positions.size() - 1);
        const double d = x - positions[tile];
        return mass * d * d / (2.0 * hbar * tau);
    }

    bool covers(double x) const { return x >= covered_lo && x <= covered_hi; }
};

inline constexpr double kMirrorCoverage = 0.999;

// Tiles of width 2 sqrt(2 hbar tau eps / m) over the central 99.9% of |psi|^2.
inline MirrorPlan plan_mirrors(const SpatialWave& psi_tau, double tau, double epsilon, double mass = 1.0,
                               double hbar = 1.0) {
    if (!(epsilon > 0.0) || !(tau > 0.0))
        throw Error(ErrorCode::InvalidArgument, "epsilon and tau must be positive");
    MirrorPlan plan{tau, epsilon, mass, hbar, 2.0 * std::sqrt(2.0 * hbar * tau * epsilon / mass)};
    const double total = psi_tau.norm_squared();
    const double tail = 0.5 * (1.0 - kMirrorCoverage) * total;
    double acc = 0.0;
    Eigen::Index lo = 0, hi = psi_tau.size() - 1;
    for (Eigen::Index j = 0; j < psi_tau.size(); ++j) {
        acc += std::norm(psi_tau.psi[j]) * psi_tau.dx;
        if (acc >= tail) {
            lo = j;
            break;
        }
    }
    acc = 0.0;
    for (Eigen::Index j = psi_tau.size() - 1; j >= 0; --j) {
        acc += std::norm(psi_tau.psi[j]) * psi_tau.dx;
        if (acc >= tail) {
            hi = j;
            break;
        }
    }
    plan.covered_lo = psi_tau.x(lo);
    plan.covered_hi = psi_tau.x(hi);
    const double width = plan.covered_hi - plan.covered_lo;
    const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(width / plan.tile_width)));
    for (std::size_t t = 0; t < n; ++t) {
        const double left = plan.covered_lo + static_cast<double>(t) * plan.tile_width;
        plan.edges.push_back(left);
        plan.positions.push_back(left + 0.5 * plan.tile_width);
    }
    plan.edges.push_back(plan.covered_hi);
    return plan;
}

inline MirrorPlan plan_mirrors(const WavePacket& packet, double tau, double epsilon) {
    return plan_mirrors(evolve_free(packet, tau), tau, epsilon, packet.mass, packet.hbar);
}

// psi~ = conj(psi) e^{i alpha(x)} on the covered region; the untreated tails are dropped.
inline SpatialWave apply_approximate_conjugation(const SpatialWave& psi, const MirrorPlan& plan) {
    SpatialWave out{psi.dx, ComplexVector::Zero(psi.size())};
    for (Eigen::Index j = 0; j < psi.size(); ++j) {
        const double x = psi.x(j);
        if (!plan.covers(x)) continue;
        out.psi[j] = std::conj(psi.psi[j]) * std::polar(1.0, plan.residual_phase(x));
    }
    return out;
}

// || psi~ - conj(psi) || restricted to the covered region.
inline double covered_conjugation_distance(const SpatialWave& psi, const SpatialWave& approx,
                                           const MirrorPlan& plan) {
    double d2 = 0.0;
    for (Eigen::Index j = 0; j < psi.size(); ++j)
        if (plan.covers(psi.x(j))) d2 += std::norm(approx.psi[j] - std::conj(psi.psi[j])) * psi.dx;
    return std::sqrt(d2);
}

struct RefocusResult {
    double fidelity = 0.0;
    std::size_t mirrors = 0;
    double tail_weight = 0.0;        // probability outside the mirror row
    double covered_distance = 0.0;   // || psi~ - psi* || on the covered region
    double deficit_coefficient = 0.0;  // (1 - fidelity) / eps^2
};

// psi0 -> evolve tau -> piecewise conjugation -> evolve tau; overlap with conj(psi0).
inline RefocusResult refocus_fidelity(const WavePacket& packet, double tau, double epsilon) {
    const SpatialWave psi0 = evolve_free(packet, 0.0);
    const SpatialWave psi_tau = evolve_free(packet, tau);
    const MirrorPlan plan = plan_mirrors(psi_tau, tau, epsilon, packet.mass, packet.hbar);
    const SpatialWave approx = apply_approximate_conjugation(psi_tau, plan);
    const SpatialWave back = propagate(approx, packet, tau);
    RefocusResult r;
    r.fidelity = std::norm(overlap(psi0.conjugate(), back));
    r.mirrors = plan.count();
    r.tail_weight = std::max(0.0, psi_tau.norm_squared() - approx.norm_squared());
    r.covered_distance = covered_conjugation_distance(psi_tau, approx, plan);
    r.deficit_coefficient = (1.0 - r.fidelity) / (epsilon * epsilon);
    return r;
}

// Exact conjugation of the whole packet (the eps -> 0 limit without tails).
inline double refocus_fidelity_exact(const WavePacket& packet, double tau) {
    const SpatialWave psi0 = evolve_free(packet, 0.0);
    const SpatialWave back = propagate(evolve_free(packet, tau).conjugate(), packet, tau);
    return std::norm(overlap(psi0.conjugate(), back));
}

}  // namespace entlab
