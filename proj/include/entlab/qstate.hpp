#pragma once

// Sparse grand-system state: a particle on a 1D lattice (site, direction)
// tensored with a reservoir of spins stored as a bitstring relative to the
// all-up product state. Reduction over the reservoir yields the system
// density matrix.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "entlab/errors.hpp"
#include "entlab/rng.hpp"

namespace entlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

enum class Direction : std::uint8_t { Right = 0, Left = 1 };

constexpr Direction reversed(Direction d) noexcept {
    return d == Direction::Right ? Direction::Left : Direction::Right;
}

// Fixed-width bit configuration over the declared reservoir spin sites.
// Bit = 1 means the spin is flipped relative to the initial |up>.
class SpinConfig {
public:
    SpinConfig() = default;
    explicit SpinConfig(std::size_t sites) : sites_(sites), words_((sites + 63) / 64, 0) {}

    std::size_t size() const noexcept { return sites_; }

    bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1ULL; }

    void flip(std::size_t i) { words_[i / 64] ^= 1ULL << (i % 64); }

    void set(std::size_t i, bool value) {
        if (test(i) != value) flip(i);
    }

    SpinConfig flipped(std::size_t i) const {
        SpinConfig out = *this;
        out.flip(i);
        return out;
    }

    // Complement over all declared sites.
    SpinConfig complemented() const {
        SpinConfig out = *this;
        for (auto& w : out.words_) w = ~w;
        out.clear_padding();
        return out;
    }

    std::size_t count() const noexcept {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    std::span<const std::uint64_t> words() const noexcept { return words_; }

    friend bool operator==(const SpinConfig&, const SpinConfig&) = default;
    friend auto operator<=>(const SpinConfig& a, const SpinConfig& b) {
        if (auto c = a.sites_ <=> b.sites_; c != 0) return c;
        return a.words_ <=> b.words_;
    }

    std::size_t hash() const noexcept {
        std::uint64_t h = splitmix64(sites_);
        for (auto w : words_) h = splitmix64(h ^ w);
        return static_cast<std::size_t>(h);
    }

private:
    void clear_padding() {
        if (sites_ % 64 != 0 && !words_.empty()) words_.back() &= (1ULL << (sites_ % 64)) - 1;
    }

    std::size_t sites_ = 0;
    std::vector<std::uint64_t> words_;
};

// Particle part of a basis label: the lattice cell and the direction of motion.
struct SystemLabel {
    std::int64_t site = 0;
    Direction direction = Direction::Right;

    friend auto operator<=>(const SystemLabel&, const SystemLabel&) = default;
};

struct BasisLabel {
    std::int64_t site = 0;
    Direction direction = Direction::Right;
    SpinConfig spins;

    SystemLabel system() const { return {site, direction}; }

    friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

struct BasisLabelHash {
    std::size_t operator()(const BasisLabel& label) const noexcept {
        std::uint64_t h = label.spins.hash();
        h = splitmix64(h ^ static_cast<std::uint64_t>(label.site));
        return static_cast<std::size_t>(h ^ static_cast<std::uint64_t>(label.direction));
    }
};

class GrandState {
public:
    // Amplitudes with modulus below this are dropped by prune().
    static constexpr double kPruneThreshold = 1e-14;
    static constexpr double kDefaultNormTolerance = 1e-10;

    using Map = std::unordered_map<BasisLabel, Complex, BasisLabelHash>;

    GrandState() = default;
    explicit GrandState(std::size_t spin_sites) : spin_sites_(spin_sites) {}

    // Single basis vector with all reservoir spins up.
    static GrandState basis(std::int64_t site, Direction direction, std::size_t spin_sites) {
        GrandState s(spin_sites);
        s.add({site, direction, SpinConfig(spin_sites)}, Complex{1.0, 0.0});
        return s;
    }

    std::size_t spin_sites() const noexcept { return spin_sites_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool empty() const noexcept { return terms_.empty(); }

    auto begin() const { return terms_.begin(); }
    auto end() const { return terms_.end(); }

    void reserve(std::size_t n) { terms_.reserve(n); }

    // Accumulates amplitude onto a label; identical labels merge by addition.
    void add(const BasisLabel& label, Complex amplitude) {
        if (label.spins.size() != spin_sites_)
            throw Error(ErrorCode::DimensionMismatch, "spin configuration width differs from state");
        terms_[label] += amplitude;
    }

    void add(BasisLabel&& label, Complex amplitude) {
        if (label.spins.size() != spin_sites_)
            throw Error(ErrorCode::DimensionMismatch, "spin configuration width differs from state");
        terms_[std::move(label)] += amplitude;
    }

    Complex amplitude(const BasisLabel& label) const {
        auto it = terms_.find(label);
        return it == terms_.end() ? Complex{} : it->second;
    }

    double norm_squared() const {
        double n = 0.0;
        for (const auto& [label, amp] : terms_) n += std::norm(amp);
        return n;
    }

    double norm_tolerance() const noexcept { return norm_tolerance_; }
    void set_norm_tolerance(double tol) noexcept { norm_tolerance_ = tol; }

    bool is_normalized() const { return std::abs(norm_squared() - 1.0) <= norm_tolerance_; }

    // Drops terms below the prune threshold without renormalizing. Returns the
    // probability weight removed by this call; the running total is kept.
    double prune() {
        double removed = 0.0;
        std::erase_if(terms_, [&](const auto& kv) {
            if (std::abs(kv.second) < kPruneThreshold) {
                removed += std::norm(kv.second);
                return true;
            }
            return false;
        });
        pruned_weight_ += removed;
        return removed;
    }

    double pruned_weight() const noexcept { return pruned_weight_; }

    // Mutable access for in-place amplitude maps (global phases, conjugation).
    template <typename Fn>
    void transform_amplitudes(Fn&& fn) {
        for (auto& [label, amp] : terms_) amp = fn(label, amp);
    }

    // Terms in a deterministic order (site, direction, spins).
    std::vector<std::pair<BasisLabel, Complex>> sorted_terms() const {
        std::vector<std::pair<BasisLabel, Complex>> out(terms_.begin(), terms_.end());
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
            if (a.first.site != b.first.site) return a.first.site < b.first.site;
            if (a.first.direction != b.first.direction) return a.first.direction < b.first.direction;
            return a.first.spins < b.first.spins;
        });
        return out;
    }

private:
    std::size_t spin_sites_ = 0;
    double norm_tolerance_ = kDefaultNormTolerance;
    double pruned_weight_ = 0.0;
    Map terms_;
};

// Hermitian, PSD, unit-trace matrix over an ordered system basis. An empty
// basis means the matrix is indexed anonymously (0..n-1).
struct DensityMatrix {
    std::vector<SystemLabel> basis;
    ComplexMatrix elements;

    Eigen::Index dim() const { return elements.rows(); }

    std::optional<Eigen::Index> index_of(const SystemLabel& label) const {
        auto it = std::lower_bound(basis.begin(), basis.end(), label);
        if (it == basis.end() || !(*it == label)) return std::nullopt;
        return static_cast<Eigen::Index>(it - basis.begin());
    }

    Eigen::VectorXd diagonal() const { return elements.diagonal().real(); }
};

inline GrandState normalize(const GrandState& state) {
    const double n2 = state.norm_squared();
    if (!(n2 > 0.0)) throw Error(ErrorCode::ZeroNorm, "all amplitudes vanish");
    GrandState out = state;
    const double scale = 1.0 / std::sqrt(n2);
    out.transform_amplitudes([scale](const BasisLabel&, Complex a) { return a * scale; });
    return out;
}

// rho_ab = sum_s psi(a, s) psi*(b, s) over reservoir configurations s.
// `padding` adds system labels to the basis even when their marginal is zero.
inline DensityMatrix partial_trace(const GrandState& state,
                                   std::span<const SystemLabel> padding = {}) {
    std::vector<SystemLabel> basis;
    basis.reserve(state.size() + padding.size());
    for (const auto& [label, amp] : state)
        if (amp != Complex{}) basis.push_back(label.system());
    basis.insert(basis.end(), padding.begin(), padding.end());
    std::sort(basis.begin(), basis.end());
    basis.erase(std::unique(basis.begin(), basis.end()), basis.end());

    DensityMatrix rho{basis, ComplexMatrix::Zero(static_cast<Eigen::Index>(basis.size()),
                                                 static_cast<Eigen::Index>(basis.size()))};

    // Group amplitudes by reservoir configuration; each group is one column
    // psi(., s) contributing an outer product.
    std::map<SpinConfig, std::vector<std::pair<Eigen::Index, Complex>>> by_spin;
    for (const auto& [label, amp] : state) {
        if (amp == Complex{}) continue;
        by_spin[label.spins].emplace_back(*rho.index_of(label.system()), amp);
    }
    for (auto& [spins, column] : by_spin) {
        std::sort(column.begin(), column.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [i, ai] : column)
            for (const auto& [j, aj] : column) rho.elements(i, j) += ai * std::conj(aj);
    }
    return rho;
}

inline Complex inner_product(const GrandState& a, const GrandState& b) {
    const GrandState& small = a.size() <= b.size() ? a : b;
    const GrandState& large = a.size() <= b.size() ? b : a;
    Complex sum{};
    for (const auto& [label, amp] : small) {
        const Complex other = large.amplitude(label);
        sum += (&small == &a) ? std::conj(amp) * other : std::conj(other) * amp;
    }
    return sum;
}

// |<a|b>|^2
inline double fidelity(const GrandState& a, const GrandState& b) {
    return std::norm(inner_product(a, b));
}

}  // namespace entlab
