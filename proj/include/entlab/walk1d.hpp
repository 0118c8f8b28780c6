#pragma once

// Discrete-time walk of a point-like particle through a 1D array of
// scatterers, each carrying a reservoir spin that flips when the particle is
// transmitted and stays intact when it is reflected.
//
// Geometry: cell i is the interval between scatterer i and scatterer i + 1.
// During one time step a right mover in cell i meets scatterer i + 1 and a
// left mover in cell i meets scatterer i (scattering at the half-integer
// time). Transmission moves the particle into the neighbouring cell;
// reflection keeps the cell and reverses the direction.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "entlab/entropy.hpp"
#include "entlab/errors.hpp"
#include "entlab/parallel.hpp"
#include "entlab/qstate.hpp"

namespace entlab {

struct ScattererSpec {
    double position = 0.0;
    double transparency = 0.5;  // T = |t|^2
    double phase_ll = 0.0;      // phase of the left reflection amplitude
    double phase_lr = 0.0;      // phase of the left-to-right transmission amplitude
    bool has_spin = true;
    double flip_angle = std::numbers::pi;  // Bloch rotation angle of the spin on transmission

    void validate() const {
        if (!(transparency >= 0.0 && transparency <= 1.0))
            throw Error(ErrorCode::InvalidArgument,
                        "transparency " + std::to_string(transparency) + " outside [0, 1]");
        if (!std::isfinite(phase_ll) || !std::isfinite(phase_lr) || !std::isfinite(flip_angle))
            throw Error(ErrorCode::InvalidArgument, "non-finite scatterer phase");
    }
};

// Zero-field scattering matrix. Columns: incoming from the left / right;
// rows: outgoing to the left / right.
struct ScatteringMatrix {
    Complex r_ll;  // left in, left out
    Complex t_lr;  // left in, right out
    Complex t_rl;  // right in, left out
    Complex r_rr;  // right in, right out

    Eigen::Matrix2cd matrix() const {
        Eigen::Matrix2cd m;
        m << r_ll, t_rl, t_lr, r_rr;
        return m;
    }
};

// r_LL = i sqrt(1-T) e^{i chi_LL}, t_LR = t_RL = sqrt(T) e^{i chi_LR},
// r_RR = i sqrt(1-T) e^{i(2 chi_LR - chi_LL)} (unitary completion).
inline ScatteringMatrix build_scattering_matrix(const ScattererSpec& spec) {
    spec.validate();
    const double rt = std::sqrt(1.0 - spec.transparency);
    const double tt = std::sqrt(spec.transparency);
    const Complex i{0.0, 1.0};
    const Complex t = std::polar(tt, spec.phase_lr);
    return {i * std::polar(rt, spec.phase_ll), t, t,
            i * std::polar(rt, 2.0 * spec.phase_lr - spec.phase_ll)};
}

enum class SpinMode {
    FreshEachStep,  // every step scatters off a new spin register
    Persistent,     // one spin per scatterer for the whole run
};

struct WalkScenario {
    // scatterers[j] is scatterer number first_index + j. Scatterers outside
    // the list are absent (free propagation).
    std::int64_t first_index = 0;
    std::vector<ScattererSpec> scatterers;
    SpinMode spin_mode = SpinMode::Persistent;
    std::size_t horizon = 1;
    std::optional<GrandState> initial;  // default: cell 0, moving right, all spins up
    std::size_t term_cap = 5'000'000;

    std::size_t spin_sites() const {
        return spin_mode == SpinMode::Persistent ? scatterers.size() : scatterers.size() * horizon;
    }

    const ScattererSpec* scatterer(std::int64_t index) const {
        const std::int64_t j = index - first_index;
        if (j < 0 || j >= static_cast<std::int64_t>(scatterers.size())) return nullptr;
        return &scatterers[static_cast<std::size_t>(j)];
    }

    // Spin bit of scatterer `index` during the step that starts at time `slot`.
    std::size_t spin_bit(std::int64_t index, std::int64_t slot) const {
        const auto j = static_cast<std::size_t>(index - first_index);
        if (spin_mode == SpinMode::Persistent) return j;
        if (slot < 0 || slot >= static_cast<std::int64_t>(horizon))
            throw Error(ErrorCode::InvalidArgument,
                        "fresh spin register for time slot " + std::to_string(slot) +
                            " outside [0, horizon)");
        return static_cast<std::size_t>(slot) * scatterers.size() + j;
    }

    GrandState initial_state() const {
        if (initial) {
            if (initial->spin_sites() != spin_sites())
                throw Error(ErrorCode::DimensionMismatch, "initial state spin width differs from scenario");
            return *initial;
        }
        return GrandState::basis(0, Direction::Right, spin_sites());
    }

    void validate() const {
        if (horizon < 1) throw Error(ErrorCode::InvalidArgument, "horizon must be >= 1");
        for (const auto& s : scatterers) s.validate();
        if (spin_mode == SpinMode::FreshEachStep) {
            for (const auto& s : scatterers)
                if (!s.has_spin || s.flip_angle != std::numbers::pi)
                    throw Error(ErrorCode::InvalidArgument,
                                "fresh-spin mode needs a full-flip spin at every scatterer");
        }
    }
};

// Identical scatterers at integer positions covering every site reachable
// from cell 0 within `horizon` steps in either time direction.
inline WalkScenario regular_array(double transparency, double phase_ll, double phase_lr,
                                  std::size_t horizon, SpinMode mode = SpinMode::Persistent) {
    WalkScenario sc;
    const auto reach = static_cast<std::int64_t>(horizon) + 1;
    sc.first_index = -reach;
    for (std::int64_t k = -reach; k <= reach; ++k)
        sc.scatterers.push_back({static_cast<double>(k), transparency, phase_ll, phase_lr, true,
                                 std::numbers::pi});
    sc.spin_mode = mode;
    sc.horizon = horizon;
    return sc;
}

namespace detail {

// Spin rotation applied to the scatterer's spin on transmission:
// U(theta) = e^{i theta/2} (cos(theta/2) - i sin(theta/2) sigma_x), so U(pi) = sigma_x
// and U(0) = 1. Returns (amplitude to keep, amplitude to flip).
inline std::pair<Complex, Complex> spin_rotation(double theta, bool adjoint) {
    if (theta == std::numbers::pi) return {Complex{}, Complex{1.0, 0.0}};
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const Complex phase = std::polar(1.0, adjoint ? -theta / 2.0 : theta / 2.0);
    const Complex keep = std::abs(c) < 1e-15 ? Complex{} : phase * c;
    const Complex flip = std::abs(s) < 1e-15 ? Complex{} : phase * Complex{0.0, adjoint ? s : -s};
    return {keep, flip};
}

inline void emit_transmitted(GrandState& out, const WalkScenario& sc, const ScattererSpec& spec,
                             std::int64_t scatterer_index, std::int64_t slot, BasisLabel label,
                             Complex amplitude, bool adjoint) {
    if (!spec.has_spin) {
        out.add(std::move(label), amplitude);
        return;
    }
    const std::size_t bit = sc.spin_bit(scatterer_index, slot);
    const auto [keep, flip] = spin_rotation(spec.flip_angle, adjoint);
    if (flip != Complex{}) {
        BasisLabel flipped = label;
        flipped.spins.flip(bit);
        out.add(std::move(flipped), amplitude * flip);
    }
    if (keep != Complex{}) out.add(std::move(label), amplitude * keep);
}

inline void check_cap(const GrandState& state, const WalkScenario& sc, std::int64_t reached) {
    if (state.size() > sc.term_cap)
        throw StateExplosionError(static_cast<double>(reached), state.size());
}

}  // namespace detail

// One unit of time starting at time `slot` (the slot selects the spin
// register in fresh-spin mode; persistent mode ignores it).
inline GrandState step(const GrandState& state, const WalkScenario& sc, std::int64_t slot = 0) {
    GrandState out(state.spin_sites());
    out.reserve(state.size() * 2);
    for (const auto& [label, amp] : state) {
        const bool right = label.direction == Direction::Right;
        const std::int64_t k = right ? label.site + 1 : label.site;
        const std::int64_t next_cell = right ? label.site + 1 : label.site - 1;
        const ScattererSpec* spec = sc.scatterer(k);
        if (spec == nullptr) {
            out.add({next_cell, label.direction, label.spins}, amp);
            continue;
        }
        const ScatteringMatrix sm = build_scattering_matrix(*spec);
        const Complex r = right ? sm.r_ll : sm.r_rr;
        const Complex t = right ? sm.t_lr : sm.t_rl;
        if (r != Complex{}) out.add({label.site, reversed(label.direction), label.spins}, amp * r);
        if (t != Complex{})
            detail::emit_transmitted(out, sc, *spec, k, slot, {next_cell, label.direction, label.spins},
                                     amp * t, false);
    }
    out.prune();
    detail::check_cap(out, sc, slot);
    return out;
}

// Exact inverse of step(., ., slot): maps the state at time slot + 1 back to time slot.
inline GrandState step_inverse(const GrandState& state, const WalkScenario& sc, std::int64_t slot = 0) {
    GrandState out(state.spin_sites());
    out.reserve(state.size() * 2);
    for (const auto& [label, amp] : state) {
        const bool right = label.direction == Direction::Right;
        // A right mover in cell c arrived through scatterer c (from cell c - 1)
        // or was reflected at it; a left mover arrived through scatterer c + 1.
        const std::int64_t k = right ? label.site : label.site + 1;
        const std::int64_t prev_cell = right ? label.site - 1 : label.site + 1;
        const ScattererSpec* spec = sc.scatterer(k);
        if (spec == nullptr) {
            out.add({prev_cell, label.direction, label.spins}, amp);
            continue;
        }
        const ScatteringMatrix sm = build_scattering_matrix(*spec);
        const Complex r = right ? sm.r_rr : sm.r_ll;
        const Complex t = right ? sm.t_lr : sm.t_rl;
        if (r != Complex{})
            out.add({label.site, reversed(label.direction), label.spins}, amp * std::conj(r));
        if (t != Complex{})
            detail::emit_transmitted(out, sc, *spec, k, slot, {prev_cell, label.direction, label.spins},
                                     amp * std::conj(t), true);
    }
    out.prune();
    detail::check_cap(out, sc, slot);
    return out;
}

// Reverses every basis vector (direction and all reservoir spins) and keeps
// the amplitudes.
inline GrandState reverse_incomplete(const GrandState& state) {
    GrandState out(state.spin_sites());
    out.reserve(state.size());
    for (const auto& [label, amp] : state)
        out.add({label.site, reversed(label.direction), label.spins.complemented()}, amp);
    return out;
}

// Basis reversal plus complex conjugation of every amplitude.
inline GrandState reverse_complete(const GrandState& state) {
    GrandState out = reverse_incomplete(state);
    out.transform_amplitudes([](const BasisLabel&, Complex a) { return std::conj(a); });
    return out;
}

// Applies `steps` inverse steps to a state at time `time`.
inline GrandState evolve_backward(const GrandState& state, const WalkScenario& sc, std::size_t steps,
                                  std::int64_t time = 0) {
    GrandState s = state;
    for (std::size_t n = 0; n < steps; ++n) s = step_inverse(s, sc, time - 1 - static_cast<std::int64_t>(n));
    return s;
}

inline GrandState evolve_forward(const GrandState& state, const WalkScenario& sc, std::size_t steps,
                                 std::int64_t time = 0) {
    GrandState s = state;
    for (std::size_t n = 0; n < steps; ++n) s = step(s, sc, time + static_cast<std::int64_t>(n));
    return s;
}

struct EntropySeries {
    std::vector<std::int64_t> times;
    std::vector<double> entropy_bits;
    std::vector<std::int64_t> drop_steps;  // tau with S(tau) < S(tau - 1)

    static constexpr double kDropTolerance = 1e-10;

    void push(std::int64_t tau, double bits) {
        if (!times.empty() && bits < entropy_bits.back() - kDropTolerance) drop_steps.push_back(tau);
        times.push_back(tau);
        entropy_bits.push_back(bits);
    }

    bool is_drop(std::size_t i) const {
        return std::find(drop_steps.begin(), drop_steps.end(), times[i]) != drop_steps.end();
    }

    std::size_t size() const noexcept { return times.size(); }
};

inline double system_entropy_bits(const GrandState& state) {
    return von_neumann(partial_trace(state)).bits;
}

// Right movers only where i + tau is even, left movers only where it is odd
// (holds for walks started from cell 0 moving right).
inline bool satisfies_parity(const GrandState& state, std::int64_t tau) {
    for (const auto& [label, amp] : state) {
        const bool even = ((label.site + tau) % 2 + 2) % 2 == 0;
        if (label.direction == Direction::Right && !even) return false;
        if (label.direction == Direction::Left && even) return false;
    }
    return true;
}

// Classical occupation P(cell, direction) of the fresh-spin walk. Every path
// leaves its own record in the reservoir, so rho is diagonal and equals this
// Markov chain, which scales to thousands of steps.
class ClassicalWalk {
public:
    explicit ClassicalWalk(const WalkScenario& sc) : sc_(sc) {
        const GrandState init = sc.initial_state();
        std::int64_t extent = 0;
        for (const auto& [label, amp] : init) extent = std::max(extent, std::abs(label.site));
        reach_ = extent + static_cast<std::int64_t>(sc.horizon) + 2;
        right_.assign(static_cast<std::size_t>(2 * reach_ + 1), 0.0);
        left_ = right_;
        // Paths start orthogonal only if the initial reservoir is one configuration.
        const SpinConfig* common = nullptr;
        for (const auto& [label, amp] : init) {
            if (common && !(label.spins == *common))
                throw Error(ErrorCode::InvalidArgument, "classical walk needs a product initial state");
            common = &label.spins;
            cell(label.direction, label.site) += std::norm(amp);
        }
    }

    void advance() {
        std::vector<double> nr(right_.size(), 0.0), nl(left_.size(), 0.0);
        for (std::int64_t c = -reach_; c <= reach_; ++c) {
            const double pr = right_[idx(c)];
            if (pr > 0.0) {
                const ScattererSpec* s = sc_.scatterer(c + 1);
                const double tp = s ? s->transparency : 1.0;
                if (c + 1 <= reach_) nr[idx(c + 1)] += pr * tp;
                nl[idx(c)] += pr * (1.0 - tp);
            }
            const double pl = left_[idx(c)];
            if (pl > 0.0) {
                const ScattererSpec* s = sc_.scatterer(c);
                const double tp = s ? s->transparency : 1.0;
                if (c - 1 >= -reach_) nl[idx(c - 1)] += pl * tp;
                nr[idx(c)] += pl * (1.0 - tp);
            }
        }
        right_ = std::move(nr);
        left_ = std::move(nl);
    }

    std::vector<double> probabilities() const {
        std::vector<double> p;
        for (std::int64_t c = -reach_; c <= reach_; ++c) {
            if (right_[idx(c)] > 0.0) p.push_back(right_[idx(c)]);
            if (left_[idx(c)] > 0.0) p.push_back(left_[idx(c)]);
        }
        return p;
    }

    double probability(std::int64_t site, Direction d) const {
        if (site < -reach_ || site > reach_) return 0.0;
        return d == Direction::Right ? right_[idx(site)] : left_[idx(site)];
    }

    double entropy_bits() const {
        std::vector<double> p = probabilities();
        // Renormalize away summation rounding accumulated over many steps.
        double total = 0.0;
        for (double x : p) total += x;
        for (double& x : p) x /= total;
        return shannon(p).bits;
    }

private:
    std::size_t idx(std::int64_t c) const { return static_cast<std::size_t>(c + reach_); }
    double& cell(Direction d, std::int64_t c) { return d == Direction::Right ? right_[idx(c)] : left_[idx(c)]; }

    const WalkScenario& sc_;
    std::int64_t reach_ = 0;
    std::vector<double> right_;
    std::vector<double> left_;
};

struct WalkRun {
    EntropySeries series;
    std::optional<double> truncated_at;  // set when the term cap stopped the run
};

// Forward run with S(tau) for tau = 0..horizon. Never throws StateExplosion;
// a capped run reports the last completed tau instead.
inline WalkRun run_walk(const WalkScenario& sc) {
    sc.validate();
    WalkRun run;
    if (sc.spin_mode == SpinMode::FreshEachStep) {
        ClassicalWalk walk(sc);
        run.series.push(0, walk.entropy_bits());
        for (std::size_t tau = 1; tau <= sc.horizon; ++tau) {
            walk.advance();
            run.series.push(static_cast<std::int64_t>(tau), walk.entropy_bits());
        }
        return run;
    }
    GrandState state = sc.initial_state();
    run.series.push(0, system_entropy_bits(state));
    for (std::size_t tau = 1; tau <= sc.horizon; ++tau) {
        try {
            state = step(state, sc, static_cast<std::int64_t>(tau - 1));
        } catch (const StateExplosionError&) {
            run.truncated_at = static_cast<double>(tau - 1);
            break;
        }
        run.series.push(static_cast<std::int64_t>(tau), system_entropy_bits(state));
    }
    return run;
}

inline EntropySeries evolve_entropy(const WalkScenario& sc) {
    WalkRun run = run_walk(sc);
    if (run.truncated_at) throw StateExplosionError(*run.truncated_at, sc.term_cap);
    return std::move(run.series);
}

// S(-tau) for tau = 0..horizon, by inverse steps from the initial state.
inline EntropySeries evolve_entropy_backward(const WalkScenario& sc) {
    sc.validate();
    if (sc.spin_mode != SpinMode::Persistent)
        throw Error(ErrorCode::InvalidArgument, "backward series needs persistent spins");
    EntropySeries series;
    GrandState state = sc.initial_state();
    series.push(0, system_entropy_bits(state));
    for (std::size_t tau = 1; tau <= sc.horizon; ++tau) {
        state = step_inverse(state, sc, -static_cast<std::int64_t>(tau));
        series.push(-static_cast<std::int64_t>(tau), system_entropy_bits(state));
    }
    return series;
}

struct DropRow {
    double transparency = 0.0;
    std::optional<std::int64_t> first_drop;  // first tau with S(tau + 1) < S(tau); nullopt: none found
};

// First entropy drop per transparency: regular persistent array, default phases.
inline std::vector<DropRow> sweep_transparency(const std::vector<double>& transparencies,
                                               std::size_t horizon, double phase_ll = 0.0,
                                               double phase_lr = 0.0) {
    for (double t : transparencies)
        if (!(t > 0.0 && t < 1.0))
            throw Error(ErrorCode::InvalidArgument, "swept transparency " + std::to_string(t) +
                                                        " outside (0, 1)");
    return parallel_map<DropRow>(transparencies.size(), [&](std::size_t i) {
        const EntropySeries s =
            evolve_entropy(regular_array(transparencies[i], phase_ll, phase_lr, horizon));
        DropRow row{transparencies[i], std::nullopt};
        if (!s.drop_steps.empty()) row.first_drop = s.drop_steps.front() - 1;
        return row;
    });
}

enum class HalfSpacePhase { Forward, Reversed, Exited };

struct HalfSpaceRun {
    EntropySeries series;
    std::vector<HalfSpacePhase> phases;  // one per series entry
    std::int64_t reversal_time = 0;
    std::optional<std::int64_t> exit_time;  // first tau after reversal with the particle gone
    GrandState final_state;
};

// Particle leaving the slab: every component sits in the empty half (cells
// <= 0) and moves away from the scatterers.
inline bool has_exited_half_space(const GrandState& state) {
    for (const auto& [label, amp] : state)
        if (label.site > 0 || label.direction != Direction::Left) return false;
    return true;
}

// Scatterers fill cells 1..depth (a slab standing in for the disordered half
// space x >= 1); the particle starts in cell 0 moving into it. Each scattering
// writes into a fresh register, so the forward run interacts with every
// reservoir degree of freedom once. After `horizon` steps the grand state is
// completely reversed and evolved with the register schedule replayed
// backwards, then followed for `tail` more steps.
inline HalfSpaceRun half_space_scenario(std::size_t depth, std::size_t horizon,
                                        double transparency = 0.5, std::size_t tail = 4,
                                        double phase_ll = 0.0, double phase_lr = 0.0) {
    WalkScenario sc;
    sc.first_index = 1;
    for (std::size_t k = 1; k <= depth; ++k)
        sc.scatterers.push_back({static_cast<double>(k), transparency, phase_ll, phase_lr, true,
                                 std::numbers::pi});
    sc.spin_mode = SpinMode::FreshEachStep;
    sc.horizon = horizon;
    sc.validate();

    HalfSpaceRun run;
    GrandState state = sc.initial_state();
    const auto h = static_cast<std::int64_t>(horizon);
    auto record = [&](std::int64_t tau, HalfSpacePhase phase) {
        run.series.push(tau, system_entropy_bits(state));
        run.phases.push_back(phase);
    };
    record(0, HalfSpacePhase::Forward);
    for (std::int64_t tau = 1; tau <= h; ++tau) {
        state = step(state, sc, tau - 1);
        record(tau, HalfSpacePhase::Forward);
    }
    state = reverse_complete(state);
    run.reversal_time = h;
    for (std::int64_t n = 1; n <= h + static_cast<std::int64_t>(tail); ++n) {
        // Past the replayed schedule no register exists; hitting a scatterer there throws.
        const std::int64_t slot = n <= h ? h - n : -1;
        state = step(state, sc, slot);
        if (!run.exit_time && has_exited_half_space(state)) run.exit_time = h + n;
        record(h + n, run.exit_time ? HalfSpacePhase::Exited : HalfSpacePhase::Reversed);
    }
    run.final_state = std::move(state);
    return run;
}

}  // namespace entlab
