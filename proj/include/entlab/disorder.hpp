#pragma once

// Disordered 1D chains. Two flavours share one per-scatterer disorder draw:
// random scattering amplitudes on the regular lattice (discrete time, walk
// engine) and random scatterer positions x_i = i + eta g_i (continuous time,
// event-driven Feynman-path bookkeeping with unit speed).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "entlab/entropy.hpp"
#include "entlab/errors.hpp"
#include "entlab/parallel.hpp"
#include "entlab/qstate.hpp"
#include "entlab/rng.hpp"
#include "entlab/walk1d.hpp"

namespace entlab {

struct DisorderSpec {
    double base_T = 0.5;
    double delta_T = 0.0;
    double chi_ll = 0.0;
    double chi_lr = 0.0;
    double delta_chi_ll = 0.0;
    double delta_chi_lr = 0.0;
    double eta = 0.0;  // position disorder strength
    std::uint64_t seed = 0;
    std::int64_t n_scatterers_window = 0;  // scatterers -w..w exist; 0 picks one from the horizon

    void validate() const {
        const double lo = base_T - 0.5 * std::abs(delta_T);
        const double hi = base_T + 0.5 * std::abs(delta_T);
        if (!(lo > 0.0 && hi < 1.0))
            throw Error(ErrorCode::InvalidArgument, "T_i range [" + std::to_string(lo) + ", " +
                                                        std::to_string(hi) + "] leaves (0, 1)");
        // eta < 1 keeps the scatterers in index order.
        if (!(eta >= 0.0 && eta < 1.0))
            throw Error(ErrorCode::InvalidArgument, "eta must lie in [0, 1)");
        if (!std::isfinite(chi_ll) || !std::isfinite(chi_lr) || !std::isfinite(delta_chi_ll) ||
            !std::isfinite(delta_chi_lr))
            throw Error(ErrorCode::InvalidArgument, "non-finite phase parameter");
        if (n_scatterers_window < 0) throw Error(ErrorCode::InvalidArgument, "negative scatterer window");
    }

    std::int64_t window(double horizon) const {
        if (n_scatterers_window > 0) return n_scatterers_window;
        return static_cast<std::int64_t>(std::ceil(horizon)) + 2;
    }

    // Scatterer `index` draws from its own stream, so a realization does not
    // depend on the window or on the order of evaluation. Four independent
    // g ~ U[-0.5, 0.5]: position, T, chi_LL, chi_LR.
    ScattererSpec scatterer(std::int64_t index) const {
        const std::uint64_t task = index >= 0 ? 2 * static_cast<std::uint64_t>(index)
                                              : 2 * static_cast<std::uint64_t>(-index) - 1;
        Rng rng(seed, task);
        const double g_pos = rng.uniform() - 0.5;
        const double g_t = rng.uniform() - 0.5;
        const double g_ll = rng.uniform() - 0.5;
        const double g_lr = rng.uniform() - 0.5;
        return {static_cast<double>(index) + eta * g_pos, base_T + g_t * delta_T,
                chi_ll + g_ll * delta_chi_ll, chi_lr + g_lr * delta_chi_lr, true, std::numbers::pi};
    }
};

struct ComponentCensus {
    std::vector<double> times;
    std::vector<double> n_trajectories;  // N_t
    std::vector<std::size_t> n_components;  // N_wf
    std::vector<std::size_t> n_significant;  // N_swf

    std::size_t size() const noexcept { return times.size(); }
};

// Smallest k such that the k largest weights reach coverage * total.
inline std::size_t census_significant(std::span<const double> weights, double coverage = 0.99) {
    if (!(coverage > 0.0 && coverage <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "coverage must lie in (0, 1]");
    std::vector<double> w(weights.begin(), weights.end());
    std::sort(w.begin(), w.end(), std::greater<>());
    double total = 0.0;
    for (double x : w) total += x;
    const double target = coverage * total * (1.0 - 1e-12);
    double acc = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        acc += w[k];
        if (acc >= target) return k + 1;
    }
    return w.size();
}

// Regular positions, per-site random (T_i, chi_LL,i, chi_LR,i), persistent spins.
inline WalkScenario random_amplitude_scenario(const DisorderSpec& spec, std::size_t horizon) {
    spec.validate();
    if (spec.eta != 0.0)
        throw Error(ErrorCode::InvalidArgument, "random-amplitude runs keep regular positions (eta = 0)");
    const std::int64_t w = spec.n_scatterers_window > 0 ? spec.n_scatterers_window
                                                         : static_cast<std::int64_t>(horizon) + 1;
    WalkScenario sc;
    sc.first_index = -w;
    for (std::int64_t k = -w; k <= w; ++k) sc.scatterers.push_back(spec.scatterer(k));
    sc.spin_mode = SpinMode::Persistent;
    sc.horizon = horizon;
    return sc;
}

inline EntropySeries run_random_amplitudes(const DisorderSpec& spec, std::size_t horizon) {
    return evolve_entropy(random_amplitude_scenario(spec, horizon));
}

struct PositionRunOptions {
    bool with_spins = false;  // one persistent spin per scatterer, flipped on transmission
    double start = 0.5;
    Direction direction = Direction::Right;
    double merge_tolerance = 1e-9;
    double tie_window = 1e-12;
    std::size_t component_cap = 2'000'000;
};

struct PositionRun {
    EntropySeries series;
    ComponentCensus census;
    std::optional<double> truncated_at;  // last sampled time before the cap was hit
    double max_norm_defect = 0.0;        // max |sum |a|^2 - 1| over samples
};

namespace detail {

// Eigenvalues of rho = Psi Psi^dagger via the smaller of Psi Psi^dagger and
// Psi^dagger Psi (same nonzero spectrum).
inline double column_entropy_bits(const Eigen::SparseMatrix<Complex>& psi) {
    Eigen::SparseMatrix<Complex> gram =
        psi.rows() <= psi.cols() ? Eigen::SparseMatrix<Complex>(psi * psi.adjoint())
                                 : Eigen::SparseMatrix<Complex>(psi.adjoint() * psi);
    ComplexMatrix dense(gram);
    dense = 0.5 * (dense + dense.adjoint()).eval();
    const double tr = dense.trace().real();
    Eigen::VectorXd eig = hermitian_eigenvalues(dense / tr);
    return EntropyValue::from_nats(detail::entropy_nats(eig)).bits;
}

class PositionEngine {
public:
    PositionEngine(const DisorderSpec& spec, double horizon, const PositionRunOptions& opt)
        : opt_(opt), window_(spec.window(horizon)) {
        for (std::int64_t k = -window_; k <= window_; ++k) {
            const ScattererSpec s = spec.scatterer(k);
            position_.push_back(s.position);
            matrix_.push_back(build_scattering_matrix(s));
        }
        const std::size_t width = opt.with_spins ? position_.size() : 0;
        std::int64_t next = 0;
        if (opt.direction == Direction::Right) {
            next = -window_;
            while (next <= window_ && x(next) <= opt.start) ++next;
        } else {
            next = window_;
            while (next >= -window_ && x(next) >= opt.start) --next;
        }
        insert({opt.direction, opt.start, next, Complex{1.0, 0.0}, 1.0, SpinConfig(width)}, 0.0);
    }

    // Advances through every crossing with time <= until.
    void advance_to(double until) {
        while (!events_.empty()) {
            const double t0 = std::get<0>(events_.top());
            if (t0 > until) break;
            batch_.clear();
            while (!events_.empty() && std::get<0>(events_.top()) <= t0 + opt_.tie_window) {
                batch_.push_back(std::get<2>(events_.top()));
                events_.pop();
            }
            std::sort(batch_.begin(), batch_.end(), [&](std::size_t a, std::size_t b) {
                const double xa = x(comps_[a].next), xb = x(comps_[b].next);
                if (xa != xb) return xa < xb;
                if (comps_[a].dir != comps_[b].dir) return comps_[a].dir < comps_[b].dir;
                return a < b;
            });
            // Parents leave the index first so a child never merges into a parent.
            for (std::size_t id : batch_) erase(id);
            for (std::size_t id : batch_) scatter(id, t0);
            if (live_ > opt_.component_cap) throw StateExplosionError(t0, live_);
        }
    }

    struct Sample {
        double n_traj = 0.0;
        std::size_t n_wf = 0;
        std::size_t n_swf = 0;
        double norm = 0.0;
        double entropy_bits = 0.0;
    };

    Sample sample() const {
        Sample s;
        std::vector<double> weights;
        std::vector<std::size_t> kept;
        for (std::size_t id = 0; id < comps_.size(); ++id) {
            const Component& c = comps_[id];
            if (!c.live) continue;
            s.n_traj += c.n_traj;
            ++s.n_wf;  // structural count: exact interference zeros still occupy a component
            if (std::abs(c.amp) < GrandState::kPruneThreshold) continue;
            weights.push_back(std::norm(c.amp));
            kept.push_back(id);
            s.norm += weights.back();
        }
        s.n_swf = weights.empty() ? 0 : census_significant(weights, 0.99);
        if (opt_.with_spins && !kept.empty()) s.entropy_bits = entropy_of(kept);
        return s;
    }

    std::size_t live() const noexcept { return live_; }

private:
    struct Component {
        Direction dir;
        double c;           // x - t for right movers, x + t for left movers
        std::int64_t next;  // index of the next scatterer on the path
        Complex amp;
        double n_traj;
        SpinConfig spins;
        bool live = true;
    };

    struct Key {
        Direction dir;
        std::int64_t bin;
        SpinConfig spins;
        friend bool operator==(const Key&, const Key&) = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            return static_cast<std::size_t>(splitmix64(k.spins.hash() ^ static_cast<std::uint64_t>(k.bin)) ^
                                            static_cast<std::uint64_t>(k.dir));
        }
    };

    double x(std::int64_t k) const { return position_[static_cast<std::size_t>(k + window_)]; }
    bool in_window(std::int64_t k) const { return k >= -window_ && k <= window_; }

    std::int64_t bin(double c) const { return std::llround(c / opt_.merge_tolerance); }

    double hit_time(const Component& c) const {
        if (!in_window(c.next)) return std::numeric_limits<double>::infinity();
        return c.dir == Direction::Right ? x(c.next) - c.c : c.c - x(c.next);
    }

    void insert(Component comp, double now) {
        const std::int64_t b = bin(comp.c);
        for (std::int64_t nb = b - 1; nb <= b + 1; ++nb) {
            auto it = index_.find(Key{comp.dir, nb, comp.spins});
            if (it == index_.end()) continue;
            Component& other = comps_[it->second];
            if (std::abs(other.c - comp.c) <= opt_.merge_tolerance) {
                other.amp += comp.amp;
                other.n_traj += comp.n_traj;
                return;
            }
        }
        const std::size_t id = comps_.size();
        index_.emplace(Key{comp.dir, b, comp.spins}, id);
        comps_.push_back(std::move(comp));
        ++live_;
        const double t = hit_time(comps_.back());
        if (std::isfinite(t)) events_.emplace(std::max(t, now), x(comps_.back().next), id);
    }

    void erase(std::size_t id) {
        Component& c = comps_[id];
        index_.erase(Key{c.dir, bin(c.c), c.spins});
        c.live = false;
        --live_;
    }

    void scatter(std::size_t id, double now) {
        const Component parent = comps_[id];
        const std::int64_t k = parent.next;
        const double xk = x(k);
        const ScatteringMatrix& sm = matrix_[static_cast<std::size_t>(k + window_)];
        const bool right = parent.dir == Direction::Right;
        const Complex r = right ? sm.r_ll : sm.r_rr;
        const Complex t = right ? sm.t_lr : sm.t_rl;
        const std::int64_t step = right ? 1 : -1;
        if (r != Complex{})
            insert({reversed(parent.dir), 2.0 * xk - parent.c, k - step, parent.amp * r, parent.n_traj,
                    parent.spins},
                   now);
        if (t != Complex{}) {
            SpinConfig spins = parent.spins;
            if (opt_.with_spins) spins.flip(static_cast<std::size_t>(k + window_));
            insert({parent.dir, parent.c, k + step, parent.amp * t, parent.n_traj, std::move(spins)}, now);
        }
    }

    double entropy_of(const std::vector<std::size_t>& kept) const {
        // System label: (direction, position); position identity uses the merge tolerance.
        std::vector<std::size_t> order = kept;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (comps_[a].dir != comps_[b].dir) return comps_[a].dir < comps_[b].dir;
            return comps_[a].c < comps_[b].c;
        });
        std::vector<Eigen::Index> row(comps_.size(), 0);
        Eigen::Index rows = 0;
        for (std::size_t n = 0; n < order.size(); ++n) {
            const Component& c = comps_[order[n]];
            if (n > 0) {
                const Component& p = comps_[order[n - 1]];
                if (p.dir != c.dir || c.c - p.c > opt_.merge_tolerance) ++rows;
            }
            row[order[n]] = rows;
        }
        ++rows;
        std::map<SpinConfig, Eigen::Index> col;
        std::vector<Eigen::Triplet<Complex>> entries;
        for (std::size_t id : kept) {
            const auto [it, fresh] = col.emplace(comps_[id].spins, static_cast<Eigen::Index>(col.size()));
            entries.emplace_back(row[id], it->second, comps_[id].amp);
        }
        Eigen::SparseMatrix<Complex> psi(rows, static_cast<Eigen::Index>(col.size()));
        psi.setFromTriplets(entries.begin(), entries.end());
        return column_entropy_bits(psi);
    }

    using Event = std::tuple<double, double, std::size_t>;  // (time, scatterer position, id)

    PositionRunOptions opt_;
    std::int64_t window_;
    std::vector<double> position_;
    std::vector<ScatteringMatrix> matrix_;
    std::vector<Component> comps_;
    std::unordered_map<Key, std::size_t, KeyHash> index_;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
    std::vector<std::size_t> batch_;
    std::size_t live_ = 0;
};

}  // namespace detail

// Continuous-time evolution with samples at tau = 0, 1, ..., floor(horizon).
// A capped run keeps the samples completed so far.
inline PositionRun simulate_random_positions(const DisorderSpec& spec, double horizon,
                                             const PositionRunOptions& opt = {}) {
    spec.validate();
    if (!(horizon >= 0.0) || !std::isfinite(horizon))
        throw Error(ErrorCode::InvalidArgument, "horizon must be finite and non-negative");
    detail::PositionEngine engine(spec, horizon, opt);
    PositionRun run;
    const auto last = static_cast<std::int64_t>(std::floor(horizon));
    for (std::int64_t tau = 0; tau <= last; ++tau) {
        try {
            engine.advance_to(static_cast<double>(tau));
        } catch (const StateExplosionError&) {
            if (tau > 0) run.truncated_at = static_cast<double>(tau - 1);
            else run.truncated_at = 0.0;
            return run;
        }
        const auto s = engine.sample();
        run.census.times.push_back(static_cast<double>(tau));
        run.census.n_trajectories.push_back(s.n_traj);
        run.census.n_components.push_back(s.n_wf);
        run.census.n_significant.push_back(s.n_swf);
        run.series.push(tau, s.entropy_bits);
        run.max_norm_defect = std::max(run.max_norm_defect, std::abs(s.norm - 1.0));
    }
    return run;
}

inline std::pair<EntropySeries, ComponentCensus> run_random_positions(const DisorderSpec& spec, double horizon,
                                                                      const PositionRunOptions& opt = {}) {
    PositionRun run = simulate_random_positions(spec, horizon, opt);
    if (run.truncated_at) throw StateExplosionError(*run.truncated_at, opt.component_cap);
    return {std::move(run.series), std::move(run.census)};
}

// One realization per seed, in seed order.
inline std::vector<PositionRun> position_ensemble(DisorderSpec spec, double horizon,
                                                  const std::vector<std::uint64_t>& seeds,
                                                  const PositionRunOptions& opt = {}) {
    return parallel_map<PositionRun>(seeds.size(), [&](std::size_t i) {
        DisorderSpec s = spec;
        s.seed = seeds[i];
        return simulate_random_positions(s, horizon, opt);
    });
}

struct GrowthFit {
    double a = 0.0;  // N ~ 2^{a tau^b}
    double b = 0.0;
    double r_squared = 0.0;
    double residual = 0.0;  // RMS residual of log2 log2 N
    std::size_t points = 0;
};

// Least squares of log2 log2 N = log2 a + b log2 tau over samples with
// tau >= tau_min and N > 1.
inline GrowthFit fit_growth(std::span<const double> times, std::span<const double> counts,
                            double tau_min = 0.0) {
    if (times.size() != counts.size())
        throw Error(ErrorCode::DimensionMismatch, "times and counts differ in length");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] <= 0.0 || times[i] < tau_min || counts[i] <= 1.0) continue;
        xs.push_back(std::log2(times[i]));
        ys.push_back(std::log2(std::log2(counts[i])));
    }
    if (xs.size() < 6)
        throw Error(ErrorCode::InsufficientData,
                    "need at least 6 usable samples, have " + std::to_string(xs.size()));
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw Error(ErrorCode::InsufficientData, "samples share one time");
    GrowthFit fit;
    fit.b = sxy / sxx;
    fit.a = std::exp2(my - fit.b * mx);
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (my + fit.b * (xs[i] - mx));
        ss_res += e * e;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    fit.residual = std::sqrt(ss_res / n);
    fit.points = xs.size();
    return fit;
}

inline GrowthFit fit_growth(std::span<const double> times, std::span<const std::size_t> counts,
                            double tau_min = 0.0) {
    std::vector<double> c(counts.begin(), counts.end());
    return fit_growth(times, std::span<const double>(c), tau_min);
}

// Finite packet width: components closer than lambda = 1/k_max overlap, so at
// most spread * k_max of them are distinguishable.
inline double effective_component_count(double n_components, double spread, double k_max) {
    if (!(spread >= 0.0) || !(k_max > 0.0))
        throw Error(ErrorCode::InvalidArgument, "spread must be >= 0 and k_max > 0");
    return std::min(n_components, spread * k_max);
}

}  // namespace entlab
