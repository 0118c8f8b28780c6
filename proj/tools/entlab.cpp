// Command-line front end. Every run is a pure function of (config, flags,
// seed); tables are assembled in task order and printed with %.12g.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "entlab/entlab.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace entlab;

constexpr int kSchemaVersion = 1;
constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitTruncated = 3;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
    bool truncated = false;
    std::string note;
    json extra = json::object();
};

std::string format_cell(const json& v) {
    if (v.is_null()) return "NA";
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    if (v.is_number_float()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
        return buf;
    }
    return v.get<std::string>();
}

std::string render_csv(const Table& t) {
    std::ostringstream out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
        out << '\n';
    }
    if (t.truncated) out << "# truncated: " << t.note << '\n';
    return out.str();
}

std::string render_json(const Table& t, const std::string& command, std::uint64_t seed) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = command;
    doc["seed"] = seed;
    doc["columns"] = t.columns;
    doc["rows"] = t.rows;
    doc["truncated"] = t.truncated;
    if (t.truncated) doc["note"] = t.note;
    for (const auto& [k, v] : t.extra.items()) doc[k] = v;
    return doc.dump(2) + "\n";
}

// Flag values override config values, which override defaults. Config keys
// use the flag name with '-' replaced by '_'.
class Params {
public:
    template <typename T>
    void add(CLI::App* app, const std::string& name, T& target, const std::string& help) {
        auto staged = std::make_shared<T>(target);
        CLI::Option* opt = app->add_option("--" + name, *staged, help)->default_str(CLI::detail::to_string(target));
        std::string key = name;
        for (char& c : key)
            if (c == '-') c = '_';
        resolvers_.push_back([staged, opt, key, &target](const json& cfg) {
            if (cfg.contains(key)) target = cfg.at(key).get<T>();
            if (opt->count() > 0) target = *staged;
        });
        keys_.push_back(key);
    }

    void add_flag(CLI::App* app, const std::string& name, bool& target, const std::string& help) {
        auto staged = std::make_shared<bool>(false);
        CLI::Option* opt = app->add_flag("--" + name, *staged, help);
        std::string key = name;
        for (char& c : key)
            if (c == '-') c = '_';
        resolvers_.push_back([staged, opt, key, &target](const json& cfg) {
            if (cfg.contains(key)) target = cfg.at(key).get<bool>();
            if (opt->count() > 0) target = *staged;
        });
        keys_.push_back(key);
    }

    void resolve(const json& cfg) const {
        for (const auto& [k, v] : cfg.items())
            if (std::find(keys_.begin(), keys_.end(), k) == keys_.end())
                throw Error(ErrorCode::InvalidArgument, "unknown config parameter '" + k + "'");
        for (const auto& r : resolvers_) r(cfg);
    }

private:
    std::vector<std::function<void(const json&)>> resolvers_;
    std::vector<std::string> keys_;
};

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0) throw Error(ErrorCode::InvalidArgument, "bad number '" + item + "' in list");
        out.push_back(v);
    }
    if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty list");
    return out;
}

// ---- walk ------------------------------------------------------------------

struct WalkArgs {
    double T = 0.5;
    double chi_ll = 0.0;
    double chi_lr = 0.0;
    std::int64_t horizon = 8;
    std::string mode = "persistent";
    std::string scenario = "regular";  // regular | half-space
    std::string reversal = "none";     // none | complete | incomplete
    std::int64_t reverse_at = 0;
    std::int64_t depth = 6;
    std::int64_t tail = 4;
    bool backward = false;
    std::int64_t term_cap = 5'000'000;

    void bind(Params& p, CLI::App* app) {
        p.add(app, "T", T, "scatterer transparency");
        p.add(app, "chi-ll", chi_ll, "left reflection phase");
        p.add(app, "chi-lr", chi_lr, "transmission phase");
        p.add(app, "horizon", horizon, "number of steps");
        p.add(app, "mode", mode, "persistent | fresh");
        p.add(app, "scenario", scenario, "regular | half-space");
        p.add(app, "reversal", reversal, "none | complete | incomplete");
        p.add(app, "reverse-at", reverse_at, "step after which the grand state is reversed");
        p.add(app, "depth", depth, "half-space slab depth");
        p.add(app, "tail", tail, "half-space steps after the replayed schedule");
        p.add_flag(app, "backward", backward, "emit S(-tau) rows as well");
        p.add(app, "term-cap", term_cap, "grand-state term cap");
    }
};

void push_series(Table& t, const EntropySeries& s) {
    for (std::size_t i = 0; i < s.size(); ++i) t.rows.push_back({s.times[i], s.entropy_bits[i], s.is_drop(i)});
}

void run_walk_command(const WalkArgs& a, Table& t) {
    t.columns = {"tau", "entropy_bits", "is_drop"};
    if (a.horizon < 1) throw Error(ErrorCode::InvalidArgument, "horizon must be >= 1");
    const auto h = static_cast<std::size_t>(a.horizon);
    if (a.scenario == "half-space") {
        if (a.depth < 1 || a.tail < 0) throw Error(ErrorCode::InvalidArgument, "depth >= 1 and tail >= 0 required");
        const HalfSpaceRun run = half_space_scenario(static_cast<std::size_t>(a.depth), h, a.T,
                                                     static_cast<std::size_t>(a.tail), a.chi_ll, a.chi_lr);
        push_series(t, run.series);
        t.extra["reversal_time"] = run.reversal_time;
        t.extra["exit_time"] = run.exit_time ? json(*run.exit_time) : json(nullptr);
        return;
    }
    if (a.scenario != "regular") throw Error(ErrorCode::InvalidArgument, "unknown scenario '" + a.scenario + "'");
    SpinMode mode{};
    if (a.mode == "persistent") mode = SpinMode::Persistent;
    else if (a.mode == "fresh") mode = SpinMode::FreshEachStep;
    else throw Error(ErrorCode::InvalidArgument, "unknown mode '" + a.mode + "'");
    if (!(a.T >= 0.0 && a.T <= 1.0)) throw Error(ErrorCode::InvalidArgument, "T outside [0, 1]");
    if (a.term_cap < 1) throw Error(ErrorCode::InvalidArgument, "term cap must be positive");

    WalkScenario sc = regular_array(a.T, a.chi_ll, a.chi_lr, h, mode);
    sc.term_cap = static_cast<std::size_t>(a.term_cap);

    if (a.reversal == "none") {
        if (a.backward) {
            const EntropySeries back = evolve_entropy_backward(sc);
            for (std::size_t i = back.size(); i-- > 1;)
                t.rows.push_back({back.times[i], back.entropy_bits[i], back.is_drop(i)});
        }
        const WalkRun run = run_walk(sc);
        push_series(t, run.series);
        if (run.truncated_at) {
            t.truncated = true;
            t.note = "state explosion after tau=" + format_cell(*run.truncated_at);
        }
        return;
    }
    if (mode != SpinMode::Persistent)
        throw Error(ErrorCode::InvalidArgument, "reversal demos need persistent spins");
    if (a.reverse_at < 0 || a.reverse_at > a.horizon)
        throw Error(ErrorCode::InvalidArgument, "reverse-at must lie in [0, horizon]");
    if (a.reversal != "complete" && a.reversal != "incomplete")
        throw Error(ErrorCode::InvalidArgument, "unknown reversal '" + a.reversal + "'");
    EntropySeries s;
    GrandState state = sc.initial_state();
    s.push(0, system_entropy_bits(state));
    try {
        for (std::int64_t tau = 1; tau <= a.horizon; ++tau) {
            state = step(state, sc, tau - 1);
            if (tau == a.reverse_at)
                state = a.reversal == "complete" ? reverse_complete(state) : reverse_incomplete(state);
            s.push(tau, system_entropy_bits(state));
        }
    } catch (const StateExplosionError& e) {
        push_series(t, s);
        t.truncated = true;
        t.note = "state explosion after tau=" + format_cell(static_cast<double>(s.times.back()));
        return;
    }
    push_series(t, s);
    t.extra["fidelity_with_reversed_start"] = fidelity(state, reverse_complete(sc.initial_state()));
}

// ---- sweep-t ---------------------------------------------------------------

struct SweepArgs {
    double from = 0.3;
    double to = 0.85;
    double step = 0.01;
    std::int64_t horizon = 8;
    double chi_ll = 0.0;
    double chi_lr = 0.0;

    void bind(Params& p, CLI::App* app) {
        p.add(app, "from", from, "first transparency");
        p.add(app, "to", to, "last transparency");
        p.add(app, "step", step, "transparency increment");
        p.add(app, "horizon", horizon, "steps per run");
        p.add(app, "chi-ll", chi_ll, "left reflection phase");
        p.add(app, "chi-lr", chi_lr, "transmission phase");
    }
};

void run_sweep_command(const SweepArgs& a, Table& t) {
    t.columns = {"T", "first_drop_step"};
    if (!(a.step > 0.0) || a.to < a.from) throw Error(ErrorCode::InvalidArgument, "need step > 0 and to >= from");
    if (a.horizon < 1) throw Error(ErrorCode::InvalidArgument, "horizon must be >= 1");
    const auto count = static_cast<std::size_t>(std::floor((a.to - a.from) / a.step + 1e-9)) + 1;
    std::vector<double> ts;
    for (std::size_t i = 0; i < count; ++i) ts.push_back(a.from + static_cast<double>(i) * a.step);
    for (const DropRow& row : sweep_transparency(ts, static_cast<std::size_t>(a.horizon), a.chi_ll, a.chi_lr))
        t.rows.push_back({row.transparency, row.first_drop ? json(*row.first_drop) : json(nullptr)});
}

// ---- disorder --------------------------------------------------------------

struct DisorderArgs {
    std::string mode = "positions";  // positions | amplitudes
    DisorderSpec spec;
    double horizon = 10.0;
    bool spins = false;
    std::int64_t cap = 2'000'000;
    double fit_from = 5.0;

    void bind(Params& p, CLI::App* app) {
        p.add(app, "mode", mode, "positions | amplitudes");
        p.add(app, "T", spec.base_T, "mean transparency");
        p.add(app, "delta-T", spec.delta_T, "transparency spread");
        p.add(app, "chi-ll", spec.chi_ll, "mean left reflection phase");
        p.add(app, "chi-lr", spec.chi_lr, "mean transmission phase");
        p.add(app, "delta-chi-ll", spec.delta_chi_ll, "left reflection phase spread");
        p.add(app, "delta-chi-lr", spec.delta_chi_lr, "transmission phase spread");
        p.add(app, "eta", spec.eta, "position disorder strength");
        p.add(app, "window", spec.n_scatterers_window, "scatterers -w..w (0: from horizon)");
        p.add(app, "horizon", horizon, "final time");
        p.add_flag(app, "spins", spins, "persistent spin on every scatterer (positions mode)");
        p.add(app, "cap", cap, "component cap");
        p.add(app, "fit-from", fit_from, "first time used by the growth fits (json output)");
    }
};

void add_fits(Table& t, const ComponentCensus& c, double from) {
    json fits = json::object();
    auto one = [&](const char* name, auto counts) {
        try {
            const GrowthFit f = fit_growth(c.times, counts, from);
            fits[name] = {{"a", f.a}, {"b", f.b}, {"r_squared", f.r_squared}, {"points", f.points}};
        } catch (const Error&) {
            fits[name] = nullptr;
        }
    };
    one("N_t", std::span<const double>(c.n_trajectories));
    one("N_wf", std::span<const std::size_t>(c.n_components));
    one("N_swf", std::span<const std::size_t>(c.n_significant));
    t.extra["fits"] = fits;
}

void run_disorder_command(const DisorderArgs& a, std::uint64_t seed, Table& t) {
    t.columns = {"tau", "N_t", "N_wf", "N_swf", "entropy_bits"};
    DisorderSpec spec = a.spec;
    spec.seed = seed;
    spec.validate();
    if (a.cap < 1) throw Error(ErrorCode::InvalidArgument, "cap must be positive");
    if (a.mode == "positions") {
        PositionRunOptions opt;
        opt.with_spins = a.spins;
        opt.component_cap = static_cast<std::size_t>(a.cap);
        const PositionRun run = simulate_random_positions(spec, a.horizon, opt);
        const ComponentCensus& c = run.census;
        for (std::size_t i = 0; i < c.size(); ++i)
            t.rows.push_back({c.times[i], c.n_trajectories[i], c.n_components[i], c.n_significant[i],
                              run.series.entropy_bits[i]});
        if (run.truncated_at) {
            t.truncated = true;
            t.note = "state explosion after tau=" + format_cell(*run.truncated_at);
        }
        add_fits(t, c, a.fit_from);
        return;
    }
    if (a.mode != "amplitudes") throw Error(ErrorCode::InvalidArgument, "unknown mode '" + a.mode + "'");
    if (!(a.horizon >= 1.0) || a.horizon != std::floor(a.horizon))
        throw Error(ErrorCode::InvalidArgument, "amplitude runs need an integer horizon >= 1");
    WalkScenario sc = random_amplitude_scenario(spec, static_cast<std::size_t>(a.horizon));
    sc.term_cap = static_cast<std::size_t>(a.cap);
    GrandState state = sc.initial_state();
    auto record = [&](std::int64_t tau) {
        std::vector<double> w;
        for (const auto& [label, amp] : state) w.push_back(std::norm(amp));
        t.rows.push_back({tau, std::exp2(static_cast<double>(tau)), state.size(), census_significant(w, 0.99),
                          system_entropy_bits(state)});
    };
    record(0);
    for (std::int64_t tau = 1; tau <= static_cast<std::int64_t>(a.horizon); ++tau) {
        try {
            state = step(state, sc, tau - 1);
        } catch (const StateExplosionError&) {
            t.truncated = true;
            t.note = "state explosion after tau=" + std::to_string(tau - 1);
            return;
        }
        record(tau);
    }
}

// ---- brems -----------------------------------------------------------------

struct BremsArgs {
    BremsParams params;
    std::int64_t points = 256;
    double x_min = -10.0;
    double x_max = 10.0;
    double sigma = 1.0;
    double k0 = 1.0;
    std::int64_t iterations = 10;

    void bind(Params& p, CLI::App* app) {
        p.add(app, "alpha0", params.alpha0, "fine-structure constant");
        p.add(app, "v-over-c", params.v_over_c, "particle speed over c");
        p.add(app, "omega", params.omega_cutoff, "frequency cutoff");
        p.add(app, "v-fermi", params.v_fermi, "Fermi velocity");
        p.add(app, "points", points, "grid points");
        p.add(app, "x-min", x_min, "grid start");
        p.add(app, "x-max", x_max, "grid end");
        p.add(app, "sigma", sigma, "packet width");
        p.add(app, "k0", k0, "packet momentum");
        p.add(app, "iterations", iterations, "successive scatterings");
    }
};

void run_brems_command(const BremsArgs& a, Table& t) {
    t.columns = {"iteration", "entropy_bits"};
    a.params.validate();
    if (a.iterations < 0) throw Error(ErrorCode::InvalidArgument, "iterations must be >= 0");
    if (a.points < 2 || a.points > 2048) throw Error(ErrorCode::InvalidArgument, "points must lie in [2, 2048]");
    const GridDensityMatrix rho = gaussian_packet(a.x_min, a.x_max, a.points, 0.5 * (a.x_min + a.x_max), a.sigma, a.k0);
    const std::vector<double> s = iterate_brems(rho, a.params, static_cast<std::size_t>(a.iterations));
    for (std::size_t i = 0; i < s.size(); ++i) t.rows.push_back({i, s[i]});
    t.extra["prefactor"] = a.params.prefactor();
}

// ---- mirrors ---------------------------------------------------------------

struct MirrorArgs {
    std::string taus = "10,20,50,100";
    std::string epsilons = "0.4,0.2,0.1,0.05";
    std::int64_t points = 16384;
    double dk = 0.0025;
    double sigma_k = 1.0;
    double k0 = 0.0;
    double mass = 1.0;
    double hbar = 1.0;

    void bind(Params& p, CLI::App* app) {
        p.add(app, "taus", taus, "comma-separated evolution times");
        p.add(app, "epsilons", epsilons, "comma-separated phase accuracies");
        p.add(app, "points", points, "k-grid points (even)");
        p.add(app, "dk", dk, "k-grid spacing");
        p.add(app, "sigma-k", sigma_k, "momentum width");
        p.add(app, "k0", k0, "mean momentum");
        p.add(app, "mass", mass, "particle mass");
        p.add(app, "hbar", hbar, "Planck constant");
    }
};

void run_mirrors_command(const MirrorArgs& a, Table& t) {
    t.columns = {"tau", "epsilon", "N", "fidelity"};
    const std::vector<double> taus = parse_list(a.taus);
    const std::vector<double> eps = parse_list(a.epsilons);
    if (a.points < 4 || a.points % 2 != 0 || a.points > (1 << 22))
        throw Error(ErrorCode::InvalidArgument, "points must be even and in [4, 2^22]");
    if (!(a.sigma_k > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma-k must be positive");
    const WavePacket packet = WavePacket::gaussian(a.points, a.dk, a.sigma_k, a.k0, 0.0, a.mass, a.hbar);
    packet.validate();
    for (double tau : taus)
        for (double e : eps) {
            if (!(tau > 0.0) || !(e > 0.0)) throw Error(ErrorCode::InvalidArgument, "tau and epsilon must be positive");
            try {
                const RefocusResult r = refocus_fidelity(packet, tau, e);
                t.rows.push_back({tau, e, r.mirrors, r.fidelity});
            } catch (const GridAliasingError& err) {
                t.truncated = true;
                t.note = "grid aliasing at tau=" + format_cell(tau) + "; use dk <= " + format_cell(err.suggested_dk());
                return;
            }
        }
}

// ---- lemma -----------------------------------------------------------------

struct LemmaArgs {
    std::int64_t dim = 8;
    std::int64_t trials = 1000;

    void bind(Params& p, CLI::App* app) {
        p.add(app, "dim", dim, "system dimension");
        p.add(app, "trials", trials, "number of random (beta, rho) pairs");
    }
};

void run_lemma_command(const LemmaArgs& a, std::uint64_t seed, Table& t) {
    t.columns = {"trial", "S_before", "S_after", "holds"};
    if (a.dim < 2 || a.dim > 256) throw Error(ErrorCode::InvalidArgument, "dim must lie in [2, 256]");
    if (a.trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
    const std::vector<LemmaTrial> res = parallel_map<LemmaTrial>(
        static_cast<std::size_t>(a.trials), [&](std::size_t i) { return lemma_trial(a.dim, seed, i); });
    for (std::size_t i = 0; i < res.size(); ++i) t.rows.push_back({i, res[i].s_before, res[i].s_after, res[i].holds()});
}

json load_config(const std::string& path, const std::string& command) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open config '" + path + "'");
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("config parse error: ") + e.what());
    }
    if (!cfg.is_object() || !cfg.contains("schema_version") || cfg["schema_version"] != kSchemaVersion)
        throw Error(ErrorCode::InvalidArgument, "config needs schema_version " + std::to_string(kSchemaVersion));
    if (cfg.contains("command") && cfg["command"] != command)
        throw Error(ErrorCode::InvalidArgument, "config is for '" + cfg["command"].get<std::string>() + "'");
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entlab: entanglement, reversal and decoherence experiments"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    std::string format = "csv";
    std::string out_path;
    std::string config_path;

    WalkArgs walk;
    SweepArgs sweep;
    DisorderArgs disorder;
    BremsArgs brems;
    MirrorArgs mirrors;
    LemmaArgs lemma;

    struct Sub {
        CLI::App* app;
        Params params;
    };
    std::vector<std::unique_ptr<Sub>> subs;
    auto make = [&](const std::string& name, const std::string& help, auto& args) {
        auto sub = std::make_unique<Sub>();
        sub->app = app.add_subcommand(name, help);
        sub->app->add_option("--seed", seed, "master seed");
        sub->app->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
        sub->app->add_option("--out", out_path, "output file (default: stdout)");
        sub->app->add_option("--config", config_path, "JSON config file");
        args.bind(sub->params, sub->app);
        subs.push_back(std::move(sub));
    };
    make("walk", "entropy of the 1D scatterer walk", walk);
    make("sweep-t", "first entropy drop versus transparency", sweep);
    make("disorder", "random amplitudes or positions: census and entropy", disorder);
    make("brems", "entropy under repeated bremsstrahlung dephasing", brems);
    make("mirrors", "mirror-row reversal: count and refocus fidelity", mirrors);
    make("lemma", "random checks of entropy monotonicity under Gramian beta", lemma);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    Sub* active = nullptr;
    for (auto& s : subs)
        if (s->app->parsed()) active = s.get();
    const std::string command = active->app->get_name();

    Table table;
    int code = kExitOk;
    try {
        const json cfg = load_config(config_path, command);
        if (cfg.contains("seed") && active->app->get_option("--seed")->count() == 0) seed = cfg["seed"].get<std::uint64_t>();
        if (cfg.contains("format") && active->app->get_option("--format")->count() == 0)
            format = cfg["format"].get<std::string>();
        if (format != "csv" && format != "json") throw Error(ErrorCode::InvalidArgument, "format must be csv or json");
        active->params.resolve(cfg.value("params", json::object()));

        if (command == "walk") run_walk_command(walk, table);
        else if (command == "sweep-t") run_sweep_command(sweep, table);
        else if (command == "disorder") run_disorder_command(disorder, seed, table);
        else if (command == "brems") run_brems_command(brems, table);
        else if (command == "mirrors") run_mirrors_command(mirrors, table);
        else run_lemma_command(lemma, seed, table);
        if (table.truncated) {
            std::cerr << "entlab: " << table.note << '\n';
            code = kExitTruncated;
        }
    } catch (const StateExplosionError& e) {
        table.truncated = true;
        table.note = e.what();
        std::cerr << "entlab: " << e.what() << '\n';
        code = kExitTruncated;
    } catch (const GridAliasingError& e) {
        table.truncated = true;
        table.note = e.what();
        std::cerr << "entlab: " << e.what() << '\n';
        code = kExitTruncated;
    } catch (const Error& e) {
        std::cerr << "entlab: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const json::exception& e) {
        std::cerr << "entlab: config value error: " << e.what() << '\n';
        return kExitInvalid;
    }

    const std::string text = format == "json" ? render_json(table, command, seed) : render_csv(table);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "entlab: cannot write '" << out_path << "'\n";
            return kExitInvalid;
        }
        out << text;
    }
    return code;
}
