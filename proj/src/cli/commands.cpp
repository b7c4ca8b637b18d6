#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "catlab/analysis.hpp"
#include "catlab/cli.hpp"
#include "catlab/error.hpp"
#include "catlab/evolution.hpp"
#include "catlab/initial_data.hpp"
#include "catlab/model.hpp"
#include "catlab/quadrature.hpp"
#include "catlab/reference.hpp"
#include "catlab/shooting.hpp"
#include "catlab/spectral.hpp"

namespace catlab::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_verify = 3;
constexpr int exit_inconclusive = 4;

/// Shared state of one subcommand invocation.
struct Run {
    std::string subcommand;
    Config cfg;
    std::string dir;
    std::vector<std::string> outputs;
    std::ostream* out;

    std::string path(const std::string& name) {
        outputs.push_back(name);
        const fs::path p = fs::path(dir) / name;
        fs::create_directories(p.parent_path());
        return p.string();
    }
    void write_json(const std::string& name, const json& j) {
        std::ofstream f(path(name));
        f << j.dump(2) << '\n';
    }
};

json number(double v) {
    if (std::isfinite(v)) return v;
    return fmt(v);
}

json optional_number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

Grid make_grid(const Config& c) {
    const long n = c.integer("grid.n");
    if (n < 16) throw UsageError("grid.n must be at least 16");
    return Grid(c.number("grid.y_max"), static_cast<std::size_t>(n));
}

std::optional<spectral::SpectralBasis> maybe_basis(const Grid& grid, const Config& c) {
    if (grid.y_max() < 20.0) return std::nullopt;
    return spectral::ground_state(grid, c.number("spectrum.tolerance"));
}

evolution::EvolutionConfig evolution_config(const Config& c) {
    evolution::EvolutionConfig e;
    e.cfl = c.number("evo.cfl");
    e.t_max = c.number("evo.t_max");
    e.hyperbolicity_floor = c.number("evo.hyperbolicity_floor");
    e.regularity_margin = c.number("evo.regularity_margin");
    e.snapshot_stride = static_cast<std::size_t>(std::max(1L, c.integer("evo.snapshot_stride")));
    e.halt_on_contamination = c.flag("evo.halt_on_contamination");
    e.boundary_buffer = c.number("evo.boundary_buffer");
    e.suppress_unstable_mode = c.flag("evo.suppress_unstable_mode");
    const std::string& b = c.text("evo.boundary");
    if (b == "outgoing") e.boundary = evolution::Boundary::Outgoing;
    else if (b == "frozen") e.boundary = evolution::Boundary::Frozen;
    else throw UsageError("evo.boundary must be outgoing or frozen");
    return e;
}

analysis::FateConfig fate_config(const Config& c) {
    analysis::FateConfig f;
    f.h_cap_factor = c.number("fate.h_cap_factor");
    f.h_cap_offset = c.number("fate.h_cap_offset");
    f.rate_tolerance = c.number("fate.rate_tolerance");
    return f;
}

DataSpec data_spec(const Config& c) {
    DataSpec d;
    d.position.preset = c.text("data.preset");
    d.position.amplitude = c.number("data.amplitude");
    d.position.width = c.number("data.width");
    d.position.project = c.flag("data.project");
    d.position.file = c.text("data.file");
    d.velocity.preset = c.text("data.v_preset");
    d.velocity.amplitude = c.number("data.v_amplitude");
    d.velocity.width = c.number("data.v_width");
    d.velocity.project = c.flag("data.v_project");
    d.velocity.file = c.text("data.v_file");
    d.a = c.number("data.a");
    return d;
}

json termination_json(const evolution::TerminationRecord& r) {
    json j;
    j["guard"] = evolution::to_string(r.guard);
    j["t"] = number(r.t);
    j["steps"] = r.steps;
    j["message"] = r.message;
    j["event_y"] = number(r.event_y);
    j["event_value"] = number(r.event_value);
    j["contaminated"] = r.contaminated;
    j["contamination_time"] = r.contaminated ? number(r.contamination_time) : json(nullptr);
    j["initial_support"] = number(r.initial_support);
    return j;
}

json fate_json(const analysis::FateReport& f) {
    json j;
    j["fate"] = analysis::to_string(f.fate);
    j["event_time"] = optional_number(f.event_time);
    j["decay_exponent"] = optional_number(f.decay_exponent);
    j["decay_stderr"] = optional_number(f.decay_stderr);
    j["h_growth_rate"] = optional_number(f.h_growth_rate);
    j["termination"] = termination_json(f.guard);
    return j;
}

// -- spectrum ---------------------------------------------------------------

int cmd_spectrum(Run& run) {
    const Grid grid = make_grid(run.cfg);
    const auto t0 = std::chrono::steady_clock::now();
    const auto basis = spectral::ground_state(grid, run.cfg.number("spectrum.tolerance"));
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto& rep = basis.report;

    CsvWriter csv(run.path("spectrum.csv"), {"y", "V", "g_d", "eta_scaling", "eta_translation"});
    for (std::size_t i = 0; i < grid.size(); ++i)
        csv.row({grid.node(i), spectral::potential(grid.node(i)), basis.g_d[i], basis.zero_mode_scaling[i],
                 basis.zero_mode_translation[i]});

    json j;
    j["k_d_sq"] = basis.k_d_sq;
    j["k_d"] = basis.k_d();
    j["eigenvalue"] = -basis.k_d_sq;
    j["n"] = grid.size();
    j["y_max"] = grid.y_max();
    j["methods"] = {{"tridiagonal_bisection", rep.matrix_value},
                    {"numerov_shooting", rep.shooting_value},
                    {"fourth_order_rayleigh", rep.fd4_value}};
    j["method_gap"] = std::abs(rep.matrix_value - rep.shooting_value);
    j["residual_norms"] = {{"fourth_order", rep.fd4_residual}};
    j["negative_eigenvalues"] = rep.negative_count;
    j["runtime_seconds"] = seconds;
    run.write_json("spectrum.json", j);
    *run.out << "k_d_sq = " << fmt(basis.k_d_sq) << " (eigenvalue " << fmt(-basis.k_d_sq) << ")\n";
    return exit_ok;
}

// -- modes ------------------------------------------------------------------

struct Annihilation {
    double scaling;
    double translation;
};

Annihilation annihilation(double window, double spacing, std::vector<double>* L_scal = nullptr,
                          std::vector<double>* L_trans = nullptr, Grid* grid_out = nullptr) {
    const double y_max = window + 10.0;
    const Grid grid(y_max, static_cast<std::size_t>(std::lround(y_max / spacing)) + 1);
    const auto modes = spectral::zero_modes(grid);
    const auto ls = spectral::apply_L(modes.scaling, grid, Parity::Even);
    const auto lt = spectral::apply_L(modes.translation, grid, Parity::Odd);
    double ns = 0.0, nt = 0.0, ds = 0.0, dt = 0.0;
    for (std::size_t i = 0; i < grid.size() && grid.node(i) <= window; ++i) {
        ns = std::max(ns, std::abs(ls[i]));
        nt = std::max(nt, std::abs(lt[i]));
        ds = std::max(ds, std::abs(modes.scaling[i]));
        dt = std::max(dt, std::abs(modes.translation[i]));
    }
    if (L_scal) *L_scal = ls;
    if (L_trans) *L_trans = lt;
    if (grid_out) *grid_out = grid;
    return {ns / ds, nt / dt};
}

int cmd_modes(Run& run) {
    const double window = run.cfg.number("modes.y_window");
    const double spacing = run.cfg.number("modes.spacing");
    std::vector<double> ls, lt;
    Grid grid(window + 10.0, 16);
    const Annihilation a = annihilation(window, spacing, &ls, &lt, &grid);
    const auto modes = spectral::zero_modes(grid);

    CsvWriter csv(run.path("modes.csv"), {"y", "eta_scaling", "eta_translation", "L_eta_scaling", "L_eta_translation"});
    for (std::size_t i = 0; i < grid.size() && grid.node(i) <= window; ++i)
        csv.row({grid.node(i), modes.scaling[i], modes.translation[i], ls[i], lt[i]});

    json conv = json::array();
    double prev_s = 0.0, prev_t = 0.0;
    for (double h : {0.08, 0.04, 0.02, 0.01}) {
        const Annihilation c = annihilation(window, h);
        json row = {{"h", h}, {"scaling", c.scaling}, {"translation", c.translation}};
        if (prev_s > 0.0) {
            row["scaling_order"] = std::log2(prev_s / c.scaling);
            row["translation_order"] = std::log2(prev_t / c.translation);
        }
        conv.push_back(row);
        prev_s = c.scaling;
        prev_t = c.translation;
    }
    json j;
    j["y_window"] = window;
    j["h"] = grid.spacing();
    j["annihilation"] = {{"scaling", a.scaling}, {"translation", a.translation}};
    j["convergence"] = conv;
    run.write_json("modes.json", j);
    *run.out << "relative |L eta|: scaling " << fmt(a.scaling) << ", translation " << fmt(a.translation) << "\n";
    return exit_ok;
}

// -- evolve / linear ------------------------------------------------------------

void write_series(Run& run, const analysis::NormSeries& norms, const analysis::ModeTrajectory& mode) {
    const auto& ids = analysis::norm_ids();
    std::vector<std::string> header = {"t"};
    header.insert(header.end(), ids.begin(), ids.end());
    CsvWriter csv(run.path("norms.csv"), header);
    for (std::size_t k = 0; k < norms.times.size(); ++k) {
        std::vector<double> row = {norms.times[k]};
        row.insert(row.end(), norms.rows[k].begin(), norms.rows[k].end());
        csv.row(row);
    }
    for (std::size_t c = 0; c < ids.size(); ++c) {
        std::ofstream dat(run.path("series/" + ids[c] + ".dat"));
        for (std::size_t k = 0; k < norms.times.size(); ++k)
            dat << fmt(norms.times[k]) << ' ' << fmt(norms.rows[k][c]) << '\n';
    }
    CsvWriter mcsv(run.path("mode.csv"), {"t", "h", "h_dot", "h_duhamel", "forcing"});
    for (std::size_t k = 0; k < mode.times.size(); ++k)
        mcsv.row({mode.times[k], mode.h[k], mode.h_dot[k],
                  k < mode.h_duhamel.size() ? mode.h_duhamel[k] : 0.0, mode.forcing[k]});
    std::ofstream hdat(run.path("series/h.dat"));
    for (std::size_t k = 0; k < mode.times.size(); ++k) hdat << fmt(mode.times[k]) << ' ' << fmt(mode.h[k]) << '\n';
}

int cmd_evolve(Run& run, bool linear) {
    const Grid grid = make_grid(run.cfg);
    const auto basis = maybe_basis(grid, run.cfg);
    const spectral::SpectralBasis* bp = basis ? &*basis : nullptr;
    evolution::EvolutionConfig ecfg = evolution_config(run.cfg);
    ecfg.linear_only = linear;
    if (!linear) ecfg.suppress_unstable_mode = false;
    if (ecfg.suppress_unstable_mode && bp == nullptr) ecfg.suppress_unstable_mode = false;

    const DataSpec spec = data_spec(run.cfg);
    FieldState state = initial_data(spec, grid, bp, ecfg.regularity_margin);
    evolution::Evolver ev(grid, ecfg, bp);

    analysis::NormConfig ncfg;
    ncfg.sigma = run.cfg.number("analysis.sigma");
    ncfg.max_order = static_cast<int>(run.cfg.integer("analysis.max_order"));
    ncfg.gamma = run.cfg.flag("analysis.gamma");
    analysis::NormTracker norms(ev, ncfg);
    std::vector<evolution::Observer> observers = {norms.observer()};
    std::optional<analysis::ModeTracker> mode;
    if (bp) {
        mode.emplace(ev, *bp, true);
        observers.push_back(mode->observer());
    }

    std::optional<CsvWriter> snaps;
    const long every = std::max(1L, run.cfg.integer("output.snapshot_every"));
    if (run.cfg.flag("output.snapshots")) {
        snaps.emplace(run.path("snapshots.csv"), std::vector<std::string>{"t", "y", "phi", "pi"});
        auto count = std::make_shared<long>(0);
        observers.push_back([&snaps, &grid, every, count](const FieldState& s, const evolution::StepInfo& info) {
            if ((*count)++ % every != 0 && !info.final) return true;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double r = std::sqrt(japanese(grid.node(i)));
                snaps->row({s.t, grid.node(i), s.phi[i] / r, s.pi[i] / r});
            }
            return true;
        });
    }

    const double p1 = bp ? quad::inner(state.phi, bp->g_d, bp->quad_weights) - spec.a : 0.0;
    const double p2 = bp ? quad::inner(state.pi, bp->g_d, bp->quad_weights) : 0.0;
    const evolution::TerminationRecord rec = ev.evolve(state, observers);

    analysis::ModeTrajectory traj;
    json j;
    j["subcommand"] = run.subcommand;
    j["termination"] = termination_json(rec);
    if (mode) {
        traj = mode->trajectory();
        traj.h_duhamel = analysis::duhamel_h(traj, spec.a, p1, p2, bp->k_d());
        const auto fate = analysis::classify_fate(rec, traj, bp->k_d(), ecfg.t_max, fate_config(run.cfg));
        j["fate"] = fate_json(fate);
        j["k_d"] = bp->k_d();
        j["h0"] = traj.h.empty() ? 0.0 : traj.h.front();
    } else {
        j["fate"] = nullptr;
    }
    write_series(run, norms.series(), traj);
    run.write_json("termination.json", j);
    *run.out << "terminated: " << evolution::to_string(rec.guard) << " at t = " << fmt(rec.t) << "\n";
    return exit_ok;
}

// -- shoot --------------------------------------------------------------------

int cmd_shoot(Run& run) {
    const Grid grid = make_grid(run.cfg);
    const auto basis = spectral::ground_state(grid, run.cfg.number("spectrum.tolerance"));
    DataSpec spec = data_spec(run.cfg);
    spec.a = 0.0;
    shooting::ShootingConfig sc;
    sc.evo = evolution_config(run.cfg);
    sc.fate = fate_config(run.cfg);
    sc.a_lo = run.cfg.number("shoot.a_lo");
    sc.a_hi = run.cfg.number("shoot.a_hi");
    sc.tol_a = run.cfg.number("shoot.tol_a");
    sc.max_bisections = static_cast<int>(run.cfg.integer("shoot.max_bisections"));
    sc.max_extensions = static_cast<int>(run.cfg.integer("shoot.max_extensions"));
    const std::string& rule = run.cfg.text("shoot.rule");
    if (rule == "full") sc.rule = shooting::FateRule::Full;
    else if (rule == "linear_sign") sc.rule = shooting::FateRule::LinearSign;
    else throw UsageError("shoot.rule must be full or linear_sign");
    const std::string& und = run.cfg.text("shoot.undecided");
    if (und == "extend") sc.undecided = shooting::UndecidedPolicy::ExtendTmax;
    else if (und == "halt") sc.undecided = shooting::UndecidedPolicy::Halt;
    else throw UsageError("shoot.undecided must be extend or halt");

    const FieldState base = initial_data(spec, grid, &basis, sc.evo.regularity_margin);
    json j;
    j["k_d"] = basis.k_d();
    j["p1"] = quad::inner(base.phi, basis.g_d, basis.quad_weights);
    j["p2"] = quad::inner(base.pi, basis.g_d, basis.quad_weights);
    int code = exit_ok;
    try {
        const auto res = shooting::shoot(base, basis, sc);
        j["a_star"] = res.a_star;
        j["bracket_final"] = {res.bracket_lo, res.bracket_hi};
        j["initial_width"] = res.initial_width;
        j["iterations"] = res.iterations;
        j["converged"] = res.converged;
        j["endpoint_fates"] = {fate_json(res.fate_lo), fate_json(res.fate_hi)};
        if (res.threshold) {
            json th = fate_json(res.threshold->report);
            th["window"] = {res.threshold->window_t0, res.threshold->window_t1};
            j["threshold_run"] = th;
            CsvWriter tcsv(run.path("threshold_mode.csv"), {"t", "h", "h_dot", "sup_phys"});
            const auto& m = res.threshold->mode;
            for (std::size_t k = 0; k < m.times.size(); ++k) tcsv.row({m.times[k], m.h[k], m.h_dot[k], m.sup_phys[k]});
        }
        j["warnings"] = res.warnings;
        CsvWriter log(run.path("shoot_log.csv"), {"iteration", "a", "fate", "event_time"});
        for (const auto& r : res.log)
            log.row_text({std::to_string(r.iteration), fmt(r.a), analysis::to_string(r.fate),
                          r.event_time ? fmt(*r.event_time) : ""});

        const auto deltas = run.cfg.numbers("shoot.lipschitz_deltas");
        if (!deltas.empty()) {
            FieldState dir = base;
            const double w = spec.position.width;
            dir.phi = grid.sample([w](double y) { return std::exp(-y * y / (w * w)); });
            std::fill(dir.pi.begin(), dir.pi.end(), 0.0);
            const auto probes = shooting::lipschitz_probe(base, dir, res.a_star, deltas, basis, sc,
                                                          static_cast<unsigned>(run.cfg.integer("shoot.threads")));
            json pj = json::array();
            for (const auto& p : probes)
                pj.push_back({{"delta", p.delta}, {"a_star", p.a_star}, {"delta_a_star", p.delta_a_star}, {"ratio", p.ratio}});
            j["lipschitz_probes"] = pj;
        }
        *run.out << "a* = " << fmt(res.a_star) << " after " << res.iterations << " bisections\n";
    } catch (const shooting::BracketInvalid& e) {
        j["error"] = e.what();
        j["endpoint_fates"] = {fate_json(e.lo()), fate_json(e.hi())};
        code = exit_inconclusive;
    } catch (const shooting::Inconclusive& e) {
        j["error"] = e.what();
        code = exit_inconclusive;
    }
    run.write_json("shoot.json", j);
    return code;
}

// -- cylinder -----------------------------------------------------------------

int cmd_cylinder(Run& run) {
    reference::CylinderState s0{0.0, run.cfg.number("cylinder.r0"), run.cfg.number("cylinder.v0")};
    const auto res = reference::cylinder_evolve(s0, run.cfg.number("cylinder.dt"), run.cfg.number("cylinder.t_max"),
                                                run.cfg.number("cylinder.r_min"),
                                                static_cast<std::size_t>(std::max(1L, run.cfg.integer("cylinder.stride"))));
    CsvWriter csv(run.path("cylinder.csv"), {"t", "R", "R_dot"});
    for (const auto& s : res.trajectory) csv.row({s.t, s.R, s.R_dot});
    json j;
    j["collapsed"] = res.collapsed;
    j["collapse_time"] = res.collapsed ? json(res.collapse_time) : json(nullptr);
    j["R0"] = s0.R;
    j["R_dot0"] = s0.R_dot;
    run.write_json("cylinder.json", j);
    if (res.collapsed) *run.out << "collapse_time = " << fmt(res.collapse_time) << "\n";
    else *run.out << "no collapse before t = " << fmt(res.trajectory.back().t) << "\n";
    return exit_ok;
}

// -- verify ---------------------------------------------------------------------

int cmd_verify(Run& run) {
    const auto checks = verification_suite(static_cast<unsigned>(run.cfg.integer("verify.seed")));
    json arr = json::array();
    bool ok = true;
    for (const auto& c : checks) {
        *run.out << (c.pass ? "PASS " : "FAIL ") << c.name << " = " << fmt(c.value) << " (threshold " << fmt(c.threshold) << ")\n";
        arr.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}});
        ok = ok && c.pass;
    }
    run.write_json("verify.json", {{"pass", ok}, {"checks", arr}});
    return ok ? exit_ok : exit_verify;
}

int dispatch(Run& run) {
    const std::string& s = run.subcommand;
    if (s == "spectrum") return cmd_spectrum(run);
    if (s == "modes") return cmd_modes(run);
    if (s == "evolve") return cmd_evolve(run, false);
    if (s == "linear") return cmd_evolve(run, true);
    if (s == "shoot") return cmd_shoot(run);
    if (s == "cylinder") return cmd_cylinder(run);
    if (s == "verify") return cmd_verify(run);
    throw UsageError("unknown subcommand '" + s + "'");
}

int execute(const std::string& subcommand, const Config& cfg, std::ostream& out) {
    Run run{subcommand, cfg, output_dir(), {}, &out};
    RunManifest m;
    m.subcommand = subcommand;
    m.config = cfg.values();
    m.code_version = code_version();
    m.started = timestamp_now();
    const int code = dispatch(run);
    m.finished = timestamp_now();
    m.outputs = run.outputs;
    std::ofstream(fs::path(run.dir) / "manifest.json") << manifest_json(m);
    return code;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical laboratory for timelike minimal surfaces near the catenoid"};
    app.set_version_flag("--version", code_version());
    std::string manifest;
    app.add_option("--manifest", manifest, "Replay the run recorded in a manifest.json");

    struct Common {
        std::string config_file;
        std::vector<std::string> sets;
        std::map<std::string, std::string> flags;
    };
    std::map<std::string, Common> common;
    const std::vector<std::pair<std::string, std::string>> subcommands = {
        {"spectrum", "Ground state, eigenvalue and zero modes of the linearized operator"},
        {"modes", "Zero-mode table, annihilation and grid convergence"},
        {"evolve", "Nonlinear evolution with diagnostics"},
        {"linear", "Linearized evolution with diagnostics"},
        {"shoot", "Bisection for the threshold amplitude of the unstable mode"},
        {"cylinder", "Collapsing cylinder reference solution"},
        {"verify", "Identity and oracle checks"}};
    const std::vector<std::pair<std::string, std::string>> shortcuts = {
        {"--ymax", "grid.y_max"}, {"--n", "grid.n"}, {"--cfl", "evo.cfl"}, {"--tmax", "evo.t_max"},
        {"--boundary", "evo.boundary"}, {"--preset", "data.preset"}, {"--amplitude", "data.amplitude"},
        {"--a", "data.a"}};
    for (const auto& [name, help] : subcommands) {
        CLI::App* sub = app.add_subcommand(name, help);
        Common& c = common[name];
        sub->add_option("--config", c.config_file, "key=value configuration file");
        sub->add_option("--set", c.sets, "Override one key (key=value); repeatable");
        for (const auto& [flag, key] : shortcuts) sub->add_option(flag, c.flags[key], "Sets " + key);
    }
    app.require_subcommand(0, 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (!manifest.empty()) {
            if (!app.get_subcommands().empty()) throw UsageError("--manifest replays a run; give no subcommand");
            const RunManifest m = read_manifest(manifest);
            Config cfg = Config::defaults(m.subcommand);
            for (const auto& [k, v] : m.config) cfg.set(k, v);
            return execute(m.subcommand, cfg, out);
        }
        if (app.get_subcommands().empty()) {
            err << app.help();
            return exit_usage;
        }
        const std::string name = app.get_subcommands().front()->get_name();
        const Common& c = common[name];
        Config cfg = Config::defaults(name);
        if (!c.config_file.empty()) cfg.merge_file(c.config_file);
        for (const auto& s : c.sets) cfg.merge_text(s, "--set");
        for (const auto& [key, value] : c.flags)
            if (!value.empty()) cfg.set(key, value);
        return execute(name, cfg, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << "\n";
        return exit_usage;
    } catch (const RegularityViolation& e) {
        err << "invalid input: " << e.what() << "\n";
        return exit_usage;
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return exit_inconclusive;
    }
}

}  // namespace catlab::cli
