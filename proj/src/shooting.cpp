#include "catlab/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include "catlab/quadrature.hpp"
#include "catlab/stencil.hpp"

namespace catlab::shooting {

namespace {

using analysis::Fate;

FieldState with_amplitude(const FieldState& base, double a, const spectral::SpectralBasis& basis) {
    FieldState s = base;
    for (std::size_t i = 0; i < s.phi.size(); ++i) s.phi[i] += a * basis.g_d[i];
    return s;
}

RunOutcome run_linear_sign(const FieldState& base, double a, const spectral::SpectralBasis& basis,
                           const ShootingConfig& cfg) {
    evolution::EvolutionConfig evo = cfg.evo;
    evo.linear_only = true;
    evolution::Evolver ev(basis.grid, evo, &basis);
    FieldState s = with_amplitude(base, a, basis);
    RunOutcome out;
    out.report.guard = ev.evolve(s);
    const double h = quad::inner(s.phi, basis.g_d, basis.quad_weights);
    out.report.fate = h > 0.0 ? Fate::Widened : Fate::Collapsed;
    out.report.event_time = s.t;
    out.t_end = s.t;
    return out;
}

}  // namespace

RunOutcome run_fate(const FieldState& base, double a, const spectral::SpectralBasis& basis,
                    const ShootingConfig& cfg) {
    if (cfg.rule == FateRule::LinearSign) return run_linear_sign(base, a, basis, cfg);

    evolution::Evolver ev(basis.grid, cfg.evo, &basis);
    FieldState s = with_amplitude(base, a, basis);
    analysis::ModeTracker tracker(ev, basis, false);
    const double h0 = quad::inner(s.phi, basis.g_d, basis.quad_weights);
    const std::vector<evolution::Observer> observers = {
        tracker.observer(), analysis::widening_stop(tracker, analysis::h_cap(h0, cfg.fate))};

    RunOutcome out;
    evolution::TerminationRecord rec = ev.evolve(s, observers);
    out.report = analysis::classify_fate(rec, tracker.trajectory(), basis.k_d(), ev.config().t_max, cfg.fate);
    while (out.report.fate == Fate::Undecided && cfg.undecided == UndecidedPolicy::ExtendTmax &&
           out.extensions < cfg.max_extensions && rec.guard == evolution::Guard::Completed) {
        ++out.extensions;
        ev.config().t_max *= cfg.extension_factor;
        evolution::TerminationRecord more = ev.evolve(s, observers);
        if (rec.contaminated) {
            more.contaminated = true;
            more.contamination_time = rec.contamination_time;
        }
        more.steps += rec.steps;
        more.initial_support = rec.initial_support;
        rec = more;
        out.report = analysis::classify_fate(rec, tracker.trajectory(), basis.k_d(), ev.config().t_max, cfg.fate);
    }
    out.t_end = s.t;
    return out;
}

ThresholdRun threshold_run(const FieldState& base, double a, const spectral::SpectralBasis& basis,
                           const ShootingConfig& cfg) {
    evolution::Evolver ev(basis.grid, cfg.evo, &basis);
    FieldState s = with_amplitude(base, a, basis);
    analysis::ModeTracker tracker(ev, basis, false);
    const double h0 = quad::inner(s.phi, basis.g_d, basis.quad_weights);
    const evolution::TerminationRecord rec =
        ev.evolve(s, {tracker.observer(), analysis::widening_stop(tracker, analysis::h_cap(h0, cfg.fate))});

    ThresholdRun out;
    out.report = analysis::classify_fate(rec, tracker.trajectory(), basis.k_d(), cfg.evo.t_max, cfg.fate);
    out.mode = tracker.trajectory();
    if (analysis::clean_window(rec, out.mode, basis.g_d.front(), out.window_t0, out.window_t1,
                               cfg.unstable_share)) {
        try {
            const auto fit = analysis::fit_decay(out.mode.times, out.mode.sup_phys, out.window_t0, out.window_t1);
            out.report.decay_exponent = fit.exponent;
            out.report.decay_stderr = fit.stderr_;
        } catch (const FitUndefined&) {
        }
    }
    return out;
}

ShootingResult shoot(const FieldState& base, const spectral::SpectralBasis& basis, const ShootingConfig& cfg) {
    if (!(cfg.a_lo < cfg.a_hi)) throw DomainError("shoot: a_lo must be below a_hi");
    ShootingResult res;
    res.initial_width = cfg.a_hi - cfg.a_lo;
    const double tol = cfg.tol_a > 0.0 ? cfg.tol_a : 1e-12 * res.initial_width;

    auto log_run = [&](int it, double a, const RunOutcome& r) {
        IterationRecord rec;
        rec.iteration = it;
        rec.a = a;
        rec.fate = r.report.fate;
        rec.event_time = r.report.event_time;
        rec.t_end = r.t_end;
        rec.extensions = r.extensions;
        res.log.push_back(rec);
    };

    const RunOutcome lo = run_fate(base, cfg.a_lo, basis, cfg);
    log_run(0, cfg.a_lo, lo);
    const RunOutcome hi = run_fate(base, cfg.a_hi, basis, cfg);
    log_run(0, cfg.a_hi, hi);
    res.fate_lo = lo.report;
    res.fate_hi = hi.report;

    auto definite = [](Fate f) { return f == Fate::Collapsed || f == Fate::Widened; };
    if (!definite(lo.report.fate) && !definite(hi.report.fate))
        throw Inconclusive("shoot: neither bracket endpoint reached a definite fate");
    if (lo.report.fate == hi.report.fate || !definite(lo.report.fate) || !definite(hi.report.fate)) {
        std::ostringstream msg;
        msg << "shoot: endpoint fates " << analysis::to_string(lo.report.fate) << " / "
            << analysis::to_string(hi.report.fate) << " do not bracket a threshold";
        throw BracketInvalid(lo.report, hi.report, msg.str());
    }
    const Fate lo_fate = lo.report.fate;
    const Fate hi_fate = hi.report.fate;
    if (hi_fate != Fate::Widened) res.warnings.push_back("bracket orientation reversed: a_hi collapses");

    double a_lo = cfg.a_lo, a_hi = cfg.a_hi;
    std::vector<std::pair<double, Fate>> tested = {{a_lo, lo_fate}, {a_hi, hi_fate}};
    int it = 0;
    bool stalled = false;
    while (a_hi - a_lo > tol && it < cfg.max_bisections) {
        ++it;
        const double mid = 0.5 * (a_lo + a_hi);
        const RunOutcome r = run_fate(base, mid, basis, cfg);
        log_run(it, mid, r);
        if (r.extensions > 0) {
            std::ostringstream msg;
            msg << "iteration " << it << ": t_max extended " << r.extensions << " time(s)";
            res.warnings.push_back(msg.str());
        }
        for (const auto& [a, f] : tested) {
            const bool bad = (a < mid && f == hi_fate && r.report.fate == lo_fate) ||
                             (a > mid && f == lo_fate && r.report.fate == hi_fate);
            if (bad) {
                std::ostringstream msg;
                msg << "fate ordering violated between a=" << a << " and a=" << mid;
                res.warnings.push_back(msg.str());
            }
        }
        tested.emplace_back(mid, r.report.fate);
        if (r.report.fate == lo_fate) {
            a_lo = mid;
        } else if (r.report.fate == hi_fate) {
            a_hi = mid;
        } else {
            std::ostringstream msg;
            msg << "iteration " << it << ": midpoint a=" << mid << " stayed "
                << analysis::to_string(r.report.fate) << "; bisection stopped";
            res.warnings.push_back(msg.str());
            stalled = true;
            res.a_star = mid;
            break;
        }
    }
    res.iterations = it;
    res.bracket_lo = a_lo;
    res.bracket_hi = a_hi;
    res.converged = !stalled && a_hi - a_lo <= tol;
    if (!stalled) res.a_star = 0.5 * (a_lo + a_hi);
    if (cfg.threshold_run && cfg.rule == FateRule::Full)
        res.threshold = threshold_run(base, res.a_star, basis, cfg);
    return res;
}

double data_norm(const FieldState& s, const Grid& grid) {
    const auto w = quad::line_weights(grid);
    const auto dphi = stencil::d1(s.phi, grid, s.parity);
    const Parity dpar = s.parity == Parity::Even ? Parity::Odd : Parity::Even;
    return std::sqrt(quad::inner(s.phi, s.phi, w, s.parity, s.parity) +
                     quad::inner(dphi, dphi, w, dpar, dpar) + quad::inner(s.pi, s.pi, w, s.parity, s.parity));
}

std::vector<LipschitzProbe> lipschitz_probe(const FieldState& base, const FieldState& direction,
                                            double base_a_star, const std::vector<double>& deltas,
                                            const spectral::SpectralBasis& basis,
                                            const ShootingConfig& cfg, unsigned threads) {
    const double nrm = data_norm(direction, basis.grid);
    if (!(nrm > 0.0)) throw DomainError("lipschitz_probe: perturbation direction is zero");
    ShootingConfig probe_cfg = cfg;
    probe_cfg.threshold_run = false;

    std::vector<LipschitzProbe> out(deltas.size());
    std::vector<std::string> errors(deltas.size());
    auto work = [&](std::size_t k) {
        LipschitzProbe p;
        p.delta = deltas[k];
        if (deltas[k] == 0.0) {
            p.a_star = base_a_star;
            out[k] = p;
            return;
        }
        try {
            FieldState s = base;
            for (std::size_t i = 0; i < s.phi.size(); ++i) {
                s.phi[i] += deltas[k] * direction.phi[i] / nrm;
                s.pi[i] += deltas[k] * direction.pi[i] / nrm;
            }
            const ShootingResult r = shoot(s, basis, probe_cfg);
            p.a_star = r.a_star;
            p.delta_a_star = r.a_star - base_a_star;
            p.ratio = p.delta_a_star / deltas[k];
            out[k] = p;
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << "lipschitz_probe at delta=" << deltas[k] << ": " << e.what();
            errors[k] = msg.str();
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(deltas.size()));
    if (threads <= 1) {
        for (std::size_t k = 0; k < deltas.size(); ++k) work(k);
    } else {
        std::mutex m;
        std::size_t next = 0;
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t k;
                    {
                        std::lock_guard<std::mutex> lock(m);
                        if (next >= deltas.size()) return;
                        k = next++;
                    }
                    work(k);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
        if (!e.empty()) throw Error(e);
    return out;
}

}  // namespace catlab::shooting
