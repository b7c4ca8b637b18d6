#include "catlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "catlab/error.hpp"
#include "catlab/quadrature.hpp"
#include "catlab/stencil.hpp"

namespace catlab::analysis {

GammaFields gamma_fields(const FieldState& s, const Grid& grid) {
    const auto dphi = stencil::d1(s.phi, grid, s.parity);
    GammaFields g;
    g.gamma1.resize(s.phi.size());
    g.gamma2.resize(s.phi.size());
    for (std::size_t i = 0; i < s.phi.size(); ++i) {
        const double y = grid.node(i);
        g.gamma1[i] = s.t * dphi[i] + y * s.pi[i];
        g.gamma2[i] = s.t * s.pi[i] + y * dphi[i];
    }
    return g;
}

const std::vector<std::string>& norm_ids() {
    static const std::vector<std::string> ids = {
        "energy_0", "energy_1", "energy_2", "sup_phys", "sup_weighted", "local_energy_rate",
        "local_energy", "gamma2_0", "gamma2_1", "gamma2_2"};
    return ids;
}

double sup_physical(const FieldState& s, const Grid& grid) {
    double m = 0.0;
    const bool weighted = s.representation == Representation::Weighted;
    for (std::size_t i = 0; i < s.phi.size(); ++i) {
        const double v = weighted ? s.phi[i] / std::sqrt(japanese(grid.node(i))) : s.phi[i];
        m = std::max(m, std::abs(v));
    }
    return m;
}

double sup_weighted(const FieldState& s, const Grid& grid, double sigma) {
    double m = 0.0;
    const bool weighted = s.representation == Representation::Weighted;
    for (std::size_t i = 0; i < s.phi.size(); ++i) {
        const double jb = japanese(grid.node(i));
        const double v = weighted ? s.phi[i] / std::sqrt(jb) : s.phi[i];
        m = std::max(m, std::abs(v) * std::pow(jb, -sigma));
    }
    return m;
}

namespace {

double sq_norm(std::span<const double> f, std::span<const double> w) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i] * f[i];
    return s;
}

}  // namespace

std::vector<double> norms(const FieldState& s, const evolution::Evolver& ev, const NormConfig& cfg) {
    if (cfg.max_order < 0 || cfg.max_order > 2) throw DomainError("norm derivative order must be 0, 1 or 2");
    if (!(cfg.sigma >= 0.5 && cfg.sigma <= 1.0)) throw DomainError("sigma must lie in [1/2, 1]");
    if (s.representation != Representation::Weighted) throw DomainError("norms expect a weighted state");
    const Grid& grid = ev.grid();
    const std::size_t n = grid.size();
    const auto w = quad::line_weights(grid);
    const Parity even = Parity::Even;

    std::vector<double> row(Col::count, 0.0);

    const auto phi_y = stencil::d1(s.phi, grid, even);
    const auto phi_yy = stencil::d2(s.phi, grid, even);
    const auto phi_yyy = stencil::d1(phi_yy, grid, even);
    const auto pi_y = stencil::d1(s.pi, grid, even);
    const auto pi_yy = stencil::d2(s.pi, grid, even);
    const std::vector<double>* dphi[3] = {&phi_y, &phi_yy, &phi_yyy};
    const std::vector<double>* dpi[3] = {&s.pi, &pi_y, &pi_yy};
    double acc = 0.0;
    for (int j = 0; j <= 2; ++j) {
        if (j <= cfg.max_order) acc += sq_norm(*dpi[j], w) + sq_norm(*dphi[j], w);
        row[Col::energy_0 + static_cast<std::size_t>(j)] = j <= cfg.max_order ? std::sqrt(acc) : 0.0;
    }

    row[Col::sup_phys] = sup_physical(s, grid);
    row[Col::sup_weighted] = sup_weighted(s, grid, cfg.sigma);

    double rate = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double jb = japanese(grid.node(i));
        const double weight = jb * (1.0 + std::abs(std::log(jb)));
        rate += w[i] * (s.pi[i] * s.pi[i] + phi_y[i] * phi_y[i]) / (weight * weight);
    }
    row[Col::local_energy_rate] = rate;

    if (cfg.gamma) {
        // d_t Gamma2^g = (Gamma2 + 1)^g d_t; pi~_t from the scheme, pi~_tt by a
        // central difference of the right-hand side along the flow.
        std::vector<double> tmp(n), pi_t(n), pi_tt(n);
        ev.rhs(s, tmp, pi_t);
        const double tau = 1e-3;
        FieldState plus = s, minus = s;
        for (std::size_t i = 0; i < n; ++i) {
            plus.phi[i] += tau * s.pi[i];
            plus.pi[i] += tau * pi_t[i];
            minus.phi[i] -= tau * s.pi[i];
            minus.pi[i] -= tau * pi_t[i];
        }
        std::vector<double> a_plus(n), a_minus(n);
        ev.rhs(plus, tmp, a_plus);
        ev.rhs(minus, tmp, a_minus);
        for (std::size_t i = 0; i < n; ++i) pi_tt[i] = (a_plus[i] - a_minus[i]) / (2.0 * tau);

        const double t = s.t;
        row[Col::gamma2_0] = std::sqrt(sq_norm(s.pi, w) + sq_norm(phi_y, w));

        std::vector<double> u1(n), v1(n);
        const auto pi_t_y = stencil::d1(pi_t, grid, even);
        for (std::size_t i = 0; i < n; ++i) {
            const double y = grid.node(i);
            u1[i] = t * s.pi[i] + y * phi_y[i];
            v1[i] = t * pi_t[i] + y * pi_y[i] + s.pi[i];
        }
        const auto u1_y = stencil::d1(u1, grid, even);
        if (cfg.max_order >= 1) row[Col::gamma2_1] = std::sqrt(sq_norm(v1, w) + sq_norm(u1_y, w));

        if (cfg.max_order >= 2) {
            const auto v1_y = stencil::d1(v1, grid, even);
            std::vector<double> u2(n), v2(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double y = grid.node(i);
                const double v1_t = 2.0 * pi_t[i] + t * pi_tt[i] + y * pi_t_y[i];
                u2[i] = t * v1[i] + y * u1_y[i];
                v2[i] = t * v1_t + y * v1_y[i] + v1[i];
            }
            const auto u2_y = stencil::d1(u2, grid, even);
            row[Col::gamma2_2] = std::sqrt(sq_norm(v2, w) + sq_norm(u2_y, w));
        }
    }
    return row;
}

std::vector<double> NormSeries::column(std::size_t c) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[c]);
    return out;
}

void NormSeries::append(double t, std::vector<double> row) {
    if (!times.empty() && !(t > times.back())) return;
    times.push_back(t);
    rows.push_back(std::move(row));
}

void NormTracker::record(const FieldState& s) {
    if (!series_.times.empty() && !(s.t > series_.times.back())) return;
    std::vector<double> row;
    try {
        row = norms(s, *ev_, cfg_);
    } catch (const Error&) {
        NormConfig plain = cfg_;
        plain.gamma = false;
        row = norms(s, *ev_, plain);
        for (std::size_t c : {Col::gamma2_0, Col::gamma2_1, Col::gamma2_2}) row[c] = std::numeric_limits<double>::quiet_NaN();
    }
    if (!series_.rows.empty()) {
        const double dt = s.t - series_.times.back();
        running_ += 0.5 * dt * (row[Col::local_energy_rate] + series_.rows.back()[Col::local_energy_rate]);
    }
    row[Col::local_energy] = std::sqrt(running_);
    series_.append(s.t, std::move(row));
}

evolution::Observer NormTracker::observer() {
    return [this](const FieldState& s, const evolution::StepInfo&) {
        record(s);
        return true;
    };
}

void ModeTracker::record(const FieldState& s) {
    if (!mode_.times.empty() && !(s.t > mode_.times.back())) return;
    const auto& g = basis_->g_d;
    const auto& w = basis_->quad_weights;
    mode_.times.push_back(s.t);
    mode_.h.push_back(quad::inner(s.phi, g, w));
    mode_.h_dot.push_back(quad::inner(s.pi, g, w));
    double f = 0.0;
    if (with_forcing_) {
        try {
            f = quad::inner(ev_->weighted_forcing(s), g, w);
        } catch (const Error&) {
            f = std::numeric_limits<double>::quiet_NaN();
        }
    }
    mode_.forcing.push_back(f);
    mode_.sup_phys.push_back(sup_physical(s, ev_->grid()));
}

evolution::Observer ModeTracker::observer() {
    return [this](const FieldState& s, const evolution::StepInfo&) {
        record(s);
        return true;
    };
}

ModeTrajectory mode_trajectory(const evolution::Trajectory& traj, const spectral::SpectralBasis& basis,
                               const evolution::Evolver& ev) {
    ModeTracker tracker(ev, basis);
    for (const auto& s : traj.snapshots) tracker.record(s);
    return tracker.trajectory();
}

std::vector<double> duhamel_h(const ModeTrajectory& mode, double a, double p1, double p2, double k_d) {
    const std::size_t m = mode.times.size();
    std::vector<double> out(m);
    if (m == 0) return out;
    std::vector<double> decay(m), grow(m);
    for (std::size_t j = 0; j < m; ++j) {
        decay[j] = std::exp(-k_d * mode.times[j]) * mode.forcing[j];
        grow[j] = std::exp(k_d * mode.times[j]) * mode.forcing[j];
    }
    std::vector<double> I_minus(m, 0.0), I_plus(m, 0.0);
    if (m >= 2) {
        I_minus = quad::cumulative_simpson(mode.times, decay);
        I_plus = quad::cumulative_simpson(mode.times, grow);
    }
    const double h0 = a + p1;
    for (std::size_t j = 0; j < m; ++j) {
        const double t = mode.times[j];
        const double ep = std::exp(k_d * t), em = std::exp(-k_d * t);
        out[j] = 0.5 * (h0 + p2 / k_d) * ep + 0.5 * (h0 - p2 / k_d) * em
                 - (ep * I_minus[j] - em * I_plus[j]) / (2.0 * k_d);
    }
    return out;
}

DecayFit fit_decay(std::span<const double> times, std::span<const double> values, double t0, double t1,
                   std::size_t min_samples) {
    if (!(t0 > 0.0) || !(t1 > 2.0 * t0)) throw FitUndefined("decay window must satisfy t1 > 2 t0 > 0");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t0 || times[i] > t1) continue;
        if (!(values[i] > 0.0)) throw FitUndefined("non-positive value in decay window");
        xs.push_back(std::log(times[i]));
        ys.push_back(std::log(values[i]));
    }
    const std::size_t m = xs.size();
    if (m < min_samples || m < 3) throw FitUndefined("too few samples in decay window");
    for (std::size_t i = 0; i < m; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double md = static_cast<double>(m);
    const double den = md * sxx - sx * sx;
    if (!(den > 0.0)) throw FitUndefined("degenerate decay window");
    DecayFit fit;
    fit.exponent = (md * sxy - sx * sy) / den;
    const double icpt = (sy - fit.exponent * sx) / md;
    fit.prefactor = std::exp(icpt);
    double rss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = ys[i] - icpt - fit.exponent * xs[i];
        rss += r * r;
    }
    fit.stderr_ = std::sqrt(rss / (md - 2.0) * md / den);
    fit.samples = m;
    return fit;
}

std::optional<double> growth_rate(std::span<const double> times, std::span<const double> h) {
    if (h.empty()) return std::nullopt;
    const double last = std::abs(h.back());
    if (!(last > 0.0)) return std::nullopt;
    std::size_t first = h.size() - 1;
    while (first > 0 && std::abs(h[first - 1]) >= last / std::exp(1.0) && std::abs(h[first - 1]) <= last)
        --first;
    const std::size_t m = h.size() - first;
    if (m < 3) return std::nullopt;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = first; i < h.size(); ++i) {
        const double x = times[i], y = std::log(std::abs(h[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double md = static_cast<double>(m);
    const double den = md * sxx - sx * sx;
    if (!(den > 0.0)) return std::nullopt;
    return (md * sxy - sx * sy) / den;
}

std::string to_string(Fate f) {
    switch (f) {
        case Fate::Decayed: return "Decayed";
        case Fate::Collapsed: return "Collapsed";
        case Fate::Widened: return "Widened";
        case Fate::Undecided: return "Undecided";
    }
    return "Undecided";
}

double h_cap(double h0, const FateConfig& cfg) { return cfg.h_cap_factor * std::abs(h0) + cfg.h_cap_offset; }

evolution::Observer widening_stop(const ModeTracker& tracker, double cap) {
    return [&tracker, cap](const FieldState&, const evolution::StepInfo&) {
        const auto& h = tracker.trajectory().h;
        return h.empty() || !(h.back() > cap);
    };
}

FateReport classify_fate(const evolution::TerminationRecord& rec, const ModeTrajectory& mode,
                         double k_d, double t_max, const FateConfig& cfg) {
    FateReport rep;
    rep.guard = rec;
    if (rec.guard == evolution::Guard::Regularity && rec.event_value < 0.0) {
        rep.fate = Fate::Collapsed;
        rep.event_time = rec.t;
        return rep;
    }
    if (!mode.h.empty()) {
        const double cap = h_cap(mode.h.front(), cfg);
        for (std::size_t j = 0; j < mode.h.size(); ++j) {
            if (mode.h[j] > cap) {
                const std::span<const double> ts(mode.times.data(), j + 1);
                const std::span<const double> hs(mode.h.data(), j + 1);
                rep.h_growth_rate = growth_rate(ts, hs);
                if (rep.h_growth_rate && std::abs(*rep.h_growth_rate - k_d) <= cfg.rate_tolerance * k_d) {
                    rep.fate = Fate::Widened;
                    rep.event_time = mode.times[j];
                    return rep;
                }
                break;
            }
        }
    }
    const bool completed = rec.guard == evolution::Guard::Completed ||
                           rec.guard == evolution::Guard::BoundaryContamination;
    if (completed && !mode.sup_phys.empty()) {
        const bool all_zero = std::all_of(mode.sup_phys.begin(), mode.sup_phys.end(),
                                          [](double v) { return v == 0.0; });
        if (all_zero) {
            rep.fate = Fate::Decayed;
            return rep;
        }
        double t1 = cfg.window_end * t_max;
        if (rec.contaminated) t1 = std::min(t1, rec.contamination_time);
        const double t0 = cfg.window_start * t_max;
        try {
            const DecayFit fit = fit_decay(mode.times, mode.sup_phys, t0, t1);
            rep.decay_exponent = fit.exponent;
            rep.decay_stderr = fit.stderr_;
            const double cap = h_cap(mode.h.front(), cfg);
            const bool bounded = std::all_of(mode.h.begin(), mode.h.end(),
                                             [cap](double v) { return std::abs(v) <= cap; });
            if (fit.exponent < 0.0 && bounded) rep.fate = Fate::Decayed;
        } catch (const FitUndefined&) {
        }
    }
    return rep;
}

bool clean_window(const evolution::TerminationRecord& rec, const ModeTrajectory& mode, double g_d0,
                  double& t0, double& t1, double share, double t_min) {
    double end = rec.contaminated ? rec.contamination_time : rec.t;
    for (std::size_t j = 0; j < mode.times.size(); ++j) {
        const double t = mode.times[j];
        if (t < t_min || t > end) continue;
        if (std::abs(mode.h[j]) * g_d0 > share * mode.sup_phys[j]) {
            end = t;
            break;
        }
    }
    t1 = end;
    t0 = end / 2.5;
    return t1 > t0 && t0 > 0.0;
}

}  // namespace catlab::analysis
