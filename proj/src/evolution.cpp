#include "catlab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "catlab/error.hpp"
#include "catlab/model.hpp"
#include "catlab/quadrature.hpp"
#include "catlab/stencil.hpp"

namespace catlab::evolution {

std::string to_string(Guard g) {
    switch (g) {
        case Guard::Completed: return "completed";
        case Guard::Regularity: return "regularity";
        case Guard::Hyperbolicity: return "hyperbolicity";
        case Guard::BoundaryContamination: return "boundary-contamination";
        case Guard::Observer: return "observer";
    }
    return "unknown";
}

Evolver::Evolver(Grid grid, EvolutionConfig config, const spectral::SpectralBasis* basis)
    : grid_(std::move(grid)), config_(config), basis_(basis) {
    if (!(config_.cfl > 0.0 && config_.cfl <= 1.0)) throw DomainError("cfl must lie in (0, 1]");
    if (config_.snapshot_stride == 0) config_.snapshot_stride = 1;
    if (config_.suppress_unstable_mode && basis_ == nullptr)
        throw DomainError("suppress_unstable_mode needs the spectral basis");
    if (basis_ != nullptr && !(basis_->grid == grid_))
        throw DomainError("spectral basis lives on a different grid");
    const std::size_t n = grid_.size();
    y_.resize(n);
    w_.resize(n);
    w1_.resize(n);
    w2_.resize(n);
    V_.resize(n);
    J_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = grid_.node(i);
        const model::Weight w = model::weight(y);
        y_[i] = y;
        w_[i] = w.w;
        w1_[i] = w.w1;
        w2_[i] = w.w2;
        V_[i] = model::weighted_potential(y);
        J_[i] = 1.0 + y * y;
    }
    d1phi_.resize(n);
    d2phi_.resize(n);
    d1pi_.resize(n);
    for (int k = 0; k < 4; ++k) {
        k_phi_[k].resize(n);
        k_pi_[k].resize(n);
    }
}

void Evolver::rhs(const FieldState& s, std::span<double> dphi, std::span<double> dpi) const {
    const std::size_t n = grid_.size();
    const double h = grid_.spacing();
    stencil::d1_into(s.phi, h, s.parity, d1phi_);
    stencil::d2_into(s.phi, h, s.parity, d2phi_);
    stencil::d1_into(s.pi, h, s.parity, d1pi_);

    const double margin = 1.0 - config_.regularity_margin;
    for (std::size_t i = 0; i + 2 < n; ++i) {
        const double w = w_[i];
        const double phi = s.phi[i] / w;
        if (!(std::abs(phi) < margin * J_[i])) {
            std::ostringstream msg;
            msg << "graph chart margin reached at y=" << y_[i] << " (phi=" << phi << ", t=" << s.t << ")";
            throw RegularityViolation(y_[i], phi, msg.str());
        }
        dphi[i] = s.pi[i];
        const double lin = d2phi_[i] + V_[i] * s.phi[i];
        if (config_.linear_only) {
            dpi[i] = lin;
            continue;
        }
        const double phi_t = s.pi[i] / w;
        const double phi_y = (d1phi_[i] - w1_[i] * phi) / w;
        const double phi_ty = (d1pi_[i] - w1_[i] * phi_t) / w;
        const double phi_yy = (d2phi_[i] - w2_[i] * phi - 2.0 * w1_[i] * phi_y) / w;
        const model::NonlinearitySplit f = model::nonlinearity_split(y_[i], phi, phi_t, phi_y);
        const double denom = 1.0 + f.f_tt;
        const double K = model::lorentz_factor(y_[i], phi, phi_t, phi_y);
        if (!(std::abs(denom) >= config_.hyperbolicity_floor) || !(K > 0.0)) {
            std::ostringstream msg;
            msg << "hyperbolicity lost at y=" << y_[i] << " (c_tt=" << -denom << ", K=" << K
                << ", t=" << s.t << ")";
            throw HyperbolicityLoss(y_[i], -denom, msg.str());
        }
        dpi[i] = (lin - w * (f.f0 + f.f_ty * phi_ty + f.f_yy * phi_yy)) / denom;
    }
    for (std::size_t i = n - 2; i < n; ++i) {
        if (config_.boundary == Boundary::Outgoing) {
            dphi[i] = -d1phi_[i];
            dpi[i] = -d1pi_[i];
        } else {
            dphi[i] = 0.0;
            dpi[i] = 0.0;
        }
    }
}

std::vector<double> Evolver::weighted_forcing(const FieldState& s) const {
    const std::size_t n = grid_.size();
    std::vector<double> dphi(n), dpi(n), out(n, 0.0);
    rhs(s, dphi, dpi);
    // rhs() leaves d2phi_ filled for this state.
    for (std::size_t i = 0; i + 2 < n; ++i) out[i] = d2phi_[i] + V_[i] * s.phi[i] - dpi[i];
    return out;
}

double Evolver::max_speed(const FieldState& s) const {
    double speed = 1.0;
    const std::size_t n = grid_.size();
    stencil::d1_into(s.phi, grid_.spacing(), s.parity, d1phi_);
    for (std::size_t i = 0; i + 2 < n; ++i) {
        const double phi = s.phi[i] / w_[i];
        const double phi_t = s.pi[i] / w_[i];
        const double phi_y = (d1phi_[i] - w1_[i] * phi) / w_[i];
        speed = std::max(speed, model::characteristic_speed(y_[i], phi, phi_t, phi_y));
    }
    return speed;
}

double Evolver::stable_dt(const FieldState& s) const {
    if (config_.fixed_dt > 0.0) return config_.fixed_dt;
    const double speed = config_.linear_only ? 1.0 : max_speed(s);
    return config_.cfl * grid_.spacing() / speed;
}

void Evolver::step(FieldState& s, double dt) {
    const std::size_t n = grid_.size();
    stage_.parity = s.parity;
    stage_.representation = s.representation;
    stage_.phi.resize(n);
    stage_.pi.resize(n);

    rhs(s, k_phi_[0], k_pi_[0]);
    const double c[3] = {0.5, 0.5, 1.0};
    for (int k = 1; k < 4; ++k) {
        stage_.t = s.t + c[k - 1] * dt;
        for (std::size_t i = 0; i < n; ++i) {
            stage_.phi[i] = s.phi[i] + c[k - 1] * dt * k_phi_[k - 1][i];
            stage_.pi[i] = s.pi[i] + c[k - 1] * dt * k_pi_[k - 1][i];
        }
        rhs(stage_, k_phi_[k], k_pi_[k]);
    }
    const double b = dt / 6.0;
    for (std::size_t i = 0; i < n; ++i) {
        s.phi[i] += b * (k_phi_[0][i] + 2.0 * k_phi_[1][i] + 2.0 * k_phi_[2][i] + k_phi_[3][i]);
        s.pi[i] += b * (k_pi_[0][i] + 2.0 * k_pi_[1][i] + 2.0 * k_pi_[2][i] + k_pi_[3][i]);
    }
    s.t += dt;
    if (config_.suppress_unstable_mode) filter_unstable_mode(s);
}

void Evolver::filter_unstable_mode(FieldState& s) const {
    const auto& g = basis_->g_d;
    const auto& w = basis_->quad_weights;
    const double hp = quad::inner(s.phi, g, w);
    const double hv = quad::inner(s.pi, g, w);
    for (std::size_t i = 0; i < g.size(); ++i) {
        s.phi[i] -= hp * g[i];
        s.pi[i] -= hv * g[i];
    }
}

double Evolver::support_radius(const FieldState& s) const {
    double peak = 0.0;
    for (std::size_t i = 0; i < s.phi.size(); ++i)
        peak = std::max({peak, std::abs(s.phi[i]), std::abs(s.pi[i])});
    if (peak == 0.0) return 0.0;
    const double level = config_.support_threshold * peak;
    for (std::size_t i = s.phi.size(); i-- > 0;)
        if (std::abs(s.phi[i]) > level || std::abs(s.pi[i]) > level) return y_[i];
    return 0.0;
}

TerminationRecord Evolver::evolve(FieldState& s, const std::vector<Observer>& observers) {
    if (s.representation != Representation::Weighted)
        throw DomainError("evolve expects a weighted state");
    if (s.phi.size() != grid_.size() || s.pi.size() != grid_.size())
        throw DomainError("state does not match the grid");

    TerminationRecord rec;
    rec.initial_support = support_radius(s);
    const double wall = grid_.y_max() - config_.boundary_buffer;
    StepInfo info;
    info.front = rec.initial_support;
    if (info.front >= wall) {
        rec.contaminated = true;
        rec.contamination_time = s.t;
    }

    auto notify = [&](bool final) {
        info.final = final;
        bool keep = true;
        for (const auto& obs : observers) keep = obs(s, info) && keep;
        return keep;
    };

    std::size_t last_notified = 0;
    bool stop = !notify(false);
    if (stop) rec.guard = Guard::Observer;
    const double eps_t = 1e-12 * std::max(1.0, config_.t_max);
    while (!stop && s.t < config_.t_max - eps_t) {
        double dt = 0.0, speed = 1.0;
        try {
            speed = config_.linear_only ? 1.0 : max_speed(s);
            dt = config_.fixed_dt > 0.0 ? config_.fixed_dt : config_.cfl * grid_.spacing() / speed;
            dt = std::min(dt, config_.t_max - s.t);
            step(s, dt);
        } catch (const RegularityViolation& e) {
            rec.guard = Guard::Regularity;
            rec.message = e.what();
            rec.event_y = e.y();
            rec.event_value = e.phi();
            break;
        } catch (const HyperbolicityLoss& e) {
            rec.guard = Guard::Hyperbolicity;
            rec.message = e.what();
            rec.event_y = e.y();
            rec.event_value = e.coefficient();
            break;
        }
        ++info.step;
        info.dt = dt;
        info.max_speed = speed;
        info.front += info.max_speed * dt;
        if (!rec.contaminated && info.front >= wall) {
            rec.contaminated = true;
            rec.contamination_time = s.t;
            if (config_.halt_on_contamination) {
                rec.guard = Guard::BoundaryContamination;
                rec.message = "causal cone reached the outer buffer";
                break;
            }
        }
        if (info.step % config_.snapshot_stride == 0) {
            last_notified = info.step;
            if (!notify(false)) {
                rec.guard = Guard::Observer;
                stop = true;
            }
        }
    }
    rec.t = s.t;
    rec.steps = info.step;
    if (rec.guard != Guard::Observer && last_notified != info.step) notify(true);
    return rec;
}

Observer Trajectory::recorder() {
    return [this](const FieldState& s, const StepInfo&) {
        snapshots.push_back(s);
        return true;
    };
}

}  // namespace catlab::evolution
