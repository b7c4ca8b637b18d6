#include "catlab/reference.hpp"

#include <algorithm>
#include <cmath>

#include "catlab/error.hpp"

namespace catlab::reference {

CylinderDerivative cylinder_rhs(const CylinderState& s) {
    if (!(s.R > 0.0)) throw CollapseSignal("cylinder radius reached zero");
    return {s.R_dot, (-1.0 + s.R_dot * s.R_dot) / s.R};
}

namespace {

CylinderState advance(const CylinderState& s, const CylinderDerivative& d, double dt) {
    return {s.t + dt, s.R + dt * d.dR, s.R_dot + dt * d.dR_dot};
}

double extrapolated_collapse(const CylinderState& s) {
    if (s.R_dot < 0.0) return s.t + s.R / -s.R_dot;
    return s.t;
}

}  // namespace

CylinderRun cylinder_evolve(CylinderState s0, double dt, double t_max, double r_min,
                            std::size_t record_stride) {
    if (!(dt > 0.0)) throw DomainError("cylinder_evolve: dt must be positive");
    if (record_stride == 0) record_stride = 1;
    CylinderRun run;
    run.trajectory.push_back(s0);
    CylinderState s = s0;
    std::size_t step = 0;
    while (s.t < t_max) {
        if (s.R < r_min) {
            run.collapsed = true;
            break;
        }
        const double h = std::min(dt, t_max - s.t);
        try {
            const auto k1 = cylinder_rhs(s);
            const auto k2 = cylinder_rhs(advance(s, k1, 0.5 * h));
            const auto k3 = cylinder_rhs(advance(s, k2, 0.5 * h));
            const auto k4 = cylinder_rhs(advance(s, k3, h));
            CylinderState next{s.t + h,
                               s.R + h / 6.0 * (k1.dR + 2.0 * k2.dR + 2.0 * k3.dR + k4.dR),
                               s.R_dot + h / 6.0 * (k1.dR_dot + 2.0 * k2.dR_dot + 2.0 * k3.dR_dot + k4.dR_dot)};
            if (!(next.R > 0.0)) throw CollapseSignal("radius crossed zero");
            s = next;
        } catch (const CollapseSignal&) {
            run.collapsed = true;
            break;
        }
        ++step;
        if (step % record_stride == 0) run.trajectory.push_back(s);
    }
    if (run.trajectory.back().t != s.t) run.trajectory.push_back(s);
    if (!run.collapsed && s.R < r_min) run.collapsed = true;
    run.collapse_time = run.collapsed ? extrapolated_collapse(s) : 0.0;
    return run;
}

namespace {

// Pieces of G(y, phi) = r - a cosh(z / a) along the normal line at y, with
// r = <y> + phi/<y> and z = asinh y - y phi/<y>.
struct Residual {
    double G, G_phi, G_y, G_yy, G_yphi, G_phiphi;
};

Residual normal_residual(double a, double y, double phi) {
    const double jb = japanese(y);
    const double j3 = jb * jb * jb;
    const double j5 = j3 * jb * jb;
    const double r = jb + phi / jb;
    const double r_y = y / jb - y * phi / j3;
    const double r_phi = 1.0 / jb;
    const double r_yy = 1.0 / j3 + phi * (-1.0 / j3 + 3.0 * y * y / j5);
    const double r_yphi = -y / j3;

    const double z = std::asinh(y) - y * phi / jb;
    const double z_y = 1.0 / jb - phi / j3;
    const double z_phi = -y / jb;
    const double z_yy = -y / j3 + 3.0 * y * phi / j5;
    const double z_yphi = -1.0 / j3;

    const double c0 = a * std::cosh(z / a);
    const double c1 = std::sinh(z / a);
    const double c2 = std::cosh(z / a) / a;

    Residual g;
    g.G = r - c0;
    g.G_phi = r_phi - c1 * z_phi;
    g.G_y = r_y - c1 * z_y;
    g.G_yy = r_yy - c2 * z_y * z_y - c1 * z_yy;
    g.G_yphi = r_yphi - c2 * z_y * z_phi - c1 * z_yphi;
    g.G_phiphi = -c2 * z_phi * z_phi;
    return g;
}

}  // namespace

bool invert_normal_line(double a, double y, double margin, double& phi) {
    const double limit = (1.0 - margin) * (1.0 + y * y);
    auto G = [&](double p) { return normal_residual(a, y, p).G; };
    const double g0 = G(0.0);
    if (g0 == 0.0) {
        phi = 0.0;
        return true;
    }
    // Expand a bracket around 0 until a sign change appears on either side.
    double lo = 0.0, hi = 0.0;
    bool found = false;
    for (double s = 1e-4 * limit;; s *= 2.0) {
        const double step = std::min(s, limit);
        if (G(step) * g0 <= 0.0) {
            lo = 0.0;
            hi = step;
            found = true;
        } else if (G(-step) * g0 <= 0.0) {
            lo = -step;
            hi = 0.0;
            found = true;
        }
        if (found || step >= limit) break;
    }
    if (!found) return false;

    double glo = G(lo);
    while (hi - lo > 1e-6 * std::max(1.0, std::abs(lo))) {
        const double mid = 0.5 * (lo + hi);
        const double gm = G(mid);
        if ((gm < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    double p = 0.5 * (lo + hi);
    for (int it = 0; it < 50; ++it) {
        const auto r = normal_residual(a, y, p);
        if (r.G_phi == 0.0) break;
        const double next = std::clamp(p - r.G / r.G_phi, lo, hi);
        const bool done = std::abs(next - p) <= 1e-15 * std::max(1.0, std::abs(p));
        p = next;
        if (done) break;
    }
    phi = p;
    return std::abs(p) < limit;
}

FamilyGraph family_graph(const geometry::CatenoidParams& p, const Grid& grid, double margin) {
    if (!(p.a > 0.0)) throw DomainError("family_graph: scaling a must be positive");
    if (p.b != 0.0) throw DomainError("family_graph: only even members (b = 0) are graphs over the half line");
    const std::size_t n = grid.size();
    FamilyGraph out;
    out.state.t = 0.0;
    out.state.representation = Representation::Physical;
    out.state.parity = Parity::Even;
    out.state.phi.assign(n, 0.0);
    out.state.pi.assign(n, 0.0);
    out.phi_y.assign(n, 0.0);
    out.phi_yy.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = grid.node(i);
        double phi = 0.0;
        if (!invert_normal_line(p.a, y, margin, phi)) break;
        const auto r = normal_residual(p.a, y, phi);
        const double py = -r.G_y / r.G_phi;
        const double pyy = -(r.G_yy + 2.0 * r.G_yphi * py + r.G_phiphi * py * py) / r.G_phi;
        out.state.phi[i] = phi;
        out.phi_y[i] = py;
        out.phi_yy[i] = pyy;
        out.valid_count = i + 1;
        out.valid_y_max = y;
    }
    return out;
}

}  // namespace catlab::reference
