#include "catlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "catlab/error.hpp"
#include "catlab/grid.hpp"

namespace catlab::geometry {

namespace {

double wrap_angle(double omega) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double w = std::fmod(omega, two_pi);
    if (w < 0.0) w += two_pi;
    return w;
}

}  // namespace

AmbientPoint catenoid_embed(const CatenoidParams& p, double y, double omega) {
    if (!(p.a > 0.0)) throw DomainError("catenoid_embed: scaling a must be positive");
    const double u = y / p.a;
    return {p.a * japanese(u), p.b + p.a * std::asinh(u), wrap_angle(omega), 0.0};
}

AmbientPoint graph_embed(double y, double omega, double phi, double margin) {
    const double jb = japanese(y);
    const double jb2 = jb * jb;
    if (!(std::abs(phi) < (1.0 - margin) * jb2)) {
        std::ostringstream msg;
        msg << "graph_embed: chart not regular at y=" << y << ", phi=" << phi;
        throw RegularityViolation(y, phi, msg.str());
    }
    return {jb + phi / jb, std::asinh(y) - y * phi / jb, wrap_angle(omega), 0.0};
}

MetricTable pullback_metric(double y, double phi, double phi_t, double phi_y) {
    const double jb2 = 1.0 + y * y;
    MetricTable g{};
    g[0][0] = -(1.0 - phi_t * phi_t);
    g[1][1] = 1.0 - 2.0 * phi / jb2 + phi * phi / (jb2 * jb2) + phi_y * phi_y;
    g[0][1] = g[1][0] = phi_t * phi_y;
    g[2][2] = 1.0 + y * y + 2.0 * phi + phi * phi / jb2;
    return g;
}

std::array<double, 3> symmetric_eigenvalues(const MetricTable& m) {
    // Closed-form trigonometric solution of the characteristic cubic.
    const double p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
    std::array<double, 3> ev{};
    if (p1 == 0.0) {
        ev = {m[0][0], m[1][1], m[2][2]};
        std::sort(ev.begin(), ev.end());
        return ev;
    }
    const double q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
    const double p2 = (m[0][0] - q) * (m[0][0] - q) + (m[1][1] - q) * (m[1][1] - q) +
                      (m[2][2] - q) * (m[2][2] - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    MetricTable b{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b[i][j] = (m[i][j] - (i == j ? q : 0.0)) / p;
    const double det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                       b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                       b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    const double r = std::clamp(det / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    const double e2 = 3.0 * q - e1 - e3;
    ev = {e3, e2, e1};
    std::sort(ev.begin(), ev.end());
    return ev;
}

bool lorentzian_check(const MetricTable& metric, double tolerance) {
    const auto ev = symmetric_eigenvalues(metric);
    return ev[0] < -tolerance && ev[1] > tolerance && ev[2] > tolerance;
}

}  // namespace catlab::geometry
