#include "catlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "catlab/error.hpp"
#include "catlab/quadrature.hpp"
#include "catlab/stencil.hpp"

namespace catlab::spectral {

double potential(double y) noexcept {
    const double J = 1.0 + y * y;
    return (6.0 + y * y) / (4.0 * J * J);
}

double zero_mode_scaling(double y) noexcept {
    const double jb = japanese(y);
    return std::sqrt(jb) * (y / jb * std::asinh(y) - 1.0);
}

double zero_mode_translation(double y) noexcept {
    const double jb = japanese(y);
    return std::sqrt(jb) * (y / jb);
}

ZeroModes zero_modes(const Grid& grid) {
    return {grid.sample(zero_mode_scaling), grid.sample(zero_mode_translation)};
}

void apply_L_into(std::span<const double> f, const Grid& grid, Parity parity,
                  std::span<double> out) {
    stencil::d2_into(f, grid.spacing(), parity, out);
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = -out[i] - potential(grid.node(i)) * f[i];
}

std::vector<double> apply_L(std::span<const double> f, const Grid& grid, Parity parity) {
    std::vector<double> out(f.size());
    apply_L_into(f, grid, parity, out);
    return out;
}

namespace {

// Value at index i of a field with parity reflection at 0 and an odd wall at
// the last node (index n-1 carries zero).
double walled(std::span<const double> f, long i, Parity parity) {
    const long last = static_cast<long>(f.size()) - 1;
    if (i >= last) {
        if (i == last) return 0.0;
        return -f[static_cast<std::size_t>(2 * last - i)];
    }
    return stencil::reflected(f, i, parity);
}

}  // namespace

std::vector<double> apply_L_dirichlet(std::span<const double> f, const Grid& grid, Parity parity) {
    const long n = static_cast<long>(f.size());
    const double h = grid.spacing();
    const double c = 1.0 / (12.0 * h * h);
    std::vector<double> out(f.size(), 0.0);
    for (long i = 0; i < n - 1; ++i) {
        const double d2 = c * (-walled(f, i - 2, parity) + 16.0 * walled(f, i - 1, parity)
                               - 30.0 * f[i] + 16.0 * walled(f, i + 1, parity)
                               - walled(f, i + 2, parity));
        out[i] = -d2 - potential(grid.node(i)) * f[i];
    }
    return out;
}

double rayleigh_quotient(std::span<const double> f, const Grid& grid, Parity parity) {
    std::vector<double> g(f.begin(), f.end());
    g.back() = 0.0;
    const auto w = quad::line_weights(grid);
    const auto Lf = apply_L_dirichlet(g, grid, parity);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        num += w[i] * g[i] * Lf[i];
        den += w[i] * g[i] * g[i];
    }
    if (den == 0.0) throw DomainError("rayleigh_quotient: zero field");
    return num / den;
}

int count_below(const Grid& grid, double lambda) {
    // Unknowns 0..n-2; row 0 uses the reflected ghost (Neumann), the last
    // node is a Dirichlet wall. Off-diagonal products of the symmetrizable
    // tridiagonal matrix: 2/h^4 in the first row, 1/h^4 elsewhere.
    const std::size_t m = grid.size() - 1;
    const double h = grid.spacing();
    const double ih2 = 1.0 / (h * h);
    const double ih4 = ih2 * ih2;
    int count = 0;
    double d = 2.0 * ih2 - potential(0.0) - lambda;
    if (d < 0.0) ++count;
    for (std::size_t i = 1; i < m; ++i) {
        const double prod = (i == 1 ? 2.0 : 1.0) * ih4;
        if (d == 0.0) d = 1e-300;
        d = 2.0 * ih2 - potential(grid.node(i)) - lambda - prod / d;
        if (d < 0.0) ++count;
    }
    return count;
}

double tridiagonal_lowest(const Grid& grid, double tolerance) {
    double lo = -potential(0.0) - 1e-9;
    double hi = 0.0;
    if (count_below(grid, lo) != 0) throw SpectralError(SpectralError::Kind::Discretization,
                                                        "eigenvalue below -max V");
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        (count_below(grid, mid) >= 1 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

// True when the even shooting solution at energy lambda changes sign before
// the wall, i.e. lambda lies above the lowest Dirichlet eigenvalue.
bool crosses_before_wall(double lambda, double y_max, std::size_t steps) {
    const double h = y_max / static_cast<double>(steps);
    const double c = h * h / 12.0;
    auto s = [&](std::size_t i) { return -(lambda + potential(static_cast<double>(i) * h)); };
    double u_prev = 1.0;
    double s_prev = s(0), s_cur = s(1);
    double u_cur = (1.0 + 5.0 * c * s_prev) * u_prev / (1.0 - c * s_cur);
    if (u_cur <= 0.0) return true;
    for (std::size_t i = 1; i < steps; ++i) {
        const double s_next = s(i + 1);
        const double u_next = (2.0 * (1.0 + 5.0 * c * s_cur) * u_cur - (1.0 - c * s_prev) * u_prev)
                              / (1.0 - c * s_next);
        if (u_next <= 0.0) return true;
        // Growth past the decaying branch is already decided.
        if (u_next > 1e200) return false;
        u_prev = u_cur;
        u_cur = u_next;
        s_prev = s_cur;
        s_cur = s_next;
    }
    return false;
}

}  // namespace

double shooting_lowest(double y_max, std::size_t steps, double lo, double hi, double tolerance) {
    if (crosses_before_wall(lo, y_max, steps) || !crosses_before_wall(hi, y_max, steps))
        throw SpectralError(SpectralError::Kind::NoConvergence, "shooting bracket invalid");
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        (crosses_before_wall(mid, y_max, steps) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

Eigen::SparseMatrix<double> dirichlet_matrix(const Grid& grid, double shift) {
    const long m = static_cast<long>(grid.size()) - 1;
    const double h = grid.spacing();
    const double c = 1.0 / (12.0 * h * h);
    const double stencil_w[5] = {1.0, -16.0, 30.0, -16.0, 1.0};  // of -f''
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(5 * m));
    for (long i = 0; i < m; ++i) {
        trip.emplace_back(i, i, -potential(grid.node(static_cast<std::size_t>(i))) - shift);
        for (long k = -2; k <= 2; ++k) {
            long j = i + k;
            double sign = 1.0;
            if (j < 0) j = -j;  // even reflection
            if (j == m) continue;  // wall node carries zero
            if (j > m) {
                j = 2 * m - j;
                sign = -1.0;
            }
            trip.emplace_back(i, j, sign * c * stencil_w[k + 2]);
        }
    }
    Eigen::SparseMatrix<double> A(m, m);
    A.setFromTriplets(trip.begin(), trip.end());
    return A;
}

}  // namespace

SpectralBasis ground_state(const Grid& grid, double tolerance) {
    if (grid.y_max() < 20.0)
        throw DomainError("ground_state: y_max must be at least 20");

    SpectralBasis basis{grid, {}, 0.0, {}, {}, quad::line_weights(grid), {}};
    EigenReport& rep = basis.report;

    rep.negative_count = count_below(grid, 0.0);
    if (rep.negative_count == 0)
        throw SpectralError(SpectralError::Kind::DomainTooSmall, "no negative eigenvalue found");
    if (rep.negative_count > 1) {
        std::ostringstream msg;
        msg << rep.negative_count << " negative eigenvalues found";
        throw SpectralError(SpectralError::Kind::Discretization, msg.str());
    }
    rep.matrix_value = tridiagonal_lowest(grid, std::max(tolerance, 1e-14));

    const std::size_t steps = std::max<std::size_t>(grid.size() - 1, 4000);
    const double width = 0.05;
    rep.shooting_value = shooting_lowest(grid.y_max(), steps, rep.matrix_value - width,
                                         std::min(rep.matrix_value + width, -1e-6),
                                         std::max(tolerance, 1e-14));

    // Shift-invert iteration on the fourth-order operator.
    const double shift = rep.shooting_value - 1e-6;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(dirichlet_matrix(grid, shift));
    if (lu.info() != Eigen::Success)
        throw SpectralError(SpectralError::Kind::NoConvergence, "factorization failed");

    const std::size_t m = grid.size() - 1;
    const auto& w = basis.quad_weights;
    Eigen::VectorXd x(static_cast<long>(m));
    for (std::size_t i = 0; i < m; ++i) x[static_cast<long>(i)] = std::exp(-0.75 * grid.node(i));
    std::vector<double> g(grid.size(), 0.0);
    double rq = 0.0;
    bool converged = false;
    for (int it = 1; it <= 50; ++it) {
        x = lu.solve(x);
        double nrm = 0.0;
        for (std::size_t i = 0; i < m; ++i) nrm += w[i] * x[static_cast<long>(i)] * x[static_cast<long>(i)];
        x /= std::sqrt(nrm);
        for (std::size_t i = 0; i < m; ++i) g[i] = x[static_cast<long>(i)];
        const double next = rayleigh_quotient(g, grid);
        rep.inverse_iterations = it;
        if (it > 1 && std::abs(next - rq) <= tolerance * std::max(1.0, std::abs(next))) {
            rq = next;
            converged = true;
            break;
        }
        rq = next;
    }
    if (!converged) throw SpectralError(SpectralError::Kind::NoConvergence, "inverse iteration stalled");

    if (g[0] < 0.0)
        for (auto& v : g) v = -v;
    rep.fd4_value = rq;
    const auto Lg = apply_L_dirichlet(g, grid);
    double res = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = Lg[i] - rq * g[i];
        res += w[i] * r * r;
    }
    rep.fd4_residual = std::sqrt(res);

    // Beyond the point where the discrete eigenvector drops to roundoff level
    // (and at the wall node) continue it with its exponential decay law.
    const double k = std::sqrt(-rq);
    std::size_t cut = grid.size() - 1;
    for (std::size_t i = 1; i < grid.size() - 1; ++i) {
        if (g[i] < 1e-10 * g[0]) {
            cut = i;
            break;
        }
    }
    for (std::size_t i = cut; i < grid.size(); ++i)
        g[i] = g[cut - 1] * std::exp(-k * (grid.node(i) - grid.node(cut - 1)));

    basis.g_d = std::move(g);
    basis.k_d_sq = -rq;
    auto zm = zero_modes(grid);
    basis.zero_mode_scaling = std::move(zm.scaling);
    basis.zero_mode_translation = std::move(zm.translation);
    return basis;
}

DiscreteProjection project_d(std::span<const double> f, const SpectralBasis& basis, Parity parity) {
    DiscreteProjection p;
    p.h = quad::inner(f, basis.g_d, basis.quad_weights, parity, Parity::Even);
    p.component.resize(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) p.component[i] = p.h * basis.g_d[i];
    return p;
}

std::vector<double> project_c(std::span<const double> f, const SpectralBasis& basis, Parity parity) {
    const auto d = project_d(f, basis, parity);
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] - d.component[i];
    return out;
}

}  // namespace catlab::spectral
