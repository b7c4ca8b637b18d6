#include "catlab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace catlab::quad {

std::vector<double> line_weights(const Grid& grid) {
    const double h = grid.spacing();
    std::vector<double> w(grid.size(), 2.0 * h);
    w.front() = h;
    w.back() = h;
    return w;
}

double inner(std::span<const double> f, std::span<const double> g, std::span<const double> w,
             Parity pf, Parity pg) {
    if (f.size() != g.size() || f.size() != w.size())
        throw std::invalid_argument("inner: size mismatch");
    if (pf != pg) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i] * g[i];
    return s;
}

double norm(std::span<const double> f, std::span<const double> w) {
    return std::sqrt(inner(f, f, w));
}

double quadratic_integral(double x0, double x1, double x2, double f0, double f1, double f2,
                          double a, double b) {
    // Newton form around x1: p(x) = f1 + c1 (x - x1) + c2 (x - x1)^2.
    const double d01 = (f1 - f0) / (x1 - x0);
    const double d12 = (f2 - f1) / (x2 - x1);
    const double c2 = (d12 - d01) / (x2 - x0);
    const double c1 = d01 + c2 * (x1 - x0);
    auto prim = [&](double x) {
        const double s = x - x1;
        return f1 * s + 0.5 * c1 * s * s + c2 * s * s * s / 3.0;
    };
    return prim(b) - prim(a);
}

double simpson(std::span<const double> x, std::span<const double> f) {
    const auto c = cumulative_simpson(x, f);
    return c.empty() ? 0.0 : c.back();
}

std::vector<double> cumulative_simpson(std::span<const double> x, std::span<const double> f) {
    const std::size_t n = x.size();
    if (f.size() != n) throw std::invalid_argument("cumulative_simpson: size mismatch");
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    if (n == 2) {
        out[1] = 0.5 * (x[1] - x[0]) * (f[0] + f[1]);
        return out;
    }
    for (std::size_t j = 2; j < n; j += 2) {
        out[j] = out[j - 2] +
                 quadratic_integral(x[j - 2], x[j - 1], x[j], f[j - 2], f[j - 1], f[j], x[j - 2], x[j]);
    }
    for (std::size_t j = 1; j < n; j += 2) {
        if (j + 1 < n) {
            out[j] = out[j - 1] + quadratic_integral(x[j - 1], x[j], x[j + 1], f[j - 1], f[j],
                                                     f[j + 1], x[j - 1], x[j]);
        } else {
            out[j] = out[j - 1] + quadratic_integral(x[j - 2], x[j - 1], x[j], f[j - 2], f[j - 1],
                                                     f[j], x[j - 1], x[j]);
        }
    }
    return out;
}

}  // namespace catlab::quad
