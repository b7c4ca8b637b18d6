#include "catlab/stencil.hpp"

#include <stdexcept>

namespace catlab::stencil {

namespace {

void check_sizes(std::size_t a, std::size_t b) {
    if (a != b || a < 6) throw std::invalid_argument("stencil: size mismatch or grid too small");
}

}  // namespace

void d1_into(std::span<const double> f, double h, Parity parity, std::span<double> out) {
    check_sizes(f.size(), out.size());
    const long n = static_cast<long>(f.size());
    const double c = 1.0 / (12.0 * h);
    for (long i = 0; i < 2; ++i) {
        out[i] = c * (reflected(f, i - 2, parity) - 8.0 * reflected(f, i - 1, parity) +
                      8.0 * f[i + 1] - f[i + 2]);
    }
    for (long i = 2; i < n - 2; ++i) {
        out[i] = c * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
    }
    long i = n - 2;
    out[i] = c * (3.0 * f[i + 1] + 10.0 * f[i] - 18.0 * f[i - 1] + 6.0 * f[i - 2] - f[i - 3]);
    i = n - 1;
    out[i] = c * (25.0 * f[i] - 48.0 * f[i - 1] + 36.0 * f[i - 2] - 16.0 * f[i - 3] +
                  3.0 * f[i - 4]);
}

void d2_into(std::span<const double> f, double h, Parity parity, std::span<double> out) {
    check_sizes(f.size(), out.size());
    const long n = static_cast<long>(f.size());
    const double c = 1.0 / (12.0 * h * h);
    for (long i = 0; i < 2; ++i) {
        out[i] = c * (-reflected(f, i - 2, parity) + 16.0 * reflected(f, i - 1, parity) -
                      30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]);
    }
    for (long i = 2; i < n - 2; ++i) {
        out[i] = c * (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]);
    }
    long i = n - 2;
    out[i] = c * (10.0 * f[i + 1] - 15.0 * f[i] - 4.0 * f[i - 1] + 14.0 * f[i - 2] -
                  6.0 * f[i - 3] + f[i - 4]);
    i = n - 1;
    out[i] = c * (45.0 * f[i] - 154.0 * f[i - 1] + 214.0 * f[i - 2] - 156.0 * f[i - 3] +
                  61.0 * f[i - 4] - 10.0 * f[i - 5]);
}

std::vector<double> d1(std::span<const double> f, const Grid& grid, Parity parity) {
    std::vector<double> out(f.size());
    d1_into(f, grid.spacing(), parity, out);
    return out;
}

std::vector<double> d2(std::span<const double> f, const Grid& grid, Parity parity) {
    std::vector<double> out(f.size());
    d2_into(f, grid.spacing(), parity, out);
    return out;
}

}  // namespace catlab::stencil
