#pragma once

#include <span>
#include <vector>

#include "catlab/grid.hpp"

namespace catlab::stencil {

// Fourth-order finite differences on the half-line grid. Interior nodes use
// five-point central stencils, with ghosts at y < 0 obtained by parity
// reflection. The last two nodes use one-sided fourth-order stencils.

std::vector<double> d1(std::span<const double> f, const Grid& grid, Parity parity);
std::vector<double> d2(std::span<const double> f, const Grid& grid, Parity parity);

/// Writes into preallocated buffers (sizes must match the grid).
void d1_into(std::span<const double> f, double h, Parity parity, std::span<double> out);
void d2_into(std::span<const double> f, double h, Parity parity, std::span<double> out);

/// Value of f at index i in [-2, n-1], reflecting negative indices.
inline double reflected(std::span<const double> f, long i, Parity parity) noexcept {
    if (i >= 0) return f[static_cast<std::size_t>(i)];
    const double v = f[static_cast<std::size_t>(-i)];
    return parity == Parity::Even ? v : -v;
}

}  // namespace catlab::stencil
