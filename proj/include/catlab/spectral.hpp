#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "catlab/grid.hpp"

namespace catlab::spectral {

/// (6 + y^2) / (4 (1 + y^2)^2). The linearized operator is -d^2/dy^2 - V.
double potential(double y) noexcept;

/// Diagnostics of the eigenvalue computation. All values are eigenvalues of
/// the linearized operator (negative numbers).
struct EigenReport {
    double matrix_value = 0.0;     ///< second-order tridiagonal, Sturm bisection
    double shooting_value = 0.0;   ///< Numerov shooting refinement
    double fd4_value = 0.0;        ///< Rayleigh quotient of the fourth-order operator
    double fd4_residual = 0.0;     ///< || L g + k^2 g || under the quadrature weights
    int negative_count = 0;
    int inverse_iterations = 0;
};

struct SpectralBasis {
    Grid grid;
    std::vector<double> g_d;                    ///< positive, even, unit norm
    double k_d_sq = 0.0;                        ///< eigenvalue is -k_d_sq
    std::vector<double> zero_mode_scaling;      ///< even
    std::vector<double> zero_mode_translation;  ///< odd
    std::vector<double> quad_weights;
    EigenReport report;

    double k_d() const noexcept { return std::sqrt(k_d_sq); }
};

/// Unique negative eigenpair of the Neumann problem on [0, y_max] with a
/// Dirichlet wall at y_max. Requires y_max >= 20.
/// Throws SpectralError (DomainTooSmall / Discretization / NoConvergence).
SpectralBasis ground_state(const Grid& grid, double tolerance = 1e-12);

struct ZeroModes {
    std::vector<double> scaling;
    std::vector<double> translation;
};

double zero_mode_scaling(double y) noexcept;
double zero_mode_translation(double y) noexcept;
ZeroModes zero_modes(const Grid& grid);

/// -f'' - V f with fourth-order differences and parity-aware ghosts.
std::vector<double> apply_L(std::span<const double> f, const Grid& grid,
                            Parity parity = Parity::Even);
void apply_L_into(std::span<const double> f, const Grid& grid, Parity parity,
                  std::span<double> out);

struct DiscreteProjection {
    double h = 0.0;
    std::vector<double> component;
};

DiscreteProjection project_d(std::span<const double> f, const SpectralBasis& basis,
                             Parity parity = Parity::Even);
std::vector<double> project_c(std::span<const double> f, const SpectralBasis& basis,
                              Parity parity = Parity::Even);

/// Number of eigenvalues below `lambda` of the second-order tridiagonal
/// Neumann/Dirichlet discretization (Sturm sequence).
int count_below(const Grid& grid, double lambda);

/// Lowest eigenvalue of the tridiagonal discretization by Sturm bisection.
double tridiagonal_lowest(const Grid& grid, double tolerance);

/// Lowest eigenvalue by Numerov shooting from y = 0 (even data) with a
/// Dirichlet wall at y_max.
double shooting_lowest(double y_max, std::size_t steps, double lo, double hi, double tolerance);

/// <f, L f> / <f, f> under the line quadrature, with the Dirichlet-wall
/// fourth-order operator used for the eigenproblem.
double rayleigh_quotient(std::span<const double> f, const Grid& grid,
                         Parity parity = Parity::Even);

/// Fourth-order operator with an odd-reflection wall at y_max (f = 0 at the
/// last node); W-self-adjoint under the line quadrature weights.
std::vector<double> apply_L_dirichlet(std::span<const double> f, const Grid& grid,
                                      Parity parity = Parity::Even);

}  // namespace catlab::spectral
