#pragma once

#include <span>
#include <vector>

#include "catlab/grid.hpp"

namespace catlab::quad {

/// Weights for integrals over the whole line of even integrands sampled on
/// the half-line grid: trapezoid rule on the reflected grid [-y_max, y_max].
std::vector<double> line_weights(const Grid& grid);

/// <f, g> over the whole line. Mixed-parity products are odd and integrate
/// to exactly zero.
double inner(std::span<const double> f, std::span<const double> g, std::span<const double> w,
             Parity pf = Parity::Even, Parity pg = Parity::Even);

double norm(std::span<const double> f, std::span<const double> w);

/// Integral of the quadratic through (x0,f0), (x1,f1), (x2,f2) over [a, b].
double quadratic_integral(double x0, double x1, double x2, double f0, double f1, double f2,
                          double a, double b);

/// Composite Simpson on (possibly non-uniform) samples; an odd interval count
/// closes with a quadratic fit over the last three samples.
double simpson(std::span<const double> x, std::span<const double> f);

/// Running integral from x[0] to every x[j], Simpson-accurate.
std::vector<double> cumulative_simpson(std::span<const double> x, std::span<const double> f);

}  // namespace catlab::quad
