#pragma once

#include <array>

namespace catlab::geometry {

/// Member (a, b) of the catenoid family r = a<y/a>, z = b + a asinh(y/a).
/// (1, 0) is the standard catenoid.
struct CatenoidParams {
    double a = 1.0;
    double b = 0.0;
};

/// Cylindrical coordinates (r, z, theta) on R^3, optionally tagged with a time.
struct AmbientPoint {
    double r = 0.0;
    double z = 0.0;
    double theta = 0.0;
    double t = 0.0;
};

/// Symmetric table of pull-back metric coefficients in the (t, y, omega) frame.
using MetricTable = std::array<std::array<double, 3>, 3>;

AmbientPoint catenoid_embed(const CatenoidParams& p, double y, double omega);

/// Normal-graph chart over the standard catenoid. Throws RegularityViolation
/// when |phi| >= (1 - margin) <y>^2.
AmbientPoint graph_embed(double y, double omega, double phi, double margin = 0.0);

MetricTable pullback_metric(double y, double phi, double phi_t, double phi_y);

/// True iff the eigenvalue signature of `metric` is (-, +, +); eigenvalues
/// within `tolerance` of zero count as degenerate.
bool lorentzian_check(const MetricTable& metric, double tolerance = 1e-12);

/// Eigenvalues of a symmetric 3x3 table in ascending order.
std::array<double, 3> symmetric_eigenvalues(const MetricTable& m);

}  // namespace catlab::geometry
