#pragma once

#include <cstddef>
#include <vector>

#include "catlab/field.hpp"
#include "catlab/geometry.hpp"
#include "catlab/grid.hpp"

namespace catlab::reference {

// -- collapsing cylinder  R R'' = -1 + R'^2 --------------------------------

struct CylinderState {
    double t = 0.0;
    double R = 1.0;
    double R_dot = 0.0;
};

struct CylinderDerivative {
    double dR;
    double dR_dot;
};

/// Throws CollapseSignal if R <= 0.
CylinderDerivative cylinder_rhs(const CylinderState& s);

struct CylinderRun {
    std::vector<CylinderState> trajectory;
    bool collapsed = false;
    double collapse_time = 0.0;  ///< extrapolated t + R / |R'| at the last state
};

/// Classical RK4 until R < r_min, a stage reaches R <= 0, or t_max.
/// Every `record_stride`-th step is stored, plus the first and last states.
CylinderRun cylinder_evolve(CylinderState s0, double dt, double t_max, double r_min = 1e-6,
                            std::size_t record_stride = 1);

// -- static catenoid-family members as normal graphs ------------------------

struct FamilyGraph {
    FieldState state;             ///< physical representation, pi = 0
    std::vector<double> phi_y;    ///< by implicit differentiation of the inversion
    std::vector<double> phi_yy;
    std::size_t valid_count = 0;  ///< nodes [0, valid_count) were inverted
    double valid_y_max = 0.0;
};

/// Expresses the (a, 0) catenoid r = a cosh(z / a) as a graph over the
/// standard catenoid by solving along each normal line. Nodes past the first
/// inversion failure are left at zero and excluded from the validity window.
FamilyGraph family_graph(const geometry::CatenoidParams& p, const Grid& grid, double margin = 0.05);

/// Single-node inversion; returns false if no root exists inside the chart.
bool invert_normal_line(double a, double y, double margin, double& phi);

}  // namespace catlab::reference
