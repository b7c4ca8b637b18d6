#pragma once

#include <vector>

#include "catlab/field.hpp"
#include "catlab/grid.hpp"

namespace catlab::oracle {

/// d_t pi~ of a weighted state by an independent route: second-order central
/// differences of the physical field, and phi_tt obtained from two evaluations
/// of the closed-form residual (which is affine in phi_tt). Boundary rows are
/// left at zero.
std::vector<double> second_order_pi_t(const FieldState& weighted, const Grid& grid);

}  // namespace catlab::oracle
