#pragma once

#include <vector>

#include "catlab/grid.hpp"

namespace catlab {

enum class Representation { Physical, Weighted };

/// Cauchy data (phi, d_t phi) at time t on a grid. In the weighted
/// representation the samples are phi~ = <y>^{1/2} phi and its time derivative.
struct FieldState {
    double t = 0.0;
    std::vector<double> phi;
    std::vector<double> pi;
    Representation representation = Representation::Weighted;
    Parity parity = Parity::Even;
};

}  // namespace catlab
