#include "catlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "catlab/error.hpp"

namespace catlab {

Grid::Grid(double y_max, std::size_t n) : y_max_(y_max), n_(n) {
    if (!(y_max > 0.0) || !std::isfinite(y_max))
        throw DomainError("grid: y_max must be positive and finite");
    if (n < min_nodes)
        throw DomainError("grid: need at least " + std::to_string(min_nodes) + " nodes");
    h_ = y_max / static_cast<double>(n - 1);
    nodes_.resize(n);
    for (std::size_t i = 0; i < n; ++i) nodes_[i] = static_cast<double>(i) * h_;
    nodes_.back() = y_max;
}

std::size_t Grid::index_at_or_below(double y) const noexcept {
    if (y <= 0.0) return 0;
    auto i = static_cast<std::size_t>(std::floor(y / h_ + 1e-12));
    return std::min(i, n_ - 1);
}

std::vector<double> Grid::sample(double (*f)(double)) const {
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = f(nodes_[i]);
    return out;
}

}  // namespace catlab
