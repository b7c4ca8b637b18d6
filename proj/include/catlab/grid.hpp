#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace catlab {

/// Reflection symmetry of a sampled field about y = 0.
enum class Parity { Even, Odd };

/// <u> = sqrt(1 + u^2).
inline double japanese(double u) noexcept { return std::sqrt(1.0 + u * u); }

/// Uniform half-line grid y_i = i h on [0, y_max]. Values at y < 0 are
/// reconstructed by parity reflection; the right end uses one-sided stencils.
class Grid {
public:
    static constexpr int ghost_width = 2;
    static constexpr std::size_t min_nodes = 16;

    Grid(double y_max, std::size_t n);

    double y_max() const noexcept { return y_max_; }
    std::size_t size() const noexcept { return n_; }
    double spacing() const noexcept { return h_; }
    double node(std::size_t i) const noexcept { return static_cast<double>(i) * h_; }
    std::span<const double> nodes() const noexcept { return nodes_; }

    /// Largest node index with y_i <= y (clamped to the grid).
    std::size_t index_at_or_below(double y) const noexcept;

    std::vector<double> sample(double (*f)(double)) const;
    template <class F>
    std::vector<double> sample(F&& f) const {
        std::vector<double> out(n_);
        for (std::size_t i = 0; i < n_; ++i) out[i] = f(nodes_[i]);
        return out;
    }

    bool operator==(const Grid& other) const noexcept {
        return n_ == other.n_ && y_max_ == other.y_max_;
    }

private:
    double y_max_;
    std::size_t n_;
    double h_;
    std::vector<double> nodes_;
};

}  // namespace catlab
