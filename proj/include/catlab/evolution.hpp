#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "catlab/field.hpp"
#include "catlab/grid.hpp"
#include "catlab/spectral.hpp"

namespace catlab::evolution {

enum class Boundary { Outgoing, Frozen };

struct EvolutionConfig {
    double cfl = 0.25;
    double t_max = 10.0;
    double hyperbolicity_floor = 1e-6;
    double regularity_margin = 0.05;
    Boundary boundary = Boundary::Outgoing;
    bool linear_only = false;
    std::size_t snapshot_stride = 1;
    /// Stop when the causal cone of the data reaches y_max - boundary_buffer.
    bool halt_on_contamination = false;
    double boundary_buffer = 5.0;
    /// Relative level below which samples count as outside the data support.
    double support_threshold = 1e-8;
    /// Remove the g_d component after every step (linear runs only: keeps
    /// roundoff from seeding the exponentially growing mode).
    bool suppress_unstable_mode = false;
    /// Use this step instead of the CFL rule when positive.
    double fixed_dt = 0.0;
};

enum class Guard { Completed, Regularity, Hyperbolicity, BoundaryContamination, Observer };

std::string to_string(Guard g);

struct TerminationRecord {
    Guard guard = Guard::Completed;
    double t = 0.0;
    std::size_t steps = 0;
    std::string message;
    double event_y = 0.0;      ///< node where a guard fired
    double event_value = 0.0;  ///< phi (regularity) or coefficient (hyperbolicity)
    bool contaminated = false;
    double contamination_time = -1.0;  ///< first time the cone reached y_max - buffer
    double initial_support = 0.0;
};

struct StepInfo {
    std::size_t step = 0;
    double dt = 0.0;
    double max_speed = 1.0;
    double front = 0.0;  ///< current causal front y
    bool final = false;
};

/// Called at t = 0, every snapshot_stride steps and once at termination.
/// Returning false stops the run (Guard::Observer).
using Observer = std::function<bool(const FieldState&, const StepInfo&)>;

/// Steps the weighted system
///   d_t phi~ = pi~,
///   d_t pi~  = [phi~_yy + V phi~ - <y>^{1/2}(F0 + f_ty phi_ty + f_yy phi_yy)] / (1 + f_tt)
/// with fourth-order differences and classical RK4.
class Evolver {
public:
    Evolver(Grid grid, EvolutionConfig config, const spectral::SpectralBasis* basis = nullptr);

    const Grid& grid() const noexcept { return grid_; }
    const EvolutionConfig& config() const noexcept { return config_; }
    EvolutionConfig& config() noexcept { return config_; }

    /// Time derivative of a weighted state.
    /// Throws RegularityViolation / HyperbolicityLoss.
    void rhs(const FieldState& s, std::span<double> dphi, std::span<double> dpi) const;

    /// <y>^{1/2} F at every node as realized by the discrete scheme,
    /// i.e. phi~_yy + V phi~ - d_t pi~ (zero on boundary rows).
    std::vector<double> weighted_forcing(const FieldState& s) const;

    /// max(1, largest characteristic speed) over the interior nodes.
    double max_speed(const FieldState& s) const;

    /// CFL step for the current state.
    double stable_dt(const FieldState& s) const;

    /// One RK4 step of size dt; the state is untouched if a guard throws.
    void step(FieldState& s, double dt);

    TerminationRecord evolve(FieldState& s, const std::vector<Observer>& observers = {});

    /// Largest y where |phi~| or |pi~| exceeds support_threshold times its max.
    double support_radius(const FieldState& s) const;

private:
    void filter_unstable_mode(FieldState& s) const;

    Grid grid_;
    EvolutionConfig config_;
    const spectral::SpectralBasis* basis_;
    std::vector<double> y_, w_, w1_, w2_, V_, J_;
    // RK4 stage buffers and stencil scratch, reused across steps.
    mutable std::vector<double> d1phi_, d2phi_, d1pi_;
    std::vector<double> k_phi_[4], k_pi_[4];
    FieldState stage_;
};

/// Stores every observed state.
struct Trajectory {
    std::vector<FieldState> snapshots;
    Observer recorder();
};

}  // namespace catlab::evolution
