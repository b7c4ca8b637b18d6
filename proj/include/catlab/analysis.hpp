#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "catlab/evolution.hpp"
#include "catlab/field.hpp"
#include "catlab/grid.hpp"
#include "catlab/spectral.hpp"

namespace catlab::analysis {

// -- vector fields -----------------------------------------------------------

struct GammaFields {
    std::vector<double> gamma1;  ///< t phi~_y + y pi~      (boost)
    std::vector<double> gamma2;  ///< t pi~ + y phi~_y      (scaling)
};

GammaFields gamma_fields(const FieldState& s, const Grid& grid);

// -- norms -------------------------------------------------------------------

struct NormConfig {
    double sigma = 0.5;   ///< exponent of <y>^{-sigma} in sup_weighted, in [1/2, 1]
    int max_order = 2;    ///< derivative cap for energy and gamma2 norms (<= 2)
    bool gamma = true;    ///< compute gamma2 norms (costs extra right-hand sides)
};

/// Column order of a NormSeries row.
const std::vector<std::string>& norm_ids();

/// Column indices, e.g. row[Col::sup_phys].
struct Col {
    enum : std::size_t {
        energy_0, energy_1, energy_2, sup_phys, sup_weighted, local_energy_rate, local_energy,
        gamma2_0, gamma2_1, gamma2_2, count
    };
};

/// One row of norms at the state's time. local_energy (running space-time
/// integral) is left at zero; NormTracker accumulates it.
std::vector<double> norms(const FieldState& s, const evolution::Evolver& ev, const NormConfig& cfg);

struct NormSeries {
    std::vector<double> times;
    std::vector<std::vector<double>> rows;

    std::vector<double> column(std::size_t c) const;
    void append(double t, std::vector<double> row);
};

/// Observer computing norms on every snapshot it sees.
class NormTracker {
public:
    NormTracker(const evolution::Evolver& ev, NormConfig cfg) : ev_(&ev), cfg_(cfg) {}
    evolution::Observer observer();
    void record(const FieldState& s);
    const NormSeries& series() const noexcept { return series_; }

private:
    const evolution::Evolver* ev_;
    NormConfig cfg_;
    NormSeries series_;
    double running_ = 0.0;
};

/// Sup norms only, cheap enough for every step.
double sup_physical(const FieldState& s, const Grid& grid);
double sup_weighted(const FieldState& s, const Grid& grid, double sigma);

// -- unstable mode -----------------------------------------------------------

struct ModeTrajectory {
    std::vector<double> times;
    std::vector<double> h;          ///< <phi~, g_d>
    std::vector<double> h_dot;      ///< <pi~, g_d>
    std::vector<double> forcing;    ///< <<y>^{1/2} F, g_d>; -h'' + k_d^2 h = forcing
    std::vector<double> h_duhamel;  ///< filled by duhamel_h
    std::vector<double> sup_phys;   ///< |phi|_inf alongside, for fate decisions
};

/// Observer recording the mode trajectory. With `with_forcing` false the
/// forcing column stays zero (saves one right-hand side per snapshot).
class ModeTracker {
public:
    ModeTracker(const evolution::Evolver& ev, const spectral::SpectralBasis& basis,
                bool with_forcing = true)
        : ev_(&ev), basis_(&basis), with_forcing_(with_forcing) {}
    evolution::Observer observer();
    void record(const FieldState& s);
    const ModeTrajectory& trajectory() const noexcept { return mode_; }
    ModeTrajectory& trajectory() noexcept { return mode_; }

private:
    const evolution::Evolver* ev_;
    const spectral::SpectralBasis* basis_;
    bool with_forcing_;
    ModeTrajectory mode_;
};

ModeTrajectory mode_trajectory(const evolution::Trajectory& traj, const spectral::SpectralBasis& basis,
                               const evolution::Evolver& ev);

/// Variation of constants for -h'' + k^2 h = forcing with h(0) = a + p1,
/// h'(0) = p2; time integrals by cumulative Simpson over the recorded forcing.
std::vector<double> duhamel_h(const ModeTrajectory& mode, double a, double p1, double p2, double k_d);

// -- decay fits ---------------------------------------------------------------

struct DecayFit {
    double exponent = 0.0;
    double stderr_ = 0.0;
    double prefactor = 0.0;
    std::size_t samples = 0;
};

/// Least-squares slope of log(value) against log(t) over [t0, t1].
/// Requires t1 > 2 t0 > 0 and at least `min_samples` samples in the window;
/// throws FitUndefined otherwise or on non-positive values.
DecayFit fit_decay(std::span<const double> times, std::span<const double> values, double t0, double t1,
                   std::size_t min_samples = 20);

/// Least-squares rate of log|h| against t over the samples in its last
/// e-fold. Empty if fewer than three samples qualify.
std::optional<double> growth_rate(std::span<const double> times, std::span<const double> h);

// -- fate --------------------------------------------------------------------

enum class Fate { Decayed, Collapsed, Widened, Undecided };

std::string to_string(Fate f);

struct FateConfig {
    double h_cap_factor = 10.0;
    double h_cap_offset = 1e-2;
    double rate_tolerance = 0.2;  ///< relative to k_d
    double window_start = 0.25;   ///< decay window as fractions of t_max
    double window_end = 0.9;
};

struct FateReport {
    Fate fate = Fate::Undecided;
    std::optional<double> event_time;
    std::optional<double> decay_exponent;
    std::optional<double> decay_stderr;
    std::optional<double> h_growth_rate;
    evolution::TerminationRecord guard;
};

double h_cap(double h0, const FateConfig& cfg);

/// Observer stopping a run once h exceeds the widening cap.
evolution::Observer widening_stop(const ModeTracker& tracker, double cap);

FateReport classify_fate(const evolution::TerminationRecord& rec, const ModeTrajectory& mode,
                         double k_d, double t_max, const FateConfig& cfg);

/// Window [end / 2.5, end] where end is the earlier of boundary contamination
/// and the first time the unstable component |h| g_d(0) exceeds `share` of
/// sup_phys (after t_min). Returns false if the window is empty.
bool clean_window(const evolution::TerminationRecord& rec, const ModeTrajectory& mode,
                  double g_d0, double& t0, double& t1, double share = 0.1, double t_min = 1.0);

}  // namespace catlab::analysis
