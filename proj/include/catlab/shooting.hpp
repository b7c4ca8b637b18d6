#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "catlab/analysis.hpp"
#include "catlab/error.hpp"
#include "catlab/evolution.hpp"
#include "catlab/field.hpp"
#include "catlab/spectral.hpp"

namespace catlab::shooting {

/// How a single run at amplitude a is classified.
///   Full        nonlinear (or linear) evolution, classify_fate
///   LinearSign  linear flow to t_max; Widened if h(t_max) > 0, Collapsed otherwise
enum class FateRule { Full, LinearSign };

enum class UndecidedPolicy { ExtendTmax, Halt };

struct ShootingConfig {
    double a_lo = -1e-3;
    double a_hi = 1e-3;
    double tol_a = 0.0;  ///< 0 means 1e-12 of the bracket width
    int max_bisections = 40;
    evolution::EvolutionConfig evo;
    analysis::FateConfig fate;
    FateRule rule = FateRule::Full;
    UndecidedPolicy undecided = UndecidedPolicy::ExtendTmax;
    int max_extensions = 3;
    double extension_factor = 1.5;
    bool threshold_run = true;  ///< rerun at a* with mode tracking and a decay fit
    double unstable_share = 0.1;
};

struct IterationRecord {
    int iteration = 0;  ///< 0 for bracket endpoints
    double a = 0.0;
    analysis::Fate fate = analysis::Fate::Undecided;
    std::optional<double> event_time;
    double t_end = 0.0;
    int extensions = 0;
};

struct ThresholdRun {
    analysis::FateReport report;
    double window_t0 = 0.0;
    double window_t1 = 0.0;
    analysis::ModeTrajectory mode;
};

struct ShootingResult {
    double a_star = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double initial_width = 0.0;
    analysis::FateReport fate_lo;
    analysis::FateReport fate_hi;
    std::optional<ThresholdRun> threshold;
    int iterations = 0;
    bool converged = false;
    std::vector<IterationRecord> log;
    std::vector<std::string> warnings;  ///< monotonicity violations and extensions
};

/// Endpoint fates coincide.
class BracketInvalid : public Error {
public:
    BracketInvalid(analysis::FateReport lo, analysis::FateReport hi, const std::string& what)
        : Error(what), lo_(std::move(lo)), hi_(std::move(hi)) {}
    const analysis::FateReport& lo() const noexcept { return lo_; }
    const analysis::FateReport& hi() const noexcept { return hi_; }

private:
    analysis::FateReport lo_, hi_;
};

/// Every attempt (including extensions) stayed Undecided.
class Inconclusive : public Error {
public:
    using Error::Error;
};

struct RunOutcome {
    analysis::FateReport report;
    double t_end = 0.0;
    int extensions = 0;
};

/// Evolves base + a g_d (weighted) and classifies it.
RunOutcome run_fate(const FieldState& base, double a, const spectral::SpectralBasis& basis,
                    const ShootingConfig& cfg);

/// Bisection on a over [a_lo, a_hi] for fixed P_c data `base` (its g_d
/// component is kept; a is added on top).
ShootingResult shoot(const FieldState& base, const spectral::SpectralBasis& basis, const ShootingConfig& cfg);

/// Threshold run at amplitude a with mode tracking and the clean-window fit.
ThresholdRun threshold_run(const FieldState& base, double a, const spectral::SpectralBasis& basis,
                           const ShootingConfig& cfg);

/// sqrt(|phi~|^2 + |phi~_y|^2 + |pi~|^2) over the line.
double data_norm(const FieldState& s, const Grid& grid);

struct LipschitzProbe {
    double delta = 0.0;
    double a_star = 0.0;
    double delta_a_star = 0.0;
    double ratio = 0.0;  ///< delta_a_star / delta (0 for delta = 0)
};

/// Re-shoots base + delta * direction / |direction| for each delta, in
/// parallel on up to `threads` workers. `base_a_star` is the unperturbed threshold.
std::vector<LipschitzProbe> lipschitz_probe(const FieldState& base, const FieldState& direction,
                                            double base_a_star, const std::vector<double>& deltas,
                                            const spectral::SpectralBasis& basis,
                                            const ShootingConfig& cfg, unsigned threads = 0);

}  // namespace catlab::shooting
