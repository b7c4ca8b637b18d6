#include <algorithm>
#include <cmath>
#include <random>

#include "catlab/cli.hpp"
#include "catlab/error.hpp"
#include "catlab/evolution.hpp"
#include "catlab/model.hpp"
#include "catlab/oracle.hpp"
#include "catlab/spectral.hpp"
#include "catlab/taylor.hpp"

namespace catlab::cli {

namespace {

model::JetPoint jet_from(const Taylor2& f, double y) {
    return {y, f.d(0, 0), f.d(1, 0), f.d(0, 1), f.d(2, 0), f.d(1, 1), f.d(0, 2)};
}

CheckResult null_identity_check(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double t0 = u(rng), y0 = 2.0 * u(rng);
        const Taylor2 t = Taylor2::t_var(t0), y = Taylor2::y_var(y0);
        const double a1 = u(rng), a2 = u(rng), a3 = u(rng), a4 = u(rng);
        const Taylor2 phi = sin(a1 * t + a2 * y) * exp(a3 * y - a4 * t);
        const Taylor2 psi = (k % 2 == 0) ? phi : cos(a2 * t - a3 * y) * exp(a1 * t * y);
        const Taylor2 pt = phi.dt(), py = phi.dy(), qt = psi.dt();
        model::NullDivergences div;
        div.dt_phit2_psit = (pt * pt * qt).dt().value();
        div.dy_phiy_phit_psit = (py * pt * qt).dy().value();
        div.dt_phiy2_psit = (py * py * qt).dt().value();
        const auto a = jet_from(phi, y0), b = jet_from(psi, y0);
        const double scale = std::abs(a.phi_t * a.phi_t * b.phi_yy) +
                             std::abs(2.0 * a.phi_y * a.phi_t * b.phi_ty) +
                             std::abs(a.phi_y * a.phi_y * b.phi_tt) + std::abs(div.dt_phit2_psit) +
                             2.0 * std::abs(div.dy_phiy_phit_psit) + std::abs(div.dt_phiy2_psit) + 1e-300;
        worst = std::max(worst, std::abs(model::null_identity_defect(a, b, div)) / scale);
    }
    return {"null_identity_defect", worst, 1e-10, worst < 1e-10};
}

model::JetPoint random_jet(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> e(-0.3, 0.3), yy(0.0, 5.0);
    return {yy(rng), e(rng), e(rng), e(rng), e(rng), e(rng), e(rng)};
}

CheckResult lagrangian_check(std::mt19937_64& rng) {
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const auto j = random_jet(rng);
        const double scale = 1.0 + std::abs(model::equation_residual(j));
        worst = std::max(worst, std::abs(model::lagrangian_oracle_defect(j)) / scale);
    }
    return {"lagrangian_oracle_defect", worst, 1e-10, worst < 1e-10};
}

CheckResult euler_lagrange_check(std::mt19937_64& rng) {
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const auto j = random_jet(rng);
        const double scale = 1.0 + std::abs(model::equation_residual(j));
        worst = std::max(worst, std::abs(model::euler_lagrange_defect(j)) / scale);
    }
    return {"euler_lagrange_defect", worst, 1e-10, worst < 1e-10};
}

std::vector<CheckResult> zero_mode_checks() {
    const double window = 20.0, h = 5e-3;
    const Grid grid(window + 10.0, static_cast<std::size_t>(std::lround((window + 10.0) / h)) + 1);
    const auto modes = spectral::zero_modes(grid);
    std::vector<CheckResult> out;
    const std::pair<const char*, const std::vector<double>*> items[] = {
        {"zero_mode_scaling_annihilation", &modes.scaling},
        {"zero_mode_translation_annihilation", &modes.translation}};
    const Parity parities[] = {Parity::Even, Parity::Odd};
    for (int k = 0; k < 2; ++k) {
        const auto& f = *items[k].second;
        const auto Lf = spectral::apply_L(f, grid, parities[k]);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < grid.size() && grid.node(i) <= window; ++i) {
            num = std::max(num, std::abs(Lf[i]));
            den = std::max(den, std::abs(f[i]));
        }
        out.push_back({items[k].first, num / den, 1e-6, num / den < 1e-6});
    }
    return out;
}

CheckResult rhs_oracle_check() {
    // Fourth-order scheme against the second-order oracle on two grids: the
    // gap must be small and shrink like h^2.
    double gaps[2];
    const std::size_t sizes[2] = {1001, 2001};
    for (int k = 0; k < 2; ++k) {
        const Grid grid(20.0, sizes[k]);
        evolution::EvolutionConfig cfg;
        evolution::Evolver ev(grid, cfg);
        FieldState s;
        s.phi = grid.sample([](double y) { return 0.05 * std::exp(-y * y / 4.0) * (1.0 + 0.3 * y * y); });
        s.pi = grid.sample([](double y) { return 0.04 * std::exp(-y * y / 3.0) * std::cos(y); });
        const auto oracle_pi_t = oracle::second_order_pi_t(s, grid);
        std::vector<double> dphi(grid.size()), dpi(grid.size());
        ev.rhs(s, dphi, dpi);
        double gap = 0.0;
        for (std::size_t i = 0; grid.node(i) <= 15.0; ++i) gap = std::max(gap, std::abs(dpi[i] - oracle_pi_t[i]));
        gaps[k] = gap;
    }
    const double ratio = gaps[0] / gaps[1];
    const bool pass = gaps[1] < 1e-5 && ratio > 3.0 && ratio < 5.0;
    return {"rhs_second_order_oracle", gaps[1], 1e-5, pass};
}

}  // namespace

std::vector<CheckResult> verification_suite(unsigned seed) {
    std::mt19937_64 rng(seed);
    std::vector<CheckResult> out;
    out.push_back(null_identity_check(rng));
    out.push_back(lagrangian_check(rng));
    out.push_back(euler_lagrange_check(rng));
    for (auto& c : zero_mode_checks()) out.push_back(c);
    out.push_back(rhs_oracle_check());
    return out;
}

}  // namespace catlab::cli
