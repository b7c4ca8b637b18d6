#include <doctest.h>

#include <cmath>

#include "catlab/initial_data.hpp"
#include "catlab/quadrature.hpp"
#include "catlab/shooting.hpp"

using namespace catlab;
using namespace catlab::shooting;
using doctest::Approx;

namespace {

const spectral::SpectralBasis& basis() {
    static const spectral::SpectralBasis b = spectral::ground_state(Grid(30.0, 601));
    return b;
}

FieldState data(double amp, double v_amp, bool project) {
    DataSpec spec;
    spec.position = {"gaussian", amp, 2.0, project, ""};
    spec.velocity = {"gaussian", v_amp, 1.5, project, ""};
    return initial_data(spec, basis().grid, &basis());
}

}  // namespace

TEST_CASE("linear-sign threshold has the closed form") {
    const auto& b = basis();
    const FieldState base = data(1e-4, -4e-5, false);
    const double p1 = quad::inner(base.phi, b.g_d, b.quad_weights);
    const double p2 = quad::inner(base.pi, b.g_d, b.quad_weights);
    ShootingConfig cfg;
    cfg.rule = FateRule::LinearSign;
    cfg.evo.t_max = 20.0;
    cfg.tol_a = 1e-11;
    cfg.max_bisections = 60;
    const auto res = shoot(base, b, cfg);
    CHECK(res.converged);
    CHECK(res.bracket_hi - res.bracket_lo <= 1e-11);
    CHECK(std::abs(res.a_star - (-p1 - p2 / b.k_d())) <= 1e-11);
    CHECK(res.warnings.empty());
    CHECK_FALSE(res.threshold.has_value());
    REQUIRE(res.log.size() == static_cast<std::size_t>(res.iterations) + 2);
    CHECK(res.log[0].iteration == 0);
    CHECK(res.log[2].a == Approx(0.0).scale(1.0));
}

TEST_CASE("bracket validation") {
    const auto& b = basis();
    const FieldState base = data(1e-4, 0.0, true);
    ShootingConfig cfg;
    cfg.rule = FateRule::LinearSign;
    cfg.evo.t_max = 10.0;
    cfg.a_lo = 1e-4;
    cfg.a_hi = 2e-4;
    CHECK_THROWS_AS(shoot(base, b, cfg), BracketInvalid);
    cfg.a_lo = 3e-4;
    CHECK_THROWS_AS(shoot(base, b, cfg), DomainError);
}

TEST_CASE("nonlinear endpoint fates") {
    const auto& b = basis();
    const FieldState base = data(1e-3, 0.0, true);
    ShootingConfig cfg;
    cfg.evo.t_max = 30.0;
    const auto hi = run_fate(base, 1e-2, b, cfg);
    const auto lo = run_fate(base, -1e-2, b, cfg);
    CHECK(hi.report.fate == analysis::Fate::Widened);
    CHECK(lo.report.fate == analysis::Fate::Collapsed);
    CHECK(lo.report.guard.guard == evolution::Guard::Regularity);
    CHECK(*hi.report.h_growth_rate == Approx(b.k_d()).epsilon(0.2));
}

TEST_CASE("data norm") {
    const Grid g(30.0, 3001);
    FieldState s;
    s.phi = g.sample([](double y) { return std::exp(-y * y / 2.0); });
    s.pi.assign(g.size(), 0.0);
    // |f|^2 = sqrt(pi), |f'|^2 = sqrt(pi) / 2.
    CHECK(data_norm(s, g) == Approx(std::sqrt(1.5 * std::sqrt(M_PI))).epsilon(1e-8));
}

TEST_CASE("Lipschitz probe under the linear rule is exact") {
    const auto& b = basis();
    const FieldState base = data(1e-4, 0.0, false);
    ShootingConfig cfg;
    cfg.rule = FateRule::LinearSign;
    cfg.evo.t_max = 20.0;
    cfg.tol_a = 1e-12;
    cfg.max_bisections = 60;
    const double a0 = shoot(base, b, cfg).a_star;
    FieldState dir = base;
    dir.phi = b.g_d;
    std::fill(dir.pi.begin(), dir.pi.end(), 0.0);
    const double nrm = data_norm(dir, b.grid);
    const auto probes = lipschitz_probe(base, dir, a0, {0.0, 1e-4, 2e-4}, b, cfg, 2);
    REQUIRE(probes.size() == 3);
    CHECK(probes[0].ratio == 0.0);
    // Adding delta g_d / |g_d| shifts the threshold by exactly -delta / |g_d|.
    CHECK(probes[1].ratio == Approx(-1.0 / nrm).epsilon(1e-6));
    CHECK(probes[2].ratio == Approx(-1.0 / nrm).epsilon(1e-6));
}
