#include <doctest.h>

#include <cmath>
#include <numbers>

#include "catlab/error.hpp"
#include "catlab/model.hpp"
#include "catlab/reference.hpp"
#include "catlab/spectral.hpp"

using namespace catlab;
using namespace catlab::reference;
using doctest::Approx;

TEST_CASE("cylinder right-hand side") {
    CHECK(cylinder_rhs({0.0, 1.0, 0.0}).dR_dot == Approx(-1.0));
    const auto d = cylinder_rhs({0.5, std::cos(0.5), -std::sin(0.5)});
    CHECK(d.dR == Approx(-std::sin(0.5)));
    CHECK(d.dR_dot == Approx(-std::cos(0.5)));
    CHECK_THROWS_AS(cylinder_rhs({0.0, 0.0, -1.0}), CollapseSignal);
}

TEST_CASE("cylinder collapse") {
    const auto run = cylinder_evolve({0.0, 1.0, 0.0}, 1e-4, 3.0);
    REQUIRE(run.collapsed);
    CHECK(run.collapse_time == Approx(std::numbers::pi / 2.0).epsilon(1e-9));
    for (const auto& s : run.trajectory) {
        if (s.t > 1.5) break;
        CHECK(std::abs(s.R - std::cos(s.t)) < 1e-8);
        // First integral of the exact family R = R0 cos(t / R0).
        CHECK(s.R_dot * s.R_dot == Approx(1.0 - s.R * s.R).scale(1.0).epsilon(1e-10));
    }
    const auto big = cylinder_evolve({0.0, 2.0, 0.0}, 1e-4, 5.0);
    REQUIRE(big.collapsed);
    CHECK(big.collapse_time == Approx(std::numbers::pi).epsilon(1e-8));

    const auto none = cylinder_evolve({0.0, 1.0, 0.0}, 1e-3, 1.0, 1e-6, 10);
    CHECK_FALSE(none.collapsed);
    CHECK(none.trajectory.back().t == Approx(1.0));
    CHECK(none.trajectory.size() == 101);
}

TEST_CASE("family graph of the standard catenoid is zero") {
    const Grid g(20.0, 201);
    const auto fam = family_graph({1.0, 0.0}, g);
    CHECK(fam.valid_count == g.size());
    for (double v : fam.state.phi) CHECK(std::abs(v) < 1e-13);
    CHECK_THROWS_AS(family_graph({1.0, 0.5}, g), DomainError);
}

TEST_CASE("family members solve the static equation") {
    const Grid g(40.0, 801);
    const auto fam = family_graph({1.05, 0.0}, g);
    REQUIRE(fam.valid_count > 0);
    CHECK(fam.state.phi[0] == Approx(0.05));
    CHECK(fam.state.representation == Representation::Physical);
    for (std::size_t i = 0; i < fam.valid_count; ++i) {
        const model::JetPoint j{g.node(i), fam.state.phi[i], 0.0, fam.phi_y[i], 0.0, 0.0, fam.phi_yy[i]};
        CHECK(std::abs(model::equation_residual(j)) < 1e-10);
        CHECK(fam.state.pi[i] == 0.0);
    }
    // The inverted point lies on r = a cosh(z / a).
    double phi = 0.0;
    REQUIRE(invert_normal_line(1.05, 2.0, 0.05, phi));
    const auto p = geometry::graph_embed(2.0, 0.0, phi);
    CHECK(p.r == Approx(1.05 * std::cosh(p.z / 1.05)).epsilon(1e-12));
}

TEST_CASE("family derivative in the scaling parameter is the scaling zero mode") {
    const Grid g(10.0, 101);
    const double step = 1e-3;
    const auto plus = family_graph({1.0 + step, 0.0}, g);
    const auto minus = family_graph({1.0 - step, 0.0}, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double y = g.node(i);
        const double d = std::sqrt(japanese(y)) * (plus.state.phi[i] - minus.state.phi[i]) / (2.0 * step);
        // Orientation: the kernel element is fixed with value -1 at the collar.
        CHECK(d == Approx(-spectral::zero_mode_scaling(y)).epsilon(1e-4).scale(1.0));
    }
}
