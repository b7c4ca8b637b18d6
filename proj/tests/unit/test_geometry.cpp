#include <doctest.h>

#include <cmath>

#include "catlab/error.hpp"
#include "catlab/geometry.hpp"
#include "catlab/grid.hpp"

using namespace catlab;
using namespace catlab::geometry;
using doctest::Approx;

TEST_CASE("catenoid embedding") {
    const auto p = catenoid_embed({1.0, 0.0}, 0.0, 0.0);
    CHECK(p.r == Approx(1.0));
    CHECK(p.z == Approx(0.0));
    const auto q = catenoid_embed({2.0, 1.0}, 2.0, 0.3);
    CHECK(q.r == Approx(2.0 * std::sqrt(2.0)));
    CHECK(q.z == Approx(1.0 + 2.0 * std::asinh(1.0)));
    // Every member satisfies r = a cosh((z - b) / a).
    CHECK(q.r == Approx(2.0 * std::cosh((q.z - 1.0) / 2.0)));
    CHECK_THROWS_AS(catenoid_embed({0.0, 0.0}, 1.0, 0.0), DomainError);
}

TEST_CASE("graph chart displaces along the unit normal") {
    const double y = 1.3, phi = 0.2;
    const auto base = graph_embed(y, 0.0, 0.0);
    const auto moved = graph_embed(y, 0.0, phi);
    const double dr = moved.r - base.r, dz = moved.z - base.z;
    // Displacement is phi along the unit normal, perpendicular to the generator (y, 1) / <y>.
    CHECK(std::hypot(dr, dz) == Approx(phi));
    CHECK(dr * y + dz * 1.0 == Approx(0.0).epsilon(1e-14));
    CHECK_THROWS_AS(graph_embed(0.0, 0.0, 1.0), RegularityViolation);
    CHECK_THROWS_AS(graph_embed(0.0, 0.0, 0.96, 0.05), RegularityViolation);
    CHECK_NOTHROW(graph_embed(0.0, 0.0, 0.94, 0.05));
}

TEST_CASE("pull-back metric on the catenoid") {
    const auto g = pullback_metric(2.0, 0.0, 0.0, 0.0);
    CHECK(g[0][0] == -1.0);
    CHECK(g[1][1] == Approx(1.0));
    CHECK(g[2][2] == Approx(5.0));
    CHECK(lorentzian_check(g));
    // A fast-moving sheet (|phi_t| > 1) stops being timelike.
    CHECK_FALSE(lorentzian_check(pullback_metric(0.5, 0.0, 1.2, 0.0)));
    const auto e = symmetric_eigenvalues({{{2.0, 1.0, 0.0}, {1.0, 2.0, 0.0}, {0.0, 0.0, -1.0}}});
    CHECK(e[0] == Approx(-1.0));
    CHECK(e[1] == Approx(1.0));
    CHECK(e[2] == Approx(3.0));
}
