#include <doctest.h>

#include <cmath>
#include <random>

#include "catlab/error.hpp"
#include "catlab/model.hpp"

using namespace catlab;
using namespace catlab::model;
using doctest::Approx;

namespace {

// Second transcription of the nonlinearity, written against powers of
// <y> = sqrt(1 + y^2) rather than of 1 + y^2.
NonlinearTerms transcribe(const JetPoint& j) {
    const double b = std::sqrt(1.0 + j.y * j.y);
    auto jb = [b](int k) { return std::pow(b, k); };
    const double p = j.phi, pt = j.phi_t, py = j.phi_y;
    NonlinearTerms t;
    t.q2 = -2.0 * p / jb(2) * j.phi_tt;
    t.q3 = p * p / jb(4) * j.phi_yy + pt * pt * j.phi_yy - 2.0 * pt * py * j.phi_ty + py * py * j.phi_tt;
    t.q4 = p * p / jb(4) *
           ((2.0 * p / jb(2) - p * p / jb(4) - py * py) * j.phi_tt + 2.0 * py * pt * j.phi_ty - pt * pt * j.phi_yy);
    t.s2 = 4.0 * p * p / jb(6) + 4.0 * j.y * p * py / jb(4) - py * py / jb(2);
    t.s3 = j.y * p * p / jb(6) * py - 2.0 * std::pow(p, 3) / jb(8) - (3.0 * p / jb(4) + j.y * py / jb(2)) * py * py +
           (2.0 * p / jb(4) + j.y * py / jb(2)) * pt * pt;
    t.s4 = -(4.0 * j.y * p / jb(4) + j.y * p * p / jb(6)) * py * pt * pt -
           (4.0 * p * p / jb(6) - 2.0 * std::pow(p, 3) / jb(8)) * pt * pt;
    return t;
}

JetPoint random_jet(std::mt19937_64& rng, double amp = 0.3) {
    std::uniform_real_distribution<double> c(-amp, amp), y(-4.0, 4.0);
    return {y(rng), c(rng), c(rng), c(rng), c(rng), c(rng), c(rng)};
}

}  // namespace

TEST_CASE("nonlinearity matches an independent transcription term by term") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 500; ++k) {
        const JetPoint j = random_jet(rng);
        const auto a = nonlinearity_terms(j);
        const auto b = transcribe(j);
        CHECK(a.q2 == Approx(b.q2).epsilon(1e-13));
        CHECK(a.q3 == Approx(b.q3).epsilon(1e-13));
        CHECK(a.q4 == Approx(b.q4).epsilon(1e-12));
        CHECK(a.s2 == Approx(b.s2).epsilon(1e-13));
        CHECK(a.s3 == Approx(b.s3).epsilon(1e-12));
        CHECK(a.s4 == Approx(b.s4).epsilon(1e-12));
    }
}

TEST_CASE("homogeneity of the nonlinear pieces") {
    std::mt19937_64 rng(5);
    const JetPoint j = random_jet(rng);
    JetPoint s = j;
    const double lam = 1e-3;
    s.phi *= lam, s.phi_t *= lam, s.phi_y *= lam, s.phi_tt *= lam, s.phi_ty *= lam, s.phi_yy *= lam;
    const auto a = nonlinearity_terms(j), b = nonlinearity_terms(s);
    CHECK(b.q2 == Approx(lam * lam * a.q2));
    CHECK(b.s2 == Approx(lam * lam * a.s2));
    CHECK(b.q3 == Approx(lam * lam * lam * a.q3));
    CHECK(std::abs(b.q4) <= 1.01 * std::pow(lam, 4) * std::abs(a.q4) + 1e-30);
}

TEST_CASE("linear part of the residual") {
    // phi = t y: only the potential and the first-order term act.
    const JetPoint j{2.0, 1e-9 * 0.6, 1e-9 * 2.0, 1e-9 * 0.3, 0.0, 1e-9, 0.0};
    const double lin = 2.0 / 5.0 * j.phi_y + 2.0 / 25.0 * j.phi + j.phi_yy - j.phi_tt;
    CHECK(equation_residual(j) == Approx(lin).epsilon(1e-8));
    CHECK(equation_residual(JetPoint{1.0}) == 0.0);
}

TEST_CASE("residual is affine in the second derivatives") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 200; ++k) {
        const JetPoint j = random_jet(rng);
        const auto s = residual_split(j.y, j.phi, j.phi_t, j.phi_y);
        CHECK(s.residual(j.phi_tt, j.phi_ty, j.phi_yy) == Approx(equation_residual(j)).epsilon(1e-12));
        JetPoint solved = j;
        solved.phi_tt = s.solve_tt(j.phi_ty, j.phi_yy);
        CHECK(std::abs(equation_residual(solved)) < 1e-13);

        const auto f = nonlinearity_split(j.y, j.phi, j.phi_t, j.phi_y);
        const double F = f.f0 + f.f_tt * j.phi_tt + f.f_ty * j.phi_ty + f.f_yy * j.phi_yy;
        CHECK(F == Approx(nonlinearity_terms(j).total()).epsilon(1e-12));
    }
}

TEST_CASE("principal coefficient") {
    CHECK(principal_tt_coefficient(0.0, 0.0, 0.0, 0.0) == Approx(-1.0));
    // First-order expansion in phi at fixed zero gradients.
    const double eps = 1e-6;
    CHECK(principal_tt_coefficient(1.0, eps, 0.0, 0.0) == Approx(-1.0 + eps).epsilon(1e-10));
    // |phi| = <y>^2 makes the coefficient vanish.
    CHECK_THROWS_AS(principal_tt_coefficient(0.0, 1.0, 0.0, 0.0), HyperbolicityLoss);
}

TEST_CASE("characteristic speed and Lorentz factor") {
    CHECK(characteristic_speed(3.0, 0.0, 0.0, 0.0) == Approx(1.0));
    CHECK(lorentz_factor(0.0, 0.0, 0.0, 0.0) == Approx(1.0));
    CHECK(lorentz_factor(0.0, 0.0, 2.0, 0.0) < 0.0);
    CHECK(characteristic_speed(0.5, 0.1, 0.2, -0.3) > 0.0);
}

TEST_CASE("weighted representation") {
    const Weight w = weight(2.0);
    const double jb = std::sqrt(5.0);
    CHECK(w.w == Approx(std::sqrt(jb)));
    CHECK(w.w1 == Approx(0.5 * 2.0 / std::pow(5.0, 0.75)));
    CHECK(weighted_potential(0.0) == Approx(1.5));
    CHECK(weighted_potential(1.0) == Approx(7.0 / 16.0));

    std::mt19937_64 rng(8);
    for (int k = 0; k < 100; ++k) {
        const JetPoint j = random_jet(rng);
        const JetPoint back = physical_from_weighted(weighted_from_physical(j));
        CHECK(back.phi == Approx(j.phi));
        CHECK(back.phi_y == Approx(j.phi_y));
        CHECK(back.phi_yy == Approx(j.phi_yy));
        CHECK(back.phi_ty == Approx(j.phi_ty));
        // The weighted equation is the physical one multiplied by the weight.
        const double expect = weight(j.y).w * equation_residual(j);
        CHECK(weighted_equation_residual(weighted_from_physical(j)) == Approx(expect).epsilon(1e-11));
    }
}

TEST_CASE("identity oracles vanish on random jets") {
    std::mt19937_64 rng(21);
    for (int k = 0; k < 300; ++k) {
        const JetPoint a = random_jet(rng), b = random_jet(rng);
        CHECK(std::abs(null_identity_defect(a, b)) < 1e-13);
        CHECK(std::abs(lagrangian_oracle_defect(a)) < 1e-12);
        CHECK(std::abs(euler_lagrange_defect(a)) < 1e-12);
    }
    // The variational form needs a real Lagrangian.
    CHECK_THROWS_AS(lagrangian_oracle_defect(JetPoint{0.0, 0.0, 2.0}), NonLorentzianState);
}

TEST_CASE("euler-lagrange expression is proportional to the residual") {
    std::mt19937_64 rng(4);
    const JetPoint j = random_jet(rng);
    const auto aux = lagrangian_aux(j);
    const double expect = -std::sqrt(1.0 + j.y * j.y) * aux.B * std::pow(aux.K, -1.5) * equation_residual(j);
    CHECK(euler_lagrange_expression(j) == Approx(expect).epsilon(1e-11));
}
