#pragma once

#include <span>
#include <vector>

#include "catlab/grid.hpp"

namespace catlab::model {

/// Second jet of phi at one point (y, t suppressed).
struct JetPoint {
    double y = 0.0;
    double phi = 0.0;
    double phi_t = 0.0;
    double phi_y = 0.0;
    double phi_tt = 0.0;
    double phi_ty = 0.0;
    double phi_yy = 0.0;
};

/// The six pieces of the nonlinearity F: quasilinear Q2..Q4 and semilinear
/// S2..S4, grouped by homogeneity (quadratic, cubic, quartic-or-more).
struct NonlinearTerms {
    double q2 = 0.0, q3 = 0.0, q4 = 0.0;
    double s2 = 0.0, s3 = 0.0, s4 = 0.0;
    double quasilinear() const noexcept { return q2 + q3 + q4; }
    double semilinear() const noexcept { return s2 + s3 + s4; }
    double total() const noexcept { return quasilinear() + semilinear(); }
};

NonlinearTerms nonlinearity_terms(const JetPoint& j);

/// (-phi_tt + phi_yy + y/<y>^2 phi_y + 2/<y>^4 phi) - F.
double equation_residual(const JetPoint& j);

/// The residual is affine in the second derivatives:
///   residual = base + c_tt phi_tt + c_ty phi_ty + c_yy phi_yy,
/// with coefficients depending only on (y, phi, phi_t, phi_y).
struct QuasilinearSplit {
    double base = 0.0;
    double c_tt = 0.0;
    double c_ty = 0.0;
    double c_yy = 0.0;

    double residual(double phi_tt, double phi_ty, double phi_yy) const noexcept {
        return base + c_tt * phi_tt + c_ty * phi_ty + c_yy * phi_yy;
    }
    /// phi_tt making the residual vanish.
    double solve_tt(double phi_ty, double phi_yy) const noexcept {
        return -(base + c_ty * phi_ty + c_yy * phi_yy) / c_tt;
    }
};

QuasilinearSplit residual_split(double y, double phi, double phi_t, double phi_y) noexcept;

/// Same decomposition for F itself: F = f0 + f_tt phi_tt + f_ty phi_ty + f_yy phi_yy.
struct NonlinearitySplit {
    double f0 = 0.0;
    double f_tt = 0.0;
    double f_ty = 0.0;
    double f_yy = 0.0;
};

NonlinearitySplit nonlinearity_split(double y, double phi, double phi_t, double phi_y) noexcept;

/// Coefficient of phi_tt in the residual; -1 on the static catenoid.
/// Throws HyperbolicityLoss if its magnitude drops below `floor`.
double principal_tt_coefficient(double y, double phi, double phi_t, double phi_y,
                                double floor = 1e-6);

/// B^2 (1 - phi_t^2) + phi_y^2; positive exactly when the induced metric is Lorentzian.
double lorentz_factor(double y, double phi, double phi_t, double phi_y) noexcept;

/// Largest |dy/dt| among the two characteristic directions of the principal part.
double characteristic_speed(double y, double phi, double phi_t, double phi_y) noexcept;

// -- weighted representation  phi~ = <y>^{1/2} phi -------------------------

struct Weight {
    double w;    ///< <y>^{1/2}
    double w1;   ///< d/dy
    double w2;   ///< d2/dy2
};

Weight weight(double y) noexcept;

/// (6 + y^2) / (4 <y>^4): potential of the weighted equation.
double weighted_potential(double y) noexcept;

std::vector<double> to_weighted(std::span<const double> phi, const Grid& grid);
std::vector<double> from_weighted(std::span<const double> phi_tilde, const Grid& grid);

/// Chain rule through the weight, both directions. Jets carry y unchanged.
JetPoint physical_from_weighted(const JetPoint& wj) noexcept;
JetPoint weighted_from_physical(const JetPoint& j) noexcept;

/// -phi~_tt + phi~_yy + (6+y^2)/(4<y>^4) phi~ - <y>^{1/2} F, with F evaluated
/// on the physical jet recovered from `wj`.
double weighted_equation_residual(const JetPoint& wj);

// -- identity oracles -------------------------------------------------------

/// The three divergence terms of the null-form identity:
/// d_t[phi_t^2 psi_t], d_y[phi_y phi_t psi_t], d_t[phi_y^2 psi_t].
struct NullDivergences {
    double dt_phit2_psit = 0.0;
    double dy_phiy_phit_psit = 0.0;
    double dt_phiy2_psit = 0.0;
};

/// Divergences expanded with the product rule from the two second jets.
NullDivergences null_divergences(const JetPoint& phi, const JetPoint& psi) noexcept;

/// RHS - LHS of the gradient-structure identity for the cubic null form,
/// using the supplied divergence terms.
double null_identity_defect(const JetPoint& phi, const JetPoint& psi, const NullDivergences& div) noexcept;
double null_identity_defect(const JetPoint& phi, const JetPoint& psi) noexcept;

/// Auxiliary quantities of the induced-volume Lagrangian L = A sqrt(K).
struct LagrangianAux {
    double A;
    double B;
    double K;
};

LagrangianAux lagrangian_aux(const JetPoint& j) noexcept;

/// Compares the regrouped variational identity (quasilinear side against
/// semilinear side, both divided by <y> B) with the closed-form residual.
/// Returns (quasi - semi) + residual, which vanishes identically.
/// Throws NonLorentzianState if K <= 0.
double lagrangian_oracle_defect(const JetPoint& j);

/// Euler-Lagrange expression of L = A sqrt(K) with total derivatives expanded
/// from the jet; related to the residual by E = -<y> B K^{-3/2} residual.
double euler_lagrange_expression(const JetPoint& j);

/// residual + K^{3/2} E / (<y> B); vanishes identically.
double euler_lagrange_defect(const JetPoint& j);

}  // namespace catlab::model
