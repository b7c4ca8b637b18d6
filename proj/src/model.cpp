#include "catlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "catlab/error.hpp"

namespace catlab::model {

NonlinearTerms nonlinearity_terms(const JetPoint& j) {
    const double y = j.y, f = j.phi, ft = j.phi_t, fy = j.phi_y;
    const double ftt = j.phi_tt, fty = j.phi_ty, fyy = j.phi_yy;
    const double J = 1.0 + y * y;
    const double J2 = J * J, J3 = J2 * J, J4 = J3 * J;
    const double ft2 = ft * ft, fy2 = fy * fy;

    NonlinearTerms t;
    t.q2 = -2.0 * f / J * ftt;
    t.q3 = f * f / J2 * fyy + ft2 * fyy - 2.0 * ft * fy * fty + fy2 * ftt;
    t.q4 = f * f / J2
           * ((2.0 * f / J - f * f / J2 - fy2) * ftt + 2.0 * fy * ft * fty - ft2 * fyy);

    t.s2 = 4.0 * f * f / J3 + 4.0 * y * f * fy / J2 - fy2 / J;
    t.s3 = y * f * f / J3 * fy - 2.0 * f * f * f / J4
           - (3.0 * f / J2 + y * fy / J) * fy2
           + (2.0 * f / J2 + y * fy / J) * ft2;
    t.s4 = -(4.0 * y * f / J2 + y * f * f / J3) * fy * ft2
           - (4.0 * f * f / J3 - 2.0 * f * f * f / J4) * ft2;
    return t;
}

double equation_residual(const JetPoint& j) {
    const double J = 1.0 + j.y * j.y;
    const double linear = -j.phi_tt + j.phi_yy + j.y / J * j.phi_y + 2.0 / (J * J) * j.phi;
    return linear - nonlinearity_terms(j).total();
}

namespace {

double semilinear_sum(double y, double f, double ft, double fy) {
    const JetPoint j{y, f, ft, fy, 0.0, 0.0, 0.0};
    return nonlinearity_terms(j).semilinear();
}

}  // namespace

QuasilinearSplit residual_split(double y, double phi, double phi_t, double phi_y) noexcept {
    const double J = 1.0 + y * y;
    const double p = phi / J;
    const double B = 1.0 - p;
    const double s = 1.0 - p * p;
    QuasilinearSplit out;
    out.c_tt = -s * (B * B + phi_y * phi_y);
    out.c_ty = 2.0 * s * phi_t * phi_y;
    out.c_yy = s * (1.0 - phi_t * phi_t);
    out.base = y / J * phi_y + 2.0 * phi / (J * J) - semilinear_sum(y, phi, phi_t, phi_y);
    return out;
}

NonlinearitySplit nonlinearity_split(double y, double phi, double phi_t, double phi_y) noexcept {
    const QuasilinearSplit r = residual_split(y, phi, phi_t, phi_y);
    NonlinearitySplit out;
    out.f0 = semilinear_sum(y, phi, phi_t, phi_y);
    out.f_tt = -1.0 - r.c_tt;
    out.f_ty = -r.c_ty;
    out.f_yy = 1.0 - r.c_yy;
    return out;
}

double principal_tt_coefficient(double y, double phi, double /*phi_t*/, double phi_y, double floor) {
    const double J = 1.0 + y * y;
    const double p = phi / J;
    const double B = 1.0 - p;
    const double c = -(1.0 - p * p) * (B * B + phi_y * phi_y);
    if (!(std::abs(c) >= floor)) {
        std::ostringstream msg;
        msg << "phi_tt coefficient " << c << " below hyperbolicity floor at y=" << y;
        throw HyperbolicityLoss(y, c, msg.str());
    }
    return c;
}

double lorentz_factor(double y, double phi, double phi_t, double phi_y) noexcept {
    const double B = 1.0 - phi / (1.0 + y * y);
    return B * B * (1.0 - phi_t * phi_t) + phi_y * phi_y;
}

double characteristic_speed(double y, double phi, double phi_t, double phi_y) noexcept {
    // Characteristics of c_tt u_tt + c_ty u_ty + c_yy u_yy; the common factor
    // (1 - p^2) cancels from the speed.
    const double B = 1.0 - phi / (1.0 + y * y);
    const double K = B * B * (1.0 - phi_t * phi_t) + phi_y * phi_y;
    const double denom = B * B + phi_y * phi_y;
    return (std::abs(phi_t * phi_y) + std::sqrt(std::max(K, 0.0))) / denom;
}

Weight weight(double y) noexcept {
    const double J = 1.0 + y * y;
    const double q = std::pow(J, -0.75);
    return {std::pow(J, 0.25), 0.5 * y * q, 0.5 * q - 0.75 * y * y * q / J};
}

double weighted_potential(double y) noexcept {
    const double J = 1.0 + y * y;
    return (6.0 + y * y) / (4.0 * J * J);
}

std::vector<double> to_weighted(std::span<const double> phi, const Grid& grid) {
    std::vector<double> out(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) out[i] = std::sqrt(japanese(grid.node(i))) * phi[i];
    return out;
}

std::vector<double> from_weighted(std::span<const double> phi_tilde, const Grid& grid) {
    std::vector<double> out(phi_tilde.size());
    for (std::size_t i = 0; i < phi_tilde.size(); ++i)
        out[i] = phi_tilde[i] / std::sqrt(japanese(grid.node(i)));
    return out;
}

JetPoint physical_from_weighted(const JetPoint& wj) noexcept {
    const Weight w = weight(wj.y);
    JetPoint j;
    j.y = wj.y;
    j.phi = wj.phi / w.w;
    j.phi_t = wj.phi_t / w.w;
    j.phi_tt = wj.phi_tt / w.w;
    j.phi_y = (wj.phi_y - w.w1 * j.phi) / w.w;
    j.phi_ty = (wj.phi_ty - w.w1 * j.phi_t) / w.w;
    j.phi_yy = (wj.phi_yy - w.w2 * j.phi - 2.0 * w.w1 * j.phi_y) / w.w;
    return j;
}

JetPoint weighted_from_physical(const JetPoint& j) noexcept {
    const Weight w = weight(j.y);
    JetPoint wj;
    wj.y = j.y;
    wj.phi = w.w * j.phi;
    wj.phi_t = w.w * j.phi_t;
    wj.phi_tt = w.w * j.phi_tt;
    wj.phi_y = w.w * j.phi_y + w.w1 * j.phi;
    wj.phi_ty = w.w * j.phi_ty + w.w1 * j.phi_t;
    wj.phi_yy = w.w * j.phi_yy + 2.0 * w.w1 * j.phi_y + w.w2 * j.phi;
    return wj;
}

double weighted_equation_residual(const JetPoint& wj) {
    const JetPoint j = physical_from_weighted(wj);
    const double F = nonlinearity_terms(j).total();
    return -wj.phi_tt + wj.phi_yy + weighted_potential(wj.y) * wj.phi - weight(wj.y).w * F;
}

NullDivergences null_divergences(const JetPoint& a, const JetPoint& b) noexcept {
    NullDivergences d;
    d.dt_phit2_psit = 2.0 * a.phi_t * a.phi_tt * b.phi_t + a.phi_t * a.phi_t * b.phi_tt;
    d.dy_phiy_phit_psit = a.phi_yy * a.phi_t * b.phi_t + a.phi_y * a.phi_ty * b.phi_t
                          + a.phi_y * a.phi_t * b.phi_ty;
    d.dt_phiy2_psit = 2.0 * a.phi_y * a.phi_ty * b.phi_t + a.phi_y * a.phi_y * b.phi_tt;
    return d;
}

double null_identity_defect(const JetPoint& a, const JetPoint& b, const NullDivergences& div) noexcept {
    const double at2 = a.phi_t * a.phi_t;
    const double lhs = div.dt_phit2_psit - 2.0 * div.dy_phiy_phit_psit + div.dt_phiy2_psit
                       + at2 * (b.phi_yy - b.phi_tt)
                       + 2.0 * (a.phi_yy - a.phi_tt) * a.phi_t * b.phi_t;
    const double rhs = at2 * b.phi_yy - 2.0 * a.phi_y * a.phi_t * b.phi_ty
                       + a.phi_y * a.phi_y * b.phi_tt;
    return rhs - lhs;
}

double null_identity_defect(const JetPoint& a, const JetPoint& b) noexcept {
    return null_identity_defect(a, b, null_divergences(a, b));
}

LagrangianAux lagrangian_aux(const JetPoint& j) noexcept {
    const double jb = japanese(j.y);
    const double B = 1.0 - j.phi / (jb * jb);
    return {jb + j.phi / jb, B, B * B * (1.0 - j.phi_t * j.phi_t) + j.phi_y * j.phi_y};
}

namespace {

void require_lorentzian(const JetPoint& j, const LagrangianAux& aux) {
    if (!(aux.K > 0.0)) {
        std::ostringstream msg;
        msg << "non-Lorentzian state: K=" << aux.K << " at y=" << j.y;
        throw NonLorentzianState(msg.str());
    }
}

}  // namespace

double lagrangian_oracle_defect(const JetPoint& j) {
    const LagrangianAux aux = lagrangian_aux(j);
    require_lorentzian(j, aux);
    const double y = j.y, f = j.phi, ft = j.phi_t, fy = j.phi_y;
    const double jb = japanese(y);
    const double J = jb * jb;
    const double A = aux.A, B = aux.B, B2 = B * B;
    const double ft2 = ft * ft, fy2 = fy * fy;

    // A B^2 [...] / (<y> B)
    const double bracket = -j.phi_yy + ft2 * j.phi_yy + fy2 * j.phi_tt + B2 * j.phi_tt
                           - 2.0 * fy * ft * j.phi_ty;
    const double quasi = A * B / jb * bracket;

    const double spatial = fy2 + B2 * (1.0 - ft2);
    const double semi = y * fy / J * spatial - B / J * spatial
                        - (1.0 / J + f / (J * J))
                              * (2.0 * y * f / J * fy * (1.0 - ft2) - B2 * (1.0 - ft2) - 2.0 * fy2);

    return quasi - semi + equation_residual(j);
}

double euler_lagrange_expression(const JetPoint& j) {
    const LagrangianAux aux = lagrangian_aux(j);
    require_lorentzian(j, aux);
    const double y = j.y, f = j.phi, ft = j.phi_t, fy = j.phi_y;
    const double jb = japanese(y);
    const double J = jb * jb;
    const double A = aux.A, B = aux.B, K = aux.K;
    const double sK = std::sqrt(K);
    const double K32 = K * sK;
    const double ft2 = ft * ft;

    // dL/dphi with dA/dphi = 1/<y>, dB/dphi = -1/J.
    const double dL_dphi = sK / jb + A * B * (-1.0 / J) * (1.0 - ft2) / sK;

    // Total derivatives of A, B, K.
    const double Dt_A = ft / jb;
    const double Dt_B = -ft / J;
    const double Dt_K = 2.0 * B * Dt_B * (1.0 - ft2) - 2.0 * B * B * ft * j.phi_tt
                        + 2.0 * fy * j.phi_ty;
    const double Dy_A = y / jb + fy / jb - y * f / (jb * J);
    const double Dy_B = -fy / J + 2.0 * y * f / (J * J);
    const double Dy_K = 2.0 * B * Dy_B * (1.0 - ft2) - 2.0 * B * B * ft * j.phi_ty
                        + 2.0 * fy * j.phi_yy;

    // P_t = dL/dphi_t = -A B^2 phi_t / sqrt(K), P_y = dL/dphi_y = A phi_y / sqrt(K).
    const double Dt_Pt = -(Dt_A * B * B * ft + 2.0 * A * B * Dt_B * ft + A * B * B * j.phi_tt) / sK
                         + A * B * B * ft * Dt_K / (2.0 * K32);
    const double Dy_Py = (Dy_A * fy + A * j.phi_yy) / sK - A * fy * Dy_K / (2.0 * K32);

    return dL_dphi - Dt_Pt - Dy_Py;
}

double euler_lagrange_defect(const JetPoint& j) {
    const LagrangianAux aux = lagrangian_aux(j);
    const double E = euler_lagrange_expression(j);
    const double K32 = aux.K * std::sqrt(aux.K);
    return equation_residual(j) + K32 * E / (japanese(j.y) * aux.B);
}

}  // namespace catlab::model
