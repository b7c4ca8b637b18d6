#include "catlab/oracle.hpp"

#include <cmath>

#include "catlab/model.hpp"
#include "catlab/stencil.hpp"

namespace catlab::oracle {

std::vector<double> second_order_pi_t(const FieldState& s, const Grid& grid) {
    const std::size_t n = grid.size();
    const double h = grid.spacing();
    std::vector<double> phi(n), phi_t(n), root(n);
    for (std::size_t i = 0; i < n; ++i) {
        root[i] = std::pow(1.0 + grid.node(i) * grid.node(i), 0.25);
        phi[i] = s.phi[i] / root[i];
        phi_t[i] = s.pi[i] / root[i];
    }
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const long k = static_cast<long>(i);
        const double fm = stencil::reflected(phi, k - 1, s.parity), fp = phi[i + 1];
        const double gm = stencil::reflected(phi_t, k - 1, s.parity), gp = phi_t[i + 1];
        model::JetPoint j;
        j.y = grid.node(i);
        j.phi = phi[i];
        j.phi_t = phi_t[i];
        j.phi_y = (fp - fm) / (2.0 * h);
        j.phi_yy = (fp - 2.0 * phi[i] + fm) / (h * h);
        j.phi_ty = (gp - gm) / (2.0 * h);
        j.phi_tt = 0.0;
        const double r0 = model::equation_residual(j);
        j.phi_tt = 1.0;
        const double r1 = model::equation_residual(j);
        out[i] = root[i] * (-r0 / (r1 - r0));
    }
    return out;
}

}  // namespace catlab::oracle
