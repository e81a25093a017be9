#include "peakonlab/tridiagonal.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "peakonlab/errors.hpp"
#include "peakonlab/spectrum.hpp"

namespace peakonlab {

Matrix TridiagonalInverse::to_matrix() const {
    Matrix J(n);
    for (std::size_t j = 0; j < n; ++j) J(j, j) = a[j];
    for (std::size_t j = 0; j + 1 < n; ++j) {
        J(j, j + 1) = -b[j];
        J(j + 1, j) = -b[j];
    }
    return J;
}

TridiagonalInverse tridiagonal_inverse(const PeakonState& s) {
    validate_state(s);
    if (s.sector.tag != SectorTag::S_minus || s.sector.is_permuted()) {
        throw std::invalid_argument(
            "tridiagonal_inverse: increasing-order state required (relabel first)");
    }
    const std::size_t n = s.n;
    TridiagonalInverse T;
    T.n = n;
    T.a.resize(n);
    T.b.resize(n > 0 ? n - 1 : 0);
    T.e.resize(n > 0 ? n - 1 : 0);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double gap = s.q[j + 1] - s.q[j];
        if (gap < 1e-12) {
            throw NumericalError("tridiagonal_inverse: gap between positions " +
                                 std::to_string(j + 1) + " and " + std::to_string(j + 2) +
                                 " is below 1e-12 (near-singular)");
        }
        T.e[j] = std::exp(-0.5 * gap);
    }
    // Boundary convention: e_0 = e_n = 0.
    for (std::size_t j = 0; j < n; ++j) {
        const double e_prev = (j == 0) ? 0.0 : T.e[j - 1];
        const double e_next = (j + 1 == n) ? 0.0 : T.e[j];
        const double d_prev = 1.0 - e_prev * e_prev;
        const double d_next = 1.0 - e_next * e_next;
        T.a[j] = (2.0 / s.p[j]) * (1.0 - e_prev * e_prev * e_next * e_next) / (d_prev * d_next);
    }
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double d = 1.0 - T.e[j] * T.e[j];
        T.b[j] = (2.0 / std::sqrt(s.p[j] * s.p[j + 1])) * T.e[j] / d;
    }
    return T;
}

double recurrence_residual(const PeakonState& s, const Spectrum& spec) {
    if (spec.n != s.n) {
        throw std::invalid_argument("recurrence_residual: spectrum/state dimension mismatch");
    }
    if (s.n <= 1) return 0.0;
    const TridiagonalInverse T = tridiagonal_inverse(s);
    const std::size_t n = s.n;
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double inv_lam = 1.0 / spec.lambdas[k];
        for (std::size_t j = 0; j < n; ++j) {
            const double phi_prev = (j == 0) ? 0.0 : spec.phi(j - 1, k);
            const double phi_here = spec.phi(j, k);
            const double phi_next = (j + 1 == n) ? 0.0 : spec.phi(j + 1, k);
            const double b_prev = (j == 0) ? 0.0 : T.b[j - 1];
            const double b_here = (j + 1 == n) ? 0.0 : T.b[j];
            const double lhs = b_here * phi_next;
            const double rhs = -b_prev * phi_prev + (T.a[j] - inv_lam) * phi_here;
            worst = std::max(worst, std::fabs(lhs - rhs));
        }
    }
    return worst;
}

} // namespace peakonlab
