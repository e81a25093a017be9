#include "peakonlab/toda.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "peakonlab/algebra.hpp"
#include "peakonlab/errors.hpp"

namespace peakonlab {

namespace {

double gershgorin_bound(const Matrix& L) {
    const std::size_t n = L.size();
    double bound = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::fabs(L(i, j));
        bound = std::max(bound, row);
    }
    return bound;
}

Matrix conjugate_by_orthogonal(const Matrix& L, const Matrix& Q) {
    Matrix C = transpose(Q) * L * Q;
    // Symmetrize away the conjugation roundoff.
    const std::size_t n = C.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (C(i, j) + C(j, i));
            C(i, j) = v;
            C(j, i) = v;
        }
    }
    return C;
}

} // namespace

Matrix toda_step(const Matrix& L, double dt, FlowSign sign) {
    const double guard = std::fabs(dt) * gershgorin_bound(L);
    if (guard > 50.0) {
        throw NumericalError("toda_step: overflow guard tripped (|dt| * spectral bound = " +
                             std::to_string(guard) + " > 50); use smaller substeps");
    }
    if (dt == 0.0) return L;
    const Matrix G = sym_exp(L, flow_sigma(sign) * 0.5 * dt);
    const FactorizationPair f = factorize(G);
    return conjugate_by_orthogonal(L, f.b_plus);
}

Matrix toda_step_accumulate(const Matrix& L, double dt, FlowSign sign, Matrix& B) {
    const double guard = std::fabs(dt) * gershgorin_bound(L);
    if (guard > 50.0) {
        throw NumericalError("toda_step: overflow guard tripped (|dt| * spectral bound = " +
                             std::to_string(guard) + " > 50); use smaller substeps");
    }
    if (dt == 0.0) return L;
    const Matrix G = sym_exp(L, flow_sigma(sign) * 0.5 * dt);
    const FactorizationPair f = factorize(G);
    B = (B.size() == 0) ? f.b_plus : B * f.b_plus;
    return conjugate_by_orthogonal(L, f.b_plus);
}

Matrix toda_solve(const Matrix& L0, double t, FlowSign sign, double dt_max, Matrix* B_out) {
    if (t < 0.0) throw std::invalid_argument("toda_solve: t must be >= 0");
    if (!(dt_max > 0.0)) throw std::invalid_argument("toda_solve: dt_max must be positive");
    Matrix L = L0;
    Matrix B = Matrix::identity(L0.size());
    if (t == 0.0) {
        if (B_out) *B_out = B;
        return L;
    }
    const std::size_t steps = static_cast<std::size_t>(std::ceil(t / dt_max));
    const double dt = t / static_cast<double>(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        L = toda_step_accumulate(L, dt, sign, B);
    }
    if (B_out) *B_out = B;
    return L;
}

} // namespace peakonlab
