#include "peakonlab/spectrum.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "peakonlab/eigen.hpp"
#include "peakonlab/errors.hpp"

namespace peakonlab {

Spectrum eigendecompose(const Matrix& L, double tol, EigenInput kind) {
    const std::size_t n = L.size();
    if (n == 0) throw std::invalid_argument("eigendecompose: empty matrix");
    const double scale = max_abs(L);
    if (symmetry_residual(L) > 1e-12 * (1.0 + scale)) {
        throw std::invalid_argument("eigendecompose: input is not symmetric within tolerance");
    }
    if (tol <= 0.0) tol = 1e-10 * std::max(1.0, scale);

    SymmetricEigen raw = jacobi_eigen(L);

    Spectrum out;
    out.n = n;
    out.lambdas.resize(n);
    out.phi = Matrix(n);
    // Reverse ascending -> descending.
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = n - 1 - k;
        out.lambdas[k] = raw.values[src];
        for (std::size_t i = 0; i < n; ++i) out.phi(i, k) = raw.vectors(i, src);
    }
    // First-row-positive sign convention.
    for (std::size_t k = 0; k < n; ++k) {
        const double first = out.phi(0, k);
        if (std::fabs(first) <= 1e-13) {
            if (kind == EigenInput::lax) {
                throw NumericalError("eigendecompose: eigenvector " + std::to_string(k + 1) +
                                     " has first component below 1e-13 on a Lax input");
            }
            continue; // generic input: leave the undecidable sign alone
        }
        if (first < 0.0) {
            for (std::size_t i = 0; i < n; ++i) out.phi(i, k) = -out.phi(i, k);
        }
    }

    // Residual max|L Phi - Phi diag(lambda)|.
    double res = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += L(i, j) * out.phi(j, k);
            acc -= out.lambdas[k] * out.phi(i, k);
            res = std::max(res, std::fabs(acc));
        }
    }
    out.residual = res;
    if (res > tol) {
        throw NumericalError("eigendecompose: residual " + std::to_string(res) +
                             " exceeds tolerance");
    }

    if (kind == EigenInput::lax) {
        if (!(out.lambdas[n - 1] > 0.0)) {
            throw NumericalError("eigendecompose: Lax input must have a positive spectrum");
        }
        for (std::size_t k = 0; k + 1 < n; ++k) {
            if (!(out.lambdas[k] - out.lambdas[k + 1] > 1e-12 * out.lambdas[0])) {
                throw NumericalError("eigendecompose: eigenvalue gap between " +
                                     std::to_string(k + 1) + " and " + std::to_string(k + 2) +
                                     " is degenerate for a Lax input");
            }
        }
    }
    return out;
}

} // namespace peakonlab
