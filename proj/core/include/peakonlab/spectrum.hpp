#pragma once

#include <vector>

#include "peakonlab/matrix.hpp"

namespace peakonlab {

// Eigendecomposition with fixed conventions: eigenvalues strictly descending,
// eigenvector columns orthonormal with positive first components.
struct Spectrum {
    std::size_t n = 0;
    std::vector<double> lambdas; // descending
    Matrix phi;                  // column k belongs to lambdas[k]
    double residual = 0.0;       // max|L Phi - Phi diag(lambda)|
};

enum class EigenInput {
    generic, // no positivity/simplicity requirements; sign fix only when decisive
    lax      // enforce positive simple spectrum and nonzero first components
};

// tol <= 0 selects the default 1e-10 * max(1, max|L|). Throws
// std::invalid_argument for non-symmetric input and NumericalError when the
// residual exceeds tol, or (for lax inputs) when a first component is below
// 1e-13 in magnitude, an eigenvalue is not positive, or a relative gap falls
// below 1e-12 * lambda_1.
Spectrum eigendecompose(const Matrix& L, double tol = -1.0,
                        EigenInput kind = EigenInput::generic);

} // namespace peakonlab
