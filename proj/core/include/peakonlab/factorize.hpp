#pragma once

#include "peakonlab/matrix.hpp"

namespace peakonlab {

// Unique factorization G = b_minus * b_plus^{-1} with b_minus lower
// triangular with strictly positive diagonal and b_plus orthogonal.
struct FactorizationPair {
    Matrix b_minus;
    Matrix b_plus;
};

// Computed by modified Gram-Schmidt (with one reorthogonalization pass) on
// the columns of G^T: G^T = QR with positive-diagonal R gives b_plus = Q and
// b_minus = R^T. Throws NumericalError when a pivot falls below
// 1e-13 * max column norm (rank deficiency).
FactorizationPair factorize(const Matrix& G);

} // namespace peakonlab
