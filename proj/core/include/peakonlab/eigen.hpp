#pragma once

#include <vector>

#include "peakonlab/matrix.hpp"

namespace peakonlab {

// Raw symmetric eigendecomposition result: values in ascending order,
// vectors(i, k) is component i of the eigenvector belonging to values[k].
struct SymmetricEigen {
    std::vector<double> values;
    Matrix vectors;
};

// Cyclic Jacobi rotations on a symmetric matrix. Input symmetry is the
// caller's responsibility (only the upper triangle is read through the
// symmetrized copy). Converges quadratically; throws NumericalError if the
// off-diagonal mass has not vanished after the sweep limit.
SymmetricEigen jacobi_eigen(const Matrix& S);

} // namespace peakonlab
