#include "peakonlab/factorize.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "peakonlab/errors.hpp"

namespace peakonlab {

FactorizationPair factorize(const Matrix& G) {
    const std::size_t n = G.size();
    // Orthogonalize the columns of A = G^T.
    Matrix A = transpose(G);
    Matrix Q(n);
    Matrix R(n);

    double col_scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += A(i, j) * A(i, j);
        col_scale = std::max(col_scale, std::sqrt(s));
    }
    const double pivot_floor = 1e-13 * col_scale;

    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) v[i] = A(i, j);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                double proj = 0.0;
                for (std::size_t i = 0; i < n; ++i) proj += Q(i, k) * v[i];
                for (std::size_t i = 0; i < n; ++i) v[i] -= proj * Q(i, k);
                R(k, j) += proj;
            }
        }
        double nv = 0.0;
        for (std::size_t i = 0; i < n; ++i) nv += v[i] * v[i];
        nv = std::sqrt(nv);
        if (!(nv > pivot_floor)) {
            throw NumericalError("factorize: rank deficiency at column " + std::to_string(j + 1) +
                                 " (pivot below 1e-13 of column scale)");
        }
        R(j, j) = nv;
        for (std::size_t i = 0; i < n; ++i) Q(i, j) = v[i] / nv;
    }

    FactorizationPair out;
    out.b_plus = Q;
    out.b_minus = transpose(R);
    return out;
}

} // namespace peakonlab
