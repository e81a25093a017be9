#include "peakonlab/eigen.hpp"

#include <cmath>

#include "peakonlab/errors.hpp"

namespace peakonlab {

SymmetricEigen jacobi_eigen(const Matrix& S) {
    const std::size_t n = S.size();
    Matrix A(n);
    // Work on the symmetrized copy so tiny representation asymmetry cannot
    // push the rotations off course.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) A(i, j) = 0.5 * (S(i, j) + S(j, i));
    Matrix V = Matrix::identity(n);

    if (n <= 1) {
        SymmetricEigen out;
        out.values.assign(n, n ? A(0, 0) : 0.0);
        out.vectors = V;
        return out;
    }

    double scale = max_abs(A);
    if (scale == 0.0) scale = 1.0;
    const double stop = 1e-15 * scale;
    const int max_sweeps = 100;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::fabs(A(p, q)));
        if (off <= stop) {
            SymmetricEigen out;
            out.values.resize(n);
            for (std::size_t i = 0; i < n; ++i) out.values[i] = A(i, i);
            // Selection-sort ascending, carrying eigenvector columns along.
            for (std::size_t i = 0; i + 1 < n; ++i) {
                std::size_t m = i;
                for (std::size_t j = i + 1; j < n; ++j)
                    if (out.values[j] < out.values[m]) m = j;
                if (m != i) {
                    std::swap(out.values[i], out.values[m]);
                    for (std::size_t r = 0; r < n; ++r) std::swap(V(r, i), V(r, m));
                }
            }
            out.vectors = V;
            return out;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                if (std::fabs(apq) <= stop * 1e-2) continue;
                const double app = A(p, p);
                const double aqq = A(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0)
                                     ? 1.0 / (theta + std::sqrt(theta * theta + 1.0))
                                     : 1.0 / (theta - std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                A(p, p) = app - t * apq;
                A(q, q) = aqq + t * apq;
                A(p, q) = 0.0;
                A(q, p) = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = A(i, p);
                    const double aiq = A(i, q);
                    A(i, p) = aip - s * (aiq + tau * aip);
                    A(p, i) = A(i, p);
                    A(i, q) = aiq + s * (aip - tau * aiq);
                    A(q, i) = A(i, q);
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = V(i, p);
                    const double viq = V(i, q);
                    V(i, p) = vip - s * (viq + tau * vip);
                    V(i, q) = viq + s * (vip - tau * viq);
                }
            }
        }
    }
    throw NumericalError("jacobi_eigen: no convergence after 100 sweeps");
}

} // namespace peakonlab
