#include "peakonlab/algebra.hpp"

#include <cmath>
#include <stdexcept>

#include "peakonlab/eigen.hpp"

namespace peakonlab {

Matrix project_skew(const Matrix& A) {
    const std::size_t n = A.size();
    Matrix K(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            K(i, j) = A(i, j);
            K(j, i) = -A(i, j);
        }
    }
    return K;
}

Matrix project_lower(const Matrix& A) {
    const std::size_t n = A.size();
    Matrix L(n);
    for (std::size_t i = 0; i < n; ++i) {
        L(i, i) = A(i, i);
        for (std::size_t j = 0; j < i; ++j) L(i, j) = A(i, j) + A(j, i);
    }
    return L;
}

Matrix r_matrix(const Matrix& A) {
    return project_lower(A) - project_skew(A);
}

Matrix dual_project_skew(const Matrix& L) {
    // Strictly lower triangular: the transposed strict upper triangle is
    // subtracted from the strict lower one, annihilating lower-triangular
    // test matrices in the trace pairing.
    const std::size_t n = L.size();
    Matrix K(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) K(i, j) = L(i, j) - L(j, i);
    return K;
}

Matrix dual_project_lower(const Matrix& L) {
    const std::size_t n = L.size();
    Matrix P(n);
    for (std::size_t i = 0; i < n; ++i) {
        P(i, i) = L(i, i);
        for (std::size_t j = i + 1; j < n; ++j) {
            P(i, j) = L(i, j);
            P(j, i) = L(i, j);
        }
    }
    return P;
}

double ad_pairing(const Matrix& A, const Matrix& B) {
    require_same_size(A, B, "ad_pairing");
    const std::size_t n = A.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s += A(i, j) * B(j, i);
    return s;
}

double hs_inner(const Matrix& A, const Matrix& B) {
    require_same_size(A, B, "hs_inner");
    double s = 0.0;
    for (std::size_t i = 0; i < A.data().size(); ++i) s += A.data()[i] * B.data()[i];
    return s;
}

Matrix commutator(const Matrix& A, const Matrix& B) {
    require_same_size(A, B, "commutator");
    return A * B - B * A;
}

Matrix r_bracket(const Matrix& A, const Matrix& B) {
    require_same_size(A, B, "r_bracket");
    const Matrix RA = r_matrix(A);
    const Matrix RB = r_matrix(B);
    return 0.5 * (commutator(RA, B) + commutator(A, RB));
}

double mybe_residual(const Matrix& A, const Matrix& B) {
    require_same_size(A, B, "mybe_residual");
    const Matrix RA = r_matrix(A);
    const Matrix RB = r_matrix(B);
    const Matrix inner = commutator(RA, B) + commutator(A, RB);
    const Matrix res = commutator(RA, RB) - r_matrix(inner) + commutator(A, B);
    return max_abs(res);
}

double lie_poisson_bracket(const Matrix& gradF1, const Matrix& gradF2, const Matrix& L) {
    require_same_size(gradF1, gradF2, "lie_poisson_bracket");
    require_same_size(gradF1, L, "lie_poisson_bracket");
    return ad_pairing(L, r_bracket(gradF1, gradF2));
}

Matrix sym_exp(const Matrix& S, double t) {
    const double tol = 1e-12 * (1.0 + max_abs(S));
    if (symmetry_residual(S) > tol) {
        throw std::invalid_argument("sym_exp: input is not symmetric within tolerance");
    }
    const std::size_t n = S.size();
    SymmetricEigen e = jacobi_eigen(S);
    Matrix B(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = std::exp(0.5 * t * e.values[k]);
        for (std::size_t i = 0; i < n; ++i) B(i, k) = e.vectors(i, k) * w;
    }
    return B * transpose(B);
}

} // namespace peakonlab
