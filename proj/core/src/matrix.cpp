#include "peakonlab/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "peakonlab/eigen.hpp"
#include "peakonlab/errors.hpp"

namespace peakonlab {

void require_same_size(const Matrix& A, const Matrix& B, const char* op) {
    if (A.size() != B.size()) {
        throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                    std::to_string(A.size()) + " vs " +
                                    std::to_string(B.size()) + ")");
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix I(n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

Matrix operator+(const Matrix& A, const Matrix& B) {
    require_same_size(A, B, "matrix add");
    Matrix C(A.size());
    for (std::size_t i = 0; i < C.data().size(); ++i) C.data()[i] = A.data()[i] + B.data()[i];
    return C;
}

Matrix operator-(const Matrix& A, const Matrix& B) {
    require_same_size(A, B, "matrix subtract");
    Matrix C(A.size());
    for (std::size_t i = 0; i < C.data().size(); ++i) C.data()[i] = A.data()[i] - B.data()[i];
    return C;
}

Matrix operator*(const Matrix& A, const Matrix& B) {
    require_same_size(A, B, "matrix multiply");
    const std::size_t n = A.size();
    Matrix C(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const double aik = A(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) C(i, j) += aik * B(k, j);
        }
    }
    return C;
}

Matrix operator*(double s, const Matrix& A) {
    Matrix C(A.size());
    for (std::size_t i = 0; i < C.data().size(); ++i) C.data()[i] = s * A.data()[i];
    return C;
}

Matrix transpose(const Matrix& A) {
    const std::size_t n = A.size();
    Matrix T(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) T(j, i) = A(i, j);
    return T;
}

double max_abs(const Matrix& A) {
    double m = 0.0;
    for (double x : A.data()) m = std::max(m, std::fabs(x));
    return m;
}

double max_abs_diff(const Matrix& A, const Matrix& B) {
    require_same_size(A, B, "matrix compare");
    double m = 0.0;
    for (std::size_t i = 0; i < A.data().size(); ++i)
        m = std::max(m, std::fabs(A.data()[i] - B.data()[i]));
    return m;
}

double frobenius_norm(const Matrix& A) {
    double s = 0.0;
    for (double x : A.data()) s += x * x;
    return std::sqrt(s);
}

double spectral_norm(const Matrix& A) {
    const std::size_t n = A.size();
    if (n == 0) return 0.0;
    Matrix G = transpose(A) * A;
    SymmetricEigen e = jacobi_eigen(G);
    double lam = 0.0;
    for (double x : e.values) lam = std::max(lam, x);
    return std::sqrt(std::max(0.0, lam));
}

bool all_finite(const Matrix& A) {
    for (double x : A.data())
        if (!std::isfinite(x)) return false;
    return true;
}

double symmetry_residual(const Matrix& A) {
    const std::size_t n = A.size();
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            m = std::max(m, std::fabs(A(i, j) - A(j, i)));
    return m;
}

namespace {

// LU with partial pivoting in place; returns false when singular.
// perm_sign receives the permutation parity.
bool lu_factor(Matrix& A, std::vector<std::size_t>& piv, double& perm_sign) {
    const std::size_t n = A.size();
    piv.resize(n);
    perm_sign = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t imax = k;
        double vmax = std::fabs(A(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::fabs(A(i, k));
            if (v > vmax) { vmax = v; imax = i; }
        }
        piv[k] = imax;
        if (vmax == 0.0) return false;
        if (imax != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(imax, j));
            perm_sign = -perm_sign;
        }
        const double pivot = A(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            A(i, k) /= pivot;
            const double lik = A(i, k);
            if (lik == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) A(i, j) -= lik * A(k, j);
        }
    }
    return true;
}

} // namespace

double lu_determinant(const Matrix& A) {
    Matrix F = A;
    std::vector<std::size_t> piv;
    double sign = 1.0;
    if (!lu_factor(F, piv, sign)) return 0.0;
    double det = sign;
    for (std::size_t i = 0; i < F.size(); ++i) det *= F(i, i);
    return det;
}

Matrix lu_inverse(const Matrix& A) {
    const std::size_t n = A.size();
    Matrix F = A;
    std::vector<std::size_t> piv;
    double sign = 1.0;
    const double scale = max_abs(A);
    if (!lu_factor(F, piv, sign)) {
        throw NumericalError("lu_inverse: matrix is singular");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (std::fabs(F(i, i)) < 1e-13 * scale) {
            throw NumericalError("lu_inverse: pivot below 1e-13 of matrix scale at row " +
                                 std::to_string(i + 1));
        }
    }
    Matrix X(n);
    std::vector<double> col(n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t i = 0; i < n; ++i) col[i] = (i == c) ? 1.0 : 0.0;
        for (std::size_t k = 0; k < n; ++k) std::swap(col[k], col[piv[k]]);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t k = 0; k < i; ++k) col[i] -= F(i, k) * col[k];
        for (std::size_t ii = n; ii-- > 0;) {
            for (std::size_t k = ii + 1; k < n; ++k) col[ii] -= F(ii, k) * col[k];
            col[ii] /= F(ii, ii);
        }
        for (std::size_t i = 0; i < n; ++i) X(i, c) = col[i];
    }
    return X;
}

double submatrix_determinant(const Matrix& A,
                             const std::vector<std::size_t>& rows,
                             const std::vector<std::size_t>& cols) {
    if (rows.size() != cols.size()) {
        throw std::invalid_argument("submatrix_determinant: index sets differ in size");
    }
    const std::size_t k = rows.size();
    Matrix S(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) S(i, j) = A(rows[i], cols[j]);
    if (k == 1) return S(0, 0);
    if (k == 2) return S(0, 0) * S(1, 1) - S(0, 1) * S(1, 0);
    return lu_determinant(S);
}

} // namespace peakonlab
