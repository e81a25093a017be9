#pragma once

#include <cstddef>
#include <vector>

namespace peakonlab {

// Dense square real matrix, row-major storage. Indices are 0-based in code;
// documentation and error messages use 1-based indices.
class Matrix {
public:
    Matrix() : n_(0) {}
    explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t size() const { return n_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    const std::vector<double>& data() const { return a_; }
    std::vector<double>& data() { return a_; }

private:
    std::size_t n_;
    std::vector<double> a_;
};

Matrix operator+(const Matrix& A, const Matrix& B);
Matrix operator-(const Matrix& A, const Matrix& B);
Matrix operator*(const Matrix& A, const Matrix& B);
Matrix operator*(double s, const Matrix& A);

Matrix transpose(const Matrix& A);

// max_ij |A_ij|
double max_abs(const Matrix& A);
// max_ij |A_ij - B_ij|; dimension mismatch throws.
double max_abs_diff(const Matrix& A, const Matrix& B);
double frobenius_norm(const Matrix& A);
// Largest singular value (via the symmetric eigenproblem on A^T A).
double spectral_norm(const Matrix& A);

bool all_finite(const Matrix& A);
// max|A - A^T|
double symmetry_residual(const Matrix& A);

// Determinant by LU with partial pivoting; returns 0 for numerically
// singular inputs rather than throwing.
double lu_determinant(const Matrix& A);

// Dense inverse by LU with partial pivoting; throws NumericalError when a
// pivot falls below 1e-13 * max|A|.
Matrix lu_inverse(const Matrix& A);

// Determinant of the k x k submatrix A[rows, cols] (0-based index sets).
double submatrix_determinant(const Matrix& A,
                             const std::vector<std::size_t>& rows,
                             const std::vector<std::size_t>& cols);

void require_same_size(const Matrix& A, const Matrix& B, const char* op);

} // namespace peakonlab
