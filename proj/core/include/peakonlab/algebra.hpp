#pragma once

#include "peakonlab/matrix.hpp"

namespace peakonlab {

// Splitting of a square matrix into the antisymmetric part generated by its
// strict upper triangle and the lower-triangular complement:
//   project_skew(A)  = A_up - A_up^T          (antisymmetric)
//   project_lower(A) = A_low + A_diag + A_up^T (lower triangular)
// and project_skew(A) + project_lower(A) = A.
Matrix project_skew(const Matrix& A);
Matrix project_lower(const Matrix& A);

// r_matrix(A) = project_lower(A) - project_skew(A).
Matrix r_matrix(const Matrix& A);

// Dual projections with respect to the trace pairing:
//   dual_project_skew(L)  = L_low - L_up^T
//   dual_project_lower(L) = L_up + L_diag + L_up^T
// Their sum is L, and ad_pairing(dual_project_skew(L), A) =
// ad_pairing(L, project_skew(A)) for all A (likewise for lower).
Matrix dual_project_skew(const Matrix& L);
Matrix dual_project_lower(const Matrix& L);

// ad_pairing(A, B) = sum_ij A_ij B_ji = tr(AB).
double ad_pairing(const Matrix& A, const Matrix& B);
// hs_inner(A, B) = sum_ij A_ij B_ij.
double hs_inner(const Matrix& A, const Matrix& B);

Matrix commutator(const Matrix& A, const Matrix& B);
// r_bracket(A, B) = 1/2 ([R(A), B] + [A, R(B)]) with R = r_matrix.
Matrix r_bracket(const Matrix& A, const Matrix& B);

// Modified Yang-Baxter residual [R(A),R(B)] - R([R(A),B] + [A,R(B)]) + [A,B];
// returns its max-abs entry (zero in exact arithmetic).
double mybe_residual(const Matrix& A, const Matrix& B);

// lie_poisson_bracket(dF1, dF2, L) = ad_pairing(L, r_bracket(dF1, dF2)).
double lie_poisson_bracket(const Matrix& gradF1, const Matrix& gradF2, const Matrix& L);

// exp(t S) for symmetric S via eigendecomposition, assembled as
// (V e^{t Lambda / 2}) (V e^{t Lambda / 2})^T so the result is symmetric
// positive definite by construction. Throws std::invalid_argument when
// max|S - S^T| > 1e-12 * (1 + max|S|).
Matrix sym_exp(const Matrix& S, double t);

} // namespace peakonlab
