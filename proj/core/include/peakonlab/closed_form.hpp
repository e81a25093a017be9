#pragma once

#include <vector>

#include "peakonlab/spectrum.hpp"

namespace peakonlab {

// First components of the eigenvectors under the minus flow:
//   phi_k(1, t) = e^{-lambda_k t / 2} phi_k(1, 0)
//                 / sqrt(sum_j e^{-lambda_j t} phi_j(1, 0)^2).
// Computed in log space with max-exponent subtraction; the output has unit
// Euclidean norm and reproduces row 1 of spec0 at t = 0.
std::vector<double> first_component_evolution(const Spectrum& spec0, double t);

// Squared top-k minor of the eigenvector matrix: the squared inner product
// of e_1 ^ ... ^ e_k with phi_{I_1} ^ ... ^ phi_{I_k} — i.e. det^2 of the
// submatrix of phi with rows 1..k and the given columns (0-based, strictly
// increasing). Values over all index sets of fixed k sum to 1.
double compound_projection(const Spectrum& spec_t, std::size_t k,
                           const std::vector<std::size_t>& index_set);

// Closed-form value of the same squared minor at time t under the plus flow,
// from the initial spectrum only:
//   value_I(t) = e^{sum_{i in I} lambda_i t} M_I(0)^2
//                / sum_J e^{sum_{j in J} lambda_j t} M_J(0)^2
// with M_I the top-k minor of spec0. Exponents are normalized by subtracting
// the maximum before exponentiation.
std::vector<double> compound_closed_form(const Spectrum& spec0, double t, std::size_t k);

// Max absolute discrepancy between compound_closed_form(spec0, t, k) and
// compound_projection applied to the time-t spectrum produced by the
// factorization stepper (plus flow, substep length dt_max).
double compound_evolution_check(const Spectrum& spec0, const Matrix& L0, double t,
                                std::size_t k, double dt_max);

// The closed-form value on the leading index set {1..k}; converges to 1 as
// t grows when the top-k eigenvalue gap is positive.
double limit_law_indicator(const Spectrum& spec0, double t, std::size_t k);

} // namespace peakonlab
