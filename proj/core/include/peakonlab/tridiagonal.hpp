#pragma once

#include <vector>

#include "peakonlab/matrix.hpp"
#include "peakonlab/state.hpp"

namespace peakonlab {

struct Spectrum; // spectrum.hpp

// Tridiagonal inverse of the Lax matrix for increasing-order states:
// diagonal a_j, positive off-diagonal magnitudes b_j (the assembled matrix
// carries -b_j off the diagonal), and gap factors e_j = e^{-(q_{j+1}-q_j)/2}
// with the boundary convention e_0 = e_n = 0 so that J * L = I exactly at
// finite truncation.
struct TridiagonalInverse {
    std::size_t n = 0;
    std::vector<double> a; // n entries, all > 0
    std::vector<double> b; // n-1 entries, all > 0
    std::vector<double> e; // n-1 interior gap factors in (0,1)

    Matrix to_matrix() const;
};

// Requires a plain increasing-order state (S_minus, no permutation) with all
// gaps positive. Gaps below 1e-12 make 1 - e_j^2 vanish and are reported as
// near-singular (NumericalError).
TridiagonalInverse tridiagonal_inverse(const PeakonState& s);

// Max absolute residual of the three-term recurrence
//   b_j phi_k(j+1) = -b_{j-1} phi_k(j-1) + (a_j - 1/lambda_k) phi_k(j)
// over all rows j and eigenpairs k, with b_0 = b_n = 0 and phi addressed out
// of range treated as 0. `spec` must be the eigendecomposition of
// lax_from_state(s).
double recurrence_residual(const PeakonState& s, const Spectrum& spec);

} // namespace peakonlab
