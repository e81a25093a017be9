#pragma once

#include <vector>

#include "peakonlab/matrix.hpp"
#include "peakonlab/state.hpp"

namespace peakonlab {

struct FactorizationPair; // factorize.hpp

// Symmetric positive matrix L_ij = 1/2 e^{-|q_i - q_j|/2} sqrt(p_i p_j) with
// its rank-one triangle factors u, v (L_ij = u_i v_j on one triangle; which
// triangle depends on the sector orientation). Factors are stored in the
// centered gauge (positions shifted to zero mean) — the product u_i v_j is
// gauge-invariant and centering keeps the exponentials inside double range
// on long trajectories. The source state is kept for operations that need
// gap data (determinant formula, tridiagonal inverse).
struct LaxOperator {
    std::size_t n = 0;
    Matrix L;
    std::vector<double> u;
    std::vector<double> v;
    PeakonState source;
};

LaxOperator lax_from_state(const PeakonState& s);

// Leading principal minors det L[1..k, 1..k] for k = 1..n via the stable
// product form prod_{j<=k} (p_j/2) * prod_{j<k} (1 - e_j^2) with
// e_j = e^{-(q_{j+1}-q_j)/2}. Requires the increasing (minus) orientation;
// plus-sector states must be relabeled first (std::invalid_argument).
std::vector<double> leading_minor_dets(const LaxOperator& L);

// Membership test for the semiseparable pattern: all 2x2 minors taken from
// the upper-triangular pattern (rows i < i', cols j < j' with i' <= j) must
// vanish within tol * (1 + max|M|)^2. Requires symmetric M.
bool is_semiseparable(const Matrix& M, double tol);

// Ad*-type action: dual_project_lower(b- L b-^{-1}) + dual_project_skew(b+ L b+^T).
// Preserves the semiseparable pattern. Throws on dimension mismatch or when
// b- is not invertible.
Matrix coadjoint_action(const FactorizationPair& g, const Matrix& L);

// Inversion of the Lax construction: p_j = 2 L_jj and gaps recovered from
// the nearest off-diagonal entries; absolute positions anchored so that the
// first coordinate equals q_ref. Throws NumericalError when an off-diagonal
// ratio is >= 1 (the matrix left the sector's image).
PeakonState lax_to_state(const Matrix& L, double q_ref, const Sector& sector);

} // namespace peakonlab
