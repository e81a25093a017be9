#pragma once

#include "peakonlab/factorize.hpp"
#include "peakonlab/matrix.hpp"
#include "peakonlab/state.hpp"

namespace peakonlab {

// Sign of the isospectral matrix flow dL/dt = ±1/2 [project_skew-part of L, L].
// The plus flow pairs with decreasing-order states, the minus flow with
// increasing-order states.
enum class FlowSign { plus, minus };

inline double flow_sigma(FlowSign s) { return s == FlowSign::plus ? 1.0 : -1.0; }

// Flow sign matching the peakon dynamics of each ordering sector.
inline FlowSign flow_for_sector(SectorTag tag) {
    return tag == SectorTag::S_plus ? FlowSign::plus : FlowSign::minus;
}

// One factorization step: factorize exp(±1/2 dt L) = b_minus * b_plus^{-1}
// and return b_plus^T L b_plus (exactly symmetric by construction). The
// overflow guard requires |dt| * lambda_bound <= 50 where lambda_bound is the
// Gershgorin bound max_i sum_j |L_ij|; larger steps must be split.
Matrix toda_step(const Matrix& L, double dt, FlowSign sign);

// Variant that also accumulates the orthogonal factor: B <- B * b_plus, so
// eigenvectors evolve as phi(t) = B^T phi(0) across repeated steps.
Matrix toda_step_accumulate(const Matrix& L, double dt, FlowSign sign, Matrix& B);

// Compose toda_step over uniform substeps of length <= dt_max (t >= 0).
// Spectrum is preserved to roundoff; repeated stepping composes with one
// large step up to roundoff. If B_out is non-null it receives the
// accumulated orthogonal factor.
Matrix toda_solve(const Matrix& L0, double t, FlowSign sign, double dt_max,
                  Matrix* B_out = nullptr);

} // namespace peakonlab
