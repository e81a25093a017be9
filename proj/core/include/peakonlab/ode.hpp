#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "peakonlab/state.hpp"

namespace peakonlab {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double initial_step = 0.0; // 0 selects the automatic starting step
    double max_step = 0.0;     // 0 selects t_end / 10
    double t_end = 10.0;
    std::size_t output_stride = 1; // record every k-th accepted step
    bool store_dense = false;      // keep interpolation coefficients per accepted step
    double collision_tol = 1e-10;  // minimum allowed ordering gap
    std::size_t max_steps = 20'000'000;
};

// Right-hand side of the peakon system with the sgn(0) = 0 convention:
//   dq_j = 1/2 sum_k e^{-|q_j - q_k|} p_k
//   dp_j = 1/2 p_j sum_k sgn(q_j - q_k) e^{-|q_j - q_k|} p_k
// The raw overload is the integrator hot path (no validation); the state
// overload validates the sector first.
void rhs_raw(const std::vector<double>& q, const std::vector<double>& p,
             std::vector<double>& dq, std::vector<double>& dp);
void rhs(const PeakonState& s, std::vector<double>& dq, std::vector<double>& dp);

struct ConservedRow {
    double t;
    double P;     // sum p_j
    double H;     // 1/4 sum_ij e^{-|q_i-q_j|} p_i p_j
    double trL1;  // trace of the Lax matrix
    double trL2;  // trace of its square
    double trL3;  // trace of its cube
};

struct TrajectoryDiagnostics {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    double max_rhs_norm = 0.0; // max infinity norm of the RHS over accepted steps
    bool apriori_ok = true;    // growth bounds held along the whole run
};

struct DenseSegment {
    double t0 = 0.0;
    double h = 0.0;
    // Interpolation coefficients for u(theta) =
    // r1 + theta (r2 + (1-theta)(r3 + theta (r4 + (1-theta) r5))).
    std::vector<double> r1, r2, r3, r4, r5;
};

struct Trajectory {
    std::size_t n = 0;
    Sector sector;
    std::vector<double> times;
    std::vector<std::vector<double>> qs;
    std::vector<std::vector<double>> ps;
    std::vector<ConservedRow> ledger;
    TrajectoryDiagnostics diag;
    std::vector<DenseSegment> dense; // filled when store_dense

    std::size_t samples() const { return times.size(); }
    PeakonState state_at(std::size_t idx) const;
    PeakonState final_state() const;
    // Interpolated state: integrator interpolant when dense data is stored,
    // cubic Hermite between recorded samples otherwise. method_out (optional)
    // receives "dense", "hermite", or "sample".
    PeakonState state_at_time(double t, std::string* method_out = nullptr) const;
    std::string interp_method() const { return dense.empty() ? "hermite" : "dense"; }
};

// Adaptive embedded Runge-Kutta 5(4) trajectory. The sector ordering is
// verified after every accepted step; a gap at or below collision_tol halts
// the run with a NumericalError naming the time and the colliding pair.
Trajectory integrate(const PeakonState& s0, const IntegratorConfig& cfg);

struct ConservedReport {
    double max_rel_drift_P = 0.0;
    double max_rel_drift_H = 0.0;
    double max_rel_drift_trL1 = 0.0;
    double max_rel_drift_trL2 = 0.0;
    double max_rel_drift_trL3 = 0.0;
};

// Max relative drift of each ledger column against its initial value.
ConservedReport conserved_report(const Trajectory& tr);

// Ledger row for an arbitrary state (used when recording samples).
ConservedRow conserved_row(const PeakonState& s, double t);

} // namespace peakonlab
