#pragma once

#include <cstddef>
#include <vector>

#include "peakonlab/ode.hpp"
#include "peakonlab/spectrum.hpp"
#include "peakonlab/state.hpp"

namespace peakonlab {

// Linear fit of one position track over a late-time window.
struct SpeedFit {
    double slope = 0.0;
    double intercept = 0.0;
    double fit_residual = 0.0;  // RMS residual of the least-squares line
    double slope_target = 0.0;  // expected asymptotic speed
    double slope_dev = 0.0;     // |slope - slope_target|
};

struct AsymptoticsReport {
    Sector sector;
    std::size_t n = 0;
    std::vector<double> lambdas;  // initial spectrum, descending

    // Long-time momentum limits, indexed by peakon label.
    std::vector<double> final_p;
    std::vector<double> momentum_targets;
    std::vector<double> momentum_residuals;
    double max_momentum_residual = 0.0;
    std::vector<double> diagonal_limits;  // final_p / 2, the diagonal limit estimates

    // Speed fits, indexed by peakon label (empty unless a fit was requested).
    std::vector<SpeedFit> speed_fits;
    double max_slope_dev = 0.0;

    // Minimum pairwise gap along the run.
    std::vector<double> gap_times;
    std::vector<double> min_gaps;
    bool separating = false;

    bool momenta_converged = false;  // max momentum residual below the threshold
    double t_end = 0.0;
    bool extended = false;  // t_end was doubled at least once
    bool hit_cap = false;   // doubling stopped at the cap without converging
};

// Expected long-time momentum per peakon label: the peakon that ends up m-th
// from the front tends to twice the m-th largest eigenvalue. Resolves the
// sector ordering (ascending, descending, or explicitly permuted labels).
// lambdas must be descending and of length n.
std::vector<double> momentum_targets(const Sector& sector, std::size_t n,
                                     const std::vector<double>& lambdas);

// Compare the final momenta of the trajectory against the sector targets
// computed from the initial spectrum. Throws std::invalid_argument when the
// spectrum size does not match the trajectory.
AsymptoticsReport sorting_check(const Trajectory& tr, const Spectrum& spec0,
                                double threshold = 1e-3);

// Least-squares speed fits over recorded samples with
// window_start <= t <= window_end. Requires at least 10 samples in the
// window. Extends the sorting report with the fits.
AsymptoticsReport scattering_fit(const Trajectory& tr, const Spectrum& spec0,
                                 double window_start, double window_end,
                                 double threshold = 1e-3);

struct SeparationReport {
    std::vector<double> times;
    std::vector<double> min_gaps;
    // True when the minimum gap is non-decreasing over the last quartile of
    // samples and ends above its initial value. Vacuously true for n = 1.
    bool widening = false;
};

SeparationReport separation_check(const Trajectory& tr);

// One row per run of the truncation-trend table.
struct TrendRow {
    std::size_t n = 0;
    double q1_slope = 0.0;    // fitted slope of the first position, trailing half
    double p1_plateau = 0.0;  // final first momentum
    double lambda_min = 0.0;  // smallest initial eigenvalue
};

struct TrendTable {
    std::vector<TrendRow> rows;
    bool slopes_decreasing = false;
    bool plateaus_decreasing = false;
};

// Trend across truncation sizes: for runs with a fixed momentum profile and
// increasing n, the first peakon's fitted speed and momentum plateau must
// both decrease. Requires at least 3 runs.
TrendTable sublinear_trend(const std::vector<Trajectory>& runs);

struct ConvergedRunOptions {
    double t_start = 100.0;  // first attempt
    double t_cap = 400.0;    // doubling stops here
    double threshold = 1e-3;
    IntegratorConfig ode;  // t_end is overridden per attempt
};

// Integrate, then double t_end until the momentum residuals converge or the
// cap is reached; the report records which occurred.
AsymptoticsReport run_until_converged(const PeakonState& s0, const ConvergedRunOptions& opt);

// Integrate a (possibly permuted) state in its original labels and check the
// momentum limits and speed fits against the permutation-resolved targets.
// The fit window is the trailing half of the run.
AsymptoticsReport permuted_sector_run(const PeakonState& s0, const IntegratorConfig& cfg,
                                      double threshold = 1e-3);

} // namespace peakonlab
