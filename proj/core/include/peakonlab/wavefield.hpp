#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "peakonlab/ode.hpp"
#include "peakonlab/spectrum.hpp"
#include "peakonlab/state.hpp"

namespace peakonlab {

// Uniform evaluation window.
struct WaveGridSpec {
    double x_min = -20.0;
    double x_max = 20.0;
    std::size_t count = 401; // >= 2
};

struct WaveGrid {
    WaveGridSpec spec;
    std::vector<double> xs;
    std::vector<double> times;
    std::vector<std::vector<double>> values; // values[time][x]
    std::vector<std::string> interp;         // interpolation method per time
};

// u(x) = 1/2 sum_j e^{-|x - q_j|} p_j. The state overload validates; the raw
// overload is the grid hot path.
double evaluate_u(const PeakonState& s, double x);
double evaluate_u(const std::vector<double>& q, const std::vector<double>& p, double x);

struct WaveResidual {
    double sup_residual = 0.0;   // sup over the grid of |u - target|
    bool support_covered = true; // window contains the position hull
};

// Sup-norm distance of the wave profile at time t from its long-time target:
// sum_j lambda_j e^{-|x - lambda_j t|} in the descending sector, zero in the
// ascending one (evaluate over a window trailing the support there).
// support_covered is a warning flag, not an error.
WaveResidual asymptotic_residual(const PeakonState& s, const Spectrum& spec0, double t,
                                 const WaveGridSpec& grid);

// Evaluate the wave profile at the requested times on the uniform window.
// Times must lie within the trajectory range; states between samples come
// from the trajectory interpolant, and the method used is recorded per time.
WaveGrid emit_grid(const Trajectory& tr, const WaveGridSpec& grid,
                   const std::vector<double>& times);

std::vector<double> grid_points(const WaveGridSpec& grid);

} // namespace peakonlab
