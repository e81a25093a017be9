#include "peakonlab/wavefield.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace peakonlab {

double evaluate_u(const std::vector<double>& q, const std::vector<double>& p, double x) {
    double u = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
        u += std::exp(-std::fabs(x - q[j])) * p[j];
    }
    return 0.5 * u;
}

double evaluate_u(const PeakonState& s, double x) {
    validate_state(s);
    return evaluate_u(s.q, s.p, x);
}

std::vector<double> grid_points(const WaveGridSpec& grid) {
    if (grid.count < 2) throw std::invalid_argument("wave grid: count must be >= 2");
    if (!(grid.x_min < grid.x_max)) {
        throw std::invalid_argument("wave grid: x_min must be below x_max");
    }
    std::vector<double> xs(grid.count);
    const double step = (grid.x_max - grid.x_min) / static_cast<double>(grid.count - 1);
    for (std::size_t i = 0; i < grid.count; ++i) {
        xs[i] = grid.x_min + step * static_cast<double>(i);
    }
    xs.back() = grid.x_max;
    return xs;
}

WaveResidual asymptotic_residual(const PeakonState& s, const Spectrum& spec0, double t,
                                 const WaveGridSpec& grid) {
    validate_state(s);
    if (spec0.n != s.n) {
        throw std::invalid_argument("asymptotic_residual: spectrum size " +
                                    std::to_string(spec0.n) + " does not match n=" +
                                    std::to_string(s.n));
    }
    const std::vector<double> xs = grid_points(grid);
    const bool profile_target = s.sector.tag == SectorTag::S_plus;

    WaveResidual res;
    const double q_lo = *std::min_element(s.q.begin(), s.q.end());
    const double q_hi = *std::max_element(s.q.begin(), s.q.end());
    res.support_covered = grid.x_min <= q_lo && grid.x_max >= q_hi;

    for (double x : xs) {
        double target = 0.0;
        if (profile_target) {
            for (double lam : spec0.lambdas) {
                target += lam * std::exp(-std::fabs(x - lam * t));
            }
        }
        const double r = std::fabs(evaluate_u(s.q, s.p, x) - target);
        res.sup_residual = std::max(res.sup_residual, r);
    }
    return res;
}

WaveGrid emit_grid(const Trajectory& tr, const WaveGridSpec& grid,
                   const std::vector<double>& times) {
    if (times.empty()) throw std::invalid_argument("emit_grid: empty time selection");
    WaveGrid out;
    out.spec = grid;
    out.xs = grid_points(grid);
    out.times = times;
    out.values.reserve(times.size());
    out.interp.reserve(times.size());
    for (double t : times) {
        std::string method;
        const PeakonState s = tr.state_at_time(t, &method);
        std::vector<double> row(out.xs.size());
        for (std::size_t i = 0; i < out.xs.size(); ++i) {
            row[i] = evaluate_u(s.q, s.p, out.xs[i]);
        }
        out.values.push_back(std::move(row));
        out.interp.push_back(std::move(method));
    }
    return out;
}

} // namespace peakonlab
