#include "peakonlab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "peakonlab/lax.hpp"

namespace peakonlab {

std::vector<double> momentum_targets(const Sector& sector, std::size_t n,
                                     const std::vector<double>& lambdas) {
    if (lambdas.size() != n) {
        throw std::invalid_argument("momentum_targets: spectrum size " +
                                    std::to_string(lambdas.size()) + " does not match n=" +
                                    std::to_string(n));
    }
    std::vector<double> targets(n, 0.0);
    for (std::size_t slot = 0; slot < n; ++slot) {
        const std::size_t label = sector.perm.empty() ? slot : sector.perm[slot];
        // Ordering slots run front-to-back in the descending sector and
        // back-to-front in the ascending one.
        const std::size_t rank = (sector.tag == SectorTag::S_plus) ? slot : n - 1 - slot;
        targets[label] = 2.0 * lambdas[rank];
    }
    return targets;
}

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
};

LineFit fit_line(const std::vector<double>& ts, const std::vector<double>& ys) {
    const std::size_t m = ts.size();
    double tbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        tbar += ts[i];
        ybar += ys[i];
    }
    tbar /= static_cast<double>(m);
    ybar /= static_cast<double>(m);
    double stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        stt += (ts[i] - tbar) * (ts[i] - tbar);
        sty += (ts[i] - tbar) * (ys[i] - ybar);
    }
    LineFit fit;
    fit.slope = sty / stt;
    fit.intercept = ybar - fit.slope * tbar;
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = ys[i] - fit.slope * ts[i] - fit.intercept;
        ss += r * r;
    }
    fit.rms = std::sqrt(ss / static_cast<double>(m));
    return fit;
}

double min_pairwise_gap(const std::vector<double>& q) {
    std::vector<double> sorted = q;
    std::sort(sorted.begin(), sorted.end());
    double g = sorted.back() - sorted.front();
    for (std::size_t j = 0; j + 1 < sorted.size(); ++j) {
        g = std::min(g, sorted[j + 1] - sorted[j]);
    }
    return g;
}

void require_match(const Trajectory& tr, const Spectrum& spec0, const char* who) {
    if (tr.times.empty()) throw std::invalid_argument(std::string(who) + ": empty trajectory");
    if (spec0.n != tr.n) {
        throw std::invalid_argument(std::string(who) + ": spectrum size " +
                                    std::to_string(spec0.n) + " does not match trajectory n=" +
                                    std::to_string(tr.n));
    }
}

} // namespace

SeparationReport separation_check(const Trajectory& tr) {
    if (tr.times.empty()) throw std::invalid_argument("separation_check: empty trajectory");
    SeparationReport rep;
    if (tr.n < 2) {
        rep.widening = true;
        return rep;
    }
    const std::size_t m = tr.times.size();
    rep.times = tr.times;
    rep.min_gaps.resize(m);
    for (std::size_t i = 0; i < m; ++i) rep.min_gaps[i] = min_pairwise_gap(tr.qs[i]);

    std::size_t start = (3 * m) / 4;
    if (start + 2 > m) start = (m >= 2) ? m - 2 : 0;
    bool monotone = true;
    for (std::size_t i = start; i + 1 < m; ++i) {
        if (rep.min_gaps[i + 1] < rep.min_gaps[i] - 1e-12) {
            monotone = false;
            break;
        }
    }
    rep.widening = monotone && rep.min_gaps.back() > rep.min_gaps.front();
    return rep;
}

AsymptoticsReport sorting_check(const Trajectory& tr, const Spectrum& spec0, double threshold) {
    require_match(tr, spec0, "sorting_check");
    AsymptoticsReport rep;
    rep.sector = tr.sector;
    rep.n = tr.n;
    rep.lambdas = spec0.lambdas;
    rep.t_end = tr.times.back();

    const PeakonState fin = tr.final_state();
    rep.final_p = fin.p;
    rep.momentum_targets = momentum_targets(tr.sector, tr.n, spec0.lambdas);
    rep.momentum_residuals.resize(tr.n);
    rep.diagonal_limits.resize(tr.n);
    for (std::size_t j = 0; j < tr.n; ++j) {
        rep.momentum_residuals[j] = std::fabs(fin.p[j] - rep.momentum_targets[j]);
        rep.diagonal_limits[j] = 0.5 * fin.p[j];
        rep.max_momentum_residual = std::max(rep.max_momentum_residual, rep.momentum_residuals[j]);
    }
    rep.momenta_converged = rep.max_momentum_residual < threshold;

    const SeparationReport sep = separation_check(tr);
    rep.gap_times = sep.times;
    rep.min_gaps = sep.min_gaps;
    rep.separating = sep.widening;
    return rep;
}

AsymptoticsReport scattering_fit(const Trajectory& tr, const Spectrum& spec0,
                                 double window_start, double window_end, double threshold) {
    require_match(tr, spec0, "scattering_fit");
    if (!(window_start < window_end)) {
        throw std::invalid_argument("scattering_fit: window must have positive length");
    }
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        if (tr.times[i] >= window_start && tr.times[i] <= window_end) idx.push_back(i);
    }
    if (idx.size() < 10) {
        throw std::invalid_argument("scattering_fit: window holds " + std::to_string(idx.size()) +
                                    " samples, fewer than 10");
    }

    AsymptoticsReport rep = sorting_check(tr, spec0, threshold);
    std::vector<double> ts(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) ts[i] = tr.times[idx[i]];

    rep.speed_fits.resize(tr.n);
    std::vector<double> ys(idx.size());
    for (std::size_t j = 0; j < tr.n; ++j) {
        for (std::size_t i = 0; i < idx.size(); ++i) ys[i] = tr.qs[idx[i]][j];
        const LineFit fit = fit_line(ts, ys);
        SpeedFit& sf = rep.speed_fits[j];
        sf.slope = fit.slope;
        sf.intercept = fit.intercept;
        sf.fit_residual = fit.rms;
        sf.slope_target = 0.5 * rep.momentum_targets[j];
        sf.slope_dev = std::fabs(sf.slope - sf.slope_target);
        rep.max_slope_dev = std::max(rep.max_slope_dev, sf.slope_dev);
    }
    return rep;
}

TrendTable sublinear_trend(const std::vector<Trajectory>& runs) {
    if (runs.size() < 3) {
        throw std::invalid_argument("sublinear_trend: fewer than 3 runs");
    }
    TrendTable table;
    table.rows.reserve(runs.size());
    for (const Trajectory& tr : runs) {
        if (tr.times.empty()) throw std::invalid_argument("sublinear_trend: empty trajectory");
        if (!table.rows.empty() && tr.n <= table.rows.back().n) {
            throw std::invalid_argument("sublinear_trend: runs must have strictly increasing n");
        }
        TrendRow row;
        row.n = tr.n;
        row.p1_plateau = tr.ps.back()[0];

        const double t_end = tr.times.back();
        std::vector<double> ts, ys;
        for (std::size_t i = 0; i < tr.times.size(); ++i) {
            if (tr.times[i] >= 0.5 * t_end) {
                ts.push_back(tr.times[i]);
                ys.push_back(tr.qs[i][0]);
            }
        }
        if (ts.size() < 10) {
            throw std::invalid_argument("sublinear_trend: trailing window holds fewer than 10 samples");
        }
        row.q1_slope = fit_line(ts, ys).slope;

        const Spectrum spec0 = eigendecompose(lax_from_state(tr.state_at(0)).L, -1.0, EigenInput::lax);
        row.lambda_min = spec0.lambdas.back();
        table.rows.push_back(row);
    }
    table.slopes_decreasing = true;
    table.plateaus_decreasing = true;
    for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
        if (!(table.rows[i + 1].q1_slope < table.rows[i].q1_slope)) table.slopes_decreasing = false;
        if (!(table.rows[i + 1].p1_plateau < table.rows[i].p1_plateau)) {
            table.plateaus_decreasing = false;
        }
    }
    return table;
}

AsymptoticsReport run_until_converged(const PeakonState& s0, const ConvergedRunOptions& opt) {
    if (!(opt.t_start > 0.0) || !(opt.t_cap >= opt.t_start)) {
        throw std::invalid_argument("run_until_converged: need 0 < t_start <= t_cap");
    }
    if (!(opt.threshold > 0.0)) {
        throw std::invalid_argument("run_until_converged: threshold must be positive");
    }
    validate_state(s0);
    const Spectrum spec0 = eigendecompose(lax_from_state(s0).L, -1.0, EigenInput::lax);

    double t = opt.t_start;
    bool extended = false;
    for (;;) {
        IntegratorConfig cfg = opt.ode;
        cfg.t_end = t;
        const Trajectory tr = integrate(s0, cfg);
        AsymptoticsReport rep = sorting_check(tr, spec0, opt.threshold);
        const bool at_cap = t >= opt.t_cap * (1.0 - 1e-12);
        if (rep.momenta_converged || at_cap) {
            rep.extended = extended;
            rep.hit_cap = at_cap && !rep.momenta_converged;
            return rep;
        }
        t = std::min(2.0 * t, opt.t_cap);
        extended = true;
    }
}

AsymptoticsReport permuted_sector_run(const PeakonState& s0, const IntegratorConfig& cfg,
                                      double threshold) {
    validate_state(s0);
    const Spectrum spec0 = eigendecompose(lax_from_state(s0).L, -1.0, EigenInput::lax);
    const Trajectory tr = integrate(s0, cfg);
    return scattering_fit(tr, spec0, 0.5 * cfg.t_end, cfg.t_end, threshold);
}

} // namespace peakonlab
