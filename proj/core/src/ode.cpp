#include "peakonlab/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "peakonlab/errors.hpp"
#include "peakonlab/lax.hpp"

namespace peakonlab {

void rhs_raw(const std::vector<double>& q, const std::vector<double>& p,
             std::vector<double>& dq, std::vector<double>& dp) {
    const std::size_t n = q.size();
    dq.assign(n, 0.0);
    dp.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double vel = 0.0;
        double force = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double d = q[j] - q[k];
            const double w = std::exp(-std::fabs(d)) * p[k];
            vel += w;
            if (d > 0.0) force += w;
            else if (d < 0.0) force -= w;
        }
        dq[j] = 0.5 * vel;
        dp[j] = 0.5 * p[j] * force;
    }
}

void rhs(const PeakonState& s, std::vector<double>& dq, std::vector<double>& dp) {
    validate_state(s);
    rhs_raw(s.q, s.p, dq, dp);
}

ConservedRow conserved_row(const PeakonState& s, double t) {
    ConservedRow row;
    row.t = t;
    row.P = momentum_sum(s);
    row.H = hamiltonian(s);
    const LaxOperator lax = lax_from_state(s);
    const std::size_t n = s.n;
    double tr1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr1 += lax.L(i, i);
    double tr2 = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) tr2 += lax.L(i, j) * lax.L(i, j);
    const Matrix L2 = lax.L * lax.L;
    double tr3 = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) tr3 += L2(i, j) * lax.L(j, i);
    row.trL1 = tr1;
    row.trL2 = tr2;
    row.trL3 = tr3;
    return row;
}

PeakonState Trajectory::state_at(std::size_t idx) const {
    if (idx >= times.size()) throw std::invalid_argument("trajectory: sample index out of range");
    PeakonState s;
    s.n = n;
    s.sector = sector;
    s.q = qs[idx];
    s.p = ps[idx];
    return s;
}

PeakonState Trajectory::final_state() const {
    if (times.empty()) throw std::invalid_argument("trajectory: empty");
    return state_at(times.size() - 1);
}

namespace {

PeakonState make_state(std::size_t n, const Sector& sector, const std::vector<double>& y) {
    PeakonState s;
    s.n = n;
    s.sector = sector;
    s.q.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
    s.p.assign(y.begin() + static_cast<std::ptrdiff_t>(n), y.end());
    return s;
}

} // namespace

PeakonState Trajectory::state_at_time(double t, std::string* method_out) const {
    if (times.empty()) throw std::invalid_argument("trajectory: empty");
    const double t0 = times.front();
    const double t1 = times.back();
    const double slack = 1e-12 * (1.0 + std::fabs(t1));
    if (t < t0 - slack || t > t1 + slack) {
        throw std::invalid_argument("trajectory: time " + std::to_string(t) +
                                    " outside recorded range");
    }
    t = std::clamp(t, t0, t1);

    // Exact hit on a recorded sample?
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it != times.end() && std::fabs(*it - t) <= slack) {
        if (method_out) *method_out = "sample";
        return state_at(static_cast<std::size_t>(it - times.begin()));
    }

    if (!dense.empty()) {
        // Dense segments tile [t0, t_end] over all accepted steps.
        std::size_t lo = 0, hi = dense.size();
        while (lo + 1 < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (dense[mid].t0 <= t) lo = mid;
            else hi = mid;
        }
        const DenseSegment& seg = dense[lo];
        const double theta = (t - seg.t0) / seg.h;
        const double theta1 = 1.0 - theta;
        std::vector<double> y(2 * n);
        for (std::size_t i = 0; i < 2 * n; ++i) {
            y[i] = seg.r1[i] +
                   theta * (seg.r2[i] + theta1 * (seg.r3[i] + theta * (seg.r4[i] + theta1 * seg.r5[i])));
        }
        if (method_out) *method_out = "dense";
        return make_state(n, sector, y);
    }

    // Cubic Hermite between the two bracketing samples, with derivatives
    // recomputed from the RHS.
    const std::size_t b = static_cast<std::size_t>(it - times.begin());
    const std::size_t a = b - 1;
    const double h = times[b] - times[a];
    const double theta = (t - times[a]) / h;
    std::vector<double> dqa, dpa, dqb, dpb;
    rhs_raw(qs[a], ps[a], dqa, dpa);
    rhs_raw(qs[b], ps[b], dqb, dpb);
    const double h00 = (1.0 + 2.0 * theta) * (1.0 - theta) * (1.0 - theta);
    const double h10 = theta * (1.0 - theta) * (1.0 - theta);
    const double h01 = theta * theta * (3.0 - 2.0 * theta);
    const double h11 = theta * theta * (theta - 1.0);
    std::vector<double> y(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = h00 * qs[a][i] + h10 * h * dqa[i] + h01 * qs[b][i] + h11 * h * dqb[i];
        y[n + i] = h00 * ps[a][i] + h10 * h * dpa[i] + h01 * ps[b][i] + h11 * h * dpb[i];
    }
    if (method_out) *method_out = "hermite";
    return make_state(n, sector, y);
}

namespace {

// Dormand-Prince 5(4) tableau. The system is autonomous, so the stage
// times are never needed.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kA71 = 35.0 / 384, kA73 = 500.0 / 1113, kA74 = 125.0 / 192,
                 kA75 = -2187.0 / 6784, kA76 = 11.0 / 84;
// Error = 5th-order minus embedded 4th-order weights.
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;
// Dense-output constants.
constexpr double kD1 = -12715105075.0 / 11282082432.0;
constexpr double kD3 = 87487479700.0 / 32700410799.0;
constexpr double kD4 = -10690763975.0 / 1880347072.0;
constexpr double kD5 = 701980252875.0 / 199316789632.0;
constexpr double kD6 = -1453857185.0 / 822651844.0;
constexpr double kD7 = 69997945.0 / 29380423.0;

struct System {
    std::size_t n;
    void operator()(const std::vector<double>& y, std::vector<double>& f) const {
        const std::size_t m = n;
        f.resize(2 * m);
        for (std::size_t j = 0; j < m; ++j) {
            double vel = 0.0;
            double force = 0.0;
            const double qj = y[j];
            for (std::size_t k = 0; k < m; ++k) {
                const double d = qj - y[k];
                const double w = std::exp(-std::fabs(d)) * y[m + k];
                vel += w;
                if (d > 0.0) force += w;
                else if (d < 0.0) force -= w;
            }
            f[j] = 0.5 * vel;
            f[m + j] = 0.5 * y[m + j] * force;
        }
    }
};

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

// Automatic starting step (standard order-5 heuristic).
double initial_step_guess(const System& sys, const std::vector<double>& y0,
                          const std::vector<double>& f0, double rtol, double atol,
                          double hmax) {
    const std::size_t N = y0.size();
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double sc = atol + rtol * std::fabs(y0[i]);
        dnf += (f0[i] / sc) * (f0[i] / sc);
        dny += (y0[i] / sc) * (y0[i] / sc);
    }
    double h;
    if (dnf <= 1e-10 || dny <= 1e-10) h = 1e-6;
    else h = 0.01 * std::sqrt(dny / dnf);
    h = std::min(h, hmax);

    std::vector<double> y1(N), f1;
    for (std::size_t i = 0; i < N; ++i) y1[i] = y0[i] + h * f0[i];
    sys(y1, f1);
    double der2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double sc = atol + rtol * std::fabs(y0[i]);
        const double d = (f1[i] - f0[i]) / sc;
        der2 += d * d;
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(der2, std::sqrt(dnf));
    double h1;
    if (der12 <= 1e-15) h1 = std::max(1e-6, h * 1e-3);
    else h1 = std::pow(0.01 / der12, 0.2);
    return std::min({100.0 * h, h1, hmax});
}

} // namespace

Trajectory integrate(const PeakonState& s0, const IntegratorConfig& cfg) {
    validate_state(s0);
    if (!(cfg.t_end > 0.0)) throw std::invalid_argument("integrate: t_end must be positive");
    if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0)) {
        throw std::invalid_argument("integrate: tolerances must be positive");
    }
    if (cfg.output_stride == 0) throw std::invalid_argument("integrate: output_stride must be >= 1");

    const std::size_t n = s0.n;
    const std::size_t N = 2 * n;
    const System sys{n};

    std::vector<double> y(N);
    for (std::size_t i = 0; i < n; ++i) y[i] = s0.q[i];
    for (std::size_t i = 0; i < n; ++i) y[n + i] = s0.p[i];

    const double P0 = momentum_sum(s0);
    const double q_inf0 = inf_norm(std::vector<double>(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n)));

    Trajectory tr;
    tr.n = n;
    tr.sector = s0.sector;

    auto record = [&](double t, const std::vector<double>& yy) {
        tr.times.push_back(t);
        tr.qs.emplace_back(yy.begin(), yy.begin() + static_cast<std::ptrdiff_t>(n));
        tr.ps.emplace_back(yy.begin() + static_cast<std::ptrdiff_t>(n), yy.end());
        tr.ledger.push_back(conserved_row(make_state(n, s0.sector, yy), t));
    };
    record(0.0, y);

    const double hmax = (cfg.max_step > 0.0) ? cfg.max_step : cfg.t_end / 10.0;
    std::vector<double> k1(N), k2(N), k3(N), k4(N), k5(N), k6(N), k7(N), ynew(N), ytmp(N);
    sys(y, k1);
    tr.diag.max_rhs_norm = inf_norm(k1);

    double h = (cfg.initial_step > 0.0)
                   ? std::min(cfg.initial_step, hmax)
                   : initial_step_guess(sys, y, k1, cfg.rel_tol, cfg.abs_tol, hmax);

    // PI step-size controller constants.
    const double safe = 0.9, fac1 = 0.2, fac2 = 10.0, beta = 0.04;
    const double expo1 = 0.2 - beta * 0.75;
    const double facc1 = 1.0 / fac1, facc2 = 1.0 / fac2;
    double facold = 1e-4;
    bool reject = false;

    double t = 0.0;
    std::size_t steps_taken = 0;
    std::size_t accepted_since_record = 0;

    while (t < cfg.t_end) {
        if (++steps_taken > cfg.max_steps) {
            throw NumericalError("integrate: step budget exceeded at t = " + std::to_string(t));
        }
        if (h < 1e-14 * std::max(1.0, std::fabs(t))) {
            throw NumericalError("integrate: step-size underflow at t = " + std::to_string(t));
        }
        bool last = false;
        if (t + h >= cfg.t_end) {
            h = cfg.t_end - t;
            last = true;
        }

        // Stages.
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * kA21 * k1[i];
        sys(ytmp, k2);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
        sys(ytmp, k3);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
        sys(ytmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i]);
        sys(ytmp, k5);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] +
                      h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] + kA64 * k4[i] + kA65 * k5[i]);
        sys(ytmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] +
                      h * (kA71 * k1[i] + kA73 * k3[i] + kA74 * k4[i] + kA75 * k5[i] + kA76 * k6[i]);
        sys(ynew, k7);

        // Error estimate.
        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double e = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] +
                                  kE6 * k6[i] + kE7 * k7[i]);
            const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / static_cast<double>(N));

        const double fac11 = std::pow(err, expo1);
        double fac = fac11 / std::pow(facold, beta);
        fac = std::max(facc2, std::min(facc1, fac / safe));
        double hnew = h / fac;

        if (err <= 1.0) {
            facold = std::max(err, 1e-4);
            tr.diag.accepted++;
            const double t_new = last ? cfg.t_end : t + h;

            if (cfg.store_dense) {
                DenseSegment seg;
                seg.t0 = t;
                seg.h = h;
                seg.r1.resize(N);
                seg.r2.resize(N);
                seg.r3.resize(N);
                seg.r4.resize(N);
                seg.r5.resize(N);
                for (std::size_t i = 0; i < N; ++i) {
                    const double ydiff = ynew[i] - y[i];
                    const double bspl = h * k1[i] - ydiff;
                    seg.r1[i] = y[i];
                    seg.r2[i] = ydiff;
                    seg.r3[i] = bspl;
                    seg.r4[i] = ydiff - h * k7[i] - bspl;
                    seg.r5[i] = h * (kD1 * k1[i] + kD3 * k3[i] + kD4 * k4[i] + kD5 * k5[i] +
                                     kD6 * k6[i] + kD7 * k7[i]);
                }
                tr.dense.push_back(std::move(seg));
            }

            y = ynew;
            t = t_new;
            k1 = k7; // first-same-as-last
            tr.diag.max_rhs_norm = std::max(tr.diag.max_rhs_norm, inf_norm(k1));

            // Sector ordering check with collision diagnostics.
            PeakonState snapshot = make_state(n, s0.sector, y);
            std::size_t bad = 0;
            if (!sector_ordering_holds(snapshot, cfg.collision_tol, &bad)) {
                throw NumericalError("integrate: ordering collision at t = " + std::to_string(t) +
                                     " between peaks " + std::to_string(bad + 1) + " and " +
                                     std::to_string(bad + 2));
            }
            // A priori growth bounds.
            const double slack = 1e-8;
            const double q_bound = q_inf0 + 0.5 * P0 * t;
            if (inf_norm(std::vector<double>(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n))) >
                q_bound * (1.0 + slack) + slack) {
                tr.diag.apriori_ok = false;
            }
            const double p_growth = std::exp(0.5 * P0 * t) * (1.0 + slack);
            for (std::size_t i = 0; i < n; ++i) {
                if (y[n + i] > s0.p[i] * p_growth) tr.diag.apriori_ok = false;
            }

            if (++accepted_since_record >= cfg.output_stride || t >= cfg.t_end) {
                accepted_since_record = 0;
                record(t, y);
            }

            if (std::fabs(hnew) > hmax) hnew = hmax;
            if (reject) hnew = std::min(hnew, h);
            reject = false;
        } else {
            hnew = h / std::min(facc1, fac11 / safe);
            reject = true;
            tr.diag.rejected++;
        }
        h = hnew;
    }
    return tr;
}

ConservedReport conserved_report(const Trajectory& tr) {
    if (tr.ledger.empty()) throw std::invalid_argument("conserved_report: empty trajectory");
    const ConservedRow& first = tr.ledger.front();
    ConservedReport rep;
    auto drift = [](double v, double v0) {
        const double scale = std::max(std::fabs(v0), 1e-300);
        return std::fabs(v - v0) / scale;
    };
    for (const ConservedRow& row : tr.ledger) {
        rep.max_rel_drift_P = std::max(rep.max_rel_drift_P, drift(row.P, first.P));
        rep.max_rel_drift_H = std::max(rep.max_rel_drift_H, drift(row.H, first.H));
        rep.max_rel_drift_trL1 = std::max(rep.max_rel_drift_trL1, drift(row.trL1, first.trL1));
        rep.max_rel_drift_trL2 = std::max(rep.max_rel_drift_trL2, drift(row.trL2, first.trL2));
        rep.max_rel_drift_trL3 = std::max(rep.max_rel_drift_trL3, drift(row.trL3, first.trL3));
    }
    return rep;
}

} // namespace peakonlab
