// Acceptance gate for the peakon laboratory: twelve numbered criteria, one
// pass/fail line each, nonzero exit when any of them fails. Tolerances are
// pinned here on purpose - do not loosen them to make a run green.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "peakonlab/algebra.hpp"
#include "peakonlab/asymptotics.hpp"
#include "peakonlab/closed_form.hpp"
#include "peakonlab/errors.hpp"
#include "peakonlab/factorize.hpp"
#include "peakonlab/lax.hpp"
#include "peakonlab/matrix.hpp"
#include "peakonlab/ode.hpp"
#include "peakonlab/spectrum.hpp"
#include "peakonlab/state.hpp"
#include "peakonlab/toda.hpp"
#include "peakonlab/tridiagonal.hpp"
#include "peakonlab/wavefield.hpp"

using namespace peakonlab;

namespace {

struct Line {
    int id;
    std::string name;
    bool pass;
    std::string detail;
};

std::vector<Line> g_lines;

void report(int id, const char* name, bool pass, const std::string& detail) {
    g_lines.push_back({id, name, pass, detail});
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

Matrix seeded_symmetric(std::uint64_t seed, std::size_t n) {
    std::mt19937_64 gen(seed);
    Matrix A(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = static_cast<double>(gen() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
            A(i, j) = v;
            A(j, i) = v;
        }
    return A;
}

PeakonState frozen_sorting_state() {
    PeakonState s;
    s.n = 4;
    s.q = {1.5, 0.5, -0.5, -1.5};
    s.p = {0.6, 0.36, 0.216, 0.1296}; // geometric, ratio 0.6
    s.sector.tag = SectorTag::S_plus;
    return s;
}

PeakonState frozen_sorting_state_mirror() {
    PeakonState s;
    s.n = 4;
    s.q = {-1.5, -0.5, 0.5, 1.5};
    s.p = {0.1296, 0.216, 0.36, 0.6};
    s.sector.tag = SectorTag::S_minus;
    return s;
}

// Shared batch for criteria 1, 2, and 11: sixty seeded states, both
// orderings, three sizes, integrated to t = 10 along both routes.
struct BatchOutcome {
    double route_diff = 0.0;      // max |L_ode(t) - L_fact(t)| over the batch
    double eig_drift_fact = 0.0;  // max relative eigenvalue drift, matrix route
    double eig_drift_ode = 0.0;   // max relative eigenvalue drift, ode route
    double drift_P = 0.0;         // max relative momentum-sum drift
    double drift_H = 0.0;         // max relative energy drift
    double dp_sum = 0.0;          // max |sum_j dp_j| over start/end states
    double seconds = 0.0;
    std::size_t runs = 0;
};

double max_rel_eig_drift(const std::vector<double>& now, const std::vector<double>& ref) {
    double worst = 0.0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
        worst = std::max(worst, std::fabs(now[k] - ref[k]) / std::fabs(ref[k]));
    }
    return worst;
}

double abs_dp_sum(const PeakonState& s) {
    std::vector<double> dq, dp;
    rhs(s, dq, dp);
    double sum = 0.0;
    for (double v : dp) sum += v;
    return std::fabs(sum);
}

BatchOutcome run_batch() {
    BatchOutcome out;
    const auto start = std::chrono::steady_clock::now();
    const double t_end = 10.0;
    for (SectorTag tag : {SectorTag::S_minus, SectorTag::S_plus}) {
        for (std::size_t n : {2u, 4u, 6u}) {
            for (std::uint64_t seed = 1; seed <= 10; ++seed) {
                Sector sec;
                sec.tag = tag;
                const PeakonState s0 = generate_state(seed, n, sec, GeneratorParams{});
                const Matrix L0 = lax_from_state(s0).L;
                const std::vector<double> lam0 = eigendecompose(L0).lambdas;

                IntegratorConfig cfg;
                cfg.t_end = t_end;
                cfg.rel_tol = 1e-10;
                cfg.abs_tol = 1e-12;
                const Trajectory tr = integrate(s0, cfg);
                const Matrix L_ode = lax_from_state(tr.final_state()).L;
                const Matrix L_fact = toda_solve(L0, t_end, flow_for_sector(tag), 0.25);

                out.route_diff = std::max(out.route_diff, max_abs_diff(L_ode, L_fact));
                out.eig_drift_fact = std::max(
                    out.eig_drift_fact, max_rel_eig_drift(eigendecompose(L_fact).lambdas, lam0));
                out.eig_drift_ode = std::max(
                    out.eig_drift_ode, max_rel_eig_drift(eigendecompose(L_ode).lambdas, lam0));

                const ConservedReport rep = conserved_report(tr);
                out.drift_P = std::max(out.drift_P, rep.max_rel_drift_P);
                out.drift_H = std::max(out.drift_H, rep.max_rel_drift_H);
                out.dp_sum = std::max(out.dp_sum, abs_dp_sum(s0));
                out.dp_sum = std::max(out.dp_sum, abs_dp_sum(tr.final_state()));
                ++out.runs;
            }
        }
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

// --- criteria -------------------------------------------------------------

void criterion_1_2_11() {
    const BatchOutcome b = run_batch();

    const double tol_route = 1e-5;
    const bool pass1 = b.route_diff <= tol_route && b.seconds <= 60.0;
    report(1, "two-route trajectory agreement", pass1,
           "max |L_ode - L_fact| = " + num(b.route_diff) + " (tol " + num(tol_route) + ", " +
               std::to_string(b.runs) + " runs in " + num(b.seconds) + " s, limit 60 s)");

    const double tol_fact = 1e-9, tol_ode = 1e-6;
    const bool pass2 = b.eig_drift_fact <= tol_fact && b.eig_drift_ode <= tol_ode;
    report(2, "eigenvalue conservation on both routes", pass2,
           "rel drift: matrix route " + num(b.eig_drift_fact) + " (tol " + num(tol_fact) +
               "), ode route " + num(b.eig_drift_ode) + " (tol " + num(tol_ode) + ")");

    const double tol_P = 10.0 * 1e-10, tol_H = 100.0 * 1e-10, tol_dp = 1e-13;
    const bool pass11 = b.drift_P <= tol_P && b.drift_H <= tol_H && b.dp_sum <= tol_dp;
    report(11, "conserved-quantity drift budgets", pass11,
           "P " + num(b.drift_P) + " (tol " + num(tol_P) + "), H " + num(b.drift_H) + " (tol " +
               num(tol_H) + "), |sum dp| " + num(b.dp_sum) + " (tol " + num(tol_dp) + ")");
}

void criterion_3_4() {
    // Geometric four-peak state in the descending sector: momenta must sort
    // onto twice the eigenvalues, positions onto the eigenvalue speeds.
    const PeakonState s0 = frozen_sorting_state();
    ConvergedRunOptions opt;
    opt.t_start = 100.0;
    opt.t_cap = 400.0;
    opt.threshold = 1e-3;
    opt.ode.max_step = 2.0;
    const AsymptoticsReport rep = run_until_converged(s0, opt);

    // Two-peak analytic limits: momenta 1 +- e^{-1}.
    PeakonState pair;
    pair.n = 2;
    pair.q = {1.0, -1.0};
    pair.p = {1.0, 1.0};
    pair.sector.tag = SectorTag::S_plus;
    IntegratorConfig pair_cfg;
    pair_cfg.t_end = 100.0;
    pair_cfg.max_step = 2.0;
    const PeakonState pair_end = integrate(pair, pair_cfg).final_state();
    const double pair_res = std::max(std::fabs(pair_end.p[0] - (1.0 + std::exp(-1.0))),
                                     std::fabs(pair_end.p[1] - (1.0 - std::exp(-1.0))));

    const bool pass3 = rep.momenta_converged && rep.max_momentum_residual <= 1e-3 &&
                       rep.t_end <= 400.0 && pair_res <= 1e-4;
    report(3, "long-time momentum sorting", pass3,
           "four-peak residual " + num(rep.max_momentum_residual) + " at t = " + num(rep.t_end) +
               " (tol 1e-03), two-peak vs closed limits " + num(pair_res) + " (tol 1e-04)");

    // Criterion 4 fits the same converged run over its trailing half.
    IntegratorConfig cfg = opt.ode;
    cfg.t_end = rep.t_end;
    const Trajectory tr = integrate(s0, cfg);
    const Spectrum spec0 = eigendecompose(lax_from_state(s0).L, -1.0, EigenInput::lax);
    const AsymptoticsReport fit = scattering_fit(tr, spec0, 0.5 * rep.t_end, rep.t_end, 1e-3);
    const bool pass4 = fit.max_slope_dev <= 1e-3;
    report(4, "late-time speeds match the eigenvalues", pass4,
           "max slope deviation " + num(fit.max_slope_dev) + " (tol 1e-03, window [" +
               num(0.5 * rep.t_end) + ", " + num(rep.t_end) + "])");
}

void criterion_5() {
    // Ascending sector: the same frozen state mirrored; targets reverse.
    ConvergedRunOptions opt;
    opt.t_start = 100.0;
    opt.t_cap = 400.0;
    opt.threshold = 1e-3;
    opt.ode.max_step = 2.0;
    const AsymptoticsReport rep = run_until_converged(frozen_sorting_state_mirror(), opt);

    // Truncation trend: deepen a fixed geometric tail (ratio 1/2) and watch
    // the back peak's fitted speed and momentum plateau both shrink.
    std::vector<Trajectory> runs;
    for (std::size_t n : {3u, 4u, 5u}) {
        PeakonState s;
        s.n = n;
        s.sector.tag = SectorTag::S_minus;
        s.q.resize(n);
        s.p.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            s.q[j] = static_cast<double>(j) - 0.5 * static_cast<double>(n - 1);
            s.p[j] = std::pow(0.5, static_cast<double>(n - 1 - j));
        }
        IntegratorConfig cfg;
        cfg.t_end = 1600.0;
        cfg.rel_tol = 1e-9;
        cfg.abs_tol = 1e-12;
        cfg.max_step = 8.0;
        runs.push_back(integrate(s, cfg));
    }
    const TrendTable trend = sublinear_trend(runs);

    const bool pass = rep.momenta_converged && rep.max_momentum_residual <= 1e-3 &&
                      trend.slopes_decreasing && trend.plateaus_decreasing;
    report(5, "ascending-sector limits and truncation trend", pass,
           "reversed-target residual " + num(rep.max_momentum_residual) +
               " (tol 1e-03); slopes " + std::string(trend.slopes_decreasing ? "dec" : "NOT dec") +
               " [" + num(trend.rows[0].q1_slope) + ", " + num(trend.rows[1].q1_slope) + ", " +
               num(trend.rows[2].q1_slope) + "], plateaus " +
               std::string(trend.plateaus_decreasing ? "dec" : "NOT dec"));
}

void criterion_6() {
    Sector sec;
    sec.tag = SectorTag::S_minus;
    const PeakonState s0 = generate_state(11, 5, sec, GeneratorParams{});
    const Matrix L0 = lax_from_state(s0).L;
    const Spectrum spec0 = eigendecompose(L0, -1.0, EigenInput::lax);

    double worst = 0.0;
    for (double t : {1.0, 2.0, 5.0, 10.0}) {
        Matrix B = Matrix::identity(5);
        (void)toda_solve(L0, t, FlowSign::minus, 0.25, &B);
        const Matrix phi_t = transpose(B) * spec0.phi;
        const std::vector<double> closed = first_component_evolution(spec0, t);
        for (std::size_t k = 0; k < 5; ++k) {
            worst = std::max(worst, std::fabs(phi_t(0, k) - closed[k]));
        }
    }
    report(6, "closed-form eigenvector first components", worst <= 1e-8,
           "max |stepped - closed| = " + num(worst) + " over t in {1,2,5,10} (tol 1e-08)");
}

void criterion_7() {
    Sector sec;
    sec.tag = SectorTag::S_minus;
    const PeakonState s0 = generate_state(11, 5, sec, GeneratorParams{});
    const Matrix L0 = lax_from_state(s0).L;
    const Spectrum spec0 = eigendecompose(L0, -1.0, EigenInput::lax);

    double worst = 0.0;
    for (std::size_t k : {1u, 2u, 3u}) {
        for (double t : {1.0, 3.0}) {
            worst = std::max(worst, compound_evolution_check(spec0, L0, t, k, 0.25));
        }
    }

    // Limit law on a well-separated descending spectrum.
    PeakonState sep;
    sep.n = 5;
    sep.q = {2.0, 1.0, 0.0, -1.0, -2.0};
    sep.p = {10.0, 8.0, 6.0, 4.0, 2.0};
    sep.sector.tag = SectorTag::S_plus;
    const Spectrum spec_sep = eigendecompose(lax_from_state(sep).L, -1.0, EigenInput::lax);
    double worst_gap = 0.0;
    for (std::size_t k : {1u, 2u, 3u}) {
        worst_gap = std::max(worst_gap, 1.0 - limit_law_indicator(spec_sep, 40.0, k));
    }

    const bool pass = worst <= 1e-8 && worst_gap <= 1e-6;
    report(7, "minor evolution identity and limit law", pass,
           "max minor discrepancy " + num(worst) + " (tol 1e-08), 1 - indicator " +
               num(worst_gap) + " at t = 40 (tol 1e-06)");
}

void criterion_8_9() {
    double inv_resid = 0.0;
    double det_rel = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const std::size_t n = 2 + static_cast<std::size_t>(seed % 7);
        Sector sec;
        sec.tag = SectorTag::S_minus;
        const PeakonState s = generate_state(seed, n, sec, GeneratorParams{});
        const LaxOperator lax = lax_from_state(s);

        const Matrix JL = tridiagonal_inverse(s).to_matrix() * lax.L;
        inv_resid = std::max(inv_resid, max_abs_diff(JL, Matrix::identity(n)));

        const std::vector<double> dets = leading_minor_dets(lax);
        for (std::size_t k = 1; k <= n; ++k) {
            Matrix sub(k);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j) sub(i, j) = lax.L(i, j);
            const double lu = lu_determinant(sub);
            det_rel = std::max(det_rel, std::fabs(dets[k - 1] - lu) / std::fabs(lu));
        }
    }

    PeakonState pair;
    pair.n = 2;
    pair.q = {-1.0, 1.0};
    pair.p = {1.0, 1.0};
    pair.sector.tag = SectorTag::S_minus;
    const double denom = 1.0 - std::exp(-2.0);
    const TridiagonalInverse J2 = tridiagonal_inverse(pair);
    const double entry_err =
        std::max({std::fabs(J2.a[0] - 2.0 / denom), std::fabs(J2.a[1] - 2.0 / denom),
                  std::fabs(J2.b[0] - 2.0 * std::exp(-1.0) / denom)});
    const double det2_err =
        std::fabs(leading_minor_dets(lax_from_state(pair))[1] - denom / 4.0);

    const bool pass8 = inv_resid <= 1e-9 && entry_err <= 1e-12;
    report(8, "tridiagonal inverse of the interaction matrix", pass8,
           "max |J L - I| = " + num(inv_resid) + " over 20 states (tol 1e-09), two-peak entries " +
               num(entry_err) + " (tol 1e-12)");

    const bool pass9 = det_rel <= 1e-10 && det2_err <= 1e-15;
    report(9, "gap-product determinant formula", pass9,
           "max rel error vs LU " + num(det_rel) + " (tol 1e-10), two-peak value " +
               num(det2_err) + " (tol 1e-15)");
}

void criterion_10() {
    const Matrix A = seeded_symmetric(101, 6);
    const Matrix B = seeded_symmetric(102, 6);

    const double mybe = mybe_residual(A, B);
    const double split = max_abs(A - project_skew(A) - project_lower(A));
    const double adj = std::max(
        std::fabs(ad_pairing(dual_project_skew(A), B) - ad_pairing(A, project_skew(B))),
        std::fabs(ad_pairing(dual_project_lower(A), B) - ad_pairing(A, project_lower(B))));

    Sector sec;
    sec.tag = SectorTag::S_minus;
    const PeakonState s = generate_state(5, 5, sec, GeneratorParams{});
    const Matrix L = lax_from_state(s).L;
    double hier = max_abs(r_bracket(L, L));
    hier = std::max(hier, std::fabs(lie_poisson_bracket(2.0 * L, 3.0 * (L * L), L)));

    bool pattern_kept = true;
    for (double t : {0.5, 1.5}) {
        const Matrix moved = coadjoint_action(factorize(sym_exp(L, t)), L);
        pattern_kept = pattern_kept && is_semiseparable(moved, 1e-9);
    }

    const bool pass =
        mybe <= 1e-12 && split == 0.0 && adj <= 1e-12 && hier <= 1e-12 && pattern_kept;
    report(10, "bracket algebra identities", pass,
           "yang-baxter " + num(mybe) + ", splitting " + num(split) + " (exact), adjointness " +
               num(adj) + ", hierarchy " + num(hier) + " (tol 1e-12), pattern " +
               (pattern_kept ? "kept" : "BROKEN"));
}

void criterion_12() {
    // Two equal peaks, gap ln 5, golden-ratio offset: the long-time phase
    // shifts vanish, so the profile target is met without recentering.
    const double golden = 0.5 * (1.0 + std::sqrt(5.0));
    PeakonState pair;
    pair.n = 2;
    pair.q = {0.5 * std::log(5.0) - std::log(golden), -0.5 * std::log(5.0) - std::log(golden)};
    pair.p = {1.0, 1.0};
    pair.sector.tag = SectorTag::S_plus;
    const Spectrum spec0 = eigendecompose(lax_from_state(pair).L, -1.0, EigenInput::lax);

    const double t = 100.0;
    IntegratorConfig cfg;
    cfg.t_end = t;
    cfg.max_step = 2.0;
    const Trajectory tr = integrate(pair, cfg);
    WaveGridSpec grid;
    grid.x_min = spec0.lambdas[1] * t - 20.0;
    grid.x_max = spec0.lambdas[0] * t + 20.0;
    grid.count = 4001;
    const WaveResidual res = asymptotic_residual(tr.final_state(), spec0, t, grid);

    PeakonState solo;
    solo.n = 1;
    solo.q = {0.0};
    solo.p = {1.2};
    solo.sector.tag = SectorTag::S_plus;
    const Spectrum spec_solo = eigendecompose(lax_from_state(solo).L, -1.0, EigenInput::lax);
    IntegratorConfig solo_cfg;
    solo_cfg.t_end = 40.0;
    const Trajectory solo_tr = integrate(solo, solo_cfg);
    WaveGridSpec solo_grid;
    solo_grid.x_min = 0.6 * 40.0 - 20.0;
    solo_grid.x_max = 0.6 * 40.0 + 20.0;
    solo_grid.count = 801;
    const WaveResidual solo_res =
        asymptotic_residual(solo_tr.final_state(), spec_solo, 40.0, solo_grid);

    const bool pass = res.sup_residual <= 2e-3 && res.support_covered &&
                      solo_res.sup_residual <= 1e-12;
    report(12, "wave profile long-time asymptotics", pass,
           "two-peak sup residual " + num(res.sup_residual) + " at t = 100 (tol 2e-03), " +
               "single-peak " + num(solo_res.sup_residual) + " at t = 40 (tol 1e-12)");
}

} // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    std::printf("acceptance gate: 12 criteria\n");
    try {
        criterion_1_2_11();
        criterion_3_4();
        criterion_5();
        criterion_6();
        criterion_7();
        criterion_8_9();
        criterion_10();
        criterion_12();
    } catch (const std::exception& e) {
        std::printf("ABORT: unexpected exception: %s\n", e.what());
        return 2;
    }
    std::sort(g_lines.begin(), g_lines.end(),
              [](const Line& a, const Line& b) { return a.id < b.id; });
    int failures = 0;
    for (const Line& line : g_lines) {
        std::printf("[%2d] %-44s %s  %s\n", line.id, line.name.c_str(),
                    line.pass ? "PASS" : "FAIL", line.detail.c_str());
        if (!line.pass) ++failures;
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d/12 criteria passed in %.1f s\n", 12 - failures, seconds);
    return failures == 0 ? 0 : 1;
}
