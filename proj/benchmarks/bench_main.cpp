#include <benchmark/benchmark.h>

#include <vector>

#include "peakonlab/algebra.hpp"
#include "peakonlab/factorize.hpp"
#include "peakonlab/lax.hpp"
#include "peakonlab/matrix.hpp"
#include "peakonlab/ode.hpp"
#include "peakonlab/spectrum.hpp"
#include "peakonlab/state.hpp"
#include "peakonlab/toda.hpp"

using namespace peakonlab;

namespace {

PeakonState bench_state(std::size_t n) {
    Sector sec;
    sec.tag = SectorTag::S_minus;
    return generate_state(1, n, sec, GeneratorParams{});
}

} // namespace

static void BM_rhs_raw(benchmark::State& state) {
    const PeakonState s = bench_state(static_cast<std::size_t>(state.range(0)));
    std::vector<double> dq(s.n), dp(s.n);
    for (auto _ : state) {
        rhs_raw(s.q, s.p, dq, dp);
        benchmark::DoNotOptimize(dq.data());
        benchmark::DoNotOptimize(dp.data());
    }
}
BENCHMARK(BM_rhs_raw)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

static void BM_eigendecompose(benchmark::State& state) {
    const Matrix L = lax_from_state(bench_state(static_cast<std::size_t>(state.range(0)))).L;
    for (auto _ : state) {
        Spectrum spec = eigendecompose(L);
        benchmark::DoNotOptimize(spec.lambdas.data());
    }
}
BENCHMARK(BM_eigendecompose)->Arg(4)->Arg(8)->Arg(16);

static void BM_factorize(benchmark::State& state) {
    const Matrix L = lax_from_state(bench_state(static_cast<std::size_t>(state.range(0)))).L;
    const Matrix G = sym_exp(L, 1.0);
    for (auto _ : state) {
        FactorizationPair fp = factorize(G);
        benchmark::DoNotOptimize(fp.b_plus.data().data());
    }
}
BENCHMARK(BM_factorize)->Arg(4)->Arg(8)->Arg(16);

static void BM_toda_step(benchmark::State& state) {
    const Matrix L = lax_from_state(bench_state(static_cast<std::size_t>(state.range(0)))).L;
    for (auto _ : state) {
        Matrix next = toda_step(L, 0.1, FlowSign::minus);
        benchmark::DoNotOptimize(next.data().data());
    }
}
BENCHMARK(BM_toda_step)->Arg(4)->Arg(8)->Arg(16);

static void BM_integrate_short(benchmark::State& state) {
    const PeakonState s0 = bench_state(static_cast<std::size_t>(state.range(0)));
    IntegratorConfig cfg;
    cfg.t_end = 1.0;
    cfg.rel_tol = 1e-8;
    cfg.abs_tol = 1e-10;
    for (auto _ : state) {
        Trajectory tr = integrate(s0, cfg);
        benchmark::DoNotOptimize(tr.times.data());
    }
}
BENCHMARK(BM_integrate_short)->Arg(4)->Arg(8);

BENCHMARK_MAIN();
