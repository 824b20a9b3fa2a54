#include <benchmark/benchmark.h>

#include <equimesh/equimesh.hpp>

using namespace equimesh;

namespace {

StripSystem whole_domain(int n) {
    const ComputationalGrid g(n, n);
    const SubdomainSpec spec{0, n - 1, TransmissionKind::physical(), TransmissionKind::physical()};
    return {g, spec, BoundaryMode::OneDimEP, {0.7, 0.05}, exp_sine_problem(), std::nullopt,
            std::nullopt};
}

void BM_Residual(benchmark::State& state) {
    const auto sys = whole_domain(static_cast<int>(state.range(0)));
    const StripLayout layout(sys.spec, sys.grid);
    const auto x = state_from_mesh(layout, make_uniform_mesh(sys.grid));
    std::vector<double> r(layout.size());
    for (auto _ : state) {
        assemble(sys, x, r);
        benchmark::DoNotOptimize(r.data());
    }
}
BENCHMARK(BM_Residual)->Arg(12)->Arg(18)->Arg(33);

void BM_Jacobian(benchmark::State& state) {
    const auto sys = whole_domain(static_cast<int>(state.range(0)));
    const StripLayout layout(sys.spec, sys.grid);
    const auto x = state_from_mesh(layout, make_uniform_mesh(sys.grid));
    const auto pattern = strip_jacobian_pattern(layout);
    ResidualFn fn = [&](std::span<const double> v, std::span<double> r) { assemble(sys, v, r); };
    std::vector<double> r0(layout.size());
    fn(x, r0);
    for (auto _ : state) {
        auto j = jacobian_fd(fn, x, r0, 1e-7, &pattern);
        benchmark::DoNotOptimize(j);
    }
}
BENCHMARK(BM_Jacobian)->Arg(12)->Arg(18);

void BM_SingleDomainSolve(benchmark::State& state) {
    SchwarzConfig c;
    c.grid = ComputationalGrid(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto m = solve_single_domain(c);
        benchmark::DoNotOptimize(m);
    }
}
BENCHMARK(BM_SingleDomainSolve)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_SchwarzRobin(benchmark::State& state) {
    SchwarzConfig c;
    c.kind = TransmissionKind::linear_robin(2);
    c.concurrent = state.range(0) != 0;
    const auto ref = solve_single_domain(c);
    for (auto _ : state) {
        auto r = schwarz_iterate(c, &ref);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_SchwarzRobin)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
