#include "gibbs/divergences.hpp"
#include "gibbs/linalg.hpp"
#include "gibbs/recovery.hpp"
#include "gibbs/rng.hpp"

#include <benchmark/benchmark.h>

using namespace gibbs;

namespace {

// Backend selection runs a self-test on first use; keep it out of the timings.
[[maybe_unused]] const bool kWarm = [] {
    linalg::backend_description();
    return true;
}();

void BM_Gemm(benchmark::State& state) {
    auto gen = make_stream(1);
    const auto n = static_cast<Eigen::Index>(state.range(0));
    const Matrix a = gaussian_matrix(gen, n, n), b = gaussian_matrix(gen, n, n);
    for (auto _ : state) benchmark::DoNotOptimize(linalg::gemm(a, b));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Gemm)->RangeMultiplier(2)->Range(32, 512)->Unit(benchmark::kMillisecond);

void BM_HermitianEigen(benchmark::State& state) {
    auto gen = make_stream(2);
    const Matrix h = random_hermitian(gen, state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(linalg::hermitian_eigen(h));
}
BENCHMARK(BM_HermitianEigen)->RangeMultiplier(2)->Range(32, 512)->Unit(benchmark::kMillisecond);

void BM_GibbsState(benchmark::State& state) {
    const Interaction tfim = preset_model("tfim:g=1");
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(GibbsEnsemble(tfim, Interval(1, n), 1.0).state());
}
BENCHMARK(BM_GibbsState)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

// rho_AB composed with rho_BC on a 10-site chain.
void BM_ComposeOverlapping(benchmark::State& state) {
    const GibbsEnsemble e(preset_model("heisenberg"), Interval(1, 10), 1.0);
    const int b = static_cast<int>(state.range(0));
    const Partition p(e.interval(), (10 - b) / 2, b, 10 - b - (10 - b) / 2);
    const Operator ab = e.reduced_state(p.ab()), bc = e.reduced_state(p.bc());
    for (auto _ : state) benchmark::DoNotOptimize(compose(ab, bc));
}
BENCHMARK(BM_ComposeOverlapping)->DenseRange(2, 8, 2)->Unit(benchmark::kMillisecond);

void BM_Step1(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const GibbsEnsemble e(preset_model("random_nn:seed=1"), Interval(1, n), 1.0);
    const Partition p(e.interval(), 1, n - 2, 1);
    for (auto _ : state) benchmark::DoNotOptimize(step1_factorization(e, p).residual);
}
BENCHMARK(BM_Step1)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

void BM_MutualInformation(benchmark::State& state) {
    const GibbsEnsemble e(preset_model("tfim:g=1"), Interval(1, 10), 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(mutual_information(e, {1, 2}, {9, 10}));
}
BENCHMARK(BM_MutualInformation)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
