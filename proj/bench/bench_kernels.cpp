// Serial reference kernels vs the OpenMP variants, plus two higher-level
// workloads that sit on top of them.  Build requires Google Benchmark.
#include <benchmark/benchmark.h>

#include <vector>

#include "singlet/bell.hpp"
#include "singlet/kernels.hpp"
#include "singlet/observables.hpp"
#include "singlet/rotation.hpp"
#include "singlet/spin.hpp"
#include "singlet/state.hpp"

using namespace singlet;

namespace {

std::vector<cplx> dense_vector(int n) {
    const DenseState d = to_dense(SingletState::build(n));
    return {d.amplitudes().begin(), d.amplitudes().end()};
}

Matrix test_operator(int n) {
    return rotation_operator(SpinFrame::make(n), Direction{0.7, 0.3}).u;
}

void bm_apply_factor_serial(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Matrix op = test_operator(n);
    std::vector<cplx> v = dense_vector(n);
    for (auto _ : state) {
        apply_factor_serial(v, n, n, n / 2, op);
        benchmark::DoNotOptimize(v.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(v.size()));
}

void bm_apply_factor_omp(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Matrix op = test_operator(n);
    std::vector<cplx> v = dense_vector(n);
    for (auto _ : state) {
        apply_factor_omp(v, n, n, n / 2, op);
        benchmark::DoNotOptimize(v.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(v.size()));
}

void bm_inner_product_serial(benchmark::State& state) {
    const std::vector<cplx> v = dense_vector(7);
    for (auto _ : state) {
        cplx r = inner_product_serial(v, v);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(v.size()));
}

void bm_inner_product_omp(benchmark::State& state) {
    const std::vector<cplx> v = dense_vector(7);
    for (auto _ : state) {
        cplx r = inner_product_omp(v, v);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(v.size()));
}

void bm_correlation_bruteforce(benchmark::State& state) {
    const int n = 5;
    const DenseState d = to_dense(SingletState::build(n));
    CorrelationSpec spec;
    spec.n = n;
    const PeresObservable oa = peres_observable(n, Direction::z());
    const PeresObservable ob = peres_observable(n, Direction::polar_only(0.9));
    for (int p = 0; p < n - 1; ++p) spec.ops.push_back(oa.matrix);
    spec.ops.push_back(ob.matrix);
    for (auto _ : state) {
        double e = correlation_bruteforce(d, spec);
        benchmark::DoNotOptimize(e);
    }
}

void bm_bell_maximize(benchmark::State& state) {
    for (auto _ : state) {
        const BellResult r = maximize_violation_auto(100, 1, KernelFamily::closed);
        benchmark::DoNotOptimize(r.value);
    }
}

}  // namespace

BENCHMARK(bm_apply_factor_serial)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_apply_factor_omp)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_inner_product_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_inner_product_omp)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_correlation_bruteforce)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_bell_maximize)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
