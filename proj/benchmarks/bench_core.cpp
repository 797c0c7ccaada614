#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "rectent/aep.hpp"
#include "rectent/catalog.hpp"
#include "rectent/coding.hpp"
#include "rectent/entropy.hpp"
#include "rectent/numerics.hpp"
#include "rectent/ratedistortion.hpp"

namespace {

using namespace rectent;

void BM_Integrate(benchmark::State& state) {
    for (auto _ : state) {
        const QuadResult r = integrate([](double x) { return std::exp(-x * x) * std::cos(3.0 * x); }, -4.0, 4.0);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_Integrate);

void BM_GammaOfS(benchmark::State& state) {
    const SupportAtlas circle = unit_circle_support();
    const Distortion mse = squared_error();
    const double s = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(gamma_of_s(circle, mse, s).log_gamma);
    }
}
BENCHMARK(BM_GammaOfS)->Arg(1)->Arg(50)->Arg(5000);

void BM_EntropyQuadrature(benchmark::State& state) {
    const RectifiableSource vm = source_by_name("circle:vonmises:2");
    for (auto _ : state) {
        benchmark::DoNotOptimize(entropy_quadrature(vm).value);
    }
}
BENCHMARK(BM_EntropyQuadrature);

void BM_Huffman(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<double> p(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += p[i] = 1.0 / static_cast<double>(i + 1);
    for (double& v : p) v /= total;
    for (auto _ : state) {
        benchmark::DoNotOptimize(huffman(p).expected_length_bits);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Huffman)->RangeMultiplier(8)->Range(8, 32768)->Complexity();

void BM_EmpiricalTypicality(benchmark::State& state) {
    const RectifiableSource vm = source_by_name("circle:vonmises:2");
    const double h = entropy_reference(vm).value;
    for (auto _ : state) {
        benchmark::DoNotOptimize(empirical_typicality(vm, 50, 0.1, 1000, 42, h).empirical_prob);
    }
}
BENCHMARK(BM_EmpiricalTypicality);

}  // namespace

BENCHMARK_MAIN();
