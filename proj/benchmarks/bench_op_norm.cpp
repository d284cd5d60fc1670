#include <benchmark/benchmark.h>

#include <pasf/op_norm.hpp>
#include <pasf/rng.hpp>

using namespace pasf;

namespace {

Mat random_square(int d, std::uint64_t seed) {
    Rng rng(seed);
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = rng.uniform_pm1();
    return m;
}

}  // namespace

static void BM_OpNormSpectral(benchmark::State& state) {
    const Mat a = random_square(static_cast<int>(state.range(0)), 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(op_norm(a, Exponent(2), Exponent(2)).lower);
}
BENCHMARK(BM_OpNormSpectral)->Arg(4)->Arg(16)->Arg(64);

static void BM_OpNormColumnForm(benchmark::State& state) {
    const Mat a = random_square(static_cast<int>(state.range(0)), 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(op_norm(a, Exponent(1), Exponent(1)).lower);
}
BENCHMARK(BM_OpNormColumnForm)->Arg(4)->Arg(16)->Arg(64);

static void BM_OpNormBoyd(benchmark::State& state) {
    const Mat a = random_square(static_cast<int>(state.range(0)), 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(op_norm(a, Exponent(3), Exponent(3)).lower);
}
BENCHMARK(BM_OpNormBoyd)->Arg(4)->Arg(16)->Arg(64);

static void BM_GainInvertible(benchmark::State& state) {
    const Mat a = random_square(static_cast<int>(state.range(0)), 4);
    for (auto _ : state)
        benchmark::DoNotOptimize(gain_lower_bound(a, Exponent(1.5), Exponent(1.5)).lower);
}
BENCHMARK(BM_GainInvertible)->Arg(4)->Arg(16);

static void BM_SignedPermutationSweep(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    for (auto _ : state) {
        SignedPermutations gen(d);
        std::uint64_t count = 0;
        while (gen.next()) ++count;
        benchmark::DoNotOptimize(count);
    }
}
BENCHMARK(BM_SignedPermutationSweep)->Arg(3)->Arg(4)->Arg(5);
