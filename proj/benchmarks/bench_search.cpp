#include <benchmark/benchmark.h>

#include <pasf/conjectures.hpp>
#include <pasf/continuous.hpp>
#include <pasf/reconstruct.hpp>
#include <pasf/rng.hpp>

using namespace pasf;

static void BM_FeichtingerExhaustive(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const Pasf dup = make_duplicated_standard(2, k, Exponent(2), Exponent(2));
    for (auto _ : state)
        benchmark::DoNotOptimize(feichtinger_search(dup, 0.5, 2 * k).nodes_examined);
}
BENCHMARK(BM_FeichtingerExhaustive)->Arg(2)->Arg(3)->Arg(4);

static void BM_WeaverExhaustive(benchmark::State& state) {
    Pasf dup = make_duplicated_standard(3, 2, Exponent(2), Exponent(2));
    dup.functionals *= 2.0;
    for (auto _ : state)
        benchmark::DoNotOptimize(weaver_search(dup, 2.0, 1.0, static_cast<int>(state.range(0)))
                                     .nodes_examined);
}
BENCHMARK(BM_WeaverExhaustive)->Arg(2)->Arg(3);

static void BM_AkemannWeaverExhaustive(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const Pasf dup = make_duplicated_standard(2, k, Exponent(2), Exponent(2));
    const std::vector<double> weights(static_cast<std::size_t>(2 * k), 0.5);
    for (auto _ : state)
        benchmark::DoNotOptimize(akemann_weaver_search(dup, weights).objective);
}
BENCHMARK(BM_AkemannWeaverExhaustive)->Arg(3)->Arg(5);

static void BM_DuffinSchaeffer(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    Rng rng(7);
    Mat t(d, 2 * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < 2 * d; ++j) t(i, j) = rng.uniform_pm1();
    const Pasf P = make_explicit(Mat(t.transpose()), t, Exponent(2), Exponent(2));
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = rng.uniform_pm1();
    const Vec coeffs = P.functionals * x;
    for (auto _ : state)
        benchmark::DoNotOptimize(duffin_schaeffer(P, coeffs, 50, 1e-12, x).errors.size());
}
BENCHMARK(BM_DuffinSchaeffer)->Arg(4)->Arg(16);

static void BM_CircleDiscretize(benchmark::State& state) {
    const ContinuousPasf c = circle_example(Exponent(2));
    const Quadrature q = make_quadrature(QuadratureRule::trapezoid,
                                         static_cast<int>(state.range(0)), c.domain_lo,
                                         c.domain_hi);
    for (auto _ : state)
        benchmark::DoNotOptimize(discretize(c, q).size());
}
BENCHMARK(BM_CircleDiscretize)->Arg(16)->Arg(256);

static void BM_RetrievalSignPatterns(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng(11);
    Mat f(n, 3);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < 3; ++j) f(i, j) = rng.uniform_pm1();
    const Pasf P = make_explicit(f, Mat(f.transpose()), Exponent(2), Exponent(2));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            retrieval_check(P, RetrievalSide::vector, RetrievalKind::phase).nodes_examined);
}
BENCHMARK(BM_RetrievalSignPatterns)->Arg(6)->Arg(10);
