#include <benchmark/benchmark.h>

#include <string>

#include "mahlerk/asymptotics.hpp"
#include "mahlerk/laurent.hpp"
#include "mahlerk/measure.hpp"
#include "mahlerk/roots.hpp"

using namespace mahlerk;

namespace {

LaurentPolynomial cyclotomic_like(int degree) {
    // z^n - 1 keeps every root on the circle, the worst case for the
    // window machinery.
    return parse_polynomial("z^" + std::to_string(degree) + "-1");
}

void BM_Parse(benchmark::State& state) {
    const std::string text = "(z-1)^2*(z+2)*(z^-3 + (1+2i)*z) - 0.5*z^4";
    for (auto _ : state)
        benchmark::DoNotOptimize(parse_polynomial(text));
}
BENCHMARK(BM_Parse);

void BM_FindRoots(benchmark::State& state) {
    const auto p = cyclotomic_like(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(find_roots(p));
}
BENCHMARK(BM_FindRoots)->Arg(4)->Arg(16)->Arg(48);

void BM_MkQuadrature(benchmark::State& state) {
    const auto p = parse_polynomial("z+1");
    const int k = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(mk_quadrature(p, k));
}
BENCHMARK(BM_MkQuadrature)->Arg(1)->Arg(8)->Arg(32);

void BM_MkBruteforce(benchmark::State& state) {
    const auto p = parse_polynomial("z+1");
    const int level = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(mk_bruteforce(p, 8, level));
}
BENCHMARK(BM_MkBruteforce)->Arg(6)->Arg(8)->Arg(10);

void BM_ConvergenceStudy(benchmark::State& state) {
    const auto p = parse_polynomial("z^2-1");
    for (auto _ : state)
        benchmark::DoNotOptimize(convergence_study(p, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ConvergenceStudy)->Arg(10)->Arg(30);

} // namespace

BENCHMARK_MAIN();
