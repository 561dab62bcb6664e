#include "periodlab/fundcomplex.hpp"
#include "periodlab/isocrystal.hpp"
#include "periodlab/periodcoh.hpp"
#include "periodlab/rootdata.hpp"

#include <benchmark/benchmark.h>

using namespace periodlab;

namespace {

void BM_FlagModel(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto q = static_cast<unsigned>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(build_finite_flag_model(n, q));
}
BENCHMARK(BM_FlagModel)->Args({3, 2})->Args({3, 4})->Args({4, 2})->Args({4, 3})->Unit(benchmark::kMillisecond);

void BM_FullComplexHomology(benchmark::State& state) {
    const auto m = cached_flag_model(static_cast<std::size_t>(state.range(0)), static_cast<unsigned>(state.range(1)));
    for (auto _ : state) {
        const auto c = assemble_fundamental_complex(*m, StalkSelector::full(*m), 1, 2);
        benchmark::DoNotOptimize(homology_dims(c));
    }
}
BENCHMARK(BM_FullComplexHomology)->Args({3, 3})->Args({4, 2})->Args({4, 3})->Unit(benchmark::kMillisecond);

void BM_SteinbergDimension(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto q = static_cast<unsigned>(state.range(1));
    cached_flag_model(n, q);
    for (auto _ : state) benchmark::DoNotOptimize(steinberg_dimension(n, q, 0));
}
BENCHMARK(BM_SteinbergDimension)->Args({3, 3})->Args({4, 2})->Unit(benchmark::kMillisecond);

KVector coords(std::initializer_list<const char*> xs) {
    KVector v;
    for (const char* x : xs) v.push_back(ModelFieldElement::parse(x, 1));
    return v;
}

void BM_DrinfeldAdmissibility(benchmark::State& state) {
    const auto fi = drinfeld_datum(state.range(0) == 2 ? coords({"1", "t"}) : coords({"1", "t", "t^2+1"}));
    const SearchConfig cfg{static_cast<unsigned>(state.range(1)), static_cast<unsigned>(state.range(2))};
    is_weakly_admissible(fi, cfg);  // subspace catalogs are cached per (slopes, height)
    for (auto _ : state) benchmark::DoNotOptimize(is_weakly_admissible(fi, cfg));
}
BENCHMARK(BM_DrinfeldAdmissibility)
    ->Args({2, 3, 1})
    ->Args({3, 2, 1})
    ->Args({3, 3, 1})
    ->Args({3, 3, 4})
    ->Unit(benchmark::kMillisecond);

void BM_KostantRepresentatives(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const RootDatum rd(n);
    Cocharacter mu;
    for (std::size_t i = 0; i < n; ++i) mu.weights.push_back(Rational(static_cast<long>(n - i) / 2));
    for (auto _ : state) benchmark::DoNotOptimize(kostant_representatives(rd, mu));
}
BENCHMARK(BM_KostantRepresentatives)->DenseRange(4, 7);

void BM_Calibration(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(calibrate_degree_function(static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_Calibration)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
