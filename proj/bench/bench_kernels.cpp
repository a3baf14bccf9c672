// Serial reference vs OpenMP kernels on the workloads the checks run.
#include <benchmark/benchmark.h>

#include <random>

#include "csw/analysis.hpp"
#include "csw/capture.hpp"
#include "csw/kernels.hpp"

using namespace csw;

namespace {

const Scheme& big_scheme() {
    static const Scheme s = build_scheme(parse_type("1,3,9,37,4810;3,4,5,130;0,1,2,0"));
    return s;
}

const NormingFamily& k_family() {
    static const NormingFamily f =
        build_K_family(std::make_shared<const Scheme>(build_scheme(parse_type("1,3,9,30;3,4,4;0,1,2"))), 2, 2);
    return f;
}

template <bool Parallel>
void intersections(benchmark::State& state) {
    const auto lvl = big_scheme().level(1);
    for (auto _ : state) {
        auto r = Parallel ? kernels::first_bad_intersection_parallel(lvl) : kernels::first_bad_intersection_serial(lvl);
        benchmark::DoNotOptimize(r);
    }
}

template <bool Parallel>
void max_pairing(benchmark::State& state) {
    const auto& f = k_family();
    const auto fs = f.vectors(f.scheme().top());
    std::mt19937_64 rng(1);
    const auto x = random_vector(rng, f.scheme().set(f.scheme().top()).elements);
    for (auto _ : state) {
        auto r = Parallel ? kernels::max_abs_pairing_parallel(fs, x) : kernels::max_abs_pairing_serial(fs, x);
        benchmark::DoNotOptimize(r);
    }
}

template <bool Parallel>
void basis_constant_sweep(benchmark::State& state) {
    const auto fam = build_K_family(std::make_shared<const Scheme>(build_scheme(parse_type("1,8;8;0"))), 2, 1);
    const auto& s = fam.scheme();
    const auto fs = fam.vectors(s.top());
    const auto& pos = s.set(s.top()).elements;
    for (auto _ : state) {
        auto r = Parallel ? basis_constant(fs, pos) : basis_constant_serial(fs, pos);
        benchmark::DoNotOptimize(r);
    }
}

template <bool Parallel>
void capture_search(benchmark::State& state) {
    const auto& s = big_scheme();
    const SetId site{4, 0};
    const std::vector<std::size_t> pattern{20};
    const auto d = make_captured_family(s, site, pattern, 6);
    for (auto _ : state) {
        auto r = Parallel ? find_capture(s, d, 6) : find_capture_serial(s, d, 6);
        benchmark::DoNotOptimize(r);
    }
}

}  // namespace

BENCHMARK(intersections<false>)->Name("intersections/serial");
BENCHMARK(intersections<true>)->Name("intersections/parallel");
BENCHMARK(max_pairing<false>)->Name("max_pairing/serial");
BENCHMARK(max_pairing<true>)->Name("max_pairing/parallel");
BENCHMARK(basis_constant_sweep<false>)->Name("basis_constant/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(basis_constant_sweep<true>)->Name("basis_constant/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(capture_search<false>)->Name("capture/serial");
BENCHMARK(capture_search<true>)->Name("capture/parallel");

BENCHMARK_MAIN();
