#include "bmc/bessel.hpp"
#include "bmc/chaos.hpp"
#include "bmc/local_time_field.hpp"
#include "bmc/walk.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

using namespace bmc;

const DomainSpec kDisc = DomainSpec::disc({0, 0}, 1.0, {0, 0});

void BM_KilledWalk(benchmark::State& st) {
    const Lattice lat(kDisc, {1.0 / static_cast<double>(st.range(0))});
    Walker w(lat);
    std::uint64_t k = 0, steps = 0;
    for (auto _ : st) {
        const auto& f = w.run({1, k++});
        steps += f.step_count;
        benchmark::DoNotOptimize(f.exit_site);
    }
    st.counters["steps/s"] = benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_KilledWalk)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_ScaleSampler(benchmark::State& st) {
    const LatticeConfig cfg{1.0 / 400};
    const Lattice lat(kDisc, cfg);
    const double eps = std::exp(-static_cast<double>(st.range(0)));
    const ScaleSampler s(lat, eps, Annulus{{0, 0}, 0.2, 0.8});
    auto scratch = s.make_scratch();
    const auto f = run_killed_walk(kDisc, cfg, {2, 0});
    for (auto _ : st) benchmark::DoNotOptimize(s.sample(f, scratch).v.size());
    st.counters["stencil"] = static_cast<double>(s.stencil().size());
}
BENCHMARK(BM_ScaleSampler)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_LocalTimeField(benchmark::State& st) {
    const LatticeConfig cfg{1.0 / 400};
    const auto f = run_killed_walk(DomainSpec::rectangle({0, 0}, 1, 1, {0.5, 0.5}), cfg, {3, 0});
    for (auto _ : st) benchmark::DoNotOptimize(compute_local_time_field(f, std::exp(-4.0), cfg).values.data());
}
BENCHMARK(BM_LocalTimeField)->Unit(benchmark::kMillisecond);

void BM_BesselI1(benchmark::State& st) {
    const double u = static_cast<double>(st.range(0)) / 10.0;
    for (auto _ : st) benchmark::DoNotOptimize(bessel_i1(u));
}
BENCHMARK(BM_BesselI1)->Arg(5)->Arg(150)->Arg(5000);

void BM_SampleBesq0(benchmark::State& st) {
    Engine eng(7);
    const double x0 = static_cast<double>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(sample_besq0(x0, 1.0, eng));
}
BENCHMARK(BM_SampleBesq0)->Arg(1)->Arg(100);

void BM_TransitionDensity(benchmark::State& st) {
    double y = 0.1;
    for (auto _ : st) {
        benchmark::DoNotOptimize(transition_density(1.0, 0.5, y));
        y = y > 5 ? 0.1 : y + 0.01;
    }
}
BENCHMARK(BM_TransitionDensity);

} // namespace

BENCHMARK_MAIN();
