#include <benchmark/benchmark.h>

#include <vector>

#include "sodsim/model.hpp"
#include "sodsim/rng.hpp"

using namespace sodsim;

static void BM_TransmissionPower(benchmark::State& state) {
    const PowerCalibration calib{0.2, CapacityExponent::Decay};
    const LinkSpec link{9.0, 11.0, 3.0, 1.0};
    for (auto _ : state) benchmark::DoNotOptimize(transmission_power_uw(link, calib));
}
BENCHMARK(BM_TransmissionPower);

static void BM_PathPower(benchmark::State& state) {
    const PowerCalibration calib{0.2, CapacityExponent::Decay};
    Rng rng(1);
    std::vector<LinkSpec> links;
    for (int i = 0; i < state.range(0); ++i)
        links.push_back(LinkSpec{rng.uniform(1.0, 15.0), 11.0, 3.0, 1.0});
    for (auto _ : state) benchmark::DoNotOptimize(path_power_uw(links, calib));
}
BENCHMARK(BM_PathPower)->Arg(2)->Arg(8)->Arg(32);

static void BM_CapacityScaledPower(benchmark::State& state) {
    const PowerCalibration calib{0.2, CapacityExponent::Decay};
    const CapacityState cap{1000, 250};
    for (auto _ : state)
        benchmark::DoNotOptimize(capacity_scaled_power_uw(1603.8, cap, 0.4, calib));
}
BENCHMARK(BM_CapacityScaledPower);

static void BM_CachingThreshold(benchmark::State& state) {
    Rng rng(2);
    std::vector<LinkSpec> links;
    for (int i = 0; i < 4; ++i)
        links.push_back(LinkSpec{rng.uniform(1.0, 15.0), 11.0, 3.0, 1.0});
    for (auto _ : state) benchmark::DoNotOptimize(caching_threshold(links, 333.0));
}
BENCHMARK(BM_CachingThreshold);
