#include <benchmark/benchmark.h>

#include "sodsim/event_queue.hpp"
#include "sodsim/network_sim.hpp"
#include "sodsim/routing.hpp"
#include "sodsim/rng.hpp"
#include "sodsim/traffic.hpp"

using namespace sodsim;

static void BM_EventQueueChurn(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        Simulator sim;
        Rng rng(7);
        for (int i = 0; i < n; ++i)
            sim.schedule(rng.uniform(0.0, 100.0), EventKind::StateTimer, [] {});
        benchmark::DoNotOptimize(sim.run_until(100.0));
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_EventQueueChurn)->Arg(1000)->Arg(10000);

static void BM_ParetoInterarrival(benchmark::State& state) {
    Rng rng(9);
    const TrafficProfile profile;
    for (auto _ : state) benchmark::DoNotOptimize(pareto_interarrival_s(rng, profile));
}
BENCHMARK(BM_ParetoInterarrival);

static void BM_ComputeZone(benchmark::State& state) {
    Topology topo = Topology::build(50, 60.0, 15.0, 3);
    int node = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_zone(topo, node, 2, 0.0));
        node = (node + 1) % 50;
    }
}
BENCHMARK(BM_ComputeZone);

static void BM_InterzoneRoute(benchmark::State& state) {
    Topology topo = Topology::build(50, 60.0, 15.0, 3);
    const PowerCalibration calib{0.2, CapacityExponent::Decay};
    Rng rng(11);
    for (auto _ : state) {
        const int src = static_cast<int>(rng.uniform_below(50));
        int dst = static_cast<int>(rng.uniform_below(50));
        if (dst == src) dst = (dst + 1) % 50;
        benchmark::DoNotOptimize(interzone_route(topo, src, dst, 2, 0.0, calib));
    }
}
BENCHMARK(BM_InterzoneRoute);

static void BM_SmallScenarioRun(benchmark::State& state) {
    Scenario sc;
    sc.node_count = 12;
    sc.area_m = 30.0;
    sc.horizon_s = 2.0;
    sc.traffic.flows = 4;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_scenario(sc));
    }
}
BENCHMARK(BM_SmallScenarioRun)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
