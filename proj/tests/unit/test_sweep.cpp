#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>

#include "sodsim/errors.hpp"
#include "sodsim/sweep.hpp"

using namespace sodsim;

namespace {

Scenario tiny_scenario() {
    Scenario sc;
    sc.node_count = 8;
    sc.area_m = 25.0;
    sc.horizon_s = 2.0;
    sc.traffic.flows = 2;
    sc.seed = 11;
    return sc;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), {});
}

} // namespace

TEST_CASE("sweep axis parsing") {
    const SweepAxis axis = parse_sweep_axis("comm_range_m=6,9,12");
    CHECK(axis.field == "comm_range_m");
    CHECK(axis.values == std::vector<double>{6.0, 9.0, 12.0});

    CHECK_THROWS_AS(parse_sweep_axis("comm_range_m"), ScenarioError);
    CHECK_THROWS_AS(parse_sweep_axis("=1,2"), ScenarioError);
    CHECK_THROWS_AS(parse_sweep_axis("comm_range_m=1,banana"), ScenarioError);
    CHECK_THROWS_AS(parse_sweep_axis("not_a_field=1,2"), ScenarioError);
    // Non-scalar / structured fields are not sweepable.
    CHECK_THROWS_AS(parse_sweep_axis("power.capacity_exponent=0,1"), ScenarioError);
    CHECK_THROWS_AS(parse_sweep_axis("seed=1,2"), ScenarioError);
}

TEST_CASE("with_field guards integer fields") {
    const Scenario sc = tiny_scenario();
    CHECK(with_field(sc, "node_count", 10).node_count == 10);
    CHECK_THROWS_AS(with_field(sc, "node_count", 10.5), ScenarioError);
    CHECK(with_field(sc, "comm_range_m", 7.25).comm_range_m == doctest::Approx(7.25));
    CHECK_THROWS_AS(with_field(sc, "bogus", 1.0), ScenarioError);
}

TEST_CASE("a 2x3 grid runs six points with derived seeds") {
    const std::filesystem::path dir = "sweep_test_out";
    std::filesystem::remove_all(dir);
    const std::vector<SweepAxis> axes{{"comm_range_m", {12.0, 15.0}},
                                      {"traffic.pareto_scale_s", {0.02, 0.06, 0.1}}};
    const SweepResult result = run_sweep(tiny_scenario(), axes, dir, 1);
    CHECK(result.points.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(result.points[i].index == i);
        CHECK(result.points[i].seed == 11 + i);
        char name[32];
        std::snprintf(name, sizeof(name), "point_%03zu", i);
        CHECK(std::filesystem::exists(dir / name / "summary.json"));
        CHECK(std::filesystem::exists(dir / name / "fig7.csv"));
    }
    // First axis varies slowest.
    CHECK(result.points[0].values == std::vector<double>{12.0, 0.02});
    CHECK(result.points[1].values == std::vector<double>{12.0, 0.06});
    CHECK(result.points[3].values == std::vector<double>{15.0, 0.02});
    CHECK(std::filesystem::exists(dir / "combined.csv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("repeated sweeps and parallel sweeps are byte-identical") {
    const std::vector<SweepAxis> axes{{"comm_range_m", {12.0, 15.0}}};
    const std::filesystem::path d1 = "sweep_rep1", d2 = "sweep_rep2", d3 = "sweep_rep3";
    for (const auto& d : {d1, d2, d3}) std::filesystem::remove_all(d);
    run_sweep(tiny_scenario(), axes, d1, 1);
    run_sweep(tiny_scenario(), axes, d2, 1);
    run_sweep(tiny_scenario(), axes, d3, 2); // parallel
    const std::string c1 = slurp(d1 / "combined.csv");
    CHECK(c1 == slurp(d2 / "combined.csv"));
    CHECK(c1 == slurp(d3 / "combined.csv"));
    CHECK(slurp(d1 / "point_000" / "summary.json") ==
          slurp(d3 / "point_000" / "summary.json"));
    for (const auto& d : {d1, d2, d3}) std::filesystem::remove_all(d);
}

TEST_CASE("sweep failures surface the failing point") {
    const std::vector<SweepAxis> axes{{"loss_exponent", {3.0, 9.0}}}; // 9 is invalid
    CHECK_THROWS_AS(run_sweep(tiny_scenario(), axes, "sweep_bad_out", 1), ScenarioError);
    std::filesystem::remove_all("sweep_bad_out");
}
