#include <doctest.h>

#include <cmath>
#include <fstream>
#include <iterator>

#include "sodsim/metrics.hpp"

using namespace sodsim;

namespace {

PowerSample power_sample(double power_uw, int cardinality, double distance = 5.0) {
    PowerSample s;
    s.power_uw = power_uw;
    s.zone_cardinality = cardinality;
    s.link_distance_m = distance;
    return s;
}

} // namespace

TEST_CASE("fig5 groups transmissions by zone cardinality") {
    RunMetrics metrics;
    metrics.power_samples = {power_sample(10.0, 2), power_sample(20.0, 2),
                             power_sample(30.0, 3)};
    const auto rows = fig5_aggregate(metrics);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].zone_node_count == 2);
    CHECK(rows[0].mean_power_uw == doctest::Approx(15.0));
    CHECK(rows[1].zone_node_count == 3);
    CHECK(rows[1].mean_power_uw == doctest::Approx(30.0));
}

TEST_CASE("fig5 of an empty run is empty") {
    RunMetrics metrics;
    CHECK(fig5_aggregate(metrics).empty());
    CHECK(fig5_distance_aggregate(metrics).empty());
    CHECK(fig6_aggregate(metrics).empty());
}

TEST_CASE("fig5 distance buckets use 1 m ceilings") {
    RunMetrics metrics;
    metrics.power_samples = {power_sample(10.0, 2, 3.2), power_sample(30.0, 2, 3.9),
                             power_sample(100.0, 2, 8.4)};
    const auto rows = fig5_distance_aggregate(metrics);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].max_link_distance_m == doctest::Approx(4.0));
    CHECK(rows[0].mean_power_uw == doctest::Approx(20.0));
    CHECK(rows[1].max_link_distance_m == doctest::Approx(9.0));
    CHECK(rows[1].mean_power_uw == doctest::Approx(100.0));
}

TEST_CASE("fig6 bucket means match hand computation") {
    RunMetrics metrics;
    auto cache_event = [](double sigma, double delay) {
        CacheEventSample e;
        e.sigma = sigma;
        e.chunk_delay_s = delay;
        return e;
    };
    metrics.cache_events = {cache_event(0.21, 10.0), cache_event(0.24, 20.0),
                            cache_event(0.52, 40.0)};
    const auto rows = fig6_aggregate(metrics);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].sigma_bucket == doctest::Approx(0.20));
    CHECK(rows[0].mean_caching_delay_s == doctest::Approx(15.0));
    CHECK(rows[1].sigma_bucket == doctest::Approx(0.50));
    CHECK(rows[1].mean_caching_delay_s == doctest::Approx(40.0));
}

TEST_CASE("fig6 inverse identity: doubling sigma halves the paired delay") {
    // With the rate-distance sum fixed, delay = sum / sigma.
    const double rate_distance_sum = 120.0;
    RunMetrics metrics;
    for (double sigma : {0.25, 0.5}) {
        CacheEventSample e;
        e.sigma = sigma;
        e.chunk_delay_s = rate_distance_sum / sigma;
        metrics.cache_events.push_back(e);
    }
    const auto rows = fig6_aggregate(metrics);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].mean_caching_delay_s == doctest::Approx(2.0 * rows[1].mean_caching_delay_s));
}

TEST_CASE("fig7 of a zero-traffic run is (0, 0)") {
    RunMetrics metrics;
    const Fig7Row row = fig7_aggregate(metrics);
    CHECK(row.mean_eff_throughput == 0.0);
    CHECK(row.mean_power_uw == 0.0);
}

TEST_CASE("fig7 excludes streams that never transmitted") {
    RunMetrics metrics;
    StreamRecord never;
    never.stats.transmitted_blocks = 0;
    metrics.streams.push_back(never);

    StreamRecord active;
    active.stats.transmitted_blocks = 10;
    active.stats.received_blocks = 10;
    active.stats.transfer_size_bits = 1e6;
    active.stats.transfer_time_s = 1.0;
    active.stats.bandwidth_bps = 2e6;
    metrics.streams.push_back(active);

    CHECK(fig7_aggregate(metrics).mean_eff_throughput == doctest::Approx(0.5));
}

TEST_CASE("fig8 emits one row per sample and zone") {
    RunMetrics metrics;
    metrics.sample_times_s = {0.0, 0.5};
    metrics.zone_mean_residual_j = {{1.0, 1.0}, {0.9, 0.8}};
    const auto rows = fig8_aggregate(metrics);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].time_s == doctest::Approx(0.0));
    CHECK(rows[0].zone_id == 0);
    CHECK(rows[0].mean_residual_j == doctest::Approx(1.0));
    CHECK(rows[3].time_s == doctest::Approx(0.5));
    CHECK(rows[3].zone_id == 1);
    CHECK(rows[3].mean_residual_j == doctest::Approx(0.8));
}

TEST_CASE("aggregation is a pure function of the run data") {
    RunMetrics metrics;
    metrics.power_samples = {power_sample(12.5, 4), power_sample(81.25, 4)};
    metrics.sample_times_s = {0.0};
    metrics.zone_mean_residual_j = {{0.75}};
    const auto a = fig5_aggregate(metrics);
    const auto b = fig5_aggregate(metrics);
    REQUIRE(a.size() == b.size());
    CHECK(a[0].mean_power_uw == b[0].mean_power_uw);

    const std::filesystem::path dir1 = "metrics_test_out1";
    const std::filesystem::path dir2 = "metrics_test_out2";
    write_fig_csvs(metrics, dir1);
    write_fig_csvs(metrics, dir2);
    for (const char* name : {"fig5.csv", "fig5_distance.csv", "fig6.csv", "fig7.csv",
                             "fig8.csv"}) {
        std::ifstream f1(dir1 / name), f2(dir2 / name);
        const std::string s1((std::istreambuf_iterator<char>(f1)), {});
        const std::string s2((std::istreambuf_iterator<char>(f2)), {});
        CHECK(s1 == s2);
        CHECK_FALSE(s1.empty());
    }
    std::filesystem::remove_all(dir1);
    std::filesystem::remove_all(dir2);
}

TEST_CASE("format_double survives a parse round trip") {
    for (double v : {0.0, 0.1, 1.0 / 3.0, 1603.8, 1e-12, 123456789.123456789}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("delay stats accumulate mean and max") {
    DelayStats stats;
    CHECK(stats.mean_s() == 0.0);
    stats.add(1.0);
    stats.add(3.0);
    CHECK(stats.count == 2);
    CHECK(stats.mean_s() == doctest::Approx(2.0));
    CHECK(stats.max_s == doctest::Approx(3.0));
}
