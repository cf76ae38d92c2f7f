#include <doctest.h>

#include <stdexcept>
#include <cmath>
#include <vector>

#include "sodsim/model.hpp"
#include "sodsim/rng.hpp"

using namespace sodsim;

namespace {

constexpr double kRelTol = 1e-12;

bool close_rel(double a, double b, double tol = kRelTol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// Independent evaluation route: long double arithmetic through exp/log.
long double power_oracle(const LinkSpec& l, double k) {
    const long double d_pow = expl(static_cast<long double>(l.loss_exponent) *
                                   logl(static_cast<long double>(l.distance_m)));
    return static_cast<long double>(k) * static_cast<long double>(l.rate_mbps) * d_pow *
           static_cast<long double>(l.fading_factor);
}

LinkSpec random_link(Rng& rng) {
    return LinkSpec{rng.uniform(0.1, 100.0), rng.uniform(0.1, 54.0), rng.uniform(2.0, 4.0),
                    rng.uniform(1.0, 3.0)};
}

} // namespace

TEST_CASE("transmission_power matches the closed form") {
    PowerCalibration unit{1.0, CapacityExponent::Decay};
    CHECK(transmission_power_uw({1.0, 2.0, 3.0, 1.0}, unit) == doctest::Approx(2.0));
    CHECK(transmission_power_uw({2.0, 1.0, 2.0, 1.0}, unit) == doctest::Approx(4.0));
    // Default calibration puts the 11 Mb/s, 9 m, r=3 point at the power knee.
    PowerCalibration calib{0.2, CapacityExponent::Decay};
    CHECK(close_rel(transmission_power_uw({9.0, 11.0, 3.0, 1.0}, calib), 1603.8));
}

TEST_CASE("transmission_power rejects bad inputs") {
    PowerCalibration calib;
    CHECK_THROWS_AS(transmission_power_uw({0.0, 1.0, 3.0, 1.0}, calib), std::domain_error);
    CHECK_THROWS_AS(transmission_power_uw({-1.0, 1.0, 3.0, 1.0}, calib), std::domain_error);
    CHECK_THROWS_AS(transmission_power_uw({1.0, 0.0, 3.0, 1.0}, calib), std::domain_error);
    CHECK_THROWS_AS(transmission_power_uw({1.0, 1.0, 3.0, -0.5}, calib), std::domain_error);
}

TEST_CASE("transmission_power against an independent long-double oracle") {
    Rng rng(7001);
    for (int i = 0; i < 1000; ++i) {
        const LinkSpec link = random_link(rng);
        const double k = rng.uniform(0.01, 2.0);
        const PowerCalibration calib{k, CapacityExponent::Decay};
        const double got = transmission_power_uw(link, calib);
        CHECK(close_rel(got, static_cast<double>(power_oracle(link, k))));
    }
}

TEST_CASE("transmission_power is strictly monotone in rate, distance and fading") {
    Rng rng(7002);
    PowerCalibration calib{0.2, CapacityExponent::Decay};
    for (int i = 0; i < 500; ++i) {
        LinkSpec link = random_link(rng);
        link.distance_m = rng.uniform(1.01, 100.0); // d > 1 so a larger r also grows
        const double base = transmission_power_uw(link, calib);

        LinkSpec bigger = link;
        bigger.distance_m *= 1.0 + rng.uniform(0.01, 1.0);
        CHECK(transmission_power_uw(bigger, calib) > base);

        bigger = link;
        bigger.rate_mbps *= 1.0 + rng.uniform(0.01, 1.0);
        CHECK(transmission_power_uw(bigger, calib) > base);

        bigger = link;
        bigger.fading_factor *= 1.0 + rng.uniform(0.01, 1.0);
        CHECK(transmission_power_uw(bigger, calib) > base);

        bigger = link;
        bigger.loss_exponent = std::min(4.0, link.loss_exponent + rng.uniform(0.01, 0.5));
        if (bigger.loss_exponent > link.loss_exponent)
            CHECK(transmission_power_uw(bigger, calib) > base);
    }
}

TEST_CASE("path_power sums per-link powers") {
    PowerCalibration unit{1.0, CapacityExponent::Decay};
    const std::vector<LinkSpec> single{{1.0, 1.0, 3.0, 1.0}};
    CHECK(path_power_uw(single, unit) == doctest::Approx(1.0));

    const std::vector<LinkSpec> two{{1.0, 2.0, 3.0, 1.0}, {2.0, 1.0, 3.0, 1.0}};
    CHECK(path_power_uw(two, unit) == doctest::Approx(10.0));

    const std::vector<LinkSpec> swapped{two[1], two[0]};
    CHECK(path_power_uw(swapped, unit) == doctest::Approx(path_power_uw(two, unit)));

    CHECK_THROWS_AS(path_power_uw(std::vector<LinkSpec>{}, unit), std::domain_error);
}

TEST_CASE("path_power against a reversed-order long-double summation oracle") {
    Rng rng(7003);
    for (int i = 0; i < 1000; ++i) {
        const int hops = 1 + static_cast<int>(rng.uniform_below(8));
        std::vector<LinkSpec> links;
        for (int h = 0; h < hops; ++h) links.push_back(random_link(rng));
        const double k = rng.uniform(0.01, 2.0);
        const PowerCalibration calib{k, CapacityExponent::Decay};

        long double expected = 0.0L;
        for (auto it = links.rbegin(); it != links.rend(); ++it)
            expected += power_oracle(*it, k);
        CHECK(close_rel(path_power_uw(links, calib), static_cast<double>(expected)));
    }
}

TEST_CASE("long_vs_short_gap basic values") {
    const std::vector<double> pair{1.0, 1.0};
    auto r1 = long_vs_short_gap(pair, 2.0);
    CHECK(r1.lumped == doctest::Approx(4.0));
    CHECK(r1.split == doctest::Approx(2.0));

    const std::vector<double> three{1.0, 2.0, 3.0};
    auto r2 = long_vs_short_gap(three, 2.0);
    CHECK(r2.lumped == doctest::Approx(36.0));
    CHECK(r2.split == doctest::Approx(14.0));

    const std::vector<double> one{5.0};
    CHECK_THROWS_AS(long_vs_short_gap(one, 2.0), std::domain_error);
    CHECK_THROWS_AS(long_vs_short_gap(pair, 1.0), std::domain_error);
    CHECK_THROWS_AS(long_vs_short_gap(pair, 0.5), std::domain_error);
}

TEST_CASE("one long link always costs more than the equivalent short chain") {
    Rng rng(7004);
    for (int i = 0; i < 10000; ++i) {
        const int n = 2 + static_cast<int>(rng.uniform_below(9));
        std::vector<double> d;
        for (int j = 0; j < n; ++j) d.push_back(rng.uniform(1e-9, 100.0));
        const double r = rng.uniform(1.0 + 1e-9, 4.0);
        const auto gap = long_vs_short_gap(d, r);
        CHECK(gap.lumped > gap.split);
    }
}

TEST_CASE("packet_loss") {
    CHECK(packet_loss({10, 10, 0, 0, 0}) == doctest::Approx(0.0));
    CHECK(packet_loss({10, 0, 0, 0, 0}) == doctest::Approx(1.0));
    CHECK(packet_loss({10, 9, 0, 0, 0}) == doctest::Approx(0.1));
    CHECK_THROWS_AS(packet_loss({0, 0, 0, 0, 0}), std::domain_error);
    CHECK_THROWS_AS(packet_loss({5, 6, 0, 0, 0}), std::domain_error);

    Rng rng(7005);
    for (int i = 0; i < 1000; ++i) {
        ThroughputStats stats;
        stats.transmitted_blocks = 1 + rng.uniform_below(1000);
        stats.received_blocks = rng.uniform_below(stats.transmitted_blocks + 1);
        const double loss = packet_loss(stats);
        CHECK(loss >= 0.0);
        CHECK(loss <= 1.0);
    }
}

TEST_CASE("effective_throughput") {
    // Total loss wipes the throughput regardless of the rate term.
    CHECK(effective_throughput({10, 0, 1e9, 1.0, 1e6}) == doctest::Approx(0.0));
    // Perfect channel use: size/time equals the bandwidth.
    CHECK(effective_throughput({10, 10, 1e6, 1.0, 1e6}) == doctest::Approx(1.0));
    // 10% loss at half the bandwidth.
    CHECK(effective_throughput({10, 9, 5e5, 1.0, 1e6}) == doctest::Approx(0.45));

    bool clamped = false;
    CHECK(effective_throughput({10, 10, 2e6, 1.0, 1e6}, &clamped) == doctest::Approx(1.0));
    CHECK(clamped);

    CHECK_THROWS_AS(effective_throughput({10, 10, 1e6, 0.0, 1e6}), std::domain_error);
    CHECK_THROWS_AS(effective_throughput({10, 10, 1e6, 1.0, 0.0}), std::domain_error);

    Rng rng(7006);
    for (int i = 0; i < 1000; ++i) {
        ThroughputStats stats;
        stats.transmitted_blocks = 1 + rng.uniform_below(100);
        stats.received_blocks = rng.uniform_below(stats.transmitted_blocks + 1);
        stats.transfer_size_bits = rng.uniform(0.0, 1e7);
        stats.transfer_time_s = rng.uniform(1e-3, 10.0);
        stats.bandwidth_bps = rng.uniform(1e5, 1e8);
        const double eff = effective_throughput(stats);
        CHECK(eff >= 0.0);
        CHECK(eff <= 1.0);
    }
}

TEST_CASE("capacity_scaled_power") {
    PowerCalibration decay{0.2, CapacityExponent::Decay};
    PowerCalibration growth{0.2, CapacityExponent::Growth};

    // Full storage => density0 => unchanged.
    CHECK(capacity_scaled_power_uw(50.0, {100, 100}, 0.7, decay) == doctest::Approx(50.0));
    // Zero effective throughput => unchanged.
    CHECK(capacity_scaled_power_uw(50.0, {100, 0}, 0.0, decay) == doctest::Approx(50.0));

    CHECK(capacity_scaled_power_uw(100.0, {100, 0}, 1.0, decay) ==
          doctest::Approx(36.787944117144235).epsilon(1e-12));
    CHECK(capacity_scaled_power_uw(100.0, {100, 0}, 1.0, growth) ==
          doctest::Approx(271.8281828459045).epsilon(1e-12));

    CHECK_THROWS_AS(capacity_scaled_power_uw(-1.0, {100, 0}, 0.5, decay), std::domain_error);
    CHECK_THROWS_AS(capacity_scaled_power_uw(1.0, {100, 0}, 1.5, decay), std::domain_error);

    Rng rng(7007);
    for (int i = 0; i < 1000; ++i) {
        const std::uint64_t total = 1 + rng.uniform_below(1000);
        const CapacityState cap{total, rng.uniform_below(total + 1)};
        const double eff = rng.uniform01();
        const double base = rng.uniform(0.0, 1e4);
        const double scaled = capacity_scaled_power_uw(base, cap, eff, decay);
        CHECK(scaled <= base + 1e-15);
        if (cap.density() * eff == 0.0) {
            CHECK(scaled == doctest::Approx(base));
        } else if (base > 0.0) {
            CHECK(scaled < base);
        }
    }
}

TEST_CASE("chunk_delay") {
    CHECK(chunk_delay_s({10.0, 5, 2}) == doctest::Approx(2.0));
    CHECK(chunk_delay_s({8.0, 2, 4}) == doctest::Approx(8.0));
    // A single peer floors at tau0/m instead of log2(1) = 0.
    CHECK(chunk_delay_s({10.0, 5, 1}) == doctest::Approx(2.0));
    CHECK_THROWS_AS(chunk_delay_s({10.0, 5, 0}), std::domain_error);
    CHECK_THROWS_AS(chunk_delay_s({0.0, 5, 2}), std::domain_error);
    CHECK_THROWS_AS(chunk_delay_s({10.0, 0, 2}), std::domain_error);

    Rng rng(7008);
    for (int i = 0; i < 500; ++i) {
        CachingParams p{rng.uniform(0.1, 100.0), 1 + static_cast<int>(rng.uniform_below(50)),
                        1 + static_cast<int>(rng.uniform_below(50))};
        // Non-increasing in the chunk count.
        CachingParams more_chunks = p;
        more_chunks.chunk_count += 1 + static_cast<int>(rng.uniform_below(10));
        CHECK(chunk_delay_s(more_chunks) <= chunk_delay_s(p) + 1e-15);
        // Non-decreasing in the peer count (from 1 upward, thanks to the floor).
        CachingParams more_peers = p;
        more_peers.peer_count += 1 + static_cast<int>(rng.uniform_below(10));
        CHECK(chunk_delay_s(more_peers) >= chunk_delay_s(p) - 1e-15);
    }
}

TEST_CASE("caching_threshold") {
    const std::vector<LinkSpec> unit{{1.0, 1.0, 3.0, 1.0}};
    CHECK(caching_threshold(unit, 1.0) == doctest::Approx(1.0));

    const std::vector<LinkSpec> two{{2.0, 3.0, 3.0, 1.0}, {1.0, 4.0, 3.0, 1.0}};
    CHECK(caching_threshold(two, 5.0) == doctest::Approx(2.0));
    // Inverse proportionality in the delay.
    CHECK(caching_threshold(two, 10.0) == doctest::Approx(1.0));

    CHECK_THROWS_AS(caching_threshold(two, 0.0), std::domain_error);
    CHECK_THROWS_AS(caching_threshold(std::vector<LinkSpec>{}, 1.0), std::domain_error);
}

TEST_CASE("caching_threshold identity sigma * delay == sum of rate*distance") {
    Rng rng(7009);
    for (int i = 0; i < 1000; ++i) {
        const int hops = 1 + static_cast<int>(rng.uniform_below(8));
        std::vector<LinkSpec> links;
        long double rate_distance = 0.0L;
        for (int h = 0; h < hops; ++h) {
            links.push_back(random_link(rng));
            rate_distance += static_cast<long double>(links.back().rate_mbps) *
                             static_cast<long double>(links.back().distance_m);
        }
        const double delay = rng.uniform(1e-3, 1e4);
        const double sigma = caching_threshold(links, delay);
        CHECK(close_rel(sigma * delay, static_cast<double>(rate_distance)));
    }
}

TEST_CASE("CapacityState density is the free fraction") {
    CHECK(CapacityState{100, 0}.density() == doctest::Approx(1.0));
    CHECK(CapacityState{100, 100}.density() == doctest::Approx(0.0));
    CHECK(CapacityState{100, 25}.density() == doctest::Approx(0.75));
    CHECK(CapacityState{0, 0}.density() == doctest::Approx(0.0));
    CHECK_THROWS_AS((CapacityState{10, 11}.density()), std::domain_error);
}
