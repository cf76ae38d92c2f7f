#include <doctest.h>

#include <algorithm>
#include <deque>
#include <set>
#include <vector>

#include "sodsim/errors.hpp"
#include "sodsim/routing.hpp"

using namespace sodsim;

namespace {

const PowerCalibration kCalib{0.2, CapacityExponent::Decay};

// Nodes pinned to explicit coordinates.
Topology scripted(const std::vector<Vec2>& positions, double area, double range) {
    Topology topo = Topology::build(static_cast<int>(positions.size()), area, range, 1);
    for (std::size_t i = 0; i < positions.size(); ++i)
        topo.set_position(static_cast<int>(i), positions[i]);
    return topo;
}

Topology line(int n, double spacing, double range) {
    std::vector<Vec2> pos;
    for (int i = 0; i < n; ++i)
        pos.push_back(Vec2{5.0 + i * spacing, 5.0});
    return scripted(pos, 5.0 + n * spacing + 5.0, range);
}

// Independent hop-distance oracle: plain BFS over an explicit adjacency.
std::vector<int> bfs_distances(const std::vector<std::vector<int>>& adj, int src) {
    std::vector<int> dist(adj.size(), -1);
    std::deque<int> frontier{src};
    dist[static_cast<std::size_t>(src)] = 0;
    while (!frontier.empty()) {
        const int u = frontier.front();
        frontier.pop_front();
        for (int v : adj[static_cast<std::size_t>(u)]) {
            if (dist[static_cast<std::size_t>(v)] < 0) {
                dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                frontier.push_back(v);
            }
        }
    }
    return dist;
}

std::vector<std::vector<int>> adjacency_of(Topology& topo, double t) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(topo.size()));
    for (const auto& [a, b] : topo.edges(t)) {
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    return adj;
}

} // namespace

TEST_CASE("zone of radius zero is the node itself") {
    Topology topo = line(4, 10.0, 12.0);
    const Zone zone = compute_zone(topo, 1, 0, 0.0);
    CHECK(zone.members == std::vector<int>{1});
}

TEST_CASE("radius one covers a complete graph") {
    Topology topo = line(4, 1.0, 100.0);
    const Zone zone = compute_zone(topo, 2, 1, 0.0);
    CHECK(zone.members == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("zone on a line cuts off at the hop radius") {
    Topology topo = line(4, 10.0, 12.0); // edges only between neighbors
    const Zone zone = compute_zone(topo, 0, 2, 0.0);
    CHECK(zone.members == std::vector<int>{0, 1, 2});
}

TEST_CASE("intrazone route to self is a single-node route") {
    Topology topo = line(3, 10.0, 12.0);
    const auto route = intrazone_route(topo, 1, 1, 2, 0.0, kCalib);
    REQUIRE(route.has_value());
    CHECK(route->hops == std::vector<int>{1});
    CHECK(route->links.empty());
}

TEST_CASE("intrazone route follows the line") {
    Topology topo = line(3, 10.0, 12.0);
    const auto route = intrazone_route(topo, 0, 2, 2, 0.0, kCalib);
    REQUIRE(route.has_value());
    CHECK(route->hops == std::vector<int>{0, 1, 2});
    CHECK(route->links.size() == 2);
}

TEST_CASE("equal hop count breaks ties toward the lower-power path") {
    // a - b - d is shorter-linked than a - c - d; a-d itself is out of range.
    const std::vector<Vec2> pos{{10.0, 10.0}, {14.0, 11.0}, {14.0, 14.0}, {18.0, 10.0}};
    Topology topo = scripted(pos, 40.0, 7.0);
    const auto route = intrazone_route(topo, 0, 3, 2, 0.0, kCalib);
    REQUIRE(route.has_value());
    CHECK(route->hops == std::vector<int>{0, 1, 3});

    // Cross-check the tie-break with the path power oracle.
    const std::vector<LinkSpec> via_b{directed_link(topo, 0, 1, 0.0),
                                      directed_link(topo, 1, 3, 0.0)};
    const std::vector<LinkSpec> via_c{directed_link(topo, 0, 2, 0.0),
                                      directed_link(topo, 2, 3, 0.0)};
    CHECK(path_power_uw(via_b, kCalib) < path_power_uw(via_c, kCalib));
}

TEST_CASE("bordercast reaches a destination one border hop away") {
    Topology topo = line(6, 10.0, 12.0);
    // Zone radius 2: zone(0) = {0,1,2}; 3 is one border expansion away.
    const auto route = interzone_route(topo, 0, 3, 2, 0.0, kCalib);
    REQUIRE(route.has_value());
    CHECK(route->hops == std::vector<int>{0, 1, 2, 3});

    const auto far = interzone_route(topo, 0, 5, 2, 0.0, kCalib);
    REQUIRE(far.has_value());
    CHECK(far->hops == std::vector<int>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("bordercast delegates to the intrazone table inside the zone") {
    Topology topo = line(6, 10.0, 12.0);
    const auto inter = interzone_route(topo, 0, 2, 2, 0.0, kCalib);
    const auto intra = intrazone_route(topo, 0, 2, 2, 0.0, kCalib);
    REQUIRE(inter.has_value());
    REQUIRE(intra.has_value());
    CHECK(inter->hops == intra->hops);
}

TEST_CASE("a partitioned graph yields no route") {
    const std::vector<Vec2> pos{{5.0, 5.0}, {10.0, 5.0}, {300.0, 5.0}, {305.0, 5.0}};
    Topology topo = scripted(pos, 400.0, 8.0);
    CHECK_FALSE(interzone_route(topo, 0, 3, 2, 0.0, kCalib).has_value());
    CHECK_FALSE(intrazone_route(topo, 0, 3, 2, 0.0, kCalib).has_value());
}

TEST_CASE("zone membership equals the all-pairs BFS oracle on random graphs") {
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 20 + static_cast<int>(rng.uniform_below(31));
        std::vector<Vec2> pos;
        for (int i = 0; i < n; ++i)
            pos.push_back(Vec2{rng.uniform(0.0, 80.0), rng.uniform(0.0, 80.0)});
        Topology topo = scripted(pos, 80.0, rng.uniform(10.0, 30.0));
        const auto adj = adjacency_of(topo, 0.0);
        const int radius = 1 + static_cast<int>(rng.uniform_below(3));
        for (int center = 0; center < n; ++center) {
            const auto dist = bfs_distances(adj, center);
            std::vector<int> expected;
            for (int i = 0; i < n; ++i)
                if (dist[static_cast<std::size_t>(i)] >= 0 &&
                    dist[static_cast<std::size_t>(i)] <= radius)
                    expected.push_back(i);
            const Zone zone = compute_zone(topo, center, radius, 0.0);
            CHECK(zone.members == expected);
        }
    }
}

TEST_CASE("returned routes are valid and loop free, with oracle hop counts") {
    Rng rng(32);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 15 + static_cast<int>(rng.uniform_below(36));
        std::vector<Vec2> pos;
        for (int i = 0; i < n; ++i)
            pos.push_back(Vec2{rng.uniform(0.0, 60.0), rng.uniform(0.0, 60.0)});
        Topology topo = scripted(pos, 60.0, rng.uniform(12.0, 25.0));
        const auto adj = adjacency_of(topo, 0.0);
        const int radius = 1 + static_cast<int>(rng.uniform_below(3));

        for (int probe = 0; probe < 10; ++probe) {
            const int src = static_cast<int>(rng.uniform_below(n));
            const int dst = static_cast<int>(rng.uniform_below(n));
            const auto route = interzone_route(topo, src, dst, radius, 0.0, kCalib);
            const auto dist = bfs_distances(adj, src);
            const bool reachable = dist[static_cast<std::size_t>(dst)] >= 0;
            if (!route) {
                CHECK_FALSE(reachable);
                continue;
            }
            CHECK(reachable);
            CHECK(route->hops.front() == src);
            CHECK(route->hops.back() == dst);
            CHECK(route->links.size() + 1 == route->hops.size());
            std::set<int> unique(route->hops.begin(), route->hops.end());
            CHECK(unique.size() == route->hops.size());
            for (std::size_t i = 0; i + 1 < route->hops.size(); ++i)
                CHECK(topo.in_range(route->hops[i], route->hops[i + 1], 0.0));

            // Inside the zone the route must be hop optimal.
            if (src != dst && dist[static_cast<std::size_t>(dst)] <= radius) {
                const auto intra = intrazone_route(topo, src, dst, radius, 0.0, kCalib);
                REQUIRE(intra.has_value());
                CHECK(static_cast<int>(intra->hops.size()) - 1 ==
                      dist[static_cast<std::size_t>(dst)]);
            }
        }
    }
}

TEST_CASE("directed links use the transmitter's radio parameters") {
    Topology topo = line(2, 10.0, 12.0);
    topo.set_radio(0, NodeRadio{11.0, 3.0, 1.0});
    topo.set_radio(1, NodeRadio{2.0, 3.0, 1.0});

    const LinkSpec ab = directed_link(topo, 0, 1, 0.0);
    const LinkSpec ba = directed_link(topo, 1, 0, 0.0);
    CHECK(ab.distance_m == doctest::Approx(ba.distance_m));
    CHECK(ab.rate_mbps == doctest::Approx(11.0));
    CHECK(ba.rate_mbps == doctest::Approx(2.0));
    // Asymmetric rates make the two directions cost differently.
    CHECK(transmission_power_uw(ab, kCalib) != doctest::Approx(transmission_power_uw(ba, kCalib)));
}

TEST_CASE("directed_link rejects out-of-range pairs") {
    Topology topo = line(3, 10.0, 12.0);
    CHECK_THROWS_AS(directed_link(topo, 0, 2, 0.0), OutOfRangeError);
}
