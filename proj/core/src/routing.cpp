#include "sodsim/routing.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <queue>
#include <set>

#include "sodsim/errors.hpp"

namespace sodsim {

namespace {

constexpr double kMinLinkDistanceM = 1e-3; // coincident nodes still cost something

LinkSpec make_link(const Topology& topo, int from, int to, double t) {
    const NodeRadio radio = topo.radio(from);
    return LinkSpec{std::max(topo.distance(from, to, t), kMinLinkDistanceM), radio.rate_mbps,
                    radio.loss_exponent, radio.fading_factor};
}

// Link specs are taken from the geometry without a range check: the route
// came from a connectivity snapshot that may lag true positions by a hair,
// and reachability is re-checked per hop at transmission time anyway.
Route assemble_route(const Topology& topo, const std::vector<int>& hops, double t) {
    Route route;
    route.hops = hops;
    route.links.reserve(hops.size() > 0 ? hops.size() - 1 : 0);
    for (std::size_t i = 0; i + 1 < hops.size(); ++i)
        route.links.push_back(make_link(topo, hops[i], hops[i + 1], t));
    return route;
}

// Cuts any cycles a concatenated bordercast path may contain: on a repeated
// node the segment between the two occurrences is removed.
std::vector<int> erase_loops(const std::vector<int>& hops) {
    std::vector<int> out;
    std::map<int, std::size_t> seen;
    for (int hop : hops) {
        auto it = seen.find(hop);
        if (it != seen.end()) {
            for (std::size_t k = it->second + 1; k < out.size(); ++k) seen.erase(out[k]);
            out.resize(it->second + 1);
        } else {
            seen[hop] = out.size();
            out.push_back(hop);
        }
    }
    return out;
}

} // namespace

LinkSpec directed_link(const Topology& topo, int from, int to, double t) {
    const double d = topo.distance(from, to, t);
    if (d > topo.comm_range_m())
        throw OutOfRangeError("directed_link: nodes are out of communication range");
    return make_link(topo, from, to, t);
}

LinkSpec directed_link_unchecked(const Topology& topo, int from, int to, double t) {
    return make_link(topo, from, to, t);
}

Zone compute_zone(Topology& topo, int node, int radius_hops, double t) {
    const AdjacencyView& view = topo.adjacency(t);
    Zone zone;
    zone.center_node = node;
    zone.radius_hops = radius_hops;

    std::vector<int> depth(static_cast<std::size_t>(topo.size()), -1);
    std::deque<int> frontier{node};
    depth[static_cast<std::size_t>(node)] = 0;
    while (!frontier.empty()) {
        const int u = frontier.front();
        frontier.pop_front();
        const int du = depth[static_cast<std::size_t>(u)];
        if (du >= radius_hops) continue;
        for (int v : view.neighbors[static_cast<std::size_t>(u)]) {
            if (depth[static_cast<std::size_t>(v)] < 0) {
                depth[static_cast<std::size_t>(v)] = du + 1;
                frontier.push_back(v);
            }
        }
    }
    for (int i = 0; i < topo.size(); ++i)
        if (depth[static_cast<std::size_t>(i)] >= 0) zone.members.push_back(i);
    return zone;
}

std::optional<Route> intrazone_route(Topology& topo, int src, int dst, int radius_hops,
                                     double t, const PowerCalibration& calib) {
    if (src == dst) return assemble_route(topo, {src}, t);

    const Zone zone = compute_zone(topo, src, radius_hops, t);
    if (!std::binary_search(zone.members.begin(), zone.members.end(), dst)) return std::nullopt;

    const AdjacencyView& view = topo.adjacency(t);
    std::set<int> in_zone(zone.members.begin(), zone.members.end());

    // Dijkstra with lexicographic cost (hops, path power), node id as the
    // final deterministic tie-breaker.
    struct Cost {
        int hops;
        double power_uw;
    };
    std::map<int, Cost> best;
    std::map<int, int> parent;
    auto better = [](const Cost& a, const Cost& b) {
        if (a.hops != b.hops) return a.hops < b.hops;
        return a.power_uw < b.power_uw;
    };

    using QueueEntry = std::tuple<int, double, int>; // hops, power, node
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> queue;
    best[src] = Cost{0, 0.0};
    queue.emplace(0, 0.0, src);
    while (!queue.empty()) {
        auto [hops, power, u] = queue.top();
        queue.pop();
        const Cost cu{hops, power};
        auto it = best.find(u);
        if (it == best.end() || better(it->second, cu)) continue;
        if (u == dst) break;
        for (int v : view.neighbors[static_cast<std::size_t>(u)]) {
            if (!in_zone.contains(v)) continue;
            const double link_power =
                transmission_power_uw(directed_link_unchecked(topo, u, v, t), calib);
            const Cost cv{hops + 1, power + link_power};
            auto bv = best.find(v);
            if (bv == best.end() || better(cv, bv->second)) {
                best[v] = cv;
                parent[v] = u;
                queue.emplace(cv.hops, cv.power_uw, v);
            }
        }
    }
    if (!best.contains(dst)) return std::nullopt; // stale membership, dst unreachable

    std::vector<int> hops{dst};
    while (hops.back() != src) hops.push_back(parent.at(hops.back()));
    std::reverse(hops.begin(), hops.end());
    return assemble_route(topo, hops, t);
}

std::optional<Route> interzone_route(Topology& topo, int src, int dst, int radius_hops,
                                     double t, const PowerCalibration& calib, int ttl) {
    if (auto direct = intrazone_route(topo, src, dst, radius_hops, t, calib)) return direct;

    // Breadth-first bordercast over zone centers. parent_center reconstructs
    // the chain of border nodes whose intrazone segments are concatenated.
    std::map<int, int> parent_center;
    std::set<int> visited{src};
    std::deque<std::pair<int, int>> frontier{{src, 0}}; // center, depth

    while (!frontier.empty()) {
        auto [center, depth] = frontier.front();
        frontier.pop_front();
        if (depth >= ttl) continue;

        const Zone zone = compute_zone(topo, center, radius_hops, t);
        const Zone inner = compute_zone(topo, center, radius_hops - 1, t);
        // Border nodes sit at exactly radius hops from the center.
        for (int border : zone.members) {
            if (visited.contains(border)) continue;
            if (std::binary_search(inner.members.begin(), inner.members.end(), border))
                continue;
            visited.insert(border);
            parent_center[border] = center;

            if (auto tail = intrazone_route(topo, border, dst, radius_hops, t, calib)) {
                std::vector<int> chain{border};
                while (chain.back() != src) chain.push_back(parent_center.at(chain.back()));
                std::reverse(chain.begin(), chain.end());

                std::vector<int> hops{src};
                for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
                    auto segment =
                        intrazone_route(topo, chain[i], chain[i + 1], radius_hops, t, calib);
                    if (!segment) return std::nullopt; // connectivity drifted mid-search
                    hops.insert(hops.end(), segment->hops.begin() + 1, segment->hops.end());
                }
                hops.insert(hops.end(), tail->hops.begin() + 1, tail->hops.end());
                return assemble_route(topo, erase_loops(hops), t);
            }
            frontier.emplace_back(border, depth + 1);
        }
    }
    return std::nullopt;
}

} // namespace sodsim
