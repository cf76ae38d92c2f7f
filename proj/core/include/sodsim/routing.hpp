#ifndef SODSIM_ROUTING_HPP
#define SODSIM_ROUTING_HPP

#include <optional>
#include <vector>

#include "sodsim/model.hpp"
#include "sodsim/topology.hpp"

namespace sodsim {

// A zone-radius neighborhood of one node under the current connectivity.
struct Zone {
    int center_node = -1;
    int radius_hops = 0;
    std::vector<int> members; // sorted, always contains center
};

struct Route {
    std::vector<int> hops;       // src ... dst
    std::vector<LinkSpec> links; // links[i] is hops[i] -> hops[i+1]
};

// Directed link from the current geometry: distance at time t, rate/exponent/
// fading of the transmitter. Throws OutOfRangeError beyond comm range.
LinkSpec directed_link(const Topology& topo, int from, int to, double t);

// Same, without the range check. Used for threshold math on routes that may
// have gone stale.
LinkSpec directed_link_unchecked(const Topology& topo, int from, int to, double t);

// BFS truncated at radius_hops over the cached connectivity snapshot.
Zone compute_zone(Topology& topo, int node, int radius_hops, double t);

// Proactive route inside the zone of src: fewest hops, ties broken by the
// lower total transmission power of the path, then by node ids. Returns
// nullopt when dst is outside the zone or unreachable.
std::optional<Route> intrazone_route(Topology& topo, int src, int dst, int radius_hops,
                                     double t, const PowerCalibration& calib);

// Reactive search beyond the zone: the query fans out to zone border nodes
// recursively (visited set keeps it loop-free, ttl bounds the recursion
// depth) and the per-zone segments are concatenated.
std::optional<Route> interzone_route(Topology& topo, int src, int dst, int radius_hops,
                                     double t, const PowerCalibration& calib, int ttl = 16);

} // namespace sodsim

#endif
