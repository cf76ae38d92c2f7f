#ifndef SODSIM_CONTROL_HPP
#define SODSIM_CONTROL_HPP

#include <span>

#include "sodsim/cache.hpp"
#include "sodsim/model.hpp"
#include "sodsim/stream.hpp"

namespace sodsim {

// Threshold band inside which caching a don't-care packet is worthwhile.
struct SigmaBand {
    double low = 0.2;
    double high = 0.99;

    bool contains(double sigma) const { return sigma > low && sigma < high; }
};

enum class ForwardAction { Forward, Cache, Drop };

// Snapshot a relay node needs to decide a packet's fate.
struct DecisionContext {
    double now = 0.0;
    bool node_active = true;
    bool next_hop_reachable = true;
    bool prioritized_queued = false; // a prioritized packet is co-queued here
    bool nre_cache_candidate = false; // this node is the residual-energy pick
    std::span<const LinkSpec> remaining_links;
    CachingParams caching; // tau0 / chunks / peers of the remaining path
    SigmaBand band;
};

struct Decision {
    ForwardAction action = ForwardAction::Forward;
    double sigma = 0.0;         // computed for don't-care packets only
    double chunk_delay_s = 0.0; // likewise
    bool sigma_valid = false;
    bool reroute_requested = false; // next hop was unreachable; try rediscovery once
    std::vector<CacheEntry> evicted; // displaced by a Cache admission
};

// Per-packet relay decision:
//  - anything past its deadline is dropped;
//  - prioritized packets always push on while a reachable next hop exists;
//  - don't-care packets are cached when sigma falls inside the band, a
//    prioritized packet is co-queued, this node is the residual-energy cache
//    site, and the store admits them; otherwise they are forwarded.
// A store of nullptr disables the cache branch. When the next hop is
// unreachable the decision is Drop with reroute_requested set; the caller
// rediscovers the route once and asks again.
Decision forward_decision(const PacketMeta& packet, const DecisionContext& ctx,
                          CacheStore* store);

} // namespace sodsim

#endif
