#include "sodsim/control.hpp"

namespace sodsim {

Decision forward_decision(const PacketMeta& packet, const DecisionContext& ctx,
                          CacheStore* store) {
    Decision decision;

    if (ctx.now > packet.deadline_s) {
        decision.action = ForwardAction::Drop;
        return decision;
    }

    if (packet.priority == Priority::Prioritized) {
        if (ctx.node_active && ctx.next_hop_reachable) {
            decision.action = ForwardAction::Forward;
        } else {
            decision.action = ForwardAction::Drop;
            decision.reroute_requested = !ctx.next_hop_reachable;
        }
        return decision;
    }

    // Don't-care packet: consider delaying it here.
    if (!ctx.remaining_links.empty()) {
        decision.chunk_delay_s = chunk_delay_s(ctx.caching);
        decision.sigma = caching_threshold(ctx.remaining_links, decision.chunk_delay_s);
        decision.sigma_valid = true;

        if (ctx.nre_cache_candidate && ctx.band.contains(decision.sigma) &&
            ctx.prioritized_queued && store != nullptr) {
            CacheEntry entry;
            entry.packet_id = packet.packet_id;
            entry.deadline_s = packet.deadline_s;
            entry.size_bytes = static_cast<std::uint64_t>(packet.size_bits / 8.0);
            entry.cached_at_s = ctx.now;
            entry.sigma = decision.sigma;
            entry.chunk_delay_s = decision.chunk_delay_s;
            if (store->admit(entry, ctx.now, &decision.evicted)) {
                decision.action = ForwardAction::Cache;
                return decision;
            }
        }
    }

    if (ctx.next_hop_reachable) {
        decision.action = ForwardAction::Forward;
    } else {
        decision.action = ForwardAction::Drop;
        decision.reroute_requested = true;
    }
    return decision;
}

} // namespace sodsim
