#ifndef SODSIM_CACHE_HPP
#define SODSIM_CACHE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "sodsim/stream.hpp"

namespace sodsim {

struct CacheEntry {
    std::uint64_t packet_id = 0;
    double deadline_s = 0.0;
    std::uint64_t size_bytes = 0;
    double cached_at_s = 0.0;
    double sigma = 0.0;         // threshold value at admission time
    double chunk_delay_s = 0.0; // delay estimate at admission time
};

// Bounded per-node packet store. Only unexpired entries are held; occupancy
// never exceeds capacity. An incoming packet may displace entries whose
// deadlines are later than its own (less urgent); among those the nearest
// deadline goes first. A packet never displaces entries more urgent than
// itself, so a full store of sooner deadlines rejects the newcomer.
class CacheStore {
public:
    explicit CacheStore(std::uint64_t capacity_bytes);

    std::uint64_t capacity_bytes() const { return capacity_bytes_; }
    std::uint64_t occupancy_bytes() const { return occupancy_bytes_; }
    std::uint64_t free_bytes() const { return capacity_bytes_ - occupancy_bytes_; }
    std::size_t size() const { return entries_.size(); }
    bool contains(std::uint64_t packet_id) const { return entries_.contains(packet_id); }
    const CacheEntry* find(std::uint64_t packet_id) const;

    // Entry ids in ascending order (deterministic iteration for flush passes).
    std::vector<std::uint64_t> entry_ids() const;

    // Admission with deadline-aware eviction. Expired packets are rejected.
    // Evicted entries, if any, are appended to *evicted.
    bool admit(const CacheEntry& entry, double now, std::vector<CacheEntry>* evicted = nullptr);

    // Removes and returns one entry.
    std::optional<CacheEntry> take(std::uint64_t packet_id);

    // Drops every entry whose deadline has passed; returns them.
    std::vector<CacheEntry> purge_expired(double now);

private:
    std::uint64_t capacity_bytes_;
    std::uint64_t occupancy_bytes_ = 0;
    std::map<std::uint64_t, CacheEntry> entries_; // by packet id
};

// Picks the cache site on a path: the intermediate with the highest residual
// energy among those with room for the packet; ties break to the lower node
// id; if nobody has room, the highest-residual node overall (eviction will
// run there). All three spans are aligned by index.
int nre_cache_site(std::span<const int> intermediate_ids,
                   std::span<const double> residual_j,
                   std::span<const std::uint64_t> free_capacity_bytes,
                   std::uint64_t packet_size_bytes);

} // namespace sodsim

#endif
