#include "sodsim/cache.hpp"

#include <algorithm>
#include <stdexcept>

namespace sodsim {

CacheStore::CacheStore(std::uint64_t capacity_bytes) : capacity_bytes_(capacity_bytes) {}

const CacheEntry* CacheStore::find(std::uint64_t packet_id) const {
    auto it = entries_.find(packet_id);
    return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::uint64_t> CacheStore::entry_ids() const {
    std::vector<std::uint64_t> ids;
    ids.reserve(entries_.size());
    for (const auto& [id, entry] : entries_) ids.push_back(id);
    return ids;
}

bool CacheStore::admit(const CacheEntry& entry, double now, std::vector<CacheEntry>* evicted) {
    if (entry.deadline_s <= now) return false;
    if (entry.size_bytes > capacity_bytes_) return false;
    if (entries_.contains(entry.packet_id))
        throw std::logic_error("CacheStore: duplicate packet id");

    if (free_bytes() < entry.size_bytes) {
        // Eviction candidates: entries less urgent than the newcomer, nearest
        // deadline first. Check feasibility before touching anything.
        std::vector<const CacheEntry*> candidates;
        for (const auto& [id, e] : entries_)
            if (e.deadline_s > entry.deadline_s) candidates.push_back(&e);
        std::sort(candidates.begin(), candidates.end(),
                  [](const CacheEntry* a, const CacheEntry* b) {
                      if (a->deadline_s != b->deadline_s) return a->deadline_s < b->deadline_s;
                      return a->packet_id < b->packet_id;
                  });
        std::uint64_t reclaimable = free_bytes();
        std::size_t needed = 0;
        while (needed < candidates.size() && reclaimable < entry.size_bytes)
            reclaimable += candidates[needed++]->size_bytes;
        if (reclaimable < entry.size_bytes) return false;

        for (std::size_t i = 0; i < needed; ++i) {
            const std::uint64_t victim = candidates[i]->packet_id;
            auto it = entries_.find(victim);
            if (evicted) evicted->push_back(it->second);
            occupancy_bytes_ -= it->second.size_bytes;
            entries_.erase(it);
        }
    }

    occupancy_bytes_ += entry.size_bytes;
    entries_.emplace(entry.packet_id, entry);
    return true;
}

std::optional<CacheEntry> CacheStore::take(std::uint64_t packet_id) {
    auto it = entries_.find(packet_id);
    if (it == entries_.end()) return std::nullopt;
    CacheEntry entry = it->second;
    occupancy_bytes_ -= entry.size_bytes;
    entries_.erase(it);
    return entry;
}

std::vector<CacheEntry> CacheStore::purge_expired(double now) {
    std::vector<CacheEntry> expired;
    for (auto it = entries_.begin(); it != entries_.end();) {
        if (it->second.deadline_s <= now) {
            expired.push_back(it->second);
            occupancy_bytes_ -= it->second.size_bytes;
            it = entries_.erase(it);
        } else {
            ++it;
        }
    }
    return expired;
}

int nre_cache_site(std::span<const int> intermediate_ids,
                   std::span<const double> residual_j,
                   std::span<const std::uint64_t> free_capacity_bytes,
                   std::uint64_t packet_size_bytes) {
    if (intermediate_ids.empty())
        throw std::domain_error("nre_cache_site: path has no intermediate node");
    if (intermediate_ids.size() != residual_j.size() ||
        intermediate_ids.size() != free_capacity_bytes.size())
        throw std::domain_error("nre_cache_site: span sizes differ");

    auto pick = [&](bool require_space) -> int {
        int best = -1;
        double best_residual = 0.0;
        for (std::size_t i = 0; i < intermediate_ids.size(); ++i) {
            if (require_space && free_capacity_bytes[i] < packet_size_bytes) continue;
            const bool wins = best < 0 || residual_j[i] > best_residual ||
                              (residual_j[i] == best_residual && intermediate_ids[i] < best);
            if (wins) {
                best = intermediate_ids[i];
                best_residual = residual_j[i];
            }
        }
        return best;
    };

    const int with_space = pick(true);
    return with_space >= 0 ? with_space : pick(false);
}

} // namespace sodsim
