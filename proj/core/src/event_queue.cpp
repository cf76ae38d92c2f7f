#include "sodsim/event_queue.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace sodsim {

bool Simulator::fires_later(const Pending& a, const Pending& b) {
    if (a.ev.fire_time_s != b.ev.fire_time_s) return a.ev.fire_time_s > b.ev.fire_time_s;
    return a.ev.sequence_no > b.ev.sequence_no;
}

EventId Simulator::schedule(double fire_time_s, EventKind kind, std::function<void()> action) {
    if (fire_time_s < now_) throw std::domain_error("schedule: fire time is in the past");
    const EventId id = next_sequence_++;
    pending_.push_back(Pending{Event{fire_time_s, id, kind}, std::move(action)});
    std::push_heap(pending_.begin(), pending_.end(), fires_later);
    ++scheduled_;
    return id;
}

bool Simulator::cancel(EventId id) {
    if (id >= next_sequence_) return false;
    // Lazy removal: the heap entry is skipped when popped.
    const bool inserted = cancelled_pending_.insert(id).second;
    if (!inserted) return false;
    // Only count events that are actually still in the heap.
    bool present = false;
    for (const Pending& p : pending_) {
        if (p.ev.sequence_no == id) {
            present = true;
            break;
        }
    }
    if (!present) {
        cancelled_pending_.erase(id);
        return false;
    }
    ++cancelled_;
    return true;
}

std::uint64_t Simulator::run_until(double t_end_s) {
    if (t_end_s < now_) throw std::domain_error("run_until: t_end is in the past");
    std::uint64_t executed = 0;
    while (!pending_.empty() && pending_.front().ev.fire_time_s <= t_end_s) {
        std::pop_heap(pending_.begin(), pending_.end(), fires_later);
        Pending current = std::move(pending_.back());
        pending_.pop_back();
        auto cancelled_it = cancelled_pending_.find(current.ev.sequence_no);
        if (cancelled_it != cancelled_pending_.end()) {
            cancelled_pending_.erase(cancelled_it);
            continue;
        }
        now_ = std::max(now_, current.ev.fire_time_s);
        trace_hash_ ^= std::bit_cast<std::uint64_t>(current.ev.fire_time_s);
        trace_hash_ *= 1099511628211ull;
        trace_hash_ ^= current.ev.sequence_no;
        trace_hash_ *= 1099511628211ull;
        trace_hash_ ^= static_cast<std::uint64_t>(current.ev.kind);
        trace_hash_ *= 1099511628211ull;
        if (record_trace_) trace_.push_back(current.ev);
        ++processed_;
        ++executed;
        current.action();
    }
    now_ = std::max(now_, t_end_s);
    return executed;
}

} // namespace sodsim
