#ifndef SODSIM_EVENT_QUEUE_HPP
#define SODSIM_EVENT_QUEUE_HPP

#include <cstdint>
#include <functional>
#include <set>
#include <vector>

namespace sodsim {

enum class EventKind {
    PacketArrival,
    TransmissionComplete,
    CacheFlush,
    MobilityStep,
    StateTimer,
    MetricsSample,
};

using EventId = std::uint64_t;

struct Event {
    double fire_time_s = 0.0;
    EventId sequence_no = 0;
    EventKind kind = EventKind::PacketArrival;
};

// Deterministic discrete-event kernel. Events fire in (fire_time, sequence_no)
// order; equal-time events dequeue in scheduling order. The virtual clock
// never moves backwards.
class Simulator {
public:
    double now() const { return now_; }

    // Throws std::domain_error if fire_time_s < now().
    EventId schedule(double fire_time_s, EventKind kind, std::function<void()> action);

    // Returns true if the event was still pending.
    bool cancel(EventId id);

    // Processes every event with fire_time <= t_end_s, advances the clock to
    // t_end_s, and returns the number of events executed.
    std::uint64_t run_until(double t_end_s);

    std::uint64_t scheduled_count() const { return scheduled_; }
    std::uint64_t processed_count() const { return processed_; }
    std::uint64_t cancelled_count() const { return cancelled_; }
    std::uint64_t pending_count() const { return pending_.size() - cancelled_pending_.size(); }

    // FNV-1a over (fire_time bits, sequence_no, kind) of every executed event.
    std::uint64_t trace_hash() const { return trace_hash_; }

    // When enabled, keeps the full ordered list of executed events.
    void enable_trace_recording(bool on) { record_trace_ = on; }
    const std::vector<Event>& trace() const { return trace_; }

private:
    struct Pending {
        Event ev;
        std::function<void()> action;
    };

    static bool fires_later(const Pending& a, const Pending& b);

    double now_ = 0.0;
    std::vector<Pending> pending_; // binary heap, min by (time, seq)
    std::set<EventId> cancelled_pending_;
    std::uint64_t next_sequence_ = 0;
    std::uint64_t scheduled_ = 0;
    std::uint64_t processed_ = 0;
    std::uint64_t cancelled_ = 0;
    std::uint64_t trace_hash_ = 1469598103934665603ull;
    bool record_trace_ = false;
    std::vector<Event> trace_;
};

} // namespace sodsim

#endif
