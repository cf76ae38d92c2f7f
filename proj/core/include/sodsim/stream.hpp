#ifndef SODSIM_STREAM_HPP
#define SODSIM_STREAM_HPP

#include <cstdint>
#include <span>
#include <string_view>

namespace sodsim {

enum class Priority { Prioritized, DontCare };

// Stream = one file's worth of related packets (chunks). Delay-sensitive
// streams are Prioritized; everything else is eligible for delaying.
struct StreamSpec {
    std::uint64_t stream_id = 0;
    int chunk_count = 1;                    // m
    double total_single_peer_time_s = 0.0;  // tau0
    int intermediate_count = 0;             // nodes on the route, endpoints excluded
    double delay_bound_s = 0.0;             // upper bound for correct full-stream reception
    Priority priority = Priority::DontCare;
};

struct PacketMeta {
    std::uint64_t packet_id = 0;
    std::uint64_t stream_id = 0;
    int chunk_index = 0;
    double created_s = 0.0;
    double deadline_s = 0.0;
    double size_bits = 4096.0;
    int hops_remaining = 0;
    Priority priority = Priority::DontCare;
};

// Content-tag to priority class mapping. Audio/video are delay sensitive;
// unknown tags conservatively map to DontCare.
Priority priority_for_tag(std::string_view tag);

Priority classify(const StreamSpec& stream);

enum class StreamOutcome { InBound, BoundViolated };

// InBound iff every chunk was delivered and the slowest one met the stream
// delay bound (the bound itself is still in time; bound + epsilon is not).
StreamOutcome stream_complete(const StreamSpec& stream,
                              std::span<const double> delivery_latencies_s,
                              int dropped_chunks);

} // namespace sodsim

#endif
