#include "sodsim/stream.hpp"

#include <algorithm>
#include <stdexcept>

namespace sodsim {

Priority priority_for_tag(std::string_view tag) {
    if (tag == "audio" || tag == "video" || tag == "stream") return Priority::Prioritized;
    return Priority::DontCare;
}

Priority classify(const StreamSpec& stream) { return stream.priority; }

StreamOutcome stream_complete(const StreamSpec& stream,
                              std::span<const double> delivery_latencies_s,
                              int dropped_chunks) {
    const int accounted = static_cast<int>(delivery_latencies_s.size()) + dropped_chunks;
    if (accounted != stream.chunk_count)
        throw std::domain_error("stream_complete: not all chunks accounted for");
    if (dropped_chunks > 0) return StreamOutcome::BoundViolated;
    const double worst =
        *std::max_element(delivery_latencies_s.begin(), delivery_latencies_s.end());
    return worst <= stream.delay_bound_s ? StreamOutcome::InBound
                                         : StreamOutcome::BoundViolated;
}

} // namespace sodsim
