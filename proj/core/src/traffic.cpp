#include "sodsim/traffic.hpp"

#include <cmath>
#include <stdexcept>

namespace sodsim {

double pareto_interarrival_s(Rng& rng, const TrafficProfile& profile) {
    if (profile.pareto_shape <= 1.0)
        throw std::domain_error("pareto_interarrival: shape must be > 1");
    if (profile.pareto_scale_s <= 0.0)
        throw std::domain_error("pareto_interarrival: scale must be > 0");
    // 1 - uniform01() lies in (0, 1], so the power never divides by zero.
    const double u = 1.0 - rng.uniform01();
    return profile.pareto_scale_s * std::pow(u, -1.0 / profile.pareto_shape);
}

int pick_uniform_destination(Rng& rng, std::span<const std::uint8_t> alive, int src) {
    std::uint64_t candidates = 0;
    for (std::size_t i = 0; i < alive.size(); ++i) {
        if (alive[i] && static_cast<int>(i) != src) ++candidates;
    }
    if (candidates == 0)
        throw std::domain_error("pick_uniform_destination: no alive destination");
    std::uint64_t k = rng.uniform_below(candidates);
    for (std::size_t i = 0; i < alive.size(); ++i) {
        if (alive[i] && static_cast<int>(i) != src) {
            if (k == 0) return static_cast<int>(i);
            --k;
        }
    }
    throw std::logic_error("pick_uniform_destination: unreachable");
}

} // namespace sodsim
