#ifndef SODSIM_TRAFFIC_HPP
#define SODSIM_TRAFFIC_HPP

#include <cstdint>
#include <span>

#include "sodsim/rng.hpp"

namespace sodsim {

// Constant-bit-rate flow with heavy-tailed (Pareto) packet inter-arrival.
struct TrafficProfile {
    double packet_size_bits = 4096.0; // one 512-byte packet
    double pareto_shape = 2.5;        // > 1 so the mean inter-arrival is finite
    double pareto_scale_s = 0.06;     // minimum inter-arrival
};

// Pareto(shape a, scale x_m) sample: x_m * U^(-1/a). Samples are >= scale;
// the mean is scale * a / (a - 1).
double pareto_interarrival_s(Rng& rng, const TrafficProfile& profile);

// Uniform pick among alive nodes, excluding `src`. Throws std::domain_error
// if no candidate exists.
int pick_uniform_destination(Rng& rng, std::span<const std::uint8_t> alive, int src);

} // namespace sodsim

#endif
