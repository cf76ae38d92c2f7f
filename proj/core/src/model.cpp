#include "sodsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sodsim {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::domain_error(msg);
}

} // namespace

double CapacityState::density() const {
    require(used_bytes <= total_bytes, "CapacityState: used_bytes exceeds total_bytes");
    if (total_bytes == 0) return 0.0;
    return static_cast<double>(total_bytes - used_bytes) / static_cast<double>(total_bytes);
}

double transmission_power_uw(const LinkSpec& link, const PowerCalibration& calib) {
    require(link.distance_m > 0.0, "transmission_power: distance_m must be > 0");
    require(link.rate_mbps > 0.0, "transmission_power: rate_mbps must be > 0");
    require(link.fading_factor >= 0.0, "transmission_power: fading_factor must be >= 0");
    require(calib.k_power > 0.0, "transmission_power: k_power must be > 0");
    return calib.k_power * link.rate_mbps * std::pow(link.distance_m, link.loss_exponent) *
           link.fading_factor;
}

double path_power_uw(std::span<const LinkSpec> links, const PowerCalibration& calib) {
    require(!links.empty(), "path_power: link list must not be empty");
    double total = 0.0;
    for (const LinkSpec& link : links) total += transmission_power_uw(link, calib);
    return total;
}

GapResult long_vs_short_gap(std::span<const double> distances_m, double exponent) {
    require(exponent > 1.0, "long_vs_short_gap: exponent must be > 1");
    require(distances_m.size() >= 2, "long_vs_short_gap: need at least 2 hops");
    double sum = 0.0;
    double split = 0.0;
    for (double d : distances_m) {
        require(d > 0.0, "long_vs_short_gap: distances must be > 0");
        sum += d;
        split += std::pow(d, exponent);
    }
    return GapResult{std::pow(sum, exponent), split};
}

double packet_loss(const ThroughputStats& stats) {
    require(stats.transmitted_blocks > 0, "packet_loss: transmitted_blocks must be > 0");
    require(stats.received_blocks <= stats.transmitted_blocks,
            "packet_loss: received_blocks exceeds transmitted_blocks");
    return 1.0 - static_cast<double>(stats.received_blocks) /
                     static_cast<double>(stats.transmitted_blocks);
}

double effective_throughput(const ThroughputStats& stats, bool* clamped) {
    require(stats.transfer_time_s > 0.0, "effective_throughput: transfer_time_s must be > 0");
    require(stats.bandwidth_bps > 0.0, "effective_throughput: bandwidth_bps must be > 0");
    require(stats.transfer_size_bits >= 0.0,
            "effective_throughput: transfer_size_bits must be >= 0");
    const double loss = packet_loss(stats);
    const double raw =
        (1.0 - loss) * (stats.transfer_size_bits / stats.transfer_time_s) / stats.bandwidth_bps;
    const double result = std::clamp(raw, 0.0, 1.0);
    if (clamped) *clamped = raw != result;
    return result;
}

double capacity_scaled_power_uw(double base_power_uw, const CapacityState& cap, double eff,
                                const PowerCalibration& calib) {
    require(base_power_uw >= 0.0, "capacity_scaled_power: base power must be >= 0");
    require(eff >= 0.0 && eff <= 1.0, "capacity_scaled_power: eff must be in [0,1]");
    const double exponent = cap.density() * eff;
    const double sign = calib.capacity_exponent == CapacityExponent::Decay ? -1.0 : 1.0;
    return base_power_uw * std::exp(sign * exponent);
}

double chunk_delay_s(const CachingParams& params) {
    require(params.tau0_s > 0.0, "chunk_delay: tau0_s must be > 0");
    require(params.chunk_count >= 1, "chunk_delay: chunk_count must be >= 1");
    require(params.peer_count >= 1, "chunk_delay: peer_count must be >= 1");
    const double per_chunk = params.tau0_s / static_cast<double>(params.chunk_count);
    if (params.peer_count == 1) return per_chunk; // single-peer floor
    return per_chunk * std::log2(static_cast<double>(params.peer_count));
}

double caching_threshold(std::span<const LinkSpec> links, double delay_s) {
    require(delay_s > 0.0, "caching_threshold: delay must be > 0");
    require(!links.empty(), "caching_threshold: link list must not be empty");
    double rate_distance_sum = 0.0;
    for (const LinkSpec& link : links) {
        require(link.distance_m > 0.0, "caching_threshold: distance_m must be > 0");
        require(link.rate_mbps > 0.0, "caching_threshold: rate_mbps must be > 0");
        rate_distance_sum += link.rate_mbps * link.distance_m;
    }
    return rate_distance_sum / delay_s;
}

} // namespace sodsim
