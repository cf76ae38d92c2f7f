#ifndef SODSIM_MODEL_HPP
#define SODSIM_MODEL_HPP

#include <cstdint>
#include <span>

// Closed-form power / throughput / caching formulas. Everything here is a
// pure function of its arguments and is usable without the simulator.
//
// Conventions: distances in meters, rates in Mb/s, power in microwatts,
// times in seconds. Power follows the law P = k * R * d^r * phi, where k
// is a calibration constant bridging the unit gap between (Mb/s * m^r)
// and microwatts.

namespace sodsim {

// Sign of the exponent in the capacity scaling factor e^(+-density*eff).
// Decay shrinks power as free storage and effective throughput grow;
// Growth is the literal exponential with a positive exponent.
enum class CapacityExponent { Decay, Growth };

struct PowerCalibration {
    double k_power = 0.2; // microwatt per (Mb/s * m^r)
    CapacityExponent capacity_exponent = CapacityExponent::Decay;
};

// One directed link. Asymmetry is structural: the reverse direction is a
// different LinkSpec with its own rate/exponent/fading.
struct LinkSpec {
    double distance_m = 0.0;
    double rate_mbps = 0.0;
    double loss_exponent = 3.0;  // valid range (2, 4]
    double fading_factor = 1.0;  // >= 1 means a worse channel; 1.0 = no fading
};

struct ThroughputStats {
    std::uint64_t transmitted_blocks = 0;
    std::uint64_t received_blocks = 0;
    double transfer_size_bits = 0.0;
    double transfer_time_s = 0.0;
    double bandwidth_bps = 0.0;
};

// Inputs of the chunked-download delay estimate.
struct CachingParams {
    double tau0_s = 0.0; // whole-file download time from a single peer
    int chunk_count = 1; // m
    int peer_count = 1;  // wireless peers on the path
};

// Storage occupancy of one node. density() is the remaining-free-storage
// fraction in [0,1]; an empty store has density 1.
struct CapacityState {
    std::uint64_t total_bytes = 0;
    std::uint64_t used_bytes = 0;
    double density() const;
};

// P = k * R * d^r * phi, in microwatts. Throws std::domain_error on
// non-positive rate or distance.
double transmission_power_uw(const LinkSpec& link, const PowerCalibration& calib);

// Sum of per-link transmission powers over a multi-hop path.
double path_power_uw(std::span<const LinkSpec> links, const PowerCalibration& calib);

struct GapResult {
    double lumped; // (sum of distances)^r
    double split;  // sum of distance^r
};

// Compares one long link against the equivalent chain of short links.
// For 2+ positive distances and exponent > 1, lumped > split always.
GapResult long_vs_short_gap(std::span<const double> distances_m, double exponent);

// 1 - received/transmitted, in [0,1]. Undefined (throws) for an empty window.
double packet_loss(const ThroughputStats& stats);

// (1 - loss) * (size/time) / bandwidth, clamped to [0,1]. When `clamped`
// is non-null it is set to true iff the raw value fell outside [0,1].
double effective_throughput(const ThroughputStats& stats, bool* clamped = nullptr);

// base * e^(-density*eff) with the Decay sign (default), base * e^(+density*eff)
// with Growth. Decay never exceeds base.
double capacity_scaled_power_uw(double base_power_uw, const CapacityState& cap,
                                double eff, const PowerCalibration& calib);

// Per-chunk download delay: (tau0/m) * log2(peers) for peers >= 2. A single
// peer floors at tau0/m instead of the literal log2(1) = 0.
double chunk_delay_s(const CachingParams& params);

// Caching threshold sigma = sum(R_i * d_i) / delay. Note: the product here
// uses the plain distance, not distance^r.
double caching_threshold(std::span<const LinkSpec> links, double delay_s);

} // namespace sodsim

#endif
