#ifndef SODSIM_SCENARIO_HPP
#define SODSIM_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "sodsim/model.hpp"

namespace sodsim {

struct TrafficConfig {
    int flows = 10;
    double pareto_shape = 2.5;
    double pareto_scale_s = 0.06; // mean inter-arrival = scale*shape/(shape-1) = 0.1 s
    double packet_size_bits = 4096.0;
    double prioritized_fraction = 0.5;
    int chunks_per_stream = 24;
    double tau0_s = 8000.0; // single-peer download time of the underlying file
    double stream_delay_bound_s = 2.0;
    double packet_deadline_s = 1.0;

    bool operator==(const TrafficConfig&) const = default;
};

struct CacheConfig {
    std::uint64_t capacity_bytes = 1073741824ull; // 1 GiB
    double sigma_low = 0.2;
    double sigma_high = 0.99;
    double max_hold_fraction = 0.25; // of the stream delay bound

    bool operator==(const CacheConfig&) const = default;
};

struct EnergyConfig {
    double initial_j = 1.0;
    double rx_ratio = 0.5;
    double idle_ratio = 0.05;
    double sleep_ratio = 0.01;
    double cache_hold_factor = 0.5;
    double idle_timeout_s = 0.5;
    double sleep_timeout_s = 2.0;
    double wake_s = 0.01;
    double eff_window_s = 1.0; // sliding window for the node's running E_ff

    bool operator==(const EnergyConfig&) const = default;
};

struct MobilityConfig {
    double speed_min_mps = 0.5;
    double speed_max_mps = 1.5;
    double epoch_mean_s = 2.0;

    bool operator==(const MobilityConfig&) const = default;
};

struct PowerConfig {
    double k_power = 0.2;
    CapacityExponent capacity_exponent = CapacityExponent::Decay;

    bool operator==(const PowerConfig&) const = default;
};

// Full description of one simulation run. Defaults are the dense 50-node,
// 11 Mb/s, 512-byte-packet setup; every field can be overridden from the
// JSON config file. Unknown keys are rejected.
struct Scenario {
    int node_count = 50;
    double area_m = 60.0; // square side
    double comm_range_m = 15.0;
    double rate_mbps = 11.0;
    double loss_exponent = 3.0; // valid range (2, 4]
    double fading_factor = 1.0;
    int zone_radius_hops = 2;
    double horizon_s = 60.0;
    double metrics_interval_s = 0.1;
    std::uint64_t seed = 1;
    TrafficConfig traffic;
    CacheConfig cache;
    EnergyConfig energy;
    MobilityConfig mobility;
    PowerConfig power;

    bool operator==(const Scenario&) const = default;

    // Throws ScenarioError naming the offending field and constraint.
    void validate() const;

    PowerCalibration calibration() const {
        return PowerCalibration{power.k_power, power.capacity_exponent};
    }

    static Scenario from_json_string(std::string_view text);
    static Scenario from_json_file(const std::filesystem::path& path);
    std::string to_json_string() const;
};

} // namespace sodsim

#endif
