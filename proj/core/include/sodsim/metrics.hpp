#ifndef SODSIM_METRICS_HPP
#define SODSIM_METRICS_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sodsim/model.hpp"
#include "sodsim/scenario.hpp"
#include "sodsim/stream.hpp"

namespace sodsim {

// One data-packet transmission, as seen by the energy model.
struct PowerSample {
    double t_s = 0.0;
    double power_uw = 0.0; // capacity-scaled transmit power
    double link_distance_m = 0.0;
    int tx_node = -1;
    int zone_cardinality = 0; // size of the transmitter's zone at tx time
};

struct CacheEventSample {
    double t_s = 0.0;
    double sigma = 0.0;
    double chunk_delay_s = 0.0;
    int node = -1;
};

// Lifetime statistics of one stream. transfer time runs from the first
// source transmission to the last delivery.
struct StreamRecord {
    std::uint64_t stream_id = 0;
    Priority priority = Priority::DontCare;
    int chunk_count = 0;
    int delivered = 0;
    int dropped = 0;
    ThroughputStats stats;
    double first_tx_s = -1.0;
    double last_delivery_s = -1.0;
    double max_latency_s = 0.0;
    bool completed = false;
    bool in_bound = false;
};

struct DelayStats {
    std::uint64_t count = 0;
    double sum_s = 0.0;
    double max_s = 0.0;

    void add(double delay_s);
    double mean_s() const { return count == 0 ? 0.0 : sum_s / static_cast<double>(count); }
};

struct RunTotals {
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t cached_at_end = 0;
    std::uint64_t in_flight_at_end = 0;
    std::uint64_t dropped_deadline = 0;
    std::uint64_t dropped_no_route = 0;
    std::uint64_t dropped_receiver_dead = 0;
    std::uint64_t dropped_cache_expired = 0;
    std::uint64_t cache_admissions = 0;
    std::uint64_t cache_flushes = 0;
    std::uint64_t cache_evictions = 0;
    std::uint64_t eff_clamp_events = 0;
    std::uint64_t energy_anomalies = 0;
    double total_debited_j = 0.0;
    std::uint64_t events_scheduled = 0;
    std::uint64_t events_processed = 0;
    std::uint64_t events_cancelled = 0;
    std::uint64_t events_pending_at_end = 0;
};

// Everything a run records. Aggregations below are pure functions of this.
struct RunMetrics {
    std::vector<double> sample_times_s; // first entry is the t=0 snapshot
    std::vector<std::vector<double>> node_residual_j;   // [sample][node]
    std::vector<std::vector<double>> zone_mean_residual_j; // [sample][zone center]
    std::vector<PowerSample> power_samples;
    std::vector<CacheEventSample> cache_events;
    std::vector<double> sigma_samples; // every sigma evaluated at a decision
    std::vector<StreamRecord> streams;
    DelayStats delay_prioritized;
    DelayStats delay_dontcare;
    RunTotals totals;
    std::uint64_t periodic_sample_count = 0;
};

struct Fig5Row {
    int zone_node_count = 0;
    double mean_power_uw = 0.0;
};

struct Fig5DistanceRow {
    double max_link_distance_m = 0.0; // upper edge of a 1 m bucket
    double mean_power_uw = 0.0;
};

struct Fig6Row {
    double sigma_bucket = 0.0; // lower edge of a 0.05-wide bucket
    double mean_caching_delay_s = 0.0;
};

struct Fig7Row {
    double mean_eff_throughput = 0.0;
    double mean_power_uw = 0.0;
};

struct Fig8Row {
    double time_s = 0.0;
    int zone_id = 0;
    double mean_residual_j = 0.0;
};

// Mean transmit power grouped by the transmitter's zone cardinality.
std::vector<Fig5Row> fig5_aggregate(const RunMetrics& metrics);

// Alternate reading of the same data: grouped by link distance (1 m buckets).
std::vector<Fig5DistanceRow> fig5_distance_aggregate(const RunMetrics& metrics);

// Mean realized caching delay per sigma bucket (width 0.05).
std::vector<Fig6Row> fig6_aggregate(const RunMetrics& metrics);

// Run-level mean effective throughput vs mean transmit power.
Fig7Row fig7_aggregate(const RunMetrics& metrics);

// Per-sample mean residual energy of every zone.
std::vector<Fig8Row> fig8_aggregate(const RunMetrics& metrics);

// Run-level mean of per-stream effective throughput (streams that never
// transmitted are excluded).
double mean_effective_throughput(const RunMetrics& metrics);

double mean_transmit_power_uw(const RunMetrics& metrics);

// Writes fig5.csv, fig5_distance.csv, fig6.csv, fig7.csv, fig8.csv.
void write_fig_csvs(const RunMetrics& metrics, const std::filesystem::path& dir);

// Writes summary.json (schema documented in the README).
void write_summary_json(const RunMetrics& metrics, const Scenario& scenario,
                        const std::filesystem::path& dir);

std::string summary_json_string(const RunMetrics& metrics, const Scenario& scenario);

// Deterministic shortest-round-trip formatting used in every CSV.
std::string format_double(double value);

} // namespace sodsim

#endif
