#ifndef SODSIM_NETWORK_SIM_HPP
#define SODSIM_NETWORK_SIM_HPP

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sodsim/cache.hpp"
#include "sodsim/control.hpp"
#include "sodsim/energy.hpp"
#include "sodsim/event_queue.hpp"
#include "sodsim/metrics.hpp"
#include "sodsim/routing.hpp"
#include "sodsim/scenario.hpp"
#include "sodsim/stream.hpp"
#include "sodsim/topology.hpp"
#include "sodsim/traffic.hpp"

namespace sodsim {

// Sliding window of recent transmission outcomes, backing the node's
// running effective throughput.
class EffWindow {
public:
    void record(double t_s, bool received, double bits);
    double eff(double now_s, double window_s, double bandwidth_bps,
               std::uint64_t* clamp_counter);

private:
    struct TxRecord {
        double t_s;
        bool received;
        double bits;
    };
    std::deque<TxRecord> records_;
};

struct NodeRuntime {
    int id = -1;
    NodeEnergy energy;
    CacheStore cache{1};
    std::deque<std::uint64_t> queue_prioritized;
    std::deque<std::uint64_t> queue_dontcare;
    bool transmitting = false;
    double last_accrual_s = 0.0;
    double last_traffic_s = 0.0;
    double ref_active_power_uw = 0.0;
    double total_debited_j = 0.0;
    std::uint64_t state_timer_generation = 0;
    EffWindow eff_window;
};

struct TopologySnapshot {
    struct NodeRow {
        int id;
        double x_m, y_m;
    };
    struct EdgeRow {
        int from, to;
        double distance_m;
    };
    std::vector<NodeRow> nodes;
    std::vector<EdgeRow> edges;
};

struct RunResult {
    RunMetrics metrics;
    TopologySnapshot initial_topology;
    std::uint64_t trace_hash = 0;
};

struct DecisionLogRecord {
    double t_s;
    int node;
    std::uint64_t packet_id;
    ForwardAction action;
    double sigma;
    bool sigma_valid;
    double residual_j;
};

// The packet-level simulation of one scenario: topology and mobility, zone
// routing, per-node radio states and energy ledgers, the caching decision
// engine, and windowed metrics collection. One instance = one run; strictly
// single threaded.
class NetworkSim {
public:
    explicit NetworkSim(const Scenario& scenario);

    // Registers a flow; the destination is drawn uniformly among alive nodes
    // when unspecified. Throws std::domain_error for src == dst or dead ends.
    int spawn_flow(int src, std::optional<int> dst, Priority priority);
    int spawn_flow(int src, std::optional<int> dst, Priority priority,
                   const TrafficProfile& profile);

    // The scenario's configured flow layout: sources shuffled without
    // replacement, destinations uniform, first prioritized_fraction of the
    // flows delay sensitive.
    void spawn_default_flows();

    // Runs to the horizon, verifies the run invariants (throws
    // SimInvariantError on breach) and returns the collected metrics.
    RunResult run();

    Simulator& simulator() { return sim_; }
    Topology& topology() { return topo_; }
    const Scenario& scenario() const { return scenario_; }
    const NodeRuntime& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
    std::uint64_t live_packet_count() const { return live_.size(); }

    void set_decision_log(std::function<void(const DecisionLogRecord&)> log) {
        decision_log_ = std::move(log);
    }

private:
    enum class PacketState { Queued, OnAir, Cached };
    enum class DropReason { DeadlineExpired, NoRoute, ReceiverDead, CacheExpired };

    struct PacketRuntime {
        PacketMeta meta;
        std::vector<int> route;
        std::size_t hop_pos = 0; // route[hop_pos] currently holds the packet
        PacketState state = PacketState::Queued;
    };

    struct StreamRuntime {
        StreamSpec spec;
        std::size_t record_index;
        std::vector<double> latencies_s;
    };

    struct FlowRuntime {
        int id;
        int src;
        int dst;
        Priority priority;
        TrafficProfile profile;
        Rng rng;
        std::uint64_t current_stream = 0;
        int chunks_emitted = 0;
        bool stopped = false;
    };

    // event handlers
    void handle_arrival(std::size_t flow_index);
    void handle_tx_complete(std::uint64_t packet_id, int sender, int receiver, LinkSpec link);
    void handle_cache_flush_timer(int node, std::uint64_t packet_id);
    void handle_mobility_epoch(int node);
    void handle_state_timer(int node, std::uint64_t generation);
    void handle_metrics_sample(std::uint64_t index);

    // engine helpers
    void try_transmit(int node);
    void relay_decision(std::uint64_t packet_id, int node);
    bool ensure_next_hop(PacketRuntime& rt, int holder);
    std::optional<Route> find_route(int src, int dst);
    void enqueue_packet(int node, std::uint64_t packet_id);
    void deliver_packet(std::uint64_t packet_id);
    void drop_packet(std::uint64_t packet_id, DropReason reason);
    void finalize_stream_if_complete(StreamRuntime& stream);
    void flush_cache(int node);
    void accrue(int node);
    void debit(int node, const Activity& activity);
    void set_radio_state(int node, RadioState state);
    void note_traffic(int node);
    bool has_pending_work(const NodeRuntime& node) const;
    int zone_cardinality(int node);
    void take_snapshot(double t);
    void verify_invariants();
    StreamRuntime& stream_of(const PacketMeta& meta);
    std::vector<std::uint8_t> alive_mask() const;

    Scenario scenario_;
    Simulator sim_;
    Topology topo_;
    std::vector<NodeRuntime> nodes_;
    std::vector<Rng> mobility_rng_;
    std::vector<FlowRuntime> flows_;
    std::map<std::uint64_t, PacketRuntime> live_;
    std::map<std::uint64_t, StreamRuntime> streams_;
    RunMetrics metrics_;
    EnergyCoefficients coeff_;
    PowerCalibration calib_;
    std::uint64_t next_packet_id_ = 0;
    std::uint64_t next_stream_id_ = 0;
    std::function<void(const DecisionLogRecord&)> decision_log_;
    bool ran_ = false;
};

// Convenience: default flows + run.
RunResult run_scenario(const Scenario& scenario);

// Writes fig5..fig8 CSVs, summary.json and the t=0 topology snapshot CSVs.
void emit_run_outputs(const RunResult& result, const Scenario& scenario,
                      const std::filesystem::path& out_dir);

} // namespace sodsim

#endif
