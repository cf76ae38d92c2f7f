#ifndef SODSIM_TOPOLOGY_HPP
#define SODSIM_TOPOLOGY_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "sodsim/rng.hpp"

namespace sodsim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// Per-node radio parameters. Rates may differ between nodes, which is what
// makes directed links asymmetric.
struct NodeRadio {
    double rate_mbps = 11.0;
    double loss_exponent = 3.0;
    double fading_factor = 1.0;
};

struct MobilityParams {
    double speed_min_mps = 0.5;
    double speed_max_mps = 1.5;
    double epoch_mean_s = 2.0; // mean of the exponential re-direction epochs
};

// Connectivity snapshot: sorted neighbor lists of every node at build time.
struct AdjacencyView {
    double built_time_s = 0.0;
    std::uint64_t generation = 0;
    std::vector<std::vector<int>> neighbors;
};

// Nodes on a jittered grid inside a rectangular area, moving with a random
// direction / random speed law between exponentially spaced epochs.
// Positions between epochs are derived analytically (constant velocity with
// reflection at the boundary), so queries at any virtual time are exact.
class Topology {
public:
    // Throws ScenarioError if the grid cells get smaller than 1 m a side.
    static Topology build(int n_nodes, double area_side_m, double comm_range_m,
                          std::uint64_t seed);

    int size() const { return static_cast<int>(anchors_.size()); }
    double area_side_m() const { return area_side_m_; }
    double comm_range_m() const { return comm_range_m_; }

    Vec2 position(int id, double t) const;
    double distance(int a, int b, double t) const;
    bool in_range(int a, int b, double t) const;

    NodeRadio radio(int id) const { return radios_[static_cast<std::size_t>(id)]; }
    void set_radio(int id, NodeRadio radio) { radios_[static_cast<std::size_t>(id)] = radio; }

    void set_mobility(MobilityParams params) { mobility_ = params; }
    const MobilityParams& mobility() const { return mobility_; }

    // Re-anchors the node at its time-t position and draws a fresh direction
    // and speed. Returns the delay until the node's next epoch.
    double mobility_epoch(int id, double t, Rng& rng);

    // Pins a node to a fixed position (velocity cleared). Handy for scripted
    // topologies.
    void set_position(int id, Vec2 pos);

    // Undirected edges (a < b) within comm range at time t.
    std::vector<std::pair<int, int>> edges(double t) const;

    // Cached connectivity snapshot; rebuilt when stale (see kAdjacencyRefreshS)
    // or after any mobility epoch.
    const AdjacencyView& adjacency(double t);

    static constexpr double kAdjacencyRefreshS = 0.05;

private:
    struct Anchor {
        Vec2 pos;
        Vec2 velocity;
        double anchored_at_s = 0.0;
    };

    double reflect(double coord) const;

    double area_side_m_ = 0.0;
    double comm_range_m_ = 0.0;
    std::vector<Anchor> anchors_;
    std::vector<NodeRadio> radios_;
    MobilityParams mobility_;
    AdjacencyView adjacency_cache_;
    std::uint64_t generation_ = 0;
    bool adjacency_valid_ = false;
};

} // namespace sodsim

#endif
