#include "sodsim/topology.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sodsim/errors.hpp"

namespace sodsim {

Topology Topology::build(int n_nodes, double area_side_m, double comm_range_m,
                         std::uint64_t seed) {
    if (n_nodes < 2) throw ScenarioError("topology: need at least 2 nodes");
    if (area_side_m <= 0.0) throw ScenarioError("topology: area side must be > 0");
    if (comm_range_m <= 0.0) throw ScenarioError("topology: comm range must be > 0");

    const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_nodes))));
    const int rows = (n_nodes + cols - 1) / cols;
    const double cell_w = area_side_m / cols;
    const double cell_h = area_side_m / rows;
    if (cell_w < 1.0 || cell_h < 1.0)
        throw ScenarioError("topology: area too small for node count (grid cell < 1 m)");

    Topology topo;
    topo.area_side_m_ = area_side_m;
    topo.comm_range_m_ = comm_range_m;
    topo.anchors_.resize(static_cast<std::size_t>(n_nodes));
    topo.radios_.resize(static_cast<std::size_t>(n_nodes));

    Rng rng = Rng::stream(seed, "topology");
    constexpr double kJitterFraction = 0.3;
    for (int k = 0; k < n_nodes; ++k) {
        const int row = k / cols;
        const int col = k % cols;
        const double cx = (col + 0.5) * cell_w;
        const double cy = (row + 0.5) * cell_h;
        const double jx = rng.uniform(-kJitterFraction * cell_w, kJitterFraction * cell_w);
        const double jy = rng.uniform(-kJitterFraction * cell_h, kJitterFraction * cell_h);
        topo.anchors_[static_cast<std::size_t>(k)].pos = Vec2{cx + jx, cy + jy};
    }
    return topo;
}

double Topology::reflect(double coord) const {
    const double period = 2.0 * area_side_m_;
    double x = std::fmod(coord, period);
    if (x < 0.0) x += period;
    if (x > area_side_m_) x = period - x;
    return x;
}

Vec2 Topology::position(int id, double t) const {
    const Anchor& a = anchors_[static_cast<std::size_t>(id)];
    const double dt = t - a.anchored_at_s;
    return Vec2{reflect(a.pos.x + a.velocity.x * dt), reflect(a.pos.y + a.velocity.y * dt)};
}

double Topology::distance(int a, int b, double t) const {
    const Vec2 pa = position(a, t);
    const Vec2 pb = position(b, t);
    return std::hypot(pa.x - pb.x, pa.y - pb.y);
}

bool Topology::in_range(int a, int b, double t) const {
    return distance(a, b, t) <= comm_range_m_;
}

double Topology::mobility_epoch(int id, double t, Rng& rng) {
    Anchor& a = anchors_[static_cast<std::size_t>(id)];
    a.pos = position(id, t);
    a.anchored_at_s = t;
    const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double speed = rng.uniform(mobility_.speed_min_mps, mobility_.speed_max_mps);
    a.velocity = Vec2{speed * std::cos(theta), speed * std::sin(theta)};
    ++generation_;
    adjacency_valid_ = false;
    return rng.exponential(mobility_.epoch_mean_s);
}

void Topology::set_position(int id, Vec2 pos) {
    Anchor& a = anchors_[static_cast<std::size_t>(id)];
    a.pos = pos;
    a.velocity = Vec2{0.0, 0.0};
    a.anchored_at_s = 0.0;
    ++generation_;
    adjacency_valid_ = false;
}

std::vector<std::pair<int, int>> Topology::edges(double t) const {
    std::vector<std::pair<int, int>> result;
    const int n = size();
    std::vector<Vec2> pos(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pos[static_cast<std::size_t>(i)] = position(i, t);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double d = std::hypot(pos[static_cast<std::size_t>(i)].x -
                                            pos[static_cast<std::size_t>(j)].x,
                                        pos[static_cast<std::size_t>(i)].y -
                                            pos[static_cast<std::size_t>(j)].y);
            if (d <= comm_range_m_) result.emplace_back(i, j);
        }
    }
    return result;
}

const AdjacencyView& Topology::adjacency(double t) {
    const bool stale = !adjacency_valid_ ||
                       t - adjacency_cache_.built_time_s > kAdjacencyRefreshS ||
                       t < adjacency_cache_.built_time_s;
    if (stale) {
        adjacency_cache_.built_time_s = t;
        adjacency_cache_.generation = generation_;
        adjacency_cache_.neighbors.assign(static_cast<std::size_t>(size()), {});
        for (const auto& [a, b] : edges(t)) {
            adjacency_cache_.neighbors[static_cast<std::size_t>(a)].push_back(b);
            adjacency_cache_.neighbors[static_cast<std::size_t>(b)].push_back(a);
        }
        adjacency_valid_ = true;
    }
    return adjacency_cache_;
}

} // namespace sodsim
