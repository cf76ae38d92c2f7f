#include "sodsim/network_sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "sodsim/errors.hpp"

namespace sodsim {

namespace {

double airtime_s(double bits, double rate_mbps) { return bits / (rate_mbps * 1e6); }

} // namespace

void EffWindow::record(double t_s, bool received, double bits) {
    records_.push_back(TxRecord{t_s, received, bits});
}

double EffWindow::eff(double now_s, double window_s, double bandwidth_bps,
                      std::uint64_t* clamp_counter) {
    while (!records_.empty() && records_.front().t_s < now_s - window_s)
        records_.pop_front();
    if (records_.empty()) return 0.0;
    ThroughputStats stats;
    stats.transmitted_blocks = records_.size();
    for (const TxRecord& r : records_) {
        if (r.received) {
            ++stats.received_blocks;
            stats.transfer_size_bits += r.bits;
        }
    }
    stats.transfer_time_s = window_s;
    stats.bandwidth_bps = bandwidth_bps;
    bool clamped = false;
    const double result = effective_throughput(stats, &clamped);
    if (clamped && clamp_counter) ++(*clamp_counter);
    return result;
}

NetworkSim::NetworkSim(const Scenario& scenario)
    : scenario_(scenario),
      topo_(Topology::build(scenario.node_count, scenario.area_m, scenario.comm_range_m,
                            scenario.seed)),
      calib_(scenario.calibration()) {
    scenario_.validate();
    topo_.set_mobility(MobilityParams{scenario.mobility.speed_min_mps,
                                      scenario.mobility.speed_max_mps,
                                      scenario.mobility.epoch_mean_s});
    coeff_ = EnergyCoefficients{scenario.energy.rx_ratio, scenario.energy.idle_ratio,
                                scenario.energy.sleep_ratio, scenario.energy.cache_hold_factor};

    const int n = scenario.node_count;
    nodes_.reserve(static_cast<std::size_t>(n));
    mobility_rng_.reserve(static_cast<std::size_t>(n));
    for (int id = 0; id < n; ++id) {
        topo_.set_radio(id, NodeRadio{scenario.rate_mbps, scenario.loss_exponent,
                                      scenario.fading_factor});
        NodeRuntime node;
        node.id = id;
        node.energy = NodeEnergy{scenario.energy.initial_j, scenario.energy.initial_j,
                                 RadioState::Active, 0.0, false};
        node.cache = CacheStore(scenario.cache.capacity_bytes);
        mobility_rng_.push_back(Rng::stream(scenario.seed, "mobility",
                                            static_cast<std::uint64_t>(id)));
        nodes_.push_back(std::move(node));
    }
    // Reference active power: transmitting at full comm range with the node's
    // own radio parameters. Idle/sleep drains scale off this.
    for (NodeRuntime& node : nodes_) {
        const NodeRadio radio = topo_.radio(node.id);
        node.ref_active_power_uw = transmission_power_uw(
            LinkSpec{scenario.comm_range_m, radio.rate_mbps, radio.loss_exponent,
                     radio.fading_factor},
            calib_);
    }
}

std::vector<std::uint8_t> NetworkSim::alive_mask() const {
    std::vector<std::uint8_t> mask(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        mask[i] = nodes_[i].energy.dead ? 0 : 1;
    return mask;
}

int NetworkSim::spawn_flow(int src, std::optional<int> dst, Priority priority) {
    return spawn_flow(src, dst, priority,
                      TrafficProfile{scenario_.traffic.packet_size_bits,
                                     scenario_.traffic.pareto_shape,
                                     scenario_.traffic.pareto_scale_s});
}

int NetworkSim::spawn_flow(int src, std::optional<int> dst, Priority priority,
                           const TrafficProfile& profile) {
    if (src < 0 || src >= topo_.size()) throw std::domain_error("spawn_flow: bad source id");
    if (nodes_[static_cast<std::size_t>(src)].energy.dead)
        throw std::domain_error("spawn_flow: source node is dead");

    const int flow_id = static_cast<int>(flows_.size());
    Rng rng = Rng::stream(scenario_.seed, "flow", static_cast<std::uint64_t>(flow_id));
    int destination;
    if (dst) {
        destination = *dst;
        if (destination == src) throw std::domain_error("spawn_flow: src == dst");
        if (destination < 0 || destination >= topo_.size())
            throw std::domain_error("spawn_flow: bad destination id");
        if (nodes_[static_cast<std::size_t>(destination)].energy.dead)
            throw std::domain_error("spawn_flow: destination node is dead");
    } else {
        const auto mask = alive_mask();
        destination = pick_uniform_destination(rng, mask, src);
    }

    FlowRuntime flow{flow_id, src, destination, priority, profile, rng};
    flows_.push_back(std::move(flow));

    const double first = sim_.now() + pareto_interarrival_s(flows_.back().rng, profile);
    if (first <= scenario_.horizon_s) {
        const std::size_t index = flows_.size() - 1;
        sim_.schedule(first, EventKind::PacketArrival, [this, index] { handle_arrival(index); });
    }
    return flow_id;
}

void NetworkSim::spawn_default_flows() {
    const int flows = scenario_.traffic.flows;
    if (flows == 0) return;
    // Sources: shuffled node ids, no repeats until every node has one.
    std::vector<int> ids(static_cast<std::size_t>(topo_.size()));
    for (int i = 0; i < topo_.size(); ++i) ids[static_cast<std::size_t>(i)] = i;
    Rng rng = Rng::stream(scenario_.seed, "sources");
    for (std::size_t i = ids.size() - 1; i > 0; --i)
        std::swap(ids[i], ids[rng.uniform_below(i + 1)]);

    const int prioritized =
        static_cast<int>(std::lround(scenario_.traffic.prioritized_fraction * flows));
    for (int i = 0; i < flows; ++i) {
        const int src = ids[static_cast<std::size_t>(i) % ids.size()];
        spawn_flow(src, std::nullopt,
                   i < prioritized ? Priority::Prioritized : Priority::DontCare);
    }
}

NetworkSim::StreamRuntime& NetworkSim::stream_of(const PacketMeta& meta) {
    return streams_.at(meta.stream_id);
}

void NetworkSim::handle_arrival(std::size_t flow_index) {
    FlowRuntime& flow = flows_[flow_index];
    if (flow.stopped) return;
    NodeRuntime& src = nodes_[static_cast<std::size_t>(flow.src)];
    if (src.energy.dead) {
        flow.stopped = true;
        return;
    }
    const double now = sim_.now();

    if (flow.chunks_emitted == 0) {
        // Open the next stream of this flow.
        StreamSpec spec;
        spec.stream_id = next_stream_id_++;
        spec.chunk_count = scenario_.traffic.chunks_per_stream;
        spec.total_single_peer_time_s = scenario_.traffic.tau0_s;
        spec.delay_bound_s = scenario_.traffic.stream_delay_bound_s;
        spec.priority = flow.priority;
        flow.current_stream = spec.stream_id;

        StreamRecord record;
        record.stream_id = spec.stream_id;
        record.priority = spec.priority;
        record.chunk_count = spec.chunk_count;
        record.stats.bandwidth_bps = topo_.radio(flow.src).rate_mbps * 1e6;
        metrics_.streams.push_back(record);
        streams_.emplace(spec.stream_id,
                         StreamRuntime{spec, metrics_.streams.size() - 1, {}});
    }

    PacketMeta meta;
    meta.packet_id = next_packet_id_++;
    meta.stream_id = flow.current_stream;
    meta.chunk_index = flow.chunks_emitted;
    meta.created_s = now;
    meta.deadline_s = now + scenario_.traffic.packet_deadline_s;
    meta.size_bits = flow.profile.packet_size_bits;
    meta.priority = flow.priority;
    if (++flow.chunks_emitted >= scenario_.traffic.chunks_per_stream)
        flow.chunks_emitted = 0;

    ++metrics_.totals.generated;
    auto [it, inserted] = live_.emplace(meta.packet_id, PacketRuntime{meta, {}, 0});
    PacketRuntime& rt = it->second;

    const auto route = find_route(flow.src, flow.dst);
    if (!route) {
        drop_packet(meta.packet_id, DropReason::NoRoute);
    } else {
        rt.route = route->hops;
        rt.meta.hops_remaining = static_cast<int>(rt.route.size()) - 1;
        StreamRuntime& stream = stream_of(rt.meta);
        if (stream.spec.intermediate_count == 0 && rt.route.size() > 2)
            stream.spec.intermediate_count = static_cast<int>(rt.route.size()) - 2;
        enqueue_packet(flow.src, meta.packet_id);
        try_transmit(flow.src);
    }

    const double next = now + pareto_interarrival_s(flow.rng, flow.profile);
    if (next <= scenario_.horizon_s)
        sim_.schedule(next, EventKind::PacketArrival,
                      [this, flow_index] { handle_arrival(flow_index); });
}

std::optional<Route> NetworkSim::find_route(int src, int dst) {
    if (nodes_[static_cast<std::size_t>(dst)].energy.dead) return std::nullopt;
    return interzone_route(topo_, src, dst, scenario_.zone_radius_hops, sim_.now(), calib_);
}

void NetworkSim::enqueue_packet(int node_id, std::uint64_t packet_id) {
    NodeRuntime& node = nodes_[static_cast<std::size_t>(node_id)];
    PacketRuntime& rt = live_.at(packet_id);
    rt.state = PacketState::Queued;
    if (rt.meta.priority == Priority::Prioritized) {
        node.queue_prioritized.push_back(packet_id);
    } else {
        node.queue_dontcare.push_back(packet_id);
    }
    note_traffic(node_id);
}

bool NetworkSim::ensure_next_hop(PacketRuntime& rt, int holder) {
    const double now = sim_.now();
    auto reachable = [&](int next) {
        return !nodes_[static_cast<std::size_t>(next)].energy.dead &&
               topo_.in_range(holder, next, now);
    };
    int next = rt.route[rt.hop_pos + 1];
    if (reachable(next)) return true;

    // One shot at route rediscovery from the current holder.
    const int dst = rt.route.back();
    const auto fresh = find_route(holder, dst);
    if (!fresh || fresh->hops.size() < 2) return false;
    rt.route = fresh->hops;
    rt.hop_pos = 0;
    rt.meta.hops_remaining = static_cast<int>(rt.route.size()) - 1;
    return reachable(rt.route[1]);
}

void NetworkSim::try_transmit(int node_id) {
    NodeRuntime& node = nodes_[static_cast<std::size_t>(node_id)];
    if (node.energy.dead || node.transmitting) return;

    // A node with no prioritized backlog releases its cached packets.
    if (node.queue_prioritized.empty() && node.cache.size() > 0) flush_cache(node_id);

    while (true) {
        std::deque<std::uint64_t>* queue = nullptr;
        if (!node.queue_prioritized.empty()) {
            queue = &node.queue_prioritized;
        } else if (!node.queue_dontcare.empty()) {
            queue = &node.queue_dontcare;
        } else {
            return;
        }
        const std::uint64_t packet_id = queue->front();
        PacketRuntime& rt = live_.at(packet_id);
        const double now = sim_.now();

        if (now > rt.meta.deadline_s) {
            queue->pop_front();
            drop_packet(packet_id, DropReason::DeadlineExpired);
            continue;
        }
        if (!ensure_next_hop(rt, node_id)) {
            queue->pop_front();
            drop_packet(packet_id, DropReason::NoRoute);
            continue;
        }

        queue->pop_front();
        const int next = rt.route[rt.hop_pos + 1];
        NodeRuntime& receiver = nodes_[static_cast<std::size_t>(next)];
        const LinkSpec link = directed_link(topo_, node_id, next, now);

        const CapacityState capacity{node.cache.capacity_bytes(),
                                     node.cache.occupancy_bytes()};
        const double eff =
            node.eff_window.eff(now, scenario_.energy.eff_window_s,
                                topo_.radio(node_id).rate_mbps * 1e6,
                                &metrics_.totals.eff_clamp_events);

        accrue(node_id);
        debit(node_id, TransmitActivity{link, rt.meta.size_bits, capacity, eff});

        const double base_power = transmission_power_uw(link, calib_);
        const double scaled_power =
            capacity_scaled_power_uw(base_power, capacity, eff, calib_);
        metrics_.power_samples.push_back(PowerSample{
            now, scaled_power, link.distance_m, node_id, zone_cardinality(node_id)});

        if (rt.hop_pos == 0) {
            StreamRuntime& stream = stream_of(rt.meta);
            StreamRecord& record = metrics_.streams[stream.record_index];
            if (record.first_tx_s < 0.0) record.first_tx_s = now;
            ++record.stats.transmitted_blocks;
        }

        double wake = 0.0;
        if (!receiver.energy.dead && receiver.energy.radio_state == RadioState::Sleep) {
            // Wake-up latency, charged at the idle rate while it lasts.
            wake = scenario_.energy.wake_s;
            accrue(next);
            set_radio_state(next, RadioState::Idle);
        }

        node.transmitting = true;
        rt.state = PacketState::OnAir;
        note_traffic(node_id);

        const double complete =
            now + airtime_s(rt.meta.size_bits, link.rate_mbps) + wake;
        sim_.schedule(complete, EventKind::TransmissionComplete,
                      [this, packet_id, node_id, next, link] {
                          handle_tx_complete(packet_id, node_id, next, link);
                      });
        return;
    }
}

void NetworkSim::handle_tx_complete(std::uint64_t packet_id, int sender, int receiver,
                                    LinkSpec link) {
    NodeRuntime& snd = nodes_[static_cast<std::size_t>(sender)];
    NodeRuntime& rcv = nodes_[static_cast<std::size_t>(receiver)];
    snd.transmitting = false;

    PacketRuntime& rt = live_.at(packet_id);
    const bool lost = rcv.energy.dead;
    snd.eff_window.record(sim_.now(), !lost, rt.meta.size_bits);

    if (lost) {
        drop_packet(packet_id, DropReason::ReceiverDead);
    } else {
        accrue(receiver);
        debit(receiver, ReceiveActivity{link, rt.meta.size_bits});
        note_traffic(receiver);
        rt.hop_pos += 1;
        rt.meta.hops_remaining = static_cast<int>(rt.route.size()) - 1 -
                                 static_cast<int>(rt.hop_pos);
        if (rcv.energy.dead) {
            // The receive cost drained the node.
            drop_packet(packet_id, DropReason::ReceiverDead);
        } else if (rt.route[rt.hop_pos] == rt.route.back()) {
            deliver_packet(packet_id);
        } else {
            relay_decision(packet_id, receiver);
        }
    }
    try_transmit(sender);
}

void NetworkSim::relay_decision(std::uint64_t packet_id, int node_id) {
    PacketRuntime& rt = live_.at(packet_id);
    NodeRuntime& node = nodes_[static_cast<std::size_t>(node_id)];
    const double now = sim_.now();

    const bool reachable = ensure_next_hop(rt, node_id);

    // Remaining directed links, tolerant of routes that have gone stale.
    std::vector<LinkSpec> remaining;
    remaining.reserve(rt.route.size() - 1 - rt.hop_pos);
    for (std::size_t i = rt.hop_pos; i + 1 < rt.route.size(); ++i)
        remaining.push_back(
            directed_link_unchecked(topo_, rt.route[i], rt.route[i + 1], now));

    DecisionContext ctx;
    ctx.now = now;
    ctx.node_active =
        !node.energy.dead && node.energy.radio_state != RadioState::Sleep;
    ctx.next_hop_reachable = reachable;
    ctx.prioritized_queued = !node.queue_prioritized.empty();
    ctx.remaining_links = remaining;
    ctx.band = SigmaBand{scenario_.cache.sigma_low, scenario_.cache.sigma_high};

    StreamRuntime& stream = stream_of(rt.meta);
    ctx.caching.tau0_s = stream.spec.total_single_peer_time_s;
    ctx.caching.chunk_count = stream.spec.chunk_count;
    ctx.caching.peer_count =
        static_cast<int>(rt.route.size()) - 1 - static_cast<int>(rt.hop_pos);

    if (rt.meta.priority == Priority::DontCare) {
        // Residual-energy choice of the cache site among the remaining
        // intermediates (this node included).
        std::vector<int> ids;
        std::vector<double> residuals;
        std::vector<std::uint64_t> free_bytes;
        for (std::size_t i = rt.hop_pos; i + 1 < rt.route.size(); ++i) {
            const NodeRuntime& cand = nodes_[static_cast<std::size_t>(rt.route[i])];
            ids.push_back(cand.id);
            residuals.push_back(cand.energy.residual_j);
            free_bytes.push_back(cand.cache.free_bytes());
        }
        const auto bytes = static_cast<std::uint64_t>(rt.meta.size_bits / 8.0);
        ctx.nre_cache_candidate = nre_cache_site(ids, residuals, free_bytes, bytes) == node_id;
    }

    accrue(node_id); // cache occupancy may change below
    Decision decision = forward_decision(rt.meta, ctx, &node.cache);

    if (decision.sigma_valid) metrics_.sigma_samples.push_back(decision.sigma);
    if (decision_log_)
        decision_log_(DecisionLogRecord{now, node_id, packet_id, decision.action,
                                        decision.sigma, decision.sigma_valid,
                                        node.energy.residual_j});

    switch (decision.action) {
    case ForwardAction::Forward:
        enqueue_packet(node_id, packet_id);
        try_transmit(node_id);
        break;
    case ForwardAction::Cache: {
        rt.state = PacketState::Cached;
        ++metrics_.totals.cache_admissions;
        metrics_.cache_events.push_back(
            CacheEventSample{now, decision.sigma, decision.chunk_delay_s, node_id});
        // Evicted packets go back on the wire instead of vanishing.
        for (const CacheEntry& victim : decision.evicted) {
            ++metrics_.totals.cache_evictions;
            enqueue_packet(node_id, victim.packet_id);
        }
        const double hold =
            scenario_.cache.max_hold_fraction * stream.spec.delay_bound_s;
        sim_.schedule(now + hold, EventKind::CacheFlush, [this, node_id, packet_id] {
            handle_cache_flush_timer(node_id, packet_id);
        });
        if (!decision.evicted.empty()) try_transmit(node_id);
        break;
    }
    case ForwardAction::Drop:
        drop_packet(packet_id, now > rt.meta.deadline_s ? DropReason::DeadlineExpired
                                                        : DropReason::NoRoute);
        break;
    }
}

void NetworkSim::flush_cache(int node_id) {
    NodeRuntime& node = nodes_[static_cast<std::size_t>(node_id)];
    const double now = sim_.now();
    accrue(node_id);
    for (const CacheEntry& expired : node.cache.purge_expired(now))
        drop_packet(expired.packet_id, DropReason::CacheExpired);
    for (const std::uint64_t id : node.cache.entry_ids()) {
        node.cache.take(id);
        ++metrics_.totals.cache_flushes;
        enqueue_packet(node_id, id);
    }
}

void NetworkSim::handle_cache_flush_timer(int node_id, std::uint64_t packet_id) {
    NodeRuntime& node = nodes_[static_cast<std::size_t>(node_id)];
    const double now = sim_.now();
    accrue(node_id);
    for (const CacheEntry& expired : node.cache.purge_expired(now))
        drop_packet(expired.packet_id, DropReason::CacheExpired);

    if (!node.cache.contains(packet_id)) return; // already flushed or purged
    node.cache.take(packet_id);
    ++metrics_.totals.cache_flushes;
    PacketRuntime& rt = live_.at(packet_id);
    if (now > rt.meta.deadline_s) {
        drop_packet(packet_id, DropReason::CacheExpired);
        return;
    }
    enqueue_packet(node_id, packet_id);
    try_transmit(node_id);
}

void NetworkSim::deliver_packet(std::uint64_t packet_id) {
    PacketRuntime& rt = live_.at(packet_id);
    const double now = sim_.now();
    const double latency = now - rt.meta.created_s;

    StreamRuntime& stream = stream_of(rt.meta);
    StreamRecord& record = metrics_.streams[stream.record_index];
    ++record.delivered;
    ++record.stats.received_blocks;
    record.stats.transfer_size_bits += rt.meta.size_bits;
    record.last_delivery_s = now;
    record.max_latency_s = std::max(record.max_latency_s, latency);
    if (record.first_tx_s >= 0.0)
        record.stats.transfer_time_s = std::max(record.last_delivery_s - record.first_tx_s,
                                                airtime_s(rt.meta.size_bits,
                                                          scenario_.rate_mbps));
    stream.latencies_s.push_back(latency);

    if (rt.meta.priority == Priority::Prioritized) {
        metrics_.delay_prioritized.add(latency);
    } else {
        metrics_.delay_dontcare.add(latency);
    }
    ++metrics_.totals.delivered;
    live_.erase(packet_id);
    finalize_stream_if_complete(stream);
}

void NetworkSim::drop_packet(std::uint64_t packet_id, DropReason reason) {
    PacketRuntime& rt = live_.at(packet_id);
    StreamRuntime& stream = stream_of(rt.meta);
    StreamRecord& record = metrics_.streams[stream.record_index];
    ++record.dropped;
    ++metrics_.totals.dropped;
    switch (reason) {
    case DropReason::DeadlineExpired: ++metrics_.totals.dropped_deadline; break;
    case DropReason::NoRoute: ++metrics_.totals.dropped_no_route; break;
    case DropReason::ReceiverDead: ++metrics_.totals.dropped_receiver_dead; break;
    case DropReason::CacheExpired: ++metrics_.totals.dropped_cache_expired; break;
    }
    live_.erase(packet_id);
    finalize_stream_if_complete(stream);
}

void NetworkSim::finalize_stream_if_complete(StreamRuntime& stream) {
    StreamRecord& record = metrics_.streams[stream.record_index];
    if (record.completed) return;
    if (record.delivered + record.dropped < record.chunk_count) return;
    record.completed = true;
    record.in_bound = stream_complete(stream.spec, stream.latencies_s, record.dropped) ==
                      StreamOutcome::InBound;
}

void NetworkSim::accrue(int node_id) {
    NodeRuntime& node = nodes_[static_cast<std::size_t>(node_id)];
    const double now = sim_.now();
    const double duration = now - node.last_accrual_s;
    node.last_accrual_s = now;
    if (duration <= 0.0 || node.energy.dead) return;

    if (node.energy.radio_state == RadioState::Sleep) {
        debit(node_id, SleepTickActivity{duration});
    } else {
        debit(node_id, IdleTickActivity{duration});
    }
    if (!node.energy.dead && node.cache.occupancy_bytes() > 0)
        debit(node_id, CacheHoldActivity{node.cache.occupancy_bytes(),
                                         node.cache.capacity_bytes(), duration});
}

void NetworkSim::debit(int node_id, const Activity& activity) {
    NodeRuntime& node = nodes_[static_cast<std::size_t>(node_id)];
    const DebitResult result =
        debit_energy(node.energy, activity, coeff_, calib_, node.ref_active_power_uw);
    if (!result.applied) {
        ++metrics_.totals.energy_anomalies;
        return;
    }
    node.total_debited_j += result.cost_j;
    if (result.died) set_radio_state(node_id, RadioState::Sleep);
}

void NetworkSim::set_radio_state(int node_id, RadioState state) {
    NodeRuntime& node = nodes_[static_cast<std::size_t>(node_id)];
    if (node.energy.dead) state = RadioState::Sleep;
    if (node.energy.radio_state == state) return;
    accrue(node_id);
    node.energy.radio_state = state;
    node.energy.state_entered_s = sim_.now();
    ++node.state_timer_generation;
    if (state == RadioState::Active) {
        const std::uint64_t gen = node.state_timer_generation;
        sim_.schedule(sim_.now() + scenario_.energy.idle_timeout_s, EventKind::StateTimer,
                      [this, node_id, gen] { handle_state_timer(node_id, gen); });
    }
    if (state == RadioState::Idle && !node.energy.dead) {
        const std::uint64_t gen = node.state_timer_generation;
        sim_.schedule(sim_.now() + scenario_.energy.sleep_timeout_s, EventKind::StateTimer,
                      [this, node_id, gen] { handle_state_timer(node_id, gen); });
    }
}

void NetworkSim::note_traffic(int node_id) {
    NodeRuntime& node = nodes_[static_cast<std::size_t>(node_id)];
    node.last_traffic_s = sim_.now();
    if (node.energy.dead) return;
    if (node.energy.radio_state != RadioState::Active)
        set_radio_state(node_id, RadioState::Active);
}

bool NetworkSim::has_pending_work(const NodeRuntime& node) const {
    return node.transmitting || !node.queue_prioritized.empty() ||
           !node.queue_dontcare.empty() || node.cache.size() > 0;
}

void NetworkSim::handle_state_timer(int node_id, std::uint64_t generation) {
    NodeRuntime& node = nodes_[static_cast<std::size_t>(node_id)];
    if (node.energy.dead || generation != node.state_timer_generation) return;
    const double now = sim_.now();

    if (node.energy.radio_state == RadioState::Active) {
        const double idle_at = node.last_traffic_s + scenario_.energy.idle_timeout_s;
        if (!has_pending_work(node) && now >= idle_at) {
            set_radio_state(node_id, RadioState::Idle);
        } else {
            const std::uint64_t gen = node.state_timer_generation;
            sim_.schedule(std::max(idle_at, now + scenario_.energy.idle_timeout_s),
                          EventKind::StateTimer,
                          [this, node_id, gen] { handle_state_timer(node_id, gen); });
        }
    } else if (node.energy.radio_state == RadioState::Idle) {
        const double sleep_at = node.energy.state_entered_s + scenario_.energy.sleep_timeout_s;
        if (!has_pending_work(node) && now >= sleep_at) {
            set_radio_state(node_id, RadioState::Sleep);
        } else {
            const std::uint64_t gen = node.state_timer_generation;
            sim_.schedule(std::max(sleep_at, now + scenario_.energy.sleep_timeout_s),
                          EventKind::StateTimer,
                          [this, node_id, gen] { handle_state_timer(node_id, gen); });
        }
    }
}

void NetworkSim::handle_mobility_epoch(int node_id) {
    const double next_in = topo_.mobility_epoch(
        node_id, sim_.now(), mobility_rng_[static_cast<std::size_t>(node_id)]);
    const double next_at = sim_.now() + next_in;
    if (next_at <= scenario_.horizon_s)
        sim_.schedule(next_at, EventKind::MobilityStep,
                      [this, node_id] { handle_mobility_epoch(node_id); });
}

int NetworkSim::zone_cardinality(int node_id) {
    return static_cast<int>(
        compute_zone(topo_, node_id, scenario_.zone_radius_hops, sim_.now()).members.size());
}

void NetworkSim::take_snapshot(double t) {
    for (int id = 0; id < topo_.size(); ++id) accrue(id);
    metrics_.sample_times_s.push_back(t);
    std::vector<double> residuals(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) residuals[i] = nodes_[i].energy.residual_j;
    metrics_.node_residual_j.push_back(residuals);

    std::vector<double> zone_means(nodes_.size(), 0.0);
    for (int center = 0; center < topo_.size(); ++center) {
        const Zone zone = compute_zone(topo_, center, scenario_.zone_radius_hops, t);
        double sum = 0.0;
        for (int member : zone.members)
            sum += nodes_[static_cast<std::size_t>(member)].energy.residual_j;
        zone_means[static_cast<std::size_t>(center)] =
            sum / static_cast<double>(zone.members.size());
    }
    metrics_.zone_mean_residual_j.push_back(zone_means);
}

void NetworkSim::handle_metrics_sample(std::uint64_t index) {
    const double t = std::min(static_cast<double>(index) * scenario_.metrics_interval_s,
                              scenario_.horizon_s);
    ++metrics_.periodic_sample_count;
    take_snapshot(t);
}

RunResult NetworkSim::run() {
    if (ran_) throw std::logic_error("NetworkSim::run: already ran");
    ran_ = true;
    const double horizon = scenario_.horizon_s;

    RunResult result;
    for (int id = 0; id < topo_.size(); ++id) {
        const Vec2 p = topo_.position(id, 0.0);
        result.initial_topology.nodes.push_back({id, p.x, p.y});
    }
    for (const auto& [a, b] : topo_.edges(0.0))
        result.initial_topology.edges.push_back({a, b, topo_.distance(a, b, 0.0)});

    if (horizon > 0.0) {
        // Initial mobility epochs and radio-state timers.
        for (int id = 0; id < topo_.size(); ++id) {
            const double first =
                mobility_rng_[static_cast<std::size_t>(id)].exponential(
                    scenario_.mobility.epoch_mean_s);
            if (first <= horizon)
                sim_.schedule(first, EventKind::MobilityStep,
                              [this, id] { handle_mobility_epoch(id); });
            const std::uint64_t gen = nodes_[static_cast<std::size_t>(id)]
                                          .state_timer_generation;
            sim_.schedule(scenario_.energy.idle_timeout_s, EventKind::StateTimer,
                          [this, id, gen] { handle_state_timer(id, gen); });
        }

        const auto samples = static_cast<std::uint64_t>(
            std::floor(horizon / scenario_.metrics_interval_s + 1e-9));
        for (std::uint64_t i = 1; i <= samples; ++i) {
            const double t =
                std::min(static_cast<double>(i) * scenario_.metrics_interval_s, horizon);
            sim_.schedule(t, EventKind::MetricsSample,
                          [this, i] { handle_metrics_sample(i); });
        }

        take_snapshot(0.0); // t = 0 baseline
    }

    sim_.run_until(horizon);

    for (int id = 0; id < topo_.size(); ++id) accrue(id);
    if (horizon > 0.0 &&
        (metrics_.sample_times_s.empty() || metrics_.sample_times_s.back() < horizon))
        take_snapshot(horizon);

    for (const auto& [id, rt] : live_) {
        if (rt.state == PacketState::Cached) {
            ++metrics_.totals.cached_at_end;
        } else {
            ++metrics_.totals.in_flight_at_end;
        }
    }
    for (const NodeRuntime& node : nodes_)
        metrics_.totals.total_debited_j += node.total_debited_j;
    metrics_.totals.events_scheduled = sim_.scheduled_count();
    metrics_.totals.events_processed = sim_.processed_count();
    metrics_.totals.events_cancelled = sim_.cancelled_count();
    metrics_.totals.events_pending_at_end = sim_.pending_count();

    verify_invariants();

    result.metrics = metrics_;
    result.trace_hash = sim_.trace_hash();
    return result;
}

void NetworkSim::verify_invariants() {
    const RunTotals& t = metrics_.totals;
    if (t.generated != t.delivered + t.dropped + t.cached_at_end + t.in_flight_at_end)
        throw SimInvariantError("packet conservation violated: generated=" +
                                std::to_string(t.generated) + " delivered=" +
                                std::to_string(t.delivered) + " dropped=" +
                                std::to_string(t.dropped) + " cached=" +
                                std::to_string(t.cached_at_end) + " in_flight=" +
                                std::to_string(t.in_flight_at_end));

    for (const NodeRuntime& node : nodes_) {
        const double consumed = node.energy.initial_j - node.energy.residual_j;
        const double tolerance = 1e-9 * std::max(1.0, node.total_debited_j);
        if (std::abs(consumed - node.total_debited_j) > tolerance)
            throw SimInvariantError("energy ledger mismatch at node " +
                                    std::to_string(node.id));
        if (node.energy.residual_j < 0.0 ||
            node.energy.residual_j > node.energy.initial_j)
            throw SimInvariantError("residual energy out of range at node " +
                                    std::to_string(node.id));
        if (node.cache.occupancy_bytes() > node.cache.capacity_bytes())
            throw SimInvariantError("cache occupancy above capacity at node " +
                                    std::to_string(node.id));
    }

    for (std::size_t n = 0; n < nodes_.size(); ++n) {
        for (std::size_t s = 1; s < metrics_.node_residual_j.size(); ++s) {
            if (metrics_.node_residual_j[s][n] > metrics_.node_residual_j[s - 1][n] + 1e-12)
                throw SimInvariantError("residual energy increased at node " +
                                        std::to_string(n));
        }
    }

    if (sim_.scheduled_count() !=
        sim_.processed_count() + sim_.cancelled_count() + sim_.pending_count())
        throw SimInvariantError("event accounting mismatch");
}

RunResult run_scenario(const Scenario& scenario) {
    NetworkSim sim(scenario);
    sim.spawn_default_flows();
    return sim.run();
}

void emit_run_outputs(const RunResult& result, const Scenario& scenario,
                      const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_fig_csvs(result.metrics, out_dir);
    write_summary_json(result.metrics, scenario, out_dir);
    {
        std::ofstream out(out_dir / "topology_nodes.csv", std::ios::binary);
        out << "node_id,x_m,y_m\n";
        for (const auto& row : result.initial_topology.nodes)
            out << row.id << "," << format_double(row.x_m) << "," << format_double(row.y_m)
                << "\n";
    }
    {
        std::ofstream out(out_dir / "topology_edges.csv", std::ios::binary);
        out << "from,to,distance_m\n";
        for (const auto& row : result.initial_topology.edges)
            out << row.from << "," << row.to << "," << format_double(row.distance_m) << "\n";
    }
}

} // namespace sodsim
