#include "sodsim/scenario.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sodsim/errors.hpp"

namespace sodsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& constraint) {
    throw ScenarioError("scenario: " + field + ": " + constraint);
}

void check(bool ok, const std::string& field, const std::string& constraint) {
    if (!ok) fail(field, constraint);
}

// Strict reader: every consumed key is recorded, leftovers are errors.
class ObjectReader {
public:
    ObjectReader(const json& obj, std::string prefix) : obj_(obj), prefix_(std::move(prefix)) {
        if (!obj.is_object()) fail(prefix_.empty() ? "<root>" : prefix_, "must be an object");
    }

    template <typename T>
    void get(const char* key, T& out) {
        auto it = obj_.find(key);
        if (it == obj_.end()) return;
        consumed_.push_back(key);
        try {
            out = it->get<T>();
        } catch (const json::exception&) {
            fail(path(key), "has the wrong type");
        }
    }

    const json* child(const char* key) {
        auto it = obj_.find(key);
        if (it == obj_.end()) return nullptr;
        consumed_.push_back(key);
        return &*it;
    }

    void finish() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            bool known = false;
            for (const auto& k : consumed_)
                if (k == it.key()) known = true;
            if (!known) fail(path(it.key().c_str()), "unknown key");
        }
    }

    std::string path(const char* key) const {
        return prefix_.empty() ? key : prefix_ + "." + key;
    }

private:
    const json& obj_;
    std::string prefix_;
    std::vector<std::string> consumed_;
};

} // namespace

void Scenario::validate() const {
    check(node_count >= 2, "node_count", "must be >= 2");
    check(area_m > 0.0, "area_m", "must be > 0");
    check(comm_range_m > 0.0, "comm_range_m", "must be > 0");
    check(rate_mbps > 0.0, "rate_mbps", "must be > 0");
    check(loss_exponent > 2.0 && loss_exponent <= 4.0, "loss_exponent", "must be in (2, 4]");
    check(fading_factor >= 1.0, "fading_factor", "must be >= 1 (1 = no fading)");
    check(zone_radius_hops >= 1, "zone_radius_hops", "must be >= 1");
    check(horizon_s >= 0.0, "horizon_s", "must be >= 0");
    check(metrics_interval_s > 0.0, "metrics_interval_s", "must be > 0");

    check(traffic.flows >= 0, "traffic.flows", "must be >= 0");
    check(traffic.pareto_shape > 1.0, "traffic.pareto_shape", "must be > 1");
    check(traffic.pareto_scale_s > 0.0, "traffic.pareto_scale_s", "must be > 0");
    check(traffic.packet_size_bits > 0.0, "traffic.packet_size_bits", "must be > 0");
    check(traffic.prioritized_fraction >= 0.0 && traffic.prioritized_fraction <= 1.0,
          "traffic.prioritized_fraction", "must be in [0, 1]");
    check(traffic.chunks_per_stream >= 1, "traffic.chunks_per_stream", "must be >= 1");
    check(traffic.tau0_s > 0.0, "traffic.tau0_s", "must be > 0");
    check(traffic.stream_delay_bound_s > 0.0, "traffic.stream_delay_bound_s", "must be > 0");
    check(traffic.packet_deadline_s > 0.0, "traffic.packet_deadline_s", "must be > 0");

    check(cache.capacity_bytes > 0, "cache.capacity_bytes", "must be > 0");
    check(cache.sigma_low > 0.0 && cache.sigma_low <= 1.0, "cache.sigma_low",
          "must be in (0, 1]");
    check(cache.sigma_high > 0.0 && cache.sigma_high <= 1.0, "cache.sigma_high",
          "must be in (0, 1]");
    check(cache.sigma_low < cache.sigma_high, "cache.sigma_low",
          "must be below cache.sigma_high");
    check(cache.max_hold_fraction > 0.0 && cache.max_hold_fraction <= 1.0,
          "cache.max_hold_fraction", "must be in (0, 1]");

    check(energy.initial_j > 0.0, "energy.initial_j", "must be > 0");
    check(energy.rx_ratio > 0.0, "energy.rx_ratio", "must be > 0");
    check(energy.sleep_ratio > 0.0, "energy.sleep_ratio", "must be > 0");
    check(energy.sleep_ratio < energy.idle_ratio && energy.idle_ratio < 1.0,
          "energy.idle_ratio", "ordering sleep_ratio < idle_ratio < 1 must hold");
    check(energy.cache_hold_factor >= 0.0, "energy.cache_hold_factor", "must be >= 0");
    check(energy.idle_timeout_s > 0.0, "energy.idle_timeout_s", "must be > 0");
    check(energy.sleep_timeout_s > 0.0, "energy.sleep_timeout_s", "must be > 0");
    check(energy.wake_s >= 0.0, "energy.wake_s", "must be >= 0");
    check(energy.eff_window_s > 0.0, "energy.eff_window_s", "must be > 0");

    check(mobility.speed_min_mps >= 0.0, "mobility.speed_min_mps", "must be >= 0");
    check(mobility.speed_max_mps >= mobility.speed_min_mps, "mobility.speed_max_mps",
          "must be >= speed_min_mps");
    check(mobility.epoch_mean_s > 0.0, "mobility.epoch_mean_s", "must be > 0");

    check(power.k_power > 0.0, "power.k_power", "must be > 0");
}

Scenario Scenario::from_json_string(std::string_view text) {
    json root;
    try {
        root = text.empty() ? json::object() : json::parse(text);
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("scenario: invalid JSON: ") + e.what());
    }

    Scenario sc;
    ObjectReader r(root, "");
    r.get("node_count", sc.node_count);
    r.get("area_m", sc.area_m);
    r.get("comm_range_m", sc.comm_range_m);
    r.get("rate_mbps", sc.rate_mbps);
    r.get("loss_exponent", sc.loss_exponent);
    r.get("fading_factor", sc.fading_factor);
    r.get("zone_radius_hops", sc.zone_radius_hops);
    r.get("horizon_s", sc.horizon_s);
    r.get("metrics_interval_s", sc.metrics_interval_s);
    r.get("seed", sc.seed);

    if (const json* t = r.child("traffic")) {
        ObjectReader tr(*t, "traffic");
        tr.get("flows", sc.traffic.flows);
        tr.get("pareto_shape", sc.traffic.pareto_shape);
        tr.get("pareto_scale_s", sc.traffic.pareto_scale_s);
        tr.get("packet_size_bits", sc.traffic.packet_size_bits);
        tr.get("prioritized_fraction", sc.traffic.prioritized_fraction);
        tr.get("chunks_per_stream", sc.traffic.chunks_per_stream);
        tr.get("tau0_s", sc.traffic.tau0_s);
        tr.get("stream_delay_bound_s", sc.traffic.stream_delay_bound_s);
        tr.get("packet_deadline_s", sc.traffic.packet_deadline_s);
        tr.finish();
    }
    if (const json* c = r.child("cache")) {
        ObjectReader cr(*c, "cache");
        cr.get("capacity_bytes", sc.cache.capacity_bytes);
        cr.get("sigma_low", sc.cache.sigma_low);
        cr.get("sigma_high", sc.cache.sigma_high);
        cr.get("max_hold_fraction", sc.cache.max_hold_fraction);
        cr.finish();
    }
    if (const json* e = r.child("energy")) {
        ObjectReader er(*e, "energy");
        er.get("initial_j", sc.energy.initial_j);
        er.get("rx_ratio", sc.energy.rx_ratio);
        er.get("idle_ratio", sc.energy.idle_ratio);
        er.get("sleep_ratio", sc.energy.sleep_ratio);
        er.get("cache_hold_factor", sc.energy.cache_hold_factor);
        er.get("idle_timeout_s", sc.energy.idle_timeout_s);
        er.get("sleep_timeout_s", sc.energy.sleep_timeout_s);
        er.get("wake_s", sc.energy.wake_s);
        er.get("eff_window_s", sc.energy.eff_window_s);
        er.finish();
    }
    if (const json* m = r.child("mobility")) {
        ObjectReader mr(*m, "mobility");
        mr.get("speed_min_mps", sc.mobility.speed_min_mps);
        mr.get("speed_max_mps", sc.mobility.speed_max_mps);
        mr.get("epoch_mean_s", sc.mobility.epoch_mean_s);
        mr.finish();
    }
    if (const json* p = r.child("power")) {
        ObjectReader pr(*p, "power");
        pr.get("k_power", sc.power.k_power);
        std::string sign = sc.power.capacity_exponent == CapacityExponent::Decay ? "decay"
                                                                                 : "growth";
        pr.get("capacity_exponent", sign);
        if (sign == "decay") {
            sc.power.capacity_exponent = CapacityExponent::Decay;
        } else if (sign == "growth") {
            sc.power.capacity_exponent = CapacityExponent::Growth;
        } else {
            fail("power.capacity_exponent", "must be \"decay\" or \"growth\"");
        }
        pr.finish();
    }
    r.finish();

    sc.validate();
    return sc;
}

Scenario Scenario::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("scenario: cannot read config file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_json_string(buffer.str());
}

std::string Scenario::to_json_string() const {
    json root;
    root["node_count"] = node_count;
    root["area_m"] = area_m;
    root["comm_range_m"] = comm_range_m;
    root["rate_mbps"] = rate_mbps;
    root["loss_exponent"] = loss_exponent;
    root["fading_factor"] = fading_factor;
    root["zone_radius_hops"] = zone_radius_hops;
    root["horizon_s"] = horizon_s;
    root["metrics_interval_s"] = metrics_interval_s;
    root["seed"] = seed;
    root["traffic"] = {{"flows", traffic.flows},
                       {"pareto_shape", traffic.pareto_shape},
                       {"pareto_scale_s", traffic.pareto_scale_s},
                       {"packet_size_bits", traffic.packet_size_bits},
                       {"prioritized_fraction", traffic.prioritized_fraction},
                       {"chunks_per_stream", traffic.chunks_per_stream},
                       {"tau0_s", traffic.tau0_s},
                       {"stream_delay_bound_s", traffic.stream_delay_bound_s},
                       {"packet_deadline_s", traffic.packet_deadline_s}};
    root["cache"] = {{"capacity_bytes", cache.capacity_bytes},
                     {"sigma_low", cache.sigma_low},
                     {"sigma_high", cache.sigma_high},
                     {"max_hold_fraction", cache.max_hold_fraction}};
    root["energy"] = {{"initial_j", energy.initial_j},
                      {"rx_ratio", energy.rx_ratio},
                      {"idle_ratio", energy.idle_ratio},
                      {"sleep_ratio", energy.sleep_ratio},
                      {"cache_hold_factor", energy.cache_hold_factor},
                      {"idle_timeout_s", energy.idle_timeout_s},
                      {"sleep_timeout_s", energy.sleep_timeout_s},
                      {"wake_s", energy.wake_s},
                      {"eff_window_s", energy.eff_window_s}};
    root["mobility"] = {{"speed_min_mps", mobility.speed_min_mps},
                        {"speed_max_mps", mobility.speed_max_mps},
                        {"epoch_mean_s", mobility.epoch_mean_s}};
    root["power"] = {{"k_power", power.k_power},
                     {"capacity_exponent",
                      power.capacity_exponent == CapacityExponent::Decay ? "decay" : "growth"}};
    return root.dump(2) + "\n";
}

} // namespace sodsim
