#include "sodsim/sweep.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "sodsim/errors.hpp"
#include "sodsim/metrics.hpp"

namespace sodsim {

namespace {

struct FieldSetter {
    bool integral = false;
    std::function<void(Scenario&, double)> set;
};

const std::map<std::string, FieldSetter>& field_setters() {
    static const std::map<std::string, FieldSetter> setters = {
        {"node_count", {true, [](Scenario& s, double v) { s.node_count = static_cast<int>(v); }}},
        {"area_m", {false, [](Scenario& s, double v) { s.area_m = v; }}},
        {"comm_range_m", {false, [](Scenario& s, double v) { s.comm_range_m = v; }}},
        {"rate_mbps", {false, [](Scenario& s, double v) { s.rate_mbps = v; }}},
        {"loss_exponent", {false, [](Scenario& s, double v) { s.loss_exponent = v; }}},
        {"fading_factor", {false, [](Scenario& s, double v) { s.fading_factor = v; }}},
        {"zone_radius_hops",
         {true, [](Scenario& s, double v) { s.zone_radius_hops = static_cast<int>(v); }}},
        {"horizon_s", {false, [](Scenario& s, double v) { s.horizon_s = v; }}},
        {"metrics_interval_s", {false, [](Scenario& s, double v) { s.metrics_interval_s = v; }}},
        {"traffic.flows",
         {true, [](Scenario& s, double v) { s.traffic.flows = static_cast<int>(v); }}},
        {"traffic.pareto_shape", {false, [](Scenario& s, double v) { s.traffic.pareto_shape = v; }}},
        {"traffic.pareto_scale_s",
         {false, [](Scenario& s, double v) { s.traffic.pareto_scale_s = v; }}},
        {"traffic.packet_size_bits",
         {false, [](Scenario& s, double v) { s.traffic.packet_size_bits = v; }}},
        {"traffic.prioritized_fraction",
         {false, [](Scenario& s, double v) { s.traffic.prioritized_fraction = v; }}},
        {"traffic.chunks_per_stream",
         {true, [](Scenario& s, double v) { s.traffic.chunks_per_stream = static_cast<int>(v); }}},
        {"traffic.tau0_s", {false, [](Scenario& s, double v) { s.traffic.tau0_s = v; }}},
        {"traffic.stream_delay_bound_s",
         {false, [](Scenario& s, double v) { s.traffic.stream_delay_bound_s = v; }}},
        {"traffic.packet_deadline_s",
         {false, [](Scenario& s, double v) { s.traffic.packet_deadline_s = v; }}},
        {"cache.capacity_bytes",
         {true,
          [](Scenario& s, double v) { s.cache.capacity_bytes = static_cast<std::uint64_t>(v); }}},
        {"cache.sigma_low", {false, [](Scenario& s, double v) { s.cache.sigma_low = v; }}},
        {"cache.sigma_high", {false, [](Scenario& s, double v) { s.cache.sigma_high = v; }}},
        {"cache.max_hold_fraction",
         {false, [](Scenario& s, double v) { s.cache.max_hold_fraction = v; }}},
        {"energy.initial_j", {false, [](Scenario& s, double v) { s.energy.initial_j = v; }}},
        {"energy.rx_ratio", {false, [](Scenario& s, double v) { s.energy.rx_ratio = v; }}},
        {"energy.idle_ratio", {false, [](Scenario& s, double v) { s.energy.idle_ratio = v; }}},
        {"energy.sleep_ratio", {false, [](Scenario& s, double v) { s.energy.sleep_ratio = v; }}},
        {"energy.idle_timeout_s",
         {false, [](Scenario& s, double v) { s.energy.idle_timeout_s = v; }}},
        {"energy.sleep_timeout_s",
         {false, [](Scenario& s, double v) { s.energy.sleep_timeout_s = v; }}},
        {"energy.wake_s", {false, [](Scenario& s, double v) { s.energy.wake_s = v; }}},
        {"energy.eff_window_s",
         {false, [](Scenario& s, double v) { s.energy.eff_window_s = v; }}},
        {"mobility.speed_min_mps",
         {false, [](Scenario& s, double v) { s.mobility.speed_min_mps = v; }}},
        {"mobility.speed_max_mps",
         {false, [](Scenario& s, double v) { s.mobility.speed_max_mps = v; }}},
        {"mobility.epoch_mean_s",
         {false, [](Scenario& s, double v) { s.mobility.epoch_mean_s = v; }}},
        {"power.k_power", {false, [](Scenario& s, double v) { s.power.k_power = v; }}},
    };
    return setters;
}

double parse_number(const std::string& text, const std::string& context) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw ScenarioError("sweep: bad numeric value '" + text + "' in " + context);
    return value;
}

} // namespace

const std::vector<std::string>& sweepable_fields() {
    static const std::vector<std::string> fields = [] {
        std::vector<std::string> out;
        for (const auto& [name, setter] : field_setters()) out.push_back(name);
        return out;
    }();
    return fields;
}

Scenario with_field(const Scenario& base, const std::string& field, double value) {
    const auto& setters = field_setters();
    auto it = setters.find(field);
    if (it == setters.end())
        throw ScenarioError("sweep: field '" + field +
                            "' is not sweepable (not a scalar scenario field)");
    if (it->second.integral && value != std::floor(value))
        throw ScenarioError("sweep: field '" + field + "' takes integer values");
    Scenario result = base;
    it->second.set(result, value);
    return result;
}

SweepAxis parse_sweep_axis(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= spec.size())
        throw ScenarioError("sweep: spec must look like field=v1,v2,... got '" + spec + "'");
    SweepAxis axis;
    axis.field = spec.substr(0, eq);
    if (!field_setters().contains(axis.field))
        throw ScenarioError("sweep: field '" + axis.field +
                            "' is not sweepable (not a scalar scenario field)");
    std::string values = spec.substr(eq + 1);
    std::istringstream in(values);
    std::string token;
    while (std::getline(in, token, ','))
        axis.values.push_back(parse_number(token, axis.field));
    if (axis.values.empty()) throw ScenarioError("sweep: no values given for " + axis.field);
    return axis;
}

SweepResult run_sweep(const Scenario& base, const std::vector<SweepAxis>& axes,
                      const std::filesystem::path& out_dir, int jobs) {
    if (axes.empty()) throw ScenarioError("sweep: need at least one axis");
    std::size_t total = 1;
    for (const SweepAxis& axis : axes) total *= axis.values.size();

    SweepResult result;
    for (const SweepAxis& axis : axes) result.fields.push_back(axis.field);
    result.points.resize(total);

    std::vector<std::string> errors(total);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        while (true) {
            const std::size_t index = next.fetch_add(1);
            if (index >= total) return;
            try {
                // Decode the cartesian index, first axis slowest.
                std::vector<double> values(axes.size());
                std::size_t rest = index;
                for (std::size_t a = axes.size(); a-- > 0;) {
                    values[a] = axes[a].values[rest % axes[a].values.size()];
                    rest /= axes[a].values.size();
                }
                Scenario scenario = base;
                for (std::size_t a = 0; a < axes.size(); ++a)
                    scenario = with_field(scenario, axes[a].field, values[a]);
                scenario.seed = base.seed + index;
                scenario.validate();

                char name[32];
                std::snprintf(name, sizeof(name), "point_%03zu", index);
                const RunResult run = run_scenario(scenario);
                emit_run_outputs(run, scenario, out_dir / name);

                SweepPointSummary& p = result.points[index];
                p.index = index;
                p.values = values;
                p.seed = scenario.seed;
                p.generated = run.metrics.totals.generated;
                p.delivered = run.metrics.totals.delivered;
                p.dropped = run.metrics.totals.dropped;
                p.loss_rate = p.generated == 0 ? 0.0
                                               : static_cast<double>(p.dropped) /
                                                     static_cast<double>(p.generated);
                p.mean_eff_throughput = mean_effective_throughput(run.metrics);
                p.mean_power_uw = mean_transmit_power_uw(run.metrics);
                p.mean_delay_prioritized_s = run.metrics.delay_prioritized.mean_s();
                p.mean_delay_dontcare_s = run.metrics.delay_dontcare.mean_s();
                std::uint64_t completed = 0, in_bound = 0;
                for (const StreamRecord& s : run.metrics.streams) {
                    if (!s.completed) continue;
                    ++completed;
                    if (s.in_bound) ++in_bound;
                }
                p.bound_violation_rate =
                    completed == 0 ? 0.0
                                   : static_cast<double>(completed - in_bound) /
                                         static_cast<double>(completed);
                p.total_energy_j = run.metrics.totals.total_debited_j;
            } catch (const std::exception& e) {
                errors[index] = e.what();
            }
        }
    };

    const int thread_count = std::max(1, std::min<int>(jobs, static_cast<int>(total)));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(thread_count));
    for (int i = 0; i < thread_count; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();

    for (std::size_t i = 0; i < total; ++i)
        if (!errors[i].empty())
            throw ScenarioError("sweep: point " + std::to_string(i) + " failed: " + errors[i]);

    std::filesystem::create_directories(out_dir);
    std::ofstream combined(out_dir / "combined.csv", std::ios::binary);
    combined << sweep_combined_csv(result);
    return result;
}

std::string sweep_combined_csv(const SweepResult& result) {
    std::ostringstream out;
    out << "point";
    for (const std::string& field : result.fields) out << "," << field;
    out << ",seed,generated,delivered,dropped,loss_rate,mean_eff_throughput,mean_power_uW,"
           "mean_delay_prioritized_s,mean_delay_dontcare_s,bound_violation_rate,"
           "total_energy_j\n";
    for (const SweepPointSummary& p : result.points) {
        out << p.index;
        for (double v : p.values) out << "," << format_double(v);
        out << "," << p.seed << "," << p.generated << "," << p.delivered << "," << p.dropped
            << "," << format_double(p.loss_rate) << ","
            << format_double(p.mean_eff_throughput) << "," << format_double(p.mean_power_uw)
            << "," << format_double(p.mean_delay_prioritized_s) << ","
            << format_double(p.mean_delay_dontcare_s) << ","
            << format_double(p.bound_violation_rate) << ","
            << format_double(p.total_energy_j) << "\n";
    }
    return out.str();
}

} // namespace sodsim
