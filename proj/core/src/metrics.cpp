#include "sodsim/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include <json.hpp>

#include "sodsim/errors.hpp"

namespace sodsim {

namespace {

constexpr double kSigmaBucketWidth = 0.05;
constexpr double kDistanceBucketM = 1.0;

std::ofstream open_csv(const std::filesystem::path& dir, const char* name) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw ScenarioError("metrics: cannot write " + (dir / name).string());
    return out;
}

} // namespace

void DelayStats::add(double delay_s) {
    ++count;
    sum_s += delay_s;
    max_s = std::max(max_s, delay_s);
}

std::string format_double(double value) {
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

std::vector<Fig5Row> fig5_aggregate(const RunMetrics& metrics) {
    std::map<int, std::pair<double, std::uint64_t>> groups;
    for (const PowerSample& s : metrics.power_samples) {
        auto& [sum, n] = groups[s.zone_cardinality];
        sum += s.power_uw;
        ++n;
    }
    std::vector<Fig5Row> rows;
    rows.reserve(groups.size());
    for (const auto& [cardinality, acc] : groups)
        rows.push_back(Fig5Row{cardinality, acc.first / static_cast<double>(acc.second)});
    return rows;
}

std::vector<Fig5DistanceRow> fig5_distance_aggregate(const RunMetrics& metrics) {
    std::map<int, std::pair<double, std::uint64_t>> groups;
    for (const PowerSample& s : metrics.power_samples) {
        const int bucket = static_cast<int>(std::ceil(s.link_distance_m / kDistanceBucketM));
        auto& [sum, n] = groups[bucket];
        sum += s.power_uw;
        ++n;
    }
    std::vector<Fig5DistanceRow> rows;
    rows.reserve(groups.size());
    for (const auto& [bucket, acc] : groups)
        rows.push_back(Fig5DistanceRow{bucket * kDistanceBucketM,
                                       acc.first / static_cast<double>(acc.second)});
    return rows;
}

std::vector<Fig6Row> fig6_aggregate(const RunMetrics& metrics) {
    std::map<int, std::pair<double, std::uint64_t>> buckets;
    for (const CacheEventSample& e : metrics.cache_events) {
        const int bucket = static_cast<int>(std::floor(e.sigma / kSigmaBucketWidth));
        auto& [sum, n] = buckets[bucket];
        sum += e.chunk_delay_s;
        ++n;
    }
    std::vector<Fig6Row> rows;
    rows.reserve(buckets.size());
    for (const auto& [bucket, acc] : buckets)
        rows.push_back(Fig6Row{static_cast<double>(bucket * 5) / 100.0,
                               acc.first / static_cast<double>(acc.second)});
    return rows;
}

double mean_effective_throughput(const RunMetrics& metrics) {
    double sum = 0.0;
    std::uint64_t n = 0;
    for (const StreamRecord& s : metrics.streams) {
        if (s.stats.transmitted_blocks == 0) continue;
        if (s.stats.transfer_time_s <= 0.0 || s.stats.bandwidth_bps <= 0.0) continue;
        sum += effective_throughput(s.stats);
        ++n;
    }
    return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

double mean_transmit_power_uw(const RunMetrics& metrics) {
    if (metrics.power_samples.empty()) return 0.0;
    double sum = 0.0;
    for (const PowerSample& s : metrics.power_samples) sum += s.power_uw;
    return sum / static_cast<double>(metrics.power_samples.size());
}

Fig7Row fig7_aggregate(const RunMetrics& metrics) {
    return Fig7Row{mean_effective_throughput(metrics), mean_transmit_power_uw(metrics)};
}

std::vector<Fig8Row> fig8_aggregate(const RunMetrics& metrics) {
    std::vector<Fig8Row> rows;
    for (std::size_t s = 0; s < metrics.sample_times_s.size(); ++s) {
        const auto& zones = metrics.zone_mean_residual_j[s];
        for (std::size_t z = 0; z < zones.size(); ++z)
            rows.push_back(Fig8Row{metrics.sample_times_s[s], static_cast<int>(z), zones[z]});
    }
    return rows;
}

void write_fig_csvs(const RunMetrics& metrics, const std::filesystem::path& dir) {
    {
        auto out = open_csv(dir, "fig5.csv");
        out << "zone_node_count,mean_power_uW\n";
        for (const Fig5Row& row : fig5_aggregate(metrics))
            out << row.zone_node_count << "," << format_double(row.mean_power_uw) << "\n";
    }
    {
        auto out = open_csv(dir, "fig5_distance.csv");
        out << "max_link_distance_m,mean_power_uW\n";
        for (const Fig5DistanceRow& row : fig5_distance_aggregate(metrics))
            out << format_double(row.max_link_distance_m) << ","
                << format_double(row.mean_power_uw) << "\n";
    }
    {
        auto out = open_csv(dir, "fig6.csv");
        out << "sigma_bucket,mean_caching_delay_s\n";
        for (const Fig6Row& row : fig6_aggregate(metrics))
            out << format_double(row.sigma_bucket) << ","
                << format_double(row.mean_caching_delay_s) << "\n";
    }
    {
        auto out = open_csv(dir, "fig7.csv");
        out << "mean_eff_throughput,mean_power_uW\n";
        if (!metrics.streams.empty() || !metrics.power_samples.empty()) {
            const Fig7Row row = fig7_aggregate(metrics);
            out << format_double(row.mean_eff_throughput) << ","
                << format_double(row.mean_power_uw) << "\n";
        }
    }
    {
        auto out = open_csv(dir, "fig8.csv");
        out << "time_s,zone_id,mean_residual_j\n";
        for (const Fig8Row& row : fig8_aggregate(metrics))
            out << format_double(row.time_s) << "," << row.zone_id << ","
                << format_double(row.mean_residual_j) << "\n";
    }
}

std::string summary_json_string(const RunMetrics& metrics, const Scenario& scenario) {
    nlohmann::json j;
    const RunTotals& t = metrics.totals;
    j["scenario"] = nlohmann::json::parse(scenario.to_json_string());
    j["totals"] = {
        {"generated", t.generated},
        {"delivered", t.delivered},
        {"dropped", t.dropped},
        {"cached_at_end", t.cached_at_end},
        {"in_flight_at_end", t.in_flight_at_end},
        {"loss_rate",
         t.generated == 0 ? 0.0
                          : static_cast<double>(t.dropped) / static_cast<double>(t.generated)},
        {"drop_reasons",
         {{"deadline_expired", t.dropped_deadline},
          {"no_route", t.dropped_no_route},
          {"receiver_dead", t.dropped_receiver_dead},
          {"cache_expired", t.dropped_cache_expired}}},
        {"total_energy_consumed_j", t.total_debited_j},
        {"energy_anomalies", t.energy_anomalies},
    };
    std::uint64_t completed = 0, in_bound = 0;
    for (const StreamRecord& s : metrics.streams) {
        if (!s.completed) continue;
        ++completed;
        if (s.in_bound) ++in_bound;
    }
    j["streams"] = {
        {"total", metrics.streams.size()},
        {"completed", completed},
        {"in_bound", in_bound},
        {"bound_violated", completed - in_bound},
        {"bound_violation_rate",
         completed == 0
             ? 0.0
             : static_cast<double>(completed - in_bound) / static_cast<double>(completed)},
    };
    j["delay"] = {
        {"prioritized",
         {{"count", metrics.delay_prioritized.count},
          {"mean_s", metrics.delay_prioritized.mean_s()},
          {"max_s", metrics.delay_prioritized.max_s}}},
        {"dont_care",
         {{"count", metrics.delay_dontcare.count},
          {"mean_s", metrics.delay_dontcare.mean_s()},
          {"max_s", metrics.delay_dontcare.max_s}}},
    };
    j["throughput"] = {
        {"mean_effective_throughput", mean_effective_throughput(metrics)},
        {"mean_transmit_power_uw", mean_transmit_power_uw(metrics)},
        {"eff_clamp_events", t.eff_clamp_events},
    };
    j["caching"] = {
        {"admissions", t.cache_admissions},
        {"flushes", t.cache_flushes},
        {"evictions", t.cache_evictions},
        {"events_recorded", metrics.cache_events.size()},
    };
    j["events"] = {
        {"scheduled", t.events_scheduled},
        {"processed", t.events_processed},
        {"cancelled", t.events_cancelled},
        {"pending_at_end", t.events_pending_at_end},
    };
    return j.dump(2) + "\n";
}

void write_summary_json(const RunMetrics& metrics, const Scenario& scenario,
                        const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / "summary.json", std::ios::binary);
    if (!out) throw ScenarioError("metrics: cannot write " + (dir / "summary.json").string());
    out << summary_json_string(metrics, scenario);
}

} // namespace sodsim
