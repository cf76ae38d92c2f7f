#ifndef SODSIM_SWEEP_HPP
#define SODSIM_SWEEP_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "sodsim/network_sim.hpp"
#include "sodsim/scenario.hpp"

namespace sodsim {

// One swept field and its value grid.
struct SweepAxis {
    std::string field;
    std::vector<double> values;
};

// Parses "field=v1,v2,v3". Throws ScenarioError on malformed specs,
// unknown fields, or non-scalar fields.
SweepAxis parse_sweep_axis(const std::string& spec);

// Names of the scalar scenario fields a sweep may vary.
const std::vector<std::string>& sweepable_fields();

// Returns a copy of the scenario with one scalar field replaced. Integer
// fields reject fractional values.
Scenario with_field(const Scenario& base, const std::string& field, double value);

struct SweepPointSummary {
    std::size_t index = 0;
    std::vector<double> values; // aligned with the axes
    std::uint64_t seed = 0;
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    double loss_rate = 0.0;
    double mean_eff_throughput = 0.0;
    double mean_power_uw = 0.0;
    double mean_delay_prioritized_s = 0.0;
    double mean_delay_dontcare_s = 0.0;
    double bound_violation_rate = 0.0;
    double total_energy_j = 0.0;
};

struct SweepResult {
    std::vector<std::string> fields;
    std::vector<SweepPointSummary> points; // cartesian order, first axis slowest
};

// Runs the cartesian product of the axes. Point i runs with seed
// base.seed + i and writes its outputs under out_dir/point_XXX/. Points are
// independent, so up to `jobs` of them run concurrently; results and the
// combined table are always assembled in point order.
SweepResult run_sweep(const Scenario& base, const std::vector<SweepAxis>& axes,
                      const std::filesystem::path& out_dir, int jobs = 1);

std::string sweep_combined_csv(const SweepResult& result);

} // namespace sodsim

#endif
