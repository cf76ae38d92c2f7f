#ifndef SODSIM_ENERGY_HPP
#define SODSIM_ENERGY_HPP

#include <cstdint>
#include <variant>

#include "sodsim/model.hpp"

namespace sodsim {

enum class RadioState { Active, Idle, Sleep };

struct NodeEnergy {
    double initial_j = 1.0;
    double residual_j = 1.0;
    RadioState radio_state = RadioState::Active;
    double state_entered_s = 0.0;
    bool dead = false; // residual hit zero; permanently Sleep

    bool depleted() const { return residual_j <= 0.0; }
};

// Radio power ratios relative to the node's reference active transmit power.
// The sleep < idle < active ordering is what every qualitative energy claim
// rests on; config validation enforces it.
struct EnergyCoefficients {
    double rx_ratio = 0.5;          // of per-bit transmit energy on the same link
    double idle_ratio = 0.05;       // of reference active power
    double sleep_ratio = 0.01;      // of reference active power
    double cache_hold_factor = 0.5; // of idle power, scaled by cache fill fraction
};

struct TransmitActivity {
    LinkSpec link;
    double bits = 0.0;
    CapacityState capacity;
    double eff = 0.0; // node's current effective throughput, in [0,1]
};

struct ReceiveActivity {
    LinkSpec link; // the incoming directed link
    double bits = 0.0;
};

struct CacheHoldActivity {
    std::uint64_t held_bytes = 0;
    std::uint64_t capacity_bytes = 0;
    double seconds = 0.0;
};

struct IdleTickActivity {
    double seconds = 0.0;
};

struct SleepTickActivity {
    double seconds = 0.0;
};

using Activity = std::variant<TransmitActivity, ReceiveActivity, CacheHoldActivity,
                              IdleTickActivity, SleepTickActivity>;

// Joules one activity costs. Transmit power is the capacity-scaled link
// power; tick costs scale off reference_active_power_uw.
double activity_cost_j(const Activity& activity, const EnergyCoefficients& coeff,
                       const PowerCalibration& calib, double reference_active_power_uw);

struct DebitResult {
    double cost_j = 0.0;
    double new_residual_j = 0.0;
    bool applied = false; // false when the node was already depleted
    bool died = false;    // this debit drained the node to zero
};

// Deducts the activity cost from the node's residual energy. Depleted nodes
// are left untouched (callers count these as anomalies). Draining to zero
// puts the node permanently to Sleep.
DebitResult debit_energy(NodeEnergy& node, const Activity& activity,
                         const EnergyCoefficients& coeff, const PowerCalibration& calib,
                         double reference_active_power_uw);

} // namespace sodsim

#endif
