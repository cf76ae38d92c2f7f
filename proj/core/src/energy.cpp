#include "sodsim/energy.hpp"

#include <algorithm>
#include <stdexcept>

namespace sodsim {

namespace {

constexpr double kMicro = 1e-6;

double airtime_s(const LinkSpec& link, double bits) {
    if (link.rate_mbps <= 0.0) throw std::domain_error("airtime: rate must be > 0");
    return bits / (link.rate_mbps * 1e6);
}

} // namespace

double activity_cost_j(const Activity& activity, const EnergyCoefficients& coeff,
                       const PowerCalibration& calib, double reference_active_power_uw) {
    return std::visit(
        [&](const auto& act) -> double {
            using T = std::decay_t<decltype(act)>;
            if constexpr (std::is_same_v<T, TransmitActivity>) {
                if (act.bits == 0.0) return 0.0;
                const double base = transmission_power_uw(act.link, calib);
                const double scaled =
                    capacity_scaled_power_uw(base, act.capacity, act.eff, calib);
                return scaled * kMicro * airtime_s(act.link, act.bits);
            } else if constexpr (std::is_same_v<T, ReceiveActivity>) {
                if (act.bits == 0.0) return 0.0;
                const double base = transmission_power_uw(act.link, calib);
                return coeff.rx_ratio * base * kMicro * airtime_s(act.link, act.bits);
            } else if constexpr (std::is_same_v<T, CacheHoldActivity>) {
                if (act.seconds == 0.0 || act.capacity_bytes == 0) return 0.0;
                const double fill = static_cast<double>(act.held_bytes) /
                                    static_cast<double>(act.capacity_bytes);
                return coeff.cache_hold_factor * coeff.idle_ratio *
                       reference_active_power_uw * fill * kMicro * act.seconds;
            } else if constexpr (std::is_same_v<T, IdleTickActivity>) {
                return coeff.idle_ratio * reference_active_power_uw * kMicro * act.seconds;
            } else {
                static_assert(std::is_same_v<T, SleepTickActivity>);
                return coeff.sleep_ratio * reference_active_power_uw * kMicro * act.seconds;
            }
        },
        activity);
}

DebitResult debit_energy(NodeEnergy& node, const Activity& activity,
                         const EnergyCoefficients& coeff, const PowerCalibration& calib,
                         double reference_active_power_uw) {
    DebitResult result;
    if (node.dead || node.depleted()) {
        result.new_residual_j = node.residual_j;
        return result;
    }
    const double cost = activity_cost_j(activity, coeff, calib, reference_active_power_uw);
    result.applied = true;
    if (cost >= node.residual_j) {
        result.cost_j = node.residual_j;
        node.residual_j = 0.0;
        node.dead = true;
        node.radio_state = RadioState::Sleep;
        result.died = true;
    } else {
        result.cost_j = cost;
        node.residual_j -= cost;
    }
    result.new_residual_j = node.residual_j;
    return result;
}

} // namespace sodsim
