#pragma once

#include <cmath>
#include <stdexcept>

#include "uavmec/params.hpp"

namespace uavmec {

// Rotary-wing propulsion power at horizontal speed v_h and vertical speed v_v.
// Four terms: blade profile, parasite drag, induced power, climb power.
inline double propulsion_power(double v_h_mps, double v_v_mps, const FlightParams& f) {
    if (v_h_mps < 0.0 || v_v_mps < 0.0) {
        throw std::domain_error("propulsion_power: speeds must be >= 0");
    }
    const double vh2 = v_h_mps * v_h_mps;
    const double tip2 = f.tip_speed_mps * f.tip_speed_mps;
    const double profile = f.blade_profile_power_w * (1.0 + 3.0 * vh2 / tip2);

    const double parasite = 0.5 * f.fuselage_drag_ratio * f.air_density * f.rotor_solidity *
                            f.rotor_disc_area_m2 * vh2 * v_h_mps;

    const double v0sq = f.rotor_induced_speed_mps * f.rotor_induced_speed_mps;
    const double induced =
        f.induced_power_w *
        std::sqrt(std::sqrt(1.0 + vh2 * vh2 / (4.0 * v0sq * v0sq)) - vh2 / (2.0 * v0sq));

    const double climb = f.vertical_power_w_per_mps * v_v_mps;
    return profile + parasite + induced + climb;
}

}  // namespace uavmec
