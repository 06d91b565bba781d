#pragma once

#include <cmath>
#include <vector>

#include "uavmec/errors.hpp"
#include "uavmec/vec3.hpp"

namespace uavmec {

// Logistic approximation of the effective fading power as a function of the
// elevation-angle sine: v(u) = c1 + c2 / (1 + exp(-(b1 + b2*u))).
struct LogisticFading {
    double c1 = 0.2;
    double c2 = 0.8;
    double b1 = -4.3221;
    double b2 = 6.075;
};

struct RadioParams {
    double beta0 = 1e-5;              // channel power gain at 1 m (-50 dB)
    double alpha = 2.2;               // path-loss exponent
    double total_bandwidth_hz = 30e6; // shared equally across users
    double noise_psd_w_hz = 3.9810717055349851e-21;  // -174 dBm/Hz
    double p_user_w = 0.1;            // user transmit power
    double p_uav_w = 0.5;             // UAV relay transmit power
    LogisticFading logistic;

    void validate() const {
        require(beta0 > 0.0, "radio: beta0 must be > 0");
        require(alpha >= 2.0, "radio: path-loss exponent must be >= 2");
        require(total_bandwidth_hz > 0.0, "radio: total bandwidth must be > 0");
        require(noise_psd_w_hz > 0.0, "radio: noise PSD must be > 0");
        require(p_user_w >= 0.0 && p_uav_w >= 0.0, "radio: transmit powers must be >= 0");
        require(logistic.c1 > 0.0 && logistic.c2 > 0.0, "radio: logistic c1, c2 must be > 0");
        require(std::abs(logistic.c1 + logistic.c2 - 1.0) < 1e-9, "radio: logistic c1 + c2 must equal 1");
        require(logistic.b1 < 0.0, "radio: logistic b1 must be < 0");
        require(logistic.b2 > 0.0, "radio: logistic b2 must be > 0");
    }
};

struct ComputeParams {
    double f_user_hz = 1.5e9;     // user CPU frequency
    double f_uav_max_hz = 30e9;   // total UAV CPU budget
    double f_bs_hz = 15e9;        // BS CPU share per user
    double tau_user = 1e-29;      // effective capacitance, user chip
    double tau_uav = 1e-29;       // effective capacitance, UAV chip
    double epsilon_comp = 2.0;    // compression-algorithm constant
    double gamma_min = 0.5;       // minimum compression ratio

    void validate() const {
        require(f_user_hz > 0.0 && f_uav_max_hz > 0.0 && f_bs_hz > 0.0,
                "compute: CPU frequencies must be > 0");
        require(tau_user > 0.0 && tau_uav > 0.0, "compute: capacitance coefficients must be > 0");
        require(gamma_min > 0.0 && gamma_min <= 1.0, "compute: gamma_min must lie in (0, 1]");
        require(epsilon_comp > 0.0, "compute: epsilon_comp must be > 0");
    }
};

// Rotary-wing propulsion model constants plus the onboard energy budget.
struct FlightParams {
    double blade_profile_power_w = 79.86;   // p0
    double induced_power_w = 88.63;         // p1, hover induced power
    double vertical_power_w_per_mps = 10.0; // p2, climb/descent coefficient
    double tip_speed_mps = 120.0;
    double rotor_induced_speed_mps = 4.03;
    double fuselage_drag_ratio = 0.6;
    double air_density = 1.225;             // kg/m^3
    double rotor_solidity = 0.05;
    double rotor_disc_area_m2 = 0.503;
    double e_uav_max_j = 20000.0;           // onboard energy

    void validate() const {
        require(blade_profile_power_w > 0.0 && induced_power_w > 0.0 &&
                    vertical_power_w_per_mps > 0.0,
                "flight: power constants must be > 0");
        require(tip_speed_mps > 0.0 && rotor_induced_speed_mps > 0.0,
                "flight: rotor speeds must be > 0");
        require(fuselage_drag_ratio > 0.0 && air_density > 0.0 && rotor_solidity > 0.0 &&
                    rotor_disc_area_m2 > 0.0,
                "flight: airframe constants must be > 0");
        require(e_uav_max_j > 0.0, "flight: energy budget must be > 0");
    }
};

// Flight box, speed limit and the slot grid.
struct Region {
    double x_min_m = 0.0, x_max_m = 500.0;
    double y_min_m = 0.0, y_max_m = 500.0;
    double h_min_m = 100.0, h_max_m = 200.0;
    double v_max_mps = 20.0;
    double slot_len_s = 1.5;
    int n_slots = 50;

    double max_step_m() const { return v_max_mps * slot_len_s; }

    Vec3 clamp(const Vec3& p) const {
        auto clip = [](double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); };
        return {clip(p.x, x_min_m, x_max_m), clip(p.y, y_min_m, y_max_m), clip(p.z, h_min_m, h_max_m)};
    }

    void validate() const {
        require(x_min_m < x_max_m && y_min_m < y_max_m && h_min_m < h_max_m,
                "region: min must be < max on every axis");
        require(v_max_mps > 0.0, "region: v_max must be > 0");
        require(slot_len_s > 0.0, "region: slot length must be > 0");
        require(n_slots >= 1, "region: need at least one slot");
    }
};

// Per-slot task generation ranges (uniform draws).
struct TaskRanges {
    double data_bits_min = 1e6;
    double data_bits_max = 2.5e6;
    double density_min = 700.0;   // cycles/bit
    double density_max = 1000.0;

    void validate() const {
        require(data_bits_min > 0.0 && data_bits_max >= data_bits_min,
                "tasks: data size range invalid");
        require(density_min > 0.0 && density_max >= density_min,
                "tasks: density range invalid");
    }
};

// Isotropic Gaussian position error, three axes.
struct JitterModel {
    double sigma_m = 1.0;

    void validate() const { require(sigma_m >= 0.0, "jitter: sigma must be >= 0"); }
};

struct ChanceSpec {
    double rho_trj = 0.1;  // admissible speed-violation probability

    void validate() const {
        require(rho_trj > 0.0 && rho_trj < 1.0, "chance: rho_trj must lie in (0, 1)");
    }
};

// Everything the physics engine needs for one world.
struct WorldConfig {
    int user_count = 15;
    Region region;
    RadioParams radio;
    ComputeParams compute;
    FlightParams flight;
    TaskRanges tasks;
    JitterModel jitter;
    ChanceSpec chance;
    Vec3 start_pos{0.0, 0.0, 150.0};
    Vec3 bs_pos{500.0, 500.0, 0.0};

    double per_user_bandwidth_hz() const {
        return radio.total_bandwidth_hz / static_cast<double>(user_count);
    }

    int observation_dim() const { return 2 * user_count + 4; }
    int action_dim() const { return 3 * user_count + 3; }

    void validate() const {
        require(user_count >= 1, "world: need at least one user");
        region.validate();
        radio.validate();
        compute.validate();
        flight.validate();
        tasks.validate();
        jitter.validate();
        chance.validate();
        Vec3 clamped = region.clamp(start_pos);
        require(clamped.x == start_pos.x && clamped.y == start_pos.y && clamped.z == start_pos.z,
                "world: start position must lie inside the flight region");
    }
};

}  // namespace uavmec
