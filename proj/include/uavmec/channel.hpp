#pragma once

#include <cmath>
#include <stdexcept>

#include "uavmec/params.hpp"
#include "uavmec/vec3.hpp"

namespace uavmec {

// Effective fading power for a given elevation-angle sine u in [0, 1].
// Output lies strictly inside (c1, c1 + c2).
inline double logistic_fading(double sin_elevation, const RadioParams& radio) {
    if (!(sin_elevation >= 0.0 && sin_elevation <= 1.0)) {
        throw std::domain_error("logistic_fading: elevation sine must lie in [0, 1]");
    }
    const LogisticFading& l = radio.logistic;
    return l.c1 + l.c2 / (1.0 + std::exp(-(l.b1 + l.b2 * sin_elevation)));
}

// SNR of the air-to-ground link at the receiver, linear scale.
inline double link_snr(const Vec3& tx_pos, const Vec3& rx_pos, double tx_power_w,
                       double bandwidth_hz, double uav_height_m, const RadioParams& radio) {
    if (tx_power_w < 0.0) throw std::domain_error("link_snr: negative transmit power");
    if (bandwidth_hz <= 0.0) throw std::domain_error("link_snr: bandwidth must be > 0");
    const double dist = distance(tx_pos, rx_pos);
    if (dist <= 0.0) throw std::domain_error("link_snr: transmitter and receiver coincide");
    const double sin_elev = std::min(1.0, std::max(0.0, uav_height_m / dist));
    const double v = logistic_fading(sin_elev, radio);
    const double path = std::pow(dist, radio.alpha);
    return radio.beta0 * tx_power_w * v / (bandwidth_hz * radio.noise_psd_w_hz * path);
}

// Achievable rate in bits/s over one air-to-ground link. The fading power is
// the logistic approximation evaluated at the elevation sine uav_height/dist.
inline double link_rate(const Vec3& tx_pos, const Vec3& rx_pos, double tx_power_w,
                        double bandwidth_hz, double uav_height_m, const RadioParams& radio) {
    const double snr = link_snr(tx_pos, rx_pos, tx_power_w, bandwidth_hz, uav_height_m, radio);
    return bandwidth_hz * std::log2(1.0 + snr);
}

}  // namespace uavmec
