#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "vls/errors.hpp"

namespace vls {

// Lambertian emission order for a source with the given half-power
// semi-angle; grows without bound as the beam narrows.
inline double lambertian_order(double half_power_semi_angle_rad) {
    if (!(half_power_semi_angle_rad > 0.0) ||
        !(half_power_semi_angle_rad < std::numbers::pi / 2))
        throw validation_error("lambertian_order: half-power semi-angle must lie strictly in (0, pi/2)");
    return -std::log(2.0) / std::log(std::cos(half_power_semi_angle_rad));
}

// Optical channel between a Lambertian source and a photodetector.
// Two usable forms: the full geometric expression (angles and distance) and
// the fitted distance-only power law P = 10^(K_dB/10) * d^-gamma. K_dB is
// referenced to received power in watts at d = 1 m.
struct LambertianChannel {
    double transmit_power_w = 1.0;
    double detector_area_m2 = 1e-4;
    double half_power_semi_angle_rad = std::numbers::pi / 3;  // 60 deg -> order 1
    double path_loss_exponent = 3.238;
    double system_constant_db = -111.2;

    double lambertian_order_value() const { return lambertian_order(half_power_semi_angle_rad); }

    void validate() const {
        lambertian_order(half_power_semi_angle_rad);  // throws outside (0, pi/2)
        if (!(transmit_power_w > 0)) throw validation_error("channel: transmit power must be positive");
        if (!(detector_area_m2 > 0)) throw validation_error("channel: detector area must be positive");
        if (!(path_loss_exponent > 0))
            throw validation_error("channel: path-loss exponent must be positive");
    }
};

// Full geometric form: (n+1) A_R P_t cos^n(phi) cos(theta) / (2 pi d^gamma).
// Incidence at or beyond the half-power semi-angle is outside the field of
// view (strict inequality).
inline double received_power_geometric(const LambertianChannel& channel, double distance_m,
                                       double irradiance_angle_rad, double incidence_angle_rad) {
    channel.validate();
    if (!(distance_m > 0)) throw validation_error("received_power_geometric: distance must be positive");
    if (irradiance_angle_rad < 0 || irradiance_angle_rad >= std::numbers::pi / 2 ||
        incidence_angle_rad < 0 || incidence_angle_rad >= std::numbers::pi / 2)
        throw validation_error("received_power_geometric: angles must lie in [0, pi/2)");
    if (incidence_angle_rad >= channel.half_power_semi_angle_rad)
        throw field_of_view_error("received_power_geometric: incidence angle " +
                                  std::to_string(incidence_angle_rad) +
                                  " rad is outside the field of view");
    const double n = channel.lambertian_order_value();
    return (n + 1.0) * channel.detector_area_m2 * channel.transmit_power_w *
           std::pow(std::cos(irradiance_angle_rad), n) * std::cos(incidence_angle_rad) /
           (2.0 * std::numbers::pi * std::pow(distance_m, channel.path_loss_exponent));
}

// Fitted distance-only form.
inline double received_power_from_distance(const LambertianChannel& channel, double distance_m) {
    if (!(distance_m > 0))
        throw validation_error("received_power_from_distance: distance must be positive");
    if (!(channel.path_loss_exponent > 0))
        throw validation_error("channel: path-loss exponent must be positive");
    return std::pow(10.0, channel.system_constant_db / 10.0) *
           std::pow(distance_m, -channel.path_loss_exponent);
}

}  // namespace vls
