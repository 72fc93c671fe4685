#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "vls/errors.hpp"

namespace vls {

// Piecewise-linear schedule of (time, breathing rate, heart rate) knots.
// Rates are held constant before the first and after the last knot, and the
// oscillator phase is the integral of the scheduled frequency, so rate
// changes never produce phase discontinuities.
struct RateSchedule {
    struct Knot {
        double time_s;
        double breathing_hz;
        double heart_hz;
    };
    std::vector<Knot> knots;

    void validate() const {
        if (knots.empty()) throw validation_error("rate schedule: no knots");
        for (std::size_t i = 0; i < knots.size(); ++i) {
            if (!(knots[i].breathing_hz > 0) || !(knots[i].heart_hz > 0))
                throw validation_error("rate schedule: rates must be positive");
            if (i > 0 && !(knots[i].time_s > knots[i - 1].time_s))
                throw validation_error("rate schedule: knot times must be strictly increasing");
        }
    }

    double breathing_hz_at(double t) const { return rate_at(t, &Knot::breathing_hz); }
    double heart_hz_at(double t) const { return rate_at(t, &Knot::heart_hz); }

    // 2 pi * integral of the scheduled frequency over [0, t]
    double breathing_phase(double t) const { return phase(t, &Knot::breathing_hz); }
    double heart_phase(double t) const { return phase(t, &Knot::heart_hz); }

private:
    double rate_at(double t, double Knot::* field) const {
        if (t <= knots.front().time_s) return knots.front().*field;
        for (std::size_t i = 1; i < knots.size(); ++i) {
            if (t <= knots[i].time_s) {
                const auto& k0 = knots[i - 1];
                const auto& k1 = knots[i];
                const double u = (t - k0.time_s) / (k1.time_s - k0.time_s);
                return k0.*field + u * (k1.*field - k0.*field);
            }
        }
        return knots.back().*field;
    }

    double phase(double t, double Knot::* field) const {
        double integral = 0.0;
        double t0 = 0.0;
        if (t <= 0) return 0.0;
        // constant segment before the first knot
        const double lead_end = std::min(t, std::max(knots.front().time_s, 0.0));
        integral += knots.front().*field * (lead_end - t0);
        t0 = lead_end;
        for (std::size_t i = 1; i < knots.size() && t0 < t; ++i) {
            const auto& k0 = knots[i - 1];
            const auto& k1 = knots[i];
            if (k1.time_s <= t0) continue;
            const double seg_start = std::max(t0, k0.time_s);
            const double seg_end = std::min(t, k1.time_s);
            if (seg_end <= seg_start) continue;
            const double slope = (k1.*field - k0.*field) / (k1.time_s - k0.time_s);
            auto f_at = [&](double tt) { return k0.*field + slope * (tt - k0.time_s); };
            // trapezoid is exact for a linear segment
            integral += 0.5 * (f_at(seg_start) + f_at(seg_end)) * (seg_end - seg_start);
            t0 = seg_end;
        }
        if (t > t0) integral += knots.back().*field * (t - t0);
        return 2.0 * std::numbers::pi * integral;
    }
};

// Chest kinematics: rest distance minus two sinusoidal excursions. Inhale
// (positive sine) moves the chest toward the sensor, so received power peaks
// at full inhale. The heartbeat may carry two extra harmonics to mimic the
// non-sinusoidal shape of a real ballistic pulse.
struct SubjectMotion {
    double rest_distance_m = 0.4;
    double breathing_amplitude_m = 0.005;  // half peak-to-peak
    double breathing_rate_hz = 15.0 / 60.0;
    double breathing_phase_rad = 0.0;
    double heartbeat_amplitude_m = 0.0005;
    double heartbeat_rate_hz = 72.0 / 60.0;
    double heartbeat_phase_rad = 0.0;
    double heartbeat_harmonic2 = 0.0;  // relative to the fundamental
    double heartbeat_harmonic3 = 0.0;
    std::optional<RateSchedule> rate_schedule;

    void validate() const {
        if (breathing_amplitude_m < 0 || heartbeat_amplitude_m < 0)
            throw validation_error("motion: amplitudes must be >= 0");
        if (!(breathing_rate_hz > 0) || !(heartbeat_rate_hz > 0))
            throw validation_error("motion: rates must be positive");
        if (heartbeat_harmonic2 < 0 || heartbeat_harmonic3 < 0)
            throw validation_error("motion: harmonic amplitudes must be >= 0");
        const double reach =
            breathing_amplitude_m +
            heartbeat_amplitude_m * (1.0 + heartbeat_harmonic2 + heartbeat_harmonic3);
        if (!(rest_distance_m > reach))
            throw validation_error("motion: rest distance must exceed the total excursion " +
                                   std::to_string(reach) + " m");
        if (rate_schedule) rate_schedule->validate();
    }

    // Plausibility notes, not errors: excursions far from the observed
    // breathing range (0.5-2 cm peak-to-peak) or heartbeat ceiling (0.2 cm).
    std::vector<std::string> warnings() const {
        std::vector<std::string> notes;
        const double breath_pp = 2.0 * breathing_amplitude_m;
        if (breathing_amplitude_m > 0 && (breath_pp < 0.005 || breath_pp > 0.02))
            notes.push_back("breathing peak-to-peak " + std::to_string(breath_pp) +
                            " m is outside the plausible range [0.005, 0.02] m");
        if (2.0 * heartbeat_amplitude_m > 0.002)
            notes.push_back("heartbeat peak-to-peak " + std::to_string(2.0 * heartbeat_amplitude_m) +
                            " m exceeds the plausible ceiling 0.002 m");
        return notes;
    }
};

inline double chest_displacement(const SubjectMotion& motion, double t) {
    if (t < 0) throw validation_error("chest_displacement: time must be >= 0");
    double breathing_phase, heart_phase;
    if (motion.rate_schedule) {
        breathing_phase = motion.rate_schedule->breathing_phase(t) + motion.breathing_phase_rad;
        heart_phase = motion.rate_schedule->heart_phase(t) + motion.heartbeat_phase_rad;
    } else {
        breathing_phase = 2.0 * std::numbers::pi * motion.breathing_rate_hz * t + motion.breathing_phase_rad;
        heart_phase = 2.0 * std::numbers::pi * motion.heartbeat_rate_hz * t + motion.heartbeat_phase_rad;
    }
    const double heartbeat_wave = std::sin(heart_phase) +
                                  motion.heartbeat_harmonic2 * std::sin(2.0 * heart_phase) +
                                  motion.heartbeat_harmonic3 * std::sin(3.0 * heart_phase);
    return motion.rest_distance_m - motion.breathing_amplitude_m * std::sin(breathing_phase) -
           motion.heartbeat_amplitude_m * heartbeat_wave;
}

}  // namespace vls
