#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "vls/errors.hpp"
#include "vls/motion.hpp"
#include "vls/optics.hpp"
#include "vls/textio.hpp"
#include "vls/trace.hpp"

namespace vls {

// Deterministic Gaussian stream: splitmix64 bits through Box-Muller.
// Identical seed and call sequence give bit-identical values on every
// platform, which the fixed-seed acceptance runs rely on.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : state_(seed) {}

    double uniform01() {  // (0, 1]
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        z ^= z >> 31;
        return static_cast<double>((z >> 11) + 1) * 0x1.0p-53;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u = uniform01();
        const double v = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u));
        const double angle = 2.0 * std::numbers::pi * v;
        spare_ = r * std::sin(angle);
        have_spare_ = true;
        return r * std::cos(angle);
    }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Receiver-side impairments, all in the power domain: white Gaussian noise,
// a slow sinusoidal baseline wander below the breathing band, and discrete
// ambient-light interference tones.
struct NoiseModel {
    double additive_noise_std_w = 0.0;
    double drift_amplitude_w = 0.0;
    double drift_period_s = 120.0;
    std::vector<std::pair<double, double>> interference_tones;  // (hz, amplitude W)
    std::uint64_t seed = 1;

    void validate() const {
        if (additive_noise_std_w < 0 || drift_amplitude_w < 0)
            throw validation_error("noise: amplitudes must be >= 0");
        if (drift_amplitude_w > 0 && !(drift_period_s > 0))
            throw validation_error("noise: drift period must be positive");
        for (const auto& [hz, amp] : interference_tones)
            if (!(hz > 0) || amp < 0)
                throw validation_error("noise: interference tones need hz > 0 and amplitude >= 0");
    }
};

// Heart-band ceiling used by the estimation pipeline; the ADC must sample
// faster than twice this frequency.
inline constexpr double kHighestBandEdgeHz = 200.0 / 60.0;

struct AdcModel {
    double sampling_rate_hz = 100.0;
    std::optional<int> bit_depth;  // absent -> no quantization
    double full_scale_w = 0.0;     // required when bit_depth is set

    void validate() const {
        if (!(sampling_rate_hz > 2.0 * kHighestBandEdgeHz))
            throw validation_error("adc: sampling rate must exceed " +
                                   std::to_string(2.0 * kHighestBandEdgeHz) +
                                   " Hz (Nyquist for the heart band)");
        if (bit_depth) {
            if (*bit_depth < 1 || *bit_depth > 32)
                throw validation_error("adc: bit depth out of range [1, 32]");
            if (!(full_scale_w > 0))
                throw validation_error("adc: full scale must be positive when quantizing");
        }
    }

    double quantize(double power_w) const {
        if (!bit_depth) return power_w;
        const double levels = std::pow(2.0, *bit_depth) - 1.0;
        double x = power_w / full_scale_w;
        x = x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
        return std::round(x * levels) / levels * full_scale_w;
    }
};

// Composes motion, channel, noise and ADC into a sampled power trace.
// The trace carries every generator parameter plus the true rates, so a
// downstream estimate can be scored without side channels.
inline Trace synthesize_trace(const SubjectMotion& motion, const LambertianChannel& channel,
                              const AdcModel& adc, const NoiseModel& noise, double duration_s) {
    if (!(duration_s > 0)) throw validation_error("synthesize_trace: duration must be positive");
    motion.validate();
    channel.validate();
    adc.validate();
    noise.validate();

    const std::size_t count = static_cast<std::size_t>(adc.sampling_rate_hz * duration_s);
    if (count == 0) throw validation_error("synthesize_trace: duration shorter than one sample");

    GaussianStream rng(noise.seed);
    Trace trace;
    trace.sampling_rate_hz = adc.sampling_rate_hz;
    trace.samples.resize(count);
    for (std::size_t m = 0; m < count; ++m) {
        const double t = static_cast<double>(m) / adc.sampling_rate_hz;
        double p = received_power_from_distance(channel, chest_displacement(motion, t));
        if (noise.drift_amplitude_w > 0)
            p += noise.drift_amplitude_w * std::sin(2.0 * std::numbers::pi * t / noise.drift_period_s);
        for (const auto& [hz, amp] : noise.interference_tones)
            p += amp * std::sin(2.0 * std::numbers::pi * hz * t);
        if (noise.additive_noise_std_w > 0) p += noise.additive_noise_std_w * rng.gaussian();
        trace.samples[m] = adc.quantize(p);
    }

    // truth: time-averaged rates when a schedule is present
    GroundTruth truth;
    if (motion.rate_schedule) {
        truth.breathing_bpm = motion.rate_schedule->breathing_phase(duration_s) /
                              (2.0 * std::numbers::pi) / duration_s * 60.0;
        truth.heart_bpm = motion.rate_schedule->heart_phase(duration_s) /
                          (2.0 * std::numbers::pi) / duration_s * 60.0;
    } else {
        truth.breathing_bpm = motion.breathing_rate_hz * 60.0;
        truth.heart_bpm = motion.heartbeat_rate_hz * 60.0;
    }
    trace.truth = truth;

    auto& meta = trace.metadata;
    meta["rest_distance_m"] = format_double(motion.rest_distance_m);
    meta["breathing_amplitude_m"] = format_double(motion.breathing_amplitude_m);
    meta["breathing_rate_hz"] = format_double(motion.breathing_rate_hz);
    meta["breathing_phase_rad"] = format_double(motion.breathing_phase_rad);
    meta["heartbeat_amplitude_m"] = format_double(motion.heartbeat_amplitude_m);
    meta["heartbeat_rate_hz"] = format_double(motion.heartbeat_rate_hz);
    meta["heartbeat_phase_rad"] = format_double(motion.heartbeat_phase_rad);
    if (motion.heartbeat_harmonic2 > 0) meta["heartbeat_harmonic2"] = format_double(motion.heartbeat_harmonic2);
    if (motion.heartbeat_harmonic3 > 0) meta["heartbeat_harmonic3"] = format_double(motion.heartbeat_harmonic3);
    if (motion.rate_schedule) {
        std::string text;
        for (const auto& k : motion.rate_schedule->knots) {
            if (!text.empty()) text += ", ";
            text += format_double(k.time_s) + ":" + format_double(k.breathing_hz * 60.0) + ":" +
                    format_double(k.heart_hz * 60.0);
        }
        meta["rate_schedule"] = text;
    }
    meta["system_constant_db"] = format_double(channel.system_constant_db);
    meta["path_loss_exponent"] = format_double(channel.path_loss_exponent);
    meta["noise_std_w"] = format_double(noise.additive_noise_std_w);
    meta["noise_seed"] = format_u64(noise.seed);
    return trace;
}

// Noise level that puts the white-noise floor the given power SNR below the
// oscillating (zero-mean) part of a noiseless trace.
inline double noise_std_for_snr(const Trace& noiseless, double snr_db) {
    noiseless.validate();
    double mean = 0.0;
    for (double v : noiseless.samples) mean += v;
    mean /= static_cast<double>(noiseless.samples.size());
    double var = 0.0;
    for (double v : noiseless.samples) var += (v - mean) * (v - mean);
    var /= static_cast<double>(noiseless.samples.size());
    if (!(var > 0)) throw validation_error("noise_std_for_snr: trace has no oscillating component");
    return std::sqrt(var) / std::pow(10.0, snr_db / 20.0);
}

}  // namespace vls
