#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "vls/config_io.hpp"
#include "vls/errors.hpp"
#include "vls/metrics.hpp"
#include "vls/pipeline.hpp"
#include "vls/simulate.hpp"
#include "vls/textio.hpp"

namespace vls {

// One aggregate row per swept point: the swept value, mean absolute error
// percentage and mean estimation variance per vital kind over the trials,
// and mean received power. Position-grid rows carry (x, y, power) only.
struct SweepRow {
    double value = 0.0;        // swept value, or grid x
    double value2 = 0.0;       // grid y (position sweep only)
    double breathing_error_pct = 0.0;
    double heart_error_pct = 0.0;
    double breathing_variance = 0.0;
    double heart_variance = 0.0;
    double mean_power_w = 0.0;
};

namespace detail {

inline std::uint64_t trial_seed(std::uint64_t base, std::size_t point, int trial) {
    return base + 131071ull * static_cast<std::uint64_t>(point) + static_cast<std::uint64_t>(trial);
}

struct TrialAccumulator {
    double err_b = 0, err_h = 0, var_b = 0, var_h = 0, power = 0;
    int scored_b = 0, scored_h = 0, count = 0;

    void add(const Trace& trace, const VitalsReport& report) {
        double mean = 0;
        for (double v : trace.samples) mean += v;
        power += mean / static_cast<double>(trace.samples.size());
        ++count;
        if (report.breathing.error_pct) {
            err_b += *report.breathing.error_pct;
            ++scored_b;
        }
        if (report.breathing.variance_bpm) var_b += *report.breathing.variance_bpm;
        if (report.heart.error_pct) {
            err_h += *report.heart.error_pct;
            ++scored_h;
        }
        if (report.heart.variance_bpm) var_h += *report.heart.variance_bpm;
    }

    SweepRow finish(double value) const {
        SweepRow row;
        row.value = value;
        row.breathing_error_pct = scored_b ? err_b / scored_b : std::nan("");
        row.heart_error_pct = scored_h ? err_h / scored_h : std::nan("");
        row.breathing_variance = scored_b ? var_b / scored_b : std::nan("");
        row.heart_variance = scored_h ? var_h / scored_h : std::nan("");
        row.mean_power_w = count ? power / count : 0.0;
        return row;
    }
};

}  // namespace detail

inline std::vector<SweepRow> run_sweep(const RunConfig& base) {
    base.validate();
    const SweepSettings& sweep = base.sweep;
    std::vector<SweepRow> rows;

    if (sweep.parameter == SweepParameter::position_grid) {
        // Geometric channel form: subject at (x, y), sensor at the origin
        // looking along +y. Mean power over a short noiseless capture;
        // out-of-view cells report zero power.
        const double capture_s = 6.0;
        const auto count = static_cast<std::size_t>(base.adc.sampling_rate_hz * capture_s);
        for (int iy = 0; iy < sweep.grid_y.steps; ++iy) {
            const double y = sweep.grid_y.steps == 1
                                 ? sweep.grid_y.min
                                 : sweep.grid_y.min + (sweep.grid_y.max - sweep.grid_y.min) * iy /
                                                          (sweep.grid_y.steps - 1);
            for (int ix = 0; ix < sweep.grid_x.steps; ++ix) {
                const double x = sweep.grid_x.steps == 1
                                     ? sweep.grid_x.min
                                     : sweep.grid_x.min + (sweep.grid_x.max - sweep.grid_x.min) * ix /
                                                              (sweep.grid_x.steps - 1);
                SweepRow row;
                row.value = x;
                row.value2 = y;
                const double rest = std::hypot(x, y);
                const double angle = std::atan2(std::abs(x), y);
                double acc = 0.0;
                bool in_view = y > 0 && angle < base.channel.half_power_semi_angle_rad;
                if (in_view) {
                    SubjectMotion motion = base.motion;
                    motion.rest_distance_m = rest;
                    motion.validate();
                    for (std::size_t m = 0; m < count; ++m) {
                        const double t = static_cast<double>(m) / base.adc.sampling_rate_hz;
                        acc += received_power_geometric(base.channel,
                                                        chest_displacement(motion, t), angle, angle);
                    }
                    acc /= static_cast<double>(count);
                }
                row.mean_power_w = acc;
                row.breathing_error_pct = row.heart_error_pct = std::nan("");
                row.breathing_variance = row.heart_variance = std::nan("");
                rows.push_back(row);
            }
        }
        return rows;
    }

    for (std::size_t point = 0; point < sweep.values.size(); ++point) {
        const double value = sweep.values[point];
        RunConfig config = base;
        switch (sweep.parameter) {
            case SweepParameter::distance:
                config.motion.rest_distance_m = value;
                break;
            case SweepParameter::window_size:
                if (value <= 0 || value != std::floor(value) ||
                    !is_power_of_two(static_cast<std::size_t>(value)))
                    throw validation_error("sweep: window_size values must be powers of two");
                config.window_size = static_cast<std::size_t>(value);
                break;
            case SweepParameter::snr:
                config.snr_db = value;
                break;
            default:
                break;
        }
        const PipelineConfig pipeline = config.pipeline();

        detail::TrialAccumulator acc;
        for (int trial = 0; trial < sweep.trials; ++trial) {
            NoiseModel noise = config.noise;
            noise.seed = detail::trial_seed(sweep.seed_base, point, trial);
            if (config.snr_db) {
                NoiseModel silent = noise;
                silent.additive_noise_std_w = 0.0;
                silent.drift_amplitude_w = 0.0;
                silent.interference_tones.clear();
                const Trace clean =
                    synthesize_trace(config.motion, config.channel, config.adc, silent, config.duration_s);
                noise.additive_noise_std_w = noise_std_for_snr(clean, *config.snr_db);
            }
            const Trace trace =
                synthesize_trace(config.motion, config.channel, config.adc, noise, config.duration_s);
            acc.add(trace, estimate_vitals(trace, pipeline));
        }
        rows.push_back(acc.finish(value));
    }
    // rows come out ordered by the swept value however the points ran
    std::stable_sort(rows.begin(), rows.end(),
                     [](const SweepRow& a, const SweepRow& b) { return a.value < b.value; });
    return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows, SweepParameter parameter) {
    std::string out;
    auto cell = [](double v) { return std::isnan(v) ? std::string("nan") : format_double(v); };
    if (parameter == SweepParameter::position_grid) {
        out += "x_m,y_m,mean_power_w\n";
        for (const auto& r : rows)
            out += cell(r.value) + "," + cell(r.value2) + "," + cell(r.mean_power_w) + "\n";
        return out;
    }
    out += std::string(detail::sweep_parameter_name(parameter)) +
           ",breathing_error_pct,heart_error_pct,breathing_variance_bpm2,heart_variance_bpm2,"
           "mean_power_w\n";
    for (const auto& r : rows)
        out += cell(r.value) + "," + cell(r.breathing_error_pct) + "," + cell(r.heart_error_pct) +
               "," + cell(r.breathing_variance) + "," + cell(r.heart_variance) + "," +
               cell(r.mean_power_w) + "\n";
    return out;
}

}  // namespace vls
