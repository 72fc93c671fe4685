#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vls/errors.hpp"
#include "vls/motion.hpp"
#include "vls/optics.hpp"
#include "vls/pipeline.hpp"
#include "vls/simulate.hpp"
#include "vls/textio.hpp"

namespace vls {

// Run configuration, stored as flat INI text ('key = value' under [section]
// headers, '#'/';' comments). Loading materializes every default, so a saved
// file is fully explicit, and an empty file loads to the stock setup:
// Fs = 100 Hz, N = 2048, bands 10-60 / 30-200 BPM, 40 cm subject.

enum class FilterMode { designed, paper };

struct FilterDesignParams {
    int order = 4;
    double stopband_db = 40.0;
    double transition_ratio = 2.0;
};

enum class SweepParameter { distance, window_size, snr, position_grid };

struct GridAxis {
    double min = 0.0;
    double max = 0.0;
    int steps = 1;
};

struct SweepSettings {
    SweepParameter parameter = SweepParameter::distance;
    std::vector<double> values{0.3, 0.4, 0.6, 0.9, 1.2};
    GridAxis grid_x{-0.5, 0.5, 11};
    GridAxis grid_y{0.2, 1.2, 11};
    int trials = 10;
    std::uint64_t seed_base = 1;
};

struct RunConfig {
    // [pipeline]
    std::size_t window_size = 2048;
    double window_overlap = 0.0;
    bool detrend = true;
    double confidence_ratio = 10.0;
    BandSpec breathing_band = default_breathing_band();
    BandSpec heart_band = default_heart_band();
    FilterMode filter_mode = FilterMode::designed;
    FilterDesignParams design;
    // [channel]
    LambertianChannel channel;
    // [subject]
    SubjectMotion motion;
    // [noise]
    NoiseModel noise;
    std::optional<double> snr_db;  // when set, overrides additive_noise_std_w
    // [adc]
    AdcModel adc;
    // [simulate]
    double duration_s = 60.0;
    // [sweep]
    SweepSettings sweep;

    PipelineConfig pipeline() const {
        PipelineConfig p;
        p.window_size = window_size;
        p.window_overlap = window_overlap;
        p.sampling_rate_hz = adc.sampling_rate_hz;
        p.breathing_band = breathing_band;
        p.heart_band = heart_band;
        p.detrend = detrend;
        p.confidence_ratio = confidence_ratio;
        if (filter_mode == FilterMode::paper) {
            p.breathing_filter = paper_breathing_filter();
            p.heart_filter = paper_heart_filter();
        } else {
            p.breathing_filter =
                designed_bandpass(breathing_band.low_hz(), breathing_band.high_hz(),
                                  adc.sampling_rate_hz, design.order, design.stopband_db,
                                  design.transition_ratio);
            p.breathing_filter.label = "designed-breathing";
            p.heart_filter =
                designed_bandpass(heart_band.low_hz(), heart_band.high_hz(), adc.sampling_rate_hz,
                                  design.order, design.stopband_db, design.transition_ratio);
            p.heart_filter.label = "designed-heart";
        }
        return p;
    }

    void validate() const {
        pipeline().validate();
        channel.validate();
        motion.validate();
        noise.validate();
        adc.validate();
        if (!(duration_s > 0)) throw validation_error("config: duration must be positive");
        if (sweep.trials < 1) throw validation_error("config: sweep trials must be >= 1");
        if (sweep.parameter != SweepParameter::position_grid && sweep.values.empty())
            throw validation_error("config: sweep values must be non-empty");
        if (sweep.grid_x.steps < 1 || sweep.grid_y.steps < 1)
            throw validation_error("config: grid steps must be >= 1");
    }
};

namespace detail {

inline bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw validation_error("expected boolean, got '" + v + "'");
}

inline std::vector<double> parse_double_list(std::string_view text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        const auto piece = trim(text.substr(pos, comma - pos));
        if (!piece.empty()) out.push_back(parse_double(piece));
        pos = comma + 1;
    }
    return out;
}

// "a:b:c" triples separated by commas
inline std::vector<std::array<double, 3>> parse_triples(std::string_view text) {
    std::vector<std::array<double, 3>> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        const auto piece = trim(text.substr(pos, comma - pos));
        pos = comma + 1;
        if (piece.empty()) continue;
        const auto c1 = piece.find(':');
        const auto c2 = piece.find(':', c1 == std::string_view::npos ? piece.size() : c1 + 1);
        if (c1 == std::string_view::npos || c2 == std::string_view::npos)
            throw validation_error("expected a:b:c triple, got '" + std::string(piece) + "'");
        out.push_back({parse_double(trim(piece.substr(0, c1))),
                       parse_double(trim(piece.substr(c1 + 1, c2 - c1 - 1))),
                       parse_double(trim(piece.substr(c2 + 1)))});
    }
    return out;
}

// "hz:amp" pairs separated by commas
inline std::vector<std::pair<double, double>> parse_pairs(std::string_view text) {
    std::vector<std::pair<double, double>> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        const auto piece = trim(text.substr(pos, comma - pos));
        pos = comma + 1;
        if (piece.empty()) continue;
        const auto colon = piece.find(':');
        if (colon == std::string_view::npos)
            throw validation_error("expected hz:amplitude pair, got '" + std::string(piece) + "'");
        out.emplace_back(parse_double(trim(piece.substr(0, colon))),
                         parse_double(trim(piece.substr(colon + 1))));
    }
    return out;
}

inline GridAxis parse_grid_axis(const std::string& v) {
    const auto t = parse_triples(v);
    if (t.size() != 1) throw validation_error("expected min:max:steps, got '" + v + "'");
    GridAxis axis{t[0][0], t[0][1], static_cast<int>(t[0][2])};
    if (axis.steps < 1) throw validation_error("grid steps must be >= 1");
    return axis;
}

inline std::string format_grid_axis(const GridAxis& axis) {
    return format_double(axis.min) + ":" + format_double(axis.max) + ":" +
           std::to_string(axis.steps);
}

inline SweepParameter parse_sweep_parameter(const std::string& v) {
    if (v == "distance") return SweepParameter::distance;
    if (v == "window_size") return SweepParameter::window_size;
    if (v == "snr") return SweepParameter::snr;
    if (v == "position_grid" || v == "position-grid") return SweepParameter::position_grid;
    throw validation_error("unknown sweep parameter '" + v +
                           "' (expected distance|window_size|snr|position_grid)");
}

inline const char* sweep_parameter_name(SweepParameter p) {
    switch (p) {
        case SweepParameter::distance: return "distance";
        case SweepParameter::window_size: return "window_size";
        case SweepParameter::snr: return "snr";
        default: return "position_grid";
    }
}

}  // namespace detail

inline std::string config_to_string(const RunConfig& c) {
    std::string out;
    auto put = [&](const std::string& key, const std::string& value) {
        out += key + " = " + value + "\n";
    };
    out += "format_version = 1\n\n";

    out += "[pipeline]\n";
    put("window_size", std::to_string(c.window_size));
    put("window_overlap", format_double(c.window_overlap));
    put("detrend", c.detrend ? "true" : "false");
    put("confidence_ratio", format_double(c.confidence_ratio));
    put("breathing_band_low_bpm", format_double(c.breathing_band.low_bpm));
    put("breathing_band_high_bpm", format_double(c.breathing_band.high_bpm));
    put("heart_band_low_bpm", format_double(c.heart_band.low_bpm));
    put("heart_band_high_bpm", format_double(c.heart_band.high_bpm));
    put("filter_mode", c.filter_mode == FilterMode::paper ? "paper" : "designed");
    put("design_order", std::to_string(c.design.order));
    put("design_stopband_db", format_double(c.design.stopband_db));
    put("design_transition_ratio", format_double(c.design.transition_ratio));

    out += "\n[channel]\n";
    put("transmit_power_w", format_double(c.channel.transmit_power_w));
    put("detector_area_m2", format_double(c.channel.detector_area_m2));
    put("half_power_semi_angle_deg",
        format_double(c.channel.half_power_semi_angle_rad * 180.0 / std::numbers::pi));
    put("path_loss_exponent", format_double(c.channel.path_loss_exponent));
    put("system_constant_db", format_double(c.channel.system_constant_db));

    out += "\n[subject]\n";
    put("rest_distance_m", format_double(c.motion.rest_distance_m));
    put("breathing_amplitude_m", format_double(c.motion.breathing_amplitude_m));
    put("breathing_bpm", format_double(c.motion.breathing_rate_hz * 60.0));
    put("breathing_phase_rad", format_double(c.motion.breathing_phase_rad));
    put("heartbeat_amplitude_m", format_double(c.motion.heartbeat_amplitude_m));
    put("heartbeat_bpm", format_double(c.motion.heartbeat_rate_hz * 60.0));
    put("heartbeat_phase_rad", format_double(c.motion.heartbeat_phase_rad));
    put("heartbeat_harmonic2", format_double(c.motion.heartbeat_harmonic2));
    put("heartbeat_harmonic3", format_double(c.motion.heartbeat_harmonic3));
    std::string schedule;
    if (c.motion.rate_schedule) {
        for (const auto& k : c.motion.rate_schedule->knots) {
            if (!schedule.empty()) schedule += ", ";
            schedule += format_double(k.time_s) + ":" + format_double(k.breathing_hz * 60.0) + ":" +
                        format_double(k.heart_hz * 60.0);
        }
    }
    put("schedule", schedule);

    out += "\n[noise]\n";
    put("additive_std_w", format_double(c.noise.additive_noise_std_w));
    put("snr_db", c.snr_db ? format_double(*c.snr_db) : "");
    put("drift_amplitude_w", format_double(c.noise.drift_amplitude_w));
    put("drift_period_s", format_double(c.noise.drift_period_s));
    std::string tones;
    for (const auto& [hz, amp] : c.noise.interference_tones) {
        if (!tones.empty()) tones += ", ";
        tones += format_double(hz) + ":" + format_double(amp);
    }
    put("interference", tones);
    put("seed", format_u64(c.noise.seed));

    out += "\n[adc]\n";
    put("sampling_rate_hz", format_double(c.adc.sampling_rate_hz));
    put("bit_depth", c.adc.bit_depth ? std::to_string(*c.adc.bit_depth) : "");
    put("full_scale_w", format_double(c.adc.full_scale_w));

    out += "\n[simulate]\n";
    put("duration_s", format_double(c.duration_s));

    out += "\n[sweep]\n";
    put("parameter", detail::sweep_parameter_name(c.sweep.parameter));
    std::string values;
    for (double v : c.sweep.values) {
        if (!values.empty()) values += ", ";
        values += format_double(v);
    }
    put("values", values);
    put("grid_x", detail::format_grid_axis(c.sweep.grid_x));
    put("grid_y", detail::format_grid_axis(c.sweep.grid_y));
    put("trials", std::to_string(c.sweep.trials));
    put("seed_base", format_u64(c.sweep.seed_base));
    return out;
}

inline RunConfig config_from_string(std::string_view text, const std::string& origin = "<string>",
                                    bool strict = true) {
    RunConfig config;
    std::vector<std::string> unknown;
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;

    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#' || line.front() == ';') continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw parse_error(origin + ": malformed section header", line_no);
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw parse_error(origin + ": expected key = value", line_no);
        const std::string key{trim(line.substr(0, eq))};
        const std::string value{trim(line.substr(eq + 1))};
        const std::string qualified = section.empty() ? key : section + "." + key;

        try {
            bool handled = true;
            if (qualified == "format_version") {
                if (value != "1") throw validation_error("unsupported format_version " + value);
            } else if (qualified == "pipeline.window_size") {
                config.window_size = static_cast<std::size_t>(parse_u64(value));
            } else if (qualified == "pipeline.window_overlap") {
                config.window_overlap = parse_double(value);
            } else if (qualified == "pipeline.detrend") {
                config.detrend = detail::parse_bool(value);
            } else if (qualified == "pipeline.confidence_ratio") {
                config.confidence_ratio = parse_double(value);
            } else if (qualified == "pipeline.breathing_band_low_bpm") {
                config.breathing_band.low_bpm = parse_double(value);
            } else if (qualified == "pipeline.breathing_band_high_bpm") {
                config.breathing_band.high_bpm = parse_double(value);
            } else if (qualified == "pipeline.heart_band_low_bpm") {
                config.heart_band.low_bpm = parse_double(value);
            } else if (qualified == "pipeline.heart_band_high_bpm") {
                config.heart_band.high_bpm = parse_double(value);
            } else if (qualified == "pipeline.filter_mode") {
                if (value == "designed") config.filter_mode = FilterMode::designed;
                else if (value == "paper") config.filter_mode = FilterMode::paper;
                else throw validation_error("filter_mode must be designed|paper, got '" + value + "'");
            } else if (qualified == "pipeline.design_order") {
                config.design.order = static_cast<int>(parse_u64(value));
            } else if (qualified == "pipeline.design_stopband_db") {
                config.design.stopband_db = parse_double(value);
            } else if (qualified == "pipeline.design_transition_ratio") {
                config.design.transition_ratio = parse_double(value);
            } else if (qualified == "channel.transmit_power_w") {
                config.channel.transmit_power_w = parse_double(value);
            } else if (qualified == "channel.detector_area_m2") {
                config.channel.detector_area_m2 = parse_double(value);
            } else if (qualified == "channel.half_power_semi_angle_deg") {
                config.channel.half_power_semi_angle_rad = parse_double(value) * std::numbers::pi / 180.0;
            } else if (qualified == "channel.path_loss_exponent") {
                config.channel.path_loss_exponent = parse_double(value);
            } else if (qualified == "channel.system_constant_db") {
                config.channel.system_constant_db = parse_double(value);
            } else if (qualified == "subject.rest_distance_m") {
                config.motion.rest_distance_m = parse_double(value);
            } else if (qualified == "subject.breathing_amplitude_m") {
                config.motion.breathing_amplitude_m = parse_double(value);
            } else if (qualified == "subject.breathing_bpm") {
                config.motion.breathing_rate_hz = parse_double(value) / 60.0;
            } else if (qualified == "subject.breathing_phase_rad") {
                config.motion.breathing_phase_rad = parse_double(value);
            } else if (qualified == "subject.heartbeat_amplitude_m") {
                config.motion.heartbeat_amplitude_m = parse_double(value);
            } else if (qualified == "subject.heartbeat_bpm") {
                config.motion.heartbeat_rate_hz = parse_double(value) / 60.0;
            } else if (qualified == "subject.heartbeat_phase_rad") {
                config.motion.heartbeat_phase_rad = parse_double(value);
            } else if (qualified == "subject.heartbeat_harmonic2") {
                config.motion.heartbeat_harmonic2 = parse_double(value);
            } else if (qualified == "subject.heartbeat_harmonic3") {
                config.motion.heartbeat_harmonic3 = parse_double(value);
            } else if (qualified == "subject.schedule") {
                if (value.empty()) {
                    config.motion.rate_schedule.reset();
                } else {
                    RateSchedule schedule;
                    for (const auto& t : detail::parse_triples(value))
                        schedule.knots.push_back({t[0], t[1] / 60.0, t[2] / 60.0});
                    config.motion.rate_schedule = std::move(schedule);
                }
            } else if (qualified == "noise.additive_std_w") {
                config.noise.additive_noise_std_w = parse_double(value);
            } else if (qualified == "noise.snr_db") {
                if (value.empty()) config.snr_db.reset();
                else config.snr_db = parse_double(value);
            } else if (qualified == "noise.drift_amplitude_w") {
                config.noise.drift_amplitude_w = parse_double(value);
            } else if (qualified == "noise.drift_period_s") {
                config.noise.drift_period_s = parse_double(value);
            } else if (qualified == "noise.interference") {
                config.noise.interference_tones = detail::parse_pairs(value);
            } else if (qualified == "noise.seed") {
                config.noise.seed = parse_u64(value);
            } else if (qualified == "adc.sampling_rate_hz") {
                config.adc.sampling_rate_hz = parse_double(value);
            } else if (qualified == "adc.bit_depth") {
                if (value.empty()) config.adc.bit_depth.reset();
                else config.adc.bit_depth = static_cast<int>(parse_u64(value));
            } else if (qualified == "adc.full_scale_w") {
                config.adc.full_scale_w = parse_double(value);
            } else if (qualified == "simulate.duration_s") {
                config.duration_s = parse_double(value);
            } else if (qualified == "sweep.parameter") {
                config.sweep.parameter = detail::parse_sweep_parameter(value);
            } else if (qualified == "sweep.values") {
                config.sweep.values = detail::parse_double_list(value);
            } else if (qualified == "sweep.grid_x") {
                config.sweep.grid_x = detail::parse_grid_axis(value);
            } else if (qualified == "sweep.grid_y") {
                config.sweep.grid_y = detail::parse_grid_axis(value);
            } else if (qualified == "sweep.trials") {
                config.sweep.trials = static_cast<int>(parse_u64(value));
            } else if (qualified == "sweep.seed_base") {
                config.sweep.seed_base = parse_u64(value);
            } else {
                handled = false;
            }
            if (!handled) unknown.push_back(qualified);
        } catch (const validation_error& e) {
            throw parse_error(origin + ": key '" + qualified + "': " + e.what(), line_no);
        }
    }

    if (strict && !unknown.empty()) {
        std::string list;
        for (const auto& k : unknown) {
            if (!list.empty()) list += ", ";
            list += k;
        }
        throw parse_error(origin + ": unknown keys: " + list, line_no);
    }

    // materialize + sanity-check everything now, not at first use
    config.validate();
    return config;
}

inline void save_config(const RunConfig& config, const std::string& path) {
    const std::string text = config_to_string(config);
    std::ofstream file(path, std::ios::binary);
    if (!file) throw io_error("cannot open '" + path + "' for writing");
    file.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!file) throw io_error("write failed for '" + path + "'");
}

inline RunConfig load_config(const std::string& path, bool strict = true) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw io_error("cannot open '" + path + "' for reading");
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return config_from_string(buffer.str(), path, strict);
}

}  // namespace vls
