// vlsense: simulate reflected-light vitals traces and run the estimation
// pipeline over them. Subcommands: simulate, estimate, sweep, response.
// Exit codes: 0 ok, 1 validation error, 2 I/O error, 3 numerical failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "vls/vls.hpp"

namespace {

vls::RunConfig load_or_default(const std::string& path) {
    if (path.empty()) return vls::RunConfig{};
    return vls::load_config(path);
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw vls::io_error("cannot open '" + path + "' for writing");
    file.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!file) throw vls::io_error("write failed for '" + path + "'");
}

std::string fmt(double v) { return vls::format_double(v); }

// console-friendly 4-decimal rendering; CSV output keeps full precision
std::string fmt4(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
                 std::optional<double> duration, const std::string& out_path,
                 const std::string& csv_path) {
    vls::RunConfig config = load_or_default(config_path);
    if (seed) config.noise.seed = *seed;
    if (duration) config.duration_s = *duration;
    config.validate();

    for (const auto& note : config.motion.warnings())
        std::cerr << "warning: " << note << "\n";

    vls::NoiseModel noise = config.noise;
    if (config.snr_db) {
        vls::NoiseModel silent = noise;
        silent.additive_noise_std_w = 0.0;
        silent.drift_amplitude_w = 0.0;
        silent.interference_tones.clear();
        const vls::Trace clean = vls::synthesize_trace(config.motion, config.channel, config.adc,
                                                       silent, config.duration_s);
        noise.additive_noise_std_w = vls::noise_std_for_snr(clean, *config.snr_db);
    }
    const vls::Trace trace =
        vls::synthesize_trace(config.motion, config.channel, config.adc, noise, config.duration_s);
    vls::write_trace(trace, out_path);

    std::cout << "wrote " << out_path << ": " << trace.samples.size() << " samples @ "
              << fmt(trace.sampling_rate_hz) << " Hz (" << fmt(trace.duration_s()) << " s)\n";
    std::cout << "true rates: breathing " << fmt(trace.truth->breathing_bpm) << " BPM, heart "
              << fmt(trace.truth->heart_bpm) << " BPM\n";
    if (noise.additive_noise_std_w > 0)
        std::cout << "noise std: " << fmt(noise.additive_noise_std_w) << " W (seed "
                  << vls::format_u64(noise.seed) << ")\n";

    if (!csv_path.empty()) {
        std::string csv = "t_s,power_w\n";
        for (std::size_t m = 0; m < trace.samples.size(); ++m)
            csv += fmt(static_cast<double>(m) / trace.sampling_rate_hz) + "," +
                   fmt(trace.samples[m]) + "\n";
        write_text_file(csv_path, csv);
    }
    return 0;
}

int cmd_estimate(const std::string& trace_path, const std::string& config_path,
                 std::optional<std::size_t> window, std::optional<double> overlap,
                 double discard_s, const std::string& filters, const std::string& csv_path) {
    vls::RunConfig config = load_or_default(config_path);
    if (window) config.window_size = *window;
    if (overlap) config.window_overlap = *overlap;
    if (filters == "paper") config.filter_mode = vls::FilterMode::paper;
    else if (filters == "designed") config.filter_mode = vls::FilterMode::designed;
    else if (!filters.empty())
        throw vls::validation_error("--filters must be designed or paper");

    vls::Trace trace = vls::read_trace(trace_path);
    if (discard_s > 0) {
        const auto drop = static_cast<std::size_t>(discard_s * trace.sampling_rate_hz);
        if (drop >= trace.samples.size())
            throw vls::validation_error("--discard removes the whole trace");
        trace.samples.erase(trace.samples.begin(),
                            trace.samples.begin() + static_cast<std::ptrdiff_t>(drop));
    }
    // the pipeline runs at the trace's own rate
    config.adc.sampling_rate_hz = trace.sampling_rate_hz;
    const vls::PipelineConfig pipeline = config.pipeline();
    const vls::VitalsReport report = vls::estimate_vitals(trace, pipeline);

    std::cout << trace_path << ": " << trace.samples.size() << " samples @ "
              << fmt(trace.sampling_rate_hz) << " Hz\n";
    std::cout << "window " << report.window_size << " samples ("
              << fmt(report.window_size / trace.sampling_rate_hz) << " s), overlap "
              << fmt(pipeline.window_overlap * 100) << "%, bin width "
              << fmt4(report.bin_width_bpm) << " BPM\n";
    for (const auto& w : report.per_window)
        std::cout << "  window " << w.window_index << " " << vls::to_string(w.kind) << " "
                  << fmt4(w.bpm) << " BPM" << (w.confident ? "" : " [low confidence]") << "\n";
    for (vls::VitalKind kind : {vls::VitalKind::breathing, vls::VitalKind::heart}) {
        const auto& s = report.stats(kind);
        std::cout << vls::to_string(kind) << ": ";
        if (s.mean_bpm) {
            std::cout << "mean " << fmt4(*s.mean_bpm) << " BPM, variance "
                      << fmt4(*s.variance_bpm);
            if (s.reference_bpm) {
                std::cout << ", truth " << fmt4(*s.reference_bpm) << " BPM";
                if (s.error_pct) std::cout << ", error " << fmt4(*s.error_pct) << "%";
            }
            std::cout << "\n";
        } else {
            std::cout << "no confident estimate\n";
        }
    }

    if (!csv_path.empty()) {
        std::string csv = "window,start_s,kind,bpm,confident\n";
        const double stride_s =
            static_cast<double>(pipeline.stride()) / trace.sampling_rate_hz;
        for (const auto& w : report.per_window)
            csv += std::to_string(w.window_index) + "," + fmt(w.window_index * stride_s) + "," +
                   vls::to_string(w.kind) + "," + fmt(w.bpm) + "," +
                   (w.confident ? "1" : "0") + "\n";
        write_text_file(csv_path, csv);
    }
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::string& values, std::optional<int> trials,
              std::optional<std::uint64_t> seed, const std::string& csv_path) {
    vls::RunConfig config = load_or_default(config_path);
    if (!param.empty()) config.sweep.parameter = vls::detail::parse_sweep_parameter(param);
    if (!values.empty()) config.sweep.values = vls::detail::parse_double_list(values);
    if (trials) config.sweep.trials = *trials;
    if (seed) config.sweep.seed_base = *seed;

    const auto rows = vls::run_sweep(config);
    const std::string csv = vls::sweep_csv(rows, config.sweep.parameter);
    if (!csv_path.empty()) write_text_file(csv_path, csv);
    else std::cout << csv;
    return 0;
}

int cmd_response(const std::string& config_path, const std::string& which,
                 const std::string& mode, int points, const std::string& csv_path) {
    vls::RunConfig config = load_or_default(config_path);
    if (mode == "paper") config.filter_mode = vls::FilterMode::paper;
    else if (mode == "designed") config.filter_mode = vls::FilterMode::designed;
    else if (!mode.empty()) throw vls::validation_error("--mode must be designed or paper");
    if (points < 2) throw vls::validation_error("--points must be >= 2");

    const bool breathing = which != "heart";
    if (which != "heart" && which != "breathing")
        throw vls::validation_error("--filter must be breathing or heart");
    const vls::PipelineConfig pipeline = config.pipeline();
    const vls::FilterCoefficients& coeffs =
        breathing ? pipeline.breathing_filter : pipeline.heart_filter;
    const double fs = pipeline.sampling_rate_hz;

    const auto rep = vls::stability_report(coeffs);
    std::cout << "filter '" << coeffs.label << "': "
              << (rep.stable ? "stable" : "UNSTABLE/marginal") << " (max pole modulus "
              << fmt(rep.max_pole_modulus) << ", margin " << fmt(rep.margin) << ")\n";

    std::string csv = "freq_hz,bpm,magnitude_db\n";
    for (int i = 0; i < points; ++i) {
        const double f = fs / 2.0 * i / (points - 1);
        const double mag = std::abs(vls::frequency_response(coeffs, f, fs));
        const double db = 20.0 * std::log10(std::max(mag, 1e-300));
        csv += fmt(f) + "," + fmt(f * 60.0) + "," + fmt(db) + "\n";
    }
    if (!csv_path.empty()) write_text_file(csv_path, csv);
    else std::cout << csv;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"visible-light vital signs: simulator and estimation pipeline"};
    app.require_subcommand(1);

    std::string config_path, csv_path, out_path = "trace.txt";
    std::optional<std::uint64_t> seed;
    std::optional<double> duration;

    auto* sim = app.add_subcommand("simulate", "synthesize a received-power trace");
    sim->add_option("--config", config_path, "run configuration (INI)");
    sim->add_option("--seed", seed, "noise seed override");
    sim->add_option("--csv", csv_path, "also dump t,power rows to CSV");
    sim->add_option("--duration", duration, "duration in seconds");
    sim->add_option("-o,--out", out_path, "output trace path");

    std::string trace_path, filters;
    std::optional<std::size_t> window;
    std::optional<double> overlap;
    double discard_s = 0.0;
    auto* est = app.add_subcommand("estimate", "estimate vitals from a trace file");
    est->add_option("trace", trace_path, "trace file")->required();
    est->add_option("--config", config_path, "run configuration (INI)");
    est->add_option("--seed", seed, "unused; estimation is deterministic");
    est->add_option("--csv", csv_path, "per-window CSV output");
    est->add_option("--window", window, "window size override (power of two)");
    est->add_option("--overlap", overlap, "window overlap fraction [0,1)");
    est->add_option("--discard", discard_s, "drop this many warm-up seconds");
    est->add_option("--filters", filters, "designed|paper");

    std::string param, values;
    std::optional<int> trials;
    auto* swp = app.add_subcommand("sweep", "sweep a parameter, emit aggregate CSV");
    swp->add_option("--config", config_path, "run configuration (INI)");
    swp->add_option("--seed", seed, "seed base override");
    swp->add_option("--csv", csv_path, "CSV output path (default stdout)");
    swp->add_option("--param", param, "distance|window_size|snr|position_grid");
    swp->add_option("--values", values, "comma-separated swept values");
    swp->add_option("--trials", trials, "trials per point");

    std::string which = "breathing", mode;
    int points = 513;
    auto* rsp = app.add_subcommand("response", "filter frequency response CSV");
    rsp->add_option("--config", config_path, "run configuration (INI)");
    rsp->add_option("--seed", seed, "unused");
    rsp->add_option("--csv", csv_path, "CSV output path (default stdout)");
    rsp->add_option("--filter", which, "breathing|heart");
    rsp->add_option("--mode", mode, "designed|paper");
    rsp->add_option("--points", points, "number of frequency samples");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(config_path, seed, duration, out_path, csv_path);
        if (est->parsed())
            return cmd_estimate(trace_path, config_path, window, overlap, discard_s, filters,
                                csv_path);
        if (swp->parsed()) return cmd_sweep(config_path, param, values, trials, seed, csv_path);
        if (rsp->parsed()) return cmd_response(config_path, which, mode, points, csv_path);
    } catch (const vls::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const vls::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const vls::numeric_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const vls::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
