#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vls/errors.hpp"
#include "vls/fft.hpp"
#include "vls/filter.hpp"
#include "vls/metrics.hpp"
#include "vls/trace.hpp"
#include "vls/window.hpp"

namespace vls {

// Search band in beats (or breaths) per minute.
struct BandSpec {
    double low_bpm = 0.0;
    double high_bpm = 0.0;
    VitalKind kind = VitalKind::breathing;

    double low_hz() const { return low_bpm / 60.0; }
    double high_hz() const { return high_bpm / 60.0; }

    void validate(double sampling_rate_hz) const {
        if (!(low_bpm > 0) || !(high_bpm > low_bpm))
            throw validation_error("band: need 0 < low < high (got " + std::to_string(low_bpm) +
                                   ", " + std::to_string(high_bpm) + " BPM)");
        if (!(high_hz() < sampling_rate_hz / 2.0))
            throw validation_error("band: high edge must stay below Nyquist");
    }
};

inline BandSpec default_breathing_band() { return {10.0, 60.0, VitalKind::breathing}; }
inline BandSpec default_heart_band() { return {30.0, 200.0, VitalKind::heart}; }

struct PipelineConfig {
    std::size_t window_size = 2048;
    double window_overlap = 0.0;  // fraction of the window shared by neighbors
    double sampling_rate_hz = 100.0;
    BandSpec breathing_band = default_breathing_band();
    BandSpec heart_band = default_heart_band();
    FilterCoefficients breathing_filter;
    FilterCoefficients heart_filter;
    // subtract the window mean before filtering; zero-initial-condition
    // filtering of a large DC offset otherwise rings the band edges
    bool detrend = true;
    // a window is confident when its peak is at least this many times the
    // median in-band magnitude
    double confidence_ratio = 10.0;

    void validate() const {
        if (!is_power_of_two(window_size))
            throw validation_error("pipeline: window size must be a power of two");
        if (window_size < 2) throw validation_error("pipeline: window size must be >= 2");
        if (!(window_overlap >= 0.0) || window_overlap >= 1.0)
            throw validation_error("pipeline: overlap must lie in [0, 1)");
        if (!(sampling_rate_hz > 0)) throw validation_error("pipeline: sampling rate must be positive");
        breathing_band.validate(sampling_rate_hz);
        heart_band.validate(sampling_rate_hz);
        if (!(confidence_ratio >= 1.0))
            throw validation_error("pipeline: confidence ratio must be >= 1");
    }

    std::size_t stride() const {
        const auto s = static_cast<std::size_t>(
            std::llround(static_cast<double>(window_size) * (1.0 - window_overlap)));
        return std::max<std::size_t>(1, s);
    }
};

// Default pipeline: filters generated from the band edges.
inline PipelineConfig default_pipeline(double sampling_rate_hz = 100.0, std::size_t window_size = 2048) {
    PipelineConfig config;
    config.window_size = window_size;
    config.sampling_rate_hz = sampling_rate_hz;
    config.breathing_filter = designed_bandpass(config.breathing_band.low_hz(),
                                                config.breathing_band.high_hz(), sampling_rate_hz);
    config.heart_filter = designed_bandpass(config.heart_band.low_hz(),
                                            config.heart_band.high_hz(), sampling_rate_hz);
    config.breathing_filter.label = "designed-breathing";
    config.heart_filter.label = "designed-heart";
    return config;
}

// Published-preset pipeline (coefficients behind the instability override).
inline PipelineConfig paper_pipeline(double sampling_rate_hz = 100.0, std::size_t window_size = 2048) {
    PipelineConfig config = default_pipeline(sampling_rate_hz, window_size);
    config.breathing_filter = paper_breathing_filter();
    config.heart_filter = paper_heart_filter();
    return config;
}

struct PeakResult {
    std::size_t bin = 0;
    double frequency_hz = 0.0;
};

// Range of spectrum bins whose center frequency falls inside [low, high];
// bin 0 (DC) is never eligible.
inline std::pair<std::size_t, std::size_t> band_bins(const BandSpec& band, std::size_t fft_size,
                                                     double sampling_rate_hz) {
    const double bin_hz = sampling_rate_hz / static_cast<double>(fft_size);
    auto lo = static_cast<std::size_t>(std::ceil(band.low_hz() / bin_hz - 1e-12));
    const auto hi_raw = static_cast<double>(std::floor(band.high_hz() / bin_hz + 1e-12));
    lo = std::max<std::size_t>(lo, 1);
    const auto hi = std::min<std::size_t>(static_cast<std::size_t>(hi_raw), fft_size / 2);
    if (hi < lo)
        throw validation_error("peak_in_band: band " + std::to_string(band.low_bpm) + "-" +
                               std::to_string(band.high_bpm) + " BPM maps to no bins at N=" +
                               std::to_string(fft_size));
    return {lo, hi};
}

// Highest-magnitude tone inside the band; ties break toward the lower bin.
inline PeakResult peak_in_band(std::span<const std::complex<double>> spectrum, const BandSpec& band,
                               double sampling_rate_hz) {
    if (spectrum.empty()) throw validation_error("peak_in_band: empty spectrum");
    const auto [lo, hi] = band_bins(band, spectrum.size(), sampling_rate_hz);
    std::size_t best = lo;
    double best_mag = std::abs(spectrum[lo]);
    for (std::size_t k = lo + 1; k <= hi; ++k) {
        const double mag = std::abs(spectrum[k]);
        if (mag > best_mag) {
            best = k;
            best_mag = mag;
        }
    }
    return {best, static_cast<double>(best) * sampling_rate_hz / static_cast<double>(spectrum.size())};
}

// BPM width of one FFT bin.
inline double bpm_resolution(const PipelineConfig& config) {
    return config.sampling_rate_hz / static_cast<double>(config.window_size) * 60.0;
}

namespace detail {

inline double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

struct WindowOutcome {
    double bpm;
    bool confident;
};

inline WindowOutcome process_window(std::span<const double> segment, const PipelineConfig& config,
                                    const FilterCoefficients& filter, const BandSpec& band,
                                    std::span<const double> hann) {
    std::vector<double> samples(segment.begin(), segment.end());
    double raw_l1 = 0.0;  // ceiling on any spectral magnitude of the raw window
    for (double v : samples) raw_l1 += std::abs(v);
    if (config.detrend) {
        double mean = 0.0;
        for (double v : samples) mean += v;
        mean /= static_cast<double>(samples.size());
        for (double& v : samples) v -= mean;
    }
    const std::vector<double> filtered = iir_filter(filter, samples);
    const std::vector<double> shaped = apply_window(hann, filtered);
    const std::vector<std::complex<double>> spectrum = fft(shaped);

    const auto peak = peak_in_band(spectrum, band, config.sampling_rate_hz);
    const auto [lo, hi] = band_bins(band, spectrum.size(), config.sampling_rate_hz);
    std::vector<double> magnitudes;
    magnitudes.reserve(hi - lo + 1);
    for (std::size_t k = lo; k <= hi; ++k) magnitudes.push_back(std::abs(spectrum[k]));
    const double peak_mag = std::abs(spectrum[peak.bin]);
    // a peak nine orders below the raw window's spectral ceiling is rounding
    // residue (a constant trace leaves sub-ulp dust after detrending)
    const bool confident = peak_mag > 1e-9 * raw_l1 &&
                           peak_mag >= config.confidence_ratio * median(std::move(magnitudes));
    return {peak.frequency_hz * 60.0, confident};
}

}  // namespace detail

// Full estimation pass: split the trace into windows, then per window and
// per vital kind run band-pass filter -> Hanning -> FFT -> in-band argmax.
// Windows are filtered independently from zero initial conditions.
inline VitalsReport estimate_vitals(const Trace& trace, const PipelineConfig& config) {
    trace.validate();
    config.validate();
    if (trace.samples.size() < config.window_size)
        throw validation_error("estimate_vitals: trace (" + std::to_string(trace.samples.size()) +
                               " samples) is shorter than one window of " +
                               std::to_string(config.window_size));
    if (trace.sampling_rate_hz != config.sampling_rate_hz)
        throw validation_error("estimate_vitals: trace sampled at " +
                               std::to_string(trace.sampling_rate_hz) + " Hz but pipeline expects " +
                               std::to_string(config.sampling_rate_hz));

    const std::vector<double> hann = hanning_window(config.window_size);
    VitalsReport report;
    report.window_size = config.window_size;
    report.bin_width_bpm = bpm_resolution(config);

    const std::size_t stride = config.stride();
    std::vector<double> confident_bpm[2];
    std::size_t window_index = 0;
    for (std::size_t start = 0; start + config.window_size <= trace.samples.size();
         start += stride, ++window_index) {
        const std::span<const double> segment(trace.samples.data() + start, config.window_size);
        for (VitalKind kind : {VitalKind::breathing, VitalKind::heart}) {
            const bool is_breathing = kind == VitalKind::breathing;
            const auto outcome = detail::process_window(
                segment, config, is_breathing ? config.breathing_filter : config.heart_filter,
                is_breathing ? config.breathing_band : config.heart_band, hann);
            report.per_window.push_back({window_index, kind, outcome.bpm, outcome.confident});
            if (outcome.confident) confident_bpm[is_breathing ? 0 : 1].push_back(outcome.bpm);
        }
    }

    for (VitalKind kind : {VitalKind::breathing, VitalKind::heart}) {
        const auto& values = confident_bpm[kind == VitalKind::breathing ? 0 : 1];
        auto& stats = report.stats(kind);
        if (!values.empty()) {
            double mean = 0.0;
            for (double v : values) mean += v;
            mean /= static_cast<double>(values.size());
            double var = 0.0;
            for (double v : values) var += (v - mean) * (v - mean);
            var /= static_cast<double>(values.size());
            stats.mean_bpm = mean;
            stats.variance_bpm = var;
        }
        if (trace.truth) {
            stats.reference_bpm =
                kind == VitalKind::breathing ? trace.truth->breathing_bpm : trace.truth->heart_bpm;
            if (stats.mean_bpm && *stats.reference_bpm > 0)
                stats.error_pct = absolute_error_pct(*stats.mean_bpm, *stats.reference_bpm);
        }
    }
    return report;
}

}  // namespace vls
