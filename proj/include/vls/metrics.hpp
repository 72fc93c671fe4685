#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vls/errors.hpp"

namespace vls {

enum class VitalKind { breathing, heart };

inline const char* to_string(VitalKind kind) {
    return kind == VitalKind::breathing ? "breathing" : "heart";
}

struct WindowEstimate {
    std::size_t window_index = 0;
    VitalKind kind = VitalKind::breathing;
    double bpm = 0.0;
    bool confident = true;
};

// Aggregates for one vital kind. mean/variance are over the confident
// windows only and absent when every window was flagged.
struct KindStats {
    std::optional<double> mean_bpm;
    std::optional<double> variance_bpm;  // population variance
    std::optional<double> reference_bpm;
    std::optional<double> error_pct;
};

struct VitalsReport {
    std::vector<WindowEstimate> per_window;
    KindStats breathing;
    KindStats heart;
    std::size_t window_size = 0;
    double bin_width_bpm = 0.0;

    const KindStats& stats(VitalKind kind) const {
        return kind == VitalKind::breathing ? breathing : heart;
    }
    KindStats& stats(VitalKind kind) { return kind == VitalKind::breathing ? breathing : heart; }
};

// 100 * |estimate - reference| / reference.
inline double absolute_error_pct(double estimate_bpm, double reference_bpm) {
    if (!(reference_bpm > 0))
        throw validation_error("absolute_error_pct: reference must be positive");
    return 100.0 * std::abs(estimate_bpm - reference_bpm) / reference_bpm;
}

// Fraction of trials whose breathing AND heart estimates both land within
// tolerance_bpm of their references. A trial with no confident estimate for
// a kind counts as outside tolerance.
inline double ensemble_accuracy(std::span<const VitalsReport> trials, double tolerance_bpm) {
    if (trials.empty()) throw validation_error("ensemble_accuracy: no trials");
    if (tolerance_bpm < 0) throw validation_error("ensemble_accuracy: tolerance must be >= 0");
    std::size_t hits = 0;
    for (const auto& trial : trials) {
        if (!trial.breathing.reference_bpm || !trial.heart.reference_bpm)
            throw validation_error("ensemble_accuracy: trial lacks reference rates");
        auto within = [&](const KindStats& s) {
            return s.mean_bpm && std::abs(*s.mean_bpm - *s.reference_bpm) <= tolerance_bpm;
        };
        if (within(trial.breathing) && within(trial.heart)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(trials.size());
}

}  // namespace vls
