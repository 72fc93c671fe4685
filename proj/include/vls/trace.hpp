#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vls/errors.hpp"

namespace vls {

// Ground-truth rates carried alongside a trace, standing in for the
// contact-based reference devices.
struct GroundTruth {
    double breathing_bpm = 0.0;
    double heart_bpm = 0.0;
};

// Uniformly sampled received-power time series plus provenance metadata.
struct Trace {
    double sampling_rate_hz = 0.0;
    std::vector<double> samples;
    std::string unit = "W";
    std::map<std::string, std::string> metadata;
    std::optional<GroundTruth> truth;

    double duration_s() const { return static_cast<double>(samples.size()) / sampling_rate_hz; }

    void validate() const {
        if (!(sampling_rate_hz > 0)) throw validation_error("trace: sampling rate must be positive");
        if (samples.empty()) throw validation_error("trace: no samples");
        for (double v : samples)
            if (!std::isfinite(v)) throw validation_error("trace: non-finite sample");
    }
};

}  // namespace vls
