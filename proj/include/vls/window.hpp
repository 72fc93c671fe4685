#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "vls/errors.hpp"

namespace vls {

// Periodic Hanning window, W[m] = sin^2(pi m / N). W[0] = 0, W[N/2] = 1
// for even N, and the weights sum to exactly N/2 over a full period.
inline std::vector<double> hanning_window(std::size_t size) {
    if (size < 2)
        throw validation_error("hanning_window: size must be >= 2, got " + std::to_string(size));
    std::vector<double> w(size);
    for (std::size_t m = 0; m < size; ++m) {
        const double s = std::sin(std::numbers::pi * static_cast<double>(m) / static_cast<double>(size));
        w[m] = s * s;
    }
    return w;
}

inline std::vector<double> apply_window(std::span<const double> weights,
                                        std::span<const double> signal) {
    if (weights.size() != signal.size())
        throw validation_error("apply_window: length mismatch (" + std::to_string(weights.size()) +
                               " weights vs " + std::to_string(signal.size()) + " samples)");
    std::vector<double> out(signal.size());
    for (std::size_t m = 0; m < signal.size(); ++m) out[m] = weights[m] * signal[m];
    return out;
}

}  // namespace vls
