#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "vls/errors.hpp"

namespace vls {

inline bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

// In-place iterative radix-2 decimation-in-time transform.
// Computes the plain forward sum Y[k] = sum_m y[m] e^{-j 2 pi k m / N},
// no 1/N scaling. Twiddles come from a per-call table indexed off the full
// turn, so rounding does not accumulate across stages.
inline void fft_in_place(std::vector<std::complex<double>>& data) {
    const std::size_t n = data.size();
    if (!is_power_of_two(n))
        throw validation_error("fft: length " + std::to_string(n) + " is not a power of two");
    if (n == 1) return;

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    std::vector<std::complex<double>> twiddle(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        twiddle[k] = {std::cos(angle), std::sin(angle)};
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t step = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> w = twiddle[k * step];
                const std::complex<double> u = data[start + k];
                const std::complex<double> t = w * data[start + k + len / 2];
                data[start + k] = u + t;
                data[start + k + len / 2] = u - t;
            }
        }
    }
}

inline std::vector<std::complex<double>> fft(std::span<const double> signal) {
    std::vector<std::complex<double>> data(signal.begin(), signal.end());
    fft_in_place(data);
    return data;
}

}  // namespace vls
