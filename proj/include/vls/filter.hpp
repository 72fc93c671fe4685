#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "vls/errors.hpp"

namespace vls {

// Pole modulus at or above this counts as unstable.
inline constexpr double kStabilityThreshold = 1.0 - 1e-9;

// Normalized direct-form IIR coefficients: feedback[0] is always 1, so the
// recurrence x[m] = sum_i b[i] z[m-i] - sum_{j>=1} a[j] x[m-j] applies as-is.
// allow_unstable marks coefficient sets (e.g. published presets rounded to
// four decimals) that may be run despite poles on or outside the unit circle.
struct FilterCoefficients {
    std::vector<double> feedforward;  // b, length P+1
    std::vector<double> feedback;     // a, length Q+1, a[0] == 1
    std::string label;
    bool allow_unstable = false;
};

// --- polynomial roots (Durand-Kerner with Newton polish) ---

// Roots of c[0] x^n + c[1] x^(n-1) + ... + c[n]. Degree <= ~20 intended.
inline std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs) {
    using cd = std::complex<double>;
    std::vector<double> c(coeffs.begin(), coeffs.end());
    // strip leading zeros
    std::size_t lead = 0;
    while (lead < c.size() && c[lead] == 0.0) ++lead;
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(lead));
    if (c.size() < 2) return {};
    const std::size_t n = c.size() - 1;
    for (auto& v : c) v /= coeffs[lead];  // monic

    auto eval = [&](cd x) {
        cd p = 1.0;
        for (std::size_t i = 1; i <= n; ++i) p = p * x + c[i];
        return p;
    };
    auto eval_deriv = [&](cd x) {
        cd p = 1.0, d = 0.0;
        for (std::size_t i = 1; i <= n; ++i) {
            d = d * x + p;
            p = p * x + c[i];
        }
        return d;
    };

    std::vector<cd> w(n);
    const cd seed(0.4, 0.9);  // not a root of unity
    cd acc = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc *= seed;
        w[i] = acc;
    }

    for (int iter = 0; iter < 500; ++iter) {
        double max_step = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cd denom = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) denom *= w[i] - w[j];
            if (denom == cd(0.0, 0.0)) denom = cd(1e-30, 0.0);
            const cd step = eval(w[i]) / denom;
            w[i] -= step;
            max_step = std::max(max_step, std::abs(step) / (1.0 + std::abs(w[i])));
        }
        if (max_step < 1e-14) break;
    }
    // a few Newton steps sharpen well-separated roots
    for (auto& root : w) {
        for (int k = 0; k < 3; ++k) {
            const cd d = eval_deriv(root);
            if (std::abs(d) < 1e-300) break;
            root -= eval(root) / d;
        }
    }
    return w;
}

struct StabilityReport {
    std::vector<std::complex<double>> poles;
    double max_pole_modulus = 0.0;
    bool stable = false;
    // distance from the unit circle; negative when a pole sits outside
    double margin = 0.0;
};

inline StabilityReport stability_report(const FilterCoefficients& coeffs) {
    StabilityReport rep;
    // poles are the roots of sum_j a[j] z^(Q-j)
    rep.poles = polynomial_roots(coeffs.feedback);
    for (const auto& p : rep.poles) rep.max_pole_modulus = std::max(rep.max_pole_modulus, std::abs(p));
    rep.stable = rep.max_pole_modulus < kStabilityThreshold;
    rep.margin = 1.0 - rep.max_pole_modulus;
    return rep;
}

// Validates and normalizes (a[0] divided through to exactly 1); the stability
// gate rejects marginal/unstable feedback unless allow_unstable is set.
inline FilterCoefficients make_filter(std::vector<double> feedforward, std::vector<double> feedback,
                                      std::string label, bool allow_unstable = false) {
    if (feedforward.empty() || feedback.empty())
        throw validation_error("make_filter: empty coefficient vector");
    if (feedback[0] == 0.0)
        throw validation_error("make_filter: feedback[0] must be nonzero");
    if (feedback[0] != 1.0) {
        const double a0 = feedback[0];
        for (auto& v : feedforward) v /= a0;
        for (auto& v : feedback) v /= a0;
    }
    FilterCoefficients coeffs{std::move(feedforward), std::move(feedback), std::move(label),
                              allow_unstable};
    if (!allow_unstable) {
        const auto rep = stability_report(coeffs);
        if (!rep.stable)
            throw stability_error("filter '" + coeffs.label + "' is unstable: max pole modulus " +
                                  std::to_string(rep.max_pole_modulus));
    }
    return coeffs;
}

// Direct-form recurrence with zero initial conditions; output length equals
// input length. Unstable coefficients are rejected unless the set carries
// the explicit override.
inline std::vector<double> iir_filter(const FilterCoefficients& coeffs,
                                      std::span<const double> signal) {
    if (signal.empty()) throw validation_error("iir_filter: empty signal");
    if (coeffs.feedforward.empty() || coeffs.feedback.empty() || coeffs.feedback[0] != 1.0)
        throw validation_error("iir_filter: coefficients must be normalized (a[0] == 1)");
    if (!coeffs.allow_unstable) {
        const auto rep = stability_report(coeffs);
        if (!rep.stable)
            throw stability_error("iir_filter: '" + coeffs.label + "' has max pole modulus " +
                                  std::to_string(rep.max_pole_modulus) +
                                  "; pass allow_unstable to run anyway");
    }

    const auto& b = coeffs.feedforward;
    const auto& a = coeffs.feedback;
    std::vector<double> out(signal.size());
    for (std::size_t m = 0; m < signal.size(); ++m) {
        double acc = 0.0;
        for (std::size_t i = 0; i < b.size() && i <= m; ++i) acc += b[i] * signal[m - i];
        for (std::size_t j = 1; j < a.size() && j <= m; ++j) acc -= a[j] * out[m - j];
        out[m] = acc;
    }
    return out;
}

// H(e^{jw}) = sum_i b[i] e^{-jwi} / sum_j a[j] e^{-jwj}, w = 2 pi f / Fs.
// Accumulated in long double: the band-pass polynomials are ill-conditioned
// near z = 1 and plain double evaluation loses ~0.5 dB at the low band edge.
inline std::complex<double> frequency_response(const FilterCoefficients& coeffs, double freq_hz,
                                               double sampling_rate_hz) {
    if (sampling_rate_hz <= 0)
        throw validation_error("frequency_response: sampling rate must be positive");
    if (freq_hz < 0 || freq_hz > sampling_rate_hz / 2)
        throw validation_error("frequency_response: frequency outside [0, Fs/2]");
    using cl = std::complex<long double>;
    const long double w = 2.0L * std::numbers::pi_v<long double> *
                          static_cast<long double>(freq_hz) / static_cast<long double>(sampling_rate_hz);
    const cl z1(std::cos(-w), std::sin(-w));  // e^{-jw}
    auto horner = [&](const std::vector<double>& c) {
        cl acc(0.0L, 0.0L);
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z1 + cl(*it, 0.0L);
        return acc;
    };
    const cl h = horner(coeffs.feedforward) / horner(coeffs.feedback);
    return {static_cast<double>(h.real()), static_cast<double>(h.imag())};
}

// --- published presets ---
// Both coefficient sets are rounded to four decimals in print; the rounding
// pushes poles onto (breathing: z = 1) or outside (heart) the unit circle,
// so they ship behind the explicit instability override.

inline FilterCoefficients paper_heart_filter() {
    return make_filter(
        {0.0010, -0.0077, 0.0262, -0.0517, 0.0642, -0.0517, 0.0262, -0.0077, 0.0010},
        {1.0000, -7.8359, 26.8895, -52.7799, 64.8128, -50.9871, 25.0939, -7.0643, 0.8709},
        "paper-heart", /*allow_unstable=*/true);
}

inline FilterCoefficients paper_breathing_filter() {
    return make_filter({0.0007, 0.0, -0.0013, 0.0, 0.0007},
                       {1.0000, -3.9247, 5.7781, -3.7820, 0.9286},
                       "paper-breathing", /*allow_unstable=*/true);
}

// --- Chebyshev Type-II band-pass design ---

namespace detail {

struct Zpk {
    std::vector<std::complex<double>> zeros;
    std::vector<std::complex<double>> poles;
    double gain = 1.0;
};

// Analog low-pass prototype with stopband edge at 1 rad/s and equiripple
// stopband at -stopband_db.
inline Zpk cheby2_prototype(int order, double stopband_db) {
    using cd = std::complex<double>;
    Zpk zpk;
    const double de = 1.0 / std::sqrt(std::pow(10.0, 0.1 * stopband_db) - 1.0);
    const double mu = std::asinh(1.0 / de) / order;

    for (int m = -order + 1; m < order; m += 2) {
        const double theta = std::numbers::pi * m / (2.0 * order);
        if (m != 0) zpk.zeros.push_back(cd(0.0, -1.0 / std::sin(theta)));
        // Butterworth point warped onto the Type-II locus, then inverted
        const cd bw = -std::exp(cd(0.0, theta));
        const cd p(std::sinh(mu) * bw.real(), std::cosh(mu) * bw.imag());
        zpk.poles.push_back(1.0 / p);
    }
    cd num(1.0, 0.0), den(1.0, 0.0);
    for (const auto& p : zpk.poles) num *= -p;
    for (const auto& z : zpk.zeros) den *= -z;
    zpk.gain = (num / den).real();
    return zpk;
}

// Low-pass (edge 1 rad/s) -> band-pass with center wo and width bw, both rad/s.
inline Zpk lowpass_to_bandpass(const Zpk& lp, double wo, double bw) {
    using cd = std::complex<double>;
    Zpk bp;
    const std::size_t degree = lp.poles.size() - lp.zeros.size();
    auto transform = [&](const std::vector<cd>& roots, std::vector<cd>& out) {
        for (const auto& r : roots) {
            const cd scaled = r * (bw / 2.0);
            const cd disc = std::sqrt(scaled * scaled - cd(wo * wo, 0.0));
            out.push_back(scaled + disc);
            out.push_back(scaled - disc);
        }
    };
    transform(lp.zeros, bp.zeros);
    transform(lp.poles, bp.poles);
    for (std::size_t i = 0; i < degree; ++i) bp.zeros.push_back(cd(0.0, 0.0));
    bp.gain = lp.gain * std::pow(bw, static_cast<double>(degree));
    return bp;
}

// Bilinear transform at rate fs; analog roots must be prewarped already.
inline Zpk bilinear(const Zpk& analog, double fs) {
    using cd = std::complex<double>;
    Zpk digital;
    const double fs2 = 2.0 * fs;
    cd num(1.0, 0.0), den(1.0, 0.0);
    for (const auto& z : analog.zeros) {
        digital.zeros.push_back((cd(fs2, 0.0) + z) / (cd(fs2, 0.0) - z));
        num *= cd(fs2, 0.0) - z;
    }
    for (const auto& p : analog.poles) {
        digital.poles.push_back((cd(fs2, 0.0) + p) / (cd(fs2, 0.0) - p));
        den *= cd(fs2, 0.0) - p;
    }
    const std::size_t degree = analog.poles.size() - analog.zeros.size();
    for (std::size_t i = 0; i < degree; ++i) digital.zeros.push_back(cd(-1.0, 0.0));
    digital.gain = analog.gain * (num / den).real();
    return digital;
}

// Expand a monic polynomial from roots. Real roots multiply in as linear
// factors and conjugate pairs as real quadratics, which keeps the expansion
// in real arithmetic; complex sequential multiplication loses enough
// precision to destabilize narrow low-frequency designs.
inline std::vector<double> polynomial_from_roots(std::vector<std::complex<double>> roots) {
    std::vector<double> poly{1.0};
    auto multiply = [&](const std::vector<double>& factor) {
        std::vector<double> next(poly.size() + factor.size() - 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i)
            for (std::size_t j = 0; j < factor.size(); ++j) next[i + j] += poly[i] * factor[j];
        poly = std::move(next);
    };

    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        const auto r = roots[i];
        if (std::abs(r.imag()) <= 1e-9 * (1.0 + std::abs(r))) {
            multiply({1.0, -r.real()});
            continue;
        }
        // pair with the nearest unused conjugate
        std::size_t partner = roots.size();
        double best = 0.0;
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            if (used[j]) continue;
            const double dist = std::abs(roots[j] - std::conj(r));
            if (partner == roots.size() || dist < best) {
                partner = j;
                best = dist;
            }
        }
        if (partner < roots.size()) {
            used[partner] = true;
            const auto s = roots[partner];
            multiply({1.0, -(r.real() + s.real()), (r * s).real()});
        } else {
            multiply({1.0, -r.real()});  // unmatched: drop the imaginary dust
        }
    }
    return poly;
}

}  // namespace detail

// Band-pass designed so the realized b,a coefficients attenuate at least
// stopband_db outside [low_hz/transition_ratio, high_hz*transition_ratio].
// The analog prototype is designed 2 dB deeper: flattening the pole-zero
// form into double-precision polynomial coefficients measurably erodes the
// stopband floor at the low edge.
inline FilterCoefficients designed_bandpass(double low_hz, double high_hz, double sampling_rate_hz,
                                            int order = 4, double stopband_db = 40.0,
                                            double transition_ratio = 2.0) {
    if (!(low_hz > 0) || !(high_hz > low_hz))
        throw validation_error("designed_bandpass: need 0 < low < high");
    if (order < 1 || order > 10)
        throw validation_error("designed_bandpass: order out of range [1, 10]");
    if (stopband_db <= 0) throw validation_error("designed_bandpass: stopband_db must be positive");
    if (transition_ratio <= 1.0)
        throw validation_error("designed_bandpass: transition_ratio must exceed 1");
    const double nyquist = sampling_rate_hz / 2.0;
    const double stop_lo = low_hz / transition_ratio;
    const double stop_hi = std::min(high_hz * transition_ratio, 0.99 * nyquist);
    if (!(stop_hi > stop_lo) || high_hz >= nyquist)
        throw validation_error("designed_bandpass: band does not fit below Nyquist");

    const double warp_lo = 2.0 * sampling_rate_hz * std::tan(std::numbers::pi * stop_lo / sampling_rate_hz);
    const double warp_hi = 2.0 * sampling_rate_hz * std::tan(std::numbers::pi * stop_hi / sampling_rate_hz);
    const double wo = std::sqrt(warp_lo * warp_hi);
    const double bw = warp_hi - warp_lo;

    auto zpk = detail::cheby2_prototype(order, stopband_db + 2.0);
    zpk = detail::lowpass_to_bandpass(zpk, wo, bw);
    zpk = detail::bilinear(zpk, sampling_rate_hz);

    std::vector<double> b = detail::polynomial_from_roots(zpk.zeros);
    for (auto& v : b) v *= zpk.gain;
    std::vector<double> a = detail::polynomial_from_roots(zpk.poles);
    try {
        return make_filter(std::move(b), std::move(a), "designed");
    } catch (const stability_error&) {
        // poles too close to z = 1 to survive flattening into double
        // coefficients; happens when the band edges are tiny fractions of fs
        throw stability_error(
            "designed_bandpass: band " + std::to_string(low_hz) + "-" + std::to_string(high_hz) +
            " Hz is too narrow relative to fs=" + std::to_string(sampling_rate_hz) +
            " Hz for stable direct-form coefficients; lower fs or raise the band edges");
    }
}

}  // namespace vls
