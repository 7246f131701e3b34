#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include "icdof/linalg.hpp"
#include "icdof/rng.hpp"

// Scalar quantization of overheard interference. The transmission schemes
// only need the distortion exponent, so a clipped uniform quantizer stands in
// for an ideal rate-distortion codebook; its constant-factor gap is absorbed
// into the O(1) terms of the rate expressions.

namespace icdof {

struct QuantSpec {
    double rate_bits = 0;     // total bits per complex sample
    double source_power = 1;  // E|x|^2 of the source
};

// Gaussian rate-distortion shape: source_power * 2^-rate.
inline double model_distortion(const QuantSpec& spec) {
    if (spec.source_power < 0) throw std::invalid_argument("model_distortion: negative source power");
    if (spec.rate_bits < 0) throw std::invalid_argument("model_distortion: negative rate");
    return spec.source_power * std::exp2(-spec.rate_bits);
}

struct QuantResult {
    cplx quantized;
    cplx error;  // x - quantized, exactly
};

namespace detail {

inline double quantize_axis(double x, double clip, int bits) {
    if (bits <= 0) return 0.0;  // one reconstruction level at the mean
    const double levels = std::exp2(bits);
    const double step = 2.0 * clip / levels;
    double idx = std::floor((x + clip) / step);
    idx = std::min(std::max(idx, 0.0), levels - 1.0);
    return -clip + (idx + 0.5) * step;
}

}  // namespace detail

// Uniform mid-rise quantizer, floor(rate/2) bits per real dimension, clipped
// at +-4 standard deviations of each dimension. Clipping overload counts
// toward the distortion; the reconstruction identity x = quantized + error
// holds bit-for-bit.
inline QuantResult quantize(cplx x, const QuantSpec& spec) {
    if (spec.source_power < 0) throw std::invalid_argument("quantize: negative source power");
    if (spec.rate_bits < 0) throw std::invalid_argument("quantize: negative rate");
    const int bits_per_dim = static_cast<int>(std::floor(spec.rate_bits / 2.0));
    const double clip = 4.0 * std::sqrt(spec.source_power / 2.0);
    const cplx q(detail::quantize_axis(x.real(), clip, bits_per_dim),
                 detail::quantize_axis(x.imag(), clip, bits_per_dim));
    return {q, x - q};
}

// Measured mean |error|^2 over Gaussian inputs, with its standard error.
inline std::pair<double, double> empirical_distortion(RngStream rng, const QuantSpec& spec,
                                                      std::size_t n_trials) {
    if (n_trials == 0) throw std::invalid_argument("empirical_distortion: no trials");
    double sum = 0, sum2 = 0;
    for (std::size_t t = 0; t < n_trials; ++t) {
        const cplx x = rng.cgaussian(spec.source_power);
        const double d = std::norm(quantize(x, spec).error);
        sum += d;
        sum2 += d * d;
    }
    const double n = static_cast<double>(n_trials);
    const double mean = sum / n;
    const double var = std::max(0.0, sum2 / n - mean * mean);
    return {mean, std::sqrt(var / n)};
}

}  // namespace icdof
