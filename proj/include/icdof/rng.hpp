#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace icdof {

// Counter-addressed pseudo-random stream. Every (seed, stream) pair yields an
// independent, reproducible sequence, so Monte Carlo trials can be generated
// in any order or from any thread and still produce bit-identical results.
// Core generator is SplitMix64.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream) : state_(derive(seed, stream)) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return finalize(state_);
    }

    // Uniform on the open interval (0,1).
    double uniform01() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

    // Circularly symmetric complex Gaussian with E|z|^2 = var.
    std::complex<double> cgaussian(double var = 1.0) {
        const double r = std::sqrt(-var * std::log(uniform01()));
        const double phi = 6.283185307179586476925286766559 * uniform01();
        return {r * std::cos(phi), r * std::sin(phi)};
    }

private:
    static std::uint64_t finalize(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        return finalize(finalize(seed + 0x9E3779B97F4A7C15ULL) ^ finalize(stream + 0xD1B54A32D192ED03ULL));
    }

    std::uint64_t state_;
};

// Stream address for one sub-channel of one slot of one trial. Slot codes
// above the physical slot count are used for symbol and source draws.
inline std::uint64_t stream_id(std::uint64_t trial, std::uint64_t slot, std::uint64_t link) {
    return (trial << 20) ^ (slot << 12) ^ link;
}

inline RngStream make_stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t slot, std::uint64_t link) {
    return RngStream(seed, stream_id(trial, slot, link));
}

}  // namespace icdof
