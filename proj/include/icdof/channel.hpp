#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "icdof/linalg.hpp"
#include "icdof/rng.hpp"

// Time-varying i.i.d. Rayleigh channels with a two-part transmitter view:
// past channels are known exactly (fed back with delay), the current channel
// is known only through an estimate whose error variance decays as P^-alpha.
// Trials draw independent (estimate, error) pairs; no fading process is
// simulated because only the marginal error variance enters the analysis.

namespace icdof {

// Current-CSIT quality. sigma2 is the per-entry estimation error variance.
struct CsitQuality {
    double alpha = 0;
    double power = 1;
    double sigma2 = 1;
};

inline double sigma2_of(double alpha, double power) {
    if (alpha < 0) throw std::invalid_argument("sigma2_of: alpha must be nonnegative");
    if (power < 1) throw std::invalid_argument("sigma2_of: power below 1 has no exponent convention");
    return std::min(1.0, std::pow(power, -alpha));
}

inline CsitQuality make_csit_quality(double alpha, double power) {
    return {alpha, power, sigma2_of(alpha, power)};
}

// One cross/direct link at one time instant: true channel and its current
// estimate, both N x M with y = H x. The error H - Hhat has per-entry
// variance sigma2, the estimate per-entry variance 1 - sigma2.
struct Link {
    CMat h;
    CMat hat;
};

// All four links (j,i) of the two-user channel at one time instant.
struct ChannelSample {
    std::size_t n_tx_ant = 2;  // M
    std::size_t n_rx_ant = 1;  // N
    std::array<Link, 4> links;

    // 1-based user indices, matching the usual h_ji notation.
    const Link& link(int rx_j, int tx_i) const { return links[static_cast<std::size_t>((rx_j - 1) * 2 + (tx_i - 1))]; }
};

namespace detail {

inline Link draw_link(RngStream& rng, std::size_t n, std::size_t m, double sigma2) {
    Link l{CMat(n, m), CMat(n, m)};
    const double est_sd = std::sqrt(1.0 - sigma2);
    const double err_sd = std::sqrt(sigma2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const cplx ge = rng.cgaussian(1.0);
            const cplx gw = rng.cgaussian(1.0);
            l.hat(i, j) = est_sd * ge;
            l.h(i, j) = l.hat(i, j) + err_sd * gw;
        }
    return l;
}

}  // namespace detail

// Deterministic under (seed, trial, slot): each link has its own stream, so
// draws do not depend on evaluation order or on which other links are used.
inline ChannelSample draw_sample(std::uint64_t seed, std::uint64_t trial, std::uint64_t slot,
                                 std::size_t n_tx_ant, std::size_t n_rx_ant, const CsitQuality& q) {
    ChannelSample s;
    s.n_tx_ant = n_tx_ant;
    s.n_rx_ant = n_rx_ant;
    for (std::uint64_t link = 0; link < 4; ++link) {
        RngStream rng = make_stream(seed, trial, slot, link);
        s.links[link] = detail::draw_link(rng, n_rx_ant, n_tx_ant, q.sigma2);
    }
    return s;
}

// MISO view of a link: channel as a column 2-vector with y = h^H x.
inline CVec miso_vec(const CMat& row) {
    CVec v(row.cols());
    for (std::size_t j = 0; j < row.cols(); ++j) v[j] = std::conj(row(0, j));
    return v;
}

// Zero-forcing direction for a MISO estimate; falls back to a fixed axis when
// there is no usable estimate (sigma2 = 1 makes the estimate exactly zero).
inline CVec zf_direction(const CVec& hat) {
    if (hat.norm() <= 1e-12) return CVec{0.0, 1.0};
    return orth_complement(hat);
}

// Matched (beamforming) direction with the same degenerate-estimate fallback.
inline CVec beam_direction(const CVec& hat) {
    if (hat.norm() <= 1e-12) return CVec{1.0, 0.0};
    return normalized(hat);
}

// Monte Carlo estimate of the interference power leaking through a
// zero-forcing precoder built from the current estimate, E|h^H hperp|^2.
// The model gives exactly sigma2.
inline std::pair<double, double> leakage_power_mc(std::uint64_t seed, double alpha, double power,
                                                  std::size_t n_trials) {
    if (n_trials < 100) throw std::invalid_argument("leakage_power_mc: need at least 100 trials");
    const CsitQuality q = make_csit_quality(alpha, power);
    double sum = 0, sum2 = 0;
    for (std::uint64_t t = 0; t < n_trials; ++t) {
        RngStream rng = make_stream(seed, t, 0, 0);
        const Link l = detail::draw_link(rng, 1, 2, q.sigma2);
        const CVec h = miso_vec(l.h);
        const CVec w = zf_direction(miso_vec(l.hat));
        const double v = std::norm(dot(h, w));
        sum += v;
        sum2 += v * v;
    }
    const double n = static_cast<double>(n_trials);
    const double mean = sum / n;
    const double var = std::max(0.0, sum2 / n - mean * mean);
    return {mean, std::sqrt(var / n)};
}

}  // namespace icdof
