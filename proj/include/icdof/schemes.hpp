#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "icdof/channel.hpp"
#include "icdof/linalg.hpp"
#include "icdof/parallel.hpp"
#include "icdof/quantizer.hpp"
#include "icdof/rng.hpp"

// Per-trial transcripts of the transmission schemes and their achievable
// rates at finite power. Rates are conditional mutual informations of the
// equivalent linear-Gaussian channels left after each scheme's receiver
// processing, averaged over channel draws; no codebooks are simulated.
//
// Scheme roster:
//   enhanced  three slots: ZF-precoded symbols, then quantized residual
//             interference forwarded as a common message (two antennas each
//             transmitter, single-antenna receivers)
//   hk        single slot, common + private split at one transmitter
//   mat       three slots, unprecoded symbols and analog interference
//             forwarding (no current CSIT used)
//   zf        single slot, plain zero-forcing on the current estimate
//   mimo      the enhanced protocol for M transmit / N receive antennas
//             with range/null-space precoders, M >= 2N

namespace icdof {

enum class SchemeId { Enhanced, Hk, Mat, Zf, Mimo };

inline const char* scheme_name(SchemeId id) {
    switch (id) {
        case SchemeId::Enhanced: return "enhanced";
        case SchemeId::Hk: return "hk";
        case SchemeId::Mat: return "mat";
        case SchemeId::Zf: return "zf";
        case SchemeId::Mimo: return "mimo";
    }
    return "?";
}

inline SchemeId parse_scheme(const std::string& name) {
    if (name == "enhanced") return SchemeId::Enhanced;
    if (name == "hk") return SchemeId::Hk;
    if (name == "mat") return SchemeId::Mat;
    if (name == "zf") return SchemeId::Zf;
    if (name == "mimo") return SchemeId::Mimo;
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

enum class NoiseMode { Analytic, Empirical };

struct SchemeConfig {
    double alpha = 0.5;
    double power = 1e4;  // linear transmit power P
    std::size_t trials = 1000;
    NoiseMode noise_mode = NoiseMode::Analytic;
    std::size_t n_tx_ant = 2;  // M
    std::size_t n_rx_ant = 1;  // N
    std::uint64_t seed = 1;
    std::size_t threads = 0;  // 0 = hardware default
};

struct RatePair {
    double r1 = 0, r2 = 0;    // bits per channel use
    double se1 = 0, se2 = 0;  // standard errors of the means
    double power = 0, alpha = 0;
    std::size_t skipped = 0;
};

// Ensemble power allocation of one scheme at one (alpha, P); the budget every
// trial transmits with. Per-transmitter per-slot totals never exceed P.
struct SlotPowers {
    double slot1_aligned = 0;    // symbol on the estimated cross-channel direction
    double slot1_protected = 0;  // symbol in the zero-forcing null direction
    double relay_codeword = 0;   // forwarded-interference codeword power (slots 2/3)
    double relay_private = 0;    // private symbol power in slots 2/3
    std::array<std::array<double, 2>, 3> per_tx_slot{};  // [slot][tx]
};

namespace detail {

inline void validate_common(const SchemeConfig& cfg) {
    if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0))
        throw std::invalid_argument("SchemeConfig: alpha must lie in [0,1]");
    if (cfg.power < 1) throw std::invalid_argument("SchemeConfig: power must be >= 1");
    if (cfg.trials < 100) throw std::invalid_argument("SchemeConfig: need at least 100 trials");
}

inline void validate_miso(const SchemeConfig& cfg) {
    validate_common(cfg);
    if (cfg.n_tx_ant != 2 || cfg.n_rx_ant != 1)
        throw std::invalid_argument("SchemeConfig: MISO schemes use two transmit antennas, one receive antenna");
}

inline void validate_mimo(const SchemeConfig& cfg) {
    validate_common(cfg);
    if (cfg.n_rx_ant < 1 || cfg.n_tx_ant < 2 * cfg.n_rx_ant)
        throw std::invalid_argument("SchemeConfig: MIMO scheme requires M >= 2N");
}

// Slot-1 split: the symbol on the estimated cross direction leaks at full
// strength and is throttled so the total residual interference keeps the
// P^(1-alpha) scaling; the cap at P/2 keeps the protected stream alive as
// alpha -> 0, where the literal P - P^(1-alpha) allocation collapses to zero.
inline std::pair<double, double> slot1_split(double alpha, double power) {
    const double p1 = std::min(std::pow(power, 1.0 - alpha), 0.5 * power);
    return {p1, power - p1};
}

struct TrialAccum {
    std::vector<double> v1, v2;
    std::vector<std::uint8_t> ok;
};

template <typename TrialFn>
RatePair reduce_trials(const SchemeConfig& cfg, double n_slots, TrialFn&& trial) {
    TrialAccum acc;
    acc.v1.assign(cfg.trials, 0.0);
    acc.v2.assign(cfg.trials, 0.0);
    acc.ok.assign(cfg.trials, 0);
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
        try {
            const auto [a, b] = trial(static_cast<std::uint64_t>(t));
            if (std::isfinite(a) && std::isfinite(b)) {
                acc.v1[t] = a;
                acc.v2[t] = b;
                acc.ok[t] = 1;
            }
        } catch (const std::exception&) {
            // numerically degenerate draw: skip and count
        }
    });

    std::size_t n_ok = 0;
    double s1 = 0, s2 = 0;
    for (std::size_t t = 0; t < cfg.trials; ++t)
        if (acc.ok[t]) {
            ++n_ok;
            s1 += acc.v1[t];
            s2 += acc.v2[t];
        }
    const std::size_t skipped = cfg.trials - n_ok;
    if (skipped * 1000 > cfg.trials)
        throw std::runtime_error("scheme run: more than 0.1% of trials were numerically degenerate");
    if (n_ok < 2) throw std::runtime_error("scheme run: not enough valid trials");

    const double m1 = s1 / static_cast<double>(n_ok);
    const double m2 = s2 / static_cast<double>(n_ok);
    double q1 = 0, q2 = 0;
    for (std::size_t t = 0; t < cfg.trials; ++t)
        if (acc.ok[t]) {
            q1 += (acc.v1[t] - m1) * (acc.v1[t] - m1);
            q2 += (acc.v2[t] - m2) * (acc.v2[t] - m2);
        }
    const double denom = static_cast<double>(n_ok) * static_cast<double>(n_ok - 1);
    RatePair r;
    r.r1 = m1 / n_slots;
    r.r2 = m2 / n_slots;
    r.se1 = std::sqrt(q1 / denom) / n_slots;
    r.se2 = std::sqrt(q2 / denom) / n_slots;
    r.power = cfg.power;
    r.alpha = cfg.alpha;
    r.skipped = skipped;
    return r;
}

inline double log2_1p(double x) { return std::log1p(x) / std::log(2.0); }

// MISO channel vectors of one slot, y = h^H x convention.
struct MisoSlot {
    CVec h11, h12, h21, h22;
    CVec hat12, hat21;
};

inline MisoSlot miso_slot(std::uint64_t seed, std::uint64_t trial, std::uint64_t slot, const CsitQuality& q) {
    const ChannelSample s = draw_sample(seed, trial, slot, 2, 1, q);
    MisoSlot out;
    out.h11 = miso_vec(s.link(1, 1).h);
    out.h12 = miso_vec(s.link(1, 2).h);
    out.h21 = miso_vec(s.link(2, 1).h);
    out.h22 = miso_vec(s.link(2, 2).h);
    out.hat12 = miso_vec(s.link(1, 2).hat);
    out.hat21 = miso_vec(s.link(2, 1).hat);
    return out;
}

// log2 det(I + W^-1 M K M^H) for a 2x2 effective channel M, diagonal noise
// covariance (w1, w2) and diagonal input covariance (p1, p2).
inline double two_stream_rate(const CMat& m, double w1, double w2, double p1, double p2) {
    CMat s = weighted_gram_outer(m, {p1, p2});
    CMat w(2, 2);
    w(0, 0) = w1;
    w(1, 1) = w2;
    s += w;
    return logdet_ratio(s, w, LogBase::Bits);
}

}  // namespace detail

// ----- three-slot baseline: unprecoded symbols + analog forwarding ---------

inline RatePair run_mat_ic(const SchemeConfig& cfg) {
    detail::validate_miso(cfg);
    const double p = cfg.power;
    const double p_sym = 0.5 * p;  // two symbols per transmitter in slot 1
    const CsitQuality q{0.0, p, 1.0};  // delayed CSIT only

    return detail::reduce_trials(cfg, 3.0, [&](std::uint64_t t) {
        const auto s1 = detail::miso_slot(cfg.seed, t, 1, q);
        const auto s2 = detail::miso_slot(cfg.seed, t, 2, q);
        const auto s3 = detail::miso_slot(cfg.seed, t, 3, q);

        // Forwarded interference has ensemble power E|eta|^2 = P, so the
        // analog repeat transmits it unscaled.
        const cplx c3 = std::conj(s3.h12[0]);  // slot-3 relay entry seen at Rx-1
        const cplx c2 = std::conj(s2.h11[0]);  // slot-2 relay entry seen at Rx-1
        CMat m1(2, 2);
        for (std::size_t j = 0; j < 2; ++j) {
            m1(0, j) = c3 * std::conj(s1.h11[j]);
            m1(1, j) = c2 * std::conj(s1.h21[j]);
        }
        const double r1 = detail::two_stream_rate(m1, std::norm(c3) + 1.0, 1.0, p_sym, p_sym);

        const cplx d2 = std::conj(s2.h21[0]);
        const cplx d3 = std::conj(s3.h22[0]);
        CMat m2(2, 2);
        for (std::size_t j = 0; j < 2; ++j) {
            m2(0, j) = d2 * std::conj(s1.h22[j]);
            m2(1, j) = d3 * std::conj(s1.h12[j]);
        }
        const double r2 = detail::two_stream_rate(m2, std::norm(d2) + 1.0, 1.0, p_sym, p_sym);
        return std::pair{r1, r2};
    });
}

// ----- three-slot enhanced scheme: ZF precoding + quantized forwarding -----

inline RatePair run_enhanced_miso(const SchemeConfig& cfg) {
    detail::validate_miso(cfg);
    const CsitQuality q = make_csit_quality(cfg.alpha, cfg.power);
    // Without usable current CSIT the protocol degenerates to the unprecoded
    // analog baseline; run exactly that, so the two estimators coincide.
    if (q.sigma2 >= 1.0) return run_mat_ic(cfg);

    const double p = cfg.power;
    const auto [p1, p2] = detail::slot1_split(cfg.alpha, p);
    const double p_priv = std::pow(p, cfg.alpha);
    const double p_cw = p - p_priv;
    // Ensemble interference power with normalized precoder columns:
    // the aligned symbol lands with E|h^H q|^2 = 2 - sigma2, the protected
    // one leaks with exactly sigma2.
    const double src_power = (2.0 - q.sigma2) * p1 + q.sigma2 * p2;
    const double rate_bits = (1.0 - cfg.alpha) * std::log2(p);
    const QuantSpec qspec{rate_bits, src_power};
    const double d_model = model_distortion(qspec);
    const double pwr_hat = src_power - d_model;  // quantizer output power
    const bool forwarding = rate_bits > 1e-9 && p_cw > 0 && pwr_hat > 0;
    const double gain = forwarding ? std::sqrt(p_cw / pwr_hat) : 0.0;
    const bool empirical = cfg.noise_mode == NoiseMode::Empirical;

    return detail::reduce_trials(cfg, 3.0, [&, p1 = p1, p2 = p2](std::uint64_t t) {
        const auto s1 = detail::miso_slot(cfg.seed, t, 1, q);
        const auto s2 = detail::miso_slot(cfg.seed, t, 2, q);
        const auto s3 = detail::miso_slot(cfg.seed, t, 3, q);

        const CVec qr21 = beam_direction(s1.hat21), qn21 = zf_direction(s1.hat21);
        const CVec qr12 = beam_direction(s1.hat12), qn12 = zf_direction(s1.hat12);
        const CVec qn21_2 = zf_direction(s2.hat21), qn12_2 = zf_direction(s2.hat12);
        const CVec qn21_3 = zf_direction(s3.hat21), qn12_3 = zf_direction(s3.hat12);

        // Quantization error second moments, modeled or realized.
        double d1 = d_model, d2v = d_model;
        if (empirical && forwarding) {
            RngStream sym = make_stream(cfg.seed, t, 8, 0);
            const cplx u1s = sym.cgaussian(p1), u2s = sym.cgaussian(p2);
            const cplx v1s = sym.cgaussian(p1), v2s = sym.cgaussian(p2);
            const cplx eta2 = dot(s1.h21, qr21) * u1s + dot(s1.h21, qn21) * u2s;
            const cplx eta1 = dot(s1.h12, qr12) * v1s + dot(s1.h12, qn12) * v2s;
            d2v = std::norm(quantize(eta2, qspec).error);
            d1 = std::norm(quantize(eta1, qspec).error);
        }

        // Leakage powers of the slot-2/3 private symbols, conditioned on the
        // channel draw (symbols carry power p_priv each).
        const double t12 = std::norm(dot(s2.h11, qn21_2)) * p_priv;
        const double t13 = std::norm(dot(s2.h12, qn12_2)) * p_priv;
        const double s12 = std::norm(dot(s3.h11, qn21_3)) * p_priv;
        const double s13 = std::norm(dot(s3.h12, qn12_3)) * p_priv;
        const double par1 = detail::log2_1p(t12 / (t13 + 1.0)) + detail::log2_1p(s12 / (s13 + 1.0));

        const double t12b = std::norm(dot(s2.h22, qn12_2)) * p_priv;
        const double t13b = std::norm(dot(s2.h21, qn21_2)) * p_priv;
        const double s12b = std::norm(dot(s3.h22, qn12_3)) * p_priv;
        const double s13b = std::norm(dot(s3.h21, qn21_3)) * p_priv;
        const double par2 = detail::log2_1p(t12b / (t13b + 1.0)) + detail::log2_1p(s12b / (s13b + 1.0));

        double mimo1, mimo2;
        if (forwarding) {
            // Rx-1 equivalent two-stream channel: slot-1 observation with the
            // forwarded eta1 cancelled (slot-3 relay), plus the forwarded
            // eta2 as a second look at u(1) (slot-2 relay).
            const cplx a1 = gain * std::conj(s3.h12[0]);
            const cplx a2 = gain * std::conj(s2.h11[0]);
            CMat m1(2, 2);
            m1(0, 0) = a1 * dot(s1.h11, qr21);
            m1(0, 1) = a1 * dot(s1.h11, qn21);
            m1(1, 0) = a2 * dot(s1.h21, qr21);
            m1(1, 1) = a2 * dot(s1.h21, qn21);
            const double w11 = std::norm(a1) * (d1 + 1.0) + s12 + s13 + 1.0;
            const double w22 = std::norm(a2) * d2v + t12 + t13 + 1.0;
            mimo1 = detail::two_stream_rate(m1, w11, w22, p1, p2);

            const cplx b1 = gain * std::conj(s2.h21[0]);
            const cplx b2 = gain * std::conj(s3.h22[0]);
            CMat m2(2, 2);
            m2(0, 0) = b1 * dot(s1.h22, qr12);
            m2(0, 1) = b1 * dot(s1.h22, qn12);
            m2(1, 0) = b2 * dot(s1.h12, qr12);
            m2(1, 1) = b2 * dot(s1.h12, qn12);
            const double w11b = std::norm(b1) * (d2v + 1.0) + t12b + t13b + 1.0;
            const double w22b = std::norm(b2) * d1 + s12b + s13b + 1.0;
            mimo2 = detail::two_stream_rate(m2, w11b, w22b, p1, p2);
        } else {
            // Nothing forwarded (alpha = 1): decode slot 1 directly, with the
            // residual cross interference as noise.
            const double i1 = std::norm(dot(s1.h12, qr12)) * p1 + std::norm(dot(s1.h12, qn12)) * p2;
            const double sig1 = std::norm(dot(s1.h11, qr21)) * p1 + std::norm(dot(s1.h11, qn21)) * p2;
            mimo1 = detail::log2_1p(sig1 / (i1 + 1.0));
            const double i2 = std::norm(dot(s1.h21, qr21)) * p1 + std::norm(dot(s1.h21, qn21)) * p2;
            const double sig2 = std::norm(dot(s1.h22, qr12)) * p1 + std::norm(dot(s1.h22, qn12)) * p2;
            mimo2 = detail::log2_1p(sig2 / (i2 + 1.0));
        }
        return std::pair{mimo1 + par1, mimo2 + par2};
    });
}

// ----- single-slot common/private corner scheme -----------------------------

inline RatePair run_hk_corner(const SchemeConfig& cfg) {
    detail::validate_miso(cfg);
    const CsitQuality q = make_csit_quality(cfg.alpha, cfg.power);
    const double p_priv = std::pow(cfg.power, cfg.alpha);
    const double p_common = cfg.power - p_priv;  // keeps the per-Tx budget at P

    return detail::reduce_trials(cfg, 1.0, [&](std::uint64_t t) {
        const auto s = detail::miso_slot(cfg.seed, t, 1, q);
        const CVec qn21 = zf_direction(s.hat21), qn12 = zf_direction(s.hat12);
        const double e11 = std::norm(dot(s.h11, qn21)) * p_priv;
        const double e12 = std::norm(dot(s.h12, qn12)) * p_priv;
        const double e22 = std::norm(dot(s.h22, qn12)) * p_priv;
        const double e21 = std::norm(dot(s.h21, qn21)) * p_priv;
        const double r1 = detail::log2_1p(std::norm(s.h11[0]) * p_common / (e11 + e12 + 1.0)) +
                          detail::log2_1p(e11 / (e12 + 1.0));
        const double r2 = detail::log2_1p(e22 / (e21 + 1.0));
        return std::pair{r1, r2};
    });
}

// ----- single-slot zero-forcing baseline ------------------------------------

inline RatePair run_zf_only(const SchemeConfig& cfg) {
    detail::validate_miso(cfg);
    const CsitQuality q = make_csit_quality(cfg.alpha, cfg.power);
    const double p = cfg.power;

    return detail::reduce_trials(cfg, 1.0, [&](std::uint64_t t) {
        const auto s = detail::miso_slot(cfg.seed, t, 1, q);
        const CVec qn21 = zf_direction(s.hat21), qn12 = zf_direction(s.hat12);
        const double r1 =
            detail::log2_1p(std::norm(dot(s.h11, qn21)) * p / (std::norm(dot(s.h12, qn12)) * p + 1.0));
        const double r2 =
            detail::log2_1p(std::norm(dot(s.h22, qn12)) * p / (std::norm(dot(s.h21, qn21)) * p + 1.0));
        return std::pair{r1, r2};
    });
}

// ----- enhanced protocol for (M, M, N, N) antennas, M >= 2N -----------------

namespace detail {

struct SubspacePair {
    CMat range;  // M x N
    CMat null;   // M x N
};

// Range/null precoders of a cross-link estimate, with a fixed canonical
// fallback when the estimate is identically zero (sigma2 = 1).
inline SubspacePair mimo_subspaces(const CMat& hat, std::size_t n) {
    const std::size_t m = hat.cols();
    if (hat.frobenius_norm() <= 1e-12) {
        SubspacePair sp{CMat(m, n), CMat(m, n)};
        for (std::size_t j = 0; j < n; ++j) {
            sp.range(j, j) = 1.0;
            sp.null(n + j, j) = 1.0;
        }
        return sp;
    }
    return {range_basis(hat), null_space_basis(hat, n)};
}

inline CMat hcat(const CMat& a, const CMat& b) {
    CMat m(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
    }
    return m;
}

inline CMat vcat(const CMat& a, const CMat& b) {
    CMat m(a.rows() + b.rows(), a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        for (std::size_t i = 0; i < a.rows(); ++i) m(i, j) = a(i, j);
        for (std::size_t i = 0; i < b.rows(); ++i) m(a.rows() + i, j) = b(i, j);
    }
    return m;
}

inline CMat block_diag(const CMat& a, const CMat& b) {
    CMat m(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
    return m;
}

// log2 det(I + (noise)^-1 signal) via two Cholesky factorizations.
inline double gaussian_mi_bits(const CMat& signal, CMat noise) {
    CMat total = signal;
    total += noise;
    return logdet_ratio(total, noise, LogBase::Bits);
}

}  // namespace detail

inline RatePair run_mimo_enhanced(const SchemeConfig& cfg) {
    detail::validate_mimo(cfg);
    const std::size_t m_ant = cfg.n_tx_ant, n_ant = cfg.n_rx_ant;
    const double n_rx = static_cast<double>(n_ant);
    const CsitQuality q = make_csit_quality(cfg.alpha, cfg.power);
    const double p = cfg.power;
    const auto [p1, p2] = detail::slot1_split(cfg.alpha, p);
    const double p_priv = std::pow(p, cfg.alpha);
    const double p_cw = p - p_priv;

    // Per-element source power of the residual interference vector.
    const double m_d = static_cast<double>(m_ant);
    const double src_el =
        (p1 * (m_d * (1.0 - q.sigma2) + n_rx * q.sigma2) + p2 * n_rx * q.sigma2) / n_rx;
    const double rate_bits = (1.0 - cfg.alpha) * std::log2(p);
    const QuantSpec qspec{rate_bits, src_el};
    const double d_model = model_distortion(qspec);
    const double pwr_hat_el = src_el - d_model;
    const bool forwarding = rate_bits > 1e-9 && p_cw > 0 && pwr_hat_el > 0;
    const double gain = forwarding ? std::sqrt(p_cw / (n_rx * pwr_hat_el)) : 0.0;
    const bool empirical = cfg.noise_mode == NoiseMode::Empirical;
    const double ppn = p_priv / n_rx;

    return detail::reduce_trials(cfg, 3.0, [&, p1 = p1, p2 = p2](std::uint64_t t) {
        const ChannelSample s1 = draw_sample(cfg.seed, t, 1, m_ant, n_ant, q);
        const ChannelSample s2 = draw_sample(cfg.seed, t, 2, m_ant, n_ant, q);
        const ChannelSample s3 = draw_sample(cfg.seed, t, 3, m_ant, n_ant, q);

        const auto sp21_1 = detail::mimo_subspaces(s1.link(2, 1).hat, n_ant);
        const auto sp12_1 = detail::mimo_subspaces(s1.link(1, 2).hat, n_ant);
        const auto sp21_2 = detail::mimo_subspaces(s2.link(2, 1).hat, n_ant);
        const auto sp12_2 = detail::mimo_subspaces(s2.link(1, 2).hat, n_ant);
        const auto sp21_3 = detail::mimo_subspaces(s3.link(2, 1).hat, n_ant);
        const auto sp12_3 = detail::mimo_subspaces(s3.link(1, 2).hat, n_ant);

        const CMat qp1 = detail::hcat(sp21_1.range, sp21_1.null);  // Tx-1 slot-1 precoder
        const CMat qp2 = detail::hcat(sp12_1.range, sp12_1.null);  // Tx-2 slot-1 precoder

        std::vector<double> kdiag(2 * n_ant, p1 / n_rx);
        for (std::size_t i = n_ant; i < 2 * n_ant; ++i) kdiag[i] = p2 / n_rx;

        // Per-element quantization error second moments.
        std::vector<double> d1(n_ant, d_model), d2v(n_ant, d_model);
        if (empirical && forwarding) {
            RngStream sym = make_stream(cfg.seed, t, 8, 0);
            CVec u(2 * n_ant), v(2 * n_ant);
            for (std::size_t i = 0; i < 2 * n_ant; ++i) u[i] = sym.cgaussian(kdiag[i]);
            for (std::size_t i = 0; i < 2 * n_ant; ++i) v[i] = sym.cgaussian(kdiag[i]);
            const CVec eta2 = (s1.link(2, 1).h * qp1) * u;
            const CVec eta1 = (s1.link(1, 2).h * qp2) * v;
            for (std::size_t i = 0; i < n_ant; ++i) {
                d2v[i] = std::norm(quantize(eta2[i], qspec).error);
                d1[i] = std::norm(quantize(eta1[i], qspec).error);
            }
        }

        // Private-symbol mixing blocks in slots 2 and 3.
        const CMat bt12 = s2.link(1, 1).h * sp21_2.null;   // u(2) at Rx-1
        const CMat bt13 = s2.link(1, 2).h * sp12_2.null;   // v(2) leakage at Rx-1
        const CMat bs12 = s3.link(1, 1).h * sp21_3.null;   // u(3) at Rx-1
        const CMat bs13 = s3.link(1, 2).h * sp12_3.null;   // v(3) leakage at Rx-1
        const CMat bt12b = s2.link(2, 2).h * sp12_2.null;  // v(2) at Rx-2
        const CMat bt13b = s2.link(2, 1).h * sp21_2.null;  // u(2) leakage at Rx-2
        const CMat bs12b = s3.link(2, 2).h * sp12_3.null;  // v(3) at Rx-2
        const CMat bs13b = s3.link(2, 1).h * sp21_3.null;  // u(3) leakage at Rx-2

        auto priv_noise = [&](const CMat& leak) {
            CMat w = gram_outer(leak);
            w *= cplx(ppn, 0.0);
            add_identity(w, 1.0);
            return w;
        };
        auto priv_signal = [&](const CMat& sig) {
            CMat s = gram_outer(sig);
            s *= cplx(ppn, 0.0);
            return s;
        };
        const double par1 = detail::gaussian_mi_bits(priv_signal(bt12), priv_noise(bt13)) +
                            detail::gaussian_mi_bits(priv_signal(bs12), priv_noise(bs13));
        const double par2 = detail::gaussian_mi_bits(priv_signal(bt12b), priv_noise(bt13b)) +
                            detail::gaussian_mi_bits(priv_signal(bs12b), priv_noise(bs13b));

        double mimo1, mimo2;
        if (forwarding) {
            // Relay mixing matrices: forwarded codewords ride the range
            // precoder of the current cross estimate.
            CMat a2 = s2.link(1, 1).h * sp21_2.range;
            CMat a3 = s3.link(1, 2).h * sp12_3.range;
            a2 *= cplx(gain, 0.0);
            a3 *= cplx(gain, 0.0);

            std::vector<double> d1p1(n_ant), d2p(n_ant);
            for (std::size_t i = 0; i < n_ant; ++i) {
                d1p1[i] = d1[i] + 1.0;
                d2p[i] = d2v[i];
            }
            CMat w1 = weighted_gram_outer(a3, d1p1);
            {
                CMat extra = gram_outer(bs12);
                extra += gram_outer(bs13);
                extra *= cplx(ppn, 0.0);
                w1 += extra;
                add_identity(w1, 1.0);
            }
            CMat w2 = weighted_gram_outer(a2, d2p);
            {
                CMat extra = gram_outer(bt12);
                extra += gram_outer(bt13);
                extra *= cplx(ppn, 0.0);
                w2 += extra;
                add_identity(w2, 1.0);
            }
            const CMat sblk = detail::vcat(a3 * (s1.link(1, 1).h * qp1), a2 * (s1.link(2, 1).h * qp1));
            mimo1 = detail::gaussian_mi_bits(weighted_gram_outer(sblk, kdiag), detail::block_diag(w1, w2));

            CMat a2b = s2.link(2, 1).h * sp21_2.range;
            CMat a3b = s3.link(2, 2).h * sp12_3.range;
            a2b *= cplx(gain, 0.0);
            a3b *= cplx(gain, 0.0);
            std::vector<double> d2p1(n_ant), d1p(n_ant);
            for (std::size_t i = 0; i < n_ant; ++i) {
                d2p1[i] = d2v[i] + 1.0;
                d1p[i] = d1[i];
            }
            CMat w1b = weighted_gram_outer(a2b, d2p1);
            {
                CMat extra = gram_outer(bt12b);
                extra += gram_outer(bt13b);
                extra *= cplx(ppn, 0.0);
                w1b += extra;
                add_identity(w1b, 1.0);
            }
            CMat w2b = weighted_gram_outer(a3b, d1p);
            {
                CMat extra = gram_outer(bs12b);
                extra += gram_outer(bs13b);
                extra *= cplx(ppn, 0.0);
                w2b += extra;
                add_identity(w2b, 1.0);
            }
            const CMat sblk2 = detail::vcat(a2b * (s1.link(2, 2).h * qp2), a3b * (s1.link(1, 2).h * qp2));
            mimo2 = detail::gaussian_mi_bits(weighted_gram_outer(sblk2, kdiag), detail::block_diag(w1b, w2b));
        } else {
            // alpha = 1: decode slot 1 directly against the residual leakage.
            const CMat cr1 = s1.link(1, 2).h * sp12_1.range;
            const CMat cn1 = s1.link(1, 2).h * sp12_1.null;
            CMat wdir = gram_outer(cr1);
            wdir *= cplx(p1 / n_rx, 0.0);
            {
                CMat leak = gram_outer(cn1);
                leak *= cplx(p2 / n_rx, 0.0);
                wdir += leak;
                add_identity(wdir, 1.0);
            }
            mimo1 = detail::gaussian_mi_bits(weighted_gram_outer(s1.link(1, 1).h * qp1, kdiag), wdir);

            const CMat cr2 = s1.link(2, 1).h * sp21_1.range;
            const CMat cn2 = s1.link(2, 1).h * sp21_1.null;
            CMat wdir2 = gram_outer(cr2);
            wdir2 *= cplx(p1 / n_rx, 0.0);
            {
                CMat leak = gram_outer(cn2);
                leak *= cplx(p2 / n_rx, 0.0);
                wdir2 += leak;
                add_identity(wdir2, 1.0);
            }
            mimo2 = detail::gaussian_mi_bits(weighted_gram_outer(s1.link(2, 2).h * qp2, kdiag), wdir2);
        }
        return std::pair{mimo1 + par1, mimo2 + par2};
    });
}

inline RatePair run_scheme(SchemeId id, const SchemeConfig& cfg) {
    switch (id) {
        case SchemeId::Enhanced: return run_enhanced_miso(cfg);
        case SchemeId::Hk: return run_hk_corner(cfg);
        case SchemeId::Mat: return run_mat_ic(cfg);
        case SchemeId::Zf: return run_zf_only(cfg);
        case SchemeId::Mimo: return run_mimo_enhanced(cfg);
    }
    throw std::invalid_argument("run_scheme: unknown scheme");
}

// Ensemble power budget actually allocated by a scheme configuration.
inline SlotPowers slot_power_budget(SchemeId id, const SchemeConfig& cfg) {
    detail::validate_common(cfg);
    const double p = cfg.power;
    SlotPowers sp;
    switch (id) {
        case SchemeId::Mat: {
            sp.slot1_aligned = 0.5 * p;
            sp.slot1_protected = 0.5 * p;
            sp.relay_codeword = p;
            sp.per_tx_slot = {{{p, p}, {p, 0.0}, {0.0, p}}};
            break;
        }
        case SchemeId::Enhanced:
        case SchemeId::Mimo: {
            const CsitQuality q = make_csit_quality(cfg.alpha, cfg.power);
            if (id == SchemeId::Enhanced && q.sigma2 >= 1.0) return slot_power_budget(SchemeId::Mat, cfg);
            const auto [p1, p2] = detail::slot1_split(cfg.alpha, p);
            const double p_priv = std::pow(p, cfg.alpha);
            const double p_cw = p - p_priv;
            sp.slot1_aligned = p1;
            sp.slot1_protected = p2;
            sp.relay_codeword = p_cw;
            sp.relay_private = p_priv;
            sp.per_tx_slot = {{{p1 + p2, p1 + p2}, {p_cw + p_priv, p_priv}, {p_priv, p_cw + p_priv}}};
            break;
        }
        case SchemeId::Hk: {
            const double p_priv = std::pow(p, cfg.alpha);
            sp.relay_private = p_priv;
            sp.per_tx_slot = {{{(p - p_priv) + p_priv, p_priv}, {0.0, 0.0}, {0.0, 0.0}}};
            break;
        }
        case SchemeId::Zf: {
            sp.per_tx_slot = {{{p, p}, {0.0, 0.0}, {0.0, 0.0}}};
            break;
        }
    }
    return sp;
}

}  // namespace icdof
