#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "icdof/channel.hpp"
#include "icdof/linalg.hpp"
#include "icdof/rng.hpp"

// Numeric verification of the log-det expectation sandwich: for H = Hhat + Herr
// with i.i.d. CN(0, sigma2) error entries and K >= 0 with eigenvalues
// lambda_1 >= ... >= lambda_M,
//   sum_i log(1 + lambda_i sigma2 e^zeta) - O(1)
//     <= E log det(I + H K H^H)
//     <= sum_i log(1 + ||Hhat||_F^2 lambda_i) + O(1),
// and per index the upper/lower gap is at most -log sigma2 + O(1). The O(1)
// terms are absorbed into a single slack constant. Everything is in nats.

namespace icdof {

inline constexpr double kEulerGamma = 0.5772156649015329;

// Digamma at positive integers: psi(x) = -gamma + sum_{p<x} 1/p.
inline double digamma_int(long long x) {
    if (x < 1) throw std::invalid_argument("digamma_int: argument must be a positive integer");
    double s = -kEulerGamma;
    for (long long p = 1; p < x; ++p) s += 1.0 / static_cast<double>(p);
    return s;
}

// zeta(N) = (1/N) sum_{i=1..N} psi(N - i + 1) = (1/N) sum_{k=1..N} psi(k).
inline double zeta_const(std::size_t n) {
    if (n < 1) throw std::invalid_argument("zeta_const: need N >= 1");
    double s = 0;
    for (std::size_t k = 1; k <= n; ++k) s += digamma_int(static_cast<long long>(k));
    return s / static_cast<double>(n);
}

struct BoundInstance {
    CMat hat;           // N x M estimate
    double sigma2 = 1;  // per-entry error variance, in (0, 1]
    CMat k;             // M x M Hermitian PSD input covariance
};

struct BoundPair {
    double lower = 0;
    double upper = 0;
};

namespace detail {

inline void validate_instance(const BoundInstance& inst) {
    if (inst.hat.rows() < 1 || inst.hat.cols() < inst.hat.rows())
        throw std::invalid_argument("bounds: expected N x M with M >= N");
    if (inst.k.rows() != inst.hat.cols() || inst.k.cols() != inst.hat.cols())
        throw std::invalid_argument("bounds: K must be M x M");
    if (!(inst.sigma2 > 0) || inst.sigma2 > 1)
        throw std::invalid_argument("bounds: sigma2 must lie in (0, 1]");
    require_hermitian(inst.k, "bounds");
}

inline std::vector<double> top_eigenvalues(const BoundInstance& inst) {
    std::vector<double> lam = eig_hermitian(inst.k);
    for (auto& l : lam) l = std::max(l, 0.0);  // clip eigenvalue roundoff
    return lam;
}

}  // namespace detail

// Matrix-case bounds (nats), summed over the N largest eigenvalues of K.
inline BoundPair logdet_bounds(const BoundInstance& inst) {
    detail::validate_instance(inst);
    const std::size_t n = inst.hat.rows();
    const auto lam = detail::top_eigenvalues(inst);
    const double ez = std::exp(zeta_const(n));
    const double hat2 = inst.hat.frobenius_norm2();
    BoundPair b;
    for (std::size_t i = 0; i < n; ++i) {
        b.lower += std::log1p(lam[i] * inst.sigma2 * ez);
        b.upper += std::log1p(hat2 * lam[i]);
    }
    return b;
}

// Vector case (N = 1): lower log(1 + e^-gamma sigma2 lambda_1), upper
// log(1 + ||hat||^2 lambda_1).
inline BoundPair logdet_bounds_vector(const BoundInstance& inst) {
    if (inst.hat.rows() != 1) throw std::invalid_argument("logdet_bounds_vector: expected a 1 x M estimate");
    return logdet_bounds(inst);
}

// Monte Carlo estimate of E log det(I + H K H^H) over the estimation error.
inline std::pair<double, double> mc_logdet(std::uint64_t seed, const BoundInstance& inst,
                                           std::size_t n_trials) {
    detail::validate_instance(inst);
    if (n_trials < 2) throw std::invalid_argument("mc_logdet: need at least 2 trials");
    const std::size_t n = inst.hat.rows(), m = inst.hat.cols();
    const double err_sd = std::sqrt(inst.sigma2);
    double sum = 0, sum2 = 0;
    for (std::uint64_t t = 0; t < n_trials; ++t) {
        RngStream rng = make_stream(seed, t, 0, 0);
        CMat h = inst.hat;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j) h(i, j) += err_sd * rng.cgaussian(1.0);
        CMat s = h * inst.k * h.adjoint();
        // Symmetrize roundoff from the explicit triple product.
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                const cplx v = 0.5 * (s(i, j) + std::conj(s(j, i)));
                s(i, j) = v;
                s(j, i) = std::conj(v);
            }
        add_identity(s, 1.0);
        const double v = logdet_posdef(s, LogBase::Nats);
        sum += v;
        sum2 += v * v;
    }
    const double cnt = static_cast<double>(n_trials);
    const double mean = sum / cnt;
    const double var = std::max(0.0, (sum2 - cnt * mean * mean) / (cnt - 1.0));
    return {mean, std::sqrt(var / cnt)};
}

struct BoundReport {
    double mc_mean = 0;
    double mc_stderr = 0;
    double lower = 0;
    double upper = 0;
    double gap_bound = 0;      // -log sigma2 + slack
    double max_index_gap = 0;  // worst per-index upper-lower difference
    bool sandwich_ok = false;
    bool gap_ok = false;

    bool ok() const { return sandwich_ok && gap_ok; }
};

// Runs the Monte Carlo estimate and checks both claims:
//   lower - slack <= mc <= upper + slack, and
//   per-index gap <= -log sigma2 + slack.
// The gap claim is stated per eigenvalue index, so it is checked that way.
inline BoundReport check_sandwich(std::uint64_t seed, const BoundInstance& inst, std::size_t n_trials,
                                  double slack_const = 3.0) {
    const BoundPair b = logdet_bounds(inst);
    const auto [mean, se] = mc_logdet(seed, inst, n_trials);

    const std::size_t n = inst.hat.rows();
    const auto lam = detail::top_eigenvalues(inst);
    const double ez = std::exp(zeta_const(n));
    const double hat2 = inst.hat.frobenius_norm2();
    double max_gap = 0;
    for (std::size_t i = 0; i < n; ++i)
        max_gap = std::max(max_gap, std::log1p(hat2 * lam[i]) - std::log1p(lam[i] * inst.sigma2 * ez));

    BoundReport r;
    r.mc_mean = mean;
    r.mc_stderr = se;
    r.lower = b.lower;
    r.upper = b.upper;
    r.gap_bound = -std::log(inst.sigma2) + slack_const;
    r.max_index_gap = max_gap;
    r.sandwich_ok = (b.lower - slack_const <= mean) && (mean <= b.upper + slack_const);
    r.gap_ok = max_gap <= r.gap_bound;
    return r;
}

// Random instance used by the verification suites: a random-direction
// estimate with fixed Frobenius norm ||Hhat||_F^2 = N*M (the ensemble mean for
// unit-variance entries) and a random PSD K of trace ~ M * lambda_scale.
inline BoundInstance random_instance(std::uint64_t seed, std::uint64_t index, std::size_t n,
                                     std::size_t m, double sigma2, double lambda_scale = 1.0) {
    RngStream rng(seed, 0xB0UL << 32 | index);
    BoundInstance inst;
    inst.hat = CMat(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) inst.hat(i, j) = rng.cgaussian(1.0);
    const double scale = std::sqrt(static_cast<double>(n * m) / inst.hat.frobenius_norm2());
    inst.hat *= cplx(scale, 0.0);
    CMat b(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) b(i, j) = rng.cgaussian(lambda_scale);
    inst.k = gram_outer(b);
    inst.k *= cplx(1.0 / static_cast<double>(m), 0.0);
    inst.sigma2 = sigma2;
    return inst;
}

}  // namespace icdof
