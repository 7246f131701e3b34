// Acceptance suite: end-to-end checks of the toolkit against the known
// theory values, one PASS/FAIL line per criterion. Exits nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "icdof/bounds.hpp"
#include "icdof/channel.hpp"
#include "icdof/dof_fit.hpp"
#include "icdof/quantizer.hpp"
#include "icdof/region.hpp"
#include "icdof/schemes.hpp"

using namespace icdof;

namespace {

int g_failures = 0;

void report(int id, const std::string& label, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, label.c_str(), detail.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct CurveKey {
    std::string scheme;
    double alpha;
    bool operator<(const CurveKey& o) const {
        return scheme < o.scheme || (scheme == o.scheme && alpha < o.alpha);
    }
};

std::map<CurveKey, RateCurve> g_curves;  // shared between slope and containment checks

const std::vector<double> kGrid = db_grid(40, 80, 5);
constexpr std::size_t kTrials = 3000;
constexpr std::uint64_t kSeed = 20240917;

const RateCurve& swept(SchemeId id, double alpha, std::size_t m_ant = 2, std::size_t n_ant = 1) {
    const CurveKey key{scheme_name(id), alpha};
    auto it = g_curves.find(key);
    if (it != g_curves.end()) return it->second;
    SchemeConfig cfg;
    cfg.alpha = alpha;
    cfg.trials = kTrials;
    cfg.seed = kSeed;
    cfg.n_tx_ant = m_ant;
    cfg.n_rx_ant = n_ant;
    return g_curves.emplace(key, sweep(id, cfg, kGrid)).first->second;
}

// --- criterion 1: exact region vertices -------------------------------------

void criterion_region() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string bad;
    for (const Rat alpha : {Rat(0), Rat(1, 4), Rat(1, 2), Rat(3, 4), Rat(1)}) {
        const RegionPolygon region = miso_dof_region(alpha);
        const Rat mid = (Rat(2) + alpha) / Rat(3);
        std::vector<RatPoint> expected = {{Rat(0), Rat(0)}, {Rat(0), Rat(1)}, {alpha, Rat(1)},
                                          {mid, mid},       {Rat(1), alpha}, {Rat(1), Rat(0)}};
        std::vector<RatPoint> uniq;
        for (const auto& p : expected) {
            bool dup = false;
            for (const auto& q : uniq) dup = dup || (q[0] == p[0] && q[1] == p[1]);
            if (!dup) uniq.push_back(p);
        }
        bool match = uniq.size() == region.vertices.size();
        for (const auto& p : uniq) {
            bool found = false;
            for (const auto& v : region.vertices) found = found || (v[0] == p[0] && v[1] == p[1]);
            match = match && found;
        }
        if (!match) {
            pass = false;
            bad += " alpha=" + alpha.to_string();
        }
    }
    const double dt = seconds_since(t0);
    pass = pass && dt < 1.0;
    char detail[128];
    std::snprintf(detail, sizeof detail, "5 alphas exact%s, %.3f s", bad.c_str(), dt);
    report(1, "region vertices exact", pass, detail);
}

// --- criteria 2-5: DoF slopes ------------------------------------------------

bool slope_close(const DofFit& fit, double target1, double target2, double tol, std::string& detail) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "slopes (%.4f, %.4f) vs (%.4f, %.4f) tol %.2f; ", fit.slope1, fit.slope2,
                  target1, target2, tol);
    detail += buf;
    return std::abs(fit.slope1 - target1) <= tol && std::abs(fit.slope2 - target2) <= tol;
}

void criterion_enhanced() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;
    for (const double alpha : {0.0, 0.5, 1.0}) {
        const auto fit = fit_dof(swept(SchemeId::Enhanced, alpha), 5);
        const double target = (2.0 + alpha) / 3.0;
        pass = slope_close(fit, target, target, 0.1, detail) && pass;
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.1f s", seconds_since(t0));
    pass = pass && seconds_since(t0) < 3.0 * 300.0;
    report(2, "enhanced scheme per-user DoF (2+a)/3", pass, detail + buf);
}

void criterion_corner() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;
    for (const double alpha : {0.0, 0.5, 1.0}) {
        const auto fit = fit_dof(swept(SchemeId::Hk, alpha), 5);
        pass = slope_close(fit, 1.0, alpha, 0.1, detail) && pass;
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.1f s", seconds_since(t0));
    report(3, "corner scheme DoF (1, a)", pass, detail + buf);
}

void criterion_mat() {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    const RateCurve& mat = swept(SchemeId::Mat, 0.0);
    const auto fit = fit_dof(mat, 5);
    bool pass = slope_close(fit, 2.0 / 3.0, 2.0 / 3.0, 0.1, detail);

    // Consistency with the enhanced scheme at alpha = 0: same seed, per-point
    // agreement within twice the combined standard error.
    const RateCurve& enh = swept(SchemeId::Enhanced, 0.0);
    double worst = 0;
    for (std::size_t i = 0; i < mat.points.size(); ++i) {
        const auto& a = mat.points[i];
        const auto& b = enh.points[i];
        const double tol1 = 2.0 * std::sqrt(a.se1 * a.se1 + b.se1 * b.se1);
        const double tol2 = 2.0 * std::sqrt(a.se2 * a.se2 + b.se2 * b.se2);
        worst = std::max({worst, std::abs(a.r1 - b.r1) - tol1, std::abs(a.r2 - b.r2) - tol2});
        pass = pass && std::abs(a.r1 - b.r1) <= tol1 && std::abs(a.r2 - b.r2) <= tol2;
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "worst margin vs enhanced(a=0) %.3g, %.1f s", worst, seconds_since(t0));
    report(4, "analog baseline DoF 2/3 and alpha=0 agreement", pass, detail + buf);
}

void criterion_mimo() {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    const auto fit = fit_dof(swept(SchemeId::Mimo, 0.5, 4, 2), 5);
    const double target = 2.0 * 2.5 / 3.0;
    bool pass = slope_close(fit, target, target, 0.15, detail);
    const double dt = seconds_since(t0);
    pass = pass && dt < 600.0;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.1f s", dt);
    report(5, "(4,4,2,2) MIMO per-user DoF N(2+a)/3", pass, detail + buf);
}

// --- criterion 6: containment in the inflated outer bound --------------------

void criterion_containment() {
    bool pass = true;
    std::string detail;
    const double eps = 0.05;
    auto check_point = [&](const RateCurve& curve, std::size_t n_rx) {
        const Rat alpha = curve.alpha == 0.0 ? Rat(0) : (curve.alpha == 0.5 ? Rat(1, 2) : Rat(1));
        const RegionPolygon region = n_rx == 1 ? miso_dof_region(alpha) : mimo_dof_region(alpha, n_rx);
        const RatePair& top = curve.points.back();
        const double logp = std::log2(top.power);
        const bool inside = contains(region, top.r1 / logp, top.r2 / logp, eps);
        if (!inside) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "%s a=%.1f OUT (%.3f, %.3f); ", curve.scheme.c_str(), curve.alpha,
                          top.r1 / logp, top.r2 / logp);
            detail += buf;
        }
        pass = pass && inside;
    };
    for (const double alpha : {0.0, 0.5, 1.0}) {
        check_point(swept(SchemeId::Enhanced, alpha), 1);
        check_point(swept(SchemeId::Hk, alpha), 1);
        check_point(swept(SchemeId::Zf, alpha), 1);
    }
    check_point(swept(SchemeId::Mat, 0.0), 1);
    check_point(swept(SchemeId::Mimo, 0.5, 4, 2), 2);
    if (detail.empty()) detail = "all normalized 80 dB points inside, eps 0.05";
    report(6, "outer-bound containment at 80 dB", pass, detail);
}

// --- criterion 7: log-det sandwich -------------------------------------------

void criterion_bounds() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::size_t checked = 0, failed = 0;
    double worst_se = 0;
    for (const auto& [n, m] : {std::pair<std::size_t, std::size_t>{1, 2}, {2, 4}}) {
        for (const double s2 : {1.0, 0.1, 0.01}) {
            for (std::uint64_t i = 0; i < 100; ++i) {
                const double lscale = (i % 10 == 9) ? 1e6 : 1.0;
                const BoundInstance inst =
                    random_instance(kSeed, i + static_cast<std::uint64_t>(s2 * 1e6) * 977 + n * 131071, n, m,
                                    s2, lscale);
                const BoundReport rep = check_sandwich(kSeed ^ (i * 2654435761ULL + n), inst, 10000, 3.0);
                ++checked;
                worst_se = std::max(worst_se, rep.mc_stderr);
                if (!rep.ok() || rep.mc_stderr >= 0.05) ++failed;
            }
        }
    }
    pass = failed == 0;
    const double dt = seconds_since(t0);
    pass = pass && dt < 120.0;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%zu/%zu instances, worst stderr %.4f, %.1f s", checked - failed, checked,
                  worst_se, dt);
    report(7, "log-det sandwich with 3-nat slack", pass, buf);
}

// --- criterion 8: leakage identity -------------------------------------------

void criterion_leakage() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;
    std::uint64_t seed = kSeed;
    for (const double alpha : {0.0, 0.5, 1.0}) {
        for (const double p : {1e4, 1e6, 1e8}) {
            const auto [mean, se] = leakage_power_mc(seed++, alpha, p, 100000);
            const double target = sigma2_of(alpha, p);
            if (std::abs(mean - target) >= 4.0 * se) {
                char buf[96];
                std::snprintf(buf, sizeof buf, "a=%.1f P=%.0e off: %.3g vs %.3g; ", alpha, p, mean, target);
                detail += buf;
                pass = false;
            }
        }
    }
    const double dt = seconds_since(t0);
    pass = pass && dt < 60.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "9 combinations within 4 SE, %.1f s", dt);
    report(8, "zero-forcing leakage equals sigma^2", pass, detail + buf);
}

// --- criterion 9: quantizer distortion exponent -------------------------------

void criterion_quantizer() {
    const std::vector<double> rates = {4.0, 8.0, 12.0, 16.0};
    std::vector<double> logd;
    for (const double r : rates) {
        const auto [d, se] =
            empirical_distortion(RngStream(kSeed, 0x9000 + static_cast<std::uint64_t>(r)), {r, 1.0}, 200000);
        logd.push_back(std::log2(d));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        mx += rates[i];
        my += logd[i];
    }
    mx /= 4.0;
    my /= 4.0;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        sxx += (rates[i] - mx) * (rates[i] - mx);
        sxy += (rates[i] - mx) * (logd[i] - my);
    }
    const double slope = sxy / sxx;
    char buf[64];
    std::snprintf(buf, sizeof buf, "slope %.4f vs -1 tol 0.1", slope);
    report(9, "quantizer distortion-rate exponent", std::abs(slope + 1.0) <= 0.1, buf);
}

}  // namespace

int main() {
    criterion_region();
    criterion_enhanced();
    criterion_corner();
    criterion_mat();
    criterion_mimo();
    criterion_containment();
    criterion_bounds();
    criterion_leakage();
    criterion_quantizer();
    if (g_failures == 0)
        std::printf("acceptance: all criteria passed\n");
    else
        std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
    return g_failures;
}
