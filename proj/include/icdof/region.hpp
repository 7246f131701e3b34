#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

// Exact rational construction of the degrees-of-freedom region polygons and
// of the classic reference regions. Vertices come out of integer arithmetic,
// so region tests compare exactly; floating point appears only at the
// containment API used for simulated rate points.

namespace icdof {

struct Rat {
    long long num = 0;
    long long den = 1;

    Rat() = default;
    Rat(long long n) : num(n), den(1) {}
    Rat(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::invalid_argument("Rat: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string to_string() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }
};

namespace detail {

inline long long checked(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("Rat: 64-bit overflow");
    return static_cast<long long>(v);
}

inline Rat make_rat_128(__int128 n, __int128 d) {
    if (d == 0) throw std::invalid_argument("Rat: zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    __int128 a = n < 0 ? -n : n, b = d;
    while (b) {
        const __int128 t = a % b;
        a = b;
        b = t;
    }
    if (a > 1) {
        n /= a;
        d /= a;
    }
    Rat r;
    r.num = checked(n);
    r.den = checked(d);
    return r;
}

}  // namespace detail

inline Rat operator+(const Rat& a, const Rat& b) {
    return detail::make_rat_128(static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den,
                                static_cast<__int128>(a.den) * b.den);
}
inline Rat operator-(const Rat& a, const Rat& b) {
    return detail::make_rat_128(static_cast<__int128>(a.num) * b.den - static_cast<__int128>(b.num) * a.den,
                                static_cast<__int128>(a.den) * b.den);
}
inline Rat operator*(const Rat& a, const Rat& b) {
    return detail::make_rat_128(static_cast<__int128>(a.num) * b.num, static_cast<__int128>(a.den) * b.den);
}
inline Rat operator/(const Rat& a, const Rat& b) {
    if (b.num == 0) throw std::domain_error("Rat: division by zero");
    return detail::make_rat_128(static_cast<__int128>(a.num) * b.den, static_cast<__int128>(a.den) * b.num);
}
inline bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
inline bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
inline bool operator<(const Rat& a, const Rat& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}
inline bool operator<=(const Rat& a, const Rat& b) { return a == b || a < b; }

// Accepts "p/q", integers, and plain decimals ("0.25"), all parsed exactly.
inline Rat parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("parse_rational: empty string");
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        const long long n = std::stoll(text.substr(0, slash));
        const long long d = std::stoll(text.substr(slash + 1));
        return Rat(n, d);
    }
    const auto point = text.find('.');
    if (point == std::string::npos) return Rat(std::stoll(text));
    const std::string frac = text.substr(point + 1);
    if (frac.size() > 12) throw std::invalid_argument("parse_rational: too many decimal places");
    long long den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const std::string head = text.substr(0, point);
    const bool neg = !head.empty() && head[0] == '-';
    const long long whole = (head.empty() || head == "-" || head == "+") ? 0 : std::stoll(head);
    long long num = (whole < 0 ? -whole : whole) * den + (frac.empty() ? 0 : std::stoll(frac));
    if (neg || whole < 0) num = -num;
    return Rat(num, den);
}

// Half plane a*d1 + b*d2 <= c.
struct HalfPlane {
    Rat a, b, c;
};

using RatPoint = std::array<Rat, 2>;

struct RegionPolygon {
    std::string label;
    Rat alpha;
    std::size_t n_rx = 1;
    std::vector<RatPoint> vertices;  // extreme points, counter-clockwise
    std::vector<HalfPlane> half_planes;
};

inline bool satisfies(const HalfPlane& hp, const RatPoint& p) {
    return hp.a * p[0] + hp.b * p[1] <= hp.c;
}

namespace detail {

inline std::vector<RatPoint> enumerate_vertices(const std::vector<HalfPlane>& hps) {
    std::vector<RatPoint> pts;
    for (std::size_t i = 0; i < hps.size(); ++i)
        for (std::size_t j = i + 1; j < hps.size(); ++j) {
            const Rat det = hps[i].a * hps[j].b - hps[j].a * hps[i].b;
            if (det.num == 0) continue;
            const RatPoint p{(hps[i].c * hps[j].b - hps[j].c * hps[i].b) / det,
                             (hps[i].a * hps[j].c - hps[j].a * hps[i].c) / det};
            bool feasible = true;
            for (const auto& hp : hps)
                if (!satisfies(hp, p)) {
                    feasible = false;
                    break;
                }
            if (!feasible) continue;
            bool dup = false;
            for (const auto& q : pts)
                if (q[0] == p[0] && q[1] == p[1]) {
                    dup = true;
                    break;
                }
            if (!dup) pts.push_back(p);
        }

    // Counter-clockwise order around the centroid, exact comparisons only.
    Rat cx(0), cy(0);
    for (const auto& p : pts) {
        cx = cx + p[0];
        cy = cy + p[1];
    }
    const Rat n(static_cast<long long>(pts.size()));
    if (pts.size() > 2) {
        cx = cx / n;
        cy = cy / n;
        auto half = [&](const RatPoint& p) {
            const Rat dy = p[1] - cy;
            const Rat dx = p[0] - cx;
            if (Rat(0) < dy) return 0;
            if (dy < Rat(0)) return 1;
            return dx < Rat(0) ? 1 : 0;
        };
        std::sort(pts.begin(), pts.end(), [&](const RatPoint& p, const RatPoint& q) {
            const int hp = half(p), hq = half(q);
            if (hp != hq) return hp < hq;
            const Rat cross = (p[0] - cx) * (q[1] - cy) - (q[0] - cx) * (p[1] - cy);
            if (cross.num != 0) return Rat(0) < cross;
            // Collinear with the centroid: nearer point first for determinism.
            const Rat dp = (p[0] - cx) * (p[0] - cx) + (p[1] - cy) * (p[1] - cy);
            const Rat dq = (q[0] - cx) * (q[0] - cx) + (q[1] - cy) * (q[1] - cy);
            return dp < dq;
        });
    }
    return pts;
}

inline RegionPolygon build_region(std::string label, Rat alpha, std::size_t n_rx,
                                  std::vector<HalfPlane> hps) {
    RegionPolygon r;
    r.label = std::move(label);
    r.alpha = alpha;
    r.n_rx = n_rx;
    r.half_planes = std::move(hps);
    r.vertices = enumerate_vertices(r.half_planes);
    return r;
}

}  // namespace detail

// Outer-bound polygon for the single-antenna-receiver case:
// d_i <= 1, 2 d1 + d2 <= 2 + alpha, d1 + 2 d2 <= 2 + alpha, d_i >= 0.
inline RegionPolygon miso_dof_region(const Rat& alpha) {
    if (alpha < Rat(0) || Rat(1) < alpha)
        throw std::invalid_argument("miso_dof_region: alpha must lie in [0,1]");
    const Rat bound = Rat(2) + alpha;
    return detail::build_region("dof_region_miso", alpha, 1,
                                {{Rat(-1), Rat(0), Rat(0)},
                                 {Rat(0), Rat(-1), Rat(0)},
                                 {Rat(1), Rat(0), Rat(1)},
                                 {Rat(0), Rat(1), Rat(1)},
                                 {Rat(2), Rat(1), bound},
                                 {Rat(1), Rat(2), bound}});
}

// N-receive-antenna case: the same polygon scaled by N.
inline RegionPolygon mimo_dof_region(const Rat& alpha, std::size_t n_rx) {
    if (n_rx < 1) throw std::invalid_argument("mimo_dof_region: need at least one receive antenna");
    if (alpha < Rat(0) || Rat(1) < alpha)
        throw std::invalid_argument("mimo_dof_region: alpha must lie in [0,1]");
    const Rat n(static_cast<long long>(n_rx));
    const Rat bound = (Rat(2) + alpha) * n;
    RegionPolygon r = detail::build_region("dof_region_mimo", alpha, n_rx,
                                           {{Rat(-1), Rat(0), Rat(0)},
                                            {Rat(0), Rat(-1), Rat(0)},
                                            {Rat(1), Rat(0), n},
                                            {Rat(0), Rat(1), n},
                                            {Rat(2), Rat(1), bound},
                                            {Rat(1), Rat(2), bound}});
    return r;
}

// Classic comparison regions. The no-CSIT polygon is included as a reference
// only; it is quoted from earlier results, not established here.
inline std::vector<RegionPolygon> reference_regions() {
    std::vector<RegionPolygon> out;
    out.push_back(detail::build_region("no_csit", Rat(0), 1,
                                       {{Rat(-1), Rat(0), Rat(0)},
                                        {Rat(0), Rat(-1), Rat(0)},
                                        {Rat(1), Rat(1), Rat(1)}}));
    RegionPolygon delayed = miso_dof_region(Rat(0));
    delayed.label = "delayed_csit";
    out.push_back(std::move(delayed));
    RegionPolygon perfect = miso_dof_region(Rat(1));
    perfect.label = "perfect_csit";
    out.push_back(std::move(perfect));
    return out;
}

inline bool contains_exact(const RegionPolygon& region, const Rat& d1, const Rat& d2) {
    for (const auto& hp : region.half_planes)
        if (!satisfies(hp, {d1, d2})) return false;
    return true;
}

// Containment with the polygon inflated by eps in Chebyshev distance: each
// half plane a x + b y <= c relaxes to c + eps * (|a| + |b|).
inline bool contains(const RegionPolygon& region, double d1, double d2, double eps = 0.0) {
    for (const auto& hp : region.half_planes) {
        const double a = hp.a.to_double(), b = hp.b.to_double(), c = hp.c.to_double();
        if (a * d1 + b * d2 > c + eps * (std::abs(a) + std::abs(b)) + 1e-12) return false;
    }
    return true;
}

}  // namespace icdof
