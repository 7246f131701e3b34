#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "icdof/bounds.hpp"
#include "icdof/dof_fit.hpp"
#include "icdof/region.hpp"

// File formats of the toolkit:
//  - region polygons as JSON with exact numerator/denominator pairs,
//  - rate curves as CSV (header + rows) with a '# fit' JSON footer line,
//  - bound reports as JSON rows.
// All writers go through an atomic write-temp-then-rename.

namespace icdof {

using json = nlohmann::ordered_json;

inline void write_text_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
    fs::rename(tmp, target);
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ----- region polygons -------------------------------------------------------

inline json rat_to_json(const Rat& r) { return json{{"num", r.num}, {"den", r.den}}; }

inline Rat rat_from_json(const json& j) { return Rat(j.at("num").get<long long>(), j.at("den").get<long long>()); }

inline json region_to_json(const RegionPolygon& region) {
    json j;
    j["label"] = region.label;
    j["alpha"] = rat_to_json(region.alpha);
    j["n_rx"] = region.n_rx;
    j["vertices"] = json::array();
    for (const auto& v : region.vertices) j["vertices"].push_back(json::array({rat_to_json(v[0]), rat_to_json(v[1])}));
    j["half_planes"] = json::array();
    for (const auto& hp : region.half_planes)
        j["half_planes"].push_back(json{{"a", rat_to_json(hp.a)}, {"b", rat_to_json(hp.b)}, {"c", rat_to_json(hp.c)}});
    return j;
}

inline RegionPolygon region_from_json(const json& j) {
    RegionPolygon region;
    region.label = j.at("label").get<std::string>();
    region.alpha = rat_from_json(j.at("alpha"));
    region.n_rx = j.at("n_rx").get<std::size_t>();
    for (const auto& v : j.at("vertices")) region.vertices.push_back({rat_from_json(v.at(0)), rat_from_json(v.at(1))});
    for (const auto& hp : j.at("half_planes"))
        region.half_planes.push_back({rat_from_json(hp.at("a")), rat_from_json(hp.at("b")), rat_from_json(hp.at("c"))});
    return region;
}

// ----- rate curves -----------------------------------------------------------

inline json fit_to_json(const DofFit& fit) {
    return json{{"slope1", fit.slope1},
                {"slope2", fit.slope2},
                {"se_slope1", fit.se_slope1},
                {"se_slope2", fit.se_slope2},
                {"window_begin", fit.window_begin},
                {"window_end", fit.window_end},
                {"diff_quotient1", fit.diff_quotient1},
                {"diff_quotient2", fit.diff_quotient2}};
}

inline DofFit fit_from_json(const json& j) {
    DofFit f;
    f.slope1 = j.at("slope1").get<double>();
    f.slope2 = j.at("slope2").get<double>();
    f.se_slope1 = j.at("se_slope1").get<double>();
    f.se_slope2 = j.at("se_slope2").get<double>();
    f.window_begin = j.at("window_begin").get<std::size_t>();
    f.window_end = j.at("window_end").get<std::size_t>();
    f.diff_quotient1 = j.at("diff_quotient1").get<double>();
    f.diff_quotient2 = j.at("diff_quotient2").get<double>();
    return f;
}

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

// CSV schema: scheme,alpha,P_dB,r1,se1,r2,se2 (UTF-8, '.' decimal separator),
// followed by one '# fit {...}' footer when a fit is attached.
inline std::string curve_to_csv(const RateCurve& curve, const DofFit* fit = nullptr) {
    std::ostringstream out;
    out << "scheme,alpha,P_dB,r1,se1,r2,se2\n";
    for (std::size_t i = 0; i < curve.power.size(); ++i) {
        const RatePair& pt = curve.points[i];
        out << curve.scheme << ',' << detail::fmt_double(curve.alpha) << ','
            << detail::fmt_double(10.0 * std::log10(curve.power[i])) << ',' << detail::fmt_double(pt.r1) << ','
            << detail::fmt_double(pt.se1) << ',' << detail::fmt_double(pt.r2) << ',' << detail::fmt_double(pt.se2)
            << '\n';
    }
    if (fit) out << "# fit " << fit_to_json(*fit).dump() << '\n';
    return out.str();
}

struct ParsedCurve {
    RateCurve curve;
    bool has_fit = false;
    DofFit fit;
};

inline ParsedCurve curve_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "scheme,alpha,P_dB,r1,se1,r2,se2")
        throw std::runtime_error("curve_from_csv: missing or unexpected header");
    ParsedCurve out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("# fit ", 0) == 0) {
            out.fit = fit_from_json(json::parse(line.substr(6)));
            out.has_fit = true;
            continue;
        }
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() != 7) throw std::runtime_error("curve_from_csv: malformed row: " + line);
        out.curve.scheme = cells[0];
        out.curve.alpha = std::stod(cells[1]);
        const double p = std::pow(10.0, std::stod(cells[2]) / 10.0);
        RatePair pt;
        pt.power = p;
        pt.alpha = out.curve.alpha;
        pt.r1 = std::stod(cells[3]);
        pt.se1 = std::stod(cells[4]);
        pt.r2 = std::stod(cells[5]);
        pt.se2 = std::stod(cells[6]);
        out.curve.power.push_back(p);
        out.curve.points.push_back(pt);
    }
    return out;
}

// ----- bound reports ---------------------------------------------------------

inline json bound_report_to_json(const BoundReport& r) {
    return json{{"mc_mean", r.mc_mean},     {"mc_stderr", r.mc_stderr},
                {"lower", r.lower},         {"upper", r.upper},
                {"gap_bound", r.gap_bound}, {"max_index_gap", r.max_index_gap},
                {"sandwich_ok", r.sandwich_ok}, {"gap_ok", r.gap_ok}};
}

}  // namespace icdof
