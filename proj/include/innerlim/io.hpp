#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "innerlim/errors.hpp"
#include "innerlim/gh.hpp"
#include "innerlim/glued.hpp"
#include "innerlim/metric_space.hpp"
#include "innerlim/sampler.hpp"

namespace innerlim::io {

using Json = nlohmann::ordered_json;

// { "n": int, "labels": [...], "dist_upper": [strict upper triangle, row-major] }
inline Json space_to_json(const FiniteMetricSpace& X) {
    Json j;
    j["n"] = X.size();
    j["labels"] = X.labels();
    auto upper = X.upper_triangle();
    for (double v : upper)
        if (!std::isfinite(v))
            fail("NonFinite", "cannot serialize infinite distances (disconnected space)");
    j["dist_upper"] = std::move(upper);
    return j;
}

// Loads and validates; tol_triangle < 0 picks 1e-9 * diameter.
inline FiniteMetricSpace space_from_json(const Json& j, double tol_triangle = -1.0) {
    if (!j.contains("n") || !j.contains("dist_upper"))
        fail("ParseError", "space json needs n and dist_upper");
    const int n = j.at("n").get<int>();
    std::vector<double> upper = j.at("dist_upper").get<std::vector<double>>();
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    auto X = FiniteMetricSpace::from_upper(n, upper, std::move(labels));
    const double tol = tol_triangle >= 0 ? tol_triangle : 1e-9 * diameter(X);
    const auto rep = validate_metric(X, tol);
    if (!rep.ok)
        fail(to_string(rep.issue), "loaded matrix fails validation at (" +
                                       std::to_string(rep.witness[0]) + "," +
                                       std::to_string(rep.witness[1]) + "," +
                                       std::to_string(rep.witness[2]) + ")");
    return X;
}

inline Json sampled_to_json(const SampledSpace& s) {
    Json j = space_to_json(*s.metric());
    j["chart"] = s.spec.polar() ? "polar" : "planar";
    Json coords = Json::array();
    for (const auto& c : s.coords) coords.push_back({c[0], c[1]});
    j["coords"] = std::move(coords);
    j["boundary_dist"] = s.boundary_dist;
    j["area_estimate"] = s.area_estimate;
    return j;
}

struct LoadedSampled {
    FiniteMetricSpace space;
    std::vector<std::array<double, 2>> coords;
    std::vector<double> boundary_dist;
    double area_estimate = 0.0;
};

inline LoadedSampled sampled_from_json(const Json& j) {
    LoadedSampled out;
    out.space = space_from_json(j);
    if (j.contains("coords"))
        for (const auto& c : j.at("coords")) out.coords.push_back({c.at(0), c.at(1)});
    if (j.contains("boundary_dist"))
        out.boundary_dist = j.at("boundary_dist").get<std::vector<double>>();
    if (j.contains("area_estimate")) out.area_estimate = j.at("area_estimate").get<double>();
    return out;
}

// Declarative domain-spec documents: kind plus parameters.
inline Json domain_spec_to_json(const DomainSpec& s) {
    Json j;
    switch (s.kind) {
        case DomainSpec::Kind::polar_band: j["kind"] = "polar_band"; break;
        case DomainSpec::Kind::multi_sheet_polar: j["kind"] = "multi_sheet_polar"; break;
        case DomainSpec::Kind::planar_region: j["kind"] = "planar_region"; break;
        case DomainSpec::Kind::composite_rectangles: j["kind"] = "composite_rectangles"; break;
    }
    j["name"] = s.name;
    auto profile = [](const RadialProfile& p) {
        Json jp;
        switch (p.kind) {
            case RadialProfile::Kind::constant:
                jp["form"] = "constant";
                jp["a"] = p.a;
                break;
            case RadialProfile::Kind::harmonic:
                jp["form"] = "harmonic";
                jp["a"] = p.a;
                jp["b"] = p.b;
                jp["k"] = p.k;
                break;
            case RadialProfile::Kind::inverse_theta_sin:
                jp["form"] = "inverse_theta_sin";
                jp["a"] = p.a;
                jp["b"] = p.b;
                jp["c"] = p.c;
                jp["theta_min"] = p.theta_min;
                break;
        }
        return jp;
    };
    if (s.polar()) {
        j["r_inner"] = profile(s.r_inner);
        j["r_outer"] = profile(s.r_outer);
        if (s.kind == DomainSpec::Kind::multi_sheet_polar) j["sheets"] = s.sheets;
    }
    if (!s.disks.empty()) {
        Json arr = Json::array();
        for (const auto& d : s.disks) arr.push_back({d.cx, d.cy, d.r});
        j["disks"] = std::move(arr);
    }
    if (!s.triangles.empty()) {
        Json arr = Json::array();
        for (const auto& t : s.triangles)
            arr.push_back({{t.p[0][0], t.p[0][1]}, {t.p[1][0], t.p[1][1]}, {t.p[2][0], t.p[2][1]}});
        j["triangles"] = std::move(arr);
    }
    if (!s.rects.empty()) {
        Json arr = Json::array();
        for (const auto& r : s.rects) arr.push_back({r.x0, r.y0, r.x1, r.y1});
        j["rects"] = std::move(arr);
        if (s.periodic_x) j["periodic_x"] = true;
        if (s.periodic_y) j["periodic_y"] = true;
    }
    if (!s.holes.empty()) {
        Json arr = Json::array();
        for (const auto& h : s.holes) arr.push_back({h.cx, h.cy, h.r});
        j["holes"] = std::move(arr);
    }
    return j;
}

inline DomainSpec domain_spec_from_json(const Json& j) {
    DomainSpec s;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "polar_band")
        s.kind = DomainSpec::Kind::polar_band;
    else if (kind == "multi_sheet_polar")
        s.kind = DomainSpec::Kind::multi_sheet_polar;
    else if (kind == "planar_region")
        s.kind = DomainSpec::Kind::planar_region;
    else if (kind == "composite_rectangles")
        s.kind = DomainSpec::Kind::composite_rectangles;
    else
        fail("ParseError", "unknown domain kind " + kind);
    if (j.contains("name")) s.name = j.at("name").get<std::string>();
    auto profile = [](const Json& jp) {
        const std::string form = jp.at("form").get<std::string>();
        if (form == "constant") return RadialProfile::constant(jp.at("a").get<double>());
        if (form == "harmonic")
            return RadialProfile::harmonic(jp.at("a").get<double>(), jp.at("b").get<double>(),
                                           jp.at("k").get<int>());
        if (form == "inverse_theta_sin")
            return RadialProfile::inverse_theta_sin(
                jp.at("a").get<double>(), jp.at("b").get<double>(), jp.at("c").get<double>(),
                jp.contains("theta_min") ? jp.at("theta_min").get<double>() : 0.0);
        fail("ParseError", "unknown radial profile " + form);
    };
    if (j.contains("r_inner")) s.r_inner = profile(j.at("r_inner"));
    if (j.contains("r_outer")) s.r_outer = profile(j.at("r_outer"));
    if (j.contains("sheets")) s.sheets = j.at("sheets").get<int>();
    if (j.contains("disks"))
        for (const auto& d : j.at("disks")) s.disks.push_back({d.at(0), d.at(1), d.at(2)});
    if (j.contains("triangles"))
        for (const auto& t : j.at("triangles")) {
            Triangle tri;
            for (int i = 0; i < 3; ++i) tri.p[i] = {t.at(i).at(0), t.at(i).at(1)};
            s.triangles.push_back(tri);
        }
    if (j.contains("rects"))
        for (const auto& r : j.at("rects"))
            s.rects.push_back({r.at(0), r.at(1), r.at(2), r.at(3)});
    if (j.contains("holes"))
        for (const auto& h : j.at("holes")) s.holes.push_back({h.at(0), h.at(1), h.at(2)});
    if (j.contains("periodic_x")) s.periodic_x = j.at("periodic_x").get<bool>();
    if (j.contains("periodic_y")) s.periodic_y = j.at("periodic_y").get<bool>();
    return s;
}

inline Json tower_to_json(const Tower& t) {
    Json j;
    j["tol"] = t.tol;
    j["dedup_tol"] = t.dedup_tol;
    j["deltas"] = t.deltas;
    Json spaces = Json::array();
    for (const auto& s : t.spaces) spaces.push_back(space_to_json(*s));
    j["spaces"] = std::move(spaces);
    Json embs = Json::array();
    for (const auto& e : t.embeddings) {
        Json je;
        je["src_level"] = e.src_level;
        je["dst_level"] = e.dst_level;
        je["map"] = e.map;
        embs.push_back(std::move(je));
    }
    j["embeddings"] = std::move(embs);
    return j;
}

inline Json read_json(const std::string& path);

// Manifest levels may be inline space objects or paths to space files,
// resolved relative to base_dir.
inline Tower tower_from_json(const Json& j, const std::string& base_dir = "") {
    Tower t;
    t.tol = j.at("tol").get<double>();
    if (j.contains("dedup_tol")) t.dedup_tol = j.at("dedup_tol").get<double>();
    t.deltas = j.at("deltas").get<std::vector<double>>();
    for (const auto& js : j.at("spaces")) {
        if (js.is_string()) {
            const std::string p = js.get<std::string>();
            const std::string full =
                (!base_dir.empty() && !p.empty() && p.front() != '/') ? base_dir + "/" + p : p;
            t.spaces.push_back(make_space(space_from_json(read_json(full))));
        } else {
            t.spaces.push_back(make_space(space_from_json(js)));
        }
    }
    for (const auto& je : j.at("embeddings")) {
        EmbeddingMap e;
        e.src_level = je.at("src_level").get<int>();
        e.dst_level = je.at("dst_level").get<int>();
        e.map = je.at("map").get<std::vector<int>>();
        t.embeddings.push_back(std::move(e));
    }
    return t;
}

inline Json glued_to_json(const GluedSpace& g) {
    Json j;
    j["space"] = space_to_json(*g.space);
    j["deltas"] = g.deltas;
    j["tol"] = g.tol;
    j["stratum"] = g.stratum;
    j["home_index"] = g.home_index;
    j["f_maps"] = g.f_maps;
    j["merged_points"] = g.merged_points;
    return j;
}

// header: epsilon,space_index,count
inline std::string packing_curves_csv(const std::vector<double>& eps_grid,
                                      const std::vector<std::vector<int>>& counts) {
    std::ostringstream os;
    os << "epsilon,space_index,count\n";
    for (std::size_t s = 0; s < counts.size(); ++s)
        for (std::size_t e = 0; e < eps_grid.size(); ++e)
            os << eps_grid[e] << "," << s << "," << counts[s][e] << "\n";
    return os.str();
}

// per-point (stratum, coords if available) plot rows
inline std::string glued_plotdata(const GluedSpace& g) {
    std::ostringstream os;
    os << "point,stratum,home_index\n";
    for (int i = 0; i < g.size(); ++i)
        os << i << "," << g.stratum[i] << "," << g.home_index[i] << "\n";
    return os.str();
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail("IOFailure", "cannot open " + path);
    f << text;
    if (!f) fail("IOFailure", "write failed for " + path);
}

inline Json read_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail("IOFailure", "cannot open " + path);
    Json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        fail("ParseError", std::string("bad json in ") + path + ": " + e.what());
    }
    return j;
}

}  // namespace innerlim::io
