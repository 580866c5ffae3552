#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "innerlim/errors.hpp"
#include "innerlim/graph.hpp"
#include "innerlim/metric_space.hpp"
#include "innerlim/rng.hpp"

namespace innerlim {

// Closed-form radial profile r(theta) for polar domains.
struct RadialProfile {
    enum class Kind { constant, harmonic, inverse_theta_sin };
    Kind kind = Kind::constant;
    double a = 0.0, b = 0.0, c = 0.0;
    double theta_min = 0.0;  // inverse_theta_sin: flat value a below this angle
    int k = 0;

    static RadialProfile constant(double v) { return {Kind::constant, v, 0.0, 0.0, 0.0, 0}; }
    // a + b*cos(k*theta)
    static RadialProfile harmonic(double a, double b, int k) {
        return {Kind::harmonic, a, b, 0.0, 0.0, k};
    }
    // a + b*sin(c/theta) for theta > theta_min, else a
    static RadialProfile inverse_theta_sin(double a, double b, double c, double theta_min = 0.0) {
        return {Kind::inverse_theta_sin, a, b, c, theta_min, 0};
    }

    double operator()(double theta) const {
        switch (kind) {
            case Kind::constant: return a;
            case Kind::harmonic: return a + b * std::cos(k * theta);
            case Kind::inverse_theta_sin:
                return theta > theta_min && theta > 0.0 ? a + b * std::sin(c / theta) : a;
        }
        return a;
    }
};

struct Disk {
    double cx, cy, r;
};
struct Triangle {
    std::array<std::array<double, 2>, 3> p;
};
struct Rect {
    double x0, y0, x1, y1;
};
struct Hole {
    double cx, cy, r;
};

// Declarative planar / polar / multi-sheet domain description.
struct DomainSpec {
    enum class Kind { polar_band, multi_sheet_polar, planar_region, composite_rectangles };
    Kind kind = Kind::planar_region;
    std::string name;

    // polar kinds; polar_band is periodic in theta, multi_sheet_polar is the
    // universal-cover band theta in (0, 2*pi*sheets] with unidentified ends
    RadialProfile r_inner = RadialProfile::constant(0.0);
    RadialProfile r_outer = RadialProfile::constant(1.0);
    int sheets = 1;

    // planar_region: union of disks and triangles
    std::vector<Disk> disks;
    std::vector<Triangle> triangles;

    // composite_rectangles: union of rects minus circular holes
    std::vector<Rect> rects;
    std::vector<Hole> holes;
    bool periodic_x = false, periodic_y = false;

    bool polar() const { return kind == Kind::polar_band || kind == Kind::multi_sheet_polar; }
    double theta_span() const {
        return kind == Kind::multi_sheet_polar ? 2.0 * kPi * sheets : 2.0 * kPi;
    }
    bool theta_periodic() const { return kind == Kind::polar_band; }
};

struct SamplePlan {
    double h = 0.05;
    // connect_radius = connect_factor * h; 2.4 takes in the sqrt(5) stencil on
    // regular grids, holding the worst-case geodesic stretch under 2.8%
    double connect_factor = 2.4;
    std::uint64_t seed = 0;       // 0 = regular grid, otherwise jittered
    double boundary_h = 0.0;      // 0 -> h
    double jitter = 0.3;          // jitter amplitude as a fraction of h

    double connect_radius() const { return connect_factor * h; }
    double bh() const { return boundary_h > 0.0 ? boundary_h : h; }

    void check() const {
        if (h <= 0.0) fail("InvalidPlan", "sample spacing must be positive");
        if (connect_factor * h < h * std::sqrt(2.0) - 1e-12)
            fail("InvalidPlan", "connect_radius below h*sqrt(2)");
    }
};

namespace detail {

// chord between polar points under dr^2 + r^2 dtheta^2, stable small-angle form
inline double polar_chord(double r1, double r2, double dtheta) {
    const double dr = r1 - r2;
    const double s = std::sin(0.5 * dtheta);
    return std::sqrt(dr * dr + 4.0 * r1 * r2 * s * s);
}

inline double wrap_delta(double d, double span) {
    d = std::fmod(d, span);
    if (d > 0.5 * span) d -= span;
    if (d < -0.5 * span) d += span;
    return d;
}

inline bool in_triangle(const Triangle& t, double x, double y) {
    auto side = [&](int i, int j) {
        return (t.p[j][0] - t.p[i][0]) * (y - t.p[i][1]) -
               (t.p[j][1] - t.p[i][1]) * (x - t.p[i][0]);
    };
    const double a = side(0, 1), b = side(1, 2), c = side(2, 0);
    const bool pos = a > 0 || b > 0 || c > 0;
    const bool neg = a < 0 || b < 0 || c < 0;
    return !(pos && neg);
}

}  // namespace detail

class SampledSpace;
using SampledPtr = std::shared_ptr<const SampledSpace>;

// A finite sample of a domain: chart coordinates, geodesic graph, boundary
// distance field and area estimate. The dense geodesic metric is materialized
// on demand; large spaces are queried through per-source shortest paths
// instead (see geodesic_matrix / SsspEngine).
class SampledSpace {
public:
    DomainSpec spec;
    SamplePlan plan;
    std::vector<std::array<double, 2>> coords;  // polar: (theta, r); planar: (x, y)
    WeightedGraph graph;
    std::vector<std::array<double, 2>> boundary_coords;
    std::vector<std::pair<int, double>> boundary_seeds;  // (interior point, attach length)
    std::vector<double> boundary_dist;                   // +inf when boundaryless
    double area_estimate = 0.0;
    bool has_boundary = false;
    int interior_components = 1;  // >1 is the DisconnectedInterior warning state

    int size() const { return static_cast<int>(coords.size()); }

    double chart_distance(const std::array<double, 2>& a, const std::array<double, 2>& b) const {
        if (spec.polar()) {
            double dt = a[0] - b[0];
            if (spec.theta_periodic()) dt = detail::wrap_delta(dt, spec.theta_span());
            return detail::polar_chord(a[1], b[1], dt);
        }
        double dx = a[0] - b[0], dy = a[1] - b[1];
        if (spec.periodic_x && !spec.rects.empty())
            dx = detail::wrap_delta(dx, spec.rects[0].x1 - spec.rects[0].x0);
        if (spec.periodic_y && !spec.rects.empty())
            dy = detail::wrap_delta(dy, spec.rects[0].y1 - spec.rects[0].y0);
        return std::hypot(dx, dy);
    }

    int nearest_sample(const std::array<double, 2>& chart_pt) const {
        int best = -1;
        double bd = kInf;
        for (int i = 0; i < size(); ++i) {
            const double d = chart_distance(coords[i], chart_pt);
            if (d < bd) {
                bd = d;
                best = i;
            }
        }
        return best;
    }

    // Dense geodesic metric over all samples. Guarded: quadratic storage.
    SpacePtr metric() const {
        std::call_once(metric_once_, [&] {
            if (size() > 25000)
                fail("TooLarge", "dense metric for n=" + std::to_string(size()));
            std::vector<int> all(size());
            for (int i = 0; i < size(); ++i) all[i] = i;
            metric_cache_ = make_space(geodesic_matrix(graph, all));
        });
        return metric_cache_;
    }

private:
    mutable std::once_flag metric_once_;
    mutable SpacePtr metric_cache_;
};

namespace detail {

class DomainGeometry {
public:
    explicit DomainGeometry(const DomainSpec& s) : spec(s) {}
    const DomainSpec& spec;

    bool inside(double u, double v) const {
        if (spec.polar()) {
            if (u <= 0.0 || u > spec.theta_span() + 1e-12) return false;
            return v > 0.0 && v > spec.r_inner(u) && v < spec.r_outer(u);
        }
        if (spec.kind == DomainSpec::Kind::planar_region) {
            for (const auto& d : spec.disks) {
                const double dx = u - d.cx, dy = v - d.cy;
                if (dx * dx + dy * dy < d.r * d.r) return true;
            }
            for (const auto& t : spec.triangles)
                if (in_triangle(t, u, v)) return true;
            return false;
        }
        bool in = false;
        if (spec.periodic_x || spec.periodic_y) {
            const auto& r = spec.rects[0];
            in = u >= r.x0 && u < r.x1 && v >= r.y0 && v < r.y1;
        } else {
            for (const auto& r : spec.rects)
                if (u > r.x0 && u < r.x1 && v > r.y0 && v < r.y1) {
                    in = true;
                    break;
                }
        }
        if (!in) return false;
        for (const auto& hole : spec.holes) {
            double dx = u - hole.cx, dy = v - hole.cy;
            if (spec.periodic_x) dx = wrap_delta(dx, spec.rects[0].x1 - spec.rects[0].x0);
            if (spec.periodic_y) dy = wrap_delta(dy, spec.rects[0].y1 - spec.rects[0].y0);
            if (dx * dx + dy * dy < hole.r * hole.r) return false;
        }
        return true;
    }

    // membership for edge probes: a point on a face shared by two abutting
    // rectangles is interior to the union even though it is in neither open
    // rect (probe midpoints can land exactly on such faces)
    bool probe_inside(double u, double v) const {
        if (inside(u, v)) return true;
        if (spec.kind != DomainSpec::Kind::composite_rectangles || spec.periodic_x ||
            spec.periodic_y || spec.rects.size() < 2)
            return false;
        int touching = 0;
        for (const auto& r : spec.rects)
            if (u >= r.x0 - 1e-9 && u <= r.x1 + 1e-9 && v >= r.y0 - 1e-9 && v <= r.y1 + 1e-9)
                ++touching;
        if (touching < 2) return false;
        for (const auto& hole : spec.holes) {
            const double dx = u - hole.cx, dy = v - hole.cy;
            if (dx * dx + dy * dy < hole.r * hole.r) return false;
        }
        return true;
    }
};

}  // namespace detail

// Build a SampledSpace: interior points at spacing ~h in intrinsic length,
// geodesic graph with local flat-chart edge lengths, boundary samples and the
// boundary distance field d_M(x, dM) measured along the graph.
inline SampledPtr sample_domain(const DomainSpec& spec, const SamplePlan& plan) {
    plan.check();
    detail::DomainGeometry geom(spec);
    auto out = std::make_shared<SampledSpace>();
    out->spec = spec;
    out->plan = plan;
    const double h = plan.h;
    Rng jitter_rng(plan.seed);
    const double jit = plan.seed == 0 ? 0.0 : plan.jitter * h;

    // --- interior grid, organized by rows for neighbor queries ---
    struct Row {
        double v_center = 0.0;                   // nominal r or y of the row
        std::vector<std::pair<double, int>> pts; // sorted by u
    };
    std::vector<Row> rows;
    double span = 0.0;
    bool periodic = false;
    std::vector<double> weights;

    if (spec.polar()) {
        span = spec.theta_span();
        periodic = spec.theta_periodic();
        double r_lo = kInf, r_hi = 0.0;
        const int probe_n = 4096;
        for (int i = 0; i < probe_n; ++i) {
            const double t = span * (i + 0.5) / probe_n;
            r_lo = std::min(r_lo, spec.r_inner(t));
            r_hi = std::max(r_hi, spec.r_outer(t));
        }
        r_lo = std::max(0.0, r_lo);
        if (!(r_hi > r_lo)) fail("EmptyRegion", "polar band has no radial extent");
        const int nrows = std::max(1, static_cast<int>(std::lround((r_hi - r_lo) / h)));
        const double dr = (r_hi - r_lo) / nrows;
        rows.resize(nrows);
        for (int k = 0; k < nrows; ++k) {
            const double r_k = r_lo + (k + 0.5) * dr;
            rows[k].v_center = r_k;
            const int ncols = std::max(3, static_cast<int>(std::lround(span * r_k / h)));
            const double dt = span / ncols;
            for (int j = 0; j < ncols; ++j) {
                const double t0 = (j + 0.5) * dt;
                double t = t0, r = r_k;
                if (jit > 0.0) {
                    const double tj = t0 + jitter_rng.uniform(-jit, jit) / r_k;
                    const double rj = r_k + jitter_rng.uniform(-jit, jit);
                    if (geom.inside(tj, rj)) {
                        t = tj;
                        r = rj;
                    }
                }
                if (!geom.inside(t, r)) continue;
                const int id = static_cast<int>(out->coords.size());
                out->coords.push_back({t, r});
                weights.push_back(r_k * dr * dt);
                rows[k].pts.push_back({t, id});
            }
        }
    } else {
        double x0 = kInf, y0 = kInf, x1 = -kInf, y1 = -kInf;
        auto grow = [&](double x, double y) {
            x0 = std::min(x0, x);
            y0 = std::min(y0, y);
            x1 = std::max(x1, x);
            y1 = std::max(y1, y);
        };
        for (const auto& d : spec.disks) {
            grow(d.cx - d.r, d.cy - d.r);
            grow(d.cx + d.r, d.cy + d.r);
        }
        for (const auto& t : spec.triangles)
            for (const auto& p : t.p) grow(p[0], p[1]);
        for (const auto& r : spec.rects) {
            grow(r.x0, r.y0);
            grow(r.x1, r.y1);
        }
        if (!(x1 > x0 && y1 > y0)) fail("EmptyRegion", "domain bounding box is empty");
        if ((spec.periodic_x || spec.periodic_y) && spec.rects.size() != 1)
            fail("InvalidDomain", "periodic composite needs exactly one rectangle");
        const int nx = std::max(1, static_cast<int>(std::lround((x1 - x0) / h)));
        const int ny = std::max(1, static_cast<int>(std::lround((y1 - y0) / h)));
        const double gx = (x1 - x0) / nx, gy = (y1 - y0) / ny;
        span = x1 - x0;
        periodic = spec.periodic_x;
        rows.resize(ny);
        for (int k = 0; k < ny; ++k) {
            const double yc = y0 + (k + 0.5) * gy;
            rows[k].v_center = yc;
            for (int j = 0; j < nx; ++j) {
                const double xc = x0 + (j + 0.5) * gx;
                double x = xc, y = yc;
                if (jit > 0.0) {
                    const double xj = xc + jitter_rng.uniform(-jit, jit);
                    const double yj = yc + jitter_rng.uniform(-jit, jit);
                    if (geom.inside(xj, yj)) {
                        x = xj;
                        y = yj;
                    }
                }
                if (!geom.inside(x, y)) continue;
                int hits = 0;  // 3x3 subprobes refine the cell's area share
                for (int a = -1; a <= 1; ++a)
                    for (int b = -1; b <= 1; ++b)
                        hits += geom.inside(xc + a * gx / 3.0, yc + b * gy / 3.0);
                const int id = static_cast<int>(out->coords.size());
                out->coords.push_back({x, y});
                weights.push_back(gx * gy * hits / 9.0);
                rows[k].pts.push_back({x, id});
            }
        }
    }

    if (out->coords.empty()) fail("EmptyRegion", "no sample points at this resolution");
    for (double w : weights) out->area_estimate += w;

    const int nrows_total = static_cast<int>(rows.size());
    const double row_step =
        nrows_total > 1 ? std::fabs(rows[1].v_center - rows[0].v_center)
                        : std::max(h, 1e-9);

    // visit sample points within chart distance <= radius of (u, v)
    auto for_each_near = [&](double u, double v, double radius, auto&& fn) {
        const int reach = static_cast<int>(std::ceil((radius + jit) / row_step)) + 1;
        int k_mid = static_cast<int>(
            std::lround((v - rows[0].v_center) / row_step));
        for (int k = std::max(0, k_mid - reach);
             k <= std::min(nrows_total - 1, k_mid + reach); ++k) {
            const auto& row = rows[k];
            if (row.pts.empty()) continue;
            double w = radius + 2.0 * jit + 1e-12;
            if (spec.polar())
                w = (radius + 2.0 * jit) / std::max(1e-9, std::min(v, row.v_center) - row_step) +
                    1e-12;
            auto scan = [&](double shift) {
                auto lo = std::lower_bound(row.pts.begin(), row.pts.end(),
                                           std::make_pair(u - w + shift, -1));
                auto hi = std::upper_bound(row.pts.begin(), row.pts.end(),
                                           std::make_pair(u + w + shift, 1 << 30));
                for (auto it = lo; it != hi; ++it) fn(it->second);
            };
            scan(0.0);
            if (periodic) {
                scan(-span);
                scan(span);
            }
        }
    };

    // segment midpoint probes keep edges from hopping across holes or notches
    auto segment_ok = [&](const std::array<double, 2>& a, const std::array<double, 2>& b) {
        double du = b[0] - a[0];
        if (periodic) du = detail::wrap_delta(du, span);
        for (double t : {0.5, 0.25, 0.75}) {
            double u = a[0] + t * du;
            if (periodic) {
                u = std::fmod(u, span);
                if (u <= 0.0) u += span;
            }
            if (!geom.probe_inside(u, a[1] + t * (b[1] - a[1]))) return false;
        }
        return true;
    };

    const double cr = plan.connect_radius();
    std::vector<WeightedGraph::Edge> edges;
    for (int i = 0; i < out->size(); ++i) {
        for_each_near(out->coords[i][0], out->coords[i][1], cr, [&](int j) {
            if (j <= i) return;
            const double len = out->chart_distance(out->coords[i], out->coords[j]);
            if (len > cr || len <= 0.0) return;
            if (!segment_ok(out->coords[i], out->coords[j])) return;
            edges.push_back({i, j, len});
        });
    }
    out->graph = WeightedGraph::from_edges(out->size(), edges);
    out->interior_components = connected_components(out->graph).second;

    // --- boundary samples along the declared boundary curves ---
    const double bh = plan.bh();
    auto& bpts = out->boundary_coords;
    if (spec.polar()) {
        auto walk_curve = [&](const RadialProfile& prof, bool is_inner) {
            if (is_inner) {
                bool positive = false;  // r_inner == 0 means a disk-like chart, no inner rim
                for (int i = 1; i <= 64; ++i)
                    if (prof(spec.theta_span() * i / 65.0) > 1e-9) positive = true;
                if (!positive) return;
            }
            double t = 1e-9;
            const double span_t = spec.theta_span();
            long guard = 0;
            while (t < span_t && ++guard < 4000000) {
                const double r = prof(t);
                const double eps = 1e-6;
                const double rp =
                    (prof(std::min(span_t, t + eps)) - prof(std::max(1e-12, t - eps))) / (2 * eps);
                const double speed = std::sqrt(r * r + rp * rp);
                if (r > 1e-9) bpts.push_back({t, r});
                t += bh / std::max(speed, 1e-6);
            }
        };
        walk_curve(spec.r_inner, true);
        walk_curve(spec.r_outer, false);
    } else if (spec.kind == DomainSpec::Kind::planar_region) {
        auto strictly_inside_other = [&](double x, double y, const void* skip) {
            for (const auto& d : spec.disks) {
                if (&d == skip) continue;
                const double dx = x - d.cx, dy = y - d.cy;
                if (dx * dx + dy * dy < d.r * d.r * (1 - 1e-12)) return true;
            }
            for (const auto& t : spec.triangles) {
                if (&t == skip) continue;
                const double cx = (t.p[0][0] + t.p[1][0] + t.p[2][0]) / 3.0;
                const double cy = (t.p[0][1] + t.p[1][1] + t.p[2][1]) / 3.0;
                const double sx = x + 1e-7 * (cx - x), sy = y + 1e-7 * (cy - y);
                if (detail::in_triangle(t, sx, sy)) return true;
            }
            return false;
        };
        for (const auto& d : spec.disks) {
            const int m = std::max(8, static_cast<int>(std::lround(2 * kPi * d.r / bh)));
            for (int i = 0; i < m; ++i) {
                const double a = 2 * kPi * (i + 0.5) / m;
                const double x = d.cx + d.r * std::cos(a), y = d.cy + d.r * std::sin(a);
                if (!strictly_inside_other(x, y, &d)) bpts.push_back({x, y});
            }
        }
        for (const auto& t : spec.triangles) {
            for (int e = 0; e < 3; ++e) {
                const auto& a = t.p[e];
                const auto& b = t.p[(e + 1) % 3];
                const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
                const int m = std::max(2, static_cast<int>(std::lround(len / bh)));
                for (int i = 0; i < m; ++i) {
                    const double s = (i + 0.5) / m;
                    const double x = a[0] + s * (b[0] - a[0]), y = a[1] + s * (b[1] - a[1]);
                    if (!strictly_inside_other(x, y, &t)) bpts.push_back({x, y});
                }
            }
        }
    } else {
        auto strictly_inside_union = [&](double x, double y, const Rect* skip) {
            for (const auto& r : spec.rects) {
                if (&r == skip) continue;
                if (x > r.x0 + 1e-12 && x < r.x1 - 1e-12 && y > r.y0 + 1e-12 && y < r.y1 - 1e-12)
                    return true;
            }
            return false;
        };
        for (const auto& r : spec.rects) {
            auto edge = [&](double ax, double ay, double bx, double by, bool suppressed) {
                if (suppressed) return;
                const double len = std::hypot(bx - ax, by - ay);
                const int m = std::max(1, static_cast<int>(std::lround(len / bh)));
                for (int i = 0; i < m; ++i) {
                    const double s = (i + 0.5) / m;
                    const double x = ax + s * (bx - ax), y = ay + s * (by - ay);
                    if (!strictly_inside_union(x, y, &r)) bpts.push_back({x, y});
                }
            };
            edge(r.x0, r.y0, r.x0, r.y1, spec.periodic_x);
            edge(r.x1, r.y0, r.x1, r.y1, spec.periodic_x);
            edge(r.x0, r.y0, r.x1, r.y0, spec.periodic_y);
            edge(r.x0, r.y1, r.x1, r.y1, spec.periodic_y);
        }
        for (const auto& hole : spec.holes) {
            const int m = std::max(8, static_cast<int>(std::lround(2 * kPi * hole.r / bh)));
            for (int i = 0; i < m; ++i) {
                const double a = 2 * kPi * (i + 0.5) / m;
                bpts.push_back({hole.cx + hole.r * std::cos(a), hole.cy + hole.r * std::sin(a)});
            }
        }
    }

    out->has_boundary = !bpts.empty();
    out->boundary_dist.assign(out->size(), kInf);
    if (out->has_boundary) {
        for (const auto& b : bpts) {
            for_each_near(b[0], b[1], cr, [&](int i) {
                const double d = out->chart_distance(out->coords[i], b);
                if (d <= cr) out->boundary_seeds.push_back({i, d});
            });
        }
        SsspEngine engine(out->graph);
        out->boundary_dist = engine.run_multi(out->boundary_seeds);
    }
    return out;
}

inline double estimate_area(const SampledSpace& s) { return s.area_estimate; }

// Boundary distance field; +inf everywhere for boundaryless specs (the
// NoBoundary convention, e.g. flat tori).
inline const std::vector<double>& boundary_distance_field(const SampledSpace& s) {
    return s.boundary_dist;
}

// delta-inner region of a sampled space: the points at graph boundary
// distance > delta, with the restricted metric and (optionally) the intrinsic
// metric recomputed on the induced subgraph. Empty results are legal values.
class InnerRegionResult {
public:
    SampledPtr parent;
    double delta = 0.0;
    std::vector<int> indices;  // ascending sample indices with boundary_dist > delta
    int components = 0;
    bool intrinsic_requested = false;

    bool empty() const { return indices.empty(); }
    int size() const { return static_cast<int>(indices.size()); }

    // restricted metric d_M: shortest paths through the full sampled space
    SpacePtr restricted() const {
        std::call_once(lazy_->restricted_once, [&] {
            lazy_->restricted = make_space(geodesic_matrix(parent->graph, indices));
        });
        return lazy_->restricted;
    }

    // intrinsic metric d_{M^delta}: shortest paths on the induced subgraph;
    // +inf across components
    SpacePtr intrinsic() const {
        if (!intrinsic_requested) fail("IntrinsicNotComputed", "inner region built without it");
        std::call_once(lazy_->intrinsic_once, [&] {
            const WeightedGraph sub = induced_subgraph(parent->graph, indices);
            std::vector<int> all(indices.size());
            for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
            lazy_->intrinsic = make_space(geodesic_matrix(sub, all));
        });
        return lazy_->intrinsic;
    }

    // +inf sentinel when disconnected, 0 for <=1 point (flagged empty)
    double intrinsic_diameter() const {
        if (empty() || size() == 1) return 0.0;
        if (components > 1) return kInf;
        return innerlim::diameter(*intrinsic());
    }

    Subspace as_subspace() const { return restrict_space(parent->metric(), indices); }

private:
    struct Lazy {
        std::once_flag restricted_once, intrinsic_once;
        SpacePtr restricted, intrinsic;
    };
    std::shared_ptr<Lazy> lazy_ = std::make_shared<Lazy>();
};

inline InnerRegionResult inner_region(SampledPtr space, double delta,
                                      bool want_intrinsic = true) {
    if (delta < 0.0) fail("InvalidDelta", "delta must be nonnegative");
    InnerRegionResult res;
    res.parent = space;
    res.delta = delta;
    res.intrinsic_requested = want_intrinsic;
    for (int i = 0; i < space->size(); ++i)
        if (space->boundary_dist[i] > delta) res.indices.push_back(i);
    if (!res.indices.empty())
        res.components = connected_components(space->graph, res.indices).second;
    return res;
}

// (d_M, d_{M^delta}) between two chart points resolved to retained samples.
inline std::pair<double, double> restricted_vs_intrinsic_probe(
    const SampledPtr& space, double delta, const std::array<double, 2>& p,
    const std::array<double, 2>& q) {
    const int pi = space->nearest_sample(p);
    const int qi = space->nearest_sample(q);
    if (pi < 0 || qi < 0 || space->boundary_dist[pi] <= delta ||
        space->boundary_dist[qi] <= delta)
        fail("PointNotInInnerRegion", "probe point resolves outside the inner region");
    SsspEngine full(space->graph);
    const double d_m = full.run(pi)[qi];

    InnerRegionResult reg = inner_region(space, delta, true);
    const auto it_p = std::lower_bound(reg.indices.begin(), reg.indices.end(), pi);
    const auto it_q = std::lower_bound(reg.indices.begin(), reg.indices.end(), qi);
    const WeightedGraph sub = induced_subgraph(space->graph, reg.indices);
    SsspEngine inner(sub);
    const double d_i =
        inner.run(static_cast<int>(it_p - reg.indices.begin()))[it_q - reg.indices.begin()];
    return {d_m, d_i};
}

}  // namespace innerlim
