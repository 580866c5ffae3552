#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "innerlim/errors.hpp"
#include "innerlim/gh.hpp"
#include "innerlim/glued.hpp"
#include "innerlim/metric_space.hpp"
#include "innerlim/sampler.hpp"

namespace innerlim {

// ---------------------------------------------------------------------------
// Exact rational scalar for book grids: page trims and tower scales must be
// compared exactly, including the degenerate page-becomes-interval case.
// ---------------------------------------------------------------------------
struct Frac {
    long long num = 0;
    long long den = 1;

    static Frac of(long long n, long long d) {
        if (d == 0) fail("InvalidParams", "fraction with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        const long long g = std::gcd(n < 0 ? -n : n, d);
        return Frac{g ? n / g : n, g ? d / g : d};
    }

    double val() const { return static_cast<double>(num) / static_cast<double>(den); }
    Frac operator-(const Frac& o) const { return of(num * o.den - o.num * den, den * o.den); }
    Frac operator+(const Frac& o) const { return of(num * o.den + o.num * den, den * o.den); }
    bool operator<(const Frac& o) const { return num * o.den < o.num * den; }
    bool operator<=(const Frac& o) const { return num * o.den <= o.num * den; }
    bool operator==(const Frac& o) const { return num * o.den == o.num * den; }

    // value as a count of grid steps of size 1/pitch_den; must be integral
    long long steps(long long pitch_den) const {
        const long long t = num * pitch_den;
        if (t % den != 0) fail("InvalidPitch", "grid pitch does not divide a page dimension");
        return t / den;
    }
};

// ---------------------------------------------------------------------------
// Book spaces: taxicab pages glued along the spine x = 0 via (0,y) ~ (0,y).
// ---------------------------------------------------------------------------

struct BookPage {
    Frac width;  // x in [0, width]
    Frac y_min, y_max;
    bool trim_top = true;     // which page sides belong to the designated boundary
    bool trim_bottom = false;
    bool trim_right = false;
    int group = 0, copy = 0;  // page-multiset bookkeeping for doubling towers
    std::string tag;
};

// Exact book metric between chart points. Same page: taxi. Different pages:
// cross the spine, x_a + x_b plus the spine travel between the y values
// (every pair of page ranges here overlaps, so the crossing clamps inside the
// shared spine segment and the travel is |y_a - y_b|).
inline double book_distance_xy(int page_a, double xa, double ya, int page_b, double xb,
                               double yb) {
    if (page_a == page_b) return std::fabs(xa - xb) + std::fabs(ya - yb);
    return xa + xb + std::fabs(ya - yb);
}

// book_distance over one-sided pages [0,1] x [0, h]; heights are the page
// list, points are (page, x, y).
inline double book_distance(const std::vector<double>& heights, int pa, double xa, double ya,
                            int pb, double xb, double yb) {
    auto check = [&](int p, double x, double y) {
        if (p < 0 || p >= static_cast<int>(heights.size()) || x < 0.0 || x > 1.0 || y < 0.0 ||
            y > heights[p])
            fail("OutOfPage", "book point outside its page");
    };
    check(pa, xa, ya);
    check(pb, xb, yb);
    return book_distance_xy(pa, xa, ya, pb, xb, yb);
}

class BookSpace {
public:
    std::vector<BookPage> pages;
    long long pitch_den = 32;  // grid pitch = 1 / pitch_den

    // points as (page, xi, yi); spine points (xi == 0) dedupe to the first
    // page whose range contains them
    std::vector<std::array<int, 3>> pts;

    void build() {
        pts.clear();
        lookup_.clear();
        std::map<int, int> spine;  // yi -> point id
        for (int p = 0; p < static_cast<int>(pages.size()); ++p) {
            const auto& page = pages[p];
            const long long xmax = page.width.steps(pitch_den);
            const long long ylo = page.y_min.steps(pitch_den);
            const long long yhi = page.y_max.steps(pitch_den);
            for (long long xi = 0; xi <= xmax; ++xi) {
                for (long long yi = ylo; yi <= yhi; ++yi) {
                    if (xi == 0) {
                        auto it = spine.find(static_cast<int>(yi));
                        if (it != spine.end()) continue;
                        spine[static_cast<int>(yi)] = static_cast<int>(pts.size());
                    }
                    lookup_[{p, static_cast<int>(xi), static_cast<int>(yi)}] =
                        static_cast<int>(pts.size());
                    pts.push_back({p, static_cast<int>(xi), static_cast<int>(yi)});
                }
            }
        }
        spine_ = std::move(spine);
    }

    int size() const { return static_cast<int>(pts.size()); }
    int page_of(int i) const { return pts[i][0]; }
    double px(int i) const { return static_cast<double>(pts[i][1]) / pitch_den; }
    double py(int i) const { return static_cast<double>(pts[i][2]) / pitch_den; }

    int find(int page, int xi, int yi) const {
        if (xi == 0) {
            auto it = spine_.find(yi);
            return it == spine_.end() ? -1 : it->second;
        }
        auto it = lookup_.find({page, xi, yi});
        return it == lookup_.end() ? -1 : it->second;
    }

    double distance(int i, int j) const {
        return book_distance_xy(pts[i][0], px(i), py(i), pts[j][0], px(j), py(j));
    }

    SpacePtr space() const {
        if (!space_) {
            const int n = size();
            std::vector<double> flat(static_cast<std::size_t>(n) * n, 0.0);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    const double d = distance(i, j);
                    flat[static_cast<std::size_t>(i) * n + j] = d;
                    flat[static_cast<std::size_t>(j) * n + i] = d;
                }
            space_ = make_space(FiniteMetricSpace::from_flat(n, std::move(flat)));
        }
        return space_;
    }

    // Inner region at scale delta via the per-page trim rule: each designated
    // boundary side retreats by delta; a page whose trimmed range is empty
    // dies, an exactly-degenerate range survives as an interval page.
    std::vector<int> inner_indices(const Frac& delta, std::vector<bool>* alive_out = nullptr,
                                   std::vector<std::array<long long, 3>>* bounds_out = nullptr)
        const {
        const int np = static_cast<int>(pages.size());
        std::vector<bool> alive(np, false);
        std::vector<std::array<long long, 3>> bounds(np);  // x_hi, y_lo, y_hi in steps
        for (int p = 0; p < np; ++p) {
            const auto& page = pages[p];
            const Frac w = page.trim_right ? page.width - delta : page.width;
            const Frac ylo = page.trim_bottom ? page.y_min + delta : page.y_min;
            const Frac yhi = page.trim_top ? page.y_max - delta : page.y_max;
            if (ylo <= yhi && Frac::of(0, 1) <= w) {
                alive[p] = true;
                bounds[p] = {w.steps(pitch_den), ylo.steps(pitch_den), yhi.steps(pitch_den)};
            }
        }
        std::vector<int> out;
        for (int i = 0; i < size(); ++i) {
            const int xi = pts[i][1], yi = pts[i][2];
            bool keep = false;
            if (xi == 0) {
                for (int p = 0; p < np && !keep; ++p)
                    keep = alive[p] && pages[p].y_min.steps(pitch_den) <= yi &&
                           yi <= pages[p].y_max.steps(pitch_den) && bounds[p][1] <= yi &&
                           yi <= bounds[p][2];
            } else {
                const int p = pts[i][0];
                keep = alive[p] && xi <= bounds[p][0] && bounds[p][1] <= yi && yi <= bounds[p][2];
            }
            if (keep) out.push_back(i);
        }
        if (alive_out) *alive_out = alive;
        if (bounds_out) *bounds_out = bounds;
        return out;
    }

private:
    std::map<std::array<int, 3>, int> lookup_;
    std::map<int, int> spine_;
    mutable SpacePtr space_;
};

inline std::shared_ptr<BookSpace> make_book(const std::vector<double>& heights,
                                            long long pitch_den = 32) {
    if (heights.empty()) fail("InvalidFamilyParams", "book needs at least one page");
    for (std::size_t i = 0; i < heights.size(); ++i) {
        if (heights[i] <= 0) fail("InvalidFamilyParams", "page heights must be positive");
        if (i > 0 && heights[i] >= heights[i - 1])
            fail("InvalidFamilyParams", "page heights must be decreasing");
    }
    auto book = std::make_shared<BookSpace>();
    book->pitch_den = pitch_den;
    for (std::size_t i = 0; i < heights.size(); ++i) {
        BookPage page;
        page.width = Frac::of(1, 1);
        page.y_min = Frac::of(0, 1);
        // heights as exact fractions over the pitch grid
        const long long num = std::llround(heights[i] * pitch_den);
        if (std::fabs(static_cast<double>(num) / pitch_den - heights[i]) > 1e-12)
            fail("InvalidPitch", "page height not on the grid");
        page.y_max = Frac::of(num, pitch_den);
        page.trim_top = true;
        page.group = static_cast<int>(i);
        page.tag = "page" + std::to_string(i);
        book->pages.push_back(page);
    }
    book->build();
    return book;
}

// ---------------------------------------------------------------------------
// Book towers
// ---------------------------------------------------------------------------

struct BookTowerBundle {
    std::shared_ptr<BookSpace> parent;
    Tower tower;
    std::vector<std::vector<int>> level_points;  // parent indices per level
    std::vector<std::vector<bool>> page_alive;   // per level
};

namespace detail {

inline Tower tower_from_levels(const SpacePtr& parent_space,
                               const std::vector<std::vector<int>>& level_points,
                               const std::vector<double>& deltas, double tol,
                               const std::vector<std::vector<int>>* explicit_maps = nullptr) {
    Tower t;
    t.deltas = deltas;
    t.tol = tol;
    for (const auto& pts : level_points)
        t.spaces.push_back(make_space(restrict_space(parent_space, pts).materialize()));
    for (std::size_t i = 0; i + 1 < level_points.size(); ++i) {
        EmbeddingMap e;
        e.src_level = static_cast<int>(i);
        e.dst_level = static_cast<int>(i) + 1;
        if (explicit_maps) {
            e.map = (*explicit_maps)[i];
        } else {
            // inclusion: position of each level-i parent index in level i+1
            const auto& next = level_points[i + 1];
            for (int parent_idx : level_points[i]) {
                const auto it = std::lower_bound(next.begin(), next.end(), parent_idx);
                if (it == next.end() || *it != parent_idx)
                    fail("InvalidTower", "levels are not nested");
                e.map.push_back(static_cast<int>(it - next.begin()));
            }
        }
        e.max_distortion =
            is_isometric_embedding(*t.spaces[i], *t.spaces[i + 1], e.map, tol).max_distortion;
        t.embeddings.push_back(std::move(e));
    }
    return t;
}

}  // namespace detail

// Tower of inner regions of a one-sided book (pages trimmed from the top),
// with inclusion embeddings; realizes the book examples where thin pages die
// as the scale passes their height.
inline BookTowerBundle book_tower(const std::vector<double>& heights,
                                  const std::vector<Frac>& deltas, long long pitch_den) {
    BookTowerBundle b;
    b.parent = make_book(heights, pitch_den);
    std::vector<double> dv;
    for (const auto& d : deltas) {
        std::vector<bool> alive;
        b.level_points.push_back(b.parent->inner_indices(d, &alive));
        b.page_alive.push_back(alive);
        dv.push_back(d.val());
    }
    b.tower = detail::tower_from_levels(b.parent->space(), b.level_points, dv, 0.0);
    return b;
}

// Page-doubling book of the nonuniqueness example: group k contributes
// 2^(k-1) copies of [0,1] x [-1/(2k), 1/(2k)] with top, bottom and right
// edges designated boundary. At scale 1/(2i) group i degenerates to interval
// pages.
inline std::shared_ptr<BookSpace> make_page_doubling_book(int depth, long long pitch_den = 24) {
    if (depth < 1) fail("InvalidFamilyParams", "depth must be >= 1");
    auto book = std::make_shared<BookSpace>();
    book->pitch_den = pitch_den;
    for (int k = 1; k <= depth; ++k) {
        const int copies = 1 << (k - 1);
        for (int c = 0; c < copies; ++c) {
            BookPage page;
            page.width = Frac::of(1, 1);
            page.y_min = Frac::of(-1, 2 * k);
            page.y_max = Frac::of(1, 2 * k);
            page.trim_top = page.trim_bottom = page.trim_right = true;
            page.group = k;
            page.copy = c;
            page.tag = "P" + std::to_string(k) + "#" + std::to_string(c);
            book->pages.push_back(page);
        }
    }
    book->build();
    return book;
}

// Towers over the page-doubling book at scales delta_i = 1/(2i), i = 1..depth.
// `page_shifting` = false gives inclusion embeddings; true maps each level's
// interval pages onto the next level's interval pages (the second, genuinely
// different choice of gluing isometries).
inline BookTowerBundle page_doubling_tower(int depth, bool page_shifting,
                                           long long pitch_den = 24) {
    BookTowerBundle b;
    b.parent = make_page_doubling_book(depth, pitch_den);
    std::vector<double> dv;
    std::vector<Frac> deltas;
    for (int i = 1; i <= depth; ++i) {
        deltas.push_back(Frac::of(1, 2 * i));
        dv.push_back(deltas.back().val());
        std::vector<bool> alive;
        b.level_points.push_back(b.parent->inner_indices(deltas.back(), &alive));
        b.page_alive.push_back(alive);
    }
    if (!page_shifting) {
        b.tower = detail::tower_from_levels(b.parent->space(), b.level_points, dv, 0.0);
        return b;
    }
    // explicit page-shifting maps between consecutive levels
    std::vector<std::vector<int>> maps;
    for (int lev = 0; lev + 1 < depth; ++lev) {
        const int degenerate_group = lev + 1;  // group whose pages are intervals here
        const auto& cur = b.level_points[lev];
        const auto& next = b.level_points[lev + 1];
        // target page id for (group, copy)
        auto page_id = [&](int group, int copy) -> int {
            for (int p = 0; p < static_cast<int>(b.parent->pages.size()); ++p)
                if (b.parent->pages[p].group == group && b.parent->pages[p].copy == copy)
                    return p;
            fail("InvalidTower", "missing page copy");
        };
        std::vector<int> m;
        for (int parent_idx : cur) {
            const auto& pt = b.parent->pts[parent_idx];
            int target_parent = parent_idx;
            const int pg = pt[0];
            if (pt[1] > 0 && b.parent->pages[pg].group == degenerate_group) {
                // interval page -> the matching interval page one group deeper
                target_parent = b.parent->find(
                    page_id(degenerate_group + 1, b.parent->pages[pg].copy), pt[1], 0);
            }
            const auto it = std::lower_bound(next.begin(), next.end(), target_parent);
            if (target_parent < 0 || it == next.end() || *it != target_parent)
                fail("InvalidTower", "page-shifting target missing at the next level");
            m.push_back(static_cast<int>(it - next.begin()));
        }
        maps.push_back(std::move(m));
    }
    b.tower = detail::tower_from_levels(b.parent->space(), b.level_points, dv, 0.0, &maps);
    return b;
}

// ---------------------------------------------------------------------------
// Taxi lattices: the 1-skeleton of a box grid realizes the taxi metric exactly
// ---------------------------------------------------------------------------

struct LatticeSkeleton {
    std::vector<double> sides;
    double pitch = 0.0;
    std::vector<std::vector<int>> grid;  // per point integer coordinates
    SpacePtr space;                      // exact taxi metric
    std::vector<bool> boundary_flag;     // within pitch/2 of the designated faces
};

// faces: (dimension, side) with side 0 = lower, 1 = upper.
inline LatticeSkeleton lattice_skeleton(const std::vector<double>& sides, double pitch,
                                        const std::vector<std::pair<int, int>>& faces = {}) {
    if (sides.empty() || pitch <= 0) fail("InvalidPitch", "need sides and positive pitch");
    LatticeSkeleton lat;
    lat.sides = sides;
    lat.pitch = pitch;
    std::vector<int> m(sides.size());
    long long total = 1;
    for (std::size_t d = 0; d < sides.size(); ++d) {
        m[d] = static_cast<int>(std::lround(sides[d] / pitch));
        if (m[d] < 1 || std::fabs(m[d] * pitch - sides[d]) > 1e-9 * std::max(1.0, sides[d]))
            fail("InvalidPitch", "pitch does not divide side " + std::to_string(d));
        total *= m[d] + 1;
        if (total > 20000) fail("TooLarge", "lattice exceeds the dense-matrix target");
    }
    std::vector<int> cur(sides.size(), 0);
    for (;;) {
        lat.grid.push_back(cur);
        int d = 0;
        while (d < static_cast<int>(sides.size()) && ++cur[d] > m[d]) cur[d++] = 0;
        if (d == static_cast<int>(sides.size())) break;
    }
    const int n = static_cast<int>(lat.grid.size());
    std::vector<double> flat(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            long long taxi = 0;
            for (std::size_t d = 0; d < sides.size(); ++d)
                taxi += std::llabs(lat.grid[i][d] - lat.grid[j][d]);
            flat[static_cast<std::size_t>(i) * n + j] = taxi * pitch;
            flat[static_cast<std::size_t>(j) * n + i] = taxi * pitch;
        }
    lat.space = make_space(FiniteMetricSpace::from_flat(n, std::move(flat)));
    lat.boundary_flag.assign(n, false);
    for (int i = 0; i < n; ++i)
        for (const auto& [d, side] : faces)
            if ((side == 0 && lat.grid[i][d] == 0) || (side == 1 && lat.grid[i][d] == m[d]))
                lat.boundary_flag[i] = true;
    return lat;
}

// ---------------------------------------------------------------------------
// Sampled families (domain specs)
// ---------------------------------------------------------------------------

// j-fold covering of Ann(1/j, 1): universal-cover band theta in (0, 2*pi*j],
// ends unidentified, boundary = the two rims. inner_radius 0 uses 1/j.
inline DomainSpec gold_foils_spec(int j, double inner_radius = 0.0) {
    if (j < 1) fail("InvalidFamilyParams", "gold_foils needs j >= 1");
    DomainSpec s;
    s.kind = DomainSpec::Kind::multi_sheet_polar;
    s.sheets = j;
    s.r_inner = RadialProfile::constant(inner_radius > 0 ? inner_radius : 1.0 / j);
    s.r_outer = RadialProfile::constant(1.0);
    s.name = "gold_foils_j" + std::to_string(j);
    return s;
}

// splined annulus r in (1, 3 + cos(j*theta)), theta in S^1
inline DomainSpec many_splines_spec(int j) {
    if (j < 1) fail("InvalidFamilyParams", "many_splines needs j >= 1");
    DomainSpec s;
    s.kind = DomainSpec::Kind::polar_band;
    s.r_inner = RadialProfile::constant(1.0);
    s.r_outer = RadialProfile::harmonic(3.0, 1.0, j);
    s.name = "many_splines_j" + std::to_string(j);
    return s;
}

inline DomainSpec annulus_spec(double r1, double r2) {
    if (!(0 <= r1 && r1 < r2)) fail("InvalidFamilyParams", "annulus needs 0 <= r1 < r2");
    DomainSpec s;
    s.kind = DomainSpec::Kind::polar_band;
    s.r_inner = RadialProfile::constant(r1);
    s.r_outer = RadialProfile::constant(r2);
    s.name = "annulus";
    return s;
}

// disk-like region with a cascade of splines of decreasing width: r < 4 on
// the sector theta in (0, 2*pi/j], r < 4 + sin(4*pi^2/theta) beyond it
inline DomainSpec decreasing_splines_spec(int j) {
    if (j < 1) fail("InvalidFamilyParams", "decreasing_splines needs j >= 1");
    DomainSpec s;
    s.kind = DomainSpec::Kind::polar_band;
    s.r_inner = RadialProfile::constant(0.0);
    s.r_outer = RadialProfile::inverse_theta_sin(4.0, 1.0, 4.0 * kPi * kPi, 2.0 * kPi / j);
    s.name = "decreasing_splines_j" + std::to_string(j);
    return s;
}

inline DomainSpec unit_disk_spec(double r = 1.0) {
    DomainSpec s;
    s.kind = DomainSpec::Kind::planar_region;
    s.disks.push_back({0.0, 0.0, r});
    s.name = "disk";
    return s;
}

// unit disk with an isoceles spike of base width w and length L on the +x side
inline DomainSpec spline_disk_spec(double w, double L = 1.0) {
    if (!(w > 0 && w < 1) || L <= 0) fail("InvalidFamilyParams", "need 0 < w < 1 and L > 0");
    DomainSpec s;
    s.kind = DomainSpec::Kind::planar_region;
    s.disks.push_back({0.0, 0.0, 1.0});
    const double bx = std::sqrt(std::max(0.0, 1.0 - 0.25 * w * w));
    Triangle t;
    t.p = {{{bx, -w / 2}, {bx, w / 2}, {bx + L, 0.0}}};
    s.triangles.push_back(t);
    s.name = "spline_disk";
    return s;
}

// alternating spline widths: even j -> 4*eps_hat, odd j -> shrinking from
// 6*eps_hat toward 4*eps_hat
inline DomainSpec no_diag_spec(int j, double eps_hat) {
    if (j < 1 || !(eps_hat > 0 && eps_hat < 1.0 / 3.0))
        fail("InvalidFamilyParams", "no_diag needs j >= 1 and eps_hat < 1/3");
    const double w =
        (j % 2 == 0) ? 4.0 * eps_hat : 6.0 * eps_hat - 2.0 * eps_hat * (1.0 - 1.0 / j);
    DomainSpec s = spline_disk_spec(w, 1.0);
    s.name = "no_diag_j" + std::to_string(j);
    return s;
}

inline DomainSpec two_balls_spec() {
    DomainSpec s;
    s.kind = DomainSpec::Kind::planar_region;
    s.disks.push_back({4.0, 0.0, 5.0});
    s.disks.push_back({-4.0, 0.0, 5.0});
    s.name = "two_balls";
    return s;
}

// F-shaped region with a dust of holes in one lobe: even parity holes the
// lower lobe (1,3)x(0,1), odd the upper lobe (1,3)x(2,3)
inline DomainSpec f_region_spec(int j, int parity) {
    if (j < 1) fail("InvalidFamilyParams", "f_region needs j >= 1");
    DomainSpec s;
    s.kind = DomainSpec::Kind::composite_rectangles;
    s.rects.push_back({0.0, -1.0, 1.0 / j, 0.0});
    s.rects.push_back({0.0, 0.0, 1.0, 3.0});
    s.rects.push_back({1.0, 0.0, 3.0, 1.0});
    s.rects.push_back({1.0, 2.0, 3.0, 3.0});
    const double y_base = (parity % 2 == 0) ? 0.0 : 2.0;
    const double spacing = 1.0 / j;
    const int nx = static_cast<int>(2.0 / spacing), ny = static_cast<int>(1.0 / spacing);
    for (int a = 0; a < nx; ++a)
        for (int b = 0; b < ny; ++b)
            s.holes.push_back(
                {1.0 + (a + 0.5) * spacing, y_base + (b + 0.5) * spacing, spacing / 6.0});
    s.name = "f_region_j" + std::to_string(j) + (parity % 2 ? "_odd" : "_even");
    return s;
}

inline DomainSpec square_spec(double side = 1.0) {
    DomainSpec s;
    s.kind = DomainSpec::Kind::composite_rectangles;
    s.rects.push_back({0.0, 0.0, side, side});
    s.name = "square";
    return s;
}

inline DomainSpec torus_spec(double sx = 1.0, double sy = 1.0) {
    DomainSpec s = square_spec(1.0);
    s.rects[0] = {0.0, 0.0, sx, sy};
    s.periodic_x = s.periodic_y = true;
    s.name = "torus";
    return s;
}

// not-a-length-space witness: three rectangles forming a U
inline DomainSpec u_region_spec() {
    DomainSpec s;
    s.kind = DomainSpec::Kind::composite_rectangles;
    s.rects.push_back({-1.0, -1.0, 1.0, 0.0});
    s.rects.push_back({-1.0, 0.0, -0.5, 1.0});
    s.rects.push_back({0.5, 0.0, 1.0, 1.0});
    s.name = "u_region";
    return s;
}

// ---------------------------------------------------------------------------
// Annulus references for the many-splines limit: Ann(1+delta, 2-delta) with
// the length metric of the region {r > 1}, realized as a subspace of one
// master Ann(1,2) sample.
// ---------------------------------------------------------------------------

struct AnnulusReference {
    SampledPtr master;
    double delta = 0.0;
    std::vector<int> indices;
    SpacePtr space;
};

inline std::vector<int> annulus_band_indices(const SampledSpace& master, double delta) {
    std::vector<int> idx;
    for (int i = 0; i < master.size(); ++i) {
        const double r = master.coords[i][1];
        if (r >= 1.0 + delta && r <= 2.0 - delta) idx.push_back(i);
    }
    return idx;
}

inline AnnulusReference ann_reference(double delta, const SamplePlan& plan,
                                      SampledPtr master = nullptr) {
    if (!(delta >= 0 && delta < 0.5)) fail("InvalidFamilyParams", "ann_reference delta in [0, 1/2)");
    AnnulusReference ref;
    ref.master = master ? master : sample_domain(annulus_spec(1.0, 2.0), plan);
    ref.delta = delta;
    ref.indices = annulus_band_indices(*ref.master, delta);
    if (ref.indices.empty()) fail("EmptyRegion", "annulus reference empty at this resolution");
    ref.space = make_space(geodesic_matrix(ref.master->graph, ref.indices));
    return ref;
}

// Tower of annulus references over one shared master sample; inclusions are
// exact isometries, so the tower tolerance is met trivially.
inline Tower annulus_tower(const std::vector<double>& deltas, const SamplePlan& plan,
                           double tol) {
    Tower t;
    t.tol = tol;
    t.deltas = deltas;
    const SampledPtr master = sample_domain(annulus_spec(1.0, 2.0), plan);
    std::vector<std::vector<int>> level_idx;
    for (double d : deltas) level_idx.push_back(annulus_band_indices(*master, d));
    // deepest level holds every shallower level; one geodesic matrix serves all
    const auto& deep = level_idx.back();
    FiniteMetricSpace deep_space = geodesic_matrix(master->graph, deep);
    std::vector<int> pos_in_deep(master->size(), -1);
    for (int i = 0; i < static_cast<int>(deep.size()); ++i) pos_in_deep[deep[i]] = i;
    SpacePtr deep_ptr = make_space(std::move(deep_space));
    for (std::size_t lev = 0; lev < deltas.size(); ++lev) {
        std::vector<int> pos;
        pos.reserve(level_idx[lev].size());
        for (int idx : level_idx[lev]) {
            if (pos_in_deep[idx] < 0) fail("InvalidTower", "levels are not nested");
            pos.push_back(pos_in_deep[idx]);
        }
        if (lev + 1 == deltas.size())
            t.spaces.push_back(deep_ptr);
        else
            t.spaces.push_back(make_space(restrict_space(deep_ptr, pos).materialize()));
    }
    for (std::size_t lev = 0; lev + 1 < deltas.size(); ++lev) {
        EmbeddingMap e;
        e.src_level = static_cast<int>(lev);
        e.dst_level = static_cast<int>(lev) + 1;
        const auto& next = level_idx[lev + 1];
        for (int idx : level_idx[lev]) {
            const auto it = std::lower_bound(next.begin(), next.end(), idx);
            if (it == next.end() || *it != idx) fail("InvalidTower", "levels are not nested");
            e.map.push_back(static_cast<int>(it - next.begin()));
        }
        e.max_distortion = 0.0;  // shared-parent inclusion copies distances verbatim
        t.embeddings.push_back(std::move(e));
    }
    return t;
}

// ---------------------------------------------------------------------------
// Hand-assembled reference spaces
// ---------------------------------------------------------------------------

// closed unit disk with a segment of length L attached at (1, 0): the
// Gromov-Hausdorff limit of the spline-disk sequence
inline SampledPtr disk_with_segment(double L, const SamplePlan& plan) {
    auto disk = sample_domain(unit_disk_spec(1.0), plan);
    auto out = std::make_shared<SampledSpace>();
    out->spec = disk->spec;
    out->spec.name = "disk_with_segment";
    out->plan = plan;
    out->coords = disk->coords;
    out->area_estimate = disk->area_estimate;
    out->has_boundary = false;
    const int joint = static_cast<int>(out->coords.size());
    out->coords.push_back({1.0, 0.0});
    const int m = std::max(2, static_cast<int>(std::lround(L / plan.h)));
    const double step = L / m;
    std::vector<WeightedGraph::Edge> edges;
    for (int u = 0; u < disk->graph.n; ++u)
        for (int t = disk->graph.offsets[u]; t < disk->graph.offsets[u + 1]; ++t)
            if (disk->graph.nbr[t] > u) edges.push_back({u, disk->graph.nbr[t], disk->graph.wt[t]});
    // joint connects to nearby disk samples
    for (int u = 0; u < disk->size(); ++u) {
        const double d = std::hypot(disk->coords[u][0] - 1.0, disk->coords[u][1]);
        if (d <= plan.connect_radius() && d > 0) edges.push_back({u, joint, d});
    }
    int prev = joint;
    for (int k = 1; k <= m; ++k) {
        const int id = static_cast<int>(out->coords.size());
        out->coords.push_back({1.0 + k * step, 0.0});
        edges.push_back({prev, id, step});
        prev = id;
    }
    out->graph = WeightedGraph::from_edges(static_cast<int>(out->coords.size()), edges);
    out->boundary_dist.assign(out->coords.size(), kInf);
    out->interior_components = connected_components(out->graph).second;
    return out;
}

// Stack of flat square annuli joined by slanted strips (the constant-curvature
// glued-limit example). Strips are sampled in a stretched chart so Euclidean
// edge lengths equal their slanted lengths; charts are developed across the
// glue seams.
inline SampledPtr square_annuli_stack(int j, const SamplePlan& plan) {
    if (j < 1) fail("InvalidFamilyParams", "square_annuli_stack needs j >= 1");
    const double w = std::pow(0.5, j + 1);  // hole half-width
    auto out = std::make_shared<SampledSpace>();
    out->spec.kind = DomainSpec::Kind::composite_rectangles;
    out->spec.name = "square_annuli_stack_j" + std::to_string(j);
    out->plan = plan;

    struct Piece {
        SampledPtr s;
        int offset;
        bool strip;
        double z0, z1;  // annulus height or strip endpoints
    };
    std::vector<Piece> pieces;
    std::vector<WeightedGraph::Edge> edges;
    auto annulus_size = [&](int i) { return (i == 0 || i == j) ? 1.0 : std::pow(2.0, i - j); };
    auto height = [&](int i) { return i == 0 ? 0.0 : std::pow(2.0, i - j); };

    for (int i = 0; i <= j; ++i) {
        const double s = annulus_size(i);
        DomainSpec frame;
        frame.kind = DomainSpec::Kind::composite_rectangles;
        frame.rects.push_back({-s, -s, -w, s});
        frame.rects.push_back({w, -s, s, s});
        frame.rects.push_back({-w, -s, w, -w});
        frame.rects.push_back({-w, w, w, s});
        frame.name = "annulus" + std::to_string(i);
        pieces.push_back({sample_domain(frame, plan), 0, false, height(i), height(i)});
    }
    for (int i = 0; i < j; ++i) {
        const double rise = height(i + 1) - height(i);
        const double stretch = std::sqrt(1.0 + std::pow(rise / (2 * w), 2));
        DomainSpec strip;
        strip.kind = DomainSpec::Kind::composite_rectangles;
        strip.rects.push_back({0.0, -w, 2 * w * stretch, w});
        strip.name = "strip" + std::to_string(i);
        pieces.push_back({sample_domain(strip, plan), 0, true, height(i), height(i + 1)});
    }

    int offset = 0;
    for (auto& p : pieces) {
        p.offset = offset;
        for (int i = 0; i < p.s->size(); ++i) out->coords.push_back(p.s->coords[i]);
        for (int u = 0; u < p.s->graph.n; ++u)
            for (int t = p.s->graph.offsets[u]; t < p.s->graph.offsets[u + 1]; ++t)
                if (p.s->graph.nbr[t] > u)
                    edges.push_back(
                        {offset + u, offset + p.s->graph.nbr[t], p.s->graph.wt[t]});
        out->area_estimate += p.s->area_estimate;
        offset += p.s->size();
    }

    // develop strip i across its two seams: x = -w edge of annulus i and
    // x = +w edge of annulus i+1
    const double cr = plan.connect_radius();
    for (int i = 0; i < j; ++i) {
        const Piece& strip = pieces[j + 1 + i];
        const double len = strip.s->spec.rects[0].x1;
        for (const auto& [ann_idx, seam_x, strip_at_zero] :
             std::vector<std::tuple<int, double, bool>>{{i, -w, true}, {i + 1, w, false}}) {
            const Piece& ann = pieces[ann_idx];
            for (int a = 0; a < ann.s->size(); ++a) {
                const double ax = ann.s->coords[a][0], ay = ann.s->coords[a][1];
                if (std::fabs(ax - seam_x) > cr || std::fabs(ay) > w + cr) continue;
                for (int b = 0; b < strip.s->size(); ++b) {
                    const double sx = strip.s->coords[b][0], sy = strip.s->coords[b][1];
                    const double along = strip_at_zero ? sx : len - sx;
                    const double d = std::hypot(std::fabs(ax - seam_x) + along, ay - sy);
                    if (d <= cr && d > 0) edges.push_back({ann.offset + a, strip.offset + b, d});
                }
            }
        }
    }
    out->graph = WeightedGraph::from_edges(static_cast<int>(out->coords.size()), edges);
    out->interior_components = connected_components(out->graph).second;

    // boundary: annulus outer rims and hole edges y = +-w; strip side edges
    std::vector<std::pair<int, double>> seeds;
    for (int pi = 0; pi < static_cast<int>(pieces.size()); ++pi) {
        const Piece& p = pieces[pi];
        const bool strip = p.strip;
        const double s = strip ? 0.0 : annulus_size(pi);
        const double len = strip ? p.s->spec.rects[0].x1 : 0.0;
        for (const auto& b : p.s->boundary_coords) {
            bool keep;
            if (strip) {
                keep = b[0] > 1e-9 && b[0] < len - 1e-9;  // side edges only
            } else {
                const bool on_hole_x = std::fabs(std::fabs(b[0]) - w) < 1e-9 &&
                                       std::fabs(b[1]) <= w + 1e-9;
                keep = !on_hole_x;
            }
            if (!keep) continue;
            for (int u = 0; u < p.s->size(); ++u) {
                const double d = std::hypot(p.s->coords[u][0] - b[0], p.s->coords[u][1] - b[1]);
                if (d <= cr) seeds.push_back({p.offset + u, d});
            }
            out->boundary_coords.push_back(b);
        }
    }
    out->has_boundary = !seeds.empty();
    out->boundary_seeds = seeds;
    out->boundary_dist.assign(out->size(), kInf);
    if (out->has_boundary) {
        SsspEngine engine(out->graph);
        out->boundary_dist = engine.run_multi(seeds);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Family dispatch for the CLI
// ---------------------------------------------------------------------------

struct FamilySpec {
    std::string family;
    int j = 2;
    int parity = 0;
    int depth = 4;
    double w = 0.25;
    double length = 1.0;
    double eps_hat = 0.2;
    double r1 = 0.0, r2 = 0.0;
    double delta = 0.3;
    double pitch = 0.5;
    std::vector<double> heights;
    std::vector<double> box{1.0, 1.0};
    SamplePlan plan;
};

struct Generated {
    std::string kind;  // "sampled" | "book" | "lattice" | "reference"
    SampledPtr sampled;
    std::shared_ptr<BookSpace> book;
    SpacePtr exact;
    std::vector<bool> boundary_flag;
};

inline Generated generate(const FamilySpec& f) {
    Generated g;
    auto sampled = [&](const DomainSpec& s) {
        g.kind = "sampled";
        g.sampled = sample_domain(s, f.plan);
    };
    if (f.family == "gold_foils") {
        sampled(gold_foils_spec(f.j, f.r1));
    } else if (f.family == "many_splines") {
        sampled(many_splines_spec(f.j));
    } else if (f.family == "annulus") {
        sampled(annulus_spec(f.r1, f.r2 > 0 ? f.r2 : f.r1 + 1.0));
    } else if (f.family == "disk") {
        sampled(unit_disk_spec(f.r1 > 0 ? f.r1 : 1.0));
    } else if (f.family == "spline_disk") {
        sampled(spline_disk_spec(f.w, f.length));
    } else if (f.family == "no_diag") {
        sampled(no_diag_spec(f.j, f.eps_hat));
    } else if (f.family == "decreasing_splines") {
        sampled(decreasing_splines_spec(f.j));
    } else if (f.family == "f_region") {
        sampled(f_region_spec(f.j, f.parity));
    } else if (f.family == "two_balls") {
        sampled(two_balls_spec());
    } else if (f.family == "square") {
        sampled(square_spec());
    } else if (f.family == "torus") {
        sampled(torus_spec());
    } else if (f.family == "u_region") {
        sampled(u_region_spec());
    } else if (f.family == "square_annuli_stack") {
        g.kind = "sampled";
        g.sampled = square_annuli_stack(f.j, f.plan);
    } else if (f.family == "disk_with_segment") {
        g.kind = "sampled";
        g.sampled = disk_with_segment(f.length, f.plan);
    } else if (f.family == "ann_reference") {
        g.kind = "reference";
        g.exact = ann_reference(f.delta, f.plan).space;
    } else if (f.family == "book") {
        g.kind = "book";
        g.book = f.heights.empty() ? make_book({1.0, 0.5, 0.25}) : make_book(f.heights);
        g.exact = g.book->space();
    } else if (f.family == "book_tower_page_doubling") {
        g.kind = "book";
        g.book = make_page_doubling_book(f.depth);
        g.exact = g.book->space();
    } else if (f.family == "taxi_box") {
        g.kind = "lattice";
        auto lat = lattice_skeleton(f.box, f.pitch);
        g.exact = lat.space;
        g.boundary_flag = lat.boundary_flag;
    } else {
        fail("InvalidFamilyParams", "unknown family " + f.family);
    }
    return g;
}

}  // namespace innerlim
