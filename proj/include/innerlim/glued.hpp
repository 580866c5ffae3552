#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "innerlim/errors.hpp"
#include "innerlim/metric_space.hpp"

namespace innerlim {

// Isometric embedding between consecutive tower levels.
struct EmbeddingMap {
    int src_level = 0;
    int dst_level = 0;
    std::vector<int> map;
    double max_distortion = 0.0;
};

// Decreasing scales delta_0 > delta_1 > ..., the level spaces Y^{delta_i} and
// the embeddings phi_{delta_{i+1}, delta_i} between consecutive levels.
// tol bounds each consecutive embedding's distortion; composed maps compound.
// dedup_tol is a separate, much smaller threshold: a genuinely new point this
// close to an embedding image is treated as that image point when gluing.
struct Tower {
    std::vector<double> deltas;
    std::vector<SpacePtr> spaces;
    std::vector<EmbeddingMap> embeddings;  // embeddings[i]: level i -> level i+1
    double tol = 0.0;
    double dedup_tol = 0.0;

    int depth() const { return static_cast<int>(spaces.size()); }
};

struct TowerReport {
    bool ok = true;
    double worst_distortion = 0.0;
    std::vector<std::string> issues;
};

inline TowerReport validate_tower(const Tower& t) {
    TowerReport rep;
    auto issue = [&](const std::string& s) {
        rep.ok = false;
        rep.issues.push_back(s);
    };
    if (t.depth() < 1) issue("tower has no levels");
    if (t.deltas.size() != t.spaces.size()) issue("deltas/spaces size mismatch");
    for (std::size_t i = 0; i + 1 < t.deltas.size(); ++i)
        if (!(t.deltas[i] > t.deltas[i + 1]))
            issue("deltas not strictly decreasing at level " + std::to_string(i));
    for (double d : t.deltas)
        if (!(d > 0.0)) issue("nonpositive delta");
    if (t.embeddings.size() + 1 != t.spaces.size() && t.depth() > 1)
        issue("expected one embedding per consecutive level pair");
    for (std::size_t i = 0; i < t.embeddings.size(); ++i) {
        const auto& e = t.embeddings[i];
        if (e.src_level != static_cast<int>(i) || e.dst_level != static_cast<int>(i) + 1) {
            issue("embedding " + std::to_string(i) + " does not join consecutive levels");
            continue;
        }
        if (e.map.size() != static_cast<std::size_t>(t.spaces[i]->size())) {
            issue("embedding " + std::to_string(i) + " is not total");
            continue;
        }
        const auto r = is_isometric_embedding(*t.spaces[i], *t.spaces[i + 1], e.map, t.tol);
        rep.worst_distortion = std::max(rep.worst_distortion, r.max_distortion);
        if (!r.injective) issue("embedding " + std::to_string(i) + " not injective");
        if (r.max_distortion > t.tol) {
            issue("embedding " + std::to_string(i) + " distorts " +
                  std::to_string(r.max_distortion) + " > tol, worst pair (" +
                  std::to_string(r.worst_pair[0]) + "," + std::to_string(r.worst_pair[1]) + ")");
        }
    }
    return rep;
}

// Search for an injective map src -> dst with distortion <= tol. Backtracking
// in natural vertex order with candidate values ascending, so the first map
// found is the lexicographically smallest feasible one (deterministic across
// runs). `effort` caps the number of search nodes; hitting the cap is
// EffortExhausted, full exhaustion without a map is NoEmbedding.
inline EmbeddingMap find_isometric_embedding(const FiniteMetricSpace& src,
                                             const FiniteMetricSpace& dst, double tol,
                                             long effort = 2000000) {
    if (src.size() > dst.size())
        fail("InvalidParams", "source larger than target");
    if (diameter(src) > diameter(dst) + tol)
        fail("NoEmbedding", "diameter obstruction");
    const int ns = src.size(), nd = dst.size();
    std::vector<int> assign(ns, -1);
    std::vector<char> used(nd, 0);
    long nodes = 0;
    bool exhausted_effort = false;

    std::function<bool(int)> dfs = [&](int v) -> bool {
        if (v == ns) return true;
        for (int y = 0; y < nd; ++y) {
            if (used[y]) continue;
            if (++nodes > effort) {
                exhausted_effort = true;
                return false;
            }
            bool ok = true;
            for (int u = 0; u < v; ++u) {
                if (std::fabs(src.d(u, v) - dst.d(assign[u], y)) > tol) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            assign[v] = y;
            used[y] = 1;
            if (dfs(v + 1)) return true;
            if (exhausted_effort) return false;
            assign[v] = -1;
            used[y] = 0;
        }
        return false;
    };

    if (!dfs(0)) {
        if (exhausted_effort) fail("EffortExhausted", "embedding search budget spent");
        fail("NoEmbedding", "no embedding within tolerance");
    }
    EmbeddingMap e;
    e.map = assign;
    e.max_distortion = is_isometric_embedding(src, dst, assign, tol).max_distortion;
    return e;
}

// Stratified disjoint union of tower differences with the case-wise glued
// metric: a pair is measured in the deeper of its two home levels after
// pushing the shallower point forward through the composed embeddings.
// Distances are copied verbatim from the level matrices, so exact towers give
// exact collapses.
class GluedSpace {
public:
    std::vector<double> deltas;
    double tol = 0.0;
    SpacePtr space;
    std::vector<int> stratum;                 // per glued point: home level
    std::vector<int> home_index;              // index within the home level space
    std::vector<std::vector<int>> f_maps;     // per level: level index -> glued index
    std::vector<std::vector<int>> forward;    // per level: glued index -> level index or -1
    int merged_points = 0;                    // tol-deduplicated near-duplicates
    double min_cross_stratum = kInf;

    int size() const { return static_cast<int>(stratum.size()); }

    // glued points in the image of F_level
    std::vector<int> level_image(int level) const {
        std::vector<int> out;
        for (int g = 0; g < size(); ++g)
            if (stratum[g] <= level) out.push_back(g);
        return out;
    }
};

inline GluedSpace build_glued(const Tower& t) {
    const auto rep = validate_tower(t);
    if (!rep.ok) fail("InvalidTower", rep.issues.front());
    const int L = t.depth();
    GluedSpace g;
    g.deltas = t.deltas;
    g.tol = t.tol;

    // reps[i][p] = glued id of level-i point p
    std::vector<std::vector<int>> reps(L);
    for (int p = 0; p < t.spaces[0]->size(); ++p) {
        reps[0].push_back(static_cast<int>(g.stratum.size()));
        g.stratum.push_back(0);
        g.home_index.push_back(p);
    }
    for (int i = 1; i < L; ++i) {
        const int n_i = t.spaces[i]->size();
        reps[i].assign(n_i, -1);
        const auto& phi = t.embeddings[i - 1].map;
        for (int p = 0; p < t.spaces[i - 1]->size(); ++p) reps[i][phi[p]] = reps[i - 1][p];
        for (int p = 0; p < n_i; ++p) {
            if (reps[i][p] != -1) continue;
            if (t.dedup_tol > 0.0) {
                // a new point within dedup_tol of an image point aliases it,
                // keeping near-duplicates from breaking positive definiteness
                int alias = -1;
                double best = t.dedup_tol;
                for (int q = 0; q < n_i; ++q) {
                    if (reps[i][q] == -1 || q == p) continue;
                    const double d = t.spaces[i]->d(p, q);
                    if (d <= best) {
                        best = d;
                        alias = q;
                    }
                }
                if (alias != -1) {
                    reps[i][p] = reps[i][alias];
                    ++g.merged_points;
                    continue;
                }
            }
            reps[i][p] = static_cast<int>(g.stratum.size());
            g.stratum.push_back(i);
            g.home_index.push_back(p);
        }
    }
    g.f_maps = reps;

    // forward[i][glued id] = level-i index of the pushed-forward point
    const int n_g = g.size();
    g.forward.assign(L, std::vector<int>(n_g, -1));
    for (int i = 0; i < L; ++i)
        for (int p = 0; p < t.spaces[i]->size(); ++p) g.forward[i][reps[i][p]] = p;

    std::vector<double> flat(static_cast<std::size_t>(n_g) * n_g, 0.0);
    for (int a = 0; a < n_g; ++a) {
        for (int b = a + 1; b < n_g; ++b) {
            const int l = std::max(g.stratum[a], g.stratum[b]);
            const double d = t.spaces[l]->d(g.forward[l][a], g.forward[l][b]);
            flat[static_cast<std::size_t>(a) * n_g + b] = d;
            flat[static_cast<std::size_t>(b) * n_g + a] = d;
            if (g.stratum[a] != g.stratum[b])
                g.min_cross_stratum = std::min(g.min_cross_stratum, d);
        }
    }
    g.space = make_space(FiniteMetricSpace::from_flat(n_g, std::move(flat)));
    return g;
}

// Distortion and nesting check for F_{delta_level}.
inline IsometryReport embed_stratum(const GluedSpace& g, const Tower& t, int level) {
    if (level < 0 || level >= t.depth()) fail("IndexOutOfRange", "tower level");
    auto rep = is_isometric_embedding(*t.spaces[level], *g.space, g.f_maps[level], g.tol);
    if (level > 0) {
        // nesting: image(F_{level-1}) inside image(F_level)
        std::vector<char> in(g.size(), 0);
        for (int x : g.f_maps[level]) in[x] = 1;
        for (int x : g.f_maps[level - 1])
            if (!in[x]) fail("BrokenNesting", "stratum images not nested");
    }
    return rep;
}

// Closed eps-ball about F_{delta_i}(y) intersected with the image of
// F_{delta_j}; only meaningful in the regime eps < delta_i - delta_j.
inline std::vector<int> glued_ball(const GluedSpace& g, int level_i, int point_in_level,
                                   double eps, int level_j) {
    const int L = static_cast<int>(g.deltas.size());
    if (level_i < 0 || level_i >= L || level_j <= level_i || level_j >= L)
        fail("IndexOutOfRange", "glued ball levels");
    if (!(eps < g.deltas[level_i] - g.deltas[level_j]))
        fail("RadiusTooLarge", "need eps < delta_i - delta_j");
    const int center = g.f_maps[level_i][point_in_level];
    std::vector<int> out;
    const double* row = g.space->row(center);
    for (int q = 0; q < g.size(); ++q)
        if (g.stratum[q] <= level_j && row[q] <= eps) out.push_back(q);
    return out;
}

// Least-squares slope of log(ball point count) against log r: the counting
// proxy for local dimension.
inline double ball_growth_exponent(const FiniteMetricSpace& X, int point,
                                   const std::vector<double>& r_grid) {
    if (point < 0 || point >= X.size()) fail("IndexOutOfRange", "ball center");
    if (r_grid.size() < 2) fail("DegenerateGrid", "need at least two radii");
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        if (r_grid[i] <= 0.0) fail("DegenerateGrid", "radii must be positive");
        if (i > 0 && r_grid[i] <= r_grid[i - 1])
            fail("DegenerateGrid", "radii must be strictly increasing");
    }
    const double* row = X.row(point);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double r : r_grid) {
        int count = 0;
        for (int i = 0; i < X.size(); ++i)
            if (row[i] <= r) ++count;
        const double lx = std::log(r), ly = std::log(static_cast<double>(count));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(r_grid.size());
    const double denom = n * sxx - sx * sx;
    if (std::fabs(denom) < 1e-30) fail("DegenerateGrid", "radii too close");
    return (n * sxy - sx * sy) / denom;
}

// Finite-j estimate of the limit's inner union inside a common ambient space:
// for each delta, the ambient points that stay within tol of every tail
// image; then the union over deltas. j_start < 0 means the second half of
// the available indices.
inline std::vector<int> inner_union_estimate(
    const FiniteMetricSpace& ambient,
    const std::vector<std::vector<std::vector<int>>>& subsets_per_delta, double tol,
    int j_start = -1) {
    std::vector<char> in_union(ambient.size(), 0);
    for (const auto& per_j : subsets_per_delta) {
        const int nj = static_cast<int>(per_j.size());
        if (nj == 0) continue;
        const int start = j_start >= 0 ? std::min(j_start, nj - 1) : nj / 2;
        std::vector<char> keep(ambient.size(), 1);
        for (int j = start; j < nj; ++j) {
            const auto& sub = per_j[j];
            for (int x : sub)
                if (x < 0 || x >= ambient.size())
                    fail("InconsistentAmbient", "subset index out of range");
            if (sub.empty()) {
                std::fill(keep.begin(), keep.end(), 0);
                break;
            }
            for (int x = 0; x < ambient.size(); ++x)
                if (keep[x] && set_distance(ambient, x, sub) > tol) keep[x] = 0;
        }
        for (int x = 0; x < ambient.size(); ++x)
            if (keep[x]) in_union[x] = 1;
    }
    std::vector<int> out;
    for (int x = 0; x < ambient.size(); ++x)
        if (in_union[x]) out.push_back(x);
    return out;
}

}  // namespace innerlim
