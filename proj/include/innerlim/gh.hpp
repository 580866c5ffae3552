#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "innerlim/errors.hpp"
#include "innerlim/graph.hpp"
#include "innerlim/metric_space.hpp"
#include "innerlim/rng.hpp"

namespace innerlim {

// ---------------------------------------------------------------------------
// Distance oracles. Packing/covering sweeps only ever need rows of selected
// centers, so large sampled spaces are served by per-source shortest paths
// instead of dense matrices.
// ---------------------------------------------------------------------------

class MatrixOracle {
public:
    explicit MatrixOracle(const FiniteMetricSpace& X) : x_(&X) {}
    int size() const { return x_->size(); }
    const double* row(int i) { return x_->row(i); }

private:
    const FiniteMetricSpace* x_;
};

// Geodesic metric of `points` inside a graph, materialized row by row.
class GraphRestrictedOracle {
public:
    GraphRestrictedOracle(const WeightedGraph& g, std::vector<int> points)
        : g_(&g), points_(std::move(points)), engine_(g) {}

    int size() const { return static_cast<int>(points_.size()); }

    const double* row(int i) {
        auto it = cache_.find(i);
        if (it == cache_.end()) {
            const auto& dist = engine_.run(points_[i]);
            std::vector<double> r(points_.size());
            for (std::size_t t = 0; t < points_.size(); ++t) r[t] = dist[points_[t]];
            it = cache_.emplace(i, std::move(r)).first;
        }
        return it->second.data();
    }

private:
    const WeightedGraph* g_;
    std::vector<int> points_;
    SsspEngine engine_;
    std::map<int, std::vector<double>> cache_;
};

// ---------------------------------------------------------------------------
// Packing and covering
// ---------------------------------------------------------------------------

struct PackingReport {
    double epsilon = 0.0;
    std::vector<int> centers;
    int count = 0;
};

// Farthest-point insertion record. radii[t] is the distance from order[t] to
// the previously chosen centers (+inf for the seed) and is non-increasing, so
// one sweep yields the packing count at every separation down to where it
// stopped.
struct FarthestPointSweep {
    std::vector<int> order;
    std::vector<double> radii;
    double next_radius = 0.0;  // insertion radius of the first point NOT taken
    bool exhausted = false;    // true when every point was taken

    // maximal-separated-set size at separation eps (valid for eps > next_radius
    // or when exhausted)
    int count_at(double eps) const {
        int lo = 0, hi = static_cast<int>(radii.size());
        while (lo < hi) {
            const int mid = (lo + hi) / 2;
            if (radii[mid] >= eps)
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo;
    }

    std::vector<int> centers_at(double eps) const {
        return {order.begin(), order.begin() + count_at(eps)};
    }

    bool valid_at(double eps) const { return exhausted || eps > next_radius; }
};

template <class Oracle>
FarthestPointSweep farthest_point_sweep(Oracle& oracle, int seed_index, double stop_sep,
                                        int max_count = std::numeric_limits<int>::max()) {
    const int n = oracle.size();
    if (n == 0) fail("EmptySpace", "packing of an empty space");
    if (seed_index < 0 || seed_index >= n) fail("IndexOutOfRange", "packing seed index");
    FarthestPointSweep sweep;
    std::vector<double> mind(n, kInf);
    int cur = seed_index;
    double cur_rad = kInf;
    while (static_cast<int>(sweep.order.size()) < std::min(n, max_count)) {
        if (cur_rad < stop_sep) break;
        sweep.order.push_back(cur);
        sweep.radii.push_back(cur_rad);
        const double* row = oracle.row(cur);
        int next = -1;
        double best = -1.0;
        for (int i = 0; i < n; ++i) {
            if (row[i] < mind[i]) mind[i] = row[i];
            if (mind[i] > best) {
                best = mind[i];
                next = i;
            }
        }
        if (best <= 0.0) {
            sweep.exhausted = true;
            sweep.next_radius = 0.0;
            return sweep;
        }
        cur = next;
        cur_rad = best;
    }
    sweep.next_radius = cur_rad;
    sweep.exhausted = sweep.order.size() == static_cast<std::size_t>(n);
    return sweep;
}

// Maximal eps-separated set grown by farthest-point insertion from
// seed_index; deterministic, ties broken toward the smallest index.
template <class Oracle>
PackingReport greedy_packing_oracle(Oracle& oracle, double eps, int seed_index = 0) {
    if (eps <= 0.0) fail("InvalidParams", "packing separation must be positive");
    const auto sweep = farthest_point_sweep(oracle, seed_index, eps);
    PackingReport rep;
    rep.epsilon = eps;
    rep.centers = sweep.order;
    rep.count = static_cast<int>(rep.centers.size());
    return rep;
}

inline PackingReport greedy_packing(const FiniteMetricSpace& X, double eps, int seed_index = 0) {
    MatrixOracle o(X);
    return greedy_packing_oracle(o, eps, seed_index);
}

struct CoveringReport {
    double epsilon = 0.0;
    std::vector<int> centers;
    int count = 0;
    double max_gap = 0.0;  // verified: max distance of any point to its nearest center
    bool verified = false;
};

// Cover by eps-balls centered on the greedy eps/2-separated set, with the
// cover property checked point by point.
template <class Oracle>
CoveringReport covering_from_packing_oracle(Oracle& oracle, double eps, int seed_index = 0) {
    if (eps <= 0.0) fail("InvalidParams", "covering radius must be positive");
    CoveringReport rep;
    rep.epsilon = eps;
    rep.centers = greedy_packing_oracle(oracle, eps / 2.0, seed_index).centers;
    rep.count = static_cast<int>(rep.centers.size());
    std::vector<double> mind(oracle.size(), kInf);
    for (int c : rep.centers) {
        const double* row = oracle.row(c);
        for (int i = 0; i < oracle.size(); ++i) mind[i] = std::min(mind[i], row[i]);
    }
    rep.max_gap = *std::max_element(mind.begin(), mind.end());
    rep.verified = rep.max_gap <= eps;
    return rep;
}

inline CoveringReport covering_from_packing(const FiniteMetricSpace& X, double eps,
                                            int seed_index = 0) {
    MatrixOracle o(X);
    return covering_from_packing_oracle(o, eps, seed_index);
}

// ---------------------------------------------------------------------------
// Gromov-Hausdorff bounds
// ---------------------------------------------------------------------------

struct Correspondence {
    std::vector<std::pair<int, int>> pairs;
    double distortion = 0.0;
};

inline double correspondence_distortion(const FiniteMetricSpace& X, const FiniteMetricSpace& Y,
                                        const std::vector<std::pair<int, int>>& pairs) {
    double dis = 0.0;
    for (std::size_t a = 0; a < pairs.size(); ++a) {
        const double* rx = X.row(pairs[a].first);
        const double* ry = Y.row(pairs[a].second);
        for (std::size_t b = a + 1; b < pairs.size(); ++b)
            dis = std::max(dis, std::fabs(rx[pairs[b].first] - ry[pairs[b].second]));
    }
    return dis;
}

struct GHBound {
    double lower = 0.0;
    double upper = kInf;
    std::optional<double> exact;
    std::string lower_method, upper_method;
};

// Exact d_GH by brute force over correspondences, via the pair-of-maps
// characterization: every correspondence contains graph(f) U graph(g) for
// maps f: X->Y, g: Y->X, and that union is itself a correspondence with no
// larger distortion. DFS with distortion pruning.
inline double gh_exact_small(const FiniteMetricSpace& X, const FiniteMetricSpace& Y) {
    if (X.empty() || Y.empty()) fail("EmptySpace", "gh_exact_small of empty space");
    if (X.size() > 5 || Y.size() > 5) fail("TooLarge", "gh_exact_small limited to n <= 5");
    const int nx = X.size(), ny = Y.size();
    std::vector<int> f(nx, -1), g(ny, -1);
    double best = kInf;

    auto pair_dev = [&](int xi, int yi, int xj, int yj) {
        return std::fabs(X.d(xi, xj) - Y.d(yi, yj));
    };

    // distortion contributions of g-assignments against f and earlier g
    std::function<void(int, double)> dfs_g = [&](int yi, double cur) {
        if (cur >= best) return;
        if (yi == ny) {
            best = cur;
            return;
        }
        for (int x = 0; x < nx; ++x) {
            double nxt = cur;
            for (int i = 0; i < nx && nxt < best; ++i)
                nxt = std::max(nxt, pair_dev(x, yi, i, f[i]));
            for (int j = 0; j < yi && nxt < best; ++j)
                nxt = std::max(nxt, pair_dev(x, yi, g[j], j));
            if (nxt < best) {
                g[yi] = x;
                dfs_g(yi + 1, nxt);
                g[yi] = -1;
            }
        }
    };

    std::function<void(int, double)> dfs_f = [&](int xi, double cur) {
        if (cur >= best) return;
        if (xi == nx) {
            dfs_g(0, cur);
            return;
        }
        for (int y = 0; y < ny; ++y) {
            double nxt = cur;
            for (int i = 0; i < xi && nxt < best; ++i)
                nxt = std::max(nxt, pair_dev(xi, y, i, f[i]));
            if (nxt < best) {
                f[xi] = y;
                dfs_f(xi + 1, nxt);
                f[xi] = -1;
            }
        }
    };

    dfs_f(0, 0.0);
    return best / 2.0;
}

namespace detail {

// grid of informative separation values from a farthest-point sweep
inline std::vector<double> radius_grid(const FarthestPointSweep& sweep, int cap = 48) {
    std::vector<double> vals;
    for (std::size_t i = 1; i < sweep.radii.size(); ++i)
        if (sweep.valid_at(sweep.radii[i])) vals.push_back(sweep.radii[i]);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    if (static_cast<int>(vals.size()) > cap) {
        std::vector<double> sub;
        for (int i = 0; i < cap; ++i)
            sub.push_back(vals[static_cast<std::size_t>(i) * vals.size() / cap]);
        sub.push_back(vals.back());
        vals = std::move(sub);
    }
    return vals;
}

// largest (r - s)/2 with pack_A(r) > pack_B(0.4999 s): any correspondence with
// distortion < r - s would transport an r-separated set into an s-separated
// set, which a cover by s/2-balls cannot hold.
inline double packing_obstruction(const FarthestPointSweep& a, const FarthestPointSweep& b) {
    const auto grid_a = radius_grid(a);
    const auto grid_b = radius_grid(b);
    double bound = 0.0;
    for (double r : grid_a) {
        if (!a.valid_at(r)) continue;
        const int ca = a.count_at(r);
        for (double s : grid_b) {
            if (s >= r) break;
            const double rho = 0.4999 * s;
            if (!b.valid_at(rho)) continue;
            if (ca > b.count_at(rho)) bound = std::max(bound, (r - s) / 2.0);
        }
    }
    return bound;
}

}  // namespace detail

// Always a valid lower bound for d_GH: half the diameter gap, improved by the
// packing-count obstruction in both directions.
inline double gh_lower_bound(const FiniteMetricSpace& X, const FiniteMetricSpace& Y) {
    if (X.empty() || Y.empty()) fail("EmptySpace", "gh_lower_bound of empty space");
    const double dx = diameter(X), dy = diameter(Y);
    double bound = std::fabs(dx - dy) / 2.0;
    const double floor_sep = 0.02 * std::max({dx, dy, 1e-300});
    MatrixOracle ox(X), oy(Y);
    const auto sx = farthest_point_sweep(ox, 0, floor_sep, 512);
    const auto sy = farthest_point_sweep(oy, 0, floor_sep, 512);
    bound = std::max(bound, detail::packing_obstruction(sx, sy));
    bound = std::max(bound, detail::packing_obstruction(sy, sx));
    return bound;
}

namespace detail {

inline std::vector<double> eccentricities(const FiniteMetricSpace& X) {
    std::vector<double> ecc(X.size(), 0.0);
    for (int i = 0; i < X.size(); ++i) {
        const double* r = X.row(i);
        for (int j = 0; j < X.size(); ++j) ecc[i] = std::max(ecc[i], r[j]);
    }
    return ecc;
}

// landmark anchors in Y matching the distance pattern of X's landmarks;
// eccentricity enters the score since isometries preserve it
inline std::vector<int> match_landmarks(const FiniteMetricSpace& X, const FiniteMetricSpace& Y,
                                        const std::vector<int>& lx,
                                        const std::vector<double>& ecc_x,
                                        const std::vector<double>& ecc_y, int beam_width) {
    const int k = static_cast<int>(lx.size());
    const int ny = Y.size();
    struct Cand {
        std::vector<int> anchors;
        double mismatch;
    };
    std::vector<Cand> beam{{{}, 0.0}};
    for (int t = 0; t < k; ++t) {
        std::vector<Cand> next;
        for (const auto& c : beam) {
            std::vector<std::pair<double, int>> scored;
            scored.reserve(ny);
            for (int y = 0; y < ny; ++y) {
                double m = std::max(c.mismatch, std::fabs(ecc_x[lx[t]] - ecc_y[y]));
                for (int s = 0; s < t && m < kInf; ++s)
                    m = std::max(m, std::fabs(X.d(lx[s], lx[t]) - Y.d(c.anchors[s], y)));
                scored.push_back({m, y});
            }
            std::partial_sort(scored.begin(),
                              scored.begin() + std::min<std::size_t>(beam_width, scored.size()),
                              scored.end());
            for (int i = 0; i < std::min(beam_width, static_cast<int>(scored.size())); ++i) {
                Cand nc = c;
                nc.anchors.push_back(scored[i].second);
                nc.mismatch = scored[i].first;
                next.push_back(std::move(nc));
            }
        }
        std::sort(next.begin(), next.end(), [](const Cand& a, const Cand& b) {
            if (a.mismatch != b.mismatch) return a.mismatch < b.mismatch;
            return a.anchors < b.anchors;
        });
        if (static_cast<int>(next.size()) > beam_width) next.resize(beam_width);
        beam = std::move(next);
    }
    return beam.front().anchors;
}

}  // namespace detail

// Constructive upper bound: farthest-point landmarks, beam-matched anchors,
// nearest-profile assignment both ways with alternating re-anchoring, then
// `effort` rounds of worst-pair reassignment. Returns distortion/2 and the
// correspondence; always >= d_GH.
inline std::pair<double, Correspondence> gh_upper_bound(const FiniteMetricSpace& X,
                                                        const FiniteMetricSpace& Y,
                                                        int effort = 8) {
    if (X.empty() || Y.empty()) fail("EmptySpace", "gh_upper_bound of empty space");
    const int nx = X.size(), ny = Y.size();

    Correspondence best;
    best.distortion = kInf;

    // identical matrices short-circuit to the identity relation
    if (nx == ny) {
        Correspondence ident;
        ident.pairs.reserve(nx);
        for (int i = 0; i < nx; ++i) ident.pairs.push_back({i, i});
        ident.distortion = correspondence_distortion(X, Y, ident.pairs);
        if (ident.distortion == 0.0) return {0.0, std::move(ident)};
        best = std::move(ident);
    }

    const int k = std::min({24, nx, ny});
    MatrixOracle ox(X);
    const auto lx = farthest_point_sweep(ox, 0, 0.0, k).order;
    const auto ecc_x = detail::eccentricities(X);
    const auto ecc_y = detail::eccentricities(Y);
    std::vector<int> anchors =
        detail::match_landmarks(X, Y, lx, ecc_x, ecc_y, std::min(32, ny));

    // profiles against the current landmark/anchor pairing
    auto assign = [&](bool x_to_y) {
        const int n_from = x_to_y ? nx : ny;
        const int n_to = x_to_y ? ny : nx;
        std::vector<int> out(n_from);
        for (int i = 0; i < n_from; ++i) {
            double bestm = kInf;
            int arg = 0;
            const double ei = x_to_y ? ecc_x[i] : ecc_y[i];
            for (int j = 0; j < n_to; ++j) {
                double m = std::fabs(ei - (x_to_y ? ecc_y[j] : ecc_x[j]));
                for (std::size_t s = 0; s < lx.size() && m < bestm; ++s) {
                    const double a = x_to_y ? X.d(i, lx[s]) : Y.d(i, anchors[s]);
                    const double b = x_to_y ? Y.d(j, anchors[s]) : X.d(j, lx[s]);
                    m = std::max(m, std::fabs(a - b));
                }
                if (m < bestm) {
                    bestm = m;
                    arg = j;
                }
            }
            out[i] = arg;
        }
        return out;
    };

    auto build = [&](const std::vector<int>& f, const std::vector<int>& g) {
        Correspondence c;
        c.pairs.reserve(nx + ny);
        for (int i = 0; i < nx; ++i) c.pairs.push_back({i, f[i]});
        for (int j = 0; j < ny; ++j) c.pairs.push_back({g[j], j});
        std::sort(c.pairs.begin(), c.pairs.end());
        c.pairs.erase(std::unique(c.pairs.begin(), c.pairs.end()), c.pairs.end());
        c.distortion = correspondence_distortion(X, Y, c.pairs);
        return c;
    };

    std::vector<int> fx, gy;
    for (int round = 0; round < 3; ++round) {
        fx = assign(true);
        gy = assign(false);
        Correspondence cur = build(fx, gy);
        if (cur.distortion < best.distortion) best = cur;
        // re-anchor on the images of the landmarks for the next sweep
        std::vector<int> next_anchors(lx.size());
        for (std::size_t s = 0; s < lx.size(); ++s) next_anchors[s] = fx[lx[s]];
        if (next_anchors == anchors) break;
        anchors = std::move(next_anchors);
    }

    // worst-pair driven reassignment; candidates are scored incrementally
    // (pair deviations against the rest of the relation), not by rebuilding
    Correspondence cur = build(fx, gy);
    for (int round = 0; round < effort; ++round) {
        if (cur.distortion < best.distortion) best = cur;
        double worst = -1.0;
        std::size_t worst_a = 0, worst_b = 0;
        for (std::size_t a = 0; a < cur.pairs.size(); ++a) {
            const double* rx = X.row(cur.pairs[a].first);
            const double* ry = Y.row(cur.pairs[a].second);
            for (std::size_t b = a + 1; b < cur.pairs.size(); ++b) {
                const double dev = std::fabs(rx[cur.pairs[b].first] - ry[cur.pairs[b].second]);
                if (dev > worst) {
                    worst = dev;
                    worst_a = a;
                    worst_b = b;
                }
            }
        }
        bool improved = false;
        for (std::size_t victim : {worst_a, worst_b}) {
            const auto [xi, yi] = cur.pairs[victim];
            // ceiling over pairs that do not involve the victim entry
            double rest = 0.0;
            for (std::size_t a = 0; a < cur.pairs.size(); ++a) {
                if (a == victim) continue;
                const double* rx = X.row(cur.pairs[a].first);
                const double* ry = Y.row(cur.pairs[a].second);
                for (std::size_t b = a + 1; b < cur.pairs.size(); ++b) {
                    if (b == victim) continue;
                    rest = std::max(rest,
                                    std::fabs(rx[cur.pairs[b].first] - ry[cur.pairs[b].second]));
                }
            }
            if (rest >= cur.distortion) continue;
            const double* rxi = X.row(xi);
            int best_y = -1;
            double best_val = cur.distortion;
            for (int y = 0; y < ny; ++y) {
                double val = rest;
                const double* ry = Y.row(y);
                for (std::size_t b = 0; b < cur.pairs.size() && val < best_val; ++b) {
                    if (b == victim) continue;
                    val = std::max(val,
                                   std::fabs(rxi[cur.pairs[b].first] - ry[cur.pairs[b].second]));
                }
                if (val < best_val) {
                    best_val = val;
                    best_y = y;
                }
            }
            if (best_y >= 0) {
                // keep the relation doubly surjective: replace only when the
                // victim's y side stays covered by the g assignments
                bool y_covered = false;
                for (std::size_t b = 0; b < cur.pairs.size(); ++b)
                    if (b != victim && cur.pairs[b].second == yi) y_covered = true;
                if (!y_covered) continue;
                cur.pairs[victim] = {xi, best_y};
                std::sort(cur.pairs.begin(), cur.pairs.end());
                cur.pairs.erase(std::unique(cur.pairs.begin(), cur.pairs.end()),
                                cur.pairs.end());
                cur.distortion = correspondence_distortion(X, Y, cur.pairs);
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    if (cur.distortion < best.distortion) best = cur;
    return {best.distortion / 2.0, best};
}

inline GHBound gh_bounds(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, int effort = 8) {
    GHBound b;
    b.lower = gh_lower_bound(X, Y);
    b.lower_method = "diameter-gap+packing-obstruction";
    auto [up, corr] = gh_upper_bound(X, Y, effort);
    b.upper = up;
    b.upper_method = "landmark-correspondence";
    if (X.size() <= 5 && Y.size() <= 5) b.exact = gh_exact_small(X, Y);
    return b;
}

// ---------------------------------------------------------------------------
// Sequence diagnostics (Gromov compactness vs divergence, finite surrogate)
// ---------------------------------------------------------------------------

enum class SequenceVerdict { uniformly_totally_bounded, divergent, inconclusive };

inline const char* to_string(SequenceVerdict v) {
    switch (v) {
        case SequenceVerdict::uniformly_totally_bounded: return "uniformly_totally_bounded";
        case SequenceVerdict::divergent: return "divergent";
        case SequenceVerdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

// Finite surrogate thresholds. Divergence wants sustained strict growth (>= 2
// per step across >= min_run spaces) that is also relative (ratio guard), so
// sampling wobble in large counts cannot trip it.
struct SequenceRule {
    int min_run = 3;
    double min_step = 2.0;
    double min_ratio = 1.25;
    double bounded_ratio = 1.5;
    double bounded_slack = 2.0;
};

struct SequenceDiagnosis {
    std::vector<double> eps_grid;
    std::vector<std::vector<int>> counts;  // [space][eps]
    SequenceVerdict verdict = SequenceVerdict::inconclusive;
    double witness_eps = 0.0;
};

inline SequenceDiagnosis diagnose_packing_counts(std::vector<std::vector<int>> counts,
                                                 std::vector<double> eps_grid,
                                                 const SequenceRule& rule = {}) {
    if (counts.size() < 3) fail("InvalidParams", "sequence diagnostics needs >= 3 spaces");
    SequenceDiagnosis diag;
    diag.eps_grid = std::move(eps_grid);
    diag.counts = std::move(counts);
    const int ns = static_cast<int>(diag.counts.size());
    const int ne = static_cast<int>(diag.eps_grid.size());
    double best_growth = 0.0;
    bool all_bounded = true;
    for (int e = 0; e < ne; ++e) {
        int c0 = diag.counts[0][e], cmax = c0;
        for (int s = 0; s < ns; ++s) cmax = std::max(cmax, diag.counts[s][e]);
        if (cmax > std::max(rule.bounded_ratio * c0, c0 + rule.bounded_slack))
            all_bounded = false;
        for (int s = 0; s + rule.min_run <= ns; ++s) {
            bool run = true;
            for (int t = 0; t < rule.min_run - 1; ++t)
                if (diag.counts[s + t + 1][e] - diag.counts[s + t][e] < rule.min_step) run = false;
            const int a = diag.counts[s][e], b = diag.counts[s + rule.min_run - 1][e];
            if (run && a > 0 && b >= rule.min_ratio * a) {
                const double growth = static_cast<double>(b) / a;
                if (growth > best_growth) {
                    best_growth = growth;
                    diag.witness_eps = diag.eps_grid[e];
                }
            }
        }
    }
    if (best_growth > 0.0)
        diag.verdict = SequenceVerdict::divergent;
    else if (all_bounded)
        diag.verdict = SequenceVerdict::uniformly_totally_bounded;
    else
        diag.verdict = SequenceVerdict::inconclusive;
    return diag;
}

// Convenience over matrix spaces; large sampled spaces should compute packing
// curves through GraphRestrictedOracle and call diagnose_packing_counts.
inline SequenceDiagnosis sequence_diagnostics(const std::vector<const FiniteMetricSpace*>& spaces,
                                              const std::vector<double>& eps_grid,
                                              const SequenceRule& rule = {}) {
    if (spaces.size() < 3) fail("InvalidParams", "sequence diagnostics needs >= 3 spaces");
    const double eps_min = *std::min_element(eps_grid.begin(), eps_grid.end());
    std::vector<std::vector<int>> counts;
    for (const auto* s : spaces) {
        MatrixOracle o(*s);
        const auto sweep = farthest_point_sweep(o, 0, eps_min);
        std::vector<int> row;
        for (double e : eps_grid) row.push_back(sweep.count_at(e));
        counts.push_back(std::move(row));
    }
    return diagnose_packing_counts(std::move(counts), eps_grid, rule);
}

// ---------------------------------------------------------------------------
// Chain-counting covering bound and space-form ball volumes
// ---------------------------------------------------------------------------

struct ChainCountingParams {
    int m = 2;          // dimension
    double delta = 0;   // inner-region scale
    double epsilon = 0; // cover radius, in (0, delta/2)
    double d_delta = 0; // intrinsic inner-diameter bound
    double v = 0;       // volume bound
    double theta = 0;   // noncollapsing constant
};

struct ChainCountingBound {
    double log2_value = 0.0;
    double value = 0.0;  // saturates to +inf when it exceeds double range
};

// N(delta, eps, D, V, theta) = (V/theta) * (2^(2D/eps) / eps)^m, evaluated in
// log2 space so astronomically large bounds stay exact in the exponent.
inline ChainCountingBound chain_counting_bound(const ChainCountingParams& p) {
    if (p.m < 1 || p.delta <= 0 || p.epsilon <= 0 || p.d_delta <= 0 || p.v <= 0 || p.theta <= 0)
        fail("InvalidParams", "chain-counting parameters must be positive");
    if (!(p.epsilon < p.delta / 2.0))
        fail("InvalidParams", "cover radius must satisfy epsilon < delta/2");
    ChainCountingBound b;
    b.log2_value =
        std::log2(p.v) - std::log2(p.theta) +
        p.m * (2.0 * p.d_delta / p.epsilon - std::log2(p.epsilon));
    b.value = b.log2_value > 1023.0 ? kInf : std::exp2(b.log2_value);
    return b;
}

// flat (H = 0) ball volume, m in {1,2,3}
inline double ball_volume_flat(int m, double eps) {
    if (eps <= 0.0) fail("InvalidParams", "ball radius must be positive");
    switch (m) {
        case 1: return 2.0 * eps;
        case 2: return kPi * eps * eps;
        case 3: return 4.0 / 3.0 * kPi * eps * eps * eps;
        default: fail("UnsupportedDimension", "flat ball volume implemented for m in {1,2,3}");
    }
}

// extrinsic-diameter bound for inner regions under constant curvature H = 0:
// eps0 * V / V_flat(eps0/2) with eps0 = min(delta, l/2)/2. The volume factor
// uses radius eps0/2, the form the covering argument actually delivers.
inline double sc_diameter_bound(double v, double delta, double l, double m_dim) {
    if (v <= 0 || delta <= 0 || l <= 0) fail("InvalidParams", "positive inputs required");
    const double eps0 = std::min(delta, l / 2.0) / 2.0;
    return eps0 * v / ball_volume_flat(static_cast<int>(m_dim), eps0 / 2.0);
}

}  // namespace innerlim
