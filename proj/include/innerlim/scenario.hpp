#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "innerlim/errors.hpp"
#include "innerlim/gallery.hpp"
#include "innerlim/gh.hpp"
#include "innerlim/glued.hpp"
#include "innerlim/io.hpp"
#include "innerlim/metric_space.hpp"
#include "innerlim/rng.hpp"
#include "innerlim/sampler.hpp"

namespace innerlim::scenarios {

inline constexpr const char* kVersion = "0.1.0";

struct StepResult {
    std::string name;
    io::Json values;
    bool pass = true;
};

struct Report {
    std::string scenario;
    std::string version = kVersion;
    std::uint64_t seed = 0;
    std::vector<StepResult> steps;
    double elapsed_seconds = 0.0;

    bool pass() const {
        for (const auto& s : steps)
            if (!s.pass) return false;
        return true;
    }

    void step(const std::string& name, io::Json values, bool ok = true) {
        steps.push_back({name, std::move(values), ok});
    }

    io::Json to_json(bool include_timing = true) const {
        io::Json j;
        j["scenario"] = scenario;
        j["version"] = version;
        j["seed"] = seed;
        j["pass"] = pass();
        io::Json steps_json = io::Json::array();
        for (const auto& s : steps) {
            io::Json js;
            js["name"] = s.name;
            js["pass"] = s.pass;
            js["values"] = s.values;
            steps_json.push_back(std::move(js));
        }
        j["steps"] = std::move(steps_json);
        if (include_timing) j["timing"] = {{"elapsed_seconds", elapsed_seconds}};
        return j;
    }
};

namespace detail {

inline bool within_rel(double value, double target, double rel) {
    return std::fabs(value - target) <= rel * std::fabs(target);
}

inline std::vector<int> packing_counts_graph(const WeightedGraph& g, const std::vector<int>& pts,
                                             const std::vector<double>& grid) {
    GraphRestrictedOracle o(g, pts);
    const double eps_min = *std::min_element(grid.begin(), grid.end());
    const auto sweep = farthest_point_sweep(o, 0, eps_min);
    std::vector<int> counts;
    for (double e : grid) counts.push_back(sweep.count_at(e));
    return counts;
}

// random small metric space: planar points or a metricized random graph
inline FiniteMetricSpace random_small_space(Rng& rng, int max_n = 4) {
    const int n = 1 + static_cast<int>(rng.below(max_n));
    const double scale = 0.25 + 4.0 * rng.next_unit();
    std::vector<double> flat(static_cast<std::size_t>(n) * n, 0.0);
    if (rng.next_unit() < 0.5) {
        std::vector<std::array<double, 2>> p(n);
        for (auto& q : p) q = {scale * rng.next_unit(), scale * rng.next_unit()};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                flat[static_cast<std::size_t>(i) * n + j] =
                    std::hypot(p[i][0] - p[j][0], p[i][1] - p[j][1]);
    } else {
        // random symmetric weights tightened to a metric by min-plus closure
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double w = scale * (0.2 + rng.next_unit());
                flat[static_cast<std::size_t>(i) * n + j] = w;
                flat[static_cast<std::size_t>(j) * n + i] = w;
            }
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double via = flat[static_cast<std::size_t>(i) * n + k] +
                                       flat[static_cast<std::size_t>(k) * n + j];
                    auto& v = flat[static_cast<std::size_t>(i) * n + j];
                    if (via < v) v = via;
                }
        for (int i = 0; i < n; ++i) flat[static_cast<std::size_t>(i) * n + i] = 0.0;
    }
    return FiniteMetricSpace::from_flat(n, std::move(flat));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Criterion 1: gold-foils volumes j(pi - pi/j^2) within 2% at h = 0.02
// ---------------------------------------------------------------------------
inline Report gold_foils_volume(std::uint64_t seed) {
    Report rep;
    rep.scenario = "gold-foils-volume";
    rep.seed = seed;
    SamplePlan plan;
    plan.h = 0.02;
    plan.seed = seed;
    for (int j : {2, 3, 4}) {
        const auto t0 = std::chrono::steady_clock::now();
        auto s = sample_domain(gold_foils_spec(j), plan);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const double expected = j * (kPi - kPi / (j * j));
        const bool ok = detail::within_rel(s->area_estimate, expected, 0.02) && secs < 60.0;
        rep.step("area_j" + std::to_string(j),
                 {{"n", s->size()},
                  {"area", s->area_estimate},
                  {"expected", expected},
                  {"rel_error", std::fabs(s->area_estimate - expected) / expected},
                  {"seconds", secs}},
                 ok);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Criterion 2: gold-foils inner regions pack >= 2j at separation 0.4 and the
// sequence diverges
// ---------------------------------------------------------------------------
inline Report gold_foils_divergence(std::uint64_t seed) {
    Report rep;
    rep.scenario = "gold-foils-divergence";
    rep.seed = seed;
    SamplePlan plan;
    plan.h = 0.05;
    plan.seed = seed;
    const std::vector<double> grid{0.3, 0.4, 0.6, 0.9, 1.35, 2.0};
    std::vector<std::vector<int>> counts;
    for (int j : {4, 8, 16}) {
        auto s = sample_domain(gold_foils_spec(j), plan);
        auto inner = inner_region(s, 0.2, false);
        auto row = detail::packing_counts_graph(s->graph, inner.indices, grid);
        const int at04 = row[1];
        rep.step("packing_j" + std::to_string(j),
                 {{"inner_points", inner.size()}, {"count_at_0.4", at04}, {"required", 2 * j}},
                 at04 >= 2 * j);
        counts.push_back(std::move(row));
    }
    const auto diag = diagnose_packing_counts(counts, grid);
    rep.step("sequence_verdict",
             {{"verdict", to_string(diag.verdict)}, {"witness_eps", diag.witness_eps}},
             diag.verdict == SequenceVerdict::divergent);
    return rep;
}

// ---------------------------------------------------------------------------
// Criterion 3: many-splines packing and verdicts
// ---------------------------------------------------------------------------
inline Report many_splines_packing(std::uint64_t seed) {
    Report rep;
    rep.scenario = "many-splines-packing";
    rep.seed = seed;
    SamplePlan plan;
    plan.h = 0.04;
    plan.seed = seed;
    const double sep = 2.0 * 0.95;
    {
        const std::vector<double> grid{1.0, 1.4, sep, 2.4, 3.0};
        std::vector<std::vector<int>> counts;
        for (int j : {4, 8, 16}) {
            auto s = sample_domain(many_splines_spec(j), plan);
            std::vector<int> all(s->size());
            for (int i = 0; i < s->size(); ++i) all[i] = i;
            auto row = detail::packing_counts_graph(s->graph, all, grid);
            rep.step("full_packing_j" + std::to_string(j),
                     {{"n", s->size()}, {"count_at_1.9", row[2]}, {"required", j}},
                     row[2] >= j);
            counts.push_back(std::move(row));
        }
        const auto diag = diagnose_packing_counts(counts, grid);
        rep.step("full_sequence_verdict",
                 {{"verdict", to_string(diag.verdict)}, {"witness_eps", diag.witness_eps}},
                 diag.verdict == SequenceVerdict::divergent);
    }
    {
        const std::vector<double> grid{0.25, 0.4, 0.7, 1.0, 1.5, 1.9};
        std::vector<std::vector<int>> counts;
        for (int j : {16, 32, 64}) {
            auto s = sample_domain(many_splines_spec(j), plan);
            auto inner = inner_region(s, 0.3, false);
            counts.push_back(detail::packing_counts_graph(s->graph, inner.indices, grid));
            rep.step("inner_points_j" + std::to_string(j), {{"inner_points", inner.size()}},
                     inner.size() > 0);
        }
        const auto diag = diagnose_packing_counts(counts, grid);
        rep.step("inner_sequence_verdict",
                 {{"verdict", to_string(diag.verdict)}},
                 diag.verdict == SequenceVerdict::uniformly_totally_bounded);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Criterion 4: inner regions of the splined annuli converge to the annulus
// reference; the GH upper bound tightens as j grows
// ---------------------------------------------------------------------------
inline Report many_splines_inner_limit(std::uint64_t seed) {
    Report rep;
    rep.scenario = "many-splines-inner-limit";
    rep.seed = seed;
    SamplePlan plan;
    plan.h = 0.02;
    plan.seed = seed;
    const double delta = 0.3;
    const auto ann = ann_reference(delta, plan);
    rep.step("ann_reference", {{"n", static_cast<int>(ann.indices.size())}}, true);
    auto bound_for = [&](int j) {
        auto s = sample_domain(many_splines_spec(j), plan);
        auto inner = inner_region(s, delta, false);
        const auto restricted = inner.restricted();
        auto [upper, corr] = gh_upper_bound(*restricted, *ann.space, 2);
        (void)corr;
        return std::make_pair(upper, inner.size());
    };
    const auto [b64, n64] = bound_for(64);
    rep.step("gh_upper_j64", {{"inner_points", n64}, {"bound", b64}, {"limit", 0.1}},
             b64 <= 0.1);
    const auto [b16, n16] = bound_for(16);
    rep.step("gh_upper_j16", {{"inner_points", n16}, {"bound", b16}}, true);
    rep.step("bound_monotone", {{"bound_j64", b64}, {"bound_j16", b16}}, b64 <= b16);
    return rep;
}

// ---------------------------------------------------------------------------
// Criterion 5: restricted vs intrinsic distance in Ann(1, 5)
// ---------------------------------------------------------------------------
inline Report restricted_vs_intrinsic(std::uint64_t seed) {
    Report rep;
    rep.scenario = "restricted-vs-intrinsic";
    rep.seed = seed;
    SamplePlan plan;
    plan.h = 0.04;
    plan.connect_factor = 3.2;  // finer stencil halves the graph-metric stretch
    plan.seed = seed;
    auto s = sample_domain(annulus_spec(1.0, 5.0), plan);
    const double r = std::sqrt(10.0);
    const std::array<double, 2> p{std::atan2(1.0, 3.0), r};
    const std::array<double, 2> q{std::atan2(1.0, -3.0), r};
    const auto [d_m, d_i] = restricted_vs_intrinsic_probe(s, 1.0, p, q);
    rep.step("restricted", {{"d", d_m}, {"expected", 6.0}},
             detail::within_rel(d_m, 6.0, 0.03));
    rep.step("intrinsic", {{"d", d_i}, {"floor", 6.32 * 0.97}},
             d_i >= 6.32 * 0.97 && d_i >= d_m - 1e-9);
    return rep;
}

// ---------------------------------------------------------------------------
// Criterion 6: GH oracle sandwich on random tiny spaces
// ---------------------------------------------------------------------------
inline Report gh_oracle_sandwich(std::uint64_t seed) {
    Report rep;
    rep.scenario = "gh-oracle-sandwich";
    rep.seed = seed;
    Rng rng(hash_combine(seed, 0x5a5a5a5aULL));
    int failures = 0;
    double worst_gap = 0.0;
    const int cases = 200;
    for (int c = 0; c < cases; ++c) {
        const auto X = detail::random_small_space(rng);
        const auto Y = detail::random_small_space(rng);
        const double lo = gh_lower_bound(X, Y);
        const double ex = gh_exact_small(X, Y);
        const double up = gh_upper_bound(X, Y).first;
        if (!(lo <= ex + 1e-9 && ex <= up + 1e-9)) ++failures;
        worst_gap = std::max(worst_gap, up - lo);
    }
    rep.step("sandwich", {{"cases", cases}, {"failures", failures}, {"worst_gap", worst_gap}},
             failures == 0);
    const auto X2 = FiniteMetricSpace::from_upper(2, {1.0});
    const auto Y2 = FiniteMetricSpace::from_upper(2, {2.0});
    const double ex = gh_exact_small(X2, Y2);
    rep.step("exact_0_1_vs_0_2", {{"exact", ex}}, ex == 0.5);
    return rep;
}

// ---------------------------------------------------------------------------
// Criterion 7: chain-counting bound on the unit disk
// ---------------------------------------------------------------------------
inline Report chain_counting(std::uint64_t seed) {
    Report rep;
    rep.scenario = "chain-counting";
    rep.seed = seed;
    SamplePlan plan;
    plan.h = 0.03;
    plan.seed = seed;
    auto disk = sample_domain(unit_disk_spec(1.0), plan);
    auto inner = inner_region(disk, 0.2, true);
    const double d_delta = inner.intrinsic_diameter();
    GraphRestrictedOracle oracle(disk->graph, inner.indices);
    const auto cover = covering_from_packing_oracle(oracle, 0.09);
    ChainCountingParams params{2, 0.2, 0.09, d_delta, kPi * 1.01, kPi};
    const auto bound = chain_counting_bound(params);
    rep.step("measured_vs_bound",
             {{"inner_points", inner.size()},
              {"intrinsic_diameter", d_delta},
              {"covering_count", cover.count},
              {"cover_verified", cover.verified},
              {"bound_log2", bound.log2_value}},
             cover.verified && std::log2(static_cast<double>(cover.count)) < bound.log2_value);
    // monotonicity: nondecreasing in V and D, nonincreasing in theta and eps
    auto log2_of = [&](double dd, double eps, double v, double theta) {
        ChainCountingParams p{2, 0.2, eps, dd, v, theta};
        return chain_counting_bound(p).log2_value;
    };
    const double base = log2_of(d_delta, 0.09, kPi, kPi);
    const bool mono = log2_of(d_delta, 0.09, 2 * kPi, kPi) >= base &&
                      log2_of(d_delta * 1.5, 0.09, kPi, kPi) >= base &&
                      log2_of(d_delta, 0.09, kPi, 2 * kPi) <= base &&
                      log2_of(d_delta, 0.095, kPi, kPi) <= base;
    rep.step("monotonicity", {{"base_log2", base}}, mono);
    return rep;
}

// ---------------------------------------------------------------------------
// Criterion 8: glued limit of the annulus-reference tower
// ---------------------------------------------------------------------------
inline Report glued_annulus_tower(std::uint64_t seed) {
    Report rep;
    rep.scenario = "glued-annulus-tower";
    rep.seed = seed;
    SamplePlan plan;
    plan.h = 0.07;
    plan.seed = seed;
    const std::vector<double> deltas{0.4, 0.2, 0.1, 0.05};
    const double tol = 2.0 * plan.h;
    Tower tower = annulus_tower(deltas, plan, tol);
    const auto tower_rep = validate_tower(tower);
    rep.step("tower_valid",
             {{"levels", tower.depth()}, {"worst_distortion", tower_rep.worst_distortion}},
             tower_rep.ok && tower_rep.worst_distortion <= tol);
    GluedSpace glued = build_glued(tower);
    const auto metric_rep = validate_metric(*glued.space, 3.0 * tol);
    rep.step("glued_metric_valid", {{"n", glued.size()}, {"ok", metric_rep.ok}}, metric_rep.ok);
    double worst_f = 0.0;
    bool nesting = true;
    for (int level = 0; level < tower.depth(); ++level) {
        try {
            worst_f = std::max(worst_f, embed_stratum(glued, tower, level).max_distortion);
        } catch (const Error&) {
            nesting = false;
        }
    }
    rep.step("f_maps", {{"worst_distortion", worst_f}, {"nesting", nesting}},
             nesting && worst_f <= tol);
    // finite-depth collapse: glued is isometric to the deepest level
    const int last = tower.depth() - 1;
    std::vector<int> to_last(glued.size());
    for (int gidx = 0; gidx < glued.size(); ++gidx) to_last[gidx] = glued.forward[last][gidx];
    const auto collapse = is_isometric_embedding(*glued.space, *tower.spaces[last], to_last, 0.0);
    rep.step("finite_depth_collapse",
             {{"distortion", collapse.max_distortion}, {"injective", collapse.injective}},
             collapse.injective && collapse.max_distortion == 0.0 &&
                 glued.size() == tower.spaces[last]->size());
    const auto ref = ann_reference(deltas.back(), plan);
    const double upper = gh_upper_bound(*glued.space, *ref.space, 2).first;
    rep.step("matches_annulus_reference", {{"gh_upper", upper}}, upper <= 0.1);
    return rep;
}

// ---------------------------------------------------------------------------
// Criterion 9: ball pathology in the book tower
// ---------------------------------------------------------------------------
inline Report book_ball_pathology(std::uint64_t seed) {
    Report rep;
    rep.scenario = "book-ball-pathology";
    rep.seed = seed;
    const std::vector<double> heights{1.0, 0.5, 0.25, 0.125};
    const std::vector<Frac> deltas{Frac::of(2, 5), Frac::of(1, 5), Frac::of(1, 10),
                                   Frac::of(1, 20)};
    auto bundle = book_tower(heights, deltas, 40);
    rep.step("thin_page_dead_at_level1",
             {{"alive", io::Json(bundle.page_alive[1])}},
             bundle.page_alive[1] == std::vector<bool>{true, true, true, false});
    GluedSpace glued = build_glued(bundle.tower);

    const int origin_parent = bundle.parent->find(0, 0, 0);
    const auto& level0 = bundle.level_points[0];
    const auto it = std::lower_bound(level0.begin(), level0.end(), origin_parent);
    const bool origin_in_level0 = it != level0.end() && *it == origin_parent;
    rep.step("spine_origin_at_level0", {{"parent_index", origin_parent}}, origin_in_level0);
    const int origin_pos = static_cast<int>(it - level0.begin());

    const double eps = 0.1;
    const auto ball = glued_ball(glued, 0, origin_pos, eps, 1);
    const int center = glued.f_maps[0][origin_pos];
    const auto ambient = closed_ball(*glued.space, center, eps);

    // page of a glued point, through its home level's parent indices
    auto page_of = [&](int gidx) {
        const int parent_idx = bundle.level_points[glued.stratum[gidx]][glued.home_index[gidx]];
        return bundle.parent->pts[parent_idx][0];
    };
    std::set<int> ball_set(ball.begin(), ball.end());
    bool exact_set = true;
    int thin_in_ambient = 0;
    for (int gidx : ambient) {
        const bool in_level1_image = glued.stratum[gidx] <= 1;
        if (in_level1_image != (ball_set.count(gidx) > 0)) exact_set = false;
        if (page_of(gidx) == 3) {
            ++thin_in_ambient;
            if (ball_set.count(gidx)) exact_set = false;  // thin page must be excluded
        }
    }
    for (int gidx : ball)
        if (page_of(gidx) == 3) exact_set = false;
    rep.step("glued_ball_excludes_thin_pages",
             {{"ball_points", static_cast<int>(ball.size())},
              {"ambient_points", static_cast<int>(ambient.size())},
              {"thin_page_points_in_ambient", thin_in_ambient},
              {"exact_set", exact_set}},
             exact_set && thin_in_ambient > 0 &&
                 ball.size() < ambient.size());
    return rep;
}

// ---------------------------------------------------------------------------
// Criterion 10: nonuniqueness proxy via ball-growth exponents
// ---------------------------------------------------------------------------
inline Report glued_nonuniqueness(std::uint64_t seed) {
    Report rep;
    rep.scenario = "glued-nonuniqueness";
    rep.seed = seed;
    const std::vector<double> r_grid{0.18, 0.22, 0.27, 0.33};
    auto exponent_for = [&](bool shifting) {
        // pitch 1/48 keeps integer-lattice steps from flattening the ball
        // counts inside the fit window
        auto bundle = page_doubling_tower(4, shifting, 48);
        GluedSpace glued = build_glued(bundle.tower);
        // tracked point: x = 5/12 on the level-0 interval page
        const int parent_idx =
            bundle.parent->find(0, static_cast<int>(bundle.parent->pitch_den * 5 / 12), 0);
        const auto& level0 = bundle.level_points[0];
        const auto it = std::lower_bound(level0.begin(), level0.end(), parent_idx);
        if (it == level0.end() || *it != parent_idx)
            fail("InvalidTower", "tracked point missing from level 0");
        const int tracked = glued.f_maps[0][static_cast<int>(it - level0.begin())];
        return ball_growth_exponent(*glued.space, tracked, r_grid);
    };
    const double e_incl = exponent_for(false);
    const double e_shift = exponent_for(true);
    rep.step("inclusion_exponent", {{"exponent", e_incl}, {"floor", 1.7}}, e_incl >= 1.7);
    rep.step("shifting_exponent", {{"exponent", e_shift}, {"cap", 1.3}}, e_shift <= 1.3);
    return rep;
}

// ---------------------------------------------------------------------------
// Criterion 11: the inner-union estimate recovers the closed disk, not the
// disk-with-segment GH limit
// ---------------------------------------------------------------------------
inline Report inner_union_vs_gh_limit(std::uint64_t seed) {
    Report rep;
    rep.scenario = "inner-union-vs-gh-limit";
    rep.seed = seed;
    SamplePlan plan;
    plan.h = 0.025;
    plan.seed = seed;
    const double tol = 2.0 * plan.h;
    auto X = disk_with_segment(1.0, plan);
    const auto Xspace = X->metric();

    const std::vector<double> delta_grid{0.3, 0.15, 0.075, 0.0375};
    std::vector<int> js;
    for (int j = 4; j <= 16; ++j) js.push_back(j);

    // image of M_j^delta inside X by coordinate snapping; the snap targets are
    // computed once per j and shared across the delta grid
    std::vector<std::vector<std::vector<int>>> subsets(delta_grid.size());
    for (int j : js) {
        auto M = sample_domain(spline_disk_spec(1.0 / j, 1.0), plan);
        std::vector<double> snapped_bd(X->size(), -1.0);
        for (int x = 0; x < X->size(); ++x) {
            const int near = M->nearest_sample(X->coords[x]);
            const double snap = std::hypot(M->coords[near][0] - X->coords[x][0],
                                           M->coords[near][1] - X->coords[x][1]);
            if (snap <= 0.75 * plan.h) snapped_bd[x] = M->boundary_dist[near];
        }
        for (std::size_t di = 0; di < delta_grid.size(); ++di) {
            std::vector<int> image;
            for (int x = 0; x < X->size(); ++x)
                if (snapped_bd[x] > delta_grid[di]) image.push_back(x);
            subsets[di].push_back(std::move(image));
        }
    }
    const auto estimate = inner_union_estimate(*Xspace, subsets, tol);
    rep.step("estimate", {{"points", static_cast<int>(estimate.size())}, {"ambient", X->size()}},
             !estimate.empty());

    const auto W = restrict_space(Xspace, estimate).materialize();
    auto disk_ref = sample_domain(unit_disk_spec(1.0), plan);
    const double upper = gh_upper_bound(W, *disk_ref->metric(), 2).first;
    rep.step("matches_closed_disk", {{"gh_upper", upper}, {"limit", 0.08}}, upper <= 0.08);
    const double lower = gh_lower_bound(W, *Xspace);
    rep.step("separated_from_gh_limit", {{"gh_lower", lower}, {"floor", 0.2}}, lower >= 0.2);
    return rep;
}

// ---------------------------------------------------------------------------
// Criterion 12: quantitative lemma property suites
// ---------------------------------------------------------------------------
inline Report lemma_suites(std::uint64_t seed) {
    Report rep;
    rep.scenario = "lemma-suites";
    rep.seed = seed;

    // Hausdorff ball containment lemma on random finite configurations
    {
        Rng rng(hash_combine(seed, 1));
        int cases = 0, failures = 0;
        while (cases < 120) {
            const int n = 6 + static_cast<int>(rng.below(30));
            std::vector<double> flat(static_cast<std::size_t>(n) * n, 0.0);
            std::vector<std::array<double, 2>> pts(n);
            for (auto& p : pts) p = {3 * rng.next_unit(), 3 * rng.next_unit()};
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    flat[static_cast<std::size_t>(i) * n + j] =
                        std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]);
            const auto Z = FiniteMetricSpace::from_flat(n, std::move(flat));
            std::vector<int> A, B;
            for (int i = 0; i < n; ++i) {
                if (rng.next_unit() < 0.5) A.push_back(i);
                if (rng.next_unit() < 0.5) B.push_back(i);
            }
            if (A.empty() || B.empty()) continue;
            ++cases;
            const double h = hausdorff_distance(Z, A, B);
            const int aj = A[rng.below(A.size())];
            const int ainf = B[rng.below(B.size())];
            const double delta = Z.d(aj, ainf);
            const double r = 2.5 * rng.next_unit();
            // ball(ainf, r) in B must sit inside T_{h+ulp}(ball(aj, r+delta+h) in A)
            std::vector<int> lhs, rhs;
            for (int x : B)
                if (Z.d(ainf, x) <= r) lhs.push_back(x);
            for (int x : A)
                if (Z.d(aj, x) <= r + delta + h) rhs.push_back(x);
            for (int x : lhs)
                if (set_distance(Z, x, rhs) > h * (1 + 1e-12) + 1e-12) ++failures;
        }
        rep.step("hausdorff_ball_containment", {{"cases", cases}, {"failures", failures}},
                 failures == 0);
    }

    // inner-region lemmas on sampled domains
    {
        SamplePlan plan;
        plan.h = 0.06;
        plan.seed = seed;
        auto disk = sample_domain(unit_disk_spec(1.0), plan);
        auto ann = sample_domain(annulus_spec(0.5, 1.5), plan);
        Rng rng(hash_combine(seed, 2));
        int cases = 0, failures = 0;
        SsspEngine disk_engine(disk->graph), ann_engine(ann->graph);
        while (cases < 100) {
            const bool use_disk = rng.next_unit() < 0.5;
            const auto& s = use_disk ? disk : ann;
            auto& engine = use_disk ? disk_engine : ann_engine;
            const double slack = s->plan.h + s->plan.bh();
            const double dlo = 0.05 + 0.2 * rng.next_unit();
            const double dhi = dlo + slack + 0.05 + 0.3 * rng.next_unit();
            const double eps = (dhi - dlo - slack) * rng.next_unit();
            auto outer = inner_region(s, dhi, false);
            if (outer.empty() || eps <= 0) continue;
            ++cases;
            const int y = outer.indices[rng.below(outer.indices.size())];
            const auto& dist = engine.run(y);
            for (int x = 0; x < s->size(); ++x)
                if (dist[x] <= eps && s->boundary_dist[x] <= dlo) ++failures;
        }
        rep.step("ball_in_inner_region", {{"cases", cases}, {"failures", failures}},
                 failures == 0);

        // exhaustion: decreasing deltas below the minimum boundary distance
        int exhaust_failures = 0;
        for (int c = 0; c < 100; ++c) {
            const auto& s = (c % 2 == 0) ? disk : ann;
            double min_bd = kInf;
            for (double b : s->boundary_dist) min_bd = std::min(min_bd, b);
            double d0 = 0.3 + 0.5 * Rng(hash_combine(seed, 100 + c)).next_unit();
            std::vector<char> seen(s->size(), 0);
            while (d0 > min_bd / 2) {
                for (int idx : inner_region(s, d0, false).indices) seen[idx] = 1;
                d0 /= 2;
            }
            for (int idx : inner_region(s, d0, false).indices) seen[idx] = 1;
            for (int i = 0; i < s->size(); ++i)
                if (!seen[i]) ++exhaust_failures;
        }
        rep.step("exhaustion", {{"failures", exhaust_failures}}, exhaust_failures == 0);
    }

    // packing/covering relation on random spaces
    {
        Rng rng(hash_combine(seed, 3));
        int cases = 0, failures = 0;
        while (cases < 120) {
            const int n = 5 + static_cast<int>(rng.below(40));
            std::vector<double> flat(static_cast<std::size_t>(n) * n, 0.0);
            std::vector<std::array<double, 2>> pts(n);
            for (auto& p : pts) p = {2 * rng.next_unit(), 2 * rng.next_unit()};
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    flat[static_cast<std::size_t>(i) * n + j] =
                        std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]);
            const auto X = FiniteMetricSpace::from_flat(n, std::move(flat));
            const double eps = 0.1 + 1.5 * rng.next_unit();
            ++cases;
            const auto cover = covering_from_packing(X, eps);
            const auto pack_half = greedy_packing(X, eps / 2.0);
            const auto pack_full = greedy_packing(X, eps);
            if (!cover.verified || cover.count > pack_half.count) ++failures;
            if (pack_full.count > pack_half.count) ++failures;  // counts nonincreasing in eps
        }
        rep.step("packing_covering", {{"cases", cases}, {"failures", failures}}, failures == 0);
    }
    return rep;
}

inline Report empty_scenario(std::uint64_t seed) {
    Report rep;
    rep.scenario = "empty";
    rep.seed = seed;
    return rep;
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

using ScenarioFn = std::function<Report(std::uint64_t)>;

inline const std::vector<std::pair<std::string, ScenarioFn>>& builtins() {
    static const std::vector<std::pair<std::string, ScenarioFn>> reg = {
        {"empty", empty_scenario},
        {"gold-foils-volume", gold_foils_volume},
        {"gold-foils-divergence", gold_foils_divergence},
        {"many-splines-packing", many_splines_packing},
        {"many-splines-inner-limit", many_splines_inner_limit},
        {"restricted-vs-intrinsic", restricted_vs_intrinsic},
        {"gh-oracle-sandwich", gh_oracle_sandwich},
        {"chain-counting", chain_counting},
        {"glued-annulus-tower", glued_annulus_tower},
        {"book-ball-pathology", book_ball_pathology},
        {"glued-nonuniqueness", glued_nonuniqueness},
        {"inner-union-vs-gh-limit", inner_union_vs_gh_limit},
        {"lemma-suites", lemma_suites},
    };
    return reg;
}

inline Report run_builtin(const std::string& name, std::uint64_t seed = 0) {
    for (const auto& [n, fn] : builtins())
        if (n == name) {
            const auto t0 = std::chrono::steady_clock::now();
            Report rep = fn(seed);
            rep.elapsed_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            return rep;
        }
    fail("ScenarioParse", "unknown builtin scenario " + name);
}

// ---------------------------------------------------------------------------
// File scenarios: a small declarative step language. Parameters are validated
// against each operation's preconditions before any step runs.
// ---------------------------------------------------------------------------

namespace detail {

inline FamilySpec family_from_json(const io::Json& p, std::uint64_t seed) {
    FamilySpec f;
    f.family = p.at("family").get<std::string>();
    if (p.contains("j")) f.j = p.at("j").get<int>();
    if (p.contains("parity")) f.parity = p.at("parity").get<int>();
    if (p.contains("depth")) f.depth = p.at("depth").get<int>();
    if (p.contains("w")) f.w = p.at("w").get<double>();
    if (p.contains("length")) f.length = p.at("length").get<double>();
    if (p.contains("eps_hat")) f.eps_hat = p.at("eps_hat").get<double>();
    if (p.contains("r1")) f.r1 = p.at("r1").get<double>();
    if (p.contains("r2")) f.r2 = p.at("r2").get<double>();
    if (p.contains("delta")) f.delta = p.at("delta").get<double>();
    if (p.contains("pitch")) f.pitch = p.at("pitch").get<double>();
    if (p.contains("heights")) f.heights = p.at("heights").get<std::vector<double>>();
    if (p.contains("box")) f.box = p.at("box").get<std::vector<double>>();
    if (p.contains("h")) f.plan.h = p.at("h").get<double>();
    if (p.contains("connect_factor")) f.plan.connect_factor = p.at("connect_factor").get<double>();
    if (p.contains("boundary_h")) f.plan.boundary_h = p.at("boundary_h").get<double>();
    f.plan.seed = p.contains("seed") ? p.at("seed").get<std::uint64_t>() : seed;
    return f;
}

inline bool check_expect(const io::Json& expect, const io::Json& values, std::string& why) {
    const std::string field = expect.at("field").get<std::string>();
    if (!values.contains(field)) {
        why = "missing field " + field;
        return false;
    }
    const std::string op = expect.at("op").get<std::string>();
    if (op == "eq_str")
        return values.at(field).get<std::string>() == expect.at("value").get<std::string>();
    const double actual = values.at(field).get<double>();
    if (op == "le") return actual <= expect.at("value").get<double>();
    if (op == "ge") return actual >= expect.at("value").get<double>();
    if (op == "approx") {
        const double target = expect.at("value").get<double>();
        const double rel = expect.contains("rel") ? expect.at("rel").get<double>() : 0.01;
        return std::fabs(actual - target) <= rel * std::fabs(target);
    }
    why = "unknown expectation op " + op;
    return false;
}

}  // namespace detail

inline Report run_scenario_doc(const io::Json& doc) {
    static const std::set<std::string> known_ops{"generate", "inner_region", "packing",
                                                 "gh_pair", "sequence", "probe"};
    Report rep;
    rep.scenario = doc.contains("name") ? doc.at("name").get<std::string>() : "scenario";
    rep.seed = doc.contains("seed") ? doc.at("seed").get<std::uint64_t>() : 0;
    if (!doc.contains("steps") || !doc.at("steps").is_array())
        fail("ScenarioParse", "scenario needs a steps array");

    // precondition pass before any execution
    int idx = 0;
    for (const auto& s : doc.at("steps")) {
        if (!s.contains("op") || !known_ops.count(s.at("op").get<std::string>()))
            fail("ScenarioParse", "step " + std::to_string(idx) + ": unknown op");
        const std::string op = s.at("op").get<std::string>();
        if (op != "gh_pair" && op != "sequence" && !s.contains("family"))
            fail("ScenarioParse", "step " + std::to_string(idx) + ": missing family");
        if (op == "inner_region" && (!s.contains("delta") || s.at("delta").get<double>() < 0))
            fail("ScenarioParse", "step " + std::to_string(idx) + ": inner_region needs delta >= 0");
        if (op == "packing" && (!s.contains("epsilon") || s.at("epsilon").get<double>() <= 0))
            fail("ScenarioParse", "step " + std::to_string(idx) + ": packing needs epsilon > 0");
        if (op == "gh_pair" && (!s.contains("a") || !s.contains("b")))
            fail("ScenarioParse", "step " + std::to_string(idx) + ": gh_pair needs a and b");
        if (op == "sequence" && (!s.contains("families") || !s.contains("epsilon_grid")))
            fail("ScenarioParse",
                 "step " + std::to_string(idx) + ": sequence needs families and epsilon_grid");
        if (op == "probe" && (!s.contains("p") || !s.contains("q") || !s.contains("delta")))
            fail("ScenarioParse", "step " + std::to_string(idx) + ": probe needs p, q, delta");
        ++idx;
    }

    const auto t0 = std::chrono::steady_clock::now();
    idx = 0;
    for (const auto& s : doc.at("steps")) {
        const std::string op = s.at("op").get<std::string>();
        io::Json values;
        try {
            if (op == "generate") {
                const auto g = generate(detail::family_from_json(s, rep.seed));
                if (g.kind == "sampled") {
                    values["n"] = g.sampled->size();
                    values["area"] = g.sampled->area_estimate;
                    values["components"] = g.sampled->interior_components;
                } else {
                    values["n"] = g.exact->size();
                    values["diameter"] = diameter(*g.exact);
                }
            } else if (op == "inner_region") {
                const auto g = generate(detail::family_from_json(s, rep.seed));
                if (g.kind != "sampled")
                    fail("ScenarioParse", "inner_region needs a sampled family");
                const bool want = s.contains("intrinsic") && s.at("intrinsic").get<bool>();
                auto inner = inner_region(g.sampled, s.at("delta").get<double>(), want);
                values["retained"] = inner.size();
                values["components"] = inner.components;
                if (want) {
                    const double idiam = inner.intrinsic_diameter();
                    values["intrinsic_diameter"] = std::isinf(idiam) ? -1.0 : idiam;
                    values["intrinsic_disconnected"] = std::isinf(idiam);
                }
            } else if (op == "packing") {
                const auto g = generate(detail::family_from_json(s, rep.seed));
                const double eps = s.at("epsilon").get<double>();
                if (g.kind == "sampled") {
                    std::vector<int> pts;
                    if (s.contains("delta"))
                        pts = inner_region(g.sampled, s.at("delta").get<double>(), false).indices;
                    else
                        for (int i = 0; i < g.sampled->size(); ++i) pts.push_back(i);
                    GraphRestrictedOracle o(g.sampled->graph, pts);
                    values["count"] = greedy_packing_oracle(o, eps).count;
                } else {
                    values["count"] = greedy_packing(*g.exact, eps).count;
                }
            } else if (op == "gh_pair") {
                const auto a = generate(detail::family_from_json(s.at("a"), rep.seed));
                const auto b = generate(detail::family_from_json(s.at("b"), rep.seed));
                auto space_of = [](const Generated& g) {
                    return g.kind == "sampled" ? g.sampled->metric() : g.exact;
                };
                const auto sa = space_of(a), sb = space_of(b);
                values["lower"] = gh_lower_bound(*sa, *sb);
                values["upper"] = gh_upper_bound(*sa, *sb).first;
                if (sa->size() <= 5 && sb->size() <= 5)
                    values["exact"] = gh_exact_small(*sa, *sb);
            } else if (op == "sequence") {
                const auto grid = s.at("epsilon_grid").get<std::vector<double>>();
                std::vector<std::vector<int>> counts;
                for (const auto& fj : s.at("families")) {
                    const auto g = generate(detail::family_from_json(fj, rep.seed));
                    if (g.kind != "sampled") fail("ScenarioParse", "sequence needs sampled families");
                    std::vector<int> pts;
                    if (fj.contains("delta"))
                        pts = inner_region(g.sampled, fj.at("delta").get<double>(), false).indices;
                    else
                        for (int i = 0; i < g.sampled->size(); ++i) pts.push_back(i);
                    counts.push_back(detail::packing_counts_graph(g.sampled->graph, pts, grid));
                }
                const auto diag = diagnose_packing_counts(counts, grid);
                values["verdict"] = to_string(diag.verdict);
                values["witness_eps"] = diag.witness_eps;
            } else if (op == "probe") {
                const auto g = generate(detail::family_from_json(s, rep.seed));
                if (g.kind != "sampled") fail("ScenarioParse", "probe needs a sampled family");
                const auto pj = s.at("p").get<std::vector<double>>();
                const auto qj = s.at("q").get<std::vector<double>>();
                const auto [dm, di] = restricted_vs_intrinsic_probe(
                    g.sampled, s.at("delta").get<double>(), {pj[0], pj[1]}, {qj[0], qj[1]});
                values["restricted"] = dm;
                values["intrinsic"] = di;
            }
        } catch (const Error& e) {
            fail("StepFailure", "step " + std::to_string(idx) + ": " + e.what());
        }
        bool ok = true;
        if (s.contains("expect")) {
            for (const auto& ex : s.at("expect")) {
                std::string why;
                if (!detail::check_expect(ex, values, why)) ok = false;
            }
        }
        rep.step(op + "#" + std::to_string(idx), values, ok);
        ++idx;
    }
    rep.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace innerlim::scenarios
