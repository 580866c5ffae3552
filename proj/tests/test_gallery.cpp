#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <vector>

#include "innerlim/gallery.hpp"
#include "innerlim/gh.hpp"
#include "innerlim/graph.hpp"
#include "innerlim/sampler.hpp"

using namespace innerlim;

TEST_CASE("many-splines area matches the analytic integral") {
    // area(M_j) = integral ((3+cos(j t))^2 - 1)/2 dt = 8.5*pi for any j
    SamplePlan plan;
    plan.h = 0.04;
    auto s = sample_domain(many_splines_spec(4), plan);
    const double expected = 8.5 * kPi;
    REQUIRE(std::fabs(s->area_estimate - expected) <= 0.02 * expected);
}

TEST_CASE("gold-foils area matches j(pi - pi/j^2)") {
    SamplePlan plan;
    plan.h = 0.03;
    auto s = sample_domain(gold_foils_spec(3), plan);
    const double expected = 3 * (kPi - kPi / 9.0);
    REQUIRE(std::fabs(s->area_estimate - expected) <= 0.02 * expected);
}

TEST_CASE("book space: exact metric") {
    auto book = make_book({1.0, 0.5, 0.25}, 16);
    SECTION("closed form is a metric at tolerance zero") {
        REQUIRE(validate_metric(*book->space(), 0.0).ok);
    }
    SECTION("book_distance examples") {
        REQUIRE(book_distance({1.0, 1.0}, 0, 0.25, 0.5, 0, 0.25, 0.5) == 0.0);
        REQUIRE(book_distance({1.0, 1.0}, 0, 1.0, 0.0, 1, 1.0, 0.0) == 2.0);
        REQUIRE(std::fabs(book_distance({1.0, 0.5}, 0, 0.5, 0.9, 1, 0.5, 0.4) - 1.5) < 1e-12);
        REQUIRE_THROWS_AS(book_distance({1.0, 0.5}, 1, 0.5, 0.9, 0, 0.5, 0.4), Error);
    }
    SECTION("closed form agrees with the glued 4-neighbor lattice graph") {
        // oracle: the book's 1-skeleton realizes the taxi metric exactly;
        // linking left/down lets x = 1 columns reach the shared spine through
        // the canonical spine points
        std::vector<WeightedGraph::Edge> edges;
        const double g = 1.0 / book->pitch_den;
        for (int i = 0; i < book->size(); ++i) {
            const auto& p = book->pts[i];
            if (p[1] > 0) {
                const int q = book->find(p[0], p[1] - 1, p[2]);
                if (q >= 0) edges.push_back({q, i, g});
            }
            const int q = book->find(p[0], p[1], p[2] - 1);
            if (q >= 0) edges.push_back({q, i, g});
        }
        const WeightedGraph graph = WeightedGraph::from_edges(book->size(), edges);
        SsspEngine engine(graph);
        for (int src = 0; src < book->size(); src += 37) {
            const auto& dist = engine.run(src);
            for (int t = 0; t < book->size(); t += 11)
                REQUIRE(std::fabs(dist[t] - book->distance(src, t)) < 1e-9);
        }
    }
}

TEST_CASE("book inner regions: trim rule") {
    auto book = make_book({1.0, 0.5, 0.25}, 16);
    std::vector<bool> alive;
    const auto idx = book->inner_indices(Frac::of(5, 16), &alive);
    REQUIRE(alive == std::vector<bool>{true, true, false});
    for (int i : idx) {
        const int page = book->pts[i][0];
        if (book->pts[i][1] > 0) {
            REQUIRE(page != 2);
            REQUIRE(book->py(i) <= (page == 0 ? 11.0 / 16 : 3.0 / 16) + 1e-12);
        }
    }
    // scales off the grid are rejected rather than silently rounded
    REQUIRE_THROWS_AS(book->inner_indices(Frac::of(3, 10)), Error);
}

TEST_CASE("lattice skeleton") {
    SECTION("unit square at pitch 0.5") {
        const auto lat = lattice_skeleton({1.0, 1.0}, 0.5);
        REQUIRE(lat.space->size() == 9);
        int corner00 = -1, corner11 = -1;
        for (int i = 0; i < 9; ++i) {
            if (lat.grid[i] == std::vector<int>{0, 0}) corner00 = i;
            if (lat.grid[i] == std::vector<int>{2, 2}) corner11 = i;
        }
        REQUIRE(lat.space->d(corner00, corner11) == 2.0);
    }
    SECTION("every box point is within pitch/2 of a lattice point (taxi: pitch)") {
        const double pitch = 0.25;
        const auto lat = lattice_skeleton({1.0, 1.0}, pitch);
        for (double x = 0.0; x <= 1.0; x += 0.05)
            for (double y = 0.0; y <= 1.0; y += 0.05) {
                double best = kInf;
                for (const auto& gpt : lat.grid)
                    best = std::min(best, std::fabs(gpt[0] * pitch - x) +
                                               std::fabs(gpt[1] * pitch - y));
                REQUIRE(best <= pitch + 1e-12);
            }
    }
    SECTION("coarse lattice is GH-close to the dense lattice of the same box") {
        const auto coarse = lattice_skeleton({1.0, 1.0}, 0.5);
        const auto dense = lattice_skeleton({1.0, 1.0}, 0.25);
        REQUIRE(gh_upper_bound(*coarse.space, *dense.space, 12).first <= 0.5);
    }
    SECTION("boundary faces flagged") {
        const auto lat = lattice_skeleton({1.0, 1.0}, 0.5, {{1, 1}});  // top edge
        int flagged = 0;
        for (int i = 0; i < lat.space->size(); ++i)
            if (lat.boundary_flag[i]) {
                ++flagged;
                REQUIRE(lat.grid[i][1] == 2);
            }
        REQUIRE(flagged == 3);
    }
    SECTION("invalid pitch") {
        REQUIRE_THROWS_AS(lattice_skeleton({1.0}, 0.3), Error);
    }
}

TEST_CASE("spline tips of the splined annulus are pairwise separated") {
    SamplePlan plan;
    plan.h = 0.05;
    const int j = 16;
    auto s = sample_domain(many_splines_spec(j), plan);
    std::vector<int> tips;
    for (int k = 0; k < j; ++k) {
        double theta = 2 * kPi * (k + 0.5) / j * 0 + 2 * kPi * k / j;
        if (theta == 0.0) theta = 2 * kPi;  // chart is (0, 2*pi]
        tips.push_back(s->nearest_sample({theta, 3.0}));
    }
    SsspEngine engine(s->graph);
    for (std::size_t a = 0; a < tips.size(); ++a) {
        const auto& dist = engine.run(tips[a]);
        for (std::size_t b = a + 1; b < tips.size(); ++b)
            REQUIRE(dist[tips[b]] >= 2.0 * 0.95);
    }
}

TEST_CASE("the U-shaped glued-limit witness is not a length space") {
    SamplePlan plan;
    plan.h = 0.04;
    auto s = sample_domain(u_region_spec(), plan);
    REQUIRE(s->interior_components == 1);
    const int p = s->nearest_sample({-0.75, 0.95});
    const int q = s->nearest_sample({0.75, 0.95});
    SsspEngine engine(s->graph);
    const double d = engine.run(p)[q];
    REQUIRE(std::isfinite(d));
    // any path must descend below y = 0 and climb back: length >= 1.5 + 1
    REQUIRE(d >= 2.5 - 4 * plan.h);
    const double euclid = std::hypot(s->coords[p][0] - s->coords[q][0],
                                     s->coords[p][1] - s->coords[q][1]);
    REQUIRE(d > euclid + 0.5);
}

TEST_CASE("no-diag family alternates spline widths") {
    const auto even = no_diag_spec(4, 0.2);
    const auto odd = no_diag_spec(5, 0.2);
    const double we = even.triangles[0].p[1][1] - even.triangles[0].p[0][1];
    const double wo = odd.triangles[0].p[1][1] - odd.triangles[0].p[0][1];
    REQUIRE(std::fabs(we - 0.8) < 1e-12);
    REQUIRE(wo > we);
    REQUIRE(wo < 1.2);
    REQUIRE_THROWS_AS(no_diag_spec(2, 0.5), Error);
}

TEST_CASE("f-region: the holed lobe dies at moderate delta") {
    SamplePlan plan;
    plan.h = 0.04;
    auto even = sample_domain(f_region_spec(8, 0), plan);
    REQUIRE(even->interior_components == 1);
    auto reg = inner_region(even, 0.3, false);
    REQUIRE_FALSE(reg.empty());
    for (int idx : reg.indices) {
        const double x = even->coords[idx][0], y = even->coords[idx][1];
        const bool in_holed_lobe = x > 1.05 && y > 0.05 && y < 0.95;
        REQUIRE_FALSE(in_holed_lobe);
    }
    // the intact upper lobe survives
    bool upper_alive = false;
    for (int idx : reg.indices)
        if (even->coords[idx][0] > 1.5 && even->coords[idx][1] > 2.2) upper_alive = true;
    REQUIRE(upper_alive);
}

TEST_CASE("decreasing splines sample is a valid metric space") {
    SamplePlan plan;
    plan.h = 0.2;
    auto s = sample_domain(decreasing_splines_spec(8), plan);
    REQUIRE(s->size() > 0);
    REQUIRE(s->has_boundary);
    REQUIRE(s->area_estimate > 0.0);
    const auto X = s->metric();
    REQUIRE(validate_metric(*X, 1e-9 * diameter(*X)).ok);
}

TEST_CASE("square annuli stack") {
    SamplePlan plan;
    plan.h = 0.1;
    auto s = square_annuli_stack(1, plan);
    REQUIRE(s->interior_components == 1);
    // two 2x2 annuli with 1/2-size holes plus a sqrt(2)-slanted unit strip
    const double expected = 2 * (4.0 - 1.0) + std::sqrt(2.0);
    REQUIRE(std::fabs(s->area_estimate - expected) <= 0.05 * expected);
    const auto X = s->metric();
    REQUIRE(validate_metric(*X, 1e-9 * diameter(*X)).ok);
    // inner regions at delta above the strip half-width drop the strip
    auto reg = inner_region(s, 0.3, false);
    REQUIRE_FALSE(reg.empty());
}

TEST_CASE("annulus reference bands") {
    SamplePlan plan;
    plan.h = 0.06;
    const auto ref = ann_reference(0.3, plan);
    REQUIRE_FALSE(ref.indices.empty());
    for (int idx : ref.indices) {
        const double r = ref.master->coords[idx][1];
        REQUIRE(r >= 1.3);
        REQUIRE(r <= 1.7);
    }
    REQUIRE(ref.space->size() == static_cast<int>(ref.indices.size()));
}

TEST_CASE("disk with segment reference") {
    SamplePlan plan;
    plan.h = 0.06;
    auto X = disk_with_segment(1.0, plan);
    REQUIRE(X->interior_components == 1);
    const double diam = diameter(*X->metric());
    REQUIRE(std::fabs(diam - 3.0) <= 0.05 * 3.0);
}

TEST_CASE("family dispatch") {
    FamilySpec f;
    f.family = "taxi_box";
    f.box = {1.0, 1.0};
    f.pitch = 0.5;
    const auto g = generate(f);
    REQUIRE(g.kind == "lattice");
    REQUIRE(g.exact->size() == 9);

    FamilySpec bad;
    bad.family = "no-such-family";
    REQUIRE_THROWS_AS(generate(bad), Error);

    REQUIRE_THROWS_AS(make_book({1.0, 2.0}), Error);  // heights must decrease
}
