#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <vector>

#include "innerlim/metric_space.hpp"
#include "innerlim/rng.hpp"

using namespace innerlim;

namespace {

FiniteMetricSpace line_space(const std::vector<double>& xs) {
    const int n = static_cast<int>(xs.size());
    std::vector<double> flat(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            flat[static_cast<std::size_t>(i) * n + j] = std::fabs(xs[i] - xs[j]);
    return FiniteMetricSpace::from_flat(n, std::move(flat));
}

FiniteMetricSpace planar_space(const std::vector<std::array<double, 2>>& pts) {
    const int n = static_cast<int>(pts.size());
    std::vector<double> flat(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            flat[static_cast<std::size_t>(i) * n + j] =
                std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]);
    return FiniteMetricSpace::from_flat(n, std::move(flat));
}

// independent oracle: recheck every axiom triple directly
bool brute_metric_ok(const FiniteMetricSpace& X, double tol) {
    for (int i = 0; i < X.size(); ++i) {
        if (X.d(i, i) != 0.0) return false;
        for (int j = 0; j < X.size(); ++j) {
            if (!(X.d(i, j) >= 0.0) || X.d(i, j) != X.d(j, i)) return false;
            for (int k = 0; k < X.size(); ++k)
                if (X.d(i, k) > X.d(i, j) + X.d(j, k) + tol) return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("validate_metric basic outcomes") {
    SECTION("1x1 zero matrix passes") {
        const auto X = FiniteMetricSpace::from_flat(1, {0.0});
        REQUIRE(validate_metric(X, 0.0).ok);
    }
    SECTION("forced triangle failure reports the witness") {
        // d(a,b)=1, d(b,c)=1, d(a,c)=5 must fail since 5 > 2
        const auto X = FiniteMetricSpace::from_upper(3, {1.0, 5.0, 1.0});
        const auto rep = validate_metric(X, 0.0);
        REQUIRE_FALSE(rep.ok);
        REQUIRE(rep.issue == MetricIssue::triangle);
        const auto [i, j, k] = rep.witness;
        REQUIRE(X.d(i, k) > X.d(i, j) + X.d(j, k));
    }
    SECTION("random planar points satisfy the axioms at tol 0") {
        Rng rng(7);
        std::vector<std::array<double, 2>> pts;
        for (int i = 0; i < 10; ++i)
            pts.push_back({rng.next_unit(), rng.next_unit()});
        const auto X = planar_space(pts);
        REQUIRE(validate_metric(X, 0.0).ok);
        REQUIRE(brute_metric_ok(X, 0.0));
    }
    SECTION("error kinds") {
        const auto rows_bad = std::vector<std::vector<double>>{{0.0, 1.0}, {1.0}};
        REQUIRE_FALSE(validate_metric(rows_bad).ok);
        REQUIRE(validate_metric(rows_bad).issue == MetricIssue::non_square);
        const auto neg = FiniteMetricSpace::from_upper(2, {-1.0});
        REQUIRE(validate_metric(neg).issue == MetricIssue::negative_entry);
        const auto inf = FiniteMetricSpace::from_upper(2, {kInf});
        REQUIRE(validate_metric(inf).issue == MetricIssue::non_finite);
        const auto asym = FiniteMetricSpace::from_flat(2, {0.0, 1.0, 2.0, 0.0});
        REQUIRE(validate_metric(asym).issue == MetricIssue::asymmetric);
    }
}

TEST_CASE("restrict") {
    const auto X = make_space(line_space({0.0, 1.0, 3.0}));
    SECTION("full restriction is isometric to the space") {
        const auto sub = restrict_space(X, {0, 1, 2}).materialize();
        REQUIRE(sub.flat() == X->flat());
    }
    SECTION("singleton") {
        const auto sub = restrict_space(X, {1});
        REQUIRE(sub.size() == 1);
        REQUIRE(sub.d(0, 0) == 0.0);
    }
    SECTION("line {0,1,3} restricted to {0,3}") {
        const auto sub = restrict_space(X, {0, 2});
        REQUIRE(sub.d(0, 1) == 3.0);
    }
    SECTION("errors") {
        REQUIRE_THROWS_AS(restrict_space(X, {0, 5}), Error);
        REQUIRE_THROWS_AS(restrict_space(X, {0, 0}), Error);
        try {
            restrict_space(X, {0, 0});
        } catch (const Error& e) {
            REQUIRE(e.kind() == "DuplicateIndex");
        }
    }
    SECTION("restrict of restrict equals restrict of the composition") {
        Rng rng(3);
        std::vector<std::array<double, 2>> pts;
        for (int i = 0; i < 12; ++i) pts.push_back({rng.next_unit(), rng.next_unit()});
        const auto Z = make_space(planar_space(pts));
        const auto first = restrict_space(Z, {1, 3, 5, 7, 9, 11});
        const auto once = make_space(first.materialize());
        const auto twice = restrict_space(once, {0, 2, 4}).materialize();
        const auto direct = restrict_space(Z, {1, 5, 9}).materialize();
        REQUIRE(twice.flat() == direct.flat());
    }
}

TEST_CASE("diameter") {
    REQUIRE(diameter(FiniteMetricSpace::from_flat(1, {0.0})) == 0.0);
    REQUIRE(diameter(line_space({0.0, 1.0, 3.0})) == 3.0);
}

TEST_CASE("closed_ball") {
    const auto X = line_space({0.0, 0.5, 1.0, 2.0});
    REQUIRE(closed_ball(X, 0, 0.0) == std::vector<int>{0});
    REQUIRE(closed_ball(X, 0, 10.0) == std::vector<int>{0, 1, 2, 3});
    REQUIRE(closed_ball(X, 0, 1.0) == std::vector<int>{0, 1, 2});
}

TEST_CASE("tubular_neighborhood is strict") {
    const auto X = line_space({0.0, 1.0, 2.0, 3.0});
    const std::vector<int> all{0, 1, 2, 3};
    REQUIRE(tubular_neighborhood(X, all, 0.5) == all);
    REQUIRE(tubular_neighborhood(X, {0}, 1.5) == std::vector<int>{0, 1});
    REQUIRE(tubular_neighborhood(X, {0}, 0.0).empty());
    REQUIRE_THROWS_AS(tubular_neighborhood(X, {}, 1.0), Error);
}

TEST_CASE("hausdorff_distance") {
    const auto X = line_space({0.0, 1.0, 3.0});
    REQUIRE(hausdorff_distance(X, {0, 1}, {0, 1}) == 0.0);
    REQUIRE(hausdorff_distance(X, {0}, {2}) == 3.0);
    REQUIRE(hausdorff_distance(X, {0, 2}, {1}) == 2.0);
    REQUIRE_THROWS_AS(hausdorff_distance(X, {}, {0}), Error);
}

TEST_CASE("hausdorff distance properties on random subsets") {
    Rng rng(11);
    std::vector<std::array<double, 2>> pts;
    for (int i = 0; i < 25; ++i) pts.push_back({rng.next_unit() * 4, rng.next_unit() * 4});
    const auto Z = planar_space(pts);
    auto random_subset = [&]() {
        std::vector<int> s;
        while (s.empty())
            for (int i = 0; i < Z.size(); ++i)
                if (rng.next_unit() < 0.4) s.push_back(i);
        return s;
    };
    for (int trial = 0; trial < 120; ++trial) {
        const auto A = random_subset(), B = random_subset(), C = random_subset();
        const double ab = hausdorff_distance(Z, A, B);
        const double bc = hausdorff_distance(Z, B, C);
        const double ac = hausdorff_distance(Z, A, C);
        REQUIRE(ac <= ab + bc + 1e-12);
        REQUIRE(ab == hausdorff_distance(Z, B, A));
    }
    SECTION("nested subsets reduce to the one-sided sup") {
        for (int trial = 0; trial < 60; ++trial) {
            auto B = random_subset();
            std::vector<int> A;
            for (int x : B)
                if (rng.next_unit() < 0.6) A.push_back(x);
            if (A.empty()) A.push_back(B.front());
            double onesided = 0.0;
            for (int b : B) onesided = std::max(onesided, set_distance(Z, b, A));
            REQUIRE(hausdorff_distance(Z, A, B) == onesided);
        }
    }
}

TEST_CASE("is_isometric_embedding") {
    const auto X = line_space({0.0, 1.0});
    const auto Y = line_space({0.0, 2.0});
    SECTION("identity map") {
        const auto rep = is_isometric_embedding(X, X, {0, 1}, 0.0);
        REQUIRE(rep.max_distortion == 0.0);
        REQUIRE(rep.injective);
    }
    SECTION("{0,1} into {0,2} by order distorts by 1") {
        const auto rep = is_isometric_embedding(X, Y, {0, 1}, 0.0);
        REQUIRE(rep.max_distortion == 1.0);
        REQUIRE_FALSE(rep.passes(0.0));
    }
    SECTION("subgrid under inclusion is exact") {
        std::vector<std::array<double, 2>> grid;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) grid.push_back({0.5 * i, 0.5 * j});
        const auto G = make_space(planar_space(grid));
        std::vector<int> sub_idx;
        for (int i = 0; i < 16; ++i)
            if (grid[i][0] <= 1.0 && grid[i][1] <= 1.0) sub_idx.push_back(i);
        const auto S = restrict_space(G, sub_idx).materialize();
        const auto rep = is_isometric_embedding(S, *G, sub_idx, 0.0);
        REQUIRE(rep.max_distortion == 0.0);
    }
    SECTION("invalid maps throw") {
        REQUIRE_THROWS_AS(is_isometric_embedding(X, Y, {0}, 0.0), Error);
        REQUIRE_THROWS_AS(is_isometric_embedding(X, Y, {0, 7}, 0.0), Error);
    }
}

// quantitative Hausdorff ball-containment lemma, containment half, on random
// finite configurations in one ambient space
TEST_CASE("ball containment under Hausdorff closeness") {
    Rng rng(23);
    int cases = 0;
    while (cases < 150) {
        const int n = 8 + static_cast<int>(rng.below(20));
        std::vector<std::array<double, 2>> pts;
        for (int i = 0; i < n; ++i) pts.push_back({3 * rng.next_unit(), 3 * rng.next_unit()});
        const auto Z = planar_space(pts);
        std::vector<int> Aj, Ainf;
        for (int i = 0; i < n; ++i) {
            if (rng.next_unit() < 0.5) Aj.push_back(i);
            if (rng.next_unit() < 0.5) Ainf.push_back(i);
        }
        if (Aj.empty() || Ainf.empty()) continue;
        ++cases;
        const double h = hausdorff_distance(Z, Aj, Ainf);
        const int aj = Aj[rng.below(Aj.size())];
        const int ainf = Ainf[rng.below(Ainf.size())];
        const double delta = Z.d(aj, ainf);
        const double r = 3 * rng.next_unit();
        std::vector<int> lhs, inner_ball;
        for (int x : Ainf)
            if (Z.d(ainf, x) <= r) lhs.push_back(x);
        for (int x : Aj)
            if (Z.d(aj, x) <= r + delta + h) inner_ball.push_back(x);
        for (int x : lhs) REQUIRE(set_distance(Z, x, inner_ball) <= h + 1e-12);
    }
}
