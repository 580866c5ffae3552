#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "innerlim/gallery.hpp"
#include "innerlim/gh.hpp"
#include "innerlim/rng.hpp"
#include "innerlim/sampler.hpp"

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

FiniteMetricSpace random_planar(Rng& rng, int n, double scale) {
    std::vector<std::array<double, 2>> p(n);
    for (auto& q : p) q = {scale * rng.next_unit(), scale * rng.next_unit()};
    std::vector<double> flat(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            flat[static_cast<std::size_t>(i) * n + j] =
                std::hypot(p[i][0] - p[j][0], p[i][1] - p[j][1]);
    return FiniteMetricSpace::from_flat(n, std::move(flat));
}

// brute-force maximum separated subset (oracle for greedy maximality claims)
int max_separated(const FiniteMetricSpace& X, double eps) {
    const int n = X.size();
    int best = 0;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            if (mask & (1u << i))
                for (int j = i + 1; j < n && ok; ++j)
                    if ((mask & (1u << j)) && X.d(i, j) < eps) ok = false;
        if (ok) best = std::max(best, __builtin_popcount(mask));
    }
    return best;
}

}  // namespace

TEST_CASE("greedy packing") {
    SECTION("separation above the diameter gives one center") {
        const auto X = line_space({0.0, 0.3, 0.7, 1.0});
        REQUIRE(greedy_packing(X, 5.0).count == 1);
    }
    SECTION("grid 0..1 step 0.1 at separation 0.35") {
        std::vector<double> xs;
        for (int i = 0; i <= 10; ++i) xs.push_back(0.1 * i);
        const auto X = line_space(xs);
        REQUIRE(max_separated(X, 0.35) == 3);  // oracle
        REQUIRE(greedy_packing(X, 0.35).count == 3);
    }
    SECTION("counts non-increasing in separation, centers separated") {
        Rng rng(5);
        for (int trial = 0; trial < 40; ++trial) {
            const auto X = random_planar(rng, 4 + static_cast<int>(rng.below(20)), 2.0);
            const double e = 0.1 + rng.next_unit();
            const auto p1 = greedy_packing(X, e);
            const auto p2 = greedy_packing(X, 2 * e);
            REQUIRE(p2.count <= p1.count);
            for (std::size_t a = 0; a < p1.centers.size(); ++a)
                for (std::size_t b = a + 1; b < p1.centers.size(); ++b)
                    REQUIRE(X.d(p1.centers[a], p1.centers[b]) >= e);
        }
    }
    SECTION("many-splines full space packs at least j balls of radius 1") {
        SamplePlan plan;
        plan.h = 0.06;
        auto s = sample_domain(many_splines_spec(16), plan);
        std::vector<int> all(s->size());
        for (int i = 0; i < s->size(); ++i) all[i] = i;
        GraphRestrictedOracle o(s->graph, all);
        REQUIRE(greedy_packing_oracle(o, 2.0).count >= 16);
    }
}

TEST_CASE("covering from packing") {
    SECTION("one-point space") {
        const auto X = FiniteMetricSpace::from_flat(1, {0.0});
        const auto c = covering_from_packing(X, 0.5);
        REQUIRE(c.count == 1);
        REQUIRE(c.verified);
    }
    SECTION("grid cover verified and bounded by the half-separation packing") {
        std::vector<double> xs;
        for (int i = 0; i <= 10; ++i) xs.push_back(0.1 * i);
        const auto X = line_space(xs);
        const auto c = covering_from_packing(X, 0.3);
        REQUIRE(c.verified);
        REQUIRE(c.count <= greedy_packing(X, 0.15).count);
    }
    SECTION("unit disk sample at eps = 0.5") {
        SamplePlan plan;
        plan.h = 0.07;
        auto s = sample_domain(unit_disk_spec(1.0), plan);
        const auto X = s->metric();
        const auto c = covering_from_packing(*X, 0.5);
        REQUIRE(c.verified);
        REQUIRE(c.count <= greedy_packing(*X, 0.25).count);
    }
}

TEST_CASE("gh bounds on small spaces") {
    const auto A = line_space({0.0, 1.0});
    const auto B = line_space({0.0, 2.0});
    const auto P = FiniteMetricSpace::from_flat(1, {0.0});
    SECTION("identical spaces") {
        REQUIRE(gh_lower_bound(A, A) == 0.0);
        REQUIRE(gh_upper_bound(A, A).first == 0.0);
        REQUIRE(gh_exact_small(A, A) == 0.0);
    }
    SECTION("{0,1} vs {0,2}") {
        REQUIRE(gh_lower_bound(A, B) == 0.5);
        REQUIRE(gh_upper_bound(A, B).first == 0.5);
        REQUIRE(gh_exact_small(A, B) == 0.5);
    }
    SECTION("point against a pair") {
        REQUIRE(gh_exact_small(P, P) == 0.0);
        REQUIRE(gh_lower_bound(P, A) == 0.5);
        REQUIRE(gh_exact_small(A, P) == 0.5);
    }
    SECTION("errors") {
        REQUIRE_THROWS_AS(gh_exact_small(line_space({0, 1, 2, 3, 4, 5}), A), Error);
    }
}

TEST_CASE("gh sandwich and obstruction soundness on random pairs") {
    Rng rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        const auto X = random_planar(rng, 1 + static_cast<int>(rng.below(5)), 1 + rng.next_unit());
        const auto Y = random_planar(rng, 1 + static_cast<int>(rng.below(5)), 1 + rng.next_unit());
        const double lo = gh_lower_bound(X, Y);
        const double ex = gh_exact_small(X, Y);
        const double up = gh_upper_bound(X, Y).first;
        REQUIRE(lo <= ex + 1e-9);
        REQUIRE(ex <= up + 1e-9);
        REQUIRE(std::fabs(gh_lower_bound(Y, X) - lo) <= 1e-12);
    }
}

TEST_CASE("two independent disk samples are GH-close") {
    SamplePlan a;
    a.h = 0.125;
    a.seed = 1;
    SamplePlan b = a;
    b.seed = 2;
    auto X = sample_domain(unit_disk_spec(1.0), a)->metric();
    auto Y = sample_domain(unit_disk_spec(1.0), b)->metric();
    const double coarse = gh_upper_bound(*X, *Y, 12).first;
    REQUIRE(coarse <= 0.15);
    // the bound tightens with resolution
    SamplePlan fa = a, fb = b;
    fa.h = fb.h = 0.09;
    auto Xf = sample_domain(unit_disk_spec(1.0), fa)->metric();
    auto Yf = sample_domain(unit_disk_spec(1.0), fb)->metric();
    REQUIRE(gh_upper_bound(*Xf, *Yf, 12).first <= coarse + 0.02);
}

TEST_CASE("sequence diagnostics") {
    SECTION("constant sequence is uniformly totally bounded") {
        SamplePlan plan;
        plan.h = 0.12;
        const auto X = sample_domain(unit_disk_spec(1.0), plan)->metric();
        const auto diag = sequence_diagnostics({X.get(), X.get(), X.get()}, {0.2, 0.4, 0.8});
        REQUIRE(diag.verdict == SequenceVerdict::uniformly_totally_bounded);
    }
    SECTION("strict sustained growth is divergent, wobble is not") {
        const std::vector<double> grid{1.0};
        auto one = [&](std::vector<int> c) {
            std::vector<std::vector<int>> counts;
            for (int v : c) counts.push_back({v});
            return diagnose_packing_counts(counts, grid).verdict;
        };
        REQUIRE(one({4, 8, 16}) == SequenceVerdict::divergent);
        REQUIRE(one({1200, 1210, 1215}) != SequenceVerdict::divergent);
        REQUIRE(one({10, 9, 10}) == SequenceVerdict::uniformly_totally_bounded);
        REQUIRE_THROWS_AS(one({4, 8}), Error);
    }
}

TEST_CASE("chain-counting bound") {
    SECTION("astronomically large bounds stay exact in the exponent") {
        // value depends only on (m, eps, D, V, theta); delta merely gates eps
        ChainCountingParams p{2, 0.25, 0.1, 2.0, kPi, kPi};
        const auto b = chain_counting_bound(p);
        const double expected = std::pow(std::pow(2.0, 40.0) / 0.1, 2.0);
        REQUIRE(std::fabs(b.value - expected) <= 1e-3 * expected);
    }
    SECTION("linear in V") {
        ChainCountingParams p{2, 0.25, 0.1, 2.0, kPi, kPi};
        ChainCountingParams p2 = p;
        p2.v *= 2.0;
        REQUIRE(std::fabs(chain_counting_bound(p2).log2_value -
                          chain_counting_bound(p).log2_value - 1.0) < 1e-12);
    }
    SECTION("monotonicity") {
        ChainCountingParams p{2, 0.25, 0.1, 2.0, kPi, kPi};
        const double base = chain_counting_bound(p).log2_value;
        auto bumped = [&](auto mod) {
            ChainCountingParams q = p;
            mod(q);
            return chain_counting_bound(q).log2_value;
        };
        REQUIRE(bumped([](auto& q) { q.v *= 3; }) >= base);
        REQUIRE(bumped([](auto& q) { q.d_delta *= 2; }) >= base);
        REQUIRE(bumped([](auto& q) { q.theta *= 3; }) <= base);
        REQUIRE(bumped([](auto& q) { q.epsilon *= 1.2; }) <= base);
    }
    SECTION("rejects eps >= delta/2") {
        ChainCountingParams p{2, 0.2, 0.1, 2.0, kPi, kPi};
        REQUIRE_THROWS_AS(chain_counting_bound(p), Error);
    }
}

TEST_CASE("flat ball volumes and the diameter bound") {
    REQUIRE(ball_volume_flat(2, 1.0) == kPi);
    REQUIRE(ball_volume_flat(1, 0.5) == 1.0);
    REQUIRE(std::fabs(ball_volume_flat(3, 2.0) - 32.0 * kPi / 3.0) < 1e-12);
    REQUIRE_THROWS_AS(ball_volume_flat(4, 1.0), Error);

    // V = 16*pi, delta = 0.5, l = inf, m = 2: eps0 = 0.25, bound = 256
    const double bound = sc_diameter_bound(16 * kPi, 0.5, kInf, 2);
    REQUIRE(std::fabs(bound - 256.0) < 1e-9);
    REQUIRE(std::fabs(sc_diameter_bound(32 * kPi, 0.5, kInf, 2) - 2 * bound) < 1e-9);

    SECTION("measured many-splines inner diameter respects the bound") {
        SamplePlan plan;
        plan.h = 0.06;
        auto s = sample_domain(many_splines_spec(16), plan);
        auto reg = inner_region(s, 0.45, false);
        REQUIRE_FALSE(reg.empty());
        const double diam = diameter(*reg.restricted());
        REQUIRE(diam > 0.0);
        REQUIRE(diam <= sc_diameter_bound(16 * kPi, 0.45, kInf, 2));
    }
}
