#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "innerlim/gallery.hpp"
#include "innerlim/io.hpp"
#include "innerlim/sampler.hpp"
#include "innerlim/scenario.hpp"

using namespace innerlim;
using innerlim::io::Json;

TEST_CASE("space json round trip is bit exact") {
    auto book = make_book({1.0, 0.5, 0.25}, 8);
    const auto& X = *book->space();
    const Json j = io::space_to_json(X);
    const auto back = io::space_from_json(Json::parse(j.dump()));
    REQUIRE(back.size() == X.size());
    REQUIRE(back.flat() == X.flat());
}

TEST_CASE("loader validates") {
    Json j;
    j["n"] = 3;
    j["labels"] = Json::array();
    j["dist_upper"] = {1.0, 5.0, 1.0};  // triangle violation
    REQUIRE_THROWS_AS(io::space_from_json(j, 0.0), Error);
    Json missing;
    missing["n"] = 2;
    REQUIRE_THROWS_AS(io::space_from_json(missing), Error);
}

TEST_CASE("sampled space serialization carries the extra fields") {
    SamplePlan plan;
    plan.h = 0.2;
    auto s = sample_domain(square_spec(1.0), plan);
    const Json j = io::sampled_to_json(*s);
    REQUIRE(j.contains("coords"));
    REQUIRE(j.contains("boundary_dist"));
    REQUIRE(j.contains("area_estimate"));
    const auto back = io::sampled_from_json(j);
    REQUIRE(back.space.flat() == s->metric()->flat());
    REQUIRE(back.boundary_dist == s->boundary_dist);
    REQUIRE(back.area_estimate == s->area_estimate);
}

TEST_CASE("domain specs round trip as declarative json") {
    const auto spec = many_splines_spec(8);
    const auto back = io::domain_spec_from_json(Json::parse(io::domain_spec_to_json(spec).dump()));
    REQUIRE(back.kind == spec.kind);
    for (double t : {0.3, 1.1, 4.0})
        REQUIRE(back.r_outer(t) == spec.r_outer(t));
    const auto f = f_region_spec(4, 1);
    const auto f2 = io::domain_spec_from_json(io::domain_spec_to_json(f));
    REQUIRE(f2.rects.size() == f.rects.size());
    REQUIRE(f2.holes.size() == f.holes.size());
    SamplePlan plan;
    plan.h = 0.2;
    REQUIRE(sample_domain(f2, plan)->size() == sample_domain(f, plan)->size());
}

TEST_CASE("tower manifests may reference space files") {
    SamplePlan plan;
    plan.h = 0.15;
    const Tower t = annulus_tower({0.35, 0.2}, plan, 2 * plan.h);
    const std::string dir = "innerlim_test_manifest";
    std::filesystem::create_directories(dir);
    Json manifest = io::tower_to_json(t);
    Json paths = Json::array();
    for (std::size_t i = 0; i < t.spaces.size(); ++i) {
        const std::string name = "level" + std::to_string(i) + ".json";
        io::write_text(dir + "/" + name, io::space_to_json(*t.spaces[i]).dump());
        paths.push_back(name);
    }
    manifest["spaces"] = paths;
    io::write_text(dir + "/tower.json", manifest.dump());
    const Tower back = io::tower_from_json(io::read_json(dir + "/tower.json"), dir);
    REQUIRE(validate_tower(back).ok);
    REQUIRE(back.spaces[0]->flat() == t.spaces[0]->flat());
    std::filesystem::remove_all(dir);
}

TEST_CASE("packing csv header") {
    const std::string csv = io::packing_curves_csv({0.5, 1.0}, {{3, 2}, {5, 4}});
    REQUIRE(csv.rfind("epsilon,space_index,count\n", 0) == 0);
    REQUIRE(csv.find("0.5,0,3") != std::string::npos);
    REQUIRE(csv.find("1,1,4") != std::string::npos);
}

TEST_CASE("tower json round trip validates") {
    SamplePlan plan;
    plan.h = 0.15;
    const Tower t = annulus_tower({0.35, 0.2}, plan, 2 * plan.h);
    const Json j = io::tower_to_json(t);
    const Tower back = io::tower_from_json(Json::parse(j.dump()));
    REQUIRE(validate_tower(back).ok);
    REQUIRE(back.deltas == t.deltas);
    const auto g = build_glued(back);
    REQUIRE(g.size() == back.spaces.back()->size());
}

TEST_CASE("glued json") {
    SamplePlan plan;
    plan.h = 0.15;
    const Tower t = annulus_tower({0.35, 0.2}, plan, 2 * plan.h);
    const auto g = build_glued(t);
    const Json j = io::glued_to_json(g);
    REQUIRE(j.at("stratum").size() == static_cast<std::size_t>(g.size()));
    REQUIRE(j.at("f_maps").size() == 2);
}

TEST_CASE("empty scenario passes") {
    const auto rep = scenarios::run_builtin("empty", 0);
    REQUIRE(rep.pass());
    REQUIRE(rep.steps.empty());
    REQUIRE_THROWS_AS(scenarios::run_builtin("no-such-scenario", 0), Error);
}

TEST_CASE("file scenarios") {
    SECTION("generate + expectations") {
        Json doc;
        doc["name"] = "disk-smoke";
        doc["seed"] = 0;
        Json step;
        step["op"] = "generate";
        step["family"] = "disk";
        step["h"] = 0.1;
        step["expect"] = Json::array();
        Json ex;
        ex["field"] = "area";
        ex["op"] = "approx";
        ex["value"] = kPi;
        ex["rel"] = 0.05;
        step["expect"].push_back(ex);
        doc["steps"] = Json::array({step});
        const auto rep = scenarios::run_scenario_doc(doc);
        REQUIRE(rep.pass());
    }
    SECTION("unknown ops fail the parse before execution") {
        Json doc;
        doc["steps"] = Json::array({Json{{"op", "frobnicate"}}});
        REQUIRE_THROWS_AS(scenarios::run_scenario_doc(doc), Error);
        try {
            scenarios::run_scenario_doc(doc);
        } catch (const Error& e) {
            REQUIRE(e.kind() == "ScenarioParse");
        }
    }
    SECTION("precondition violations are caught in the validation pass") {
        Json doc;
        Json bad;
        bad["op"] = "packing";
        bad["family"] = "disk";
        bad["epsilon"] = -1.0;
        doc["steps"] = Json::array({bad});
        REQUIRE_THROWS_AS(scenarios::run_scenario_doc(doc), Error);
    }
    SECTION("runtime step failures carry the step index") {
        Json doc;
        Json step;
        step["op"] = "probe";
        step["family"] = "disk";
        step["h"] = 0.1;
        step["delta"] = 0.2;
        step["p"] = {5.0, 5.0};  // far outside the disk
        step["q"] = {0.0, 0.0};
        doc["steps"] = Json::array({step});
        try {
            scenarios::run_scenario_doc(doc);
            FAIL("expected StepFailure");
        } catch (const Error& e) {
            REQUIRE(e.kind() == "StepFailure");
            REQUIRE(std::string(e.what()).find("step 0") != std::string::npos);
        }
    }
}

TEST_CASE("builtin reports are byte-identical across reruns, timing aside") {
    const auto a = scenarios::run_builtin("restricted-vs-intrinsic", 0).to_json(false).dump();
    const auto b = scenarios::run_builtin("restricted-vs-intrinsic", 0).to_json(false).dump();
    REQUIRE(a == b);
}

TEST_CASE("reports are byte-identical across reruns, timing aside") {
    Json doc;
    doc["name"] = "determinism";
    doc["seed"] = 7;
    Json s1;
    s1["op"] = "generate";
    s1["family"] = "annulus";
    s1["r1"] = 1.0;
    s1["r2"] = 2.0;
    s1["h"] = 0.15;
    Json s2;
    s2["op"] = "packing";
    s2["family"] = "annulus";
    s2["r1"] = 1.0;
    s2["r2"] = 2.0;
    s2["h"] = 0.15;
    s2["epsilon"] = 0.5;
    doc["steps"] = Json::array({s1, s2});
    const auto a = scenarios::run_scenario_doc(doc).to_json(false).dump();
    const auto b = scenarios::run_scenario_doc(doc).to_json(false).dump();
    REQUIRE(a == b);
}
