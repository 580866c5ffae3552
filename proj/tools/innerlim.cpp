// innerlim: sample domains, take delta-inner regions, estimate packing and
// Gromov-Hausdorff bounds, build glued limit spaces, and run named scenarios.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "innerlim/gallery.hpp"
#include "innerlim/gh.hpp"
#include "innerlim/glued.hpp"
#include "innerlim/io.hpp"
#include "innerlim/metric_space.hpp"
#include "innerlim/sampler.hpp"
#include "innerlim/scenario.hpp"

namespace {

using innerlim::io::Json;

struct FamilyArgs {
    std::string family;
    int j = 2, parity = 0, depth = 4;
    double w = 0.25, length = 1.0, eps_hat = 0.2, r1 = 0.0, r2 = 0.0, delta = 0.3, pitch = 0.5;
    std::vector<double> heights, box{1.0, 1.0};
    double h = 0.05, connect_factor = 2.2, boundary_h = 0.0;
    std::uint64_t seed = 0;

    innerlim::FamilySpec to_spec() const {
        innerlim::FamilySpec f;
        f.family = family;
        f.j = j;
        f.parity = parity;
        f.depth = depth;
        f.w = w;
        f.length = length;
        f.eps_hat = eps_hat;
        f.r1 = r1;
        f.r2 = r2;
        f.delta = delta;
        f.pitch = pitch;
        if (!heights.empty()) f.heights = heights;
        if (!box.empty()) f.box = box;
        f.plan.h = h;
        f.plan.connect_factor = connect_factor;
        f.plan.boundary_h = boundary_h;
        f.plan.seed = seed;
        return f;
    }
};

void add_family_options(CLI::App* cmd, FamilyArgs& a) {
    cmd->set_help_flag("--help", "print help");
    cmd->add_option("--family", a.family, "family name")->required();
    cmd->add_option("--j", a.j, "family index j");
    cmd->add_option("--parity", a.parity, "subsequence parity (f_region)");
    cmd->add_option("--depth", a.depth, "tower depth");
    cmd->add_option("--w", a.w, "spline base width");
    cmd->add_option("--length", a.length, "spline/segment length");
    cmd->add_option("--eps-hat", a.eps_hat, "no_diag width scale");
    cmd->add_option("--r1", a.r1, "inner radius / disk radius");
    cmd->add_option("--r2", a.r2, "outer radius");
    cmd->add_option("--delta", a.delta, "inner-region scale");
    cmd->add_option("--pitch", a.pitch, "lattice pitch");
    cmd->add_option("--heights", a.heights, "book page heights")->delimiter(',');
    cmd->add_option("--box", a.box, "taxi box side lengths")->delimiter(',');
    cmd->add_option("--h", a.h, "sample spacing");
    cmd->add_option("--connect-factor", a.connect_factor, "edge cutoff as a multiple of h");
    cmd->add_option("--boundary-h", a.boundary_h, "boundary sample spacing (default h)");
    cmd->add_option("--seed", a.seed, "jitter seed (0 = regular grid)");
}

void emit(const Json& j, const std::string& out) {
    if (out.empty())
        std::cout << j.dump(2) << "\n";
    else
        innerlim::io::write_text(out, j.dump(2) + "\n");
}

Json space_json_of(const innerlim::Generated& g) {
    if (g.kind == "sampled") return innerlim::io::sampled_to_json(*g.sampled);
    return innerlim::io::space_to_json(*g.exact);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"inner regions, Gromov-Hausdorff diagnostics and glued limit spaces"};
    app.set_help_flag("--help", "print help");  // frees -h / --h for sample spacing
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "generate an example-family space");
    FamilyArgs gen_args;
    std::string gen_out, gen_spec;
    add_family_options(gen, gen_args);
    gen->get_option("--family")->required(false);
    gen->add_option("--spec", gen_spec, "declarative domain-spec json (alternative to --family)");
    gen->add_option("--out", gen_out, "output json path (stdout if omitted)");

    // inner
    auto* inner = app.add_subcommand("inner", "delta-inner region of a sampled space");
    FamilyArgs inner_args;
    std::string inner_in, inner_out;
    bool inner_intrinsic = false;
    add_family_options(inner, inner_args);
    inner->get_option("--family")->required(false);
    inner->add_option("--in", inner_in, "sampled-space json (alternative to --family)");
    inner->add_flag("--intrinsic", inner_intrinsic, "recompute the intrinsic metric too");
    inner->add_option("--out", inner_out, "output json path");

    // pack
    auto* pack = app.add_subcommand("pack", "packing / covering counts");
    FamilyArgs pack_args;
    std::string pack_out;
    std::vector<double> pack_grid;
    double pack_eps = 0.0;
    bool pack_inner = false;
    add_family_options(pack, pack_args);
    pack->add_option("--epsilon", pack_eps, "single separation value");
    pack->add_option("--epsilon-grid", pack_grid, "separation grid (csv output)")->delimiter(',');
    pack->add_flag("--inner", pack_inner, "pack the delta-inner region instead");
    pack->add_option("--out", pack_out, "output path");

    // gh
    auto* gh = app.add_subcommand("gh", "Gromov-Hausdorff bounds between two spaces");
    std::string gh_a, gh_b, gh_out;
    int gh_effort = 8;
    gh->add_option("--a", gh_a, "first space json path")->required();
    gh->add_option("--b", gh_b, "second space json path")->required();
    gh->add_option("--effort", gh_effort, "refinement budget");
    gh->add_option("--out", gh_out, "output json path");

    // sequence
    auto* seq = app.add_subcommand("sequence", "packing-curve divergence diagnostics");
    std::vector<std::string> seq_in;
    std::vector<double> seq_grid;
    std::string seq_out, seq_format = "json";
    seq->add_option("--in", seq_in, "space json paths (>= 3)")->required()->delimiter(',');
    seq->add_option("--epsilon-grid", seq_grid, "separation grid")->required()->delimiter(',');
    seq->add_option("--format", seq_format, "json | csv");
    seq->add_option("--out", seq_out, "output path");

    // glue
    auto* glue = app.add_subcommand("glue", "build a glued limit space from a tower manifest");
    std::string glue_manifest, glue_out;
    glue->add_option("--manifest", glue_manifest, "tower json")->required();
    glue->add_option("--out", glue_out, "output json path");

    // run
    auto* run = app.add_subcommand("run", "run a builtin or file scenario");
    std::string run_builtin_name, run_file, run_out;
    std::uint64_t run_seed = 0;
    bool run_list = false;
    run->add_option("--builtin", run_builtin_name, "builtin scenario name");
    run->add_option("--scenario", run_file, "scenario json path");
    run->add_option("--seed", run_seed, "scenario seed");
    run->add_flag("--list", run_list, "list builtin scenarios");
    run->add_option("--out", run_out, "report json path");

    // export
    auto* exp = app.add_subcommand("export", "re-emit a space in another format");
    std::string exp_in, exp_out, exp_format = "json";
    exp->add_option("--in", exp_in, "space json path")->required();
    exp->add_option("--format", exp_format, "json | csv | plotdata");
    exp->add_option("--out", exp_out, "output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (gen->parsed()) {
            if (!gen_spec.empty()) {
                const auto spec =
                    innerlim::io::domain_spec_from_json(innerlim::io::read_json(gen_spec));
                auto s = innerlim::sample_domain(spec, gen_args.to_spec().plan);
                emit(innerlim::io::sampled_to_json(*s), gen_out);
            } else if (!gen_args.family.empty()) {
                emit(space_json_of(innerlim::generate(gen_args.to_spec())), gen_out);
            } else {
                innerlim::fail("InvalidParams", "generate needs --family or --spec");
            }
        } else if (inner->parsed()) {
            Json out;
            if (!inner_in.empty()) {
                const auto loaded = innerlim::io::sampled_from_json(innerlim::io::read_json(inner_in));
                if (loaded.boundary_dist.empty())
                    innerlim::fail("ParseError", "input lacks a boundary_dist field");
                auto parent = innerlim::make_space(loaded.space);
                std::vector<int> kept;
                for (int i = 0; i < parent->size(); ++i)
                    if (loaded.boundary_dist[i] > inner_args.delta) kept.push_back(i);
                out["retained"] = static_cast<int>(kept.size());
                out["space"] = innerlim::io::space_to_json(
                    innerlim::restrict_space(parent, kept).materialize());
            } else {
                const auto g = innerlim::generate(inner_args.to_spec());
                if (g.kind != "sampled") innerlim::fail("InvalidFamilyParams", "inner needs a sampled family");
                auto reg = innerlim::inner_region(g.sampled, inner_args.delta, inner_intrinsic);
                out["retained"] = reg.size();
                out["components"] = reg.components;
                if (inner_intrinsic) {
                    const double idiam = reg.intrinsic_diameter();
                    out["intrinsic_diameter"] = std::isinf(idiam) ? Json("inf") : Json(idiam);
                }
                if (reg.size() > 0 && reg.size() <= 20000)
                    out["space"] = innerlim::io::space_to_json(*reg.restricted());
            }
            emit(out, inner_out);
        } else if (pack->parsed()) {
            const auto g = innerlim::generate(pack_args.to_spec());
            std::vector<double> grid = pack_grid;
            if (grid.empty()) {
                if (pack_eps <= 0) innerlim::fail("InvalidParams", "need --epsilon or --epsilon-grid");
                grid.push_back(pack_eps);
            }
            std::vector<int> counts;
            if (g.kind == "sampled") {
                std::vector<int> pts;
                if (pack_inner)
                    pts = innerlim::inner_region(g.sampled, pack_args.delta, false).indices;
                else
                    for (int i = 0; i < g.sampled->size(); ++i) pts.push_back(i);
                innerlim::GraphRestrictedOracle o(g.sampled->graph, pts);
                const auto sweep = innerlim::farthest_point_sweep(
                    o, 0, *std::min_element(grid.begin(), grid.end()));
                for (double e : grid) counts.push_back(sweep.count_at(e));
            } else {
                innerlim::MatrixOracle o(*g.exact);
                const auto sweep = innerlim::farthest_point_sweep(
                    o, 0, *std::min_element(grid.begin(), grid.end()));
                for (double e : grid) counts.push_back(sweep.count_at(e));
            }
            if (!pack_grid.empty()) {
                const std::string csv = innerlim::io::packing_curves_csv(grid, {counts});
                if (pack_out.empty())
                    std::cout << csv;
                else
                    innerlim::io::write_text(pack_out, csv);
            } else {
                Json out;
                out["epsilon"] = grid[0];
                out["count"] = counts[0];
                emit(out, pack_out);
            }
        } else if (gh->parsed()) {
            const auto A = innerlim::io::space_from_json(innerlim::io::read_json(gh_a));
            const auto B = innerlim::io::space_from_json(innerlim::io::read_json(gh_b));
            const auto bounds = innerlim::gh_bounds(A, B, gh_effort);
            Json out;
            out["lower"] = bounds.lower;
            out["upper"] = bounds.upper;
            if (bounds.exact) out["exact"] = *bounds.exact;
            emit(out, gh_out);
        } else if (seq->parsed()) {
            std::vector<innerlim::FiniteMetricSpace> spaces;
            std::vector<const innerlim::FiniteMetricSpace*> ptrs;
            for (const auto& path : seq_in)
                spaces.push_back(innerlim::io::space_from_json(innerlim::io::read_json(path)));
            for (const auto& s : spaces) ptrs.push_back(&s);
            const auto diag = innerlim::sequence_diagnostics(ptrs, seq_grid);
            if (seq_format == "csv") {
                const std::string csv = innerlim::io::packing_curves_csv(diag.eps_grid, diag.counts);
                if (seq_out.empty())
                    std::cout << csv;
                else
                    innerlim::io::write_text(seq_out, csv);
            } else {
                Json out;
                out["verdict"] = innerlim::to_string(diag.verdict);
                out["witness_eps"] = diag.witness_eps;
                out["counts"] = diag.counts;
                emit(out, seq_out);
            }
        } else if (glue->parsed()) {
            std::string base_dir = ".";
            if (const auto slash = glue_manifest.find_last_of('/'); slash != std::string::npos)
                base_dir = glue_manifest.substr(0, slash);
            const auto tower =
                innerlim::io::tower_from_json(innerlim::io::read_json(glue_manifest), base_dir);
            const auto glued = innerlim::build_glued(tower);
            emit(innerlim::io::glued_to_json(glued), glue_out);
        } else if (run->parsed()) {
            if (run_list) {
                for (const auto& [name, fn] : innerlim::scenarios::builtins())
                    std::cout << name << "\n";
                return 0;
            }
            innerlim::scenarios::Report rep;
            if (!run_builtin_name.empty())
                rep = innerlim::scenarios::run_builtin(run_builtin_name, run_seed);
            else if (!run_file.empty())
                rep = innerlim::scenarios::run_scenario_doc(innerlim::io::read_json(run_file));
            else
                innerlim::fail("ScenarioParse", "need --builtin or --scenario");
            emit(rep.to_json(), run_out);
            return rep.pass() ? 0 : 1;
        } else if (exp->parsed()) {
            const Json j = innerlim::io::read_json(exp_in);
            if (exp_format == "json") {
                // bit-exact round trip through the loader
                const auto X = innerlim::io::space_from_json(j);
                emit(innerlim::io::space_to_json(X), exp_out);
            } else if (exp_format == "csv") {
                const auto X = innerlim::io::space_from_json(j);
                std::ostringstream os;
                os << "i,j,d\n";
                for (int a = 0; a < X.size(); ++a)
                    for (int b = a + 1; b < X.size(); ++b)
                        os << a << "," << b << "," << X.d(a, b) << "\n";
                if (exp_out.empty())
                    std::cout << os.str();
                else
                    innerlim::io::write_text(exp_out, os.str());
            } else if (exp_format == "plotdata") {
                std::ostringstream os;
                os << "point,u,v\n";
                if (j.contains("coords")) {
                    int i = 0;
                    for (const auto& c : j.at("coords"))
                        os << i++ << "," << c.at(0).get<double>() << "," << c.at(1).get<double>()
                           << "\n";
                }
                if (exp_out.empty())
                    std::cout << os.str();
                else
                    innerlim::io::write_text(exp_out, os.str());
            } else {
                innerlim::fail("InvalidParams", "unknown format " + exp_format);
            }
        }
    } catch (const innerlim::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == "ScenarioParse" || e.kind() == "InvalidParams" ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
