// Batch front end: build graph models from presentations, certify their
// coarse-geometric constants, compute cylinders, slice decompositions,
// triangle reports and laminations, and run the bundled property suite.
//
// Exit codes: 0 = all asserted invariants passed, 2 = inconclusive
// (budgets or truncation interfered), 1 = invariant violation or error.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <map>
#include <sstream>

#include "coarsecyl/angles.hpp"
#include "coarsecyl/coarse_paths.hpp"
#include "coarsecyl/cylinders.hpp"
#include "coarsecyl/fixtures.hpp"
#include "coarsecyl/graph.hpp"
#include "coarsecyl/json_io.hpp"
#include "coarsecyl/lamination.hpp"
#include "coarsecyl/presentation.hpp"
#include "coarsecyl/slices.hpp"

using namespace coarsecyl;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInconclusive = 2;

struct CommonOpts {
    std::string graph_path;
    std::string pres_path;
    std::uint32_t radius = 4;
    bool coned = false;
    std::string regime = "exploratory";
    std::uint64_t seed = 0;
    std::size_t budget_geodesics = 64;
    std::size_t budget_search = 4'000'000;
    std::size_t budget_circuits = 2'000'000;
    std::string out;
    std::string constants_path;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool graph_source) {
    if (graph_source) {
        cmd->add_option("--graph", o.graph_path, "graph JSON file");
        cmd->add_option("--pres", o.pres_path, "presentation text file");
        cmd->add_option("--radius", o.radius, "ball radius when building from a presentation");
        cmd->add_flag("--coned", o.coned, "cone off the declared peripheral subgroups");
    }
    cmd->add_option("--regime", o.regime, "paper-faithful or exploratory");
    cmd->add_option("--seed", o.seed, "seed for sampled searches");
    cmd->add_option("--budget-geodesics", o.budget_geodesics, "geodesic enumeration cap");
    cmd->add_option("--budget-search", o.budget_search, "cylinder search budget");
    cmd->add_option("--budget-circuits", o.budget_circuits, "circuit enumeration budget");
    cmd->add_option("--constants", o.constants_path, "constant-set JSON file");
    cmd->add_option("--out", o.out, "output path");
}

GraphModel load_model(const CommonOpts& o) {
    if (!o.pres_path.empty()) {
        auto pres = Presentation::parse(read_file(o.pres_path));
        auto model = cayley_ball(pres, o.radius);
        if (o.coned) model = coned_off(model, pres.peripherals);
        return model;
    }
    if (!o.graph_path.empty()) {
        GraphModel m(graph_from_json(read_file(o.graph_path)));
        return m;
    }
    throw PreconditionError("one of --graph or --pres is required");
}

ConstantSet load_constants(const CommonOpts& o, const FineGraph& g) {
    if (!o.constants_path.empty()) return constants_from_json(read_file(o.constants_path));
    // exploratory defaults measured on the graph itself
    const auto st = stability_constant(g, Rational(2), 2000, o.seed, o.budget_search);
    return ConstantSet::exploratory(1, 2, std::max<std::int64_t>(1, st.N_emp), 2,
                                    1000, 2);
}

void emit(const CommonOpts& o, const std::string& payload) {
    if (o.out.empty()) std::cout << payload;
    else write_file(o.out, payload);
}

int run_build(const CommonOpts& o) {
    auto model = load_model(o);
    emit(o, model_to_json(model));
    return kExitOk;
}

int run_certify(const CommonOpts& o, std::size_t fineness_L) {
    auto model = load_model(o);
    const auto& g = model.graph;
    json j;
    const auto hyp = hyperbolicity_delta(g, o.budget_geodesics);
    j["delta_raw"] = hyp.delta_raw;
    j["delta_lower_bound_only"] = hyp.lower_bound_only;
    j["delta_clamped"] = std::max<std::int64_t>(hyp.delta_raw, 2);
    j["fineness"] = json::parse(fineness_to_json(fineness_report(g, fineness_L,
                                                                 o.budget_circuits)));
    try {
        const auto rho = rho_constant(g);
        j["rho"] = rho.rho;
        j["rho_infinite_pairs"] = rho.infinite_pairs.size();
    } catch (const Error& e) {
        j["rho"] = nullptr;
        j["rho_note"] = e.what();
    }
    emit(o, j.dump(2) + "\n");
    return hyp.lower_bound_only ? kExitInconclusive : kExitOk;
}

int run_constants(const CommonOpts& o, std::int64_t delta_override,
                  std::int64_t capa_override, std::int64_t epsilon_override,
                  std::size_t samples) {
    auto model = load_model(o);
    const auto& g = model.graph;

    std::int64_t delta_raw;
    if (delta_override >= 0) {
        delta_raw = delta_override;
    } else {
        delta_raw = hyperbolicity_delta(g, o.budget_geodesics).delta_raw;
    }
    const std::int64_t delta = std::max<std::int64_t>(delta_raw, 2);
    const std::int64_t lambda = 1000 * delta;

    const auto st = stability_constant(g, Rational(lambda), samples, o.seed,
                                       o.budget_search, o.budget_geodesics);
    std::int64_t epsilon = epsilon_override > 0 ? epsilon_override
                                                : std::max<std::int64_t>(1, st.N_emp);
    std::int64_t rho = 0;
    try {
        rho = rho_constant(g).rho;
    } catch (const Error&) {
        rho = 0;  // reported separately by certify
    }
    // empirical channel capacity over sampled segments
    std::int64_t capa = 1;
    if (capa_override > 0) {
        capa = capa_override;
    } else {
        std::size_t count = 0;
        for (VertexId x : g.vertex_ids()) {
            for (VertexId y : g.vertex_ids()) {
                if (x >= y || count >= samples) continue;
                if (distance(g, x, y) < 1 || distance(g, x, y) > 4) continue;
                ++count;
                try {
                    const auto ch =
                        channels(g, first_geodesic(g, x, y), epsilon, o.budget_circuits);
                    capa = std::max<std::int64_t>(capa,
                                                  static_cast<std::int64_t>(ch.count));
                } catch (const BudgetError&) {
                    // skip over-budget segments; capa stays a lower bound
                }
            }
        }
    }
    const std::int64_t n_triangle = 8;  // (2*|F|)^3 for a one-element family by default
    auto C = ConstantSet::paper_faithful(delta_raw, epsilon, rho, st.D_emp, n_triangle, capa);
    C.provenance["epsilon"] = epsilon_override > 0 ? "user override"
                                                   : "stability constant N_emp";
    C.provenance["stability_D"] = "measured deviation D_emp";
    C.provenance["capa_mu"] = capa_override > 0 ? "user override"
                                                : "max channel count over sampled segments";
    C.provenance["seed"] = std::to_string(o.seed);
    emit(o, constants_to_json(C));
    return kExitOk;
}

int run_cyl(const CommonOpts& o, VertexId x, VertexId y, std::int64_t l, bool witnesses) {
    auto model = load_model(o);
    auto C = load_constants(o, model.graph).with_l(l);
    auto cyl = cylinder(model.graph, x, y, l, C, o.budget_search, witnesses,
                        o.budget_geodesics);
    emit(o, cylinder_to_json(cyl, witnesses));
    return cyl.complete ? kExitOk : kExitInconclusive;
}

int run_slices(const CommonOpts& o, VertexId x, VertexId y, std::int64_t l) {
    auto model = load_model(o);
    auto C = load_constants(o, model.graph).with_l(l);
    auto dec = order_slices(model.graph, x, y, l, C, o.budget_search, o.budget_geodesics);
    emit(o, decomposition_to_json(dec));
    return kExitOk;
}

int run_triangle(const CommonOpts& o, VertexId base, const std::string& family_csv,
                 std::int64_t l_flag) {
    auto model = load_model(o);
    const auto& g = model.graph;
    std::vector<std::string> family;
    {
        std::istringstream in(family_csv);
        std::string item;
        while (std::getline(in, item, ',')) family.push_back(item);
    }
    if (family.empty()) throw PreconditionError("--family must list generator labels");

    ConstantSet C;
    if (!o.constants_path.empty()) {
        C = constants_from_json(read_file(o.constants_path));
    } else {
        C = load_constants(o, g);
        C.phi_n = std::max<std::int64_t>(C.phi_n, 2 * C.epsilon);
    }
    const std::int64_t n = 8 * static_cast<std::int64_t>(family.size()) *
                           static_cast<std::int64_t>(family.size()) *
                           static_cast<std::int64_t>(family.size());
    C.n_triangle = n;
    if (C.regime == Regime::paper_faithful)
        C = ConstantSet::paper_faithful(C.delta, C.epsilon, C.rho, C.stability_D, n,
                                        C.capa_mu);

    auto rep = select_l(g, base, family, C, o.budget_search);
    const std::int64_t l = l_flag > 0 ? l_flag : rep.chosen_l;

    json j;
    j["select_l"] = json::parse(select_l_to_json(rep));
    json tris = json::array();
    bool inconclusive = false;
    bool hard = false;
    if (!rep.candidates.empty()) {
        for (const auto& tri : rep.candidates.back().second) {
            try {
                auto td = triangle_slices(g, base, tri.alpha, tri.beta, tri.gamma, l,
                                          C.with_l(l), o.budget_search,
                                          o.budget_geodesics);
                tris.push_back(json::parse(triangle_to_json(td)));
                if (!td.hard_failures.empty()) hard = true;
                if (td.locality == Verdict::inconclusive) inconclusive = true;
            } catch (const BudgetError& e) {
                tris.push_back(json{{"alpha", tri.alpha},
                                    {"beta", tri.beta},
                                    {"gamma", tri.gamma},
                                    {"inconclusive", e.what()}});
                inconclusive = true;
            }
        }
    }
    j["triangles"] = tris;
    j["vacuous_only"] = rep.vacuous_only;
    emit(o, j.dump(2) + "\n");
    if (hard) return kExitViolation;
    return inconclusive ? kExitInconclusive : kExitOk;
}

int run_laminate(const CommonOpts& o, const std::string& gpres_path,
                 const std::string& map_csv, std::int64_t l) {
    if (o.pres_path.empty())
        throw PreconditionError("--pres (target model presentation) is required");
    auto target_pres = Presentation::parse(read_file(o.pres_path));
    auto model = cayley_ball(target_pres, o.radius);
    if (o.coned) model = coned_off(model, target_pres.peripherals);

    auto gpres = Presentation::parse(read_file(gpres_path));
    std::vector<Word> defs;
    auto tri = triangularize(gpres, nullptr, &defs);

    // morphism: explicit map entries "g:word", identity letters otherwise
    std::map<std::string, std::string> map_entries;
    {
        std::istringstream in(map_csv);
        std::string item;
        while (std::getline(in, item, ',')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos)
                throw PreconditionError("--map entries look like g:word");
            map_entries[item.substr(0, colon)] = item.substr(colon + 1);
        }
    }
    std::vector<Word> morphism;
    for (std::size_t g = 0; g < gpres.generators.size(); ++g) {
        auto it = map_entries.find(gpres.generators[g]);
        const std::string word = it != map_entries.end() ? it->second : gpres.generators[g];
        morphism.push_back(target_pres.word_from_string(word));
    }
    // extend over the triangularization's fresh generators
    for (const Word& def : defs) {
        Word image;
        for (int letter : def) {
            const std::size_t idx = static_cast<std::size_t>(std::abs(letter)) - 1;
            const Word& base = morphism.at(idx);
            const Word part = letter > 0 ? base : invert(base);
            image.insert(image.end(), part.begin(), part.end());
        }
        morphism.push_back(free_reduce(image));
    }

    auto C = load_constants(o, model.graph).with_l(l);
    auto lam = compute_lamination(model, tri, morphism, l, C, o.budget_search,
                                  o.budget_geodesics);
    emit(o, skeleton_to_json(lam.skeleton, lam));
    return kExitOk;
}

int run_export_dot(const CommonOpts& o, const std::string& cone_arg,
                   const std::string& slice_arg) {
    auto model = load_model(o);
    const auto& g = model.graph;
    if (!cone_arg.empty()) {
        std::istringstream in(cone_arg);
        std::string tok;
        std::vector<std::int64_t> nums;
        while (std::getline(in, tok, ',')) nums.push_back(std::stoll(tok));
        if (nums.size() != 4)
            throw PreconditionError("--cone wants v,endpoint,d,theta");
        auto members = cone(g, {static_cast<VertexId>(nums[0]),
                                static_cast<VertexId>(nums[1])},
                            static_cast<VertexId>(nums[0]),
                            static_cast<std::uint32_t>(nums[2]), nums[3]);
        emit(o, graph_to_dot(g, members));
        return kExitOk;
    }
    if (!slice_arg.empty()) {
        std::istringstream in(slice_arg);
        std::string tok;
        std::vector<std::int64_t> nums;
        while (std::getline(in, tok, ',')) nums.push_back(std::stoll(tok));
        if (nums.size() != 3) throw PreconditionError("--slices wants x,y,l");
        auto C = load_constants(o, g).with_l(nums[2]);
        auto dec = order_slices(g, static_cast<VertexId>(nums[0]),
                                static_cast<VertexId>(nums[1]), nums[2], C,
                                o.budget_search, o.budget_geodesics);
        emit(o, decomposition_to_dot(g, dec));
        return kExitOk;
    }
    emit(o, graph_to_dot(g));
    return kExitOk;
}

// ---------------------------------------------------------------------------
// suite: the bundled fixture checks, deterministic given the seed.

json run_suite_checks(std::uint64_t seed) {
    json checks = json::array();
    auto record = [&](const std::string& name, Verdict v, json details) {
        checks.push_back(json{{"name", name},
                              {"verdict", to_string(v)},
                              {"details", std::move(details)}});
    };

    // angle axioms
    {
        std::size_t triples = 0;
        Verdict v = Verdict::pass;
        for (const auto& g : {fixtures::cycle_graph(6), fixtures::theta_graph(3, 2),
                              fixtures::ladder_graph(4)}) {
            for (VertexId vert : g.vertex_ids()) {
                auto nb = g.neighbors(vert);
                for (VertexId a : nb)
                    for (VertexId b : nb)
                        for (VertexId c : nb) {
                            const Angle ab = edge_angle(g, vert, {vert, a}, {vert, b});
                            const Angle bc = edge_angle(g, vert, {vert, b}, {vert, c});
                            const Angle ac = edge_angle(g, vert, {vert, a}, {vert, c});
                            ++triples;
                            if (ab.is_finite() && bc.is_finite() && !(ac <= ab + bc))
                                v = Verdict::fail;
                        }
            }
        }
        record("angle_triangle_inequality", v, json{{"triples", triples}});
    }
    // circuit bound
    {
        Verdict v = Verdict::pass;
        std::size_t circuits = 0;
        for (const auto& g : {fixtures::cycle_graph(6), fixtures::theta_graph(3, 2)}) {
            for (auto [u, w] : g.edges()) {
                for (const auto& c : circuits_through(g, {u, w}, 8)) {
                    ++circuits;
                    Angle mx(0);
                    const std::size_t n = c.vertices.size();
                    for (std::size_t i = 0; i < n; ++i) {
                        const VertexId prev = c.vertices[(i + n - 1) % n];
                        const VertexId mid = c.vertices[i];
                        const VertexId next = c.vertices[(i + 1) % n];
                        mx = std::max(mx, edge_angle(g, mid, {mid, prev}, {mid, next}));
                    }
                    if (!mx.le(static_cast<std::int64_t>(c.length()) - 2)) v = Verdict::fail;
                }
            }
        }
        record("circuit_angle_bound", v, json{{"circuits", circuits}});
    }
    // cylinder containment + symmetry
    {
        Verdict v = Verdict::pass;
        std::size_t pairs = 0;
        auto g = fixtures::cycle_graph(6);
        const auto st = stability_constant(g, Rational(3), 2000, seed);
        auto C = ConstantSet::exploratory(1, 3, std::max<std::int64_t>(1, st.N_emp), 2,
                                          10, 2);
        for (VertexId x : g.vertex_ids()) {
            for (VertexId y : g.vertex_ids()) {
                if (x >= y) continue;
                ++pairs;
                auto cyl = cylinder(g, x, y, 2, C, 4'000'000);
                auto rev = cylinder(g, y, x, 2, C, 4'000'000);
                if (!cyl.complete || !rev.complete) {
                    v = combine(v, Verdict::inconclusive);
                    continue;
                }
                if (rev.members != cyl.members) v = Verdict::fail;
                for (const auto& p : all_geodesics(g, x, y, 64).paths)
                    for (VertexId w : p.vertices)
                        if (!cyl.contains(w)) v = Verdict::fail;
            }
        }
        record("cylinder_containment_symmetry", v, json{{"pairs", pairs}});
    }
    // difference cocycle
    {
        Verdict v = Verdict::pass;
        auto g = fixtures::ladder_graph(60);
        auto C = ConstantSet::exploratory(1, 2, 2, 2, 10, 2);
        auto cyl = cylinder(g, 0, 59, 2, C, 64'000'000);
        std::size_t triples = 0;
        if (!cyl.complete) {
            v = Verdict::inconclusive;
        } else {
            std::vector<VertexId> sample;
            for (std::size_t i = 0; i < cyl.members.size(); i += 11)
                sample.push_back(cyl.members[i]);
            for (VertexId x : sample)
                for (VertexId y : sample) {
                    if (diff(g, cyl, x, y) != -diff(g, cyl, y, x)) v = Verdict::fail;
                    for (VertexId z : sample) {
                        ++triples;
                        if (diff(g, cyl, x, z) !=
                            diff(g, cyl, x, y) + diff(g, cyl, y, z))
                            v = Verdict::fail;
                    }
                }
        }
        record("difference_cocycle", v, json{{"triples", triples}});
    }
    // equivariance on the rotating cycle
    {
        Verdict v = Verdict::pass;
        auto g = fixtures::cycle_graph(6);
        auto C = ConstantSet::exploratory(1, 3, 4, 2, 10, 2);
        for (VertexId x : g.vertex_ids())
            for (VertexId y : g.vertex_ids()) {
                if (x >= y) continue;
                v = combine(v, check_equivariance(g, "r", x, y, 2, C, 4'000'000).verdict);
            }
        record("equivariance", v, json::object());
    }
    // lamination skeletons on the two digon fixtures
    {
        Verdict v = Verdict::pass;
        auto gpres = Presentation::parse("gens: a b; rels: aB");
        auto tri = triangularize(gpres);
        auto model = cayley_ball(Presentation::parse("gens: a"), 8);
        auto C = ConstantSet::exploratory(1, 2, 1, 2, 5, 1);
        auto lam1 = compute_lamination(model, tri, {{1}, {1}}, 1, C, 4'000'000);
        if (!lam1.skeleton.trivial()) v = Verdict::fail;
        auto lam3 = compute_lamination(model, tri, {{1, 1, 1}, {1, 1, 1}}, 1, C,
                                       4'000'000);
        if (lam3.skeleton.vertices.size() != 3 || lam3.skeleton.edges.size() != 3)
            v = Verdict::fail;
        record("lamination_digons", v,
               json{{"trivial_vertices", lam1.skeleton.vertices.size()},
                    {"cycle_vertices", lam3.skeleton.vertices.size()}});
    }
    return checks;
}

int run_suite(const CommonOpts& o) {
    json j;
    j["seed"] = o.seed;
    j["checks"] = run_suite_checks(o.seed);
    bool fail = false, inconclusive = false;
    for (const auto& c : j["checks"]) {
        const std::string v = c["verdict"].get<std::string>();
        if (v == "fail") fail = true;
        if (v == "inconclusive") inconclusive = true;
    }
    j["verdict"] = fail ? "fail" : (inconclusive ? "inconclusive" : "pass");
    emit(o, j.dump(2) + "\n");
    if (fail) return kExitViolation;
    return inconclusive ? kExitInconclusive : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coarse-geometry toolkit: angles, cones, cylinders, slices and "
                 "laminations on finite graph models"};
    app.require_subcommand(1);

    CommonOpts o;

    auto* build = app.add_subcommand("build", "build a graph model from a presentation");
    add_common(build, o, true);

    auto* certify = app.add_subcommand("certify", "hyperbolicity, fineness and angle bounds");
    std::size_t fineness_L = 8;
    certify->add_option("--fineness-length", fineness_L, "circuit length bound");
    add_common(certify, o, true);

    auto* constants = app.add_subcommand("constants", "derive the locked constant ledger");
    std::int64_t delta_override = -1, capa_override = 0, epsilon_override = 0;
    std::size_t samples = 2000;
    constants->add_option("--delta", delta_override, "override the hyperbolicity constant");
    constants->add_option("--capa", capa_override, "override the channel capacity");
    constants->add_option("--epsilon", epsilon_override, "override the cone constant");
    constants->add_option("--samples", samples, "sampled pairs for the stability run");
    add_common(constants, o, true);

    auto* cyl = app.add_subcommand("cyl", "compute one cylinder");
    VertexId cx = 0, cy = 0;
    std::int64_t cl = 2;
    bool witnesses = false;
    cyl->add_option("--x", cx)->required();
    cyl->add_option("--y", cy)->required();
    cyl->add_option("--l", cl, "cylinder constant");
    cyl->add_flag("--witnesses", witnesses, "retain one witness per member");
    add_common(cyl, o, true);

    auto* slices = app.add_subcommand("slices", "ordered slice decomposition");
    VertexId sx = 0, sy = 0;
    std::int64_t sl = 2;
    slices->add_option("--x", sx)->required();
    slices->add_option("--y", sy)->required();
    slices->add_option("--l", sl, "cylinder constant");
    add_common(slices, o, true);

    auto* triangle = app.add_subcommand("triangle", "canonical constant search and "
                                                    "triangle coincidence reports");
    VertexId base = 0;
    std::string family;
    std::int64_t tl = 0;
    triangle->add_option("--base", base, "base point")->required();
    triangle->add_option("--family", family, "comma-separated generator labels")->required();
    triangle->add_option("--l", tl, "override the chosen constant");
    add_common(triangle, o, true);

    auto* laminate = app.add_subcommand("laminate", "lamination and splitting skeleton");
    std::string gpres_path, map_csv;
    std::int64_t ll = 1;
    laminate->add_option("--source-pres", gpres_path, "presentation of the mapped group")
        ->required();
    laminate->add_option("--map", map_csv, "morphism entries g:word (default: same letter)");
    laminate->add_option("--l", ll, "cylinder constant");
    add_common(laminate, o, true);

    auto* suite = app.add_subcommand("suite", "run the bundled property fixtures");
    add_common(suite, o, false);

    auto* export_dot = app.add_subcommand("export-dot", "DOT export of graphs, cones, slices");
    std::string cone_arg, slice_arg;
    export_dot->add_option("--cone", cone_arg, "v,endpoint,d,theta");
    export_dot->add_option("--slices", slice_arg, "x,y,l");
    add_common(export_dot, o, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) return run_build(o);
        if (certify->parsed()) return run_certify(o, fineness_L);
        if (constants->parsed())
            return run_constants(o, delta_override, capa_override, epsilon_override, samples);
        if (cyl->parsed()) return run_cyl(o, cx, cy, cl, witnesses);
        if (slices->parsed()) return run_slices(o, sx, sy, sl);
        if (triangle->parsed()) return run_triangle(o, base, family, tl);
        if (laminate->parsed()) return run_laminate(o, gpres_path, map_csv, ll);
        if (suite->parsed()) return run_suite(o);
        if (export_dot->parsed()) return run_export_dot(o, cone_arg, slice_arg);
    } catch (const BudgetError& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return kExitInconclusive;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitViolation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitViolation;
    }
    return kExitViolation;
}
