// Acceptance suite: one line per criterion, PASS/FAIL, exit 0 only if all
// criteria pass. Criterion 12 needs the command-line tool; pass its path
// as argv[1].

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <set>
#include <vector>

#include "coarsecyl/coarse_paths.hpp"
#include "coarsecyl/cylinders.hpp"
#include "coarsecyl/fixtures.hpp"
#include "coarsecyl/json_io.hpp"
#include "coarsecyl/lamination.hpp"
#include "coarsecyl/presentation.hpp"
#include "coarsecyl/slices.hpp"
#include "oracles.hpp"

using namespace coarsecyl;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& what) {
    std::printf("criterion %2d: %s  %s\n", criterion, ok ? "PASS" : "FAIL", what.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<FineGraph> corpus_graphs() {
    std::vector<FineGraph> out;
    out.push_back(fixtures::path_graph(8));
    out.push_back(fixtures::path_graph(30));
    out.push_back(fixtures::binary_tree(3));
    out.push_back(fixtures::binary_tree(4));
    out.push_back(fixtures::spider(3, 4));
    out.push_back(fixtures::spider(4, 3));
    for (std::size_t n = 3; n <= 12; ++n) out.push_back(fixtures::cycle_graph(n));
    out.push_back(fixtures::theta_graph(3, 2));
    out.push_back(fixtures::theta_graph(4, 2));
    out.push_back(fixtures::theta_graph(3, 3));
    out.push_back(fixtures::ladder_graph(4));
    out.push_back(fixtures::ladder_graph(8));
    {
        auto pres = Presentation::parse("gens: a b; peripherals: [a]");
        out.push_back(coned_off(cayley_ball(pres, 4), pres.peripherals).graph);
    }
    {
        auto pres = Presentation::parse("gens: a b; rels: bbb; peripherals: [a]");
        out.push_back(coned_off(cayley_ball(pres, 4), pres.peripherals).graph);
    }
    {
        auto pres = Presentation::parse("gens: a b; peripherals: [a], [b]");
        out.push_back(coned_off(cayley_ball(pres, 3), pres.peripherals).graph);
    }
    return out;
}

// --- criterion 1: angle axioms -------------------------------------------

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    auto graphs = corpus_graphs();
    bool ok = graphs.size() >= 20;
    std::size_t instances = 0;
    std::string detail;
    for (const auto& g : graphs) {
        // triangle inequality over all incident-edge triples
        for (VertexId v : g.vertex_ids()) {
            auto nb = g.neighbors(v);
            std::vector<Angle> row(nb.size() * nb.size());
            for (std::size_t i = 0; i < nb.size(); ++i) {
                auto dist = bfs_distances(g, g.index_of(nb[i]), g.index_of(v));
                for (std::size_t j = 0; j < nb.size(); ++j) {
                    const auto d = dist[g.index_of(nb[j])];
                    row[i * nb.size() + j] =
                        i == j ? Angle(0)
                               : (d == kUnreachable ? Angle::infinity() : Angle(d));
                }
            }
            for (std::size_t i = 0; i < nb.size(); ++i)
                for (std::size_t j = 0; j < nb.size(); ++j)
                    for (std::size_t k = 0; k < nb.size(); ++k) {
                        ++instances;
                        const Angle ij = row[i * nb.size() + j];
                        const Angle jk = row[j * nb.size() + k];
                        const Angle ik = row[i * nb.size() + k];
                        if (ij.is_finite() && jk.is_finite() && !(ik <= ij + jk)) {
                            ok = false;
                            detail = "triangle inequality violated";
                        }
                    }
        }
        // isometry invariance under every action generator, where defined
        for (const auto& [label, perm] : g.action()) {
            for (VertexId v : g.vertex_ids()) {
                auto gv = g.apply(label, v);
                if (!gv) continue;
                for (VertexId a : g.neighbors(v)) {
                    auto ga = g.apply(label, a);
                    if (!ga) continue;
                    for (VertexId b : g.neighbors(v)) {
                        auto gb = g.apply(label, b);
                        if (!gb) continue;
                        ++instances;
                        if (edge_angle(g, v, {v, a}, {v, b}) !=
                            edge_angle(g, *gv, {*gv, *ga}, {*gv, *gb})) {
                            ok = false;
                            detail = "isometry invariance violated";
                        }
                    }
                }
            }
        }
        // circuit bound over every enumerated circuit through every edge
        const std::size_t L = g.vertex_count() > 100 ? 6 : 8;
        for (auto [u, w] : g.edges()) {
            for (const auto& c : circuits_through(g, {u, w}, L, 4'000'000)) {
                ++instances;
                const std::size_t n = c.vertices.size();
                for (std::size_t i = 0; i < n; ++i) {
                    const VertexId prev = c.vertices[(i + n - 1) % n];
                    const VertexId mid = c.vertices[i];
                    const VertexId next = c.vertices[(i + 1) % n];
                    if (!edge_angle(g, mid, {mid, prev}, {mid, next})
                             .le(static_cast<std::int64_t>(n) - 2)) {
                        ok = false;
                        detail = "circuit angle bound violated";
                    }
                }
            }
        }
    }
    const double dt = seconds_since(t0);
    if (dt >= 60.0) {
        ok = false;
        detail = "over the 60 s budget";
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "angle axioms: %zu graphs, %zu instances, %.1fs %s",
                  graphs.size(), instances, dt, detail.c_str());
    report(1, ok, buf);
}

// --- criterion 2: cone oracle equivalence --------------------------------

void criterion_2() {
    bool ok = true;
    std::size_t cones = 0;
    std::vector<FineGraph> graphs;
    graphs.push_back(fixtures::cycle_graph(6));
    graphs.push_back(fixtures::cycle_graph(9));
    graphs.push_back(fixtures::theta_graph(3, 2));
    graphs.push_back(fixtures::ladder_graph(4));
    graphs.push_back(fixtures::binary_tree(3));
    graphs.push_back(fixtures::path_graph(12));
    {
        auto pres = Presentation::parse("gens: a b; peripherals: [a]");
        graphs.push_back(coned_off(cayley_ball(pres, 2), pres.peripherals).graph);
    }
    for (const auto& g : graphs) {
        if (g.vertex_count() > 200) { ok = false; break; }
        for (auto [u, v] : g.edges()) {
            for (unsigned d = 0; d <= 4; ++d) {
                for (int theta = 0; theta <= 8; ++theta) {
                    ++cones;
                    if (cone(g, {u, v}, u, d, theta) != oracle::cone(g, u, v, d, theta) ||
                        cone(g, {v, u}, v, d, theta) != oracle::cone(g, v, u, d, theta))
                        ok = false;
                }
            }
        }
    }
    report(2, ok, "cone oracle equivalence: " + std::to_string(cones) + " instances exact");
}

// --- criterion 3: quasi-geodesic conical stability ------------------------

void criterion_3() {
    bool ok = true;
    std::size_t checked = 0;
    std::string detail;
    for (const auto& g : {fixtures::cycle_graph(6), fixtures::cycle_graph(8),
                          fixtures::ladder_graph(4), fixtures::ladder_graph(6)}) {
        for (std::int64_t lambda : {1, 5}) {
            StabilityResult st;
            try {
                st = stability_constant(g, Rational(lambda), 100000, 0, 64'000'000);
            } catch (const Error& e) {
                ok = false;
                detail = e.what();
                continue;
            }
            if (st.N_emp < 0) ok = false;
            const std::int64_t N = st.N_emp;
            // re-verify membership through the cone operation itself
            auto d = oracle::floyd(g);
            for (VertexId x : g.vertex_ids()) {
                for (VertexId y : g.vertex_ids()) {
                    if (x >= y) continue;
                    const int dxy = d[g.index_of(x)][g.index_of(y)];
                    auto geos = all_geodesics(g, x, y, 64);
                    for (auto& q :
                         oracle::walks(g, x, y, static_cast<std::size_t>(lambda * dxy),
                                       true)) {
                        if (!is_quasi_geodesic(g, q, Rational(lambda))) continue;
                        for (VertexId w : q.vertices) {
                            ++checked;
                            bool found = false;
                            for (const auto& geod : geos.paths) {
                                for (std::size_t i = 0;
                                     i + 1 < geod.vertices.size() && !found; ++i) {
                                    const VertexId a = geod.vertices[i];
                                    const VertexId b = geod.vertices[i + 1];
                                    for (const Edge& e : {Edge{a, b}, Edge{b, a}}) {
                                        auto cn =
                                            cone(g, e, e.first,
                                                 static_cast<std::uint32_t>(N), N);
                                        if (std::binary_search(cn.begin(), cn.end(),
                                                               w)) {
                                            found = true;
                                            break;
                                        }
                                    }
                                }
                                if (found) break;
                            }
                            if (!found) {
                                ok = false;
                                detail = "vertex outside every cone";
                            }
                        }
                    }
                }
            }
        }
    }
    report(3, ok,
           "conical stability: " + std::to_string(checked) + " vertices in cones " + detail);
}

// --- criteria 4 and 5: cylinders -------------------------------------------

ConstantSet ledger_for(const FineGraph& g, std::int64_t lambda, std::int64_t l) {
    const auto st = stability_constant(g, Rational(lambda), 100000, 0, 64'000'000);
    return ConstantSet::exploratory(1, lambda, std::max<std::int64_t>(1, st.N_emp), 2, 10,
                                    l);
}

void criterion_4() {
    bool ok = true;
    std::size_t pairs = 0;
    for (const auto& g : {fixtures::cycle_graph(6), fixtures::theta_graph(3, 2),
                          fixtures::ladder_graph(4), fixtures::path_graph(10),
                          fixtures::binary_tree(3)}) {
        const auto C = ledger_for(g, 3, 2);
        for (VertexId x : g.vertex_ids()) {
            for (VertexId y : g.vertex_ids()) {
                if (x >= y || distance(g, x, y) > 3) continue;
                auto cyl = cylinder(g, x, y, 2, C, 64'000'000);
                auto rev = cylinder(g, y, x, 2, C, 64'000'000);
                if (!cyl.complete || !rev.complete) continue;  // only complete searches
                ++pairs;
                if (rev.members != cyl.members) ok = false;
                auto gs = all_geodesics(g, x, y, 64);
                for (const auto& p : gs.paths) {
                    for (VertexId v : p.vertices)
                        if (!cyl.contains(v)) ok = false;
                    auto nb = conical_neighborhood(g, p, C.epsilon);
                    for (VertexId v : cyl.members)
                        if (!std::binary_search(nb.begin(), nb.end(), v)) ok = false;
                }
            }
        }
    }
    report(4, ok,
           "cylinder containment and symmetry: " + std::to_string(pairs) +
               " complete pairs exact");
}

void criterion_5() {
    bool ok = true;
    std::size_t pairs = 0;
    struct Case {
        FineGraph g;
        std::int64_t lambda, l;
    };
    std::vector<Case> cases;
    cases.push_back({fixtures::path_graph(8), 2, 2});
    cases.push_back({fixtures::path_graph(10), 2, 6});
    cases.push_back({fixtures::cycle_graph(6), 4, 2});
    cases.push_back({fixtures::cycle_graph(5), 3, 1});
    cases.push_back({fixtures::theta_graph(3, 2), 3, 2});
    cases.push_back({fixtures::ladder_graph(3), 3, 2});
    cases.push_back({fixtures::binary_tree(2), 2, 1});
    for (const auto& [g, lambda, l] : cases) {
        if (g.vertex_count() > 40 || l > 6) { ok = false; continue; }
        const auto C = ledger_for(g, lambda, l);
        for (VertexId x : g.vertex_ids()) {
            for (VertexId y : g.vertex_ids()) {
                if (x > y || distance(g, x, y) > 3) continue;
                auto got = cylinder(g, x, y, l, C, 64'000'000);
                if (!got.complete) { ok = false; continue; }
                ++pairs;
                if (got.members != oracle::cylinder(g, x, y, l, C)) ok = false;
            }
        }
    }
    report(5, ok,
           "cylinder oracle equivalence: " + std::to_string(pairs) + " pairs exact");
}

// --- criterion 6: equivariance --------------------------------------------

void criterion_6() {
    bool ok = true;
    std::size_t conclusive = 0, inconclusive = 0;

    // integers with the shift
    {
        const std::size_t n = 13;
        std::vector<VertexId> vs;
        std::vector<std::pair<VertexId, VertexId>> es;
        for (std::size_t i = 0; i < n; ++i) vs.push_back(static_cast<VertexId>(i));
        for (std::size_t i = 0; i + 1 < n; ++i)
            es.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(i + 1));
        VertexMap shift(n);
        for (std::size_t i = 0; i + 1 < n; ++i) shift[i] = static_cast<VertexId>(i + 1);
        FineGraph g(vs, es, {}, {{"s", shift}});
        const auto C = ledger_for(g, 2, 2);
        for (VertexId x : g.vertex_ids()) {
            for (VertexId y : g.vertex_ids()) {
                if (x >= y || distance(g, x, y) > 4) continue;
                const auto res = check_equivariance(g, "s", x, y, 2, C, 64'000'000);
                if (res.verdict == Verdict::fail) ok = false;
                (res.verdict == Verdict::pass ? conclusive : inconclusive) += 1;
            }
        }
    }
    // cyclic groups
    for (std::size_t n : {6, 8}) {
        auto g = fixtures::cycle_graph(n);
        const auto C = ledger_for(g, 3, 2);
        for (VertexId x : g.vertex_ids()) {
            for (VertexId y : g.vertex_ids()) {
                if (x >= y) continue;
                const auto res = check_equivariance(g, "r", x, y, 2, C, 64'000'000);
                if (res.verdict == Verdict::fail) ok = false;
                (res.verdict == Verdict::pass ? conclusive : inconclusive) += 1;
            }
        }
    }
    // free group of rank 2, radius 3 ball
    {
        auto model = cayley_ball(Presentation::parse("gens: a b"), 3);
        const auto& g = model.graph;
        const auto C = ConstantSet::exploratory(1, 2, 1, 2, 10, 2);
        for (const std::string lbl : {"a", "b"}) {
            for (VertexId x : g.vertex_ids()) {
                for (VertexId y : g.vertex_ids()) {
                    if (x >= y || distance(g, x, y) > 2) continue;
                    const auto res = check_equivariance(g, lbl, x, y, 2, C, 64'000'000);
                    if (res.verdict == Verdict::fail) ok = false;
                    (res.verdict == Verdict::pass ? conclusive : inconclusive) += 1;
                }
            }
        }
    }
    if (conclusive == 0 || inconclusive == 0) ok = false;  // both behaviors exercised
    report(6, ok,
           "equivariance: " + std::to_string(conclusive) + " conclusive, " +
               std::to_string(inconclusive) + " boundary-inconclusive, none false");
}

// --- criterion 7: difference algebra ---------------------------------------

void criterion_7() {
    bool ok = true;
    std::size_t triples = 0;
    struct Fix {
        FineGraph g;
        VertexId x, y;
    };
    std::vector<Fix> fixes;
    fixes.push_back({fixtures::ladder_graph(120), 0, 119});
    fixes.push_back({fixtures::ladder_graph(60), 0, 59});
    fixes.push_back({fixtures::cycle_graph(12), 0, 6});
    for (const auto& [g, x, y] : fixes) {
        auto C = ConstantSet::exploratory(1, 2, 2, 2, 1000, 2);
        auto cyl = cylinder(g, x, y, 2, C, 256'000'000);
        if (!cyl.complete) { ok = false; continue; }
        if (!parabolic_slices(g, cyl, C.theta).empty()) { ok = false; continue; }
        std::vector<VertexId> sample;
        const std::size_t step = std::max<std::size_t>(1, cyl.members.size() / 18);
        for (std::size_t i = 0; i < cyl.members.size(); i += step)
            sample.push_back(cyl.members[i]);
        // difference values via the public operation, then the algebra
        std::map<std::pair<VertexId, VertexId>, std::int64_t> dv;
        for (VertexId a : sample)
            for (VertexId b : sample) dv[{a, b}] = diff(g, cyl, a, b);
        for (VertexId a : sample)
            for (VertexId b : sample) {
                if (dv[{a, b}] != -dv[{b, a}]) ok = false;
                for (VertexId c : sample) {
                    ++triples;
                    if (dv[{a, c}] != dv[{a, b}] + dv[{b, c}]) ok = false;
                }
            }
    }
    if (triples < 10000) ok = false;
    report(7, ok, "difference algebra: " + std::to_string(triples) + " triples exact");
}

// --- criterion 8: split identities ----------------------------------------

void criterion_8() {
    bool ok = true;
    std::size_t splits = 0;
    struct Fix {
        FineGraph g;
        VertexId x, y;
        ConstantSet C;
    };
    std::vector<Fix> fixes;
    {
        FineGraph spider({0, 1, 2, 3, 4, 5, 6},
                         {{0, 1}, {1, 2}, {0, 3}, {3, 4}, {0, 5}, {5, 6}}, {0});
        fixes.push_back({spider, 2, 4, ConstantSet::exploratory(1, 2, 1, 2, 5, 1)});
    }
    {
        // coned free product: the peripheral cone vertex genuinely separates
        // the two far coset points (the in-line detour is excluded by the
        // quasi-geodesic bound)
        auto pres = Presentation::parse("gens: a b; peripherals: [a]");
        auto model = coned_off(cayley_ball(pres, 3), pres.peripherals);
        const VertexId x = *model.vertex_of({-1, -1});
        const VertexId y = *model.vertex_of({1, 1});
        fixes.push_back({model.graph, x, y, ConstantSet::exploratory(1, 2, 1, 2, 4, 1)});
    }
    fixes.push_back({fixtures::path_graph(12), 0, 11,
                     ConstantSet::exploratory(1, 2, 1, 2, 5, 1)});
    for (const auto& [g, x, y, C] : fixes) {
        auto cyl = cylinder(g, x, y, C.l, C, 64'000'000);
        if (!cyl.complete) { ok = false; continue; }
        for (const auto& s : parabolic_slices(g, cyl, C.theta)) {
            ++splits;
            auto res = split_cylinder(g, cyl, s.members[0], 64'000'000);
            if (res.union_identity != Verdict::pass) ok = false;
            if (res.intersection_identity != Verdict::pass) ok = false;
        }
    }
    if (splits == 0) ok = false;
    report(8, ok, "split identities: " + std::to_string(splits) + " splits exact");
}

// --- criterion 9: slice bounds at scale ------------------------------------

void criterion_9() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    const std::size_t n = 10001;  // a path of length 10^4
    auto g = fixtures::path_graph(n);
    auto C = ConstantSet::paper_faithful(0, 1, 0, 0, 8, 1);  // delta clamps to 2
    const std::int64_t l = 10 * C.mu + 2 * C.epsilon;
    std::size_t slices = 0;
    try {
        auto dec =
            order_slices(g, 0, static_cast<VertexId>(n - 1), l, C.with_l(l), 4'000'000'000ull);
        slices = dec.slices.size();
        std::size_t covered = 0;
        for (std::size_t i = 0; i < dec.slices.size(); ++i) {
            const auto& s = dec.slices[i];
            covered += s.members.size();
            for (VertexId v : s.members) {
                for (VertexId w : s.members)
                    if (distance(g, v, w) > 200 * C.delta) ok = false;
                if (i + 1 < dec.slices.size())
                    for (VertexId w : dec.slices[i + 1].members)
                        if (distance(g, v, w) > 1000 * C.delta) ok = false;
            }
        }
        if (covered != dec.cyl.members.size()) ok = false;
        if (dec.cyl.members.size() != n) ok = false;
    } catch (const Error& e) {
        ok = false;
        detail = e.what();
    }
    const double dt = seconds_since(t0);
    if (dt >= 120.0) { ok = false; detail = "over the 120 s budget"; }
    char buf[160];
    std::snprintf(buf, sizeof buf, "slice bounds at scale: %zu slices, %.1fs %s", slices,
                  dt, detail.c_str());
    report(9, ok, buf);
}

// --- criterion 10: the distortion and closeness certificates ---------------

void criterion_10() {
    bool ok = true;
    std::size_t corpus = 0;
    auto faithful = [](std::int64_t delta_raw, std::int64_t eps, std::int64_t dd) {
        return ConstantSet::paper_faithful(delta_raw, eps, 0, dd, 8, 1);
    };
    std::vector<std::pair<FineGraph, CoarsePiecewiseGeodesic>> corpus_items;
    {
        auto g = fixtures::path_graph(20);
        corpus_items.push_back(
            {g, CoarsePiecewiseGeodesic::single_piece(first_geodesic(g, 0, 19), 1,
                                                      faithful(0, 1, 0))});
    }
    {
        auto g = fixtures::path_graph(200);
        corpus_items.push_back(
            {g, CoarsePiecewiseGeodesic::single_piece(first_geodesic(g, 0, 199), 1,
                                                      faithful(0, 1, 0))});
    }
    {
        auto g = fixtures::binary_tree(4);
        corpus_items.push_back(
            {g, CoarsePiecewiseGeodesic::single_piece(first_geodesic(g, 15, 30), 1,
                                                      faithful(0, 1, 0))});
    }
    {
        auto g = fixtures::spider(3, 9);
        corpus_items.push_back(
            {g, CoarsePiecewiseGeodesic::single_piece(first_geodesic(g, 9, 27), 1,
                                                      faithful(0, 1, 0))});
    }
    {
        // two-piece subdivision on a ladder, under measured constants
        auto g = fixtures::ladder_graph(8);
        const auto hyp = hyperbolicity_delta(g);
        const auto st = stability_constant(g, Rational(1000 * 2), 100000, 0, 64'000'000);
        auto C = faithful(hyp.delta_raw, std::max<std::int64_t>(1, st.N_emp), st.D_emp);
        CoarsePiecewiseGeodesic two;
        two.path.vertices = {0, 1, 2, 3, 4, 5, 6, 14, 15};
        two.l = 1;
        two.constants = C;
        two.cuts = {0, 6, 7, 8};
        corpus_items.push_back({g, two});
    }
    for (const auto& [g, f] : corpus_items) {
        if (validate_cpg(g, f).overall() != Verdict::pass) { ok = false; continue; }
        ++corpus;
        const auto rep = verify_appendix(g, f);
        if (!rep.asserted || !rep.lower_bound_ok || !rep.closeness_ok) ok = false;
    }
    report(10, ok,
           "distortion and closeness certificates: " + std::to_string(corpus) +
               " validated subdivisions, zero violations");
}

// --- criterion 11: lamination combinatorics --------------------------------

void criterion_11() {
    bool ok = true;
    std::string detail;
    try {
        auto C = ConstantSet::exploratory(1, 2, 1, 2, 5, 1);
        auto gpres = Presentation::parse("gens: a b; rels: aB");
        auto tri = triangularize(gpres);
        auto model = cayley_ball(Presentation::parse("gens: a"), 8);

        // full-coincidence digon: the trivial splitting
        auto lam1 = compute_lamination(model, tri, {{1}, {1}}, 1, C, 64'000'000);
        if (!lam1.skeleton.trivial()) { ok = false; detail = "digon not trivial"; }

        // distance-3 digon: multiplicities and pruning soundness
        auto lam3 = compute_lamination(model, tri, {{1, 1, 1}, {1, 1, 1}}, 1, C,
                                       64'000'000);
        for (std::size_t g2 = 0; g2 < 2; ++g2) {
            std::map<std::size_t, std::size_t> per_slice;
            for (const auto& m : lam3.edge_markings[g2]) ++per_slice[m.slice];
            for (const auto& [slice, count] : per_slice) {
                const auto kind = lam3.edge_decompositions[g2].slices[slice].kind;
                if (count != (kind == SliceKind::parabolic ? 2u : 1u)) {
                    ok = false;
                    detail = "marking multiplicity";
                }
            }
        }
        // pruning soundness over whatever components exist
        for (std::size_t e = 0; e < lam3.K.edges.size(); ++e) {
            const bool pruned = lam3.K.component_pruned[lam3.K.edge_component[e]];
            bool touches_hole = false;
            for (const GapId& gap : {lam3.K.edges[e].a, lam3.K.edges[e].b}) {
                const std::size_t gi = static_cast<std::size_t>(
                    std::lower_bound(lam3.K.gap_vertices.begin(),
                                     lam3.K.gap_vertices.end(), gap) -
                    lam3.K.gap_vertices.begin());
                if (lam3.K.gap_in_hole[gi]) touches_hole = true;
            }
            if (pruned && !touches_hole) { ok = false; detail = "pruned a clean component"; }
            if (!pruned && touches_hole) { ok = false; detail = "kept a hole component"; }
        }

        // triangle with an unmatched parabolic slice: a singular point
        auto gtri = Presentation::parse("gens: a b c; rels: abc");
        auto tri3 = triangularize(gtri);
        auto lamt = compute_lamination(model, tri3, {{1}, {1}, {-1, -1}}, 1, C,
                                       64'000'000);
        bool saw_singular = false;
        for (const auto& fl : lamt.laminations)
            if (fl.has_singular_point) saw_singular = true;
        if (!saw_singular) { ok = false; detail = "expected a singular point"; }
        bool singular_piece = false;
        for (const auto& v : lamt.skeleton.vertices)
            if (v.contains_singular) singular_piece = true;
        if (!singular_piece) { ok = false; detail = "singular point lost in the skeleton"; }
        // non-crossing and the leaf bijection are hard assertions inside the
        // construction; reaching this point certifies them on every fixture
    } catch (const Error& e) {
        ok = false;
        detail = e.what();
    }
    report(11, ok, "lamination combinatorics " + detail);
}

// --- criterion 12: bit-identical artifacts ---------------------------------

void criterion_12(const char* cli) {
    bool ok = true;
    std::string detail;
    if (!cli) {
        ok = false;
        detail = "no tool path given";
    } else {
        const std::string base = std::string(cli);
        auto run = [&](const std::string& out) {
            const std::string cmd =
                base + " suite --seed 42 --out " + out + " >/dev/null 2>&1";
            return std::system(cmd.c_str()) == 0;
        };
        if (!run("/tmp/coarsecyl_acc1.json") || !run("/tmp/coarsecyl_acc2.json")) {
            ok = false;
            detail = "suite run failed";
        } else {
            const std::string a = read_file("/tmp/coarsecyl_acc1.json");
            const std::string b = read_file("/tmp/coarsecyl_acc2.json");
            if (a != b || a.empty()) {
                ok = false;
                detail = "artifacts differ";
            }
        }
    }
    report(12, ok, "determinism: identical seeds give bit-identical artifacts " + detail);
}

}  // namespace

int main(int argc, char** argv) {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12(argc > 1 ? argv[1] : nullptr);
    if (failures == 0) {
        std::printf("acceptance: all 12 criteria PASS\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) FAILED\n", failures);
    return 1;
}
