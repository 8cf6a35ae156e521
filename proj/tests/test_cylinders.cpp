#include <doctest.h>

#include "coarsecyl/coarse_paths.hpp"
#include "coarsecyl/cylinders.hpp"
#include "coarsecyl/fixtures.hpp"
#include "oracles.hpp"

using namespace coarsecyl;

namespace {

// exploratory ledger with epsilon taken from the measured stability
// constant, so the conical search space provably contains every candidate
ConstantSet ledger_for(const FineGraph& g, std::int64_t lambda, std::int64_t l) {
    const auto st = stability_constant(g, Rational(lambda), 4000, 0, 4'000'000);
    return ConstantSet::exploratory(1, lambda, std::max<std::int64_t>(1, st.N_emp), 2, 10, l);
}

}  // namespace

TEST_CASE("conical_neighborhood") {
    auto tree = fixtures::binary_tree(3);
    VertexPath seg = first_geodesic(tree, 7, 9);
    auto nb = conical_neighborhood(tree, seg, 3);
    auto expect = seg.vertices;
    std::sort(expect.begin(), expect.end());
    CHECK(nb == expect);  // tree cones stay on the segment

    CHECK_THROWS_AS(conical_neighborhood(tree, VertexPath{{0}}, 3), PreconditionError);
    auto c6 = fixtures::cycle_graph(6);
    CHECK_THROWS_AS(conical_neighborhood(c6, VertexPath{{0, 5, 4, 3, 2}}, 2),
                    PreconditionError);

    // union-of-cones oracle on the cycle
    VertexPath arc{{0, 1, 2}};
    std::set<VertexId> oracle_union;
    for (std::size_t i = 0; i + 1 < arc.vertices.size(); ++i) {
        const VertexId a = arc.vertices[i], b = arc.vertices[i + 1];
        for (VertexId w : oracle::cone(c6, a, b, 4, 4)) oracle_union.insert(w);
        for (VertexId w : oracle::cone(c6, b, a, 4, 4)) oracle_union.insert(w);
    }
    CHECK(conical_neighborhood(c6, arc, 4) ==
          std::vector<VertexId>(oracle_union.begin(), oracle_union.end()));
}

TEST_CASE("cylinder basics") {
    auto tree = fixtures::binary_tree(3);
    auto C = ledger_for(tree, 2, 2);
    auto cyl = cylinder(tree, 7, 9, 2, C, 1'000'000, true);
    CHECK(cyl.complete);
    auto geo = first_geodesic(tree, 7, 9).vertices;
    std::sort(geo.begin(), geo.end());
    CHECK(cyl.members == geo);  // tree cylinders are the geodesic

    auto degenerate = cylinder(tree, 5, 5, 2, C, 1000);
    CHECK(degenerate.members == std::vector<VertexId>{5});
    CHECK(degenerate.complete);

    CHECK_THROWS_AS(cylinder(tree, 7, 9, 0, C, 1000), PreconditionError);
}

TEST_CASE("cylinder equals the exhaustive subdivision oracle") {
    struct Case {
        FineGraph g;
        std::int64_t lambda;
        std::int64_t l;
    };
    std::vector<Case> cases;
    cases.push_back({fixtures::path_graph(8), 2, 2});
    cases.push_back({fixtures::cycle_graph(6), 4, 2});
    cases.push_back({fixtures::cycle_graph(5), 3, 1});
    cases.push_back({fixtures::cycle_graph(8), 3, 3});
    cases.push_back({fixtures::theta_graph(3, 2), 3, 2});
    cases.push_back({fixtures::ladder_graph(3), 3, 2});
    cases.push_back({fixtures::binary_tree(2), 2, 1});

    for (const auto& [g, lambda, l] : cases) {
        const auto C = ledger_for(g, lambda, l);
        for (VertexId x : g.vertex_ids()) {
            for (VertexId y : g.vertex_ids()) {
                if (x > y || distance(g, x, y) > 3) continue;
                auto got = cylinder(g, x, y, l, C, 4'000'000);
                REQUIRE(got.complete);
                auto expect = oracle::cylinder(g, x, y, l, C);
                CHECK(got.members == expect);
            }
        }
    }
}

TEST_CASE("cylinder containment and symmetry") {
    for (const auto& g : {fixtures::cycle_graph(6), fixtures::theta_graph(3, 2),
                          fixtures::ladder_graph(4)}) {
        const auto C = ledger_for(g, 3, 2);
        for (VertexId x : g.vertex_ids()) {
            for (VertexId y : g.vertex_ids()) {
                if (x >= y || distance(g, x, y) > 3) continue;
                auto cyl = cylinder(g, x, y, 2, C, 4'000'000);
                REQUIRE(cyl.complete);
                // every enumerated geodesic sits inside
                auto gs = all_geodesics(g, x, y, 64);
                REQUIRE(!gs.truncated);
                for (const auto& p : gs.paths)
                    for (VertexId v : p.vertices) CHECK(cyl.contains(v));
                // and the cylinder sits inside the conical neighborhood of
                // every enumerated geodesic
                for (const auto& p : gs.paths) {
                    auto nb = conical_neighborhood(g, p, C.epsilon);
                    for (VertexId v : cyl.members)
                        CHECK(std::binary_search(nb.begin(), nb.end(), v));
                }
                // symmetry
                auto rev = cylinder(g, y, x, 2, C, 4'000'000);
                REQUIRE(rev.complete);
                CHECK(rev.members == cyl.members);
            }
        }
    }
}

TEST_CASE("cylinder witnesses validate and satisfy the depth rule") {
    auto g = fixtures::cycle_graph(6);
    const auto C = ledger_for(g, 4, 2);
    auto cyl = cylinder(g, 0, 2, 2, C, 4'000'000, true);
    REQUIRE(cyl.complete);
    REQUIRE(!cyl.witnesses.empty());
    for (const auto& [v, w] : cyl.witnesses) {
        CHECK(validate_cpg(g, w).overall() == Verdict::pass);
        CHECK(w.path.front() == 0);
        CHECK(w.path.back() == 2);
        bool deep = false;
        for (std::size_t i = 0; i < w.piece_count() && !deep; ++i) {
            auto [c, d] = w.piece(i);
            for (std::size_t t = c; t <= d; ++t) {
                if (w.path.vertices[t] != v) continue;
                const bool left = w.path.vertices[c] == 0 ||
                                  static_cast<std::int64_t>(t - c) >= w.l;
                const bool right = w.path.vertices[d] == 2 ||
                                   static_cast<std::int64_t>(d - t) >= w.l;
                if (left && right) { deep = true; break; }
            }
        }
        CHECK(deep);
    }
}

TEST_CASE("budget exhaustion yields a sound incomplete subset") {
    auto g = fixtures::cycle_graph(6);
    const auto C = ledger_for(g, 4, 2);
    auto full = cylinder(g, 0, 2, 2, C, 4'000'000);
    REQUIRE(full.complete);
    auto starved = cylinder(g, 0, 2, 2, C, 5);
    CHECK(!starved.complete);
    for (VertexId v : starved.members) CHECK(full.contains(v));
}

TEST_CASE("equivariance") {
    // total action: the cycle with its rotation
    auto c6 = fixtures::cycle_graph(6);
    const auto C6 = ledger_for(c6, 4, 2);
    for (VertexId x : c6.vertex_ids()) {
        for (VertexId y : c6.vertex_ids()) {
            if (x >= y || distance(c6, x, y) > 2) continue;
            const auto res = check_equivariance(c6, "r", x, y, 2, C6, 4'000'000);
            CHECK(res.verdict == Verdict::pass);
        }
    }

    // partial action: a ball of the integers with the shift
    const std::size_t n = 13;
    std::vector<VertexId> vs;
    std::vector<std::pair<VertexId, VertexId>> es;
    for (std::size_t i = 0; i < n; ++i) vs.push_back(static_cast<VertexId>(i));
    for (std::size_t i = 0; i + 1 < n; ++i)
        es.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(i + 1));
    VertexMap shift(n);
    for (std::size_t i = 0; i + 1 < n; ++i) shift[i] = static_cast<VertexId>(i + 1);
    FineGraph zball(vs, es, {}, {{"s", shift}});
    const auto CZ = ledger_for(zball, 2, 2);

    CHECK(check_equivariance(zball, "s", 3, 6, 2, CZ, 1'000'000).verdict == Verdict::pass);
    // shifting the far end off the ball is inconclusive, never false
    CHECK(check_equivariance(zball, "s", 9, 12, 2, CZ, 1'000'000).verdict ==
          Verdict::inconclusive);
}

TEST_CASE("select_l on a shifted-segment triangle") {
    // path graph with three partial shifts: +54, +54, -108 compose to the
    // identity, giving a genuine triangle with a positive-radius corner
    // (Gromov product 54 against the offset 4*(11*mu + phi) = 52) besides
    // the vacuous digons
    const std::size_t n = 220;
    const std::size_t s1 = 54, s2 = 108;
    std::vector<VertexId> vs;
    std::vector<std::pair<VertexId, VertexId>> es;
    for (std::size_t i = 0; i < n; ++i) vs.push_back(static_cast<VertexId>(i));
    for (std::size_t i = 0; i + 1 < n; ++i)
        es.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(i + 1));
    VertexMap a(n), c(n);
    for (std::size_t i = 0; i + s1 < n; ++i) a[i] = static_cast<VertexId>(i + s1);
    for (std::size_t i = s2; i < n; ++i) c[i] = static_cast<VertexId>(i - s2);
    FineGraph g(vs, es, {}, {{"a", a}, {"c", c}});

    ConstantSet C = ConstantSet::exploratory(1, 2, 1, 1, 10, 0);
    C.n_triangle = static_cast<std::int64_t>(2 * 2) * (2 * 2) * (2 * 2);  // (2|F|)^3, F={a,c}
    C.phi_n = 2;
    C.capa_mu = 1;

    // gamma acts first in the identity test, so the base point must sit in
    // its domain: p - 108 >= 0 and p + 108 < n
    const VertexId p = 108;
    auto rep = select_l(g, p, {"a", "c"}, C, 8'000'000);
    CHECK(rep.chosen_l == 10 * C.mu + 2 * C.epsilon);  // first candidate works
    REQUIRE(!rep.candidates.empty());
    const auto& instances = rep.candidates[0].second;
    bool saw_triangle = false, saw_digon = false, saw_nonvacuous = false;
    for (const auto& tri : instances) {
        if (tri.gamma.empty()) saw_digon = true;
        else saw_triangle = true;
        for (const auto& corner : tri.corners) {
            CHECK(corner.verdict == Verdict::pass);
            if (!corner.vacuous) saw_nonvacuous = true;
        }
    }
    CHECK(saw_triangle);
    CHECK(saw_digon);
    CHECK(saw_nonvacuous);
    CHECK(!rep.vacuous_only);

    // family-size consistency is enforced
    ConstantSet wrong = C;
    wrong.n_triangle = 7;
    CHECK_THROWS_AS(select_l(g, p, {"a", "c"}, wrong, 1000), PreconditionError);
}

TEST_CASE("select_l vacuous regime") {
    // under the locked constants the offset dwarfs every desk-scale
    // product, so all corners pass vacuously with the marker set
    const std::size_t n = 9;
    std::vector<VertexId> vs;
    std::vector<std::pair<VertexId, VertexId>> es;
    for (std::size_t i = 0; i < n; ++i) vs.push_back(static_cast<VertexId>(i));
    for (std::size_t i = 0; i + 1 < n; ++i)
        es.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(i + 1));
    VertexMap shift(n);
    for (std::size_t i = 0; i + 1 < n; ++i) shift[i] = static_cast<VertexId>(i + 1);
    FineGraph g(vs, es, {}, {{"s", shift}});

    auto C = ConstantSet::paper_faithful(0, 1, 0, 0, 8, 1);
    auto rep = select_l(g, 4, {"s"}, C, 1000);
    CHECK(rep.chosen_l == 10 * C.mu + 2 * C.epsilon);
    CHECK(rep.vacuous_only);
    for (const auto& [l, instances] : rep.candidates)
        for (const auto& tri : instances)
            for (const auto& corner : tri.corners) {
                CHECK(corner.vacuous);
                CHECK(corner.verdict == Verdict::pass);
            }
}
