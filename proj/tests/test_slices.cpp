#include <doctest.h>

#include "coarsecyl/coarse_paths.hpp"
#include "coarsecyl/fixtures.hpp"
#include "coarsecyl/slices.hpp"
#include "oracles.hpp"

using namespace coarsecyl;

namespace {

ConstantSet ladder_constants(std::int64_t theta = 10) {
    // lambda 2, epsilon from the measured stability constant
    return ConstantSet::exploratory(1, 2, 2, 2, theta, 2);
}

FineGraph coned_star() {
    // path 0-1-2 with a flagged cone vertex 9 over all three
    return FineGraph({0, 1, 2, 9}, {{0, 1}, {1, 2}, {9, 0}, {9, 1}, {9, 2}}, {9});
}

FineGraph flagged_spider() {
    // three rays of length 2 around a flagged center
    std::vector<VertexId> vs{0, 1, 2, 3, 4, 5, 6};
    std::vector<std::pair<VertexId, VertexId>> es{{0, 1}, {1, 2}, {0, 3},
                                                  {3, 4}, {0, 5}, {5, 6}};
    return FineGraph(vs, es, {0});
}

// the four-term difference straight from the definition, via Floyd distances
std::int64_t brute_diff(const FineGraph& g, const Cylinder& cyl, VertexId x, VertexId y) {
    auto d = oracle::floyd(g);
    auto dist = [&](VertexId a, VertexId b) { return d[g.index_of(a)][g.index_of(b)]; };
    const std::int64_t far = 100 * cyl.constants.delta;
    auto sets = [&](VertexId v) {
        std::pair<std::set<VertexId>, std::set<VertexId>> lr;
        for (VertexId w : cyl.members) {
            if (dist(v, w) <= far) continue;
            if (dist(cyl.x, w) < dist(cyl.x, v)) lr.first.insert(w);
            if (dist(cyl.x, w) > dist(cyl.x, v)) lr.second.insert(w);
        }
        return lr;
    };
    auto [lx, rx] = sets(x);
    auto [ly, ry] = sets(y);
    auto card_minus = [](const std::set<VertexId>& a, const std::set<VertexId>& b) {
        std::int64_t n = 0;
        for (VertexId v : a)
            if (!b.count(v)) ++n;
        return n;
    };
    return card_minus(lx, ly) - card_minus(ly, lx) + card_minus(ry, rx) - card_minus(rx, ry);
}

}  // namespace

TEST_CASE("parabolic slice detection") {
    // flagged tree center: tree angles are infinite, above any threshold
    auto sp = flagged_spider();
    auto C = ConstantSet::exploratory(1, 2, 1, 2, 5, 1);
    auto cyl = cylinder(sp, 2, 4, 1, C, 100000);
    REQUIRE(cyl.complete);
    // every interior vertex of a tree geodesic separates its neighbors, so
    // each is a parabolic slice with an infinite angle
    auto paras = parabolic_slices(sp, cyl, C.theta);
    REQUIRE(paras.size() == 3);
    std::set<VertexId> detected;
    for (const auto& s : paras) {
        CHECK(s.angle.is_infinite());
        detected.insert(s.members[0]);
    }
    CHECK(detected == std::set<VertexId>{0, 1, 3});
    CHECK(sp.is_parabolic(0));

    // two-connected graphs have bounded angles: no slice above theta > rho
    auto ladder = fixtures::ladder_graph(5);
    const auto rho = rho_constant(ladder).rho;
    auto CL = ladder_constants(rho + 1);
    auto lcyl = cylinder(ladder, 0, 9, 2, CL, 400000);
    REQUIRE(lcyl.complete);
    CHECK(parabolic_slices(ladder, lcyl, CL.theta).empty());

    // coned star: detection matches the exhaustive pair oracle
    auto star = coned_star();
    auto CS = ConstantSet::exploratory(1, 2, 2, 2, 2, 1);
    auto scyl = cylinder(star, 0, 2, 1, CS, 100000);
    REQUIRE(scyl.complete);
    for (std::int64_t theta : {1, 2, 3}) {
        auto got = parabolic_slices(star, scyl, theta);
        std::set<VertexId> expect;
        for (VertexId v : scyl.members) {
            if (v == scyl.x || v == scyl.y) continue;
            for (VertexId w : star.neighbors(v)) {
                if (!scyl.contains(w)) continue;
                for (VertexId w2 : star.neighbors(v)) {
                    if (w2 <= w || !scyl.contains(w2)) continue;
                    const int a = oracle::angle_at(star, v, w, w2);
                    if (a >= theta) expect.insert(v);
                }
            }
        }
        std::set<VertexId> got_set;
        for (const auto& s : got) got_set.insert(s.members[0]);
        CHECK(got_set == expect);
    }
}

TEST_CASE("split_cylinder identities") {
    auto sp = flagged_spider();
    auto C = ConstantSet::exploratory(1, 2, 1, 2, 5, 1);
    auto cyl = cylinder(sp, 2, 4, 1, C, 100000);
    REQUIRE(cyl.complete);

    auto res = split_cylinder(sp, cyl, 0, 100000);
    CHECK(res.union_identity == Verdict::pass);
    CHECK(res.intersection_identity == Verdict::pass);

    CHECK_THROWS_AS(split_cylinder(sp, cyl, 2, 100000), PreconditionError);  // endpoint

    // bounded angles below the threshold: refuse
    auto ladder = fixtures::ladder_graph(5);
    auto CL = ladder_constants(1000);
    auto lcyl = cylinder(ladder, 0, 4, 2, CL, 400000);
    REQUIRE(lcyl.complete);
    CHECK_THROWS_AS(split_cylinder(ladder, lcyl, 1, 400000), PreconditionError);
}

TEST_CASE("neighborhood sets") {
    // a long ladder: delta 1, so the 100*delta threshold is 100
    auto ladder = fixtures::ladder_graph(120);
    auto C = ladder_constants(10);
    auto cyl = cylinder(ladder, 0, 119, 2, C, 64'000'000);
    REQUIRE(cyl.complete);

    auto at_a = neighborhood_sets(ladder, cyl, 0);
    CHECK(at_a.left.empty());
    for (VertexId v : at_a.right) CHECK(distance(ladder, 0, v) > 100);

    // closed form on the bottom rail: position k sees left {0..k-101} and
    // right {k+101..} on both rails
    auto at_k = neighborhood_sets(ladder, cyl, 110);
    for (VertexId v : at_k.left) CHECK(distance(ladder, 110, v) > 100);
    CHECK(!at_k.left.empty());

    // small cylinders: both sides empty
    auto small_cyl = cylinder(ladder, 0, 10, 2, C, 1'000'000);
    REQUIRE(small_cyl.complete);
    for (VertexId x : small_cyl.members) {
        auto ns = neighborhood_sets(ladder, small_cyl, x);
        CHECK(ns.left.empty());
        CHECK(ns.right.empty());
    }
}

TEST_CASE("diff algebra") {
    auto ladder = fixtures::ladder_graph(120);
    auto C = ladder_constants(10);
    auto cyl = cylinder(ladder, 0, 119, 2, C, 64'000'000);
    REQUIRE(cyl.complete);

    std::vector<VertexId> sample;
    for (std::size_t i = 0; i < cyl.members.size(); i += 17) sample.push_back(cyl.members[i]);

    for (VertexId x : sample) {
        CHECK(diff(ladder, cyl, x, x) == 0);
        for (VertexId y : sample) {
            const auto dxy = diff(ladder, cyl, x, y);
            CHECK(dxy == -diff(ladder, cyl, y, x));
            CHECK(dxy == brute_diff(ladder, cyl, x, y));
            for (VertexId z : sample)
                CHECK(diff(ladder, cyl, x, z) == dxy + diff(ladder, cyl, y, z));
        }
    }
}

TEST_CASE("order_slices on a parabolic-free cylinder") {
    auto ladder = fixtures::ladder_graph(120);
    auto C = ladder_constants(10);
    auto dec = order_slices(ladder, 0, 119, 2, C, 64'000'000);

    // partition
    std::size_t total = 0;
    for (const auto& s : dec.slices) total += s.members.size();
    CHECK(total == dec.cyl.members.size());
    CHECK(dec.slices.front().members == std::vector<VertexId>{0});
    CHECK(dec.slices.back().members == std::vector<VertexId>{119});

    // interior slices are the difference classes
    for (std::size_t i = 1; i + 1 < dec.slices.size(); ++i) {
        for (VertexId v : dec.slices[i].members)
            for (VertexId w : dec.slices[i].members)
                CHECK(diff(ladder, dec.cyl, v, w) == 0);
        if (i + 2 < dec.slices.size())
            CHECK(diff(ladder, dec.cyl, dec.slices[i].members[0],
                       dec.slices[i + 1].members[0]) != 0);
    }

    // ordering: the difference cocycle decreases along the sequence, and
    // the distance from the first endpoint never moves backwards
    for (std::size_t i = 1; i + 2 < dec.slices.size(); ++i)
        CHECK(diff(ladder, dec.cyl, dec.slices[i].members[0],
                   dec.slices[i + 1].members[0]) < 0);
    std::uint32_t last = 0;
    for (const auto& s : dec.slices) {
        std::uint32_t mn = std::numeric_limits<std::uint32_t>::max();
        for (VertexId v : s.members) mn = std::min(mn, distance(ladder, 0, v));
        CHECK(mn >= last);
        last = std::max(last, mn);
    }

    // metric bounds: same-slice diameter and consecutive-slice distance
    for (std::size_t i = 0; i < dec.slices.size(); ++i) {
        for (VertexId v : dec.slices[i].members) {
            for (VertexId w : dec.slices[i].members)
                CHECK(distance(ladder, v, w) <= 200 * C.delta);
            if (i + 1 < dec.slices.size())
                for (VertexId w : dec.slices[i + 1].members)
                    CHECK(distance(ladder, v, w) <= 1000 * C.delta);
        }
    }
}

TEST_CASE("order_slices around a parabolic vertex") {
    auto sp = flagged_spider();
    auto C = ConstantSet::exploratory(1, 2, 1, 2, 5, 1);
    auto dec = order_slices(sp, 2, 4, 1, C, 100000);
    REQUIRE(dec.slices.size() == 5);
    CHECK(dec.slices[0].members == std::vector<VertexId>{2});
    CHECK(dec.slices[1].members == std::vector<VertexId>{1});
    CHECK(dec.slices[1].kind == SliceKind::parabolic);
    CHECK(dec.slices[2].members == std::vector<VertexId>{0});
    CHECK(dec.slices[2].kind == SliceKind::parabolic);
    CHECK(dec.slices[3].members == std::vector<VertexId>{3});
    CHECK(dec.slices[3].kind == SliceKind::parabolic);
    CHECK(dec.slices[4].members == std::vector<VertexId>{4});

    // adjacent endpoints
    auto tiny = order_slices(sp, 0, 1, 1, C, 100000);
    REQUIRE(tiny.slices.size() == 2);
    CHECK(tiny.slices[0].members == std::vector<VertexId>{0});
    CHECK(tiny.slices[1].members == std::vector<VertexId>{1});
}

TEST_CASE("cylinder members stay 2*delta-close to every geodesic") {
    for (const auto& g : {fixtures::cycle_graph(6), fixtures::ladder_graph(5)}) {
        const auto st = stability_constant(g, Rational(2), 4000, 0, 4'000'000);
        auto C = ConstantSet::exploratory(
            std::max<std::int64_t>(1, hyperbolicity_delta(g).delta_raw), 2,
            std::max<std::int64_t>(1, st.N_emp), 2, 10, 2);
        for (VertexId x : g.vertex_ids()) {
            for (VertexId y : g.vertex_ids()) {
                if (x >= y || distance(g, x, y) > 3) continue;
                auto cyl = cylinder(g, x, y, 2, C, 4'000'000);
                REQUIRE(cyl.complete);
                for (const auto& geod : all_geodesics(g, x, y, 64).paths) {
                    for (VertexId v : cyl.members) {
                        std::uint32_t best = kUnreachable;
                        for (VertexId w : geod.vertices)
                            best = std::min(best, distance(g, v, w));
                        CHECK(static_cast<std::int64_t>(best) <= 2 * C.delta);
                    }
                }
            }
        }
    }
}

TEST_CASE("triangle decomposition on shifted segments") {
    // path with shifts +5, +5, -10: a collinear triangle
    const std::size_t n = 40;
    std::vector<VertexId> vs;
    std::vector<std::pair<VertexId, VertexId>> es;
    for (std::size_t i = 0; i < n; ++i) vs.push_back(static_cast<VertexId>(i));
    for (std::size_t i = 0; i + 1 < n; ++i)
        es.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(i + 1));
    VertexMap a(n), b(n), c(n);
    for (std::size_t i = 0; i + 5 < n; ++i) a[i] = static_cast<VertexId>(i + 5);
    for (std::size_t i = 0; i + 5 < n; ++i) b[i] = static_cast<VertexId>(i + 5);
    for (std::size_t i = 10; i < n; ++i) c[i] = static_cast<VertexId>(i - 10);
    FineGraph g(vs, es, {}, {{"a", a}, {"b", b}, {"c", c}});

    auto C = ConstantSet::exploratory(1, 2, 1, 2, 10, 2);
    auto td = triangle_slices(g, 15, "a", "b", "c", 2, C, 4'000'000);
    CHECK(td.x == 15);
    CHECK(td.y == 20);
    CHECK(td.z == 25);
    CHECK(td.hard_failures.empty());
    // collinear: the y-z side is fully shared with the tail of x-z
    CHECK(td.shared_v == td.yz.slices.size());
    CHECK(td.hole_yz.size() == 0);
    CHECK(td.locality == Verdict::pass);

    // digon: alpha against its inverse gives identical decompositions
    auto dd = triangle_slices(g, 15, "a", "a^-1", "", 2, C, 4'000'000);
    CHECK(dd.z == 15);
    CHECK(dd.hole_xy.size() == 0);
    CHECK(dd.hole_xz.size() == 0);
    CHECK(dd.hole_yz.size() == 0);
    CHECK(dd.xz.slices.size() == 1);  // degenerate corner
}

TEST_CASE("large geodesic angles imply parabolic slices under locked constants") {
    // spider with a flagged hub: destination pairs whose geodesics carry an
    // infinite interior angle
    auto sp = flagged_spider();
    auto C = ConstantSet::paper_faithful(0, 1, 0, 0, 8, 1);
    auto cyl = cylinder(sp, 2, 4, 1, C, 1'000'000);
    REQUIRE(cyl.complete);
    auto paras = parabolic_slices(sp, cyl, C.theta);
    std::set<VertexId> para_set;
    for (const auto& s : paras) para_set.insert(s.members[0]);
    for (const auto& geod : all_geodesics(sp, 2, 4, 64).paths) {
        for (std::size_t i = 1; i + 1 < geod.vertices.size(); ++i) {
            const Angle ang = path_angle_at(sp, geod, i);
            if (ang.ge(2 * C.theta)) CHECK(para_set.count(geod.vertices[i]) == 1);
        }
    }
    // and each parabolic slice lies on every enumerated geodesic with a
    // large angle there
    const std::int64_t drop = 20 * C.stability_D;
    for (const auto& s : paras) {
        for (const auto& geod : all_geodesics(sp, 2, 4, 64).paths) {
            bool found = false;
            for (std::size_t i = 1; i + 1 < geod.vertices.size(); ++i) {
                if (geod.vertices[i] != s.members[0]) continue;
                found = true;
                if (s.angle.is_infinite()) CHECK(path_angle_at(sp, geod, i).is_infinite());
                else CHECK(path_angle_at(sp, geod, i).ge(
                        static_cast<std::int64_t>(s.angle.finite_value()) - drop));
            }
            CHECK(found);
        }
    }
}

TEST_CASE("angles at the cylinder endpoint stay bounded") {
    // paths: the unique geodesic arrives along one edge, angle zero
    {
        auto g = fixtures::path_graph(12);
        auto C = ConstantSet::paper_faithful(0, 1, 0, 0, 8, 1);
        auto cyl = cylinder(g, 0, 11, 1, C, 64'000'000);
        REQUIRE(cyl.complete);
        auto to_b = all_geodesics(g, 0, 11, 64);
        for (VertexId x : cyl.members) {
            if (x == 11) continue;
            Angle best = Angle::infinity();
            for (const auto& gb : all_geodesics(g, x, 11, 64).paths) {
                if (gb.length() == 0) continue;
                const VertexId w1 = gb.vertices[gb.vertices.size() - 2];
                for (const auto& ab : to_b.paths) {
                    const VertexId w2 = ab.vertices[ab.vertices.size() - 2];
                    best = std::min(best, edge_angle(g, 11, {11, w1}, {11, w2}));
                }
            }
            CHECK(best.le(14 * C.stability_D));
        }
    }
    // ladders under measured locked constants
    {
        auto g = fixtures::ladder_graph(6);
        const auto hyp = hyperbolicity_delta(g);
        const auto st = stability_constant(
            g, Rational(1000 * std::max<std::int64_t>(2, hyp.delta_raw)), 100000, 0,
            64'000'000);
        auto C = ConstantSet::paper_faithful(hyp.delta_raw,
                                             std::max<std::int64_t>(1, st.N_emp),
                                             rho_constant(g).rho, st.D_emp, 8, 1);
        auto cyl = cylinder(g, 0, 11, 1, C, 64'000'000);
        REQUIRE(cyl.complete);
        auto to_b = all_geodesics(g, 0, 11, 64);
        for (VertexId x : cyl.members) {
            if (x == 11) continue;
            Angle best = Angle::infinity();
            for (const auto& gb : all_geodesics(g, x, 11, 64).paths) {
                if (gb.length() == 0) continue;
                const VertexId w1 = gb.vertices[gb.vertices.size() - 2];
                for (const auto& ab : to_b.paths) {
                    const VertexId w2 = ab.vertices[ab.vertices.size() - 2];
                    best = std::min(best, edge_angle(g, 11, {11, w1}, {11, w2}));
                }
            }
            CHECK(best.le(14 * C.stability_D));
        }
    }
}
