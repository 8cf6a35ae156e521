#include <doctest.h>

#include <set>

#include "coarsecyl/json_io.hpp"
#include "coarsecyl/lamination.hpp"
#include "oracles.hpp"

using namespace coarsecyl;

namespace {

SliceDecomposition fake_decomposition(const std::vector<SliceKind>& interior_kinds) {
    // a synthetic decomposition along a path graph large enough to host it
    SliceDecomposition dec;
    const std::size_t n = interior_kinds.size() + 2;
    dec.cyl.x = 0;
    dec.cyl.y = static_cast<VertexId>(n - 1);
    Slice first;
    first.members = {0};
    dec.slices.push_back(first);
    for (std::size_t i = 0; i < interior_kinds.size(); ++i) {
        Slice s;
        s.kind = interior_kinds[i];
        s.members = {static_cast<VertexId>(i + 1)};
        if (s.kind == SliceKind::parabolic) s.angle = Angle::infinity();
        dec.slices.push_back(s);
    }
    Slice last;
    last.members = {static_cast<VertexId>(n - 1)};
    dec.slices.push_back(last);
    for (std::size_t i = 0; i < dec.slices.size(); ++i)
        dec.position.emplace(dec.slices[i].members[0], i);
    return dec;
}

}  // namespace

TEST_CASE("markings automaton") {
    using K = SliceKind;
    auto none = markings_for_edge(fake_decomposition({}));
    CHECK(none.empty());

    auto regular3 = markings_for_edge(fake_decomposition({K::regular, K::regular, K::regular}));
    REQUIRE(regular3.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(regular3[k].index == k + 1);
        CHECK(regular3[k].slice == k + 1);
        CHECK(regular3[k].position == Rational(static_cast<std::int64_t>(k) + 1, 4));
    }

    auto para1 = markings_for_edge(fake_decomposition({K::parabolic}));
    REQUIRE(para1.size() == 2);
    CHECK(para1[0].slice == 1);
    CHECK(para1[1].slice == 1);

    auto mixed = markings_for_edge(
        fake_decomposition({K::regular, K::parabolic, K::regular}));
    REQUIRE(mixed.size() == 4);
    CHECK(mixed[0].slice == 1);
    CHECK(mixed[1].slice == 2);
    CHECK(mixed[2].slice == 2);
    CHECK(mixed[3].slice == 3);
}

namespace {

SidePlacement fake_side(std::vector<std::vector<VertexId>> positioned,
                        std::vector<SliceKind> kinds) {
    SidePlacement sp;
    sp.marking_count = positioned.size();
    sp.positioned = std::move(positioned);
    sp.kind = std::move(kinds);
    for (std::size_t q = 0; q < sp.marking_count; ++q) sp.edge_marking.push_back(q);
    sp.in_hole.assign(sp.marking_count, 0);
    return sp;
}

}  // namespace

TEST_CASE("face lamination cases") {
    using K = SliceKind;
    // full-coincidence digon: two regular slices matched pairwise;
    // the second side traverses its loop backwards
    FaceAlignment digon;
    digon.sides.push_back(fake_side({{1}, {2}}, {K::regular, K::regular}));
    digon.sides.push_back(fake_side({{2}, {1}}, {K::regular, K::regular}));
    auto lam = face_lamination(digon);
    CHECK(lam.regular.size() == 2);
    CHECK(!lam.has_singular_point);

    // parabolic slice shared by two sides: the nested two-arc pattern
    FaceAlignment para;
    para.sides.push_back(fake_side({{7}, {7}}, {K::parabolic, K::parabolic}));
    para.sides.push_back(fake_side({{7}, {7}}, {K::parabolic, K::parabolic}));
    auto plam = face_lamination(para);
    CHECK(plam.regular.size() == 2);
    CHECK(!plam.has_singular_point);

    // hole: a slice matched nowhere turns singular
    FaceAlignment holed;
    holed.sides.push_back(fake_side({{1}, {9}, {2}}, {K::regular, K::regular, K::regular}));
    holed.sides.push_back(fake_side({{2}, {1}}, {K::regular, K::regular}));
    auto hlam = face_lamination(holed);
    CHECK(hlam.regular.size() == 2);
    CHECK(hlam.has_singular_point);
    REQUIRE(hlam.singular.size() == 1);
    CHECK(hlam.singular[0] == std::pair<std::size_t, std::size_t>{0, 1});

    // crossing chords are a hard error: same traversal order on both sides
    FaceAlignment crossed;
    crossed.sides.push_back(fake_side({{1}, {2}}, {K::regular, K::regular}));
    crossed.sides.push_back(fake_side({{1}, {2}}, {K::regular, K::regular}));
    CHECK_THROWS_AS(face_lamination(crossed), ModelError);
}

TEST_CASE("type classification on synthetic one-edge complexes") {
    // one digon face whose both sides traverse the same loop; a single
    // path edge between the two copies of one gap
    auto build = [](bool same_sign) {
        VanKampenComplex P;
        P.generator_count = 1;
        P.faces.push_back({{1, same_sign ? 1 : -1}});
        LaminationGraph KG;
        KG.gap_vertices = {{0, 0}, {0, 1}};
        KEdge e;
        e.face = 0;
        e.region = 0;
        e.a = {0, 0};
        e.b = {0, 0};
        e.a_side = 0;
        e.b_side = 1;
        KG.edges.push_back(e);
        KG.edge_component = {0};
        KG.component_pruned = {0};
        KG.gap_in_hole = {0, 0};
        KG.component_count = 1;
        return std::make_pair(P, KG);
    };

    // orientation-reversing identification: one side class
    auto [Pflip, Kflip] = build(true);
    auto flip = classify_components(Pflip, Kflip);
    REQUIRE(flip.size() == 1);
    CHECK(flip.at(0) == ComponentType::type_II);

    // annular identification: two side classes
    auto [Pann, Kann] = build(false);
    auto ann = classify_components(Pann, Kann);
    REQUIRE(ann.size() == 1);
    CHECK(ann.at(0) == ComponentType::type_I);

    // three face sides on one edge: not a surface
    VanKampenComplex bad;
    bad.generator_count = 1;
    bad.faces.push_back({{1, 1}});
    bad.faces.push_back({{1, -1}});
    CHECK_THROWS_AS(classify_components(bad, Kflip), ModelError);
}

TEST_CASE("full pipeline: adjacent-image digon gives the trivial splitting") {
    auto gpres = Presentation::parse("gens: a b; rels: aB");
    auto tri = triangularize(gpres);
    auto zpres = Presentation::parse("gens: a");
    auto model = cayley_ball(zpres, 6);
    auto C = ConstantSet::exploratory(1, 2, 1, 2, 5, 1);
    std::vector<Word> morphism{{1}, {1}};  // both generators to the shift

    auto lam = compute_lamination(model, tri, morphism, 1, C, 1'000'000);
    CHECK(lam.edge_markings[0].empty());  // adjacent endpoints: no interior
    CHECK(lam.edge_markings[1].empty());
    CHECK(lam.K.edges.empty());
    CHECK(lam.K.k_prime_empty());
    CHECK(lam.skeleton.trivial());
    CHECK(lam.skeleton.vertices.size() == 1);
    CHECK(lam.skeleton.vertices[0].contains_singular == false);
}

TEST_CASE("full pipeline: distance-3 digon") {
    auto gpres = Presentation::parse("gens: a b; rels: aB");
    auto tri = triangularize(gpres);
    auto zpres = Presentation::parse("gens: a");
    auto model = cayley_ball(zpres, 8);
    auto C = ConstantSet::exploratory(1, 2, 1, 2, 5, 1);
    std::vector<Word> morphism{{1, 1, 1}, {1, 1, 1}};

    auto lam = compute_lamination(model, tri, morphism, 1, C, 4'000'000);
    // two interior parabolic slices per edge: four markings, three gaps
    REQUIRE(lam.edge_markings[0].size() == 4);
    REQUIRE(lam.edge_markings[1].size() == 4);
    CHECK(lam.K.gap_vertices.size() == 6);

    // the rainbow matching: four regular arcs, no singular point
    CHECK(lam.laminations[0].regular.size() == 4);
    CHECK(!lam.laminations[0].has_singular_point);

    // three rungs of K, all surviving, all two-sided
    CHECK(lam.K.edges.size() == 3);
    CHECK(lam.K.component_count == 3);
    for (char pruned : lam.K.component_pruned) CHECK(!pruned);
    REQUIRE(lam.component_types.size() == 3);
    for (const auto& [comp, type] : lam.component_types)
        CHECK(type == ComponentType::type_I);

    // the skeleton is a cycle of three pieces
    CHECK(lam.skeleton.vertices.size() == 3);
    CHECK(lam.skeleton.edges.size() == 3);
    for (const auto& v : lam.skeleton.vertices) CHECK(!v.contains_singular);

    // pruning soundness: nothing pruned, nothing in a hole
    for (char in_hole : lam.K.gap_in_hole) CHECK(!in_hole);

    // serialization smoke
    auto json = skeleton_to_json(lam.skeleton, lam);
    CHECK(json.find("\"k_components\": 3") != std::string::npos);
}

TEST_CASE("marking multiplicity invariant on pipeline output") {
    auto gpres = Presentation::parse("gens: a b; rels: aB");
    auto tri = triangularize(gpres);
    auto model = cayley_ball(Presentation::parse("gens: a"), 8);
    auto C = ConstantSet::exploratory(1, 2, 1, 2, 5, 1);
    auto lam = compute_lamination(model, tri, {{1, 1, 1}, {1, 1, 1}}, 1, C, 4'000'000);

    for (std::size_t g = 0; g < 2; ++g) {
        std::map<std::size_t, std::size_t> per_slice;
        for (const auto& m : lam.edge_markings[g]) ++per_slice[m.slice];
        for (const auto& [slice, count] : per_slice) {
            const auto kind = lam.edge_decompositions[g].slices[slice].kind;
            CHECK(count == (kind == SliceKind::parabolic ? 2u : 1u));
        }
    }
}

TEST_CASE("full pipeline: tripod median shared three ways") {
    // free-group model; the median of the triangle's corners is interior to
    // all three sides, so its slice matches across all of them and the
    // three-arc pattern fires, together with a two-sided share
    auto gpres = Presentation::parse("gens: a b c; rels: abc");
    auto tri = triangularize(gpres);
    auto model = cayley_ball(Presentation::parse("gens: x y"), 5);
    auto C = ConstantSet::exploratory(1, 2, 1, 2, 5, 1);
    // a -> xy, b -> y^-1 x y, c -> y^-1 x^-2; corners e, xy, x^2 y
    std::vector<Word> morphism{{1, 2}, {-2, 1, 2}, {-2, -1, -1}};
    auto lam = compute_lamination(model, tri, morphism, 1, C, 64'000'000);

    REQUIRE(lam.edge_markings[0].size() == 2);  // one parabolic interior slice
    REQUIRE(lam.edge_markings[1].size() == 4);
    REQUIRE(lam.edge_markings[2].size() == 4);

    REQUIRE(lam.laminations.size() == 1);
    const auto& fl = lam.laminations[0];
    CHECK(fl.regular.size() == 5);  // 3 arcs for the median, 2 for the pair
    CHECK(!fl.has_singular_point);

    // every component of K survives and is two-sided (all three polyhedron
    // edges are free boundary edges here)
    for (char pruned : lam.K.component_pruned) CHECK(!pruned);
    for (const auto& [comp, type] : lam.component_types)
        CHECK(type == ComponentType::type_I);
    for (const auto& v : lam.skeleton.vertices) CHECK(!v.contains_singular);
}

TEST_CASE("pipeline on a cyclic model: disjoint slices go singular") {
    // on the 6-cycle the three sides of the triangle (p, t^2 p, t^4 p) have
    // pairwise different interior vertices, so every marking is unmatched
    auto gpres = Presentation::parse("gens: a b c; rels: abc");
    auto tri = triangularize(gpres);
    auto model = cayley_ball(Presentation::parse("gens: t; rels: tttttt"), 3);
    const auto rho = rho_constant(model.graph).rho;
    auto C = ConstantSet::exploratory(1, 2, 4, 2, rho + 1, 1);
    std::vector<Word> morphism{{1, 1}, {1, 1}, {1, 1}};
    auto lam = compute_lamination(model, tri, morphism, 1, C, 64'000'000);

    for (std::size_t g = 0; g < 3; ++g) REQUIRE(lam.edge_markings[g].size() == 1);
    const auto& fl = lam.laminations[0];
    CHECK(fl.regular.empty());
    CHECK(fl.has_singular_point);
    CHECK(fl.singular.size() == 3);
    CHECK(lam.K.gap_vertices.empty());  // one marking per edge: no gaps
    CHECK(lam.skeleton.trivial());
    REQUIRE(lam.skeleton.vertices.size() == 1);
    CHECK(lam.skeleton.vertices[0].contains_singular);
}

TEST_CASE("full pipeline on a coned model: cone slices match under translation") {
    // all three generator images run along the same peripheral coset, so
    // every side's interior slice is the same cone vertex after translation
    auto gpres = Presentation::parse("gens: a b c; rels: abc");
    auto tri = triangularize(gpres);
    auto zpres = Presentation::parse("gens: x y; peripherals: [x]");
    auto model = coned_off(cayley_ball(zpres, 6), zpres.peripherals);
    // theta at most the smallest peripheral distance, so the cone slice is
    // classified the same way in all three cylinders
    auto C = ConstantSet::exploratory(1, 2, 1, 2, 3, 1);
    std::vector<Word> morphism{{1, 1, 1}, {1, 1, 1}, {-1, -1, -1, -1, -1, -1}};
    auto lam = compute_lamination(model, tri, morphism, 1, C, 64'000'000);

    // each edge decomposition is (endpoint, cone vertex, endpoint)
    for (std::size_t g = 0; g < 3; ++g) {
        REQUIRE(lam.edge_decompositions[g].slices.size() == 3);
        const auto& mid = lam.edge_decompositions[g].slices[1];
        CHECK(mid.kind == SliceKind::parabolic);
        CHECK(model.graph.is_parabolic(mid.members[0]));
        REQUIRE(lam.edge_markings[g].size() == 2);
    }
    // the shared cone gives the three-arc pattern, fully matched
    REQUIRE(lam.laminations.size() == 1);
    CHECK(lam.laminations[0].regular.size() == 3);
    CHECK(!lam.laminations[0].has_singular_point);
    // one gap per edge, all joined by one region path
    CHECK(lam.K.gap_vertices.size() == 3);
    CHECK(lam.K.edges.size() == 2);
    CHECK(lam.K.component_count == 1);
    for (const auto& [comp, type] : lam.component_types)
        CHECK(type == ComponentType::type_I);
}

TEST_CASE("inconsistent slice kinds across cylinders are refused") {
    // with theta between the two peripheral distances the cone vertex is
    // regular in the short cylinders but parabolic in the long one; no
    // dual graph with vertices between consecutive markings can then
    // separate the leaves, and the construction says so
    auto gpres = Presentation::parse("gens: a b c; rels: abc");
    auto tri = triangularize(gpres);
    auto zpres = Presentation::parse("gens: x y; peripherals: [x]");
    auto model = coned_off(cayley_ball(zpres, 6), zpres.peripherals);
    auto C = ConstantSet::exploratory(1, 2, 1, 2, 6, 1);
    std::vector<Word> morphism{{1, 1, 1}, {1, 1, 1}, {-1, -1, -1, -1, -1, -1}};
    CHECK_THROWS_AS(compute_lamination(model, tri, morphism, 1, C, 64'000'000),
                    ModelError);
}
