#include "coarsecyl/lamination.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace coarsecyl {

VanKampenComplex VanKampenComplex::from_presentation(const Presentation& p) {
    VanKampenComplex P;
    P.generator_count = p.generators.size();
    for (const Word& r : p.relators) {
        if (r.size() < 2 || r.size() > 3)
            throw ModelError("faces need boundary words of length 2 or 3");
        for (int l : r)
            if (l == 0)
                throw ModelError("identity-padded relators cannot be laminated");
        P.faces.push_back({r});
    }
    return P;
}

std::vector<Marking> markings_for_edge(const SliceDecomposition& dec) {
    std::vector<Marking> out;
    if (dec.slices.size() < 3) return out;  // no interior slices
    std::size_t count = 0;
    for (std::size_t i = 1; i + 1 < dec.slices.size(); ++i)
        count += dec.slices[i].kind == SliceKind::parabolic ? 2 : 1;
    std::size_t k = 1;
    for (std::size_t i = 1; i + 1 < dec.slices.size(); ++i) {
        const std::size_t copies = dec.slices[i].kind == SliceKind::parabolic ? 2 : 1;
        for (std::size_t c = 0; c < copies; ++c) {
            Marking m;
            m.index = k;
            m.position = Rational(static_cast<std::int64_t>(k),
                                  static_cast<std::int64_t>(count) + 1);
            m.slice = i;
            out.push_back(m);
            ++k;
        }
    }
    return out;
}

namespace {

bool positioned_equal(const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
    return a == b;
}

// Linearized cyclic coordinate of a marking inside a face.
std::size_t global_pos(const FaceAlignment& fa, std::size_t side, std::size_t pos) {
    std::size_t base = 0;
    for (std::size_t s = 0; s < side; ++s) base += fa.sides[s].marking_count;
    return base + pos;
}

}  // namespace

FaceLamination face_lamination(const FaceAlignment& fa) {
    FaceLamination out;
    const std::size_t nsides = fa.sides.size();
    std::vector<std::vector<char>> matched(nsides);
    for (std::size_t s = 0; s < nsides; ++s)
        matched[s].assign(fa.sides[s].marking_count, 0);

    // Regular slices: group markings by positioned set, pairwise arcs.
    {
        std::map<std::vector<VertexId>, std::vector<std::pair<std::size_t, std::size_t>>> by_set;
        for (std::size_t s = 0; s < nsides; ++s)
            for (std::size_t q = 0; q < fa.sides[s].marking_count; ++q)
                if (fa.sides[s].kind[q] == SliceKind::regular)
                    by_set[fa.sides[s].positioned[q]].push_back({s, q});
        for (const auto& [set, occs] : by_set) {
            for (std::size_t i = 0; i < occs.size(); ++i)
                for (std::size_t j = i + 1; j < occs.size(); ++j) {
                    if (occs[i].first == occs[j].first) continue;  // same side: no arc
                    out.regular.push_back(
                        {occs[i].first, occs[i].second, occs[j].first, occs[j].second});
                    matched[occs[i].first][occs[i].second] = 1;
                    matched[occs[j].first][occs[j].second] = 1;
                }
        }
    }

    // Parabolic slices: consecutive marking pairs, matched by positioned set.
    {
        std::map<std::vector<VertexId>, std::vector<std::pair<std::size_t, std::size_t>>> pairs;
        for (std::size_t s = 0; s < nsides; ++s) {
            const auto& side = fa.sides[s];
            for (std::size_t q = 0; q + 1 < side.marking_count; ++q) {
                if (side.kind[q] != SliceKind::parabolic) continue;
                if (side.kind[q + 1] != SliceKind::parabolic) continue;
                if (!positioned_equal(side.positioned[q], side.positioned[q + 1])) continue;
                pairs[side.positioned[q]].push_back({s, q});
                ++q;  // consume the pair
            }
        }
        for (const auto& [set, occs] : pairs) {
            if (occs.size() == 2) {
                auto [s, q] = occs[0];
                auto [s2, q2] = occs[1];
                out.regular.push_back({s, q, s2, q2 + 1});
                out.regular.push_back({s, q + 1, s2, q2});
                matched[s][q] = matched[s][q + 1] = 1;
                matched[s2][q2] = matched[s2][q2 + 1] = 1;
            } else if (occs.size() == 3) {
                auto [s, q] = occs[0];
                auto [s2, q2] = occs[1];
                auto [s3, q3] = occs[2];
                out.regular.push_back({s, q, s3, q3 + 1});
                out.regular.push_back({s, q + 1, s2, q2});
                out.regular.push_back({s2, q2 + 1, s3, q3});
                matched[s][q] = matched[s][q + 1] = 1;
                matched[s2][q2] = matched[s2][q2 + 1] = 1;
                matched[s3][q3] = matched[s3][q3 + 1] = 1;
            }
            // a single occurrence lies in a hole: no arcs
        }
    }

    // Non-crossing verification of the regular chord diagram.
    for (std::size_t i = 0; i < out.regular.size(); ++i) {
        for (std::size_t j = i + 1; j < out.regular.size(); ++j) {
            const auto& A = out.regular[i];
            const auto& B = out.regular[j];
            std::size_t a1 = global_pos(fa, A.side1, A.pos1);
            std::size_t a2 = global_pos(fa, A.side2, A.pos2);
            std::size_t b1 = global_pos(fa, B.side1, B.pos1);
            std::size_t b2 = global_pos(fa, B.side2, B.pos2);
            if (a1 > a2) std::swap(a1, a2);
            if (b1 > b2) std::swap(b1, b2);
            if (a1 == b1 || a1 == b2 || a2 == b1 || a2 == b2) continue;  // shared endpoint
            const bool b1_in = a1 < b1 && b1 < a2;
            const bool b2_in = a1 < b2 && b2 < a2;
            if (b1_in != b2_in)
                throw ModelError("crossing regular arcs in a face lamination");
        }
    }

    // Leftover markings: all must share a complementary region of the
    // regular system; they are joined to a fresh singular point.
    std::vector<std::pair<std::size_t, std::size_t>> leftovers;
    for (std::size_t s = 0; s < nsides; ++s)
        for (std::size_t q = 0; q < fa.sides[s].marking_count; ++q)
            if (!matched[s][q]) leftovers.push_back({s, q});
    if (!leftovers.empty()) {
        std::set<std::set<std::size_t>> regions;
        for (auto [s, q] : leftovers) {
            const std::size_t x = global_pos(fa, s, q);
            std::set<std::size_t> covering;
            for (std::size_t i = 0; i < out.regular.size(); ++i) {
                std::size_t a1 = global_pos(fa, out.regular[i].side1, out.regular[i].pos1);
                std::size_t a2 = global_pos(fa, out.regular[i].side2, out.regular[i].pos2);
                if (a1 > a2) std::swap(a1, a2);
                if (a1 < x && x < a2) covering.insert(i);
            }
            regions.insert(covering);
        }
        if (regions.size() != 1)
            throw ModelError("leftover markings are separated by regular arcs");
        out.has_singular_point = true;
        out.singular = leftovers;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Per-face planar structure: boundary slots, chords, face tracing, regions,
// cells, and the dual path edges.

namespace {

struct Slot {
    enum class Kind : std::uint8_t { corner, marking, gap } kind;
    std::size_t side = 0;
    std::size_t pos = 0;  // marking/gap ordinal along the side traversal
};

struct FaceStructure {
    std::vector<Slot> slots;                    // boundary cycle
    std::size_t pt_node = 0;                    // node id of p_T (== slots.size()) if present
    bool has_pt = false;
    // chords: arc index -> (node, node); regular arcs first, then singular
    std::vector<std::pair<std::size_t, std::size_t>> chords;
    std::size_t regular_count = 0;

    // tracing results
    std::size_t region_count = 0;
    std::vector<std::vector<std::size_t>> region_slots;        // walk order, slot ids
    std::vector<std::vector<std::size_t>> region_gap_slots;    // walk order, gap slot ids
    std::vector<std::pair<std::size_t, std::size_t>> chord_region[2];  // per dart: (region, walk pos)
    std::vector<std::size_t> slot_region;                      // boundary slot -> region
    std::vector<std::size_t> slot_walkpos;                     // boundary slot -> walk position
    std::vector<std::size_t> segment_region;                   // boundary segment i (slot i -> i+1)
    std::vector<std::size_t> segment_walkpos;                  // boundary segment -> walk position
};

// next(d) = predecessor of reverse(d) in the counterclockwise rotation at
// the head of d; interior faces come out with the boundary forward.
struct Dart {
    bool chord;
    std::size_t index;  // segment index or chord index
    bool forward;       // boundary: slot i -> i+1; chord: first -> second
};

FaceStructure trace_face(const FaceAlignment& fa, const FaceLamination& lam) {
    FaceStructure fs;
    const std::size_t nsides = fa.sides.size();
    std::vector<std::vector<std::size_t>> marking_slot(nsides);
    for (std::size_t s = 0; s < nsides; ++s) {
        fs.slots.push_back({Slot::Kind::corner, s, 0});
        marking_slot[s].resize(fa.sides[s].marking_count);
        for (std::size_t q = 0; q < fa.sides[s].marking_count; ++q) {
            marking_slot[s][q] = fs.slots.size();
            fs.slots.push_back({Slot::Kind::marking, s, q});
            if (q + 1 < fa.sides[s].marking_count)
                fs.slots.push_back({Slot::Kind::gap, s, q});
        }
    }
    const std::size_t B = fs.slots.size();
    fs.pt_node = B;
    fs.has_pt = lam.has_singular_point;

    for (const auto& arc : lam.regular)
        fs.chords.push_back({marking_slot[arc.side1][arc.pos1],
                             marking_slot[arc.side2][arc.pos2]});
    fs.regular_count = fs.chords.size();
    for (auto [s, q] : lam.singular) fs.chords.push_back({marking_slot[s][q], fs.pt_node});

    const std::size_t node_count = B + (fs.has_pt ? 1 : 0);

    // rotations: cyclic dart lists per node
    auto forward_dist = [&](std::size_t from, std::size_t to) {
        return (to + B - from) % B;
    };
    std::vector<std::vector<Dart>> rot(node_count);
    for (std::size_t v = 0; v < B; ++v) {
        std::vector<std::pair<std::size_t, std::size_t>> fan;  // (distance, chord idx)
        for (std::size_t c = 0; c < fs.chords.size(); ++c) {
            const auto [u, w] = fs.chords[c];
            if (u == v && w < B) fan.push_back({forward_dist(v, w), c});
            else if (w == v && u < B) fan.push_back({forward_dist(v, u), c});
            else if (u == v && w == fs.pt_node) fan.push_back({0, c});  // placed first below
        }
        // chords to p_T: order them among the others by p_T's region; a
        // single singular star per face keeps this simple: p_T chords sit
        // between the boundary directions like any chord whose far end is
        // inside. Order them by the average position of the star, i.e.
        // treat the chord as pointing at the median leftover marking.
        // a marking is either matched (regular chords only) or joined to the
        // singular point by its single chord, so ordering within the fan
        // never mixes the two kinds
        std::sort(fan.begin(), fan.end());
        auto& r = rot[v];
        r.push_back({false, v, true});  // to next
        for (auto [dist, c] : fan)
            r.push_back({true, c, fs.chords[c].first == v});
        r.push_back({false, (v + B - 1) % B, false});  // to prev
    }
    if (fs.has_pt) {
        std::vector<std::pair<std::size_t, std::size_t>> fan;
        for (std::size_t c = fs.regular_count; c < fs.chords.size(); ++c)
            fan.push_back({fs.chords[c].first, c});
        std::sort(fan.begin(), fan.end());
        for (auto [pos, c] : fan) rot[fs.pt_node].push_back({true, c, false});
    }

    auto head = [&](const Dart& d) -> std::size_t {
        if (!d.chord) return d.forward ? (d.index + 1) % B : d.index;
        return d.forward ? fs.chords[d.index].second : fs.chords[d.index].first;
    };
    auto same = [](const Dart& a, const Dart& b) {
        return a.chord == b.chord && a.index == b.index && a.forward == b.forward;
    };
    auto next_dart = [&](const Dart& d) -> Dart {
        const std::size_t v = head(d);
        const Dart rev{d.chord, d.index, !d.forward};
        const auto& r = rot[v];
        for (std::size_t i = 0; i < r.size(); ++i)
            if (same(r[i], rev)) return r[(i + r.size() - 1) % r.size()];
        throw Error("dart missing from its rotation");
    };

    // enumerate all darts, trace orbits
    std::vector<Dart> all;
    for (std::size_t i = 0; i < B; ++i) {
        all.push_back({false, i, true});
        all.push_back({false, i, false});
    }
    for (std::size_t c = 0; c < fs.chords.size(); ++c) {
        all.push_back({true, c, true});
        all.push_back({true, c, false});
    }
    auto key = [&](const Dart& d) {
        return (d.chord ? fs.chords.size() * 0 + 2 * B : 0) + 2 * d.index + (d.forward ? 0 : 1);
    };
    std::vector<int> orbit_of(2 * B + 2 * fs.chords.size(), -1);
    std::vector<std::vector<Dart>> orbits;
    for (const Dart& d0 : all) {
        if (orbit_of[key(d0)] >= 0) continue;
        const int id = static_cast<int>(orbits.size());
        std::vector<Dart> walk;
        Dart d = d0;
        while (orbit_of[key(d)] < 0) {
            orbit_of[key(d)] = id;
            walk.push_back(d);
            d = next_dart(d);
        }
        orbits.push_back(std::move(walk));
    }

    // outer orbit: only boundary darts, all backward
    int outer = -1;
    for (std::size_t i = 0; i < orbits.size(); ++i) {
        bool all_back = true;
        for (const Dart& d : orbits[i])
            if (d.chord || d.forward) { all_back = false; break; }
        if (all_back && orbits[i].size() == B) { outer = static_cast<int>(i); break; }
    }
    if (outer < 0) throw Error("outer face not found in the tracing");

    fs.slot_region.assign(B, 0);
    fs.slot_walkpos.assign(B, 0);
    fs.segment_region.assign(B, 0);
    fs.segment_walkpos.assign(B, 0);
    fs.chord_region[0].resize(fs.chords.size());
    fs.chord_region[1].resize(fs.chords.size());
    for (std::size_t i = 0; i < orbits.size(); ++i) {
        if (static_cast<int>(i) == outer) continue;
        const std::size_t rid = fs.region_count++;
        fs.region_slots.emplace_back();
        fs.region_gap_slots.emplace_back();
        for (std::size_t wp = 0; wp < orbits[i].size(); ++wp) {
            const Dart& d = orbits[i][wp];
            if (d.chord) {
                fs.chord_region[d.forward ? 0 : 1][d.index] = {rid, wp};
                continue;
            }
            fs.segment_region[d.index] = rid;
            fs.segment_walkpos[d.index] = wp;
            // record the slot the dart leaves from (tail); each boundary
            // slot is left exactly once within interior orbits
            const std::size_t tail = d.forward ? d.index : (d.index + 1) % B;
            fs.slot_region[tail] = rid;
            fs.slot_walkpos[tail] = wp;
            fs.region_slots[rid].push_back(tail);
            if (fs.slots[tail].kind == Slot::Kind::gap)
                fs.region_gap_slots[rid].push_back(tail);
        }
    }
    return fs;
}

struct PieceCells {
    // cell ids per region (regions globally indexed across faces): split
    // regions get one cell per gap interval (the last doubles as the far
    // cell on the other side of the path), others a single cell
    std::vector<std::size_t> first_cell;   // per global region
    std::vector<char> split;               // per global region
    std::size_t count = 0;
};

PieceCells build_cells(const std::vector<FaceStructure>& faces,
                       const std::vector<std::vector<char>>& region_split) {
    PieceCells pc;
    std::size_t total_regions = 0;
    for (const auto& fs : faces) total_regions += fs.region_count;
    pc.first_cell.assign(total_regions, 0);
    pc.split.assign(total_regions, 0);
    std::size_t next = 0, rbase = 0, f = 0;
    for (const auto& fs : faces) {
        for (std::size_t r = 0; r < fs.region_count; ++r) {
            pc.first_cell[rbase + r] = next;
            const bool split = region_split[f][r] != 0;
            pc.split[rbase + r] = split;
            next += split ? fs.region_gap_slots[r].size() : 1;
        }
        rbase += fs.region_count;
        ++f;
    }
    pc.count = next;
    return pc;
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

// ---------------------------------------------------------------------------

namespace {

struct SideRef {  // occurrence of an edge by a face side
    std::size_t face, side;
};

// canonical gap vertex list position
std::size_t gap_vertex_index(const std::vector<GapId>& gaps, GapId g) {
    return static_cast<std::size_t>(
        std::lower_bound(gaps.begin(), gaps.end(), g) - gaps.begin());
}

}  // namespace

LaminationResult compute_lamination(const GraphModel& model, const Presentation& tri,
                                    const std::vector<Word>& morphism, std::int64_t l,
                                    const ConstantSet& C, std::size_t budget,
                                    std::size_t geodesic_cap) {
    if (!tri.triangular()) throw PreconditionError("presentation is not triangular");
    if (morphism.size() != tri.generators.size())
        throw PreconditionError("morphism must map every generator");

    LaminationResult R;
    R.complex = VanKampenComplex::from_presentation(tri);

    // Edge cylinders, decompositions, markings.
    const VertexId p = model.basepoint;
    for (std::size_t g = 0; g < tri.generators.size(); ++g) {
        const Word target = model.group->normal_form(morphism[g]);
        auto y = model.vertex_of(target);
        if (!y) throw ModelError("generator image leaves the ball; enlarge the radius");
        R.edge_decompositions.push_back(
            order_slices(model.graph, p, *y, l, C, budget, geodesic_cap));
        R.edge_markings.push_back(markings_for_edge(R.edge_decompositions.back()));
    }

    // Per-face placements and corner-block alignment.
    auto positioned_slice = [&](const Slice& s, const Word& translation)
        -> std::vector<VertexId> {
        std::vector<VertexId> out;
        for (VertexId v : s.members) {
            auto img = model.translate(translation, v);
            if (!img)
                throw ModelError("slice translation leaves the ball; enlarge the radius");
            out.push_back(*img);
        }
        std::sort(out.begin(), out.end());
        return out;
    };

    for (std::size_t f = 0; f < R.complex.faces.size(); ++f) {
        const auto& boundary = R.complex.faces[f].boundary;
        FaceAlignment fa;
        fa.face = f;
        Word tau;  // translation of the side start corner
        for (int letter : boundary) {
            const std::size_t gen = static_cast<std::size_t>(std::abs(letter)) - 1;
            if (gen >= tri.generators.size())
                throw ModelError("face letter outside the generator range");
            SidePlacement sp;
            sp.generator = gen;
            sp.reversed = letter < 0;
            const auto& dec = R.edge_decompositions[gen];
            const auto& marks = R.edge_markings[gen];
            sp.marking_count = marks.size();
            const Word trans = sp.reversed ? concat(tau, invert(morphism[gen])) : tau;
            for (std::size_t q = 0; q < marks.size(); ++q) {
                const std::size_t mk = sp.reversed ? marks.size() - 1 - q : q;
                sp.edge_marking.push_back(mk);
                const auto& slice = dec.slices[marks[mk].slice];
                sp.kind.push_back(slice.kind);
                sp.positioned.push_back(positioned_slice(slice, trans));
            }
            for (std::size_t i = 0; i < dec.slices.size(); ++i) {
                const std::size_t si = sp.reversed ? dec.slices.size() - 1 - i : i;
                sp.sequence.push_back(positioned_slice(dec.slices[si], trans));
            }
            sp.in_hole.assign(marks.size(), 0);
            fa.sides.push_back(std::move(sp));
            tau = concat(tau, letter > 0 ? morphism[gen] : invert(morphism[gen]));
        }

        // corner blocks between consecutive sides
        const std::size_t ns = fa.sides.size();
        std::vector<std::size_t> block(ns, 0);  // block at the corner after side s
        for (std::size_t s = 0; s < ns; ++s) {
            const auto& A = fa.sides[s].sequence;
            const auto& Bv = fa.sides[(s + 1) % ns].sequence;
            std::size_t b = 0;
            while (b < A.size() && b < Bv.size() &&
                   positioned_equal(A[A.size() - 1 - b], Bv[b]))
                ++b;
            block[s] = b;
        }
        for (std::size_t s = 0; s < ns; ++s) {
            auto& side = fa.sides[s];
            const std::size_t pre = block[(s + ns - 1) % ns];  // block at the start corner
            const std::size_t suf = block[s];                  // block at the end corner
            const std::size_t len = side.sequence.size();
            const std::size_t end = len >= suf ? len - suf : 0;
            const std::size_t begin = std::min(pre, end);
            side.hole_range = {begin, end};
            // marking in hole iff its slice's sequence index is in range
            for (std::size_t q = 0; q < side.marking_count; ++q) {
                const auto& dec = R.edge_decompositions[side.generator];
                const std::size_t mk = side.edge_marking[q];
                const std::size_t slice_idx = R.edge_markings[side.generator][mk].slice;
                const std::size_t seq_idx =
                    side.reversed ? dec.slices.size() - 1 - slice_idx : slice_idx;
                if (begin <= seq_idx && seq_idx < end) side.in_hole[q] = 1;
            }
        }
        R.alignments.push_back(std::move(fa));
    }

    for (const auto& fa : R.alignments) R.laminations.push_back(face_lamination(fa));

    // Marking-count consistency across faces sharing an edge is automatic
    // here (all sides read the same edge decomposition); hole flags
    // aggregate per edge marking.
    std::vector<std::vector<char>> marking_in_hole(tri.generators.size());
    for (std::size_t g = 0; g < tri.generators.size(); ++g)
        marking_in_hole[g].assign(R.edge_markings[g].size(), 0);
    for (const auto& fa : R.alignments)
        for (const auto& side : fa.sides)
            for (std::size_t q = 0; q < side.marking_count; ++q)
                if (side.in_hole[q]) marking_in_hole[side.generator][side.edge_marking[q]] = 1;

    // Planar structure per face.
    std::vector<FaceStructure> structures;
    for (std::size_t f = 0; f < R.complex.faces.size(); ++f)
        structures.push_back(trace_face(R.alignments[f], R.laminations[f]));

    // Gap vertices (global) and K edges.
    auto& K = R.K;
    for (std::size_t g = 0; g < tri.generators.size(); ++g)
        for (std::size_t j = 0; j + 1 < R.edge_markings[g].size(); ++j)
            K.gap_vertices.push_back({g, j});
    std::sort(K.gap_vertices.begin(), K.gap_vertices.end());

    K.gap_in_hole.assign(K.gap_vertices.size(), 0);
    for (std::size_t i = 0; i < K.gap_vertices.size(); ++i) {
        const auto [g, j] = K.gap_vertices[i];
        if (marking_in_hole[g][j] || marking_in_hole[g][j + 1]) K.gap_in_hole[i] = 1;
    }

    auto gap_of_slot = [&](const FaceAlignment& fa, const Slot& slot) -> GapId {
        const auto& side = fa.sides[slot.side];
        // gap `pos` sits between traversal markings pos and pos+1
        const std::size_t M = side.marking_count;
        const std::size_t edge_gap = side.reversed ? M - 2 - slot.pos : slot.pos;
        return {side.generator, edge_gap};
    };

    std::size_t region_base = 0;
    std::vector<std::size_t> face_region_base(structures.size(), 0);
    for (std::size_t f = 0; f < structures.size(); ++f) {
        face_region_base[f] = region_base;
        const auto& fs = structures[f];
        for (std::size_t r = 0; r < fs.region_count; ++r) {
            const auto& gaps = fs.region_gap_slots[r];
            for (std::size_t i = 0; i + 1 < gaps.size(); ++i) {
                KEdge e;
                e.face = f;
                e.region = r;
                e.a = gap_of_slot(R.alignments[f], fs.slots[gaps[i]]);
                e.b = gap_of_slot(R.alignments[f], fs.slots[gaps[i + 1]]);
                e.a_side = fs.slots[gaps[i]].side;
                e.b_side = fs.slots[gaps[i + 1]].side;
                K.edges.push_back(e);
            }
        }
        region_base += fs.region_count;
    }

    // K components over gap vertices.
    {
        UnionFind uf(K.gap_vertices.size());
        for (const auto& e : K.edges)
            uf.unite(gap_vertex_index(K.gap_vertices, e.a),
                     gap_vertex_index(K.gap_vertices, e.b));
        std::map<std::size_t, std::size_t> root_to_comp;
        K.edge_component.resize(K.edges.size());
        for (std::size_t i = 0; i < K.edges.size(); ++i) {
            const std::size_t root = uf.find(gap_vertex_index(K.gap_vertices, K.edges[i].a));
            auto [it, fresh] = root_to_comp.emplace(root, root_to_comp.size());
            K.edge_component[i] = it->second;
        }
        K.component_count = root_to_comp.size();
        K.component_pruned.assign(K.component_count, 0);
        for (std::size_t i = 0; i < K.gap_vertices.size(); ++i) {
            if (!K.gap_in_hole[i]) continue;
            const std::size_t root = uf.find(i);
            auto it = root_to_comp.find(root);
            if (it != root_to_comp.end()) K.component_pruned[it->second] = 1;
        }
    }

    // Leaf <-> component bijection per face, checked against the full K.
    {
        std::vector<std::vector<char>> split_all(structures.size());
        for (std::size_t ff = 0; ff < structures.size(); ++ff) {
            split_all[ff].assign(structures[ff].region_count, 0);
            for (std::size_t r = 0; r < structures[ff].region_count; ++r)
                split_all[ff][r] = structures[ff].region_gap_slots[r].size() >= 2;
        }
        PieceCells full = build_cells(structures, split_all);
        auto full_cell_at = [&](std::size_t face_idx, std::size_t region,
                                std::size_t walkpos) {
            const std::size_t global_region = face_region_base[face_idx] + region;
            const auto& fss = structures[face_idx];
            if (!full.split[global_region]) return full.first_cell[global_region];
            const auto& gaps = fss.region_gap_slots[region];
            std::size_t idx = gaps.size();
            for (std::size_t i = 0; i < gaps.size(); ++i) {
                const std::size_t gp = fss.slot_walkpos[gaps[i]];
                const std::size_t gn = i + 1 < gaps.size()
                                           ? fss.slot_walkpos[gaps[i + 1]]
                                           : std::numeric_limits<std::size_t>::max();
                if (gp <= walkpos && walkpos < gn) { idx = i; break; }
            }
            if (idx == gaps.size() || idx + 1 == gaps.size())
                return full.first_cell[global_region] + gaps.size() - 1;
            return full.first_cell[global_region] + idx;
        };
        for (std::size_t f = 0; f < structures.size(); ++f) {
            const auto& fs = structures[f];
            if (fs.chords.empty()) continue;  // empty lamination: nothing to check
            UnionFind leaf(fs.chords.size());
            std::map<std::size_t, std::size_t> at_node;  // node -> a chord there
            for (std::size_t c = 0; c < fs.chords.size(); ++c) {
                for (std::size_t node : {fs.chords[c].first, fs.chords[c].second}) {
                    auto [it, fresh] = at_node.emplace(node, c);
                    if (!fresh) leaf.unite(c, it->second);
                }
            }
            UnionFind comp(full.count);
            for (std::size_t c = 0; c < fs.chords.size(); ++c) {
                const auto [r0, w0] = fs.chord_region[0][c];
                const auto [r1, w1] = fs.chord_region[1][c];
                comp.unite(full_cell_at(f, r0, w0), full_cell_at(f, r1, w1));
            }
            std::map<std::size_t, std::set<std::size_t>> leaves_per_comp;
            for (std::size_t c = 0; c < fs.chords.size(); ++c) {
                const auto [r0, w0] = fs.chord_region[0][c];
                leaves_per_comp[comp.find(full_cell_at(f, r0, w0))].insert(leaf.find(c));
            }
            for (const auto& [cell, ls] : leaves_per_comp)
                if (ls.size() != 1)
                    throw ModelError("a complementary component holds " +
                                     std::to_string(ls.size()) + " leaves");
        }
    }

    // Cells with only surviving regions split, for the skeleton.
    std::vector<std::vector<char>> split_surviving(structures.size());
    {
        // region -> component: via any of its path edges
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> region_comp;
        for (std::size_t i = 0; i < K.edges.size(); ++i)
            region_comp[{K.edges[i].face, K.edges[i].region}] = K.edge_component[i];
        for (std::size_t f = 0; f < structures.size(); ++f) {
            split_surviving[f].assign(structures[f].region_count, 0);
            for (std::size_t r = 0; r < structures[f].region_count; ++r) {
                if (structures[f].region_gap_slots[r].size() < 2) continue;
                const std::size_t comp = region_comp.at({f, r});
                split_surviving[f][r] = !K.component_pruned[comp];
            }
        }
    }
    PieceCells cells = build_cells(structures, split_surviving);
    K.cell_count = cells.count;

    auto cell_at = [&](std::size_t face_idx, std::size_t region, std::size_t walkpos) {
        const std::size_t global_region = face_region_base[face_idx] + region;
        const auto& fss = structures[face_idx];
        if (!cells.split[global_region]) return cells.first_cell[global_region];
        const auto& gaps = fss.region_gap_slots[region];
        std::size_t idx = gaps.size();
        for (std::size_t i = 0; i < gaps.size(); ++i) {
            const std::size_t gp = fss.slot_walkpos[gaps[i]];
            const std::size_t gn = i + 1 < gaps.size() ? fss.slot_walkpos[gaps[i + 1]]
                                                       : std::numeric_limits<std::size_t>::max();
            if (gp <= walkpos && walkpos < gn) { idx = i; break; }
        }
        if (idx == gaps.size() || idx + 1 == gaps.size())
            return cells.first_cell[global_region] + gaps.size() - 1;
        return cells.first_cell[global_region] + idx;
    };

    // near/far cells per K edge (near = the interval cell between its gaps)
    {
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_seq;  // (face,region) -> counter
        for (std::size_t i = 0; i < K.edges.size(); ++i) {
            auto& e = K.edges[i];
            const auto key = std::make_pair(e.face, e.region);
            const std::size_t ord = edge_seq[key]++;
            const std::size_t global_region = face_region_base[e.face] + e.region;
            if (cells.split[global_region]) {
                e.cell_near = cells.first_cell[global_region] + ord;
                const std::size_t k = structures[e.face].region_gap_slots[e.region].size();
                e.cell_far = cells.first_cell[global_region] + k - 1;
            } else {
                e.cell_near = e.cell_far = cells.first_cell[global_region];
            }
        }
    }

    // Pieces: union-find over cells.
    UnionFind piece(cells.count);
    for (std::size_t f = 0; f < structures.size(); ++f) {
        const auto& fs = structures[f];
        for (std::size_t c = 0; c < fs.chords.size(); ++c) {
            const auto [r0, w0] = fs.chord_region[0][c];
            const auto [r1, w1] = fs.chord_region[1][c];
            piece.unite(cell_at(f, r0, w0), cell_at(f, r1, w1));
        }
    }
    // glue across polyhedron edges: per edge, per subdivision interval
    {
        // surviving gaps per edge
        std::vector<std::vector<std::size_t>> surviving(tri.generators.size());
        for (std::size_t i = 0; i < K.gap_vertices.size(); ++i) {
            // a gap vertex survives when some incident edge's component survives;
            // isolated or pruned gaps do not subdivide
            bool alive = false;
            for (std::size_t e = 0; e < K.edges.size(); ++e) {
                if (K.component_pruned[K.edge_component[e]]) continue;
                if (K.edges[e].a == K.gap_vertices[i] || K.edges[e].b == K.gap_vertices[i]) {
                    alive = true;
                    break;
                }
            }
            if (alive)
                surviving[K.gap_vertices[i].edge].push_back(K.gap_vertices[i].gap);
        }
        // map: (edge, interval) -> cells to merge. Every boundary segment
        // is adjacent to exactly one marking (markings and gaps alternate
        // along a side), and the gaps strictly before the segment along the
        // edge are exactly those below that marking's edge index.
        std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> interval_cells;
        for (std::size_t f = 0; f < structures.size(); ++f) {
            const auto& fs = structures[f];
            const auto& fa = R.alignments[f];
            const std::size_t B = fs.slots.size();
            for (std::size_t seg = 0; seg < B; ++seg) {
                const Slot& s1 = fs.slots[seg];
                const Slot& s2 = fs.slots[(seg + 1) % B];
                const Slot& owner_slot = s1.kind == Slot::Kind::marking ? s1 : s2;
                const std::size_t cell =
                    cell_at(f, fs.segment_region[seg], fs.segment_walkpos[seg]);
                if (owner_slot.kind != Slot::Kind::marking) {
                    // markingless edge: the whole edge is one interval
                    const auto& side = fa.sides[s1.side];
                    interval_cells[{side.generator, 0}].push_back(cell);
                    continue;
                }
                const auto& side = fa.sides[owner_slot.side];
                const std::size_t M = side.marking_count;
                const std::size_t em =
                    side.reversed ? M - 1 - owner_slot.pos : owner_slot.pos;
                const auto& sv = surviving[side.generator];
                std::size_t interval = 0;
                for (std::size_t gidx : sv)
                    if (gidx + 1 <= em) ++interval;
                interval_cells[{side.generator, interval}].push_back(cell);
            }
        }
        for (auto& [key, cs] : interval_cells)
            for (std::size_t i = 1; i < cs.size(); ++i) piece.unite(cs[0], cs[i]);
    }
    // corners all meet at the single base vertex
    {
        std::vector<std::size_t> corner_cells;
        for (std::size_t f = 0; f < structures.size(); ++f) {
            const auto& fs = structures[f];
            for (std::size_t slot = 0; slot < fs.slots.size(); ++slot)
                if (fs.slots[slot].kind == Slot::Kind::corner)
                    corner_cells.push_back(
                        cell_at(f, fs.slot_region[slot], fs.slot_walkpos[slot]));
        }
        for (std::size_t i = 1; i < corner_cells.size(); ++i)
            piece.unite(corner_cells[0], corner_cells[i]);
    }

    K.cell_piece.assign(cells.count, 0);
    {
        std::map<std::size_t, std::size_t> root_to_piece;
        for (std::size_t c = 0; c < cells.count; ++c) {
            auto [it, fresh] = root_to_piece.emplace(piece.find(c), root_to_piece.size());
            K.cell_piece[c] = it->second;
        }
        K.piece_count = root_to_piece.size();
    }
    K.piece_has_singular.assign(K.piece_count, 0);
    for (std::size_t f = 0; f < structures.size(); ++f) {
        const auto& fs = structures[f];
        if (!fs.has_pt) continue;
        // the singular point sits in the cell of its first singular arc
        const std::size_t c = fs.regular_count;  // first singular chord
        const auto [r0, w0] = fs.chord_region[0][c];
        K.piece_has_singular[K.cell_piece[cell_at(f, r0, w0)]] = 1;
    }

    R.component_types = classify_components(R.complex, R.K);

    // Skeleton.
    auto& sk = R.skeleton;
    for (std::size_t pidx = 0; pidx < K.piece_count; ++pidx) {
        SkeletonVertex v;
        v.piece = pidx;
        v.contains_singular = K.piece_has_singular[pidx];
        v.euler = 0;  // filled below
        sk.vertices.push_back(v);
    }
    // Euler characteristics of the closed pieces.
    {
        std::vector<std::set<std::tuple<int, std::size_t, std::size_t>>> vs(K.piece_count);
        std::vector<std::set<std::tuple<int, std::size_t, std::size_t>>> es(K.piece_count);
        std::vector<std::size_t> fs_count(K.piece_count, 0);
        // count cells
        for (std::size_t c = 0; c < cells.count; ++c) ++fs_count[K.cell_piece[c]];
        // walk every face again, attributing boundary items to cells
        std::vector<std::vector<std::size_t>> surviving(tri.generators.size());
        for (std::size_t i = 0; i < K.gap_vertices.size(); ++i) {
            bool alive = false;
            for (std::size_t e = 0; e < K.edges.size(); ++e) {
                if (K.component_pruned[K.edge_component[e]]) continue;
                if (K.edges[e].a == K.gap_vertices[i] || K.edges[e].b == K.gap_vertices[i]) {
                    alive = true;
                    break;
                }
            }
            if (alive)
                surviving[K.gap_vertices[i].edge].push_back(K.gap_vertices[i].gap);
        }
        for (std::size_t f = 0; f < structures.size(); ++f) {
            const auto& fs = structures[f];
            const auto& fa = R.alignments[f];
            const std::size_t B = fs.slots.size();
            for (std::size_t slot = 0; slot < B; ++slot) {
                const Slot& s = fs.slots[slot];
                const std::size_t cell =
                    cell_at(f, fs.slot_region[slot], fs.slot_walkpos[slot]);
                const std::size_t pc = K.cell_piece[cell];
                if (s.kind == Slot::Kind::corner) {
                    vs[pc].insert({0, 0, 0});  // the unique base vertex
                } else if (s.kind == Slot::Kind::marking) {
                    const auto& side = fa.sides[s.side];
                    const std::size_t em = side.edge_marking[s.pos];
                    vs[pc].insert({1, side.generator, em});
                } else {
                    // all gaps count as subdivision vertices so that the
                    // per-segment edge ids below stay balanced
                    const auto& side = fa.sides[s.side];
                    const std::size_t M = side.marking_count;
                    const std::size_t eg = side.reversed ? M - 2 - s.pos : s.pos;
                    vs[pc].insert({2, side.generator, eg});
                }
            }
            // boundary segments: identified by the adjacent marking and the
            // side of it the segment lies on, in edge coordinates
            for (std::size_t seg = 0; seg < B; ++seg) {
                const Slot& s1 = fs.slots[seg];
                const Slot& s2 = fs.slots[(seg + 1) % B];
                const std::size_t cell =
                    cell_at(f, fs.segment_region[seg], fs.segment_walkpos[seg]);
                const std::size_t pc = K.cell_piece[cell];
                const std::size_t gen = fa.sides[s1.side].generator;
                const Slot& owner_slot = s1.kind == Slot::Kind::marking ? s1 : s2;
                std::size_t coord = 0;
                if (owner_slot.kind == Slot::Kind::marking) {
                    const auto& side = fa.sides[owner_slot.side];
                    const std::size_t M = side.marking_count;
                    const std::size_t em =
                        side.reversed ? M - 1 - owner_slot.pos : owner_slot.pos;
                    // s1 is the marking => the segment follows it in traversal
                    const bool before_tr = s1.kind != Slot::Kind::marking;
                    const bool edge_before = side.reversed ? !before_tr : before_tr;
                    coord = 2 * em + (edge_before ? 0 : 1);
                }
                es[pc].insert({0, gen, coord});
            }
            for (std::size_t c = 0; c < fs.chords.size(); ++c) {
                for (int dartside = 0; dartside < 2; ++dartside) {
                    const auto [r0, w0] = fs.chord_region[dartside][c];
                    const std::size_t pc = K.cell_piece[cell_at(f, r0, w0)];
                    es[pc].insert({1, f, c});
                    if (fs.has_pt &&
                        (fs.chords[c].first == fs.pt_node || fs.chords[c].second == fs.pt_node))
                        vs[pc].insert({3, f, 0});
                }
            }
        }
        for (std::size_t i = 0; i < K.edges.size(); ++i) {
            if (K.component_pruned[K.edge_component[i]]) continue;
            for (std::size_t cell : {K.edges[i].cell_near, K.edges[i].cell_far}) {
                const std::size_t pc = K.cell_piece[cell];
                es[pc].insert({2, i, 0});
                vs[pc].insert({2, K.edges[i].a.edge, K.edges[i].a.gap});
                vs[pc].insert({2, K.edges[i].b.edge, K.edges[i].b.gap});
            }
        }
        for (std::size_t pidx = 0; pidx < K.piece_count; ++pidx)
            sk.vertices[pidx].euler = static_cast<std::int64_t>(vs[pidx].size()) -
                                      static_cast<std::int64_t>(es[pidx].size()) +
                                      static_cast<std::int64_t>(fs_count[pidx]);
    }

    // skeleton edges per surviving component
    std::map<std::size_t, std::size_t> type2_vertex;
    for (const auto& [comp, type] : R.component_types) {
        if (type != ComponentType::type_II) continue;
        SkeletonVertex v;
        v.is_type_II_component = true;
        v.piece = comp;
        // chi of a graph component: gaps - edges
        std::set<GapId> gs;
        std::size_t ecount = 0;
        for (std::size_t i = 0; i < K.edges.size(); ++i) {
            if (K.edge_component[i] != comp) continue;
            gs.insert(K.edges[i].a);
            gs.insert(K.edges[i].b);
            ++ecount;
        }
        v.euler = static_cast<std::int64_t>(gs.size()) - static_cast<std::int64_t>(ecount);
        type2_vertex[comp] = sk.vertices.size();
        sk.vertices.push_back(v);
    }
    for (const auto& [comp, type] : R.component_types) {
        SkeletonEdge e;
        e.component = comp;
        e.type = type;
        // sides of one representative edge
        std::size_t rep = K.edges.size();
        for (std::size_t i = 0; i < K.edges.size(); ++i)
            if (K.edge_component[i] == comp) { rep = i; break; }
        if (rep == K.edges.size()) continue;
        const std::size_t p1 = K.cell_piece[K.edges[rep].cell_near];
        const std::size_t p2 = K.cell_piece[K.edges[rep].cell_far];
        if (type == ComponentType::type_I) {
            e.end1 = p1;
            e.end2 = p2;
        } else {
            e.end1 = type2_vertex.at(comp);
            e.end2 = p1;
        }
        sk.edges.push_back(e);
    }

    return R;
}

std::map<std::size_t, ComponentType> classify_components(const VanKampenComplex& P,
                                                         const LaminationGraph& KG) {
    std::map<std::size_t, ComponentType> out;
    if (KG.edges.empty()) return out;

    // occurrences of each polyhedron edge
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> occ(P.generator_count);
    for (std::size_t f = 0; f < P.faces.size(); ++f) {
        const auto& b = P.faces[f].boundary;
        for (std::size_t s = 0; s < b.size(); ++s)
            occ[static_cast<std::size_t>(std::abs(b[s])) - 1].push_back({f, s});
    }
    for (std::size_t g = 0; g < P.generator_count; ++g)
        if (occ[g].size() > 2)
            throw ModelError("edge used by three or more face sides: not a surface");

    // surviving K edges, incident list per gap vertex
    struct Inc {
        std::size_t edge;  // index into KG.edges
        bool at_a;
        std::size_t side;  // the face side carrying this endpoint's slot
    };
    std::map<GapId, std::vector<Inc>> incident;
    std::vector<std::size_t> alive_edges;
    for (std::size_t i = 0; i < KG.edges.size(); ++i) {
        if (KG.component_pruned[KG.edge_component[i]]) continue;
        alive_edges.push_back(i);
        incident[KG.edges[i].a].push_back({i, true, KG.edges[i].a_side});
        incident[KG.edges[i].b].push_back({i, false, KG.edges[i].b_side});
    }
    if (alive_edges.empty()) return out;

    // side objects: (edge index, side 0/1); union-find over them
    std::map<std::pair<std::size_t, int>, std::size_t> side_id;
    auto sid = [&](std::size_t e, int s) {
        auto [it, fresh] = side_id.emplace(std::make_pair(e, s), side_id.size());
        return it->second;
    };
    for (std::size_t e : alive_edges) {
        sid(e, 0);
        sid(e, 1);
    }
    UnionFind uf(side_id.size());

    // Fan at a gap vertex within one face: its region path gives at most
    // two incident edges; normalized from the edge-plus direction. A dart
    // at vertex v of edge (a->b): left side looking along the dart.
    auto left_of = [&](const Inc& inc) -> int { return inc.at_a ? 0 : 1; };
    auto right_of = [&](const Inc& inc) -> int { return inc.at_a ? 1 : 0; };

    for (const auto& [gap, incs] : incident) {
        // group darts by face-side occurrence of the polyhedron edge
        struct Fan {
            std::vector<Inc> darts;  // local counterclockwise
            bool reversed_side = false;
        };
        std::map<std::pair<std::size_t, std::size_t>, Fan> fans;
        for (const Inc& inc : incs) {
            const std::size_t f = KG.edges[inc.edge].face;
            auto& fan = fans[{f, inc.side}];
            fan.darts.push_back(inc);
            fan.reversed_side = P.faces[f].boundary[inc.side] < 0;
        }
        for (auto& [key, fan] : fans) {
            // walk order: the edge arriving at the gap (gap as `b`) comes
            // before the edge leaving it (gap as `a`); local ccw places the
            // leaving edge first (toward the boundary successor)
            std::stable_sort(fan.darts.begin(), fan.darts.end(),
                             [](const Inc& x, const Inc& y) { return x.at_a && !y.at_a; });
            // within-face corner transitions: consecutive darts in local ccw
            for (std::size_t i = 0; i + 1 < fan.darts.size(); ++i)
                uf.unite(sid(fan.darts[i].edge, left_of(fan.darts[i])),
                         sid(fan.darts[i + 1].edge, right_of(fan.darts[i + 1])));
        }

        // cross-edge transitions at the plus and minus ends of the vertex
        const auto& occs = occ[gap.edge];
        if (occs.size() == 2) {
            auto normalized = [&](const Fan& fan) {
                std::vector<Inc> n = fan.darts;
                if (fan.reversed_side) std::reverse(n.begin(), n.end());
                return n;
            };
            auto plus_side = [&](const Fan& fan, const Inc& inc) {
                return fan.reversed_side ? left_of(inc) : right_of(inc);
            };
            auto minus_side = [&](const Fan& fan, const Inc& inc) {
                return fan.reversed_side ? right_of(inc) : left_of(inc);
            };
            std::vector<const Fan*> present;
            for (auto& [key, fan] : fans) present.push_back(&fan);
            if (present.size() == 1) {
                // the other occurrence carries no darts here: the strip
                // wraps through the empty half
                auto n = normalized(*present[0]);
                uf.unite(sid(n.front().edge, plus_side(*present[0], n.front())),
                         sid(n.back().edge, minus_side(*present[0], n.back())));
            } else if (present.size() == 2) {
                auto nA = normalized(*present[0]);
                auto nB = normalized(*present[1]);
                uf.unite(sid(nA.front().edge, plus_side(*present[0], nA.front())),
                         sid(nB.front().edge, plus_side(*present[1], nB.front())));
                uf.unite(sid(nA.back().edge, minus_side(*present[0], nA.back())),
                         sid(nB.back().edge, minus_side(*present[1], nB.back())));
            }
        }
        // a single occurrence: boundary stubs block the wrap
    }

    // side classes per component
    std::map<std::size_t, std::set<std::size_t>> classes;
    for (std::size_t e : alive_edges) {
        const std::size_t comp = KG.edge_component[e];
        classes[comp].insert(uf.find(sid(e, 0)));
        classes[comp].insert(uf.find(sid(e, 1)));
    }
    for (const auto& [comp, cls] : classes)
        out[comp] = cls.size() >= 2 ? ComponentType::type_I : ComponentType::type_II;
    return out;
}

}  // namespace coarsecyl
