#include "coarsecyl/slices.hpp"

#include <algorithm>

namespace coarsecyl {

std::vector<Slice> parabolic_slices(const FineGraph& g, const Cylinder& cyl,
                                    std::int64_t theta) {
    if (!cyl.complete) throw PreconditionError("parabolic slices need a complete cylinder");
    std::vector<Slice> out;
    for (VertexId v : cyl.members) {
        if (v == cyl.x || v == cyl.y) continue;  // endpoints are never parabolic slices
        std::vector<VertexId> nbs;
        for (VertexId w : g.neighbors(v))
            if (cyl.contains(w)) nbs.push_back(w);
        if (nbs.size() < 2) continue;
        Angle best(0);
        const std::size_t iv = g.index_of(v);
        for (std::size_t i = 0; i < nbs.size(); ++i) {
            auto row = bfs_distances(g, g.index_of(nbs[i]), iv);
            for (std::size_t j = i + 1; j < nbs.size(); ++j) {
                const std::uint32_t d = row[g.index_of(nbs[j])];
                best = std::max(best, d == kUnreachable ? Angle::infinity() : Angle(d));
            }
        }
        if (best.ge(theta)) {
            Slice s;
            s.kind = SliceKind::parabolic;
            s.members = {v};
            s.angle = best;
            out.push_back(std::move(s));
        }
    }
    return out;
}

SplitResult split_cylinder(const FineGraph& g, const Cylinder& cyl, VertexId v,
                           std::size_t budget, std::size_t geodesic_cap) {
    if (!cyl.contains(v)) throw PreconditionError("split vertex not in the cylinder");
    if (v == cyl.x || v == cyl.y)
        throw PreconditionError("refusing to split at an endpoint");
    const std::int64_t threshold = cyl.constants.theta - checked_mul(20, cyl.constants.stability_D);
    auto gs = all_geodesics(g, cyl.x, cyl.y, geodesic_cap);
    bool qualifies = false;
    for (const auto& geo : gs.paths) {
        for (std::size_t i = 1; i + 1 < geo.vertices.size(); ++i) {
            if (geo.vertices[i] != v) continue;
            if (path_angle_at(g, geo, i).gt(threshold)) { qualifies = true; break; }
        }
        if (qualifies) break;
    }
    if (!qualifies)
        throw PreconditionError(
            "no enumerated geodesic carries a large enough angle at the split vertex");

    SplitResult res;
    res.left = cylinder(g, cyl.x, v, cyl.l, cyl.constants, budget, false, geodesic_cap);
    res.right = cylinder(g, v, cyl.y, cyl.l, cyl.constants, budget, false, geodesic_cap);
    if (cyl.complete && res.left.complete && res.right.complete) {
        std::vector<VertexId> uni;
        std::set_union(res.left.members.begin(), res.left.members.end(),
                       res.right.members.begin(), res.right.members.end(),
                       std::back_inserter(uni));
        res.union_identity = uni == cyl.members ? Verdict::pass : Verdict::fail;
        std::vector<VertexId> inter;
        std::set_intersection(res.left.members.begin(), res.left.members.end(),
                              res.right.members.begin(), res.right.members.end(),
                              std::back_inserter(inter));
        res.intersection_identity =
            inter == std::vector<VertexId>{v} ? Verdict::pass : Verdict::fail;
    }
    return res;
}

namespace {

// Bulk neighborhood-set data over a parabolic-free cylinder: bitsets over
// member indices plus the potential psi = |L| - |R| driving the ordering.
struct NeighborhoodTable {
    std::vector<VertexId> members;
    std::size_t words = 0;
    std::vector<std::vector<std::uint64_t>> left, right;
    std::vector<std::int64_t> psi;

    std::size_t member_index(VertexId v) const {
        return static_cast<std::size_t>(
            std::lower_bound(members.begin(), members.end(), v) - members.begin());
    }
};

NeighborhoodTable build_table(const FineGraph& g, const Cylinder& cyl) {
    NeighborhoodTable t;
    t.members = cyl.members;
    const std::size_t n = t.members.size();
    t.words = (n + 63) / 64;
    t.left.assign(n, std::vector<std::uint64_t>(t.words, 0));
    t.right.assign(n, std::vector<std::uint64_t>(t.words, 0));
    t.psi.assign(n, 0);

    auto from_a = bfs_distances(g, g.index_of(cyl.x));
    std::vector<std::uint32_t> da(n);
    for (std::size_t i = 0; i < n; ++i) da[i] = from_a[g.index_of(t.members[i])];

    const std::int64_t far = checked_mul(100, cyl.constants.delta);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = bfs_distances(g, g.index_of(t.members[i]));
        std::int64_t nl = 0, nr = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (static_cast<std::int64_t>(row[g.index_of(t.members[j])]) <= far) continue;
            if (da[j] < da[i]) {
                t.left[i][j / 64] |= std::uint64_t{1} << (j % 64);
                ++nl;
            } else if (da[j] > da[i]) {
                t.right[i][j / 64] |= std::uint64_t{1} << (j % 64);
                ++nr;
            }
        }
        t.psi[i] = nl - nr;
    }
    return t;
}

void require_parabolic_free(const FineGraph& g, const Cylinder& cyl) {
    if (!parabolic_slices(g, cyl, cyl.constants.theta).empty())
        throw PreconditionError("neighborhood sets are defined only without parabolic slices");
}

}  // namespace

NeighborhoodSets neighborhood_sets(const FineGraph& g, const Cylinder& cyl, VertexId x) {
    if (!cyl.contains(x)) throw PreconditionError("vertex not in the cylinder");
    require_parabolic_free(g, cyl);
    NeighborhoodSets out;
    auto from_a = bfs_distances(g, g.index_of(cyl.x));
    auto from_x = bfs_distances(g, g.index_of(x));
    const std::uint32_t dax = from_a[g.index_of(x)];
    const std::int64_t far = checked_mul(100, cyl.constants.delta);
    for (VertexId v : cyl.members) {
        if (static_cast<std::int64_t>(from_x[g.index_of(v)]) <= far) continue;
        const std::uint32_t dav = from_a[g.index_of(v)];
        if (dav < dax) out.left.push_back(v);
        else if (dav > dax) out.right.push_back(v);
    }
    return out;
}

std::int64_t diff(const FineGraph& g, const Cylinder& cyl, VertexId x, VertexId y) {
    auto nx = neighborhood_sets(g, cyl, x);
    auto ny = neighborhood_sets(g, cyl, y);
    auto minus = [](const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
        std::vector<VertexId> out;
        std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return static_cast<std::int64_t>(out.size());
    };
    return minus(nx.left, ny.left) - minus(ny.left, nx.left) +
           minus(ny.right, nx.right) - minus(nx.right, ny.right);
}

namespace {

std::vector<Slice> decompose(const FineGraph& g, const Cylinder& cyl, std::int64_t l,
                             const ConstantSet& C, std::size_t budget,
                             std::size_t geodesic_cap);

// Regular slices of a parabolic-free cylinder: difference classes of the
// interior, ordered by the cocycle potential.
std::vector<Slice> regular_slices_ordered(const FineGraph& g, const Cylinder& cyl) {
    std::vector<Slice> out;
    const auto table = build_table(g, cyl);
    std::map<std::int64_t, std::vector<VertexId>> classes;
    for (std::size_t i = 0; i < table.members.size(); ++i) {
        const VertexId v = table.members[i];
        if (v == cyl.x || v == cyl.y) continue;
        classes[table.psi[i]].push_back(v);
    }
    for (auto& [psi, vs] : classes) {
        Slice s;
        s.kind = SliceKind::regular;
        std::sort(vs.begin(), vs.end());
        s.members = std::move(vs);
        if (s.members.size() == 1 && g.is_parabolic(s.members[0]))
            s.flagged_singleton = true;
        out.push_back(std::move(s));
    }
    return out;
}

Slice endpoint_slice(const FineGraph& g, VertexId v) {
    Slice s;
    s.kind = SliceKind::regular;
    s.members = {v};
    if (g.is_parabolic(v)) s.flagged_singleton = true;
    return s;
}

std::vector<Slice> decompose(const FineGraph& g, const Cylinder& cyl, std::int64_t l,
                             const ConstantSet& C, std::size_t budget,
                             std::size_t geodesic_cap) {
    if (cyl.x == cyl.y) return {endpoint_slice(g, cyl.x)};
    auto paras = parabolic_slices(g, cyl, C.theta);
    if (paras.empty()) {
        std::vector<Slice> out;
        out.push_back(endpoint_slice(g, cyl.x));
        auto regs = regular_slices_ordered(g, cyl);
        out.insert(out.end(), std::make_move_iterator(regs.begin()),
                   std::make_move_iterator(regs.end()));
        out.push_back(endpoint_slice(g, cyl.y));
        return out;
    }

    // Order the parabolic vertices along an enumerated geodesic, split
    // there, and decompose the parabolic-free parts.
    std::vector<VertexId> para_vs;
    for (const auto& s : paras) para_vs.push_back(s.members[0]);
    auto gs = all_geodesics(g, cyl.x, cyl.y, geodesic_cap);
    std::vector<VertexId> ordered;
    for (const auto& geo : gs.paths) {
        std::map<VertexId, std::size_t> pos;
        for (std::size_t i = 0; i < geo.vertices.size(); ++i)
            pos.emplace(geo.vertices[i], i);
        bool all = true;
        for (VertexId v : para_vs)
            if (!pos.count(v)) { all = false; break; }
        if (!all) continue;
        ordered = para_vs;
        std::sort(ordered.begin(), ordered.end(),
                  [&](VertexId a, VertexId b) { return pos.at(a) < pos.at(b); });
        break;
    }
    if (ordered.empty())
        throw ModelError("parabolic slice vertices not aligned on any enumerated geodesic");

    std::vector<VertexId> points{cyl.x};
    points.insert(points.end(), ordered.begin(), ordered.end());
    points.push_back(cyl.y);

    std::vector<Slice> out;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        Cylinder part = cylinder(g, points[i], points[i + 1], l, C, budget, false, geodesic_cap);
        if (!part.complete)
            throw BudgetError("sub-cylinder search incomplete during slice ordering");
        auto sub = decompose(g, part, l, C, budget, geodesic_cap);
        const std::size_t lo = i == 0 ? 0 : 1;                       // drop repeated joint
        const std::size_t hi = i + 2 == points.size() ? sub.size() : sub.size() - 1;
        for (std::size_t k = lo; k < hi; ++k) out.push_back(std::move(sub[k]));
        if (i + 2 < points.size()) {
            // the joint itself, as the parabolic slice of the parent cylinder
            for (const auto& s : paras)
                if (s.members[0] == points[i + 1]) out.push_back(s);
        }
    }
    return out;
}

}  // namespace

SliceDecomposition order_slices(const FineGraph& g, VertexId x, VertexId y, std::int64_t l,
                                const ConstantSet& C, std::size_t budget,
                                std::size_t geodesic_cap) {
    SliceDecomposition dec;
    dec.cyl = cylinder(g, x, y, l, C, budget, false, geodesic_cap);
    if (!dec.cyl.complete)
        throw BudgetError("cylinder search incomplete; slice ordering undefined");
    dec.slices = decompose(g, dec.cyl, l, C, budget, geodesic_cap);
    for (std::size_t i = 0; i < dec.slices.size(); ++i) {
        for (VertexId v : dec.slices[i].members) {
            if (dec.position.count(v))
                throw ModelError("slice decomposition does not partition the cylinder");
            dec.position.emplace(v, i);
        }
    }
    for (VertexId v : dec.cyl.members)
        if (!dec.position.count(v))
            throw ModelError("slice decomposition does not cover the cylinder");
    return dec;
}

namespace {

bool slices_equal(const Slice& a, const Slice& b) { return a.members == b.members; }

HoleInfo check_hole(const SliceDecomposition& dec, std::size_t begin, std::size_t end,
                    const ConstantSet& C, std::vector<std::string>* hard,
                    const std::string& name) {
    HoleInfo h;
    h.begin = std::min(begin, end);
    h.end = end;
    const std::int64_t max_slices = checked_mul(10, C.phi_n);
    h.size_bound = static_cast<std::int64_t>(h.size()) <= max_slices ? Verdict::pass
                                                                     : Verdict::fail;
    const std::int64_t max_angle =
        checked_add(checked_mul(3, C.theta), checked_mul(100, C.delta));
    h.angle_bound = Verdict::pass;
    for (std::size_t i = h.begin; i < h.end; ++i) {
        const Slice& s = dec.slices[i];
        if (s.kind == SliceKind::parabolic && s.angle.gt(max_angle))
            h.angle_bound = Verdict::fail;
    }
    if (C.regime == Regime::paper_faithful && hard) {
        if (h.size_bound == Verdict::fail)
            hard->push_back("hole " + name + " exceeds the slice-count bound");
        if (h.angle_bound == Verdict::fail)
            hard->push_back("hole " + name + " carries an oversized parabolic angle");
    }
    return h;
}

// Every slice of `a` lying entirely in the radius-`r` ball around `center`
// must reappear (as a member set) in `b`.
Verdict locality_check(const FineGraph& g, const SliceDecomposition& a,
                       const SliceDecomposition& b, VertexId center, const Rational& r) {
    if (r <= Rational(0)) return Verdict::pass;  // vacuous
    auto row = bfs_distances(g, g.index_of(center));
    for (const auto& s : a.slices) {
        bool inside = true;
        for (VertexId v : s.members)
            if (!(Rational(row[g.index_of(v)]) <= r)) { inside = false; break; }
        if (!inside) continue;
        bool found = false;
        for (const auto& t : b.slices)
            if (slices_equal(s, t)) { found = true; break; }
        if (!found) return Verdict::fail;
    }
    return Verdict::pass;
}

}  // namespace

TriangleDecomposition triangle_slices(const FineGraph& g, VertexId p, const std::string& alpha,
                                      const std::string& beta, const std::string& gamma,
                                      std::int64_t l, const ConstantSet& C, std::size_t budget,
                                      std::size_t geodesic_cap) {
    if (!g.has_action()) throw PreconditionError("triangle decomposition needs an action");
    auto y = g.apply(alpha, p);
    if (!y) throw PreconditionError("alpha undefined at the base point");
    auto bp = g.apply(beta, p);
    if (!bp) throw PreconditionError("beta undefined at the base point");
    auto z = g.apply(alpha, *bp);
    if (!z) throw PreconditionError("alpha*beta undefined at the base point");
    if (!gamma.empty()) {
        auto back = g.apply(gamma, *z);
        if (back && *back != p)
            throw PreconditionError("alpha*beta*gamma is not the identity at the base point");
    }

    TriangleDecomposition td;
    td.x = p;
    td.y = *y;
    td.z = *z;
    td.xy = order_slices(g, p, *y, l, C, budget, geodesic_cap);
    td.xz = order_slices(g, p, *z, l, C, budget, geodesic_cap);
    td.yz = order_slices(g, *y, *z, l, C, budget, geodesic_cap);

    const auto& sxy = td.xy.slices;
    const auto& sxz = td.xz.slices;
    const auto& syz = td.yz.slices;

    std::size_t s = 0;
    while (s < sxy.size() && s < sxz.size() && slices_equal(sxy[s], sxz[s])) ++s;
    std::size_t t = 0;
    while (t < sxy.size() && t < syz.size() &&
           slices_equal(sxy[sxy.size() - 1 - t], syz[t]))
        ++t;
    std::size_t v = 0;
    while (v < sxz.size() && v < syz.size() &&
           slices_equal(sxz[sxz.size() - 1 - v], syz[syz.size() - 1 - v]))
        ++v;
    td.shared_prefix = s;
    td.shared_t = t;
    td.shared_v = v;

    auto clamp_hole = [](std::size_t begin, std::size_t len_minus_tail,
                         std::size_t total) -> std::pair<std::size_t, std::size_t> {
        const std::size_t end = total >= len_minus_tail ? total - len_minus_tail : 0;
        return {std::min(begin, end), end};
    };
    auto [b1, e1] = clamp_hole(s, t, sxy.size());
    td.hole_xy = check_hole(td.xy, b1, e1, C, &td.hard_failures, "of side xy");
    auto [b2, e2] = clamp_hole(s, v, sxz.size());
    td.hole_xz = check_hole(td.xz, b2, e2, C, &td.hard_failures, "of side xz");
    auto [b3, e3] = clamp_hole(t, v, syz.size());
    td.hole_yz = check_hole(td.yz, b3, e3, C, &td.hard_failures, "of side yz");

    const Rational offset(checked_mul(4, checked_add(checked_mul(11, C.mu), C.phi_n)));
    const Rational shrink(checked_mul(200, C.delta));
    td.locality = Verdict::pass;
    struct CornerPair {
        VertexId corner, far1, far2;
        const SliceDecomposition* a;
        const SliceDecomposition* b;
    };
    const CornerPair corner_pairs[] = {
        {td.x, td.y, td.z, &td.xy, &td.xz},
        {td.y, td.x, td.z, &td.xy, &td.yz},
        {td.z, td.x, td.y, &td.xz, &td.yz},
    };
    for (const auto& cp : corner_pairs) {
        const Rational r = gromov_product(g, cp.corner, cp.far1, cp.far2) - offset - shrink;
        td.locality = combine(td.locality, locality_check(g, *cp.a, *cp.b, cp.corner, r));
        td.locality = combine(td.locality, locality_check(g, *cp.b, *cp.a, cp.corner, r));
    }
    if (C.regime == Regime::paper_faithful && td.locality == Verdict::fail)
        td.hard_failures.push_back("slice locality violated inside a coincidence ball");
    return td;
}

}  // namespace coarsecyl
