#include "coarsecyl/cylinders.hpp"

#include <algorithm>
#include <array>

namespace coarsecyl {

std::vector<VertexId> conical_neighborhood(const FineGraph& g, const VertexPath& seg,
                                           std::int64_t eps) {
    if (!g.valid_path(seg)) throw PreconditionError("segment is not a path");
    if (seg.length() == 0)
        throw PreconditionError("conical neighborhood needs a segment with an edge");
    if (distance(g, seg.front(), seg.back()) != seg.length())
        throw PreconditionError("segment is not a geodesic");
    return cone_union(g, seg, eps);
}

namespace {

// Sparse table for range-max queries over an int64 array.
class RangeMax {
public:
    explicit RangeMax(const std::vector<std::int64_t>& a) : n_(a.size()) {
        table_.push_back(a);
        for (std::size_t len = 1; 2 * len <= n_; len *= 2) {
            const auto& prev = table_.back();
            std::vector<std::int64_t> next(n_ - 2 * len + 1);
            for (std::size_t i = 0; i + 2 * len <= n_; ++i)
                next[i] = std::max(prev[i], prev[i + len]);
            table_.push_back(std::move(next));
        }
    }
    // max over [lo, hi]; identity -inf on empty range
    std::int64_t query(std::size_t lo, std::size_t hi) const {
        if (lo > hi || lo >= n_) return std::numeric_limits<std::int64_t>::min();
        hi = std::min(hi, n_ - 1);
        const std::size_t len = hi - lo + 1;
        std::size_t k = 0;
        while ((std::size_t{2} << k) <= len) ++k;
        return std::max(table_[k][lo], table_[k][hi + 1 - (std::size_t{1} << k)]);
    }

private:
    std::size_t n_;
    std::vector<std::vector<std::int64_t>> table_;
};

// Subdivision feasibility over a fixed complete path: forward piece-end
// reachability, backward piece-start reachability, and membership marking.
// R[t] for t >= 1 is the local-geodesic window obstruction: the smallest
// admissible piece start covering parameter t, or 0 when windows of
// length mu ending at t are all geodesic.
struct SubdivisionDp {
    const std::vector<std::int64_t>& R;
    std::int64_t l;
    std::int64_t eps;
    std::size_t m;

    std::vector<std::int64_t> jmin;      // piece [j, i] local-geodesic iff j >= jmin[i]
    std::vector<std::size_t> kmax;       // piece [i, k] local-geodesic iff k <= kmax[i]
    std::vector<char> f_end, fs;         // prefix piece ends / piece starts
    std::vector<std::uint32_t> f_end_ps; // prefix sums of f_end
    std::vector<char> b_start;           // suffix piece starts
    std::vector<std::uint32_t> b_cnt;    // suffix counts of b_start

    SubdivisionDp(const std::vector<std::int64_t>& R_, std::int64_t l_, std::int64_t eps_)
        : R(R_), l(l_), eps(eps_), m(R_.size() - 1) {
        RangeMax rm(R);
        jmin.assign(m + 1, 0);
        for (std::size_t i = 1; i <= m; ++i) jmin[i] = std::max(jmin[i - 1], R[i]);
        kmax.assign(m + 1, m);
        for (std::size_t i = 0; i <= m; ++i) {
            // largest k with max R(i+1..k) <= i
            std::size_t lo = i, hi = m;
            while (lo < hi) {
                const std::size_t mid = (lo + hi + 1) / 2;
                if (rm.query(i + 1, mid) <= static_cast<std::int64_t>(i)) lo = mid;
                else hi = mid - 1;
            }
            kmax[i] = lo;
        }

        f_end.assign(m + 1, 0);
        fs.assign(m + 1, 0);
        f_end_ps.assign(m + 2, 0);
        for (std::size_t i = 0; i <= m; ++i) {
            bool ok = false;
            if (jmin[i] == 0) ok = true;  // first piece [0, i]
            if (!ok && static_cast<std::int64_t>(i) >= l) {
                // piece [j, i], j >= 1, length >= l, preceded by a bridge
                const std::size_t dlo = static_cast<std::size_t>(
                    std::max<std::int64_t>(0, jmin[i] - eps));
                const std::size_t dhi = i - static_cast<std::size_t>(l);
                if (jmin[i] <= static_cast<std::int64_t>(dhi) && dlo <= dhi)
                    ok = f_end_ps[dhi + 1] - f_end_ps[dlo] > 0;
            }
            f_end[i] = ok;
            f_end_ps[i + 1] = f_end_ps[i] + (ok ? 1 : 0);
            const std::size_t blo = static_cast<std::size_t>(
                std::max<std::int64_t>(0, static_cast<std::int64_t>(i) - eps));
            fs[i] = f_end_ps[i + 1] - f_end_ps[blo] > 0;
        }

        b_start.assign(m + 1, 0);
        b_cnt.assign(m + 2, 0);
        for (std::size_t jj = m + 1; jj-- > 0;) {
            bool ok = false;
            if (kmax[jj] == m) ok = true;  // last piece [j, m]
            if (!ok && jj + static_cast<std::size_t>(l) <= kmax[jj]) {
                // piece [j, k], k < m, length >= l, followed by a bridge into a
                // later piece start: any b_start in [j+l, kmax[j]+eps]
                const std::size_t lo = jj + static_cast<std::size_t>(l);
                const std::size_t hi = std::min<std::size_t>(
                    m, kmax[jj] + static_cast<std::size_t>(eps));
                ok = b_cnt[lo] - b_cnt[hi + 1] > 0;
            }
            b_start[jj] = ok;
            // rebuild counts: b_cnt[j] = count of b_start in [j, m]
            b_cnt[jj] = b_cnt[jj + 1] + (ok ? 1 : 0);
        }
    }

    bool start_ok(std::size_t c) const {
        if (c == 0) return true;
        const std::size_t lo = static_cast<std::size_t>(
            std::max<std::int64_t>(0, static_cast<std::int64_t>(c) - eps));
        return f_end_ps[c + 1] - f_end_ps[lo] > 0;
    }
    bool end_ok(std::size_t d) const {
        if (d == m) return true;
        const std::size_t hi = std::min<std::size_t>(m, d + static_cast<std::size_t>(eps));
        return b_cnt[d] - b_cnt[hi + 1] > 0;
    }
    bool whole_path_valid() const { return b_start[0] && jmin.size() > 0; }
};

struct SearchContext {
    const FineGraph& g;
    VertexId x, y;
    std::int64_t l;
    const ConstantSet& C;
    bool keep_witnesses;
    std::vector<char> in_space;      // allowed vertex indices
    std::vector<std::uint64_t> close_mask;  // per vertex: geodesics within 2*eps
    std::int64_t max_len = 0;
    std::int64_t window = 0;
    Rational half_lambda;
    std::size_t budget = 0;
    std::size_t expansions = 0;
    bool budget_hit = false;

    std::vector<char> member;        // marking result by index
    std::map<VertexId, CoarsePiecewiseGeodesic> witnesses;
};

// Marks the qualifying vertices of one complete candidate path.
void mark_members(SearchContext& ctx, const std::vector<std::uint32_t>& path_idx,
                  const std::vector<std::int64_t>& R) {
    const std::size_t m = path_idx.size() - 1;
    SubdivisionDp dp(R, ctx.l, ctx.C.epsilon);
    if (!dp.b_start[0]) return;  // no complete valid subdivision at all

    const std::size_t ix = ctx.g.index_of(ctx.x);
    const std::size_t iy = ctx.g.index_of(ctx.y);
    std::vector<char> marked(m + 1, 0);

    for (std::size_t c = 0; c <= m; ++c) {
        if (!dp.start_ok(c)) continue;
        const std::size_t dmax = dp.kmax[c];
        std::int64_t max_thi = std::numeric_limits<std::int64_t>::min();
        for (std::size_t d = c; d <= dmax; ++d) {
            // piece length class: first and last pieces are exempt
            if (c != 0 && d != m && static_cast<std::int64_t>(d - c) < ctx.l) continue;
            if (!dp.end_ok(d)) continue;
            const bool end_is_y = path_idx[d] == iy;
            const std::int64_t thi =
                end_is_y ? static_cast<std::int64_t>(d)
                         : static_cast<std::int64_t>(d) - ctx.l;
            max_thi = std::max(max_thi, thi);
        }
        if (max_thi == std::numeric_limits<std::int64_t>::min()) continue;
        const bool start_is_x = path_idx[c] == ix;
        const std::int64_t tlo =
            start_is_x ? static_cast<std::int64_t>(c) : static_cast<std::int64_t>(c) + ctx.l;
        for (std::int64_t t = std::max<std::int64_t>(tlo, static_cast<std::int64_t>(c));
             t <= max_thi && t <= static_cast<std::int64_t>(m); ++t)
            marked[static_cast<std::size_t>(t)] = 1;
    }

    for (std::size_t t = 0; t <= m; ++t) {
        if (!marked[t]) continue;
        const std::uint32_t v = path_idx[t];
        if (!ctx.member[v]) {
            ctx.member[v] = 1;
            if (ctx.keep_witnesses) {
                // Reconstruct one witnessing subdivision containing t deep
                // inside a piece.
                std::size_t wc = 0, wd = 0;
                bool found = false;
                for (std::size_t c = 0; c <= t && !found; ++c) {
                    if (!dp.start_ok(c)) continue;
                    const bool sx = path_idx[c] == ix;
                    if (!sx && static_cast<std::int64_t>(t - c) < ctx.l) continue;
                    for (std::size_t d = t; d <= dp.kmax[c]; ++d) {
                        if (c != 0 && d != m && static_cast<std::int64_t>(d - c) < ctx.l)
                            continue;
                        if (!dp.end_ok(d)) continue;
                        const bool ey = path_idx[d] == iy;
                        if (!ey && static_cast<std::int64_t>(d - t) < ctx.l) continue;
                        wc = c; wd = d; found = true;
                        break;
                    }
                }
                if (found) {
                    // prefix chain of (piece, bridge) cuts ending at wc
                    std::vector<std::size_t> cuts;
                    std::size_t c = wc;
                    while (c != 0) {
                        std::size_t i = static_cast<std::size_t>(
                            std::max<std::int64_t>(0, static_cast<std::int64_t>(c) - ctx.C.epsilon));
                        while (!dp.f_end[i]) ++i;  // exists by start_ok
                        cuts.push_back(c);         // piece start (reversed order)
                        std::size_t j;
                        if (dp.jmin[i] == 0) j = 0;
                        else {
                            j = static_cast<std::size_t>(dp.jmin[i]);
                            while (!dp.fs[j] || static_cast<std::int64_t>(i - j) < ctx.l) ++j;
                        }
                        cuts.push_back(i);  // piece end
                        c = j;
                    }
                    cuts.push_back(0);
                    std::reverse(cuts.begin(), cuts.end());
                    cuts.pop_back();  // drop duplicate of wc
                    cuts.push_back(wc);
                    cuts.push_back(wd);
                    // suffix chain from wd
                    std::size_t d = wd;
                    while (d != m) {
                        std::size_t k = d;
                        while (!dp.b_start[k]) ++k;  // exists by end_ok
                        std::size_t k2;
                        if (dp.kmax[k] == m) k2 = m;
                        else {
                            k2 = k + static_cast<std::size_t>(ctx.l);
                            while (k2 < dp.kmax[k] && !dp.end_ok(k2)) ++k2;
                        }
                        cuts.push_back(k);
                        cuts.push_back(k2);
                        d = k2;
                    }
                    CoarsePiecewiseGeodesic w;
                    VertexPath p;
                    for (auto idx : path_idx) p.vertices.push_back(ctx.g.id_of(idx));
                    w.path = std::move(p);
                    w.cuts = std::move(cuts);
                    w.l = ctx.l;
                    w.constants = ctx.C;
                    w.check_structure();
                    ctx.witnesses.emplace(ctx.g.id_of(v), std::move(w));
                }
            }
        }
    }
}

}  // namespace

Cylinder cylinder(const FineGraph& g, VertexId x, VertexId y, std::int64_t l,
                  const ConstantSet& C, std::size_t budget, bool keep_witnesses,
                  std::size_t geodesic_cap) {
    C.validate();
    if (l < 1) throw PreconditionError("cylinder constant l must be >= 1");
    Cylinder out;
    out.x = x;
    out.y = y;
    out.l = l;
    out.constants = C;
    if (x == y) {
        out.members = {x};
        out.complete = true;
        if (keep_witnesses)
            out.witnesses.emplace(x, CoarsePiecewiseGeodesic::single_piece(
                                         VertexPath{{x}}, l, C));
        return out;
    }

    SearchContext ctx{g, x, y, l, C, keep_witnesses, {}, {}, 0, 0,
                      C.half_lambda(), budget, 0, false, {}, {}};
    const std::size_t n = g.vertex_count();
    const std::int64_t d0 = distance(g, x, y);
    ctx.max_len = checked_mul(C.lambda, d0);
    ctx.window = C.local_window();

    // Search space: eps-conical neighborhood of one geodesic, together with
    // every enumerated geodesic (the cylinder must contain them all).
    geodesic_cap = std::min<std::size_t>(geodesic_cap, 64);  // viability mask width
    auto gs = all_geodesics(g, x, y, geodesic_cap);
    ctx.in_space.assign(n, 0);
    for (VertexId v : cone_union(g, first_geodesic(g, x, y), C.epsilon))
        ctx.in_space[g.index_of(v)] = 1;
    for (const auto& geo : gs.paths)
        for (VertexId v : geo.vertices) ctx.in_space[g.index_of(v)] = 1;

    ctx.close_mask.assign(n, 0);
    const std::int64_t close = checked_mul(2, C.epsilon);
    for (std::size_t k = 0; k < gs.paths.size(); ++k) {
        std::vector<std::size_t> src;
        for (VertexId v : gs.paths[k].vertices) src.push_back(g.index_of(v));
        auto row = bfs_distances_multi(g, src);
        for (std::size_t v = 0; v < n; ++v)
            if (row[v] != kUnreachable && static_cast<std::int64_t>(row[v]) <= close)
                ctx.close_mask[v] |= (std::uint64_t{1} << k);
    }
    ctx.member.assign(n, 0);

    // Iterative DFS over candidate paths. Each frame records what the push
    // spawned so it can be undone on backtrack.
    struct Frame {
        std::size_t next_neighbor = 0;
        std::uint64_t mask = 0;
        std::int64_t cut = 0;
        std::int64_t R = 0;
        bool piece_spawned = false;
        bool bridge_spawned = false;
    };
    const std::size_t ix = g.index_of(x), iy = g.index_of(y);
    std::vector<std::uint32_t> path{static_cast<std::uint32_t>(ix)};
    std::vector<Frame> frames(1);
    std::vector<std::size_t> piece_spawns;  // sorted piece-start params
    std::vector<std::size_t> bridge_spawns; // sorted bridge-start params

    frames[0].mask = ctx.close_mask[ix];
    frames[0].cut = 0;
    frames[0].R = 0;
    piece_spawns.push_back(0);
    // at parameter 0 the first piece may end immediately (no length demand)
    bridge_spawns.push_back(0);
    frames[0].bridge_spawned = true;

    auto alive_piece = [&](std::int64_t cut) {
        return !piece_spawns.empty() &&
               static_cast<std::int64_t>(piece_spawns.back()) >= cut;
    };
    auto min_alive_piece = [&](std::int64_t cut) -> std::int64_t {
        auto it = std::lower_bound(piece_spawns.begin(), piece_spawns.end(),
                                   static_cast<std::size_t>(std::max<std::int64_t>(0, cut)));
        return it == piece_spawns.end() ? std::numeric_limits<std::int64_t>::max()
                                        : static_cast<std::int64_t>(*it);
    };

    while (!path.empty() && !ctx.budget_hit) {
        const std::size_t t = path.size() - 1;
        Frame& fr = frames.back();
        const std::uint32_t cur = path.back();

        if (cur == iy && fr.next_neighbor == 0 && alive_piece(fr.cut)) {
            std::vector<std::int64_t> R(t + 1, 0);
            for (std::size_t i = 0; i <= t; ++i) R[i] = frames[i].R;
            mark_members(ctx, path, R);
        }
        const bool revisits_possible = ctx.window < ctx.max_len;
        if (cur == iy && !revisits_possible) {
            // no longer path can end at y again
            if (fr.piece_spawned) piece_spawns.pop_back();
            if (fr.bridge_spawned) bridge_spawns.pop_back();
            path.pop_back();
            frames.pop_back();
            continue;
        }

        auto nb = g.neighbor_indices(cur);
        bool advanced = false;
        for (std::size_t k = fr.next_neighbor; k < nb.size(); ++k) {
            const std::uint32_t w = nb[k];
            if (!ctx.in_space[w]) continue;
            if (static_cast<std::int64_t>(t) + 1 > ctx.max_len) break;
            const std::uint64_t nmask = fr.mask & ctx.close_mask[w];
            if (nmask == 0) continue;
            if (++ctx.expansions > ctx.budget) { ctx.budget_hit = true; break; }

            auto row = bfs_distances(g, w);
            // local quasi-geodesic lower bound within the window
            bool ok = true;
            const std::size_t s_lo = ctx.window >= static_cast<std::int64_t>(t) + 1
                                         ? 0
                                         : t + 1 - static_cast<std::size_t>(ctx.window);
            for (std::size_t s = t + 1; s-- > s_lo;) {
                const std::int64_t gap = static_cast<std::int64_t>(t + 1 - s);
                const std::int64_t d = row[path[s]];
                if (checked_mul(gap, ctx.half_lambda.den) >
                    checked_mul(d, ctx.half_lambda.num)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;

            // geodesic-window obstruction for pieces covering t+1
            const std::int64_t tp1 = static_cast<std::int64_t>(t) + 1;
            const std::size_t low_limit = C.mu >= tp1
                                              ? 0
                                              : static_cast<std::size_t>(tp1 - C.mu);
            std::size_t gmin = t + 1;
            for (std::size_t s = t + 1; s-- > low_limit;) {
                if (row[path[s]] == t + 1 - s) gmin = s;
                else break;
            }
            // gmin == low_limit: every window of length <= mu ending here is
            // geodesic, no piece-start constraint.
            const std::int64_t R =
                gmin > low_limit ? static_cast<std::int64_t>(gmin) : 0;
            const std::int64_t ncut = std::max(fr.cut, R);

            // spawn transitions at t+1
            bool piece_sp = false, bridge_sp = false;
            const std::size_t tnew = t + 1;
            const bool zero_alive = !piece_spawns.empty() && piece_spawns.front() == 0 &&
                                    ncut == 0;
            const std::int64_t minp = min_alive_piece(ncut);
            if ((zero_alive || minp <= static_cast<std::int64_t>(tnew) - l) &&
                (bridge_spawns.empty() || bridge_spawns.back() != tnew)) {
                bridge_spawns.push_back(tnew);
                bridge_sp = true;
            }
            bool brg_alive = !bridge_spawns.empty() &&
                             static_cast<std::int64_t>(bridge_spawns.back()) >=
                                 static_cast<std::int64_t>(tnew) - C.epsilon;
            if (brg_alive && (piece_spawns.empty() || piece_spawns.back() != tnew)) {
                piece_spawns.push_back(tnew);
                piece_sp = true;
            }
            const bool any_alive =
                (!piece_spawns.empty() &&
                 static_cast<std::int64_t>(piece_spawns.back()) >= ncut) ||
                brg_alive;
            if (!any_alive) {
                if (piece_sp) piece_spawns.pop_back();
                if (bridge_sp) bridge_spawns.pop_back();
                continue;
            }

            fr.next_neighbor = k + 1;
            path.push_back(w);
            Frame nf;
            nf.mask = nmask;
            nf.cut = ncut;
            nf.R = R;
            nf.piece_spawned = piece_sp;
            nf.bridge_spawned = bridge_sp;
            frames.push_back(nf);
            advanced = true;
            break;
        }
        if (ctx.budget_hit) break;
        if (!advanced) {
            if (fr.piece_spawned) piece_spawns.pop_back();
            if (fr.bridge_spawned) bridge_spawns.pop_back();
            path.pop_back();
            frames.pop_back();
        }
    }

    for (std::size_t i = 0; i < n; ++i)
        if (ctx.member[i]) out.members.push_back(g.id_of(i));
    out.complete = !ctx.budget_hit && !gs.truncated;
    out.witnesses = std::move(ctx.witnesses);
    return out;
}

EquivarianceResult check_equivariance(const FineGraph& g, const std::string& generator,
                                      VertexId x, VertexId y, std::int64_t l,
                                      const ConstantSet& C, std::size_t budget) {
    EquivarianceResult res;
    if (!g.has_action()) throw PreconditionError("graph carries no action");
    auto gx = g.apply(generator, x);
    auto gy = g.apply(generator, y);
    if (!gx || !gy) {
        res.detail = "endpoint image undefined (truncation boundary)";
        return res;
    }
    Cylinder a = cylinder(g, x, y, l, C, budget);
    Cylinder b = cylinder(g, *gx, *gy, l, C, budget);
    if (!a.complete || !b.complete) {
        res.detail = "cylinder search incomplete";
        return res;
    }
    std::vector<VertexId> mapped;
    for (VertexId v : a.members) {
        auto img = g.apply(generator, v);
        if (!img) {
            res.detail = "member image undefined (truncation boundary)";
            return res;
        }
        mapped.push_back(*img);
    }
    std::sort(mapped.begin(), mapped.end());
    res.verdict = mapped == b.members ? Verdict::pass : Verdict::fail;
    if (res.verdict == Verdict::fail) res.detail = "translated member sets differ";
    return res;
}

namespace {

std::optional<VertexId> apply_signed(const FineGraph& g, const std::string& label, VertexId v) {
    return g.apply(label, v);
}

std::string inverse_label(const std::string& label) {
    if (label.size() > 3 && label.substr(label.size() - 3) == "^-1")
        return label.substr(0, label.size() - 3);
    return label + "^-1";
}

// Composition alpha(beta(gamma(v))) over every vertex where defined; true
// when it acts as the identity wherever defined and is defined at base.
bool composes_to_identity(const FineGraph& g, const std::string& a, const std::string& b,
                          const std::string& c, VertexId base) {
    bool defined_at_base = false;
    for (VertexId v : g.vertex_ids()) {
        auto t1 = apply_signed(g, c, v);
        if (!t1) continue;
        auto t2 = apply_signed(g, b, *t1);
        if (!t2) continue;
        auto t3 = apply_signed(g, a, *t2);
        if (!t3) continue;
        if (*t3 != v) return false;
        if (v == base) defined_at_base = true;
    }
    return defined_at_base;
}

}  // namespace

SelectLReport select_l(const FineGraph& g, VertexId p, const std::vector<std::string>& F,
                       const ConstantSet& C, std::size_t budget) {
    if (!g.has_action()) throw PreconditionError("canonical constant search needs an action");
    C.validate();
    const std::int64_t n_expected =
        checked_mul(checked_mul(2 * static_cast<std::int64_t>(F.size()),
                                2 * static_cast<std::int64_t>(F.size())),
                    2 * static_cast<std::int64_t>(F.size()));
    if (C.n_triangle != n_expected)
        throw PreconditionError("constant set built for a different family size");

    std::vector<std::string> signed_labels;
    for (const auto& f : F) {
        signed_labels.push_back(f);
        signed_labels.push_back(inverse_label(f));
    }

    // Triangles (alpha, beta, gamma) with composition = identity, plus
    // digons (alpha, beta) with alpha*beta = 1 treated as two-letter
    // relations (gamma empty, z = x).
    struct Tri { std::string a, b, c; VertexId x, y, z; };
    std::vector<Tri> triangles;
    for (const auto& a : signed_labels) {
        auto ya = apply_signed(g, a, p);
        if (!ya) continue;
        for (const auto& b : signed_labels) {
            auto bp = apply_signed(g, b, p);
            if (!bp) continue;
            auto zab = apply_signed(g, a, *bp);  // z = alpha(beta(p)) = gamma^-1(p)
            if (!zab) continue;
            // digon: alpha*beta = 1, a two-letter relation with z = x
            if (*zab == p) {
                bool is_digon = true;
                for (VertexId v : g.vertex_ids()) {
                    auto t1 = apply_signed(g, b, v);
                    if (!t1) continue;
                    auto t2 = apply_signed(g, a, *t1);
                    if (!t2) continue;
                    if (*t2 != v) { is_digon = false; break; }
                }
                if (is_digon) triangles.push_back({a, b, "", p, *ya, p});
            }
            for (const auto& c : signed_labels) {
                if (!composes_to_identity(g, a, b, c, p)) continue;
                triangles.push_back({a, b, c, p, *ya, *zab});
            }
        }
    }

    const std::int64_t two_eps = checked_mul(2, C.epsilon);
    const std::int64_t candidate_count = C.phi_n / two_eps;
    SelectLReport report;
    if (candidate_count < 1)
        throw ModelError("no candidate constants: phi(n) < 2*epsilon");

    const Rational offset(checked_mul(4, checked_add(checked_mul(11, C.mu), C.phi_n)));
    std::map<std::tuple<VertexId, VertexId, std::int64_t>, Cylinder> cache;
    auto get_cyl = [&](VertexId a, VertexId b, std::int64_t l) -> const Cylinder& {
        auto key = std::make_tuple(a, b, l);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, cylinder(g, a, b, l, C.with_l(l), budget)).first;
        return it->second;
    };

    for (std::int64_t i = 1; i <= candidate_count; ++i) {
        const std::int64_t li =
            checked_add(checked_mul(10, C.mu), checked_mul(2, checked_mul(i, C.epsilon)));
        std::vector<TriangleInstance> instances;
        bool all_pass = true;
        for (const auto& tri : triangles) {
            TriangleInstance inst;
            inst.alpha = tri.a;
            inst.beta = tri.b;
            inst.gamma = tri.c;
            inst.x = tri.x;
            inst.y = tri.y;
            inst.z = tri.z;
            const std::array<std::array<VertexId, 3>, 3> corners = {{
                {tri.x, tri.y, tri.z}, {tri.y, tri.x, tri.z}, {tri.z, tri.x, tri.y}}};
            for (const auto& [corner, o1, o2] : corners) {
                TriangleCornerCheck chk;
                chk.corner = corner;
                chk.other1 = o1;
                chk.other2 = o2;
                chk.radius = gromov_product(g, corner, o1, o2) - offset;
                if (chk.radius <= Rational(0)) {
                    chk.vacuous = true;
                    chk.verdict = Verdict::pass;
                } else {
                    report.vacuous_only = false;
                    const Cylinder& c1 = get_cyl(corner, o1, li);
                    const Cylinder& c2 = get_cyl(corner, o2, li);
                    if (!c1.complete || !c2.complete) {
                        chk.verdict = Verdict::inconclusive;
                    } else {
                        auto row = bfs_distances(g, g.index_of(corner));
                        auto filt = [&](const Cylinder& c) {
                            std::vector<VertexId> out;
                            for (VertexId v : c.members)
                                if (Rational(row[g.index_of(v)]) <= chk.radius)
                                    out.push_back(v);
                            return out;
                        };
                        chk.verdict = filt(c1) == filt(c2) ? Verdict::pass : Verdict::fail;
                    }
                }
                if (chk.verdict != Verdict::pass) all_pass = false;
                inst.corners.push_back(chk);
            }
            instances.push_back(std::move(inst));
        }
        report.candidates.emplace_back(li, std::move(instances));
        if (all_pass) {
            report.chosen_l = li;
            return report;
        }
    }
    throw ModelError("no candidate constant satisfied all triangle equations");
}

}  // namespace coarsecyl
