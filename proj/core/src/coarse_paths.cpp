#include "coarsecyl/coarse_paths.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <random>

namespace coarsecyl {

bool is_local_geodesic(const FineGraph& g, const VertexPath& p, std::int64_t mu) {
    if (!g.valid_path(p)) throw PreconditionError("not a path of the graph");
    if (mu < 0) throw PreconditionError("negative locality scale");
    const std::size_t m = p.length();
    if (m == 0) return true;
    const std::size_t k = std::min<std::size_t>(m, static_cast<std::size_t>(
        std::min<std::int64_t>(mu, static_cast<std::int64_t>(m))));
    if (k == 0) return true;
    // Every window of length exactly k geodesic <=> every window <= mu is.
    for (std::size_t i = 0; i + k <= m; ++i) {
        auto row = bfs_distances(g, g.index_of(p.vertices[i]), static_cast<std::size_t>(-1),
                                 static_cast<std::uint32_t>(k));
        if (row[g.index_of(p.vertices[i + k])] != k) return false;
    }
    return true;
}

namespace {

// d(p(s), p(t)) for all t > s, checked row by row; returns false on the
// first pair violating either quasi-geodesic inequality within the window.
bool quasi_geodesic_windows(const FineGraph& g, const VertexPath& p, std::int64_t window,
                            const Rational& c) {
    const std::size_t m = p.length();
    for (std::size_t s = 0; s < m; ++s) {
        const std::size_t hi = std::min<std::size_t>(
            m, window < 0 ? m : s + static_cast<std::size_t>(window));
        if (hi <= s) continue;
        auto row = bfs_distances(g, g.index_of(p.vertices[s]), static_cast<std::size_t>(-1),
                                 static_cast<std::uint32_t>(hi - s));
        for (std::size_t t = s + 1; t <= hi; ++t) {
            const std::int64_t gap = static_cast<std::int64_t>(t - s);
            const std::uint32_t raw = row[g.index_of(p.vertices[t])];
            const std::int64_t d = raw == kUnreachable ? gap : static_cast<std::int64_t>(raw);
            // gap/c <= d  and  d <= c*gap
            if (checked_mul(gap, c.den) > checked_mul(d, c.num)) return false;
            if (checked_mul(d, c.den) > checked_mul(gap, c.num)) return false;
        }
    }
    return true;
}

}  // namespace

bool is_quasi_geodesic(const FineGraph& g, const VertexPath& p, const Rational& lambda) {
    if (!g.valid_path(p)) throw PreconditionError("not a path of the graph");
    if (lambda < Rational(1)) throw PreconditionError("quasi-geodesic constant below 1");
    return quasi_geodesic_windows(g, p, -1, lambda);
}

bool is_local_quasi_geodesic(const FineGraph& g, const VertexPath& p, std::int64_t L,
                             const Rational& c) {
    if (!g.valid_path(p)) throw PreconditionError("not a path of the graph");
    if (c < Rational(1)) throw PreconditionError("quasi-geodesic constant below 1");
    if (L < 0) throw PreconditionError("negative window length");
    return quasi_geodesic_windows(g, p, L, c);
}

CoarsePiecewiseGeodesic CoarsePiecewiseGeodesic::single_piece(VertexPath p, std::int64_t l,
                                                              ConstantSet constants) {
    CoarsePiecewiseGeodesic f;
    const std::size_t m = p.length();
    f.path = std::move(p);
    f.cuts = {0, m};
    f.l = l;
    f.constants = std::move(constants);
    return f;
}

CoarsePiecewiseGeodesic CoarsePiecewiseGeodesic::restrict(std::size_t a, std::size_t b) const {
    check_structure();
    if (a >= b || b > path.length())
        throw PreconditionError("bad restriction interval");
    CoarsePiecewiseGeodesic out;
    out.path = path.sub(a, b);
    out.l = l;
    out.constants = constants;
    // Induced subdivision: clamp every cut into [a, b], then drop empty
    // leading/trailing fragments that collapse to the interval ends.
    std::vector<std::size_t> cs;
    for (std::size_t i = 0; i < piece_count(); ++i) {
        auto [c, d] = piece(i);
        const std::size_t lo = std::max(a, c), hi = std::min(b, d);
        if (lo > hi) continue;  // piece entirely outside
        cs.push_back(lo - a);
        cs.push_back(hi - a);
    }
    if (cs.empty()) {
        // interval sits inside a single bridge: degenerate pieces at both
        // ends with the whole interval as the bridge between them
        cs = {0, 0, out.path.length(), out.path.length()};
    }
    if (cs.front() != 0) cs.insert(cs.begin(), {0, 0});
    if (cs.back() != out.path.length()) {
        cs.push_back(out.path.length());
        cs.push_back(out.path.length());
    }
    out.cuts = std::move(cs);
    out.check_structure();
    return out;
}

void CoarsePiecewiseGeodesic::check_structure() const {
    if (path.vertices.empty()) throw PreconditionError("empty path");
    if (cuts.size() < 2 || cuts.size() % 2 != 0)
        throw PreconditionError("cut sequence must pair piece starts and ends");
    if (cuts.front() != 0 || cuts.back() != path.length())
        throw PreconditionError("subdivision must span the whole parameter interval");
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i] > cuts[i + 1]) throw PreconditionError("cut sequence not monotone");
}

CpgValidation validate_cpg(const FineGraph& g, const CoarsePiecewiseGeodesic& f,
                           std::size_t geodesic_cap) {
    f.check_structure();
    if (!g.valid_path(f.path)) throw PreconditionError("not a path of the graph");
    const ConstantSet& C = f.constants;
    CpgValidation rep;

    rep.local_quasi_geodesic =
        is_local_quasi_geodesic(g, f.path, C.local_window(), C.half_lambda())
            ? Verdict::pass : Verdict::fail;

    rep.pieces_local_geodesic = Verdict::pass;
    for (std::size_t i = 0; i < f.piece_count(); ++i) {
        auto [c, d] = f.piece(i);
        if (!is_local_geodesic(g, f.path.sub(c, d), C.mu)) {
            rep.pieces_local_geodesic = Verdict::fail;
            break;
        }
    }

    rep.interior_piece_length = Verdict::pass;
    for (std::size_t i = 1; i + 1 < f.piece_count(); ++i) {
        auto [c, d] = f.piece(i);
        if (static_cast<std::int64_t>(d - c) < f.l) {
            rep.interior_piece_length = Verdict::fail;
            break;
        }
    }

    rep.bridge_length = Verdict::pass;
    for (std::size_t i = 0; i + 1 < f.piece_count(); ++i) {
        auto [d, c2] = f.bridge(i);
        if (static_cast<std::int64_t>(c2 - d) > C.epsilon) {
            rep.bridge_length = Verdict::fail;
            break;
        }
    }

    // 2*epsilon-neighborhood of some geodesic between the endpoints.
    auto gs = all_geodesics(g, f.path.front(), f.path.back(), geodesic_cap);
    bool any_pass = false;
    for (const auto& geo : gs.paths) {
        std::vector<std::size_t> src;
        src.reserve(geo.vertices.size());
        for (VertexId v : geo.vertices) src.push_back(g.index_of(v));
        auto row = bfs_distances_multi(g, src);
        bool ok = true;
        for (VertexId v : f.path.vertices) {
            if (row[g.index_of(v)] == kUnreachable ||
                static_cast<std::int64_t>(row[g.index_of(v)]) > checked_mul(2, C.epsilon)) {
                ok = false;
                break;
            }
        }
        if (ok) { any_pass = true; break; }
    }
    rep.neighborhood = any_pass ? Verdict::pass
                                : (gs.truncated ? Verdict::inconclusive : Verdict::fail);
    return rep;
}

namespace {

struct NearestPick {
    std::uint32_t dist = kUnreachable;
    VertexId id = 0;
    std::size_t pos = 0;
    bool found = false;
};

// Nearest vertex of `candidates` (with their positions) to `from`,
// tie-broken by (distance, vertex id, position).
NearestPick nearest_on(const FineGraph& g, VertexId from,
                       const std::vector<VertexId>& candidates, std::size_t lo,
                       std::size_t hi) {
    auto row = bfs_distances(g, g.index_of(from));
    NearestPick best;
    for (std::size_t k = lo; k <= hi; ++k) {
        const std::uint32_t d = row[g.index_of(candidates[k])];
        if (!best.found || d < best.dist ||
            (d == best.dist && candidates[k] < best.id) ||
            (d == best.dist && candidates[k] == best.id && k < best.pos)) {
            best = {d, candidates[k], k, true};
        }
    }
    return best;
}

}  // namespace

CoarsePiecewiseGeodesic reroute(const FineGraph& g, const CoarsePiecewiseGeodesic& f,
                                std::size_t s, const VertexPath& geod) {
    f.check_structure();
    if (s > f.path.length()) throw PreconditionError("parameter outside the path");
    if (geod.front() != f.path.front() || geod.back() != f.path.back())
        throw PreconditionError("geodesic endpoints do not match the path");
    if (!g.valid_path(geod) ||
        distance(g, geod.front(), geod.back()) != geod.length())
        throw PreconditionError("re-routing target is not a geodesic");

    // Locate the piece containing s.
    std::size_t piece_idx = f.piece_count();
    for (std::size_t i = 0; i < f.piece_count(); ++i) {
        auto [c, d] = f.piece(i);
        if (c <= s && s <= d) { piece_idx = i; break; }
    }
    if (piece_idx == f.piece_count())
        throw PreconditionError("parameter does not lie on a piece");
    auto [c, d] = f.piece(piece_idx);
    if (static_cast<std::int64_t>(s - c) <= checked_add(f.l, checked_mul(2, f.constants.epsilon)))
        throw PreconditionError("prefix of the piece too short to re-route");

    auto s2 = nearest_on(g, f.path.vertices[s], geod.vertices, 0, geod.vertices.size() - 1);
    auto s1 = nearest_on(g, s2.id, f.path.vertices, c, d);

    VertexPath bridge = first_geodesic(g, s1.id, s2.id);

    CoarsePiecewiseGeodesic out;
    out.l = f.l;
    out.constants = f.constants;
    out.path.vertices.assign(f.path.vertices.begin(),
                             f.path.vertices.begin() + static_cast<std::ptrdiff_t>(s1.pos) + 1);
    out.path.vertices.insert(out.path.vertices.end(), bridge.vertices.begin() + 1,
                             bridge.vertices.end());
    const std::size_t s2_param = out.path.vertices.size() - 1;
    out.path.vertices.insert(out.path.vertices.end(),
                             geod.vertices.begin() + static_cast<std::ptrdiff_t>(s2.pos) + 1,
                             geod.vertices.end());

    out.cuts.assign(f.cuts.begin(), f.cuts.begin() + static_cast<std::ptrdiff_t>(2 * piece_idx));
    out.cuts.push_back(c);
    out.cuts.push_back(s1.pos);
    out.cuts.push_back(s2_param);
    out.cuts.push_back(out.path.length());
    out.check_structure();
    return out;
}

CoarsePiecewiseGeodesic reroute_to(const FineGraph& g, const CoarsePiecewiseGeodesic& f,
                                   VertexId z, std::size_t geodesic_cap) {
    f.check_structure();
    const auto [c, b] = f.piece(f.piece_count() - 1);
    const VertexPath last = f.path.sub(c, b);
    if (distance(g, last.front(), last.back()) != last.length())
        throw PreconditionError("last piece is not a geodesic");
    const std::int64_t need = checked_add(f.l, checked_mul(2, f.constants.mu));
    if (static_cast<std::int64_t>(b - c) < need)
        throw PreconditionError("last piece shorter than l + 2*mu");

    auto gs = all_geodesics(g, f.path.front(), z, geodesic_cap);
    auto from_b = bfs_distances(g, g.index_of(f.path.back()));
    const VertexPath* target = nullptr;
    for (const auto& cand : gs.paths) {
        for (VertexId v : cand.vertices) {
            if (static_cast<std::int64_t>(from_b[g.index_of(v)]) <= f.constants.delta) {
                target = &cand;
                break;
            }
        }
        if (target) break;
    }
    if (!target)
        throw PreconditionError("no geodesic to z passes within delta of the endpoint");

    // y' on the target nearest to f(b); s at parameter c + l on the last
    // piece; s' on the target before y'; s'' back on the last piece.
    auto yp = nearest_on(g, f.path.back(), target->vertices, 0, target->vertices.size() - 1);
    const std::size_t sx = c + static_cast<std::size_t>(f.l);
    auto sp = nearest_on(g, f.path.vertices[sx], target->vertices, 0, yp.pos);
    auto spp = nearest_on(g, sp.id, f.path.vertices, sx, b);

    VertexPath bridge = first_geodesic(g, spp.id, sp.id);

    CoarsePiecewiseGeodesic out;
    out.l = f.l;
    out.constants = f.constants;
    out.path.vertices.assign(f.path.vertices.begin(),
                             f.path.vertices.begin() + static_cast<std::ptrdiff_t>(spp.pos) + 1);
    out.path.vertices.insert(out.path.vertices.end(), bridge.vertices.begin() + 1,
                             bridge.vertices.end());
    const std::size_t sp_param = out.path.vertices.size() - 1;
    out.path.vertices.insert(out.path.vertices.end(),
                             target->vertices.begin() + static_cast<std::ptrdiff_t>(sp.pos) + 1,
                             target->vertices.end());

    out.cuts.assign(f.cuts.begin(), f.cuts.end() - 2);
    if (out.cuts.empty()) out.cuts.push_back(c);
    else out.cuts.push_back(c);
    out.cuts.push_back(spp.pos);
    out.cuts.push_back(sp_param);
    out.cuts.push_back(out.path.length());
    out.check_structure();
    return out;
}

AppendixReport verify_appendix(const FineGraph& g, const CoarsePiecewiseGeodesic& f,
                               std::size_t geodesic_cap) {
    AppendixReport rep;
    rep.asserted = f.constants.regime == Regime::paper_faithful;
    auto validation = validate_cpg(g, f, geodesic_cap);
    if (rep.asserted && validation.overall() != Verdict::pass)
        throw PreconditionError("subdivision does not validate under its constants");

    const ConstantSet& C = f.constants;
    const std::size_t m = f.path.length();

    // Lower distortion bound: lambda * dist >= |t1 - t2|.
    rep.lower_bound_ok = true;
    for (std::size_t s = 0; s < m && rep.lower_bound_ok; ++s) {
        auto row = bfs_distances(g, g.index_of(f.path.vertices[s]));
        for (std::size_t t = s + 1; t <= m; ++t) {
            const std::int64_t d = row[g.index_of(f.path.vertices[t])];
            if (checked_mul(C.lambda, d) < static_cast<std::int64_t>(t - s)) {
                rep.lower_bound_ok = false;
                break;
            }
        }
    }

    // Piece interiors (>= 4*epsilon from the piece ends) within 2*delta of
    // the union of enumerated geodesics between the endpoints.
    auto gs = all_geodesics(g, f.path.front(), f.path.back(), geodesic_cap);
    std::vector<std::size_t> src;
    for (const auto& geo : gs.paths)
        for (VertexId v : geo.vertices) src.push_back(g.index_of(v));
    std::sort(src.begin(), src.end());
    src.erase(std::unique(src.begin(), src.end()), src.end());
    auto row = bfs_distances_multi(g, src);
    rep.closeness_ok = true;
    const std::int64_t margin = checked_mul(4, C.epsilon);
    for (std::size_t i = 0; i < f.piece_count() && rep.closeness_ok; ++i) {
        auto [c, d] = f.piece(i);
        for (std::size_t t = c; t <= d; ++t) {
            if (static_cast<std::int64_t>(t - c) < margin) continue;
            if (static_cast<std::int64_t>(d - t) < margin) continue;
            const std::uint32_t dd = row[g.index_of(f.path.vertices[t])];
            if (dd == kUnreachable || static_cast<std::int64_t>(dd) > checked_mul(2, C.delta)) {
                rep.closeness_ok = false;
                break;
            }
        }
    }
    return rep;
}

std::vector<Angle> minimax_cone_angle(const FineGraph& g, const Edge& e, VertexId v) {
    if (e.first != v) throw PreconditionError("edge not oriented at its apex");
    const std::size_t n = g.vertex_count();
    const std::size_t iv = g.index_of(v);
    auto dist = bfs_distances(g, iv);

    // Dijkstra over (vertex, incoming neighbor) states of the shortest-path
    // DAG, minimizing the running maximum of the traversed angles.
    std::map<std::pair<std::uint32_t, std::uint32_t>, Angle> best;
    using Item = std::pair<std::uint64_t, std::pair<std::uint32_t, std::uint32_t>>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    const std::size_t ie = g.index_of(e.second);

    auto raw_of = [](Angle a) -> std::uint64_t {
        return a.is_infinite() ? std::numeric_limits<std::uint64_t>::max() : a.finite_value();
    };

    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::uint32_t>> del_rows;
    auto angle_at = [&](std::size_t at, std::size_t n1, std::size_t n2) -> Angle {
        if (n1 == n2) return Angle(0);
        auto key = std::make_pair(at, std::min(n1, n2));
        auto it = del_rows.find(key);
        if (it == del_rows.end())
            it = del_rows.emplace(key, bfs_distances(g, std::min(n1, n2), at)).first;
        const std::uint32_t d = it->second[std::max(n1, n2)];
        return d == kUnreachable ? Angle::infinity() : Angle(d);
    };

    for (std::uint32_t w : g.neighbor_indices(iv)) {
        if (dist[w] != 1) continue;
        Angle a = (w == ie) ? Angle(0) : angle_at(iv, ie, w);
        auto key = std::make_pair(w, static_cast<std::uint32_t>(iv));
        if (!best.count(key) || a < best[key]) {
            best[key] = a;
            pq.push({raw_of(a), key});
        }
    }
    std::vector<Angle> out(n, Angle::infinity());
    out[iv] = Angle(0);
    while (!pq.empty()) {
        auto [cost_raw, key] = pq.top();
        pq.pop();
        auto it = best.find(key);
        if (it == best.end() || raw_of(it->second) != cost_raw) continue;
        auto [w, u] = key;
        if (best[key] < out[w]) out[w] = best[key];
        if (cost_raw == std::numeric_limits<std::uint64_t>::max()) continue;
        for (std::uint32_t x : g.neighbor_indices(w)) {
            if (dist[x] != dist[w] + 1) continue;
            Angle step = angle_at(w, u, x);
            Angle cand = std::max(best[key], step);
            auto nkey = std::make_pair(x, w);
            auto jt = best.find(nkey);
            if (jt == best.end() || cand < jt->second) {
                best[nkey] = cand;
                pq.push({raw_of(cand), nkey});
            }
        }
    }
    return out;
}

StabilityResult stability_constant(const FineGraph& g, const Rational& lambda,
                                   std::size_t samples, std::uint64_t seed,
                                   std::size_t budget, std::size_t geodesic_cap) {
    if (samples == 0) throw PreconditionError("samples must be positive");
    if (lambda < Rational(1)) throw PreconditionError("quasi-geodesic constant below 1");
    const std::size_t n = g.vertex_count();

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
    if (pairs.size() > samples) {
        std::mt19937_64 rng(seed);
        std::shuffle(pairs.begin(), pairs.end(), rng);
        pairs.resize(samples);
        std::sort(pairs.begin(), pairs.end());
    }

    StabilityResult res;
    std::size_t expansions = 0;
    for (auto [ia, ib] : pairs) {
        ++res.pairs_examined;
        const VertexId x = g.id_of(ia), y = g.id_of(ib);
        auto gs = all_geodesics(g, x, y, geodesic_cap);

        // Distance-to-geodesic rows and minimax cone angles per geodesic edge.
        std::vector<std::vector<std::uint32_t>> to_geo;
        for (const auto& geo : gs.paths) {
            std::vector<std::size_t> src;
            for (VertexId v : geo.vertices) src.push_back(g.index_of(v));
            to_geo.push_back(bfs_distances_multi(g, src));
        }
        std::vector<std::pair<std::vector<Angle>, std::vector<std::uint32_t>>> apex;
        for (const auto& geo : gs.paths) {
            for (std::size_t i = 0; i + 1 < geo.vertices.size(); ++i) {
                const VertexId a = geo.vertices[i], b2 = geo.vertices[i + 1];
                apex.push_back({minimax_cone_angle(g, {a, b2}, a),
                                bfs_distances(g, g.index_of(a))});
                apex.push_back({minimax_cone_angle(g, {b2, a}, b2),
                                bfs_distances(g, g.index_of(b2))});
            }
        }

        // DFS over simple paths from x satisfying the two-sided bounds.
        std::vector<std::uint32_t> path{static_cast<std::uint32_t>(ia)};
        std::vector<bool> on_path(n, false);
        on_path[ia] = true;
        std::vector<std::size_t> next_pos{0};
        std::vector<std::vector<std::uint32_t>> rows{bfs_distances(g, ia)};

        auto handle_complete = [&]() {
            ++res.quasi_geodesics_found;
            // Deviation: min over geodesics of the max distance of a path
            // vertex to that geodesic.
            std::int64_t dev = std::numeric_limits<std::int64_t>::max();
            for (const auto& row : to_geo) {
                std::int64_t mx = 0;
                for (std::uint32_t w : path)
                    mx = std::max<std::int64_t>(mx, row[w]);
                dev = std::min(dev, mx);
            }
            res.D_emp = std::max(res.D_emp, dev);
            for (std::uint32_t w : path) {
                std::int64_t bestN = std::numeric_limits<std::int64_t>::max();
                for (const auto& [angles, dists] : apex) {
                    if (angles[w].is_infinite()) continue;
                    const std::int64_t N =
                        std::max<std::int64_t>(dists[w], angles[w].finite_value());
                    bestN = std::min(bestN, N);
                }
                if (bestN == std::numeric_limits<std::int64_t>::max())
                    throw ModelError("vertex of a quasi-geodesic lies in no finite cone");
                res.N_emp = std::max(res.N_emp, bestN);
            }
        };

        while (!path.empty()) {
            const std::uint32_t cur = path.back();
            if (cur == ib && next_pos.back() == 0) handle_complete();
            if (cur == ib) {  // no extension past the endpoint can end at it again
                on_path[cur] = false;
                path.pop_back();
                next_pos.pop_back();
                rows.pop_back();
                continue;
            }
            auto nb = g.neighbor_indices(cur);
            bool advanced = false;
            for (std::size_t k = next_pos.back(); k < nb.size(); ++k) {
                const std::uint32_t w = nb[k];
                if (on_path[w]) continue;
                if (++expansions > budget)
                    throw BudgetError("quasi-geodesic enumeration budget exceeded");
                auto row = bfs_distances(g, w);
                bool ok = true;
                const std::size_t t = path.size();
                for (std::size_t s = 0; s < t; ++s) {
                    const std::int64_t gap = static_cast<std::int64_t>(t - s);
                    const std::int64_t d = row[path[s]];
                    if (checked_mul(gap, lambda.den) > checked_mul(d, lambda.num) ||
                        checked_mul(d, lambda.den) > checked_mul(gap, lambda.num)) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) continue;
                next_pos.back() = k + 1;
                path.push_back(w);
                on_path[w] = true;
                next_pos.push_back(0);
                rows.push_back(std::move(row));
                advanced = true;
                break;
            }
            if (!advanced) {
                on_path[path.back()] = false;
                path.pop_back();
                next_pos.pop_back();
                rows.pop_back();
            }
        }
    }
    if (res.quasi_geodesics_found == 0)
        throw ModelError("no quasi-geodesics found");
    return res;
}

}  // namespace coarsecyl
