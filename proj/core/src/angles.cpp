#include "coarsecyl/angles.hpp"

#include "coarsecyl/parallel.hpp"

#include <algorithm>
#include <deque>

namespace coarsecyl {

Angle edge_angle(const FineGraph& g, VertexId v, const Edge& e1, const Edge& e2) {
    if (e1.first != v || e2.first != v)
        throw PreconditionError("edges not oriented at the shared vertex");
    if (!g.has_edge(e1.first, e1.second) || !g.has_edge(e2.first, e2.second))
        throw PreconditionError("angle of a non-edge");
    if (e1.second == e2.second) return Angle(0);
    auto d = bfs_distances(g, g.index_of(e1.second), g.index_of(v));
    const std::uint32_t dist = d[g.index_of(e2.second)];
    if (dist == kUnreachable) return Angle::infinity();
    return Angle(dist);
}

Angle path_angle_at(const FineGraph& g, const VertexPath& p, std::size_t pos) {
    if (pos == 0 || pos + 1 >= p.vertices.size())
        throw PreconditionError("path angle only defined at interior positions");
    const VertexId v = p.vertices[pos];
    return edge_angle(g, v, {v, p.vertices[pos - 1]}, {v, p.vertices[pos + 1]});
}

Angle max_angle(const FineGraph& g, const VertexPath& p) {
    if (!g.valid_path(p)) throw PreconditionError("not a path of the graph");
    if (!g.is_simple_path(p)) throw PreconditionError("max_angle requires a simple path");
    Angle best(0);
    for (std::size_t i = 1; i + 1 < p.vertices.size(); ++i)
        best = std::max(best, path_angle_at(g, p, i));
    return best;
}

namespace {

// Per-call memo of vertex-deleted BFS rows: key (deleted vertex, source).
class DeletedBfsCache {
public:
    explicit DeletedBfsCache(const FineGraph& g) : g_(g) {}
    const std::vector<std::uint32_t>& row(std::size_t deleted, std::size_t source) {
        auto key = std::make_pair(deleted, source);
        auto it = rows_.find(key);
        if (it != rows_.end()) return it->second;
        return rows_.emplace(key, bfs_distances(g_, source, deleted)).first->second;
    }
    Angle angle(std::size_t at, std::size_t n1, std::size_t n2) {
        if (n1 == n2) return Angle(0);
        const auto& r = row(at, std::min(n1, n2));
        const std::uint32_t d = r[std::max(n1, n2)];
        return d == kUnreachable ? Angle::infinity() : Angle(d);
    }

private:
    const FineGraph& g_;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::uint32_t>> rows_;
};

}  // namespace

std::vector<VertexId> cone(const FineGraph& g, const Edge& e, VertexId v,
                           std::uint32_t d, std::int64_t theta) {
    if (e.first != v) throw PreconditionError("cone edge not oriented at its apex");
    if (!g.has_edge(e.first, e.second)) throw PreconditionError("cone apex edge missing");

    const std::size_t iv = g.index_of(v);
    auto dist = bfs_distances(g, iv, static_cast<std::size_t>(-1), d);
    DeletedBfsCache cache(g);

    // States (w, incoming neighbor u) reachable along geodesics from v whose
    // interior angles and whose initial angle with e stay <= theta. Any
    // geodesic from v is a path of the breadth-first DAG and vice versa.
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    std::deque<std::pair<std::uint32_t, std::uint32_t>> queue;
    std::vector<bool> member(g.vertex_count(), false);
    member[iv] = true;

    const std::size_t ie = g.index_of(e.second);
    if (d >= 1) {
        for (std::uint32_t w : g.neighbor_indices(iv)) {
            if (dist[w] != 1) continue;
            Angle first = (w == ie) ? Angle(0) : cache.angle(iv, ie, w);
            if (!first.le(theta)) continue;
            seen.insert({w, static_cast<std::uint32_t>(iv)});
            queue.push_back({w, static_cast<std::uint32_t>(iv)});
            member[w] = true;
        }
    }
    while (!queue.empty()) {
        auto [w, u] = queue.front();
        queue.pop_front();
        if (dist[w] >= d) continue;
        for (std::uint32_t x : g.neighbor_indices(w)) {
            if (dist[x] != dist[w] + 1) continue;
            if (seen.count({x, w})) continue;
            if (!cache.angle(w, u, x).le(theta)) continue;
            seen.insert({x, w});
            queue.push_back({x, w});
            member[x] = true;
        }
    }
    std::vector<VertexId> out;
    for (std::size_t i = 0; i < member.size(); ++i)
        if (member[i]) out.push_back(g.id_of(i));
    return out;
}

std::vector<VertexId> cone_union(const FineGraph& g, const VertexPath& seg, std::int64_t eps) {
    if (seg.length() == 0) throw PreconditionError("cone union of a zero-length segment");
    if (eps < 0) throw PreconditionError("negative cone radius");
    std::set<VertexId> out;
    const std::uint32_t r = static_cast<std::uint32_t>(
        std::min<std::int64_t>(eps, std::numeric_limits<std::uint32_t>::max()));
    for (std::size_t i = 0; i + 1 < seg.vertices.size(); ++i) {
        const VertexId a = seg.vertices[i], b = seg.vertices[i + 1];
        for (VertexId w : cone(g, {a, b}, a, r, eps)) out.insert(w);
        for (VertexId w : cone(g, {b, a}, b, r, eps)) out.insert(w);
    }
    return {out.begin(), out.end()};
}

Circuit canonical_circuit(std::vector<VertexId> cyclic) {
    const std::size_t n = cyclic.size();
    if (n < 3) throw PreconditionError("circuit shorter than 3");
    std::vector<VertexId> best;
    for (int dir = 0; dir < 2; ++dir) {
        for (std::size_t s = 0; s < n; ++s) {
            std::vector<VertexId> cand(n);
            for (std::size_t k = 0; k < n; ++k)
                cand[k] = dir == 0 ? cyclic[(s + k) % n] : cyclic[(s + n - k) % n];
            if (best.empty() || cand < best) best = std::move(cand);
        }
    }
    return Circuit{best};
}

std::set<Circuit> circuits_through(const FineGraph& g, const Edge& e,
                                   std::size_t max_len, std::size_t budget) {
    const VertexId a = e.first, b = e.second;
    if (!g.has_edge(a, b)) throw PreconditionError("circuits through a non-edge");
    std::set<Circuit> out;
    if (max_len < 3) return out;

    const std::size_t ia = g.index_of(a), ib = g.index_of(b);
    auto dist_a = bfs_distances(g, ia);  // lower bound on remaining length

    std::vector<std::uint32_t> path{static_cast<std::uint32_t>(ib)};
    std::vector<bool> on_path(g.vertex_count(), false);
    on_path[ib] = true;
    std::vector<std::size_t> next_pos{0};
    std::size_t expansions = 0;

    // Simple paths b -> a of length in [2, max_len-1] not using edge e;
    // each circuit through e corresponds to exactly one of them.
    while (!path.empty()) {
        const std::uint32_t cur = path.back();
        auto nb = g.neighbor_indices(cur);
        bool advanced = false;
        for (std::size_t k = next_pos.back(); k < nb.size(); ++k) {
            const std::uint32_t w = nb[k];
            if (cur == ib && w == ia) continue;  // would reuse e
            if (w == ia) {
                next_pos.back() = k + 1;
                if (path.size() >= 2) {
                    std::vector<VertexId> cyc;
                    cyc.push_back(a);
                    for (std::uint32_t i : path) cyc.push_back(g.id_of(i));
                    std::reverse(cyc.begin() + 1, cyc.end());
                    out.insert(canonical_circuit(std::move(cyc)));
                }
                advanced = true;
                break;
            }
            if (on_path[w]) continue;
            if (path.size() + dist_a[w] + 1 > max_len) continue;  // prune
            if (++expansions > budget)
                throw BudgetError("circuit enumeration budget exceeded");
            next_pos.back() = k + 1;
            path.push_back(w);
            on_path[w] = true;
            next_pos.push_back(0);
            advanced = true;
            break;
        }
        if (!advanced) {
            on_path[path.back()] = false;
            path.pop_back();
            next_pos.pop_back();
        }
    }
    return out;
}

FinenessReport fineness_report(const FineGraph& g, std::size_t L, std::size_t budget_per_edge) {
    FinenessReport rep;
    rep.length_bound = L;
    const auto edges = g.edges();
    std::vector<std::size_t> counts(edges.size());
    parallel_for(edges.size(), [&](std::size_t i) {
        counts[i] = circuits_through(g, edges[i], L, budget_per_edge).size();
    });
    for (std::size_t i = 0; i < edges.size(); ++i) {
        rep.per_edge[edges[i]] = counts[i];
        rep.uniform_bound = std::max(rep.uniform_bound, counts[i]);
        ++rep.histogram[counts[i]];
    }
    return rep;
}

RhoReport rho_constant(const FineGraph& g) {
    RhoReport rep;
    bool any_pair = false;
    bool any_finite = false;
    for (VertexId v : g.vertex_ids()) {
        if (g.is_parabolic(v)) continue;
        auto nb = g.neighbors(v);
        if (nb.size() < 2) continue;
        any_pair = true;
        const std::size_t iv = g.index_of(v);
        for (std::size_t i = 0; i < nb.size(); ++i) {
            auto row = bfs_distances(g, g.index_of(nb[i]), iv);
            for (std::size_t j = i + 1; j < nb.size(); ++j) {
                const std::uint32_t d = row[g.index_of(nb[j])];
                if (d == kUnreachable) {
                    rep.infinite_pairs.emplace_back(v, nb[i], nb[j]);
                } else {
                    any_finite = true;
                    rep.rho = std::max<std::int64_t>(rep.rho, d);
                }
            }
        }
    }
    if (!any_pair)
        throw PreconditionError("no non-parabolic vertex of degree >= 2");
    if (!any_finite)
        throw ModelError("all angles at non-parabolic vertices are infinite; no rho exists");
    return rep;
}

ChannelSet channels(const FineGraph& g, const VertexPath& seg, std::int64_t eps,
                    std::size_t budget) {
    if (seg.length() == 0)
        throw PreconditionError("channels require a segment with at least one edge");
    if (!g.valid_path(seg)) throw PreconditionError("segment is not a path");
    if (distance(g, seg.front(), seg.back()) != seg.length())
        throw PreconditionError("segment is not a geodesic");

    const auto uni = cone_union(g, seg, eps);
    std::vector<bool> in_union(g.vertex_count(), false);
    for (VertexId w : uni) in_union[g.index_of(w)] = true;

    std::set<VertexPath> found;
    std::size_t work = 0;
    for (std::size_t i = 0; i < uni.size(); ++i) {
        for (std::size_t j = i + 1; j < uni.size(); ++j) {
            if (distance(g, uni[i], uni[j]) < seg.length()) continue;
            auto gs = all_geodesics(g, uni[i], uni[j], budget);
            if (gs.truncated) throw BudgetError("channel enumeration budget exceeded");
            for (auto& p : gs.paths) {
                work += p.vertices.size();
                if (work > budget) throw BudgetError("channel enumeration budget exceeded");
                bool inside = true;
                for (VertexId w : p.vertices)
                    if (!in_union[g.index_of(w)]) { inside = false; break; }
                if (!inside) continue;
                // forward and reverse identified
                VertexPath canon = p.vertices.front() <= p.vertices.back() ? p : p.reversed();
                found.insert(std::move(canon));
            }
        }
    }
    ChannelSet out;
    out.channels.assign(found.begin(), found.end());
    out.count = out.channels.size();
    return out;
}

}  // namespace coarsecyl
