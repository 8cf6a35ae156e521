#include "coarsecyl/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace coarsecyl {

FineGraph::FineGraph(std::vector<VertexId> vertices,
                     std::vector<std::pair<VertexId, VertexId>> edges,
                     std::vector<VertexId> parabolic,
                     std::map<std::string, VertexMap> action) {
    std::sort(vertices.begin(), vertices.end());
    if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end())
        throw ModelError("duplicate vertex id");
    if (vertices.empty()) throw ModelError("graph must have at least one vertex");
    ids_ = std::move(vertices);

    const std::size_t n = ids_.size();
    parabolic_.assign(n, false);
    for (VertexId p : parabolic) {
        if (!has_vertex(p)) throw ModelError("parabolic flag on unknown vertex");
        parabolic_[index_of(p)] = true;
    }

    std::vector<std::pair<std::uint32_t, std::uint32_t>> idx_edges;
    idx_edges.reserve(edges.size());
    for (auto [a, b] : edges) {
        if (a == b) throw ModelError("self-loop edge");
        if (!has_vertex(a) || !has_vertex(b)) throw ModelError("edge on unknown vertex");
        auto ia = static_cast<std::uint32_t>(index_of(a));
        auto ib = static_cast<std::uint32_t>(index_of(b));
        if (ia > ib) std::swap(ia, ib);
        idx_edges.emplace_back(ia, ib);
    }
    std::sort(idx_edges.begin(), idx_edges.end());
    idx_edges.erase(std::unique(idx_edges.begin(), idx_edges.end()), idx_edges.end());
    edge_total_ = idx_edges.size();

    for (auto [ia, ib] : idx_edges)
        if (parabolic_[ia] && parabolic_[ib])
            throw ModelError("adjacent parabolic vertices");

    std::vector<std::uint32_t> deg(n, 0);
    for (auto [ia, ib] : idx_edges) { ++deg[ia]; ++deg[ib]; }
    adj_offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) adj_offsets_[i + 1] = adj_offsets_[i] + deg[i];
    adj_.assign(2 * edge_total_, 0);
    std::vector<std::uint32_t> fill(adj_offsets_.begin(), adj_offsets_.end() - 1);
    for (auto [ia, ib] : idx_edges) {
        adj_[fill[ia]++] = ib;
        adj_[fill[ib]++] = ia;
    }
    for (std::size_t i = 0; i < n; ++i)
        std::sort(adj_.begin() + adj_offsets_[i], adj_.begin() + adj_offsets_[i + 1]);
    adj_ids_.resize(adj_.size());
    for (std::size_t k = 0; k < adj_.size(); ++k) adj_ids_[k] = ids_[adj_[k]];

    // Connectivity.
    {
        auto d = bfs_distances(*this, 0);
        for (std::size_t i = 0; i < n; ++i)
            if (d[i] == kUnreachable) throw ModelError("graph is not connected");
    }

    // Action validation: injective, flag-preserving, edge-preserving where
    // defined; bijective when total.
    for (auto& [label, perm_ids] : action) {
        if (perm_ids.size() != n) throw ModelError("action map '" + label + "' has wrong size");
        VertexMap fwd(n), bwd(n);
        std::size_t defined = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!perm_ids[i].has_value()) continue;
            VertexId img = *perm_ids[i];
            if (!has_vertex(img)) throw ModelError("action image not a vertex");
            const std::size_t j = index_of(img);
            if (parabolic_[i] != parabolic_[j])
                throw ModelError("action map '" + label + "' does not preserve parabolic flags");
            if (bwd[j].has_value()) throw ModelError("action map '" + label + "' not injective");
            fwd[i] = static_cast<VertexId>(j);
            bwd[j] = static_cast<VertexId>(i);
            ++defined;
        }
        if (defined == n) {
            for (std::size_t j = 0; j < n; ++j)
                if (!bwd[j].has_value())
                    throw ModelError("total action map '" + label + "' is not a bijection");
        }
        for (auto [ia, ib] : idx_edges) {
            if (fwd[ia].has_value() && fwd[ib].has_value()) {
                if (!has_edge(ids_[*fwd[ia]], ids_[*fwd[ib]]))
                    throw ModelError("action map '" + label + "' does not preserve edges");
            }
        }
        action_[label] = std::move(fwd);
        inverse_action_[label] = std::move(bwd);
    }
}

bool FineGraph::has_vertex(VertexId v) const {
    return std::binary_search(ids_.begin(), ids_.end(), v);
}

std::size_t FineGraph::index_of(VertexId v) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
    if (it == ids_.end() || *it != v) throw PreconditionError("unknown vertex id");
    return static_cast<std::size_t>(it - ids_.begin());
}

std::vector<VertexId> FineGraph::parabolic_vertices() const {
    std::vector<VertexId> out;
    for (std::size_t i = 0; i < ids_.size(); ++i)
        if (parabolic_[i]) out.push_back(ids_[i]);
    return out;
}

bool FineGraph::has_edge(VertexId u, VertexId v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::span<const VertexId> FineGraph::neighbors(VertexId v) const {
    const std::size_t i = index_of(v);
    return {adj_ids_.data() + adj_offsets_[i],
            static_cast<std::size_t>(adj_offsets_[i + 1] - adj_offsets_[i])};
}

std::span<const std::uint32_t> FineGraph::neighbor_indices(std::size_t index) const {
    return {adj_.data() + adj_offsets_[index],
            static_cast<std::size_t>(adj_offsets_[index + 1] - adj_offsets_[index])};
}

std::vector<std::pair<VertexId, VertexId>> FineGraph::edges() const {
    std::vector<std::pair<VertexId, VertexId>> out;
    out.reserve(edge_total_);
    for (std::size_t i = 0; i < ids_.size(); ++i)
        for (auto j : neighbor_indices(i))
            if (i < j) out.emplace_back(ids_[i], ids_[j]);
    return out;
}

std::optional<VertexId> FineGraph::apply(const std::string& label, VertexId v) const {
    const std::map<std::string, VertexMap>* table = &action_;
    std::string key = label;
    if (key.size() > 3 && key.substr(key.size() - 3) == "^-1") {
        key = key.substr(0, key.size() - 3);
        table = &inverse_action_;
    }
    auto it = table->find(key);
    if (it == table->end()) throw PreconditionError("unknown action label '" + label + "'");
    auto img = it->second[index_of(v)];
    if (!img.has_value()) return std::nullopt;
    return ids_[*img];
}

bool FineGraph::valid_path(const VertexPath& p) const {
    if (p.vertices.empty()) return false;
    for (VertexId v : p.vertices)
        if (!has_vertex(v)) return false;
    for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i)
        if (!has_edge(p.vertices[i], p.vertices[i + 1])) return false;
    return true;
}

bool FineGraph::is_simple_path(const VertexPath& p) const {
    std::set<VertexId> seen(p.vertices.begin(), p.vertices.end());
    return seen.size() == p.vertices.size();
}

std::vector<std::uint32_t> bfs_distances(const FineGraph& g, std::size_t source,
                                         std::size_t avoid, std::uint32_t max_depth) {
    std::vector<std::uint32_t> dist(g.vertex_count(), kUnreachable);
    if (source == avoid) return dist;
    std::deque<std::uint32_t> queue;
    dist[source] = 0;
    queue.push_back(static_cast<std::uint32_t>(source));
    while (!queue.empty()) {
        const std::uint32_t u = queue.front();
        queue.pop_front();
        if (dist[u] >= max_depth) continue;
        for (std::uint32_t w : g.neighbor_indices(u)) {
            if (w == avoid || dist[w] != kUnreachable) continue;
            dist[w] = dist[u] + 1;
            queue.push_back(w);
        }
    }
    return dist;
}

std::vector<std::uint32_t> bfs_distances_multi(const FineGraph& g,
                                               const std::vector<std::size_t>& sources) {
    std::vector<std::uint32_t> dist(g.vertex_count(), kUnreachable);
    std::deque<std::uint32_t> queue;
    for (std::size_t s : sources) {
        if (dist[s] == 0 && !queue.empty()) continue;
        if (dist[s] != kUnreachable) continue;
        dist[s] = 0;
        queue.push_back(static_cast<std::uint32_t>(s));
    }
    while (!queue.empty()) {
        const std::uint32_t u = queue.front();
        queue.pop_front();
        for (std::uint32_t w : g.neighbor_indices(u)) {
            if (dist[w] != kUnreachable) continue;
            dist[w] = dist[u] + 1;
            queue.push_back(w);
        }
    }
    return dist;
}

std::uint32_t distance(const FineGraph& g, VertexId u, VertexId v) {
    const std::size_t iu = g.index_of(u), iv = g.index_of(v);
    if (iu == iv) return 0;
    auto d = bfs_distances(g, iu);
    if (d[iv] == kUnreachable) throw ModelError("disconnected vertex pair");
    return d[iv];
}

GeodesicSet all_geodesics(const FineGraph& g, VertexId u, VertexId v, std::size_t cap) {
    GeodesicSet out;
    if (cap == 0) { out.truncated = true; return out; }
    const std::size_t iu = g.index_of(u), iv = g.index_of(v);
    if (iu == iv) {
        out.paths.push_back(VertexPath{{u}});
        return out;
    }
    auto du = bfs_distances(g, iu);
    auto dv = bfs_distances(g, iv);
    const std::uint32_t d = du[iv];
    if (d == kUnreachable) throw ModelError("disconnected vertex pair");

    // DFS over the shortest-path DAG, ascending neighbor index order.
    std::vector<std::uint32_t> stack{static_cast<std::uint32_t>(iu)};
    std::vector<std::size_t> next_pos{0};
    while (!stack.empty()) {
        const std::uint32_t cur = stack.back();
        if (cur == iv) {
            if (out.paths.size() == cap) { out.truncated = true; return out; }
            VertexPath p;
            p.vertices.reserve(stack.size());
            for (auto i : stack) p.vertices.push_back(g.id_of(i));
            out.paths.push_back(std::move(p));
            stack.pop_back();
            next_pos.pop_back();
            continue;
        }
        auto nb = g.neighbor_indices(cur);
        bool advanced = false;
        for (std::size_t k = next_pos.back(); k < nb.size(); ++k) {
            const std::uint32_t w = nb[k];
            if (du[w] == du[cur] + 1 && dv[w] != kUnreachable && du[w] + dv[w] == d) {
                next_pos.back() = k + 1;
                stack.push_back(w);
                next_pos.push_back(0);
                advanced = true;
                break;
            }
        }
        if (!advanced) {
            stack.pop_back();
            next_pos.pop_back();
        }
    }
    return out;
}

VertexPath first_geodesic(const FineGraph& g, VertexId u, VertexId v) {
    const std::size_t iu = g.index_of(u), iv = g.index_of(v);
    if (iu == iv) return VertexPath{{u}};
    auto dv = bfs_distances(g, iv);
    if (dv[iu] == kUnreachable) throw ModelError("disconnected vertex pair");
    VertexPath p;
    std::uint32_t cur = static_cast<std::uint32_t>(iu);
    p.vertices.push_back(u);
    while (cur != iv) {
        for (std::uint32_t w : g.neighbor_indices(cur)) {
            if (dv[w] + 1 == dv[cur]) {  // neighbors ascend, first hit = smallest id
                cur = w;
                p.vertices.push_back(g.id_of(w));
                break;
            }
        }
    }
    return p;
}

Rational gromov_product(const FineGraph& g, VertexId x, VertexId y, VertexId z) {
    const std::int64_t xy = distance(g, x, y);
    const std::int64_t xz = distance(g, x, z);
    const std::int64_t yz = distance(g, y, z);
    return Rational(xy + xz - yz, 2);
}

std::vector<VertexId> ball(const FineGraph& g, VertexId x, std::uint32_t r) {
    auto d = bfs_distances(g, g.index_of(x), static_cast<std::size_t>(-1), r);
    std::vector<VertexId> out;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] <= r) out.push_back(g.id_of(i));
    return out;
}

HyperbolicityResult hyperbolicity_delta(const FineGraph& g, std::size_t geodesic_cap) {
    const std::size_t n = g.vertex_count();
    HyperbolicityResult res;

    // M[p][v] = max over enumerated geodesics of pair p of dist(v, geodesic);
    // union[p] = vertices on some geodesic of pair p. Then a triple needs
    // delta >= min(M[xz][v], M[yz][v]) for every v on some geodesic [x,y].
    std::vector<std::vector<std::uint32_t>> side_max(n * n);
    std::vector<std::vector<std::uint32_t>> side_union(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            auto gs = all_geodesics(g, g.id_of(a), g.id_of(b), geodesic_cap);
            if (gs.truncated) res.lower_bound_only = true;
            std::vector<std::uint32_t> mx(n, 0);
            std::vector<bool> in_union(n, false);
            for (const auto& path : gs.paths) {
                std::vector<std::size_t> idx;
                idx.reserve(path.vertices.size());
                for (VertexId v : path.vertices) {
                    idx.push_back(g.index_of(v));
                    in_union[g.index_of(v)] = true;
                }
                auto dist_to = bfs_distances_multi(g, idx);
                for (std::size_t v = 0; v < n; ++v) mx[v] = std::max(mx[v], dist_to[v]);
            }
            std::vector<std::uint32_t> uni;
            for (std::size_t v = 0; v < n; ++v)
                if (in_union[v]) uni.push_back(static_cast<std::uint32_t>(v));
            side_max[a * n + b] = std::move(mx);
            side_union[a * n + b] = std::move(uni);
        }
    }
    auto pair_at = [&](std::size_t a, std::size_t b) -> std::size_t {
        return a < b ? a * n + b : b * n + a;
    };
    std::uint32_t delta = 0;
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = x + 1; y < n; ++y) {
            for (std::size_t z = y + 1; z < n; ++z) {
                const std::size_t xy = pair_at(x, y), xz = pair_at(x, z), yz = pair_at(y, z);
                for (std::uint32_t v : side_union[xy])
                    delta = std::max(delta, std::min(side_max[xz][v], side_max[yz][v]));
                for (std::uint32_t v : side_union[xz])
                    delta = std::max(delta, std::min(side_max[xy][v], side_max[yz][v]));
                for (std::uint32_t v : side_union[yz])
                    delta = std::max(delta, std::min(side_max[xy][v], side_max[xz][v]));
            }
        }
    }
    res.delta_raw = delta;
    return res;
}

}  // namespace coarsecyl
