#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coarsecyl/types.hpp"

namespace coarsecyl {

/// A path given by its vertex sequence; consecutive vertices must be
/// adjacent in the ambient graph. Length is the edge count.
struct VertexPath {
    std::vector<VertexId> vertices;

    std::size_t length() const { return vertices.empty() ? 0 : vertices.size() - 1; }
    VertexId front() const { return vertices.front(); }
    VertexId back() const { return vertices.back(); }

    VertexPath reversed() const {
        VertexPath r{vertices};
        std::reverse(r.vertices.begin(), r.vertices.end());
        return r;
    }
    /// Subpath over parameter interval [a, b] (inclusive indices).
    VertexPath sub(std::size_t a, std::size_t b) const {
        return VertexPath{{vertices.begin() + static_cast<std::ptrdiff_t>(a),
                           vertices.begin() + static_cast<std::ptrdiff_t>(b) + 1}};
    }

    friend bool operator==(const VertexPath& a, const VertexPath& b) = default;
    friend bool operator<(const VertexPath& a, const VertexPath& b) {
        return a.vertices < b.vertices;
    }
};

/// A generator's action on vertices. May be partial (truncated models):
/// entries without a value are undefined. Where defined it must be
/// injective, flag-preserving, and edge-preserving; a totally defined
/// action must be a bijection.
using VertexMap = std::vector<std::optional<VertexId>>;

/// Finite simplicial graph with a marked set of "parabolic" vertices
/// (the finite stand-ins for infinite-valence vertices) and an optional
/// labelled action. Immutable after construction; construction validates
/// all invariants: edges join distinct existing vertices, the graph is
/// connected, no two parabolic vertices are adjacent, and each action
/// map is consistent (see VertexMap).
class FineGraph {
public:
    FineGraph(std::vector<VertexId> vertices,
              std::vector<std::pair<VertexId, VertexId>> edges,
              std::vector<VertexId> parabolic = {},
              std::map<std::string, VertexMap> action = {});

    std::size_t vertex_count() const { return ids_.size(); }
    std::size_t edge_count() const { return edge_total_; }

    const std::vector<VertexId>& vertex_ids() const { return ids_; }

    bool has_vertex(VertexId v) const;
    /// Dense index of a vertex id (ids sorted ascending), for algorithms.
    std::size_t index_of(VertexId v) const;
    VertexId id_of(std::size_t index) const { return ids_[index]; }

    bool is_parabolic(VertexId v) const { return parabolic_[index_of(v)]; }
    std::vector<VertexId> parabolic_vertices() const;

    bool has_edge(VertexId u, VertexId v) const;
    /// Neighbors sorted by vertex id.
    std::span<const VertexId> neighbors(VertexId v) const;
    std::span<const std::uint32_t> neighbor_indices(std::size_t index) const;
    std::size_t degree(VertexId v) const { return neighbors(v).size(); }

    /// Sorted edge list as (min, max) id pairs.
    std::vector<std::pair<VertexId, VertexId>> edges() const;

    /// Validated action maps, stored index-to-index (use id_of to convert);
    /// prefer apply() for id-level lookups.
    const std::map<std::string, VertexMap>& action() const { return action_; }
    bool has_action() const { return !action_.empty(); }
    /// Image of v under the labelled generator, if defined. Label may be
    /// suffixed with '^-1' for the inverse map.
    std::optional<VertexId> apply(const std::string& label, VertexId v) const;

    /// Checks a path's adjacency structure against this graph.
    bool valid_path(const VertexPath& p) const;
    bool is_simple_path(const VertexPath& p) const;

private:
    std::vector<VertexId> ids_;                 // sorted
    std::vector<bool> parabolic_;               // by index
    std::vector<std::uint32_t> adj_offsets_;    // CSR over indices
    std::vector<std::uint32_t> adj_;            // neighbor indices, ascending
    std::vector<VertexId> adj_ids_;             // neighbor ids, ascending
    std::size_t edge_total_ = 0;
    std::map<std::string, VertexMap> action_;   // by index: index -> index image
    std::map<std::string, VertexMap> inverse_action_;
};

constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

/// BFS distances (in indices) from a source index; kUnreachable where not
/// reachable. `avoid` (if valid) is treated as deleted; `max_depth` truncates.
std::vector<std::uint32_t> bfs_distances(const FineGraph& g, std::size_t source,
                                         std::size_t avoid = static_cast<std::size_t>(-1),
                                         std::uint32_t max_depth = kUnreachable);

/// Multi-source BFS distances from a set of source indices.
std::vector<std::uint32_t> bfs_distances_multi(const FineGraph& g,
                                               const std::vector<std::size_t>& sources);

/// Graph distance between two vertices. Throws ModelError on a
/// disconnected pair (cannot happen for validated graphs).
std::uint32_t distance(const FineGraph& g, VertexId u, VertexId v);

/// Enumeration of geodesics with an explicit cap. `truncated` is set when
/// the cap stopped the enumeration; downstream checks must consume it.
struct GeodesicSet {
    std::vector<VertexPath> paths;  // lexicographic by vertex-id sequence
    bool truncated = false;
};

/// All geodesics from u to v, at most `cap` of them, enumerated over the
/// predecessor DAG of a bidirectional breadth-first search.
GeodesicSet all_geodesics(const FineGraph& g, VertexId u, VertexId v, std::size_t cap);

/// One deterministic geodesic (smallest-id tie-break at every hop).
VertexPath first_geodesic(const FineGraph& g, VertexId u, VertexId v);

/// Gromov product (y·z)_x = (|xy| + |xz| - |yz|) / 2, exact.
Rational gromov_product(const FineGraph& g, VertexId x, VertexId y, VertexId z);

/// Closed ball of radius r around x, sorted by id.
std::vector<VertexId> ball(const FineGraph& g, VertexId x, std::uint32_t r);

struct HyperbolicityResult {
    std::uint32_t delta_raw = 0;     // smallest delta making every enumerated triangle thin
    bool lower_bound_only = false;   // geodesic enumeration was truncated somewhere
};

/// Thin-triangle hyperbolicity constant: for every vertex triple and every
/// choice of enumerated geodesic sides, each side lies in the delta-
/// neighborhood of the union of the other two. `geodesic_cap` bounds the
/// per-pair enumeration; truncation flags the result as a lower bound.
HyperbolicityResult hyperbolicity_delta(const FineGraph& g, std::size_t geodesic_cap = 64);

}  // namespace coarsecyl
