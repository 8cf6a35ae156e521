#pragma once

#include <cstdint>

#include "coarsecyl/graph.hpp"

namespace coarsecyl {
namespace fixtures {

/// Path graph on n vertices 0..n-1.
FineGraph path_graph(std::size_t n);

/// Cycle on n >= 3 vertices, with the rotation action "r".
FineGraph cycle_graph(std::size_t n);

/// Two hub vertices joined by `strands` disjoint paths of `strand_len`
/// edges each (strand_len >= 2 keeps the graph simple).
FineGraph theta_graph(std::size_t strands = 3, std::size_t strand_len = 2);

/// Ladder: two rails of n vertices with rungs; 2n vertices.
FineGraph ladder_graph(std::size_t n);

/// Balanced binary tree of the given depth.
FineGraph binary_tree(std::size_t depth);

/// Star of `rays` paths of length `ray_len` glued at a center; the spider
/// used for tripod-style checks.
FineGraph spider(std::size_t rays, std::size_t ray_len);

}  // namespace fixtures
}  // namespace coarsecyl
