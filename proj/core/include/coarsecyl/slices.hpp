#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "coarsecyl/cylinders.hpp"

namespace coarsecyl {

enum class SliceKind : std::uint8_t { regular, parabolic };

struct Slice {
    SliceKind kind = SliceKind::regular;
    std::vector<VertexId> members;  // sorted; singleton iff parabolic
    Angle angle;                    // parabolic slices only
    /// Regular slice reduced to a parabolic-flagged vertex; ordered and
    /// marked as regular, flagged for reporting.
    bool flagged_singleton = false;

    bool same_members(const Slice& other) const { return members == other.members; }
};

/// Interior singletons {v} of a complete cylinder admitting two cylinder
/// neighbors w, w' with angle at least theta at v; each carries the max
/// such angle over all cylinder neighbor pairs.
std::vector<Slice> parabolic_slices(const FineGraph& g, const Cylinder& cyl,
                                    std::int64_t theta);

struct SplitResult {
    Cylinder left, right;
    Verdict union_identity = Verdict::inconclusive;        // left ∪ right = cyl
    Verdict intersection_identity = Verdict::inconclusive; // left ∩ right = {v}
};

/// Splits a cylinder at an interior vertex carrying an angle above
/// theta - 20*D on some enumerated geodesic; refuses otherwise.
SplitResult split_cylinder(const FineGraph& g, const Cylinder& cyl, VertexId v,
                           std::size_t budget, std::size_t geodesic_cap = 64);

struct NeighborhoodSets {
    std::vector<VertexId> left;   // strictly nearer the first endpoint, > 100*delta away
    std::vector<VertexId> right;  // strictly farther from the first endpoint, > 100*delta away
};

/// The one-sided neighborhood sets of x in a parabolic-free cylinder.
NeighborhoodSets neighborhood_sets(const FineGraph& g, const Cylinder& cyl, VertexId x);

/// The signed four-term set-difference expression
///   |L(x)\L(y)| - |L(y)\L(x)| + |R(y)\R(x)| - |R(x)\R(y)|.
std::int64_t diff(const FineGraph& g, const Cylinder& cyl, VertexId x, VertexId y);

struct SliceDecomposition {
    Cylinder cyl;
    std::vector<Slice> slices;                 // S_0 = {x}, ..., last = {y}
    std::map<VertexId, std::size_t> position;  // member -> slice index
};

/// Ordered slice decomposition: endpoints first/last, parabolic singletons
/// at their geodesic positions, regular slices between them ordered by the
/// difference cocycle.
SliceDecomposition order_slices(const FineGraph& g, VertexId x, VertexId y, std::int64_t l,
                                const ConstantSet& C, std::size_t budget,
                                std::size_t geodesic_cap = 64);

struct HoleInfo {
    std::size_t begin = 0;  // slice index range in the owning decomposition
    std::size_t end = 0;    // half-open; empty when begin >= end
    Verdict size_bound = Verdict::pass;
    Verdict angle_bound = Verdict::pass;

    std::size_t size() const { return end > begin ? end - begin : 0; }
};

struct TriangleDecomposition {
    VertexId x = 0, y = 0, z = 0;
    SliceDecomposition xy, xz, yz;
    std::size_t shared_prefix = 0;  // S-block: head of xy = head of xz
    std::size_t shared_t = 0;       // T-block: reversed tail of xy = head of yz
    std::size_t shared_v = 0;       // V-block: tail of xz = tail of yz
    HoleInfo hole_xy, hole_xz, hole_yz;
    Verdict locality = Verdict::pass;
    std::vector<std::string> hard_failures;  // bound violations under locked constants
};

/// Slice decompositions of the triangle (p, alpha p, alpha beta p) with
/// maximal shared blocks, the residual holes, and the hole-size/-angle and
/// locality checks evaluated on the instance.
TriangleDecomposition triangle_slices(const FineGraph& g, VertexId p, const std::string& alpha,
                                      const std::string& beta, const std::string& gamma,
                                      std::int64_t l, const ConstantSet& C, std::size_t budget,
                                      std::size_t geodesic_cap = 64);

}  // namespace coarsecyl
