#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coarsecyl/presentation.hpp"
#include "coarsecyl/slices.hpp"

namespace coarsecyl {

/// Triangulated 2-complex of a triangular presentation: one loop per
/// generator, one face per relator (boundary word of length 2 or 3).
struct VanKampenComplex {
    std::size_t generator_count = 0;
    struct Face {
        std::vector<int> boundary;  // signed generator letters
    };
    std::vector<Face> faces;

    static VanKampenComplex from_presentation(const Presentation& p);
};

struct Marking {
    std::size_t edge = 0;   // generator index
    std::size_t index = 0;  // 1-based position along the loop
    Rational position;      // index / (marking count + 1)
    std::size_t slice = 0;  // slice index in the edge decomposition
};

/// Markings of one edge: one per interior regular slice, two consecutive
/// per interior parabolic slice, in slice order. Endpoint slices receive
/// no marking.
std::vector<Marking> markings_for_edge(const SliceDecomposition& dec);

/// One side of a face: the edge markings in boundary-traversal order with
/// their translated member sets ("positioned" into the face's triangle).
struct SidePlacement {
    std::size_t generator = 0;
    bool reversed = false;                // side traverses the loop backwards
    std::size_t marking_count = 0;        // = markings of the edge
    std::vector<std::size_t> edge_marking;           // traversal pos -> edge marking (0-based)
    std::vector<SliceKind> kind;                     // traversal pos -> slice kind
    std::vector<std::vector<VertexId>> positioned;   // traversal pos -> translated slice
    std::vector<char> in_hole;                       // traversal pos -> lies in this face's hole
    /// Positioned full slice sequence (including endpoint slices), used by
    /// the corner-block alignment.
    std::vector<std::vector<VertexId>> sequence;
    std::vector<std::size_t> hole_range = {0, 0};    // [begin, end) in sequence indices
};

struct FaceAlignment {
    std::size_t face = 0;
    std::vector<SidePlacement> sides;  // 2 or 3, in boundary order
};

struct FaceArc {
    std::size_t side1 = 0, pos1 = 0;  // traversal coordinates
    std::size_t side2 = 0, pos2 = 0;
};

struct FaceLamination {
    std::vector<FaceArc> regular;
    std::vector<std::pair<std::size_t, std::size_t>> singular;  // markings joined to p_T
    bool has_singular_point = false;
};

/// Regular arcs between markings of coinciding slices (one-cylinder
/// parabolic case: two nested arcs; two-cylinder case: three), singular
/// arcs from the leftover markings to a fresh singular point. Verifies the
/// chord diagram is non-crossing and the leftover markings share a
/// complementary region; violations are model errors.
FaceLamination face_lamination(const FaceAlignment& alignment);

struct GapId {
    std::size_t edge = 0;
    std::size_t gap = 0;  // between edge markings gap and gap+1 (0-based)
    friend auto operator<=>(const GapId&, const GapId&) = default;
};

struct KEdge {
    std::size_t face = 0;
    std::size_t region = 0;  // complementary region of the face lamination
    GapId a, b;              // endpoints, region-walk order
    std::size_t a_side = 0;  // face side carrying each endpoint slot
    std::size_t b_side = 0;
    std::size_t cell_near = 0;  // global cell between this edge and the boundary
    std::size_t cell_far = 0;   // global cell on the other side
};

struct LaminationGraph {
    std::vector<GapId> gap_vertices;                  // sorted
    std::vector<KEdge> edges;                         // all of K
    std::vector<std::size_t> edge_component;          // per edge: K component id
    std::vector<char> component_pruned;               // component id -> touches a hole
    std::vector<char> gap_in_hole;                    // per gap vertex
    std::size_t component_count = 0;

    std::size_t cell_count = 0;
    std::vector<std::size_t> cell_piece;              // cell -> piece id (complement of K')
    std::size_t piece_count = 0;
    std::vector<char> piece_has_singular;             // piece id -> contains a singular point

    bool k_prime_empty() const {
        for (std::size_t e = 0; e < edges.size(); ++e)
            if (!component_pruned[edge_component[e]]) return false;
        return true;
    }
};

enum class ComponentType : std::uint8_t { type_I, type_II };

/// Two-sidedness of the surviving K components via side-class counting of
/// the ribbon structure (boundary walks of a regular neighborhood). Edges
/// of the polyhedron used by three or more face sides are an error.
std::map<std::size_t, ComponentType> classify_components(const VanKampenComplex& P,
                                                         const LaminationGraph& KG);

struct SkeletonVertex {
    bool is_type_II_component = false;
    std::size_t piece = 0;       // piece id, or K' component id for type II
    std::int64_t euler = 0;      // Euler characteristic of the closed piece
    bool contains_singular = false;
};

struct SkeletonEdge {
    std::size_t component = 0;   // K' component id
    ComponentType type = ComponentType::type_I;
    std::size_t end1 = 0, end2 = 0;  // skeleton vertex indices
};

struct SplittingSkeleton {
    std::vector<SkeletonVertex> vertices;
    std::vector<SkeletonEdge> edges;
    bool trivial() const { return vertices.size() == 1 && edges.empty(); }
};

/// Everything the construction produces for one morphism instance.
struct LaminationResult {
    VanKampenComplex complex;
    std::vector<SliceDecomposition> edge_decompositions;  // per generator
    std::vector<std::vector<Marking>> edge_markings;      // per generator
    std::vector<FaceAlignment> alignments;                // per face
    std::vector<FaceLamination> laminations;              // per face
    LaminationGraph K;
    std::map<std::size_t, ComponentType> component_types;
    SplittingSkeleton skeleton;
};

/// Runs the whole construction: edge cylinders and slice decompositions
/// for each generator image, markings, per-face arcs, the dual graph K,
/// the pruned K', component classification, and the graph-of-groups
/// skeleton. `morphism` maps each presentation generator of `tri` to a
/// word over the model presentation's generators.
LaminationResult compute_lamination(const GraphModel& model, const Presentation& tri,
                                    const std::vector<Word>& morphism, std::int64_t l,
                                    const ConstantSet& C, std::size_t budget,
                                    std::size_t geodesic_cap = 64);

}  // namespace coarsecyl
