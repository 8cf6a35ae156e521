#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "coarsecyl/coarse_paths.hpp"
#include "coarsecyl/constants.hpp"
#include "coarsecyl/graph.hpp"

namespace coarsecyl {

/// Union of cones of radius and angle eps over the edges of a geodesic
/// segment. The segment must be a geodesic with at least one edge.
std::vector<VertexId> conical_neighborhood(const FineGraph& g, const VertexPath& seg,
                                           std::int64_t eps);

struct Cylinder {
    VertexId x = 0;
    VertexId y = 0;
    std::int64_t l = 0;
    std::vector<VertexId> members;  // sorted
    bool complete = false;          // search exhausted within budget
    ConstantSet constants;
    /// Optional audit trail: one witnessing subdivision per member.
    std::map<VertexId, CoarsePiecewiseGeodesic> witnesses;

    bool contains(VertexId v) const {
        return std::binary_search(members.begin(), members.end(), v);
    }
};

/// The set of vertices lying deep on a sub-local-geodesic of some valid
/// l-subdivided path from x to y (path-length at least l from the piece
/// ends, unless the piece end is the corresponding endpoint). The search
/// is bounded to the eps-conical neighborhood of a geodesic [x,y]
/// (augmented by all enumerated geodesics) and to paths of length at most
/// lambda*|x-y|; `complete` records whether it exhausted that space
/// within the budget. Members are always sound.
Cylinder cylinder(const FineGraph& g, VertexId x, VertexId y, std::int64_t l,
                  const ConstantSet& C, std::size_t budget,
                  bool keep_witnesses = false, std::size_t geodesic_cap = 64);

struct EquivarianceResult {
    Verdict verdict = Verdict::inconclusive;
    std::string detail;
};

/// Compares gamma * Cyl_l(x, y) with Cyl_l(gamma x, gamma y) as sets.
/// Incomplete searches or partially defined actions yield inconclusive.
EquivarianceResult check_equivariance(const FineGraph& g, const std::string& generator,
                                      VertexId x, VertexId y, std::int64_t l,
                                      const ConstantSet& C, std::size_t budget);

struct TriangleCornerCheck {
    VertexId corner = 0;
    VertexId other1 = 0;   // cylinder toward this corner
    VertexId other2 = 0;
    Rational radius;       // R = (other1 . other2)_corner - 4*(11*mu + phi)
    bool vacuous = false;  // R <= 0: both intersections empty by fiat
    Verdict verdict = Verdict::inconclusive;
};

struct TriangleInstance {
    std::string alpha, beta, gamma;  // labels in F or inverses ("a^-1")
    VertexId x = 0, y = 0, z = 0;
    std::vector<TriangleCornerCheck> corners;
};

struct SelectLReport {
    std::vector<std::pair<std::int64_t, std::vector<TriangleInstance>>> candidates;
    std::int64_t chosen_l = -1;
    bool vacuous_only = true;  // no corner ever had positive radius
};

/// Iterates the candidate constants l_i = 10*mu + 2*i*eps for
/// i = 1..phi(n)/(2*eps) and returns the first one for which every
/// triangle (p, alpha p, gamma^-1 p), alpha*beta*gamma = 1 over F and
/// inverses, satisfies the ball-intersection equations at all three
/// corners. Corners with R <= 0 pass vacuously and are marked so.
SelectLReport select_l(const FineGraph& g, VertexId p, const std::vector<std::string>& F,
                       const ConstantSet& C, std::size_t budget);

}  // namespace coarsecyl
