#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "coarsecyl/graph.hpp"
#include "coarsecyl/types.hpp"

namespace coarsecyl {

/// An angle value: a natural number or infinity. Infinity is absorptive
/// under addition and larger than every finite value.
class Angle {
public:
    Angle() = default;
    explicit Angle(std::uint64_t v) : raw_(v) {}
    static Angle infinity() { Angle a; a.raw_ = kInf; return a; }

    bool is_infinite() const { return raw_ == kInf; }
    bool is_finite() const { return raw_ != kInf; }
    std::uint64_t finite_value() const {
        if (is_infinite()) throw PreconditionError("angle is infinite");
        return raw_;
    }

    friend bool operator==(Angle a, Angle b) { return a.raw_ == b.raw_; }
    friend bool operator!=(Angle a, Angle b) { return a.raw_ != b.raw_; }
    friend bool operator<(Angle a, Angle b) { return a.raw_ < b.raw_; }
    friend bool operator<=(Angle a, Angle b) { return a.raw_ <= b.raw_; }
    friend bool operator>(Angle a, Angle b) { return a.raw_ > b.raw_; }
    friend bool operator>=(Angle a, Angle b) { return a.raw_ >= b.raw_; }

    friend Angle operator+(Angle a, Angle b) {
        if (a.is_infinite() || b.is_infinite()) return infinity();
        return Angle(a.raw_ + b.raw_);
    }

    bool le(std::int64_t bound) const {
        return is_finite() && bound >= 0 && raw_ <= static_cast<std::uint64_t>(bound);
    }
    bool ge(std::int64_t bound) const {
        if (bound <= 0) return true;
        return is_infinite() || raw_ >= static_cast<std::uint64_t>(bound);
    }
    bool gt(std::int64_t bound) const {
        if (bound < 0) return true;
        return is_infinite() || raw_ > static_cast<std::uint64_t>(bound);
    }

private:
    static constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t raw_ = 0;
};

using Edge = std::pair<VertexId, VertexId>;  // (v, endpoint), oriented at v

/// Angle at v between the edges (v,v1) and (v,v2): the shortest path
/// length from v1 to v2 in the graph with v deleted; 0 for a repeated
/// edge; infinity when v separates them.
Angle edge_angle(const FineGraph& g, VertexId v, const Edge& e1, const Edge& e2);

/// Angle of a path at an interior occurrence: between its two incident
/// path edges at position `pos`.
Angle path_angle_at(const FineGraph& g, const VertexPath& p, std::size_t pos);

/// Maximal angle over the interior vertices of a simple path; 0 when the
/// path has no interior vertex.
Angle max_angle(const FineGraph& g, const VertexPath& p);

/// Cone of radius d and angle theta at (e, v): vertices w with
/// |w-v| <= d admitting a geodesic [v,w] whose maximal angle and whose
/// angle with e are both <= theta. Sorted by id; always contains v.
std::vector<VertexId> cone(const FineGraph& g, const Edge& e, VertexId v,
                           std::uint32_t d, std::int64_t theta);

/// Union of cones of radius and angle eps over the edges of a geodesic
/// segment, both orientations.
std::vector<VertexId> cone_union(const FineGraph& g, const VertexPath& seg, std::int64_t eps);

/// A simple simplicial loop, canonically rotated/reflected.
struct Circuit {
    std::vector<VertexId> vertices;  // cyclic, canonical form

    std::size_t length() const { return vertices.size(); }
    friend bool operator==(const Circuit& a, const Circuit& b) = default;
    friend bool operator<(const Circuit& a, const Circuit& b) { return a.vertices < b.vertices; }
};

Circuit canonical_circuit(std::vector<VertexId> cyclic);

/// All circuits of length <= max_len through edge e, exhaustively, with a
/// hard node-expansion budget. Throws BudgetError instead of truncating.
std::set<Circuit> circuits_through(const FineGraph& g, const Edge& e,
                                   std::size_t max_len, std::size_t budget = 2'000'000);

struct FinenessReport {
    std::size_t length_bound = 0;
    std::size_t uniform_bound = 0;                              // max circuit count over edges
    std::map<Edge, std::size_t> per_edge;                       // circuit counts
    std::map<std::size_t, std::size_t> histogram;               // count -> #edges
};

/// Per-edge circuit counts up to length L; the uniform fineness bound at
/// this scale.
FinenessReport fineness_report(const FineGraph& g, std::size_t L,
                               std::size_t budget_per_edge = 2'000'000);

struct RhoReport {
    std::int64_t rho = 0;
    /// Edge pairs at non-parabolic vertices with infinite angle; the model
    /// cannot bound these, so they are surfaced instead of folded into rho.
    std::vector<std::tuple<VertexId, VertexId, VertexId>> infinite_pairs;
};

/// Max finite angle over edge pairs at non-parabolic vertices. Throws
/// ModelError when no finite pair exists, PreconditionError when no
/// non-parabolic vertex has degree >= 2.
RhoReport rho_constant(const FineGraph& g);

struct ChannelSet {
    std::vector<VertexPath> channels;  // orientation-normalized, sorted
    std::size_t count = 0;
};

/// All geodesics at least as long as `seg` staying inside the eps-cone
/// union over seg's edges. seg must be a geodesic of length >= 1.
ChannelSet channels(const FineGraph& g, const VertexPath& seg, std::int64_t eps,
                    std::size_t budget = 2'000'000);

}  // namespace coarsecyl
