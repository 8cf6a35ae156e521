#pragma once

#include <cstdint>
#include <vector>

#include "coarsecyl/angles.hpp"
#include "coarsecyl/constants.hpp"
#include "coarsecyl/graph.hpp"

namespace coarsecyl {

/// True iff every subpath of p of length <= mu is a geodesic.
bool is_local_geodesic(const FineGraph& g, const VertexPath& p, std::int64_t mu);

/// True iff for all parameter pairs s < t:
///   (t-s)/Lambda <= dist(p(s), p(t)) <= Lambda*(t-s), exactly.
bool is_quasi_geodesic(const FineGraph& g, const VertexPath& p, const Rational& lambda);

/// True iff every subpath of length <= L is a c-quasi-geodesic.
bool is_local_quasi_geodesic(const FineGraph& g, const VertexPath& p, std::int64_t L,
                             const Rational& c);

/// A path with a subdivision a = c_1 <= d_1 <= c_2 <= ... <= d_n = b into
/// local-geodesic pieces [c_i, d_i] and bridges [d_i, c_{i+1}], plus the
/// constant ledger it is to be judged against. Parameters are path indices.
struct CoarsePiecewiseGeodesic {
    VertexPath path;
    std::vector<std::size_t> cuts;  // c_1, d_1, c_2, d_2, ..., c_n, d_n
    std::int64_t l = 0;
    ConstantSet constants;

    std::size_t piece_count() const { return cuts.size() / 2; }
    std::pair<std::size_t, std::size_t> piece(std::size_t i) const {
        return {cuts[2 * i], cuts[2 * i + 1]};
    }
    /// Bridge after piece i: parameter interval [d_i, c_{i+1}].
    std::pair<std::size_t, std::size_t> bridge(std::size_t i) const {
        return {cuts[2 * i + 1], cuts[2 * i + 2]};
    }

    /// A geodesic is a coarse-piecewise-geodesic with a single piece and no
    /// bridge.
    static CoarsePiecewiseGeodesic single_piece(VertexPath p, std::int64_t l,
                                                ConstantSet constants);

    /// Restriction to parameter interval [a, b] with the induced subdivision.
    CoarsePiecewiseGeodesic restrict(std::size_t a, std::size_t b) const;

    /// Throws PreconditionError unless the cut sequence is well-formed.
    void check_structure() const;
};

struct CpgValidation {
    Verdict local_quasi_geodesic = Verdict::fail;  // window-length lambda/2 clause
    Verdict pieces_local_geodesic = Verdict::fail;
    Verdict interior_piece_length = Verdict::fail;
    Verdict bridge_length = Verdict::fail;
    Verdict neighborhood = Verdict::fail;          // 2*epsilon of some geodesic

    Verdict overall() const {
        Verdict v = combine(local_quasi_geodesic, pieces_local_geodesic);
        v = combine(v, interior_piece_length);
        v = combine(v, bridge_length);
        return combine(v, neighborhood);
    }
};

/// Per-clause validation of the subdivision against its constant ledger.
/// The neighborhood clause quantifies existentially over enumerated
/// geodesics between the endpoints; truncated enumeration with no passing
/// geodesic reports inconclusive.
CpgValidation validate_cpg(const FineGraph& g, const CoarsePiecewiseGeodesic& f,
                           std::size_t geodesic_cap = 64);

/// Re-routing: given a parameter s on a piece whose prefix from the piece
/// start is longer than l + 2*epsilon, and a geodesic between the
/// endpoints, cut the path at the nearest-point projections and continue
/// along the geodesic. Nearest points are tie-broken by (distance, vertex
/// id, parameter).
CoarsePiecewiseGeodesic reroute(const FineGraph& g, const CoarsePiecewiseGeodesic& f,
                                std::size_t s, const VertexPath& geod);

/// Re-routing to another endpoint z: requires the last piece to be a
/// geodesic of length >= l + 2*mu and some geodesic [f(a), z] passing
/// within delta of f(b). Returns a coarse-piecewise-geodesic from f(a)
/// to z coinciding with f until the first point of the last piece.
CoarsePiecewiseGeodesic reroute_to(const FineGraph& g, const CoarsePiecewiseGeodesic& f,
                                   VertexId z, std::size_t geodesic_cap = 64);

struct AppendixReport {
    bool lower_bound_ok = false;   // dist(f(t1), f(t2)) >= |t1 - t2| / lambda
    bool closeness_ok = false;     // piece interiors within 2*delta of a geodesic
    bool asserted = false;         // constants were paper-faithful
    bool ok() const { return lower_bound_ok && closeness_ok; }
};

/// The two endpoint-free checks turning a validated subdivision into a
/// lambda-quasi-geodesic certificate: the global lower distortion bound
/// and the 2*delta-closeness of piece-interior points (parameters at
/// least 4*epsilon from the piece ends).
AppendixReport verify_appendix(const FineGraph& g, const CoarsePiecewiseGeodesic& f,
                               std::size_t geodesic_cap = 64);

struct StabilityResult {
    std::int64_t D_emp = 0;   // max deviation of a quasi-geodesic from a geodesic
    std::int64_t N_emp = 0;   // cone radius/angle capturing every interior vertex
    std::size_t pairs_examined = 0;
    std::size_t quasi_geodesics_found = 0;
};

/// Enumerates Lambda-quasi-geodesics between sampled vertex pairs (their
/// endpoints on the geodesic endpoints) and measures the deviation
/// constant D and the conical stability constant N. Sampling is seeded;
/// enumeration order is deterministic.
StabilityResult stability_constant(const FineGraph& g, const Rational& lambda,
                                   std::size_t samples, std::uint64_t seed = 0,
                                   std::size_t budget = 2'000'000,
                                   std::size_t geodesic_cap = 64);

/// Minimal over geodesics [v,w] of max(interior angles, angle with e at v),
/// for every w at once; infinity where no finite-angle geodesic exists.
std::vector<Angle> minimax_cone_angle(const FineGraph& g, const Edge& e, VertexId v);

}  // namespace coarsecyl
