#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "coarsecyl/types.hpp"

namespace coarsecyl {

enum class Regime : std::uint8_t { paper_faithful, exploratory };

inline const char* to_string(Regime r) {
    return r == Regime::paper_faithful ? "paper-faithful" : "exploratory";
}

/// The full constant ledger shared by the coarse-path, cylinder and slice
/// machinery. In the paper-faithful regime the derived values are locked
/// together:
///   lambda = 1000*delta,  mu = (100*epsilon + lambda^2) * 40 * lambda,
///   theta  = max(10000*(stability_D + epsilon + delta), rho),
///   phi_n  = 24*(n_triangle+1)*capa_mu*(2*epsilon+1)*epsilon,  delta >= 2.
/// The exploratory regime only demands positive values; downstream checks
/// that are only meaningful under the locked constants say so in their
/// reports instead of asserting.
struct ConstantSet {
    std::int64_t delta = 2;
    std::int64_t lambda = 2000;
    std::int64_t epsilon = 1;
    std::int64_t mu = 0;
    std::int64_t theta = 0;
    std::int64_t rho = 0;
    std::int64_t stability_D = 0;
    std::int64_t n_triangle = 0;
    std::int64_t phi_n = 0;
    std::int64_t capa_mu = 1;
    std::int64_t l = 0;
    Regime regime = Regime::exploratory;
    std::map<std::string, std::string> provenance;

    /// Builds the locked ledger from the free parameters. delta is clamped
    /// to >= 2 (recorded in provenance if clamping happened).
    static ConstantSet paper_faithful(std::int64_t delta_raw, std::int64_t epsilon,
                                      std::int64_t rho, std::int64_t stability_D,
                                      std::int64_t n_triangle, std::int64_t capa_mu);

    /// An exploratory ledger; every field as given, only positivity checked.
    static ConstantSet exploratory(std::int64_t delta, std::int64_t lambda,
                                   std::int64_t epsilon, std::int64_t mu,
                                   std::int64_t theta, std::int64_t l);

    ConstantSet with_l(std::int64_t new_l) const {
        ConstantSet c = *this;
        c.l = new_l;
        return c;
    }

    /// Window length 40*lambda*(epsilon + 100*lambda*delta) of the
    /// local-quasi-geodesic clause.
    std::int64_t local_window() const {
        return checked_mul(checked_mul(40, lambda),
                           checked_add(epsilon, checked_mul(100, checked_mul(lambda, delta))));
    }

    /// The local quasi-geodesic constant lambda/2, exact.
    Rational half_lambda() const { return Rational(lambda, 2); }

    /// Throws ModelError when the regime's invariants are violated.
    void validate() const;
};

}  // namespace coarsecyl
