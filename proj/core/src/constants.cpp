#include "coarsecyl/constants.hpp"

#include <algorithm>

namespace coarsecyl {

ConstantSet ConstantSet::paper_faithful(std::int64_t delta_raw, std::int64_t epsilon,
                                        std::int64_t rho, std::int64_t stability_D,
                                        std::int64_t n_triangle, std::int64_t capa_mu) {
    if (epsilon <= 0 || capa_mu <= 0 || rho < 0 || stability_D < 0 || n_triangle < 0)
        throw ModelError("invalid free parameters for constant set");
    ConstantSet c;
    c.regime = Regime::paper_faithful;
    c.delta = std::max<std::int64_t>(delta_raw, 2);
    if (c.delta != delta_raw)
        c.provenance["delta"] = "raw " + std::to_string(delta_raw) + " clamped to 2";
    else
        c.provenance["delta"] = "hyperbolicity constant as given";
    c.lambda = checked_mul(1000, c.delta);
    c.epsilon = epsilon;
    c.mu = checked_mul(checked_add(checked_mul(100, epsilon), checked_mul(c.lambda, c.lambda)),
                       checked_mul(40, c.lambda));
    c.rho = rho;
    c.stability_D = stability_D;
    c.theta = std::max(checked_mul(10000, checked_add(checked_add(stability_D, epsilon), c.delta)),
                       rho);
    c.n_triangle = n_triangle;
    c.capa_mu = capa_mu;
    c.phi_n = checked_mul(
        checked_mul(checked_mul(24, checked_add(n_triangle, 1)), capa_mu),
        checked_mul(checked_add(checked_mul(2, epsilon), 1), epsilon));
    c.provenance["lambda"] = "1000*delta";
    c.provenance["mu"] = "(100*epsilon + lambda^2)*40*lambda";
    c.provenance["theta"] = "max(10000*(D + epsilon + delta), rho)";
    c.provenance["phi_n"] = "24*(n+1)*capa_mu*(2*epsilon+1)*epsilon";
    c.validate();
    return c;
}

ConstantSet ConstantSet::exploratory(std::int64_t delta, std::int64_t lambda,
                                     std::int64_t epsilon, std::int64_t mu,
                                     std::int64_t theta, std::int64_t l) {
    ConstantSet c;
    c.regime = Regime::exploratory;
    c.delta = delta;
    c.lambda = lambda;
    c.epsilon = epsilon;
    c.mu = mu;
    c.theta = theta;
    c.l = l;
    c.rho = 1;
    c.stability_D = 1;
    c.n_triangle = 1;
    c.phi_n = 1;
    c.capa_mu = 1;
    c.provenance["regime"] = "exploratory values supplied directly";
    c.validate();
    return c;
}

void ConstantSet::validate() const {
    if (regime == Regime::exploratory) {
        if (delta <= 0 || lambda <= 0 || epsilon <= 0 || mu <= 0 || theta < 0 ||
            rho < 0 || stability_D < 0 || capa_mu <= 0 || l < 0)
            throw ModelError("exploratory constants must be positive");
        return;
    }
    if (delta < 2) throw ModelError("delta must be >= 2");
    if (lambda != checked_mul(1000, delta)) throw ModelError("lambda != 1000*delta");
    const std::int64_t mu_expect =
        checked_mul(checked_add(checked_mul(100, epsilon), checked_mul(lambda, lambda)),
                    checked_mul(40, lambda));
    if (mu != mu_expect) throw ModelError("mu formula violated");
    const std::int64_t theta_expect =
        std::max(checked_mul(10000, checked_add(checked_add(stability_D, epsilon), delta)), rho);
    if (theta != theta_expect) throw ModelError("theta formula violated");
    const std::int64_t phi_expect = checked_mul(
        checked_mul(checked_mul(24, checked_add(n_triangle, 1)), capa_mu),
        checked_mul(checked_add(checked_mul(2, epsilon), 1), epsilon));
    if (phi_n != phi_expect) throw ModelError("phi formula violated");
}

}  // namespace coarsecyl
