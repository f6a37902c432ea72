#include "sap/params.hpp"

#include <algorithm>
#include <cmath>

namespace sap {

namespace {

void lemma_bound_warnings(AccelParams& p) {
    if (p.mu <= 0.0) throw InputError("params: mu must be positive");
    if (p.nu <= 0.0) throw InputError("params: nu must be positive");
    if (p.nu < 1.0)
        p.warnings.push_back("nu < 1 violates the lower spectral bound; proceeding");
    if (p.nu > 1.0 / p.mu + 1e-12)
        p.warnings.push_back("nu > 1/mu violates the upper spectral bound; proceeding");
}

} // namespace

AccelParams derive_params(double mu, double nu, double omega) {
    if (!(omega > 0.0 && omega < 2.0))
        throw InvalidStepsize("derive_params: omega must lie in (0,2)");
    AccelParams p;
    p.mu = mu;
    p.nu = nu;
    p.omega = omega;
    lemma_bound_warnings(p);
    p.eta = 2.0 * omega - omega * omega;
    p.gamma = std::sqrt(p.eta / (mu * nu));
    p.beta = 1.0 - std::sqrt(mu * p.eta / nu);
    p.alpha = 1.0 / (1.0 + p.gamma * nu);
    p.rho = 1.0 - std::sqrt(mu * p.eta / nu);
    return p;
}

AccelParams params_from_s(double mu, double nu, double s) {
    if (!(s > 0.0)) throw InvalidFamilyParameter("params_from_s: s must be positive");
    AccelParams p;
    p.mu = mu;
    p.nu = nu;
    lemma_bound_warnings(p);
    // Radicand in the factored form (s-1)^2*nu + 4*mu*s: both terms are
    // nonnegative, so no cancellation (the expanded nu + 4*mu*s - 2*nu*s +
    // nu*s^2 loses the s = 1 case to rounding).
    const double radicand = ((s - 1.0) * (s - 1.0) * nu + 4.0 * mu * s) / (nu * s * s);
    const double root = std::sqrt(radicand);
    p.beta = (1.0 + s - s * root) / (2.0 * s);
    // 1 - s*beta = (s*root + 1 - s)/2, evaluated directly for the same reason
    p.gamma = 2.0 / ((s * root + 1.0 - s) * nu);
    p.alpha = 1.0 / (1.0 + s * p.gamma * nu);
    p.rho = std::max(p.beta, s * p.beta);
    return p;
}

AccelParams explicit_params(double alpha, double beta, double gamma, double omega) {
    AccelParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.gamma = gamma;
    p.omega = omega;
    p.eta = 2.0 * omega - omega * omega;
    p.mu = 0.0;
    p.nu = 0.0;
    p.rho = 1.0;
    return p;
}

} // namespace sap
