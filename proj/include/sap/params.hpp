#pragma once

#include <string>
#include <vector>

#include "sap/errors.hpp"

namespace sap {

/// Acceleration parameters. (mu, nu) are the spectral inputs, (alpha, beta,
/// gamma) the derived momentum coefficients, omega the stepsize,
/// eta = 2*omega - omega^2 and rho the per-iteration contraction factor.
struct AccelParams {
    double mu = 0.0;
    double nu = 0.0;
    double omega = 1.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double eta = 1.0;
    double rho = 1.0;
    std::vector<std::string> warnings;
};

/// alpha = 1/(1+gamma*nu), beta = 1 - sqrt(mu*eta/nu), gamma = sqrt(eta/(mu*nu))
/// with eta = 2*omega - omega^2. omega = 1 gives the basic accelerated
/// parameters beta = 1 - sqrt(mu/nu), gamma = sqrt(1/(mu*nu)).
AccelParams derive_params(double mu, double nu, double omega = 1.0);

/// The one-parameter family indexed by s > 0:
///   beta(s) = (1 + s - s*sqrt((nu + 4*mu*s - 2*nu*s + nu*s^2)/(nu*s^2)))/(2s)
///   gamma(s) = 1/((1 - s*beta(s))*nu)
/// with rate rho = max(beta, s*beta) <= 1. s = 1 recovers derive_params(mu, nu, 1).
AccelParams params_from_s(double mu, double nu, double s);

/// Explicit parameters, used for degeneration checks (e.g. beta=0, gamma=1).
AccelParams explicit_params(double alpha, double beta, double gamma, double omega = 1.0);

} // namespace sap
