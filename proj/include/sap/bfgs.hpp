#pragma once

#include <optional>
#include <vector>

#include "sap/objective.hpp"
#include "sap/params.hpp"

namespace sap {

struct OptimState {
    Vector w;
    SymMatrix x;  // inverse-Hessian estimate
    SymMatrix v;  // accelerated companion
    std::int64_t iteration = 0;
    bool last_update_skipped = false;
};

/// Inverse-Hessian projection update:
/// X+ = delta delta^T / (delta^T zeta)
///      + (I - delta zeta^T/(delta^T zeta)) Y (I - zeta delta^T/(delta^T zeta)).
/// Returns nullopt when the curvature delta^T zeta is below the safeguard
/// (caller keeps Y).
std::optional<SymMatrix> classic_bfgs_update(const SymMatrix& y, const Vector& delta,
                                             const Vector& zeta,
                                             double curvature_tol = 1e-10);

/// w+ = w - eta X grad f(w); secant pair (delta, zeta) from the step;
/// X+ = classic_bfgs_update(Y, delta, zeta) with Y = alpha V + (1-alpha) X;
/// V+ = beta V + (1-beta) Y - gamma (Y - X+).
OptimState accel_bfgs_step(const OptimState& state, const Objective& obj,
                           const AccelParams& p, double eta);

/// Standard BFGS step: as above with Y == X and no companion matrix.
OptimState classic_bfgs_step(const OptimState& state, const Objective& obj, double eta);

OptimState make_optim_state(const Vector& w0);

/// Runs probe_iters classic BFGS iterations per grid entry and returns the
/// stepsize with the lowest final objective. Divergent entries are skipped;
/// all-divergent grids raise NoViableStepsize.
double grid_search_stepsize(const Objective& obj, const Vector& w0,
                            const std::vector<double>& grid, int probe_iters = 50);

/// Default stepsize grid {2^k : k = -10..2}.
std::vector<double> default_stepsize_grid();

} // namespace sap
