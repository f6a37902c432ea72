#pragma once

#include <limits>
#include <optional>

#include "sap/linalg.hpp"
#include "sap/params.hpp"
#include "sap/record.hpp"
#include "sap/sketch.hpp"

namespace sap {

struct SolverState {
    Vector x;
    Vector v;
    std::int64_t iteration = 0;
};

enum class SolveMode { Plain, Accelerated };

struct SolveOptions {
    SolveMode mode = SolveMode::Accelerated;
    std::int64_t max_iter = 1000;
    std::int64_t record_every = 1;
    double time_budget_s = std::numeric_limits<double>::infinity();
    bool capture_states = false;  // keep (x_k, v_k) for every iteration (small n only)
    int max_resample = 100;
};

struct SolveResult {
    Trajectory records;
    std::vector<SolverState> states;  // filled when capture_states
    Vector x_star;
    SolverState final_state;
};

/// One sketch-and-project projection of x onto {S^T A x = S^T b} in the
/// B-norm: x+ = x - B^{-1} A S (S^T A B^{-1} A S)^+ S^T (A x - b).
/// b_llt is the Cholesky of B; nullptr means B = I.
Vector sap_step(const SymMatrix& a, const Vector& b, const Vector& x,
                const SketchSample& s, const Eigen::LLT<Matrix>* b_llt = nullptr);

/// One accelerated step: y = alpha*v + (1-alpha)*x, g is the projection
/// correction at y, x+ = y - omega*g, v+ = beta*v + (1-beta)*y - gamma*g.
SolverState accel_step(const SymMatrix& a, const Vector& b, const SolverState& state,
                       const SketchSample& s, const AccelParams& p,
                       const Eigen::LLT<Matrix>* b_llt = nullptr);

/// Experiment driver. Records ||x_k - x*||_B; x* is computed once by a direct
/// solve. Identity B.
SolveResult solve(const SymMatrix& a, const Vector& b, const SketchSpec& spec,
                  const AccelParams& p, const SolveOptions& opts, std::uint64_t seed,
                  const std::string& tag = "solve");

/// B-weighted variant (projections in the B-norm). B must be PD; B = I
/// reproduces solve() exactly under equal seeds.
SolveResult solve_weighted(const SymMatrix& a, const Vector& b, const SymMatrix& b_norm,
                           const SketchSpec& spec, const AccelParams& p,
                           const SolveOptions& opts, std::uint64_t seed,
                           const std::string& tag = "solve");

} // namespace sap
