#pragma once

#include <limits>
#include <optional>

#include "sap/linalg.hpp"
#include "sap/params.hpp"
#include "sap/record.hpp"
#include "sap/sketch.hpp"

namespace sap {

struct InverterState {
    SymMatrix x;
    SymMatrix v;
    std::int64_t iteration = 0;
};

enum class ParamMethod { AnalyticConvenient, Oracle, Heuristic };

struct ParamEstimate {
    double mu = 0.0;
    double nu = 0.0;
    ParamMethod method = ParamMethod::AnalyticConvenient;
};

/// mu = lambda_min(A)/Tr(A), nu = Tr(A)/min_i A_ii; the closed forms for
/// coordinate sketches with probabilities proportional to A_ii.
ParamEstimate estimate_params_convenient(const SymMatrix& a);

/// mu = 1/(divisor * nu), the fallback when lambda_min is unknown.
double heuristic_mu(double nu, double divisor);

/// Symmetry-preserving projection step:
/// X+ = S G S^T + (I - S G S^T A) X (I - A S G S^T),  G = (S^T A S)^{-1}.
SymMatrix sap_inverse_step(const SymMatrix& a, const SymMatrix& x, const SketchSample& s);

/// Baseline without the symmetry constraint: X+ = X + S G S^T (I - A X).
Matrix sap_inverse_step_nosym(const SymMatrix& a, const Matrix& x, const SketchSample& s);

/// Accelerated step: Y = alpha*V + (1-alpha)*X; X+ = sym projection at Y;
/// V+ = beta*V + (1-beta)*Y - gamma*(Y - X+).
InverterState accel_inverse_step(const SymMatrix& a, const InverterState& state,
                                 const SketchSample& s, const AccelParams& p);

enum class InvertMode { Plain, Accel, PlainNosym, AccelNosym };

struct InvertOptions {
    InvertMode mode = InvertMode::Accel;
    std::int64_t max_iter = 1000;
    std::int64_t record_every = 1;
    double time_budget_s = std::numeric_limits<double>::infinity();
    bool record_lambda_min = false;  // track lambda_min(X_k); O(n^3) per record
    int max_resample = 100;
};

struct InvertResult {
    Trajectory records;
    Matrix final_x;           // symmetric except in nosym modes
    std::optional<SymMatrix> final_v;
};

/// Driver recording fa_residual(X_k, A) per record_every. X_0 = 0.
InvertResult invert(const SymMatrix& a, const SketchSpec& spec, const AccelParams& p,
                    const InvertOptions& opts, std::uint64_t seed,
                    const std::string& tag = "invert");

} // namespace sap
