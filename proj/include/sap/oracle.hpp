#pragma once

#include <utility>
#include <vector>

#include "sap/linalg.hpp"
#include "sap/sketch.hpp"
#include "sap/solver.hpp"

namespace sap {

/// One atom of a finitely supported sketch distribution: the probability and
/// the induced projection operator (n x n for vector systems, n^2 x n^2 for
/// the matrix-inversion operator).
struct ZAtom {
    double probability = 0.0;
    Matrix z;
};

struct OperatorMoments {
    Matrix ez;                  // E[Z]
    Matrix ez_pinv;             // E[Z]^+
    Matrix second;              // E[Z E[Z]^+ Z]
    Matrix support_projector;   // orthogonal projector onto Range(E[Z])
    bool approximate = false;   // true for Monte-Carlo (Gaussian) estimates
};

/// Enumerates Z_i = B^{-1/2} A S_i (S_i^T A B^{-1} A S_i)^+ S_i^T A B^{-1/2}
/// over the coordinate support of the distribution. Only rank-1 coordinate
/// sketches have a tractable exact support.
std::vector<ZAtom> enumerate_Z_vector(const SymMatrix& a, const SymMatrix& b_norm,
                                      const SketchSpec& spec);

/// Enumerates the vectorized symmetric-inversion operator
/// Zbar_i = I(x)I - (I-P_i)(x)(I-P_i) with P_i = A^{1/2}S(S^T A S)^{-1}S^T A^{1/2}.
std::vector<ZAtom> enumerate_Zbar_matrix(const SymMatrix& a, const SketchSpec& spec);

OperatorMoments moments_from_atoms(const std::vector<ZAtom>& atoms);

/// Monte-Carlo moment estimate for continuous (Gaussian) distributions.
OperatorMoments estimate_moments_vector(const SymMatrix& a, const SymMatrix& b_norm,
                                        const SketchSpec& spec, int samples, Rng& rng);

/// mu = smallest eigenvalue of E[Z] restricted to its range; nu = largest
/// generalized eigenvalue of (E[Z E[Z]^+ Z], E[Z]) on the range.
std::pair<double, double> mu_nu_bruteforce(const OperatorMoments& m);

/// Null(A_op) == Null(E[Z]), compared through range bases.
bool check_exactness(const OperatorMoments& m, const Matrix& a_op);

/// Lemma bound rank(A_op^T) / E[rank Z] <= nu, valid when Range(A_op^T) is the
/// whole space.
bool rank_bound_check(const std::vector<ZAtom>& atoms, const Matrix& a_op, double nu,
                      double slack = 1e-9);

/// ||v - x*||^2_{E[Z]^+} + (1/mu) ||x - x*||^2
double lyapunov_vector(const SolverState& state, const Vector& x_star,
                       const OperatorMoments& m, double mu);

/// ||V - A^{-1}||^2_M + (1/mu) ||X - A^{-1}||^2_{F(A)}, the M-norm evaluated
/// through the vectorized quadratic form with weight E[Zbar]^+.
double lyapunov_matrix(const SymMatrix& x, const SymMatrix& v, const SymMatrix& a,
                       const SymMatrix& a_half, const OperatorMoments& m, double mu);

} // namespace sap
