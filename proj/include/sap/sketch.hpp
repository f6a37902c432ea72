#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "sap/linalg.hpp"

namespace sap {

enum class SketchStrategy {
    CoordinateConvenient,  // S = e_i with P(i) proportional to A_ii
    CoordinateUniform,     // S = e_i with P(i) = 1/n
    Gaussian,              // S with i.i.d. N(0,1) entries
};

using Rng = std::mt19937_64;

struct SketchSpec {
    SketchStrategy strategy = SketchStrategy::CoordinateConvenient;
    int sketch_rank = 1;  // tau, number of columns
};

struct SketchSample {
    Matrix s;                    // n x tau
    std::vector<int> coords;     // nonempty for coordinate strategies
};

/// Draws one sketch matrix. Coordinate strategies with tau > 1 sample
/// distinct coordinates; convenient probabilities require A_ii > 0.
SketchSample sample(const SketchSpec& spec, const SymMatrix& a, Rng& rng);

/// P = A^{1/2} S (S^T A S)^{-1} S^T A^{1/2}, the projector underlying the
/// symmetric-inversion analysis. Throws DegenerateSketch when S^T A S is
/// numerically singular.
SymMatrix projector_P(const SymMatrix& a, const SymMatrix& a_half, const SketchSample& s);

} // namespace sap
