#pragma once

#include <random>

#include "sap/dataio.hpp"
#include "sap/linalg.hpp"

namespace sap::testutil {

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
    return m;
}

inline SymMatrix random_pd(Eigen::Index n, Rng& rng, double min_eig = 0.5,
                           double max_eig = 5.0) {
    std::uniform_real_distribution<double> unif(min_eig, max_eig);
    Vector eigs(n);
    for (Eigen::Index i = 0; i < n; ++i) eigs(i) = unif(rng);
    return gen_spectrum(eigs, rng());
}

inline Matrix random_rank(Eigen::Index rows, Eigen::Index cols, Eigen::Index rank,
                          Rng& rng) {
    if (rank == 0) return Matrix::Zero(rows, cols);
    return random_matrix(rows, rank, rng) * random_matrix(rank, cols, rng);
}

} // namespace sap::testutil
