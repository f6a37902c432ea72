#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "sap/linalg.hpp"
#include "sap/sketch.hpp"

namespace sap {

struct Dataset {
    Matrix features;      // m x n, dense
    Vector labels;        // in {-1, +1}
    std::string source;
    bool centered = false;
    bool normalized = false;
    bool bias_added = false;
};

/// LIBSVM text format: `label index:value ...`, 1-based strictly ascending
/// indices. 0/1 labels are mapped to {-1,+1}; any other label set is rejected
/// unless positive_class selects a one-vs-rest binarization.
Dataset parse_libsvm(const std::string& path, double positive_class = 0.0,
                     bool binarize = false);
Dataset parse_libsvm_stream(std::istream& in, const std::string& source,
                            double positive_class = 0.0, bool binarize = false);

void serialize_libsvm(const Dataset& ds, std::ostream& out);

/// center -> row-normalize -> append bias column, each optional, in that order.
Dataset preprocess(Dataset ds, bool center, bool normalize_rows, bool add_bias);

/// A = alpha I + beta 1 1^T; eigenvalues alpha (n-1 times) and alpha + n*beta.
SymMatrix gen_alpha_beta(double alpha, double beta, Eigen::Index n);

/// A = U diag(eigs) U^T for a random orthonormal U.
SymMatrix gen_spectrum(const Vector& eigs, std::uint64_t seed);

} // namespace sap
