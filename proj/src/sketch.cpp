#include "sap/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sap {

namespace {

// Inverse-CDF draw over weights; weights must be positive.
int draw_weighted(const std::vector<double>& cumsum, Rng& rng) {
    std::uniform_real_distribution<double> unif(0.0, cumsum.back());
    double u = unif(rng);
    auto it = std::upper_bound(cumsum.begin(), cumsum.end(), u);
    int idx = static_cast<int>(it - cumsum.begin());
    return std::min(idx, static_cast<int>(cumsum.size()) - 1);
}

std::vector<int> draw_coords(const SketchSpec& spec, const SymMatrix& a, Rng& rng) {
    const int n = static_cast<int>(a.n());
    std::vector<double> w(n, 1.0);
    if (spec.strategy == SketchStrategy::CoordinateConvenient) {
        for (int i = 0; i < n; ++i) {
            if (a(i, i) <= 0.0)
                throw InvalidWeights("sample: A_ii <= 0 under convenient probabilities");
            w[i] = a(i, i);
        }
    }
    // Distinct coordinates: zero out drawn weights and renormalize.
    std::vector<int> picked;
    picked.reserve(spec.sketch_rank);
    for (int t = 0; t < spec.sketch_rank; ++t) {
        std::vector<double> cumsum(n);
        std::partial_sum(w.begin(), w.end(), cumsum.begin());
        int i = draw_weighted(cumsum, rng);
        picked.push_back(i);
        w[i] = 0.0;
    }
    return picked;
}

} // namespace

SketchSample sample(const SketchSpec& spec, const SymMatrix& a, Rng& rng) {
    const Eigen::Index n = a.n();
    if (spec.sketch_rank < 1 || spec.sketch_rank > n)
        throw InputError("sample: sketch rank out of range");
    SketchSample out;
    if (spec.strategy == SketchStrategy::Gaussian) {
        std::normal_distribution<double> normal(0.0, 1.0);
        out.s = Matrix(n, spec.sketch_rank);
        for (Eigen::Index j = 0; j < spec.sketch_rank; ++j)
            for (Eigen::Index i = 0; i < n; ++i) out.s(i, j) = normal(rng);
    } else {
        out.coords = draw_coords(spec, a, rng);
        out.s = Matrix::Zero(n, spec.sketch_rank);
        for (int j = 0; j < spec.sketch_rank; ++j) out.s(out.coords[j], j) = 1.0;
    }
    return out;
}

SymMatrix projector_P(const SymMatrix& a, const SymMatrix& a_half, const SketchSample& s) {
    Matrix gram = s.s.transpose() * a.mat() * s.s;
    Eigen::JacobiSVD<Matrix> svd(gram);
    const Vector& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 0.0 || sv(sv.size() - 1) < sv(0) / 1e12)
        throw DegenerateSketch("projector_P: S^T A S numerically singular");
    Matrix half_s = a_half.mat() * s.s;
    Matrix p = half_s * gram.ldlt().solve(half_s.transpose());
    return SymMatrix::symmetrize(p);
}

} // namespace sap
