#include "sap/oracle.hpp"

#include <cmath>

namespace sap {

namespace {

constexpr Eigen::Index kVectorCap = 64;
constexpr Eigen::Index kMatrixCap = 24;

std::vector<double> coordinate_probabilities(const SymMatrix& a, const SketchSpec& spec) {
    const Eigen::Index n = a.n();
    std::vector<double> p(n, 1.0 / static_cast<double>(n));
    if (spec.strategy == SketchStrategy::CoordinateConvenient) {
        double trace = a.trace();
        for (Eigen::Index i = 0; i < n; ++i) {
            if (a(i, i) <= 0.0)
                throw InvalidWeights("oracle: A_ii <= 0 under convenient probabilities");
            p[i] = a(i, i) / trace;
        }
    }
    return p;
}

void require_enumerable(const SketchSpec& spec) {
    if (spec.strategy == SketchStrategy::Gaussian)
        throw UnsupportedForEnumeration("oracle: Gaussian sketches have continuous support");
    if (spec.sketch_rank != 1)
        throw UnsupportedForEnumeration("oracle: exact enumeration covers rank-1 sketches");
}

Matrix z_vector_atom(const SymMatrix& a, const Matrix& binv_half, Eigen::Index i) {
    // Z = B^{-1/2} A e_i (e_i^T A B^{-1} A e_i)^+ e_i^T A B^{-1/2}
    Vector col = binv_half * a.mat().col(i);
    double denom = col.squaredNorm();
    if (denom <= 0.0) return Matrix::Zero(col.size(), col.size());
    return (col * col.transpose()) / denom;
}

// Orthonormal basis of the range of a symmetric PSD matrix.
Matrix range_basis(const Matrix& m, double rel_tol = 1e-12) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    const Vector& ev = es.eigenvalues();
    const double lmax = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    const double tol = static_cast<double>(m.rows()) * rel_tol * lmax;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) > tol) keep.push_back(i);
    Matrix basis(m.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j)
        basis.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]);
    return basis;
}

Eigen::Index numeric_rank(const Matrix& m) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const Vector& sv = svd.singularValues();
    const double tol = static_cast<double>(std::max(m.rows(), m.cols())) * 1e-9 * sv(0);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++r;
    return r;
}

} // namespace

std::vector<ZAtom> enumerate_Z_vector(const SymMatrix& a, const SymMatrix& b_norm,
                                      const SketchSpec& spec) {
    require_enumerable(spec);
    if (a.n() > kVectorCap) throw OracleUnavailable("oracle: vector-case dimension cap is 64");
    SymMatrix b_half = sqrt_psd(b_norm);
    Matrix binv_half = pinv_small(b_half.mat());
    auto p = coordinate_probabilities(a, spec);
    std::vector<ZAtom> atoms;
    atoms.reserve(a.n());
    for (Eigen::Index i = 0; i < a.n(); ++i)
        atoms.push_back({p[i], z_vector_atom(a, binv_half, i)});
    return atoms;
}

std::vector<ZAtom> enumerate_Zbar_matrix(const SymMatrix& a, const SketchSpec& spec) {
    require_enumerable(spec);
    const Eigen::Index n = a.n();
    if (n > kMatrixCap) throw OracleUnavailable("oracle: matrix-case dimension cap is 24");
    SymMatrix a_half = sqrt_psd(a);
    auto p = coordinate_probabilities(a, spec);
    Matrix eye_n2 = Matrix::Identity(n * n, n * n);
    std::vector<ZAtom> atoms;
    atoms.reserve(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        SketchSample s;
        s.s = Matrix::Zero(n, 1);
        s.s(i, 0) = 1.0;
        s.coords = {static_cast<int>(i)};
        Matrix ip = Matrix::Identity(n, n) - projector_P(a, a_half, s).mat();
        atoms.push_back({p[i], eye_n2 - kron(ip, ip, kMatrixCap)});
    }
    return atoms;
}

OperatorMoments moments_from_atoms(const std::vector<ZAtom>& atoms) {
    if (atoms.empty()) throw DegenerateDistribution("oracle: empty distribution");
    const Eigen::Index d = atoms.front().z.rows();
    OperatorMoments m;
    m.ez = Matrix::Zero(d, d);
    for (const auto& atom : atoms) m.ez += atom.probability * atom.z;
    m.ez = 0.5 * (m.ez + m.ez.transpose());
    m.ez_pinv = pinv_small(m.ez);
    m.second = Matrix::Zero(d, d);
    for (const auto& atom : atoms)
        m.second += atom.probability * (atom.z * m.ez_pinv * atom.z);
    m.second = 0.5 * (m.second + m.second.transpose());
    Matrix basis = range_basis(m.ez);
    m.support_projector = basis * basis.transpose();
    return m;
}

OperatorMoments estimate_moments_vector(const SymMatrix& a, const SymMatrix& b_norm,
                                        const SketchSpec& spec, int samples, Rng& rng) {
    const Eigen::Index n = a.n();
    SymMatrix b_half = sqrt_psd(b_norm);
    Matrix binv_half = pinv_small(b_half.mat());
    Matrix g = a.mat() * binv_half;  // effective system matrix in whitened coordinates
    auto one_z = [&](const SketchSample& s) {
        Matrix w = g.transpose() * s.s;
        return Matrix(w * pinv_small(w.transpose() * w) * w.transpose());
    };
    OperatorMoments m;
    m.approximate = true;
    m.ez = Matrix::Zero(n, n);
    std::vector<Matrix> draws;
    draws.reserve(samples);
    for (int t = 0; t < samples; ++t) {
        draws.push_back(one_z(sample(spec, a, rng)));
        m.ez += draws.back();
    }
    m.ez /= static_cast<double>(samples);
    m.ez = 0.5 * (m.ez + m.ez.transpose());
    m.ez_pinv = pinv_small(m.ez);
    m.second = Matrix::Zero(n, n);
    for (const auto& z : draws) m.second += z * m.ez_pinv * z;
    m.second /= static_cast<double>(samples);
    m.second = 0.5 * (m.second + m.second.transpose());
    Matrix basis = range_basis(m.ez);
    m.support_projector = basis * basis.transpose();
    return m;
}

std::pair<double, double> mu_nu_bruteforce(const OperatorMoments& m) {
    Matrix basis = range_basis(m.ez);
    if (basis.cols() == 0) throw DegenerateDistribution("oracle: E[Z] is zero");
    Matrix ez_r = basis.transpose() * m.ez * basis;
    Eigen::SelfAdjointEigenSolver<Matrix> es(ez_r);
    const double mu = es.eigenvalues()(0);

    // nu as the largest generalized eigenvalue of (second, ez) on the range.
    Matrix w = es.operatorInverseSqrt();
    Matrix second_r = basis.transpose() * m.second * basis;
    Eigen::SelfAdjointEigenSolver<Matrix> es2(w * second_r * w);
    const double nu = es2.eigenvalues()(es2.eigenvalues().size() - 1);
    return {mu, nu};
}

bool check_exactness(const OperatorMoments& m, const Matrix& a_op) {
    Matrix ez_basis = range_basis(m.ez);
    Eigen::Index rank_a = numeric_rank(a_op);
    if (rank_a != ez_basis.cols()) return false;
    // Equal ranks plus equal span: stacking the bases must not increase rank.
    Eigen::JacobiSVD<Matrix> svd_u(a_op.transpose(), Eigen::ComputeThinU);
    Matrix joint(a_op.cols(), rank_a + ez_basis.cols());
    joint.leftCols(rank_a) = svd_u.matrixU().leftCols(rank_a);
    joint.rightCols(ez_basis.cols()) = ez_basis;
    return numeric_rank(joint) == rank_a;
}

bool rank_bound_check(const std::vector<ZAtom>& atoms, const Matrix& a_op, double nu,
                      double slack) {
    double expected_rank = 0.0;
    for (const auto& atom : atoms)
        expected_rank += atom.probability * static_cast<double>(numeric_rank(atom.z));
    if (expected_rank <= 0.0) return false;
    const double rank_a = static_cast<double>(numeric_rank(a_op));
    return rank_a / expected_rank <= nu + slack;
}

double lyapunov_vector(const SolverState& state, const Vector& x_star,
                       const OperatorMoments& m, double mu) {
    Vector dv = state.v - x_star;
    Vector dx = state.x - x_star;
    return dv.dot(m.ez_pinv * dv) + dx.squaredNorm() / mu;
}

double lyapunov_matrix(const SymMatrix& x, const SymMatrix& v, const SymMatrix& a,
                       const SymMatrix& a_half, const OperatorMoments& m, double mu) {
    Matrix a_inv = pinv_small(a.mat());
    Vector wv = vec(a_half.mat() * (v.mat() - a_inv) * a_half.mat());
    if (wv.size() != m.ez_pinv.rows())
        throw OracleUnavailable("lyapunov_matrix: moments are not the matrix-case operator");
    double vterm = wv.dot(m.ez_pinv * wv);
    double xres = fa_residual(x, a, a_half);
    return vterm + xres * xres / mu;
}

} // namespace sap
