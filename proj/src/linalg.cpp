#include "sap/linalg.hpp"

#include <cmath>

namespace sap {

SymMatrix::SymMatrix(const Matrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("SymMatrix: not square");
    require_finite(m, "SymMatrix");
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < j; ++i) {
            const double tol = 1e-12 * std::max(1.0, std::abs(m(i, j)));
            if (std::abs(m(i, j) - m(j, i)) > tol)
                throw InputError("SymMatrix: asymmetric entries");
        }
    }
    mat_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::symmetrize(const Matrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("SymMatrix: not square");
    require_finite(m, "SymMatrix");
    SymMatrix s;
    s.mat_ = 0.5 * (m + m.transpose());
    return s;
}

Spectrum sym_eig(const SymMatrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.mat());
    if (es.info() != Eigen::Success) throw InputError("sym_eig: eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

Matrix cholesky(const SymMatrix& a) {
    // Hand-rolled so the pivot tolerance matches the documented contract.
    const Eigen::Index n = a.n();
    const double max_diag = n > 0 ? a.mat().diagonal().maxCoeff() : 0.0;
    const double pivot_tol = static_cast<double>(n) * 1e-14 * max_diag;
    Matrix l = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = a(j, j) - l.row(j).head(j).squaredNorm();
        if (d <= pivot_tol) throw NotPositiveDefinite("cholesky: pivot too small");
        l(j, j) = std::sqrt(d);
        for (Eigen::Index i = j + 1; i < n; ++i) {
            l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
        }
    }
    return l;
}

SymMatrix sqrt_psd(const SymMatrix& a) {
    Spectrum s = sym_eig(a);
    const Eigen::Index n = a.n();
    const double lmax = n > 0 ? std::max(0.0, s.eigenvalues.maxCoeff()) : 0.0;
    const double clamp = static_cast<double>(n) * 1e-12 * lmax;
    Vector root(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double lambda = s.eigenvalues(i);
        if (lambda < -clamp) throw NotPsd("sqrt_psd: negative eigenvalue");
        root(i) = std::sqrt(std::max(lambda, 0.0));
    }
    return SymMatrix::symmetrize(s.eigenvectors * root.asDiagonal() * s.eigenvectors.transpose());
}

Matrix pinv_small(const Matrix& m, double tol) {
    require_finite(m, "pinv_small");
    if (m.rows() == 0 || m.cols() == 0) return m.transpose();
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sigma = svd.singularValues();
    if (tol < 0.0)
        tol = static_cast<double>(std::max(m.rows(), m.cols())) * 1e-12 * sigma(0);
    Vector inv = Vector::Zero(sigma.size());
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma(i) > tol) inv(i) = 1.0 / sigma(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Matrix kron(const Matrix& a, const Matrix& b, Eigen::Index cap) {
    require_finite(a, "kron");
    require_finite(b, "kron");
    if (a.rows() > cap || a.cols() > cap || b.rows() > cap || b.cols() > cap)
        throw InputError("kron: dimension cap exceeded");
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Vector vec(const Matrix& x) {
    return Eigen::Map<const Vector>(x.data(), x.size());
}

Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
    if (v.size() != rows * cols) throw DimensionMismatch("unvec: size mismatch");
    return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

double fa_residual(const SymMatrix& x, const SymMatrix& a, const SymMatrix& a_half) {
    if (x.n() != a.n() || a_half.n() != a.n())
        throw DimensionMismatch("fa_residual: dimension mismatch");
    Matrix m = a_half.mat() * x.mat() * a_half.mat();
    m.diagonal().array() -= 1.0;
    return m.norm();
}

} // namespace sap
