#pragma once

#include <Eigen/Dense>

#include "sap/errors.hpp"

namespace sap {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense symmetric matrix. Construction validates symmetry and finiteness;
/// entries are stored exactly symmetric afterwards.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(const Matrix& m);

    static SymMatrix identity(Eigen::Index n) { return SymMatrix(Matrix::Identity(n, n)); }
    /// Symmetrizes (m + m^T)/2 without the symmetry check. For iterates that
    /// accumulate floating point drift.
    static SymMatrix symmetrize(const Matrix& m);

    Eigen::Index n() const { return mat_.rows(); }
    const Matrix& mat() const { return mat_; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return mat_(i, j); }

    double trace() const { return mat_.trace(); }
    double min_diag() const { return mat_.diagonal().minCoeff(); }

private:
    Matrix mat_;
};

struct Spectrum {
    Vector eigenvalues;   // ascending
    Matrix eigenvectors;  // orthonormal columns, A = U diag(l) U^T
};

Spectrum sym_eig(const SymMatrix& a);

/// Lower-triangular L with L L^T = A. Throws NotPositiveDefinite.
Matrix cholesky(const SymMatrix& a);

/// Unique symmetric PSD square root. Eigenvalues in [-n*1e-12*lmax, 0) are
/// clamped to zero; anything more negative throws NotPsd.
SymMatrix sqrt_psd(const SymMatrix& a);

/// Moore-Penrose pseudoinverse via SVD. tol < 0 selects the default
/// max(rows,cols) * 1e-12 * sigma_max.
Matrix pinv_small(const Matrix& m, double tol = -1.0);

/// Kronecker product. Guarded by a dimension cap since it is only used by the
/// small-instance oracle. (A kron B) vec(X) = vec(B X A^T).
Matrix kron(const Matrix& a, const Matrix& b, Eigen::Index cap = 64);

/// vec(X), column-wise stacking.
Vector vec(const Matrix& x);
Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols);

/// || A^{1/2} X A^{1/2} - I ||_F, the F(A)-distance between X and A^{-1}.
double fa_residual(const SymMatrix& x, const SymMatrix& a, const SymMatrix& a_half);

inline void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) throw InputError(std::string(what) + ": non-finite entries");
}

} // namespace sap
