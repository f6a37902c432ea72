#pragma once

#include <memory>

#include "sap/linalg.hpp"

namespace sap {

/// Smooth objective with analytic gradient.
class Objective {
public:
    virtual ~Objective() = default;
    virtual Eigen::Index dimension() const = 0;
    virtual double value(const Vector& w) const = 0;
    virtual Vector gradient(const Vector& w) const = 0;
};

/// f(w) = (1/m) sum_i log(1 + exp(-y_i <a_i, w>)) + (lambda/2) ||w||^2
/// with labels in {-1, +1}. Evaluation is overflow-safe for large margins.
class LogisticObjective final : public Objective {
public:
    LogisticObjective(Matrix features, Vector labels, double lambda);
    Eigen::Index dimension() const override { return features_.cols(); }
    double value(const Vector& w) const override;
    Vector gradient(const Vector& w) const override;

private:
    Matrix features_;  // m x n
    Vector labels_;    // in {-1, +1}
    double lambda_;
};

/// f(w) = (1/2)||A w - b||^2 + (lambda/2)||w||^2 with constant Hessian
/// A^T A + lambda I.
class RidgeObjective final : public Objective {
public:
    RidgeObjective(Matrix data, Vector targets, double lambda);
    Eigen::Index dimension() const override { return data_.cols(); }
    double value(const Vector& w) const override;
    Vector gradient(const Vector& w) const override;
    const SymMatrix& hessian() const { return hessian_; }

private:
    Matrix data_;
    Vector targets_;
    double lambda_;
    SymMatrix hessian_;
};

/// A^T A + lambda I.
SymMatrix ridge_hessian(const Matrix& data, double lambda);

/// Central-difference gradient, the test oracle for analytic gradients.
Vector finite_difference_gradient(const Objective& obj, const Vector& w);

} // namespace sap
