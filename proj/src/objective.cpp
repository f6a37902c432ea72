#include "sap/objective.hpp"

#include <cmath>

namespace sap {

namespace {

// log(1 + exp(t)) without overflow
double log1pexp(double t) {
    if (t > 0.0) return t + std::log1p(std::exp(-t));
    return std::log1p(std::exp(t));
}

// 1/(1 + exp(t)) without overflow
double neg_sigmoid(double t) {
    if (t > 0.0) {
        double e = std::exp(-t);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(t));
}

} // namespace

LogisticObjective::LogisticObjective(Matrix features, Vector labels, double lambda)
    : features_(std::move(features)), labels_(std::move(labels)), lambda_(lambda) {
    if (features_.rows() != labels_.size())
        throw DimensionMismatch("LogisticObjective: feature/label count mismatch");
    for (Eigen::Index i = 0; i < labels_.size(); ++i)
        if (labels_(i) != 1.0 && labels_(i) != -1.0)
            throw InputError("LogisticObjective: labels must be -1 or +1");
}

double LogisticObjective::value(const Vector& w) const {
    const double m = static_cast<double>(features_.rows());
    Vector margins = (features_ * w).cwiseProduct(labels_);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < margins.size(); ++i) sum += log1pexp(-margins(i));
    return sum / m + 0.5 * lambda_ * w.squaredNorm();
}

Vector LogisticObjective::gradient(const Vector& w) const {
    const double m = static_cast<double>(features_.rows());
    Vector margins = (features_ * w).cwiseProduct(labels_);
    Vector coeff(margins.size());
    for (Eigen::Index i = 0; i < margins.size(); ++i)
        coeff(i) = -labels_(i) * neg_sigmoid(margins(i));
    return features_.transpose() * coeff / m + lambda_ * w;
}

RidgeObjective::RidgeObjective(Matrix data, Vector targets, double lambda)
    : data_(std::move(data)),
      targets_(std::move(targets)),
      lambda_(lambda),
      hessian_(ridge_hessian(data_, lambda_)) {
    if (data_.rows() != targets_.size())
        throw DimensionMismatch("RidgeObjective: data/target count mismatch");
}

double RidgeObjective::value(const Vector& w) const {
    return 0.5 * (data_ * w - targets_).squaredNorm() + 0.5 * lambda_ * w.squaredNorm();
}

Vector RidgeObjective::gradient(const Vector& w) const {
    return data_.transpose() * (data_ * w - targets_) + lambda_ * w;
}

SymMatrix ridge_hessian(const Matrix& data, double lambda) {
    if (lambda < 0.0) throw InputError("ridge_hessian: lambda must be nonnegative");
    Matrix h = data.transpose() * data;
    h.diagonal().array() += lambda;
    return SymMatrix::symmetrize(h);
}

Vector finite_difference_gradient(const Objective& obj, const Vector& w) {
    Vector g(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double h = 1e-6 * (1.0 + std::abs(w(i)));
        Vector wp = w, wm = w;
        wp(i) += h;
        wm(i) -= h;
        g(i) = (obj.value(wp) - obj.value(wm)) / (2.0 * h);
    }
    return g;
}

} // namespace sap
