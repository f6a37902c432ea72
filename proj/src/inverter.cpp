#include "sap/inverter.hpp"

#include <chrono>
#include <cmath>

namespace sap {

namespace {

// S (S^T A S)^{-1} S^T for a general sketch; throws on singular Gram.
Matrix sketch_pseudoprojector(const SymMatrix& a, const SketchSample& s) {
    Matrix gram = s.s.transpose() * a.mat() * s.s;
    Eigen::JacobiSVD<Matrix> svd(gram);
    const Vector& sv = svd.singularValues();
    if (!(sv(0) > 0.0) || sv(sv.size() - 1) < sv(0) / 1e12)
        throw DegenerateSketch("inverter: S^T A S numerically singular");
    return s.s * gram.ldlt().solve(Matrix(s.s.transpose()));
}

bool coord_rank1(const SketchSample& s) {
    return s.coords.size() == 1 && s.s.cols() == 1;
}

double residual_fa(const Matrix& x, const SymMatrix& a_half) {
    Matrix m = a_half.mat() * x * a_half.mat();
    m.diagonal().array() -= 1.0;
    return m.norm();
}

} // namespace

ParamEstimate estimate_params_convenient(const SymMatrix& a) {
    Spectrum sp = sym_eig(a);
    const double lmin = sp.eigenvalues(0);
    if (lmin <= 0.0)
        throw NotPositiveDefinite("estimate_params_convenient: A not positive definite");
    ParamEstimate est;
    // Extended-precision accumulation keeps the closed-form identities exact
    // when the diagonal is constant (e.g. trace/min_diag == n bit-for-bit).
    long double trace = 0.0L;
    for (Eigen::Index i = 0; i < a.n(); ++i) trace += static_cast<long double>(a(i, i));
    est.mu = static_cast<double>(static_cast<long double>(lmin) / trace);
    est.nu = static_cast<double>(trace / static_cast<long double>(a.min_diag()));
    est.method = ParamMethod::AnalyticConvenient;
    return est;
}

double heuristic_mu(double nu, double divisor) {
    if (!(nu > 0.0)) throw InputError("heuristic_mu: nu must be positive");
    if (!(divisor > 1.0)) throw InputError("heuristic_mu: divisor must exceed 1");
    return 1.0 / (divisor * nu);
}

SymMatrix sap_inverse_step(const SymMatrix& a, const SymMatrix& x, const SketchSample& s) {
    const Eigen::Index n = a.n();
    if (coord_rank1(s)) {
        const int i = s.coords[0];
        const double d = a(i, i);
        if (!(d > 0.0)) throw DegenerateSketch("sap_inverse_step: A_ii <= 0");
        Vector ai = a.mat().col(i);
        Vector u = x.mat() * ai;
        const double c = 1.0 / d + u.dot(ai) / (d * d);
        Matrix next = x.mat();
        next.row(i) -= u.transpose() / d;
        next.col(i) -= u / d;
        next(i, i) += c;
        return SymMatrix::symmetrize(next);
    }
    Matrix t = sketch_pseudoprojector(a, s);
    Matrix e = Matrix::Identity(n, n) - t * a.mat();
    return SymMatrix::symmetrize(t + e * x.mat() * e.transpose());
}

Matrix sap_inverse_step_nosym(const SymMatrix& a, const Matrix& x, const SketchSample& s) {
    if (coord_rank1(s)) {
        const int i = s.coords[0];
        const double d = a(i, i);
        if (!(d > 0.0)) throw DegenerateSketch("sap_inverse_step_nosym: A_ii <= 0");
        Matrix next = x;
        Eigen::RowVectorXd r = -(a.mat().col(i).transpose() * x) / d;
        r(i) += 1.0 / d;
        next.row(i) += r;
        return next;
    }
    Matrix t = sketch_pseudoprojector(a, s);
    return x + t * (Matrix::Identity(a.n(), a.n()) - a.mat() * x);
}

InverterState accel_inverse_step(const SymMatrix& a, const InverterState& state,
                                 const SketchSample& s, const AccelParams& p) {
    SymMatrix y = SymMatrix::symmetrize(p.alpha * state.v.mat() +
                                        (1.0 - p.alpha) * state.x.mat());
    InverterState next;
    next.x = sap_inverse_step(a, y, s);
    next.v = SymMatrix::symmetrize(p.beta * state.v.mat() + (1.0 - p.beta) * y.mat() -
                                   p.gamma * (y.mat() - next.x.mat()));
    next.iteration = state.iteration + 1;
    return next;
}

InvertResult invert(const SymMatrix& a, const SketchSpec& spec, const AccelParams& p,
                    const InvertOptions& opts, std::uint64_t seed,
                    const std::string& tag) {
    const Eigen::Index n = a.n();
    const SymMatrix a_half = sqrt_psd(a);
    const bool accel = opts.mode == InvertMode::Accel || opts.mode == InvertMode::AccelNosym;
    const bool sym = opts.mode == InvertMode::Plain || opts.mode == InvertMode::Accel;

    Matrix x = Matrix::Zero(n, n);
    Matrix v = x;
    std::int64_t iteration = 0;

    Rng rng(seed);
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    InvertResult res;
    auto record = [&] {
        ConvergenceRecord r;
        r.method = tag;
        r.seed = seed;
        r.iteration = iteration;
        r.elapsed_s = elapsed();
        r.residual = residual_fa(x, a_half);
        if (opts.record_lambda_min)
            r.lambda_min_x = sym_eig(SymMatrix::symmetrize(x)).eigenvalues(0);
        res.records.push_back(r);
    };

    record();
    for (std::int64_t k = 0; k < opts.max_iter; ++k) {
        if (elapsed() > opts.time_budget_s) break;
        int attempt = 0;
        for (;;) {
            SketchSample s = sample(spec, a, rng);
            try {
                if (!accel) {
                    x = sym ? sap_inverse_step(a, SymMatrix::symmetrize(x), s).mat()
                            : sap_inverse_step_nosym(a, x, s);
                    v = x;
                } else if (sym) {
                    InverterState st{SymMatrix::symmetrize(x), SymMatrix::symmetrize(v),
                                     iteration};
                    InverterState nx = accel_inverse_step(a, st, s, p);
                    x = nx.x.mat();
                    v = nx.v.mat();
                } else {
                    Matrix y = p.alpha * v + (1.0 - p.alpha) * x;
                    Matrix xp = sap_inverse_step_nosym(a, y, s);
                    v = p.beta * v + (1.0 - p.beta) * y - p.gamma * (y - xp);
                    x = xp;
                }
                break;
            } catch (const DegenerateSketch&) {
                if (++attempt >= opts.max_resample)
                    throw DegenerateSketch("invert: resample limit exceeded");
            }
        }
        ++iteration;
        const bool last = (k + 1 == opts.max_iter);
        if (last || (opts.record_every > 0 && iteration % opts.record_every == 0)) record();
    }
    res.final_x = x;
    if (accel && sym) res.final_v = SymMatrix::symmetrize(v);
    return res;
}

} // namespace sap
