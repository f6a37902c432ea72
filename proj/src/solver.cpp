#include "sap/solver.hpp"

#include <chrono>
#include <cmath>

namespace sap {

namespace {

Matrix apply_binv(const Eigen::LLT<Matrix>* b_llt, const Matrix& m) {
    return b_llt ? b_llt->solve(m) : m;
}

// g = B^{-1} A S (S^T A B^{-1} A S)^+ S^T (A y - b)
Vector correction(const SymMatrix& a, const Vector& b, const Vector& y,
                  const SketchSample& s, const Eigen::LLT<Matrix>* b_llt) {
    Matrix w = a.mat() * s.s;            // n x tau
    Matrix u = apply_binv(b_llt, w);     // B^{-1} A S
    Matrix gram = w.transpose() * u;     // tau x tau, PSD
    Vector r = s.s.transpose() * (a.mat() * y - b);
    if (gram.rows() == 1) {
        double g = gram(0, 0);
        if (!(g > 0.0)) throw DegenerateSketch("correction: zero sketched Gram");
        return u.col(0) * (r(0) / g);
    }
    Eigen::JacobiSVD<Matrix> svd(gram);
    const Vector& sv = svd.singularValues();
    if (!(sv(0) > 0.0) || sv(sv.size() - 1) < sv(0) / 1e12)
        throw DegenerateSketch("correction: sketched Gram numerically singular");
    return u * gram.ldlt().solve(r);
}

Vector min_norm_solution(const SymMatrix& a, const Vector& b,
                         const Vector& x0, const Eigen::LLT<Matrix>* b_llt) {
    // argmin ||x - x0||_B subject to A x = b
    Matrix at_binv = apply_binv(b_llt, a.mat());        // B^{-1} A^T (A symmetric)
    Matrix gram = a.mat() * at_binv;                    // A B^{-1} A^T
    return x0 - at_binv * (pinv_small(gram) * (a.mat() * x0 - b));
}

double b_norm(const Vector& d, const SymMatrix* b_mat) {
    if (!b_mat) return d.norm();
    return std::sqrt(d.dot(b_mat->mat() * d));
}

SolveResult run(const SymMatrix& a, const Vector& b, const SymMatrix* b_norm_mat,
                const SketchSpec& spec, const AccelParams& p, const SolveOptions& opts,
                std::uint64_t seed, const std::string& tag) {
    const Eigen::Index n = a.n();
    if (b.size() != n) throw DimensionMismatch("solve: b dimension mismatch");

    std::optional<Eigen::LLT<Matrix>> llt;
    const Eigen::LLT<Matrix>* llt_ptr = nullptr;
    if (b_norm_mat) {
        llt.emplace(b_norm_mat->mat());
        if (llt->info() != Eigen::Success)
            throw NotPositiveDefinite("solve_weighted: B not positive definite");
        llt_ptr = &*llt;
    }

    SolverState st;
    st.x = Vector::Zero(n);
    st.v = st.x;

    SolveResult res;
    res.x_star = min_norm_solution(a, b, st.x, llt_ptr);

    Rng rng(seed);
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };
    auto record = [&](const SolverState& s_now) {
        ConvergenceRecord r;
        r.method = tag;
        r.seed = seed;
        r.iteration = s_now.iteration;
        r.elapsed_s = elapsed();
        r.residual = b_norm(s_now.x - res.x_star, b_norm_mat);
        res.records.push_back(r);
    };

    record(st);
    if (opts.capture_states) res.states.push_back(st);

    for (std::int64_t k = 0; k < opts.max_iter; ++k) {
        if (elapsed() > opts.time_budget_s) break;
        SolverState next;
        int attempt = 0;
        for (;;) {
            SketchSample s = sample(spec, a, rng);
            try {
                if (opts.mode == SolveMode::Plain) {
                    next.x = sap_step(a, b, st.x, s, llt_ptr);
                    next.v = next.x;
                } else {
                    next = accel_step(a, b, st, s, p, llt_ptr);
                }
                break;
            } catch (const DegenerateSketch&) {
                if (++attempt >= opts.max_resample)
                    throw DegenerateSketch("solve: resample limit exceeded");
            }
        }
        next.iteration = st.iteration + 1;
        st = std::move(next);
        if (opts.capture_states) res.states.push_back(st);
        const bool last = (k + 1 == opts.max_iter);
        if (last || (opts.record_every > 0 && st.iteration % opts.record_every == 0))
            record(st);
    }
    res.final_state = st;
    return res;
}

} // namespace

Vector sap_step(const SymMatrix& a, const Vector& b, const Vector& x,
                const SketchSample& s, const Eigen::LLT<Matrix>* b_llt) {
    return x - correction(a, b, x, s, b_llt);
}

SolverState accel_step(const SymMatrix& a, const Vector& b, const SolverState& state,
                       const SketchSample& s, const AccelParams& p,
                       const Eigen::LLT<Matrix>* b_llt) {
    Vector y = p.alpha * state.v + (1.0 - p.alpha) * state.x;
    Vector g = correction(a, b, y, s, b_llt);
    SolverState next;
    next.x = y - p.omega * g;
    next.v = p.beta * state.v + (1.0 - p.beta) * y - p.gamma * g;
    next.iteration = state.iteration + 1;
    return next;
}

SolveResult solve(const SymMatrix& a, const Vector& b, const SketchSpec& spec,
                  const AccelParams& p, const SolveOptions& opts, std::uint64_t seed,
                  const std::string& tag) {
    return run(a, b, nullptr, spec, p, opts, seed, tag);
}

SolveResult solve_weighted(const SymMatrix& a, const Vector& b, const SymMatrix& b_norm_mat,
                           const SketchSpec& spec, const AccelParams& p,
                           const SolveOptions& opts, std::uint64_t seed,
                           const std::string& tag) {
    return run(a, b, &b_norm_mat, spec, p, opts, seed, tag);
}

} // namespace sap
