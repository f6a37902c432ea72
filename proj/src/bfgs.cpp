#include "sap/bfgs.hpp"

#include <cmath>
#include <limits>

namespace sap {

std::optional<SymMatrix> classic_bfgs_update(const SymMatrix& y, const Vector& delta,
                                             const Vector& zeta, double curvature_tol) {
    const double c = delta.dot(zeta);
    if (!(c > curvature_tol * delta.norm() * zeta.norm())) return std::nullopt;
    Vector u = y.mat() * zeta;
    const double scale = (c + zeta.dot(u)) / (c * c);
    Matrix next = y.mat();
    next.noalias() -= (delta * u.transpose() + u * delta.transpose()) / c;
    next.noalias() += scale * (delta * delta.transpose());
    return SymMatrix::symmetrize(next);
}

OptimState make_optim_state(const Vector& w0) {
    OptimState st;
    st.w = w0;
    st.x = SymMatrix::identity(w0.size());
    st.v = st.x;
    return st;
}

namespace {

OptimState step_impl(const OptimState& state, const Objective& obj,
                     const AccelParams* p, double eta) {
    Vector g = obj.gradient(state.w);
    if (!g.allFinite()) throw DivergedError("bfgs: non-finite gradient");
    OptimState next;
    next.w = state.w - eta * (state.x.mat() * g);
    Vector g_next = obj.gradient(next.w);
    if (!next.w.allFinite() || !g_next.allFinite())
        throw DivergedError("bfgs: iterate diverged");
    Vector delta = next.w - state.w;
    Vector zeta = g_next - g;

    SymMatrix y = p ? SymMatrix::symmetrize(p->alpha * state.v.mat() +
                                            (1.0 - p->alpha) * state.x.mat())
                    : state.x;
    auto updated = classic_bfgs_update(y, delta, zeta);
    next.last_update_skipped = !updated.has_value();
    next.x = updated.value_or(y);
    if (p) {
        next.v = SymMatrix::symmetrize(p->beta * state.v.mat() +
                                       (1.0 - p->beta) * y.mat() -
                                       p->gamma * (y.mat() - next.x.mat()));
    } else {
        next.v = next.x;
    }
    next.iteration = state.iteration + 1;
    return next;
}

} // namespace

OptimState accel_bfgs_step(const OptimState& state, const Objective& obj,
                           const AccelParams& p, double eta) {
    return step_impl(state, obj, &p, eta);
}

OptimState classic_bfgs_step(const OptimState& state, const Objective& obj, double eta) {
    return step_impl(state, obj, nullptr, eta);
}

double grid_search_stepsize(const Objective& obj, const Vector& w0,
                            const std::vector<double>& grid, int probe_iters) {
    if (grid.empty()) throw InputError("grid_search_stepsize: empty grid");
    double best_eta = 0.0;
    double best_value = std::numeric_limits<double>::infinity();
    for (double eta : grid) {
        if (!(eta > 0.0)) throw InputError("grid_search_stepsize: stepsizes must be positive");
        OptimState st = make_optim_state(w0);
        bool diverged = false;
        for (int k = 0; k < probe_iters; ++k) {
            try {
                st = classic_bfgs_step(st, obj, eta);
            } catch (const DivergedError&) {
                diverged = true;
                break;
            }
        }
        if (diverged) continue;
        double f = obj.value(st.w);
        if (std::isfinite(f) && f < best_value) {
            best_value = f;
            best_eta = eta;
        }
    }
    if (best_eta == 0.0) throw NoViableStepsize("grid_search_stepsize: all entries diverged");
    return best_eta;
}

std::vector<double> default_stepsize_grid() {
    std::vector<double> grid;
    for (int k = -10; k <= 2; ++k) grid.push_back(std::ldexp(1.0, k));
    return grid;
}

} // namespace sap
