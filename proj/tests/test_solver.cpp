#include <doctest.h>

#include "sap/solver.hpp"
#include "test_util.hpp"

using namespace sap;

namespace {

SketchSample basis_sample(int n, int i) {
    Matrix s = Matrix::Zero(n, 1);
    s(i, 0) = 1.0;
    return {s, {i}};
}

} // namespace

TEST_CASE("sap_step pinned coordinate projections") {
    // A = I, S = e1, b = 0: the first coordinate is zeroed, the second kept.
    SymMatrix eye = SymMatrix::identity(2);
    Vector x{{1.0, 1.0}};
    Vector out = sap_step(eye, Vector::Zero(2), x, basis_sample(2, 0));
    CHECK(out(0) == doctest::Approx(0.0));
    CHECK(out(1) == 1.0);

    // A = diag(1,2), b = (1,2), S = e2, x = 0 -> x+ = (0, 1)
    SymMatrix d(Matrix{{1.0, 0.0}, {0.0, 2.0}});
    Vector b{{1.0, 2.0}};
    out = sap_step(d, b, Vector::Zero(2), basis_sample(2, 1));
    CHECK(out(0) == 0.0);
    CHECK(out(1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("sap_step satisfies the sketched constraint and fixes the solution") {
    Rng rng(19);
    SymMatrix a = testutil::random_pd(6, rng);
    Vector x_star = testutil::random_matrix(6, 1, rng).col(0);
    Vector b = a.mat() * x_star;
    SketchSpec spec;
    spec.sketch_rank = 2;
    for (int t = 0; t < 25; ++t) {
        SketchSample s = sample(spec, a, rng);
        Vector x = testutil::random_matrix(6, 1, rng).col(0);
        Vector xp = sap_step(a, b, x, s);
        CHECK((s.s.transpose() * (a.mat() * xp - b)).norm() < 1e-10);
        // the solution is a fixed point
        CHECK((sap_step(a, b, x_star, s) - x_star).norm() < 1e-10);
    }
}

TEST_CASE("sap_step with a weighted norm projects in the B inner product") {
    Rng rng(23);
    SymMatrix a = testutil::random_pd(5, rng);
    SymMatrix bw = testutil::random_pd(5, rng, 1.0, 3.0);
    Eigen::LLT<Matrix> llt(bw.mat());
    Vector x_star = testutil::random_matrix(5, 1, rng).col(0);
    Vector b = a.mat() * x_star;
    SketchSpec spec;
    for (int t = 0; t < 10; ++t) {
        SketchSample s = sample(spec, a, rng);
        Vector x = testutil::random_matrix(5, 1, rng).col(0);
        Vector xp = sap_step(a, b, x, s, &llt);
        CHECK((s.s.transpose() * (a.mat() * xp - b)).norm() < 1e-9);
        // update direction lies in B^{-1} A S
        Vector dir = x - xp;
        Vector span = llt.solve(a.mat() * s.s).col(0);
        CHECK((dir - dir.dot(span) / span.squaredNorm() * span).norm() < 1e-9);
    }
}

TEST_CASE("accel_step degenerations") {
    Rng rng(29);
    SymMatrix a = testutil::random_pd(4, rng);
    Vector x_star = testutil::random_matrix(4, 1, rng).col(0);
    Vector b = a.mat() * x_star;
    SketchSpec spec;

    // x = v = x* is a fixed point of the accelerated recursion
    AccelParams p = derive_params(0.1, 4.0);
    SolverState st{x_star, x_star, 0};
    for (int t = 0; t < 10; ++t) {
        SolverState nx = accel_step(a, b, st, sample(spec, a, rng), p);
        CHECK((nx.x - x_star).norm() < 1e-10);
        CHECK((nx.v - x_star).norm() < 1e-10);
    }

    // alpha=1, beta=1, gamma=0: x+ is the plain projection of v; v is frozen
    AccelParams pdeg = explicit_params(1.0, 1.0, 0.0, 1.0);
    SolverState st2{testutil::random_matrix(4, 1, rng).col(0),
                    testutil::random_matrix(4, 1, rng).col(0), 0};
    SketchSample s = sample(spec, a, rng);
    SolverState nx = accel_step(a, b, st2, s, pdeg);
    CHECK((nx.x - sap_step(a, b, st2.v, s)).norm() < 1e-13);
    CHECK((nx.v - st2.v).norm() == 0.0);

    // with v = x, the accelerated x-update coincides with the plain step at x
    SolverState st3{st2.x, st2.x, 0};
    nx = accel_step(a, b, st3, s, p);
    CHECK((nx.x - sap_step(a, b, st3.x, s)).norm() < 1e-12);
}

TEST_CASE("solve drives the residual to zero on the identity") {
    SymMatrix eye = SymMatrix::identity(5);
    Vector b{{1.0, 2.0, 3.0, 4.0, 5.0}};
    SketchSpec spec;
    SolveOptions opts;
    opts.mode = SolveMode::Plain;
    opts.max_iter = 200;
    opts.record_every = 0;
    SolveResult res = solve(eye, b, spec, derive_params(0.2, 5.0), opts, 3);
    CHECK(res.records.back().residual < 1e-12);
    CHECK((res.x_star - b).norm() < 1e-12);
}

TEST_CASE("solve record bookkeeping") {
    SymMatrix eye = SymMatrix::identity(3);
    Vector b{{1.0, 0.0, 0.0}};
    SketchSpec spec;
    SolveOptions opts;
    opts.max_iter = 0;
    SolveResult res = solve(eye, b, spec, derive_params(1.0 / 3.0, 3.0), opts, 1);
    REQUIRE(res.records.size() == 1);
    CHECK(res.records[0].iteration == 0);
    CHECK(res.records[0].residual == doctest::Approx(1.0));

    opts.max_iter = 10;
    opts.record_every = 4;
    res = solve(eye, b, spec, derive_params(1.0 / 3.0, 3.0), opts, 1);
    // iterations 0, 4, 8 and the final 10
    REQUIRE(res.records.size() == 4);
    CHECK(res.records[1].iteration == 4);
    CHECK(res.records.back().iteration == 10);
}

TEST_CASE("solve_weighted with B = I reproduces solve exactly") {
    Rng rng(37);
    SymMatrix a = testutil::random_pd(6, rng);
    Vector b = testutil::random_matrix(6, 1, rng).col(0);
    SketchSpec spec;
    AccelParams p = derive_params(0.05, 10.0);
    SolveOptions opts;
    opts.max_iter = 50;
    opts.record_every = 1;
    SolveResult plain = solve(a, b, spec, p, opts, 11);
    SolveResult weighted = solve_weighted(a, b, SymMatrix::identity(6), spec, p, opts, 11);
    REQUIRE(plain.records.size() == weighted.records.size());
    for (std::size_t i = 0; i < plain.records.size(); ++i)
        CHECK(plain.records[i].residual == weighted.records[i].residual);
    CHECK((plain.final_state.x - weighted.final_state.x).norm() == 0.0);
}

TEST_CASE("solve_weighted with B = c*I scales nothing but the norm") {
    Rng rng(41);
    SymMatrix a = testutil::random_pd(5, rng);
    Vector b = testutil::random_matrix(5, 1, rng).col(0);
    SketchSpec spec;
    AccelParams p = derive_params(0.05, 10.0);
    SolveOptions opts;
    opts.max_iter = 40;
    SolveResult id = solve(a, b, spec, p, opts, 5);
    SymMatrix four(Matrix(4.0 * Matrix::Identity(5, 5)));
    SolveResult scaled = solve_weighted(a, b, four, spec, p, opts, 5);
    // the projection is invariant under B -> c B; iterates agree
    CHECK((id.final_state.x - scaled.final_state.x).norm() < 1e-10);
    CHECK(scaled.records.back().residual ==
          doctest::Approx(2.0 * id.records.back().residual).epsilon(1e-9));
}

TEST_CASE("solve_weighted rejects an indefinite weight matrix") {
    SymMatrix a = SymMatrix::identity(2);
    SymMatrix bad(Matrix{{1.0, 0.0}, {0.0, -1.0}});
    SketchSpec spec;
    SolveOptions opts;
    CHECK_THROWS_AS(solve_weighted(a, Vector::Zero(2), bad, spec,
                                   derive_params(0.5, 2.0), opts, 1),
                    NotPositiveDefinite);
}

TEST_CASE("min-norm target handles singular consistent systems") {
    // A = diag(1, 0), b = (2, 0): solutions are x = (2, t); x0 = 0 picks (2, 0).
    SymMatrix a(Matrix{{1.0, 0.0}, {0.0, 0.0}});
    Vector b{{2.0, 0.0}};
    SketchSpec spec;
    spec.strategy = SketchStrategy::CoordinateUniform;
    SolveOptions opts;
    opts.max_iter = 0;
    SolveResult res = solve(a, b, spec, derive_params(0.5, 2.0), opts, 1);
    CHECK((res.x_star - Vector{{2.0, 0.0}}).norm() < 1e-12);
}
