#include <doctest.h>

#include "sap/oracle.hpp"
#include "test_util.hpp"

using namespace sap;

TEST_CASE("vector-case atoms for diag(1,2) under convenient probabilities, B = A") {
    SymMatrix a(Matrix{{1.0, 0.0}, {0.0, 2.0}});
    SketchSpec spec;
    auto atoms = enumerate_Z_vector(a, a, spec);
    REQUIRE(atoms.size() == 2);
    CHECK(atoms[0].probability == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(atoms[1].probability == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    // in the A-weighted geometry each atom is the coordinate projector
    CHECK((atoms[0].z - Matrix{{1.0, 0.0}, {0.0, 0.0}}).norm() < 1e-12);
    CHECK((atoms[1].z - Matrix{{0.0, 0.0}, {0.0, 1.0}}).norm() < 1e-12);

    OperatorMoments m = moments_from_atoms(atoms);
    CHECK((m.ez - a.mat() / 3.0).norm() < 1e-12);  // E[Z] = A / Tr(A)
    auto [mu, nu] = mu_nu_bruteforce(m);
    CHECK(mu == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(nu == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("vector-case atoms for the identity under uniform probabilities") {
    SymMatrix eye = SymMatrix::identity(4);
    SketchSpec spec;
    spec.strategy = SketchStrategy::CoordinateUniform;
    auto atoms = enumerate_Z_vector(eye, eye, spec);
    double total = 0.0;
    for (const auto& atom : atoms) total += atom.probability;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    auto [mu, nu] = mu_nu_bruteforce(moments_from_atoms(atoms));
    CHECK(mu == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(nu == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("oracle matches the convenient closed forms on random PD matrices") {
    Rng rng(71);
    SketchSpec spec;
    for (int t = 0; t < 6; ++t) {
        SymMatrix a = testutil::random_pd(2 + t, rng);
        auto [mu, nu] = mu_nu_bruteforce(moments_from_atoms(enumerate_Z_vector(a, a, spec)));
        Spectrum sp = sym_eig(a);
        CHECK(mu == doctest::Approx(sp.eigenvalues(0) / a.trace()).epsilon(1e-9));
        CHECK(nu == doctest::Approx(a.trace() / a.min_diag()).epsilon(1e-9));
    }
}

TEST_CASE("enumeration rejects what it cannot cover exactly") {
    SymMatrix eye = SymMatrix::identity(3);
    SketchSpec gaussian;
    gaussian.strategy = SketchStrategy::Gaussian;
    CHECK_THROWS_AS(enumerate_Z_vector(eye, eye, gaussian), UnsupportedForEnumeration);
    SketchSpec wide;
    wide.sketch_rank = 2;
    CHECK_THROWS_AS(enumerate_Z_vector(eye, eye, wide), UnsupportedForEnumeration);
    SketchSpec ok;
    CHECK_THROWS_AS(enumerate_Z_vector(SymMatrix::identity(65), SymMatrix::identity(65), ok),
                    OracleUnavailable);
    CHECK_THROWS_AS(enumerate_Zbar_matrix(SymMatrix::identity(25), ok), OracleUnavailable);
}

TEST_CASE("matrix-case operator for the 2x2 identity") {
    SymMatrix eye = SymMatrix::identity(2);
    SketchSpec spec;
    auto atoms = enumerate_Zbar_matrix(eye, spec);
    REQUIRE(atoms.size() == 2);
    OperatorMoments m = moments_from_atoms(atoms);
    // E[Zbar] = diag(1/2, 1, 1, 1/2) in the vec basis
    Vector diag_expect{{0.5, 1.0, 1.0, 0.5}};
    CHECK((m.ez - Matrix(diag_expect.asDiagonal())).norm() < 1e-13);
    auto [mu, nu] = mu_nu_bruteforce(m);
    CHECK(mu == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(nu >= 1.0 - 1e-12);
}

TEST_CASE("sandwich bounds hold for random matrices and both coordinate laws") {
    Rng rng(73);
    for (SketchStrategy strat : {SketchStrategy::CoordinateConvenient,
                                 SketchStrategy::CoordinateUniform}) {
        SketchSpec spec;
        spec.strategy = strat;
        for (int t = 0; t < 5; ++t) {
            SymMatrix a = testutil::random_pd(2 + (t % 4), rng);
            SymMatrix a_half = sqrt_psd(a);
            auto atoms = enumerate_Zbar_matrix(a, spec);
            OperatorMoments m = moments_from_atoms(atoms);
            double lmin_zbar = sym_eig(SymMatrix::symmetrize(m.ez)).eigenvalues(0);

            // E[P] over the same coordinate distribution
            Matrix ep = Matrix::Zero(a.n(), a.n());
            for (Eigen::Index i = 0; i < a.n(); ++i) {
                SketchSample s;
                s.s = Matrix::Zero(a.n(), 1);
                s.s(i, 0) = 1.0;
                s.coords = {static_cast<int>(i)};
                ep += atoms[static_cast<std::size_t>(i)].probability *
                      projector_P(a, a_half, s).mat();
            }
            double lmin_p = sym_eig(SymMatrix::symmetrize(ep)).eigenvalues(0);
            CHECK(lmin_p <= lmin_zbar + 1e-9);
            CHECK(lmin_zbar <= 2.0 * lmin_p + 1e-9);
        }
    }
}

TEST_CASE("exactness detection") {
    SketchSpec spec;
    Rng rng(79);
    SymMatrix a = testutil::random_pd(4, rng);
    OperatorMoments m = moments_from_atoms(enumerate_Z_vector(a, a, spec));
    CHECK(check_exactness(m, a.mat()));

    // a distribution stuck on one coordinate cannot be exact for a rank-2 system
    std::vector<ZAtom> stuck{{1.0, Matrix{{1.0, 0.0}, {0.0, 0.0}}}};
    CHECK(!check_exactness(moments_from_atoms(stuck), Matrix::Identity(2, 2)));
}

TEST_CASE("singular systems restrict the oracle to the range") {
    // A = diag(1, 2, 0) under uniform probabilities: the third atom vanishes.
    SymMatrix a(Matrix(Vector{{1.0, 2.0, 0.0}}.asDiagonal()));
    SketchSpec spec;
    spec.strategy = SketchStrategy::CoordinateUniform;
    auto atoms = enumerate_Z_vector(a, SymMatrix::identity(3), spec);
    CHECK(atoms[2].z.norm() == 0.0);
    OperatorMoments m = moments_from_atoms(atoms);
    CHECK((m.support_projector - Matrix(Vector{{1.0, 1.0, 0.0}}.asDiagonal())).norm() < 1e-10);
    CHECK(check_exactness(m, a.mat()));
    auto [mu, nu] = mu_nu_bruteforce(m);
    CHECK(mu > 0.0);
    CHECK(nu >= 1.0 - 1e-9);
}

TEST_CASE("rank bound from the second-moment constant") {
    SymMatrix eye = SymMatrix::identity(4);
    SketchSpec spec;
    spec.strategy = SketchStrategy::CoordinateUniform;
    auto atoms = enumerate_Z_vector(eye, eye, spec);
    auto [mu, nu] = mu_nu_bruteforce(moments_from_atoms(atoms));
    // rank(A) / E[rank Z] = 4 / 1 = nu exactly: the bound is tight here
    CHECK(rank_bound_check(atoms, eye.mat(), nu));
    CHECK(!rank_bound_check(atoms, eye.mat(), nu - 0.5, 1e-9));
}

TEST_CASE("Monte-Carlo gaussian moments are close for the identity") {
    SymMatrix eye = SymMatrix::identity(3);
    SketchSpec spec;
    spec.strategy = SketchStrategy::Gaussian;
    Rng rng(83);
    OperatorMoments m = estimate_moments_vector(eye, eye, spec, 8000, rng);
    CHECK(m.approximate);
    // Z projects onto a uniformly random direction, so E[Z] = I/3
    CHECK((m.ez - Matrix::Identity(3, 3) / 3.0).norm() < 0.05);
    auto [mu, nu] = mu_nu_bruteforce(m);
    CHECK(mu == doctest::Approx(1.0 / 3.0).epsilon(0.15));
    CHECK(nu == doctest::Approx(3.0).epsilon(0.15));
}

TEST_CASE("lyapunov_vector pinned values") {
    SymMatrix eye = SymMatrix::identity(2);
    SketchSpec spec;
    spec.strategy = SketchStrategy::CoordinateUniform;
    OperatorMoments m = moments_from_atoms(enumerate_Z_vector(eye, eye, spec));
    // E[Z] = I/2, so the v-term weight is 2I
    Vector x_star{{1.0, 1.0}};
    SolverState at_opt{x_star, x_star, 0};
    CHECK(lyapunov_vector(at_opt, x_star, m, 0.5) == doctest::Approx(0.0));

    SolverState off{x_star + Vector{{1.0, 0.0}}, x_star, 0};
    // 0 (v-term) + (1/mu)*1 = 2
    CHECK(lyapunov_vector(off, x_star, m, 0.5) == doctest::Approx(2.0).epsilon(1e-12));
    SolverState voff{x_star, x_star + Vector{{1.0, 0.0}}, 0};
    CHECK(lyapunov_vector(voff, x_star, m, 0.5) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("lyapunov_matrix agrees with the explicit trace evaluation") {
    Rng rng(89);
    SymMatrix a = testutil::random_pd(3, rng);
    SymMatrix a_half = sqrt_psd(a);
    SketchSpec spec;
    OperatorMoments m = moments_from_atoms(enumerate_Zbar_matrix(a, spec));
    auto [mu, nu] = mu_nu_bruteforce(m);

    SymMatrix x = testutil::random_pd(3, rng);
    SymMatrix v = testutil::random_pd(3, rng);
    double got = lyapunov_matrix(x, v, a, a_half, m, mu);

    // same quantity through Tr(W^T unvec(E[Zbar]^+ vec(W))) + residual term
    Matrix a_inv = a.mat().inverse();
    Matrix w = a_half.mat() * (v.mat() - a_inv) * a_half.mat();
    Matrix weighted = unvec(m.ez_pinv * vec(w), 3, 3);
    double vterm = (w.transpose() * weighted).trace();
    double xres = fa_residual(x, a, a_half);
    CHECK(got == doctest::Approx(vterm + xres * xres / mu).epsilon(1e-10));

    // zero at the solution
    SymMatrix ainv_sym = SymMatrix::symmetrize(a_inv);
    CHECK(lyapunov_matrix(ainv_sym, ainv_sym, a, a_half, m, mu) < 1e-18);
}
