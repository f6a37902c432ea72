#include <doctest.h>

#include <random>

#include "sap/params.hpp"
#include "sap/sketch.hpp"

using namespace sap;

TEST_CASE("derive_params pinned example mu=1/4 nu=4 omega=1") {
    AccelParams p = derive_params(0.25, 4.0, 1.0);
    CHECK(p.eta == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.gamma == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.beta == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(p.alpha == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(p.rho == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("derive_params pinned example mu=0.01 nu=100 omega=0.5") {
    AccelParams p = derive_params(0.01, 100.0, 0.5);
    CHECK(p.eta == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(p.gamma == doctest::Approx(0.8660254037844386).epsilon(1e-14));
    CHECK(p.beta == doctest::Approx(0.9913397459621556).epsilon(1e-14));
    CHECK(p.alpha == doctest::Approx(1.0 / (1.0 + p.gamma * 100.0)).epsilon(1e-14));
    CHECK(p.rho == doctest::Approx(1.0 - std::sqrt(0.01 * 0.75 / 100.0)).epsilon(1e-14));
}

TEST_CASE("derive_params input validation") {
    CHECK_THROWS_AS(derive_params(0.1, 10.0, 0.0), InvalidStepsize);
    CHECK_THROWS_AS(derive_params(0.1, 10.0, 2.0), InvalidStepsize);
    CHECK_THROWS_AS(derive_params(0.1, 10.0, -0.5), InvalidStepsize);
    CHECK_THROWS_AS(derive_params(0.0, 10.0), InputError);
    CHECK_THROWS_AS(derive_params(0.1, 0.0), InputError);
}

TEST_CASE("derive_params flags parameter pairs outside the feasible band") {
    CHECK(derive_params(0.1, 5.0).warnings.empty());      // 1 <= 5 <= 10
    CHECK(!derive_params(0.5, 10.0).warnings.empty());    // nu > 1/mu
    CHECK(!derive_params(0.5, 0.9).warnings.empty());     // nu < 1
}

TEST_CASE("params_from_s recovers the omega=1 parameters at s=1") {
    for (auto [mu, nu] : {std::pair{0.25, 4.0}, {0.01, 100.0}, {1e-4, 55.0}}) {
        AccelParams base = derive_params(mu, nu, 1.0);
        AccelParams fam = params_from_s(mu, nu, 1.0);
        CHECK(fam.beta == doctest::Approx(base.beta).epsilon(1e-12));
        CHECK(fam.gamma == doctest::Approx(base.gamma).epsilon(1e-12));
        CHECK(fam.alpha == doctest::Approx(base.alpha).epsilon(1e-12));
        CHECK(fam.rho == doctest::Approx(base.rho).epsilon(1e-12));
    }
}

TEST_CASE("params_from_s large-s limit approaches 1 - mu/nu") {
    AccelParams p = params_from_s(0.1, 10.0, 1e8);
    CHECK(p.rho == doctest::Approx(1.0 - 0.1 / 10.0).epsilon(1e-6));
    CHECK_THROWS_AS(params_from_s(0.1, 10.0, 0.0), InvalidFamilyParameter);
    CHECK_THROWS_AS(params_from_s(0.1, 10.0, -1.0), InvalidFamilyParameter);
}

TEST_CASE("params_from_s rate stays in (0, 1] across the family") {
    Rng rng(31);
    std::uniform_real_distribution<double> umu(1e-4, 1.0);
    std::uniform_real_distribution<double> us(-2.0, 3.0);  // log10 of s
    for (int t = 0; t < 200; ++t) {
        double mu = umu(rng);
        std::uniform_real_distribution<double> unu(1.0, 1.0 / mu);
        double nu = unu(rng);
        double s = std::pow(10.0, us(rng));
        AccelParams p = params_from_s(mu, nu, s);
        CHECK(p.rho > 0.0);
        CHECK(p.rho <= 1.0 + 1e-12);
        CHECK(p.beta >= 0.0);
        CHECK(p.gamma > 0.0);
    }
}

TEST_CASE("explicit_params passes coefficients through untouched") {
    AccelParams p = explicit_params(1.0, 0.0, 1.0, 1.0);
    CHECK(p.alpha == 1.0);
    CHECK(p.beta == 0.0);
    CHECK(p.gamma == 1.0);
    CHECK(p.omega == 1.0);
}
