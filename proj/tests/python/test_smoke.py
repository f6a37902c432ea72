"""Smoke tests for the python bindings (run by ctest with PYTHONPATH set)."""

import math

import numpy as np

import accelsap


def test_params():
    p = accelsap.derive_params(0.25, 4.0)
    assert abs(p.beta - 0.75) < 1e-14
    assert abs(p.gamma - 1.0) < 1e-14
    assert abs(p.alpha - 0.2) < 1e-14
    assert abs(p.rho - 0.75) < 1e-14

    fam = accelsap.params_from_s(0.25, 4.0, 1.0)
    assert abs(fam.beta - p.beta) < 1e-12

    try:
        accelsap.derive_params(0.1, 10.0, 2.5)
    except accelsap.SapError:
        pass
    else:
        raise AssertionError("omega outside (0,2) must raise")


def test_estimates():
    a = np.eye(4)
    mu, nu = accelsap.estimate_params(a)
    assert abs(mu - 0.25) < 1e-14
    assert nu == 4.0

    omu, onu = accelsap.oracle_mu_nu(a)
    assert abs(omu - mu) < 1e-9
    assert abs(onu - nu) < 1e-9


def test_solve():
    a = accelsap.gen_alpha_beta(1.1, -0.01, 12)
    b = a @ np.ones(12)
    mu, nu = accelsap.estimate_params(a)
    out = accelsap.solve(a, b, mode="accelerated", mu=mu, nu=nu, max_iter=400, seed=3)
    assert np.allclose(out["x_star"], np.ones(12), atol=1e-8)
    residuals = [r["residual"] for r in out["records"]]
    assert residuals[-1] < 1e-3 * residuals[0]


def test_invert():
    eigs = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
    a = accelsap.gen_spectrum(eigs, seed=11)
    mu, nu = accelsap.estimate_params(a)
    out = accelsap.invert(a, mode="accel", mu=mu, nu=nu, max_iter=600, seed=2)
    x = out["x"]
    assert np.linalg.norm(a @ x - np.eye(5)) < 0.1 * np.linalg.norm(np.eye(5))
    residuals = [r["residual"] for r in out["records"]]
    assert residuals[-1] < residuals[0]


def test_bfgs():
    rng = np.random.default_rng(7)
    feats = rng.standard_normal((80, 5)) / math.sqrt(5)
    labels = np.where(feats @ rng.standard_normal(5) >= 0, 1.0, -1.0)
    out = accelsap.bfgs_minimize(feats, labels, lam=1.0 / 80, max_iter=150)
    assert out["grad_norms"][-1] < 1e-6
    accel = accelsap.bfgs_minimize(
        feats, labels, lam=1.0 / 80, max_iter=150, accelerated=True, mu=1e-4, nu=100.0
    )
    assert accel["grad_norms"][-1] < 1e-4


def main():
    test_params()
    test_estimates()
    test_solve()
    test_invert()
    test_bfgs()
    print("python smoke tests passed")


if __name__ == "__main__":
    main()
