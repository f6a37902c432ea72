"""Accelerated sketch-and-project solvers, matrix inversion and BFGS."""

from ._core import (
    AccelParams,
    SapError,
    bfgs_minimize,
    derive_params,
    estimate_params,
    gen_alpha_beta,
    gen_spectrum,
    invert,
    load_libsvm,
    oracle_mu_nu,
    params_from_s,
    solve,
)

__all__ = [
    "AccelParams",
    "SapError",
    "bfgs_minimize",
    "derive_params",
    "estimate_params",
    "gen_alpha_beta",
    "gen_spectrum",
    "invert",
    "load_libsvm",
    "oracle_mu_nu",
    "params_from_s",
    "solve",
]

__version__ = "0.1.0"
