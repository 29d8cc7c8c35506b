"""Fock-transform calculus for discrete-time normal martingales.

Functionals, sequences and random functionals are plain dicts in the same
versioned JSON formats the ``fockseq`` command-line tool uses.
"""

import json

from . import _core
from ._core import Error

__all__ = [
    "Error",
    "approximate",
    "chaos_expand",
    "classical_to_sequence",
    "conditional_expectation",
    "convolve",
    "fit_growth",
    "is_generalized_martingale",
    "martingale_limit",
    "ones",
    "psi0",
    "psi0_sequence",
    "random_functional",
    "residual_curve",
    "sobolev_norm",
    "strong_convergence_test",
    "synthesize",
    "verify_normal_martingale",
    "weight",
    "weighted_series",
]

DEFAULT_TOL = 1e-9
DEFAULT_P_GRID = (0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0)


def _dump(value):
    return json.dumps(value)


def weight(sigma):
    return int(_core.weight(list(sigma)))


def weighted_series(p, horizon):
    return json.loads(_core.weighted_series(p, horizon))


def random_functional(horizon, seed):
    return json.loads(_core.random_functional(horizon, seed))


def chaos_expand(f):
    return json.loads(_core.chaos_expand(_dump(f)))


def synthesize(coefficients, horizon):
    return json.loads(_core.synthesize(_dump(coefficients), horizon))


def conditional_expectation(f, n):
    return json.loads(_core.conditional_expectation(_dump(f), n))


def verify_normal_martingale(horizon, tol=0.0):
    return json.loads(_core.verify_normal_martingale(horizon, tol))


def sobolev_norm(phi, p, horizon):
    return _core.sobolev_norm(_dump(phi), p, horizon)


def fit_growth(phi, horizon, p_grid=DEFAULT_P_GRID):
    return json.loads(_core.fit_growth(_dump(phi), horizon, list(p_grid)))


def classical_to_sequence(f):
    return json.loads(_core.classical_to_sequence(_dump(f)))


def is_generalized_martingale(seq, horizon, tol=DEFAULT_TOL):
    return json.loads(_core.is_generalized_martingale(_dump(seq), horizon, tol))


def strong_convergence_test(seq, horizon, tol=DEFAULT_TOL, p_grid=DEFAULT_P_GRID):
    return json.loads(_core.strong_convergence_test(_dump(seq), horizon, tol, list(p_grid)))


def martingale_limit(seq, horizon, tol=DEFAULT_TOL):
    return json.loads(_core.martingale_limit(_dump(seq), horizon, tol))


def ones(horizon):
    return json.loads(_core.ones(horizon))


def psi0(n):
    return json.loads(_core.psi0(n))


def psi0_sequence(last):
    return json.loads(_core.psi0_sequence(last))


def convolve(a, b):
    return json.loads(_core.convolve(_dump(a), _dump(b)))


def approximate(phi, n):
    return json.loads(_core.approximate(_dump(phi), n))


def residual_curve(phi, q, horizon):
    return list(_core.residual_curve(_dump(phi), q, horizon))
