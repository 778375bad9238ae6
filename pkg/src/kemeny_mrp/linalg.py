"""Dense LU solves with an explicit breakdown test and growth-factor report."""

import warnings

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from .errors import Singular

PIVOT_RTOL = 1e-13
GROWTH_LIMIT = 1e12


def factor(a):
    """LU-factor ``a`` with partial pivoting.

    Returns ``(lu, piv, growth)`` where ``growth`` is ``max|U| / max|A|``.
    Raises :class:`Singular` when a pivot falls below ``1e-13 * ||A||_inf``.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    scale = np.linalg.norm(a, np.inf)
    if scale == 0.0:
        raise Singular("zero matrix")
    with warnings.catch_warnings():
        # an exactly zero pivot is reported below as Singular
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(a, check_finite=True)
    pivots = np.abs(np.diag(lu))
    if pivots.min() <= PIVOT_RTOL * scale:
        raise Singular(f"pivot {pivots.min():.3e} below threshold {PIVOT_RTOL * scale:.3e}")
    growth = float(np.abs(np.triu(lu)).max() / np.abs(a).max())
    return lu, piv, growth


def solve_with_growth(a, b):
    lu, piv, growth = factor(a)
    return lu_solve((lu, piv), np.asarray(b, dtype=float)), growth


def solve_dense(a, b):
    """Solve ``A X = B`` for square ``A``.

    Parameters
    ----------
    a : array_like, shape (n, n)
    b : array_like, shape (n,) or (n, k)

    Returns
    -------
    ndarray
        Same shape as ``b``.
    """
    return solve_with_growth(a, b)[0]


def inverse_with_growth(a):
    a = np.asarray(a, dtype=float)
    return solve_with_growth(a, np.eye(a.shape[0]))


def inf_norm(x):
    """Induced infinity norm for matrices, max-abs for vectors."""
    x = np.asarray(x)
    if x.ndim == 2:
        return float(np.abs(x).sum(axis=1).max()) if x.size else 0.0
    return float(np.abs(x).max()) if x.size else 0.0
