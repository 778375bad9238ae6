"""Mean first passage times of an MRP, by direct solve and by g-inverse formulas.

:func:`mfpt_direct` only uses the first-passage recursion
``m_ij = mu_i + sum_{k != j} p_ik m_kj`` and a generic solver; it is the
reference the g-inverse routes are checked against.
"""

from dataclasses import dataclass

import numpy as np

from .chain import stationary_profile
from .ginverse import parametric_ginverse
from .linalg import inf_norm, solve_dense


@dataclass(frozen=True, eq=False)
class MfptMatrix:
    values: np.ndarray
    route: str = "direct"

    @property
    def diag(self):
        return np.diag(self.values)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def __repr__(self):
        return f"MfptMatrix(route={self.route!r}, values={self.values.tolist()})"


def _wrap(values, route):
    values = np.array(values, dtype=float)
    values.setflags(write=False)
    return MfptMatrix(values, route)


def mfpt_direct(spec):
    """Solve the first-passage recursion column by column."""
    p, mu, m = spec.p, spec.mu, spec.m
    out = np.empty((m, m))
    for j in range(m):
        rest = np.delete(np.arange(m), j)
        a = np.eye(m - 1) - p[np.ix_(rest, rest)]
        col = solve_dense(a, mu[rest]) if m > 1 else np.empty(0)
        out[rest, j] = col
        out[j, j] = mu[j] + p[j, rest] @ col
    return _wrap(out, "direct")


def _scaling(profile):
    # D = lambda (Pi_d)^{-1}: mean recurrence times on the diagonal
    return np.diag(profile.lam / profile.pi)


def mfpt_closed(spec, ginv, profile=None):
    """M from any g-inverse ``G`` of ``I - P``::

        M = [(1/lam){G mu pi^T - E (G mu pi^T)_d} + I - G + E G_d] D
    """
    ginv.check_chain(spec.chain)
    profile = profile or stationary_profile(spec)
    g = ginv.of_i_minus_p()
    m = spec.m
    e = np.ones(m)
    gmp = np.outer(g @ spec.mu, profile.pi)
    core = (gmp - np.outer(e, np.diag(gmp))) / profile.lam + np.eye(m) - g + np.outer(e, np.diag(g))
    return _wrap(core @ _scaling(profile), f"closed:{ginv.route}")


def gtilde_scaling(ginv):
    """``[(e u^T G~)_d]^{-1}`` as a vector; equals ``lam / pi`` when ``t = mu``."""
    return 1.0 / (ginv.u @ ginv.g)


def mfpt_gtilde(spec, u=None, profile=None):
    """``M = [I - G~ + E G~_d] D`` with ``G~ = [I - P + mu u^T]^{-1}``."""
    profile = profile or stationary_profile(spec)
    gt = parametric_ginverse(spec.chain, spec.mu, u).g
    m = spec.m
    core = np.eye(m) - gt + np.outer(np.ones(m), np.diag(gt))
    return _wrap(core @ _scaling(profile), "gtilde")


def mfpt_residual(mvals, spec):
    """``||(I - P) M - P1 E + P M_d||_inf``."""
    mvals = np.asarray(mvals, dtype=float)
    p, m = spec.p, spec.m
    lhs = (np.eye(m) - p) @ mvals
    rhs = np.outer(spec.mu, np.ones(m)) - p @ np.diag(np.diag(mvals))
    return inf_norm(lhs - rhs)


def max_rel_diff(a, b):
    """Largest entrywise ``|a - b| / |b|``."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), np.finfo(float).tiny)))
