"""Generalized inverses of ``I - P`` (and of a generator ``Q``).

Four constructions are provided:

* ``fundamental``  ``Z = [I - P + e pi^T]^{-1}``
* ``group``        ``A# = Z - e pi^T`` (the deviation matrix)
* ``parametric``   ``G~ = [I - P + t u^T]^{-1}``, nonsingular iff
  ``pi^T t != 0`` and ``u^T e != 0``
* ``generator_h``  ``H = [Q + e u^T]^{-1}``, a g-inverse of ``Q``

Every one satisfies ``A G A = A`` for ``A = I - P`` (or ``Q``).
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateU, NoConvergence, RouteMismatch
from .linalg import GROWTH_LIMIT, inf_norm, inverse_with_growth, solve_dense  # noqa: F401

ROUTES = ("fundamental", "group", "parametric", "generator_h")
U_ATOL = 1e-13


@dataclass(frozen=True, eq=False)
class GInverse:
    g: np.ndarray
    route: str
    p: np.ndarray
    t: np.ndarray | None = None
    u: np.ndarray | None = None
    q: np.ndarray | None = None
    growth: float = 1.0

    @property
    def ill_conditioned(self):
        return self.growth > GROWTH_LIMIT

    def operand(self):
        """The matrix this is a g-inverse of: ``I - P`` or ``Q``."""
        if self.route == "generator_h":
            return self.q
        return np.eye(self.p.shape[0]) - self.p

    def of_i_minus_p(self):
        """A g-inverse of ``I - P``; for ``H`` this is ``H Q_d``."""
        if self.route == "generator_h":
            return self.g @ np.diag(np.diag(self.q))
        return self.g

    def check_chain(self, chain):
        if self.p.shape != chain.p.shape or not np.array_equal(self.p, chain.p):
            raise RouteMismatch(f"{self.route} g-inverse was built for a different chain")

    def __repr__(self):
        return f"GInverse(route={self.route!r}, m={self.g.shape[0]})"


def _freeze(*arrays):
    for a in arrays:
        if a is not None:
            a.setflags(write=False)


def fundamental_matrix(chain, pi):
    m = chain.m
    z, growth = inverse_with_growth(np.eye(m) - chain.p + np.outer(np.ones(m), pi))
    _freeze(z)
    return GInverse(z, "fundamental", chain.p, growth=growth)


def group_inverse(chain, pi):
    z = fundamental_matrix(chain, pi)
    a = z.g - np.outer(np.ones(chain.m), pi)
    _freeze(a)
    return GInverse(a, "group", chain.p, growth=z.growth)


def _check_u(u):
    total = float(np.sum(u))
    if abs(total) < U_ATOL:
        raise DegenerateU(total)


def parametric_ginverse(chain, t, u=None):
    """``[I - P + t u^T]^{-1}``; ``u`` defaults to ``e``."""
    m = chain.m
    t = np.array(t, dtype=float)
    u = np.ones(m) if u is None else np.array(u, dtype=float)
    _check_u(u)
    g, growth = inverse_with_growth(np.eye(m) - chain.p + np.outer(t, u))
    _freeze(g, t, u)
    return GInverse(g, "parametric", chain.p, t=t, u=u, growth=growth)


def generator_h(q, p, u=None):
    """``H = [Q + e u^T]^{-1}`` for generator ``q`` with embedded chain ``p``."""
    q = np.asarray(q, dtype=float)
    m = q.shape[0]
    u = np.ones(m) if u is None else np.array(u, dtype=float)
    _check_u(u)
    h, growth = inverse_with_growth(q + np.outer(np.ones(m), u))
    _freeze(h, u)
    return GInverse(h, "generator_h", p, u=u, q=q, growth=growth)


def verify_ginverse(ginv, chain=None):
    """``||A G A - A||_inf`` with ``A = I - P`` (``Q`` for the H route)."""
    if chain is not None:
        ginv.check_chain(chain)
    a = ginv.operand()
    return inf_norm(a @ ginv.g @ a - a)


def eigen_spectrum(chain):
    """All eigenvalues of ``P``, sorted by descending real part.

    LAPACK's Hessenberg reduction plus shifted QR does the work.
    """
    try:
        vals = np.linalg.eigvals(chain.p)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    vals = vals.astype(complex)
    order = np.lexsort((-vals.imag, -vals.real))
    return [complex(v) for v in vals[order]]


def kemeny_from_spectrum(values, imag_tol=1e-8):
    """``1 + sum_{j>=2} 1/(1 - lambda_j)`` dropping the eigenvalue nearest 1.

    Warns when the imaginary part of the sum exceeds ``imag_tol``.
    """
    values = np.asarray(values, dtype=complex)
    perron = int(np.argmin(np.abs(values - 1.0)))
    rest = np.delete(values, perron)
    total = np.sum(1.0 / (1.0 - rest)) if len(rest) else 0.0 + 0.0j
    if abs(total.imag) > imag_tol:
        warnings.warn(f"imaginary residue {total.imag:.3e} in spectral sum", RuntimeWarning,
                      stacklevel=2)
    return 1.0 + float(total.real)
