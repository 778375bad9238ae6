"""Validated chain inputs and the two stationary distributions of an MRP.

An MRP here is the embedded jump chain ``P`` together with first moments of
the holding times, either as the full matrix ``P1 = [mu_ij]`` (with
``mu_ij = p_ij * E[hold | i -> j]``) or only as the mean sojourn vector
``mu``.  A discrete-time chain is the special case ``mu = e``.
"""

from collections import deque
from dataclasses import dataclass
from math import gcd

import numpy as np

from .errors import (
    InvalidMoments,
    NegativeEntry,
    NonpositiveSojourn,
    NotSquare,
    Reducible,
    RowSumViolation,
    Singular,
    SingularSystem,
)
from .linalg import inf_norm, solve_dense

ROW_TOL = 1e-9
KINDS = ("dtmc", "mrp", "ctmc")


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StochasticMatrix:
    """Row-stochastic, irreducible transition matrix. Build with :func:`validate_chain`."""

    p: np.ndarray

    @property
    def m(self):
        return self.p.shape[0]

    def __repr__(self):
        return f"StochasticMatrix(m={self.m})"


def _reachable(adj, start=0):
    seen = np.zeros(adj.shape[0], dtype=bool)
    seen[start] = True
    queue = deque([start])
    while queue:
        i = queue.popleft()
        for j in np.flatnonzero(adj[i] & ~seen):
            seen[j] = True
            queue.append(j)
    return seen


def is_irreducible(p):
    """Strong connectivity of the support graph of ``p``."""
    adj = np.asarray(p) > 0
    return bool(_reachable(adj).all() and _reachable(adj.T).all())


def period(chain):
    """Period of an irreducible chain (1 means aperiodic)."""
    adj = chain.p > 0
    level = np.full(chain.m, -1)
    level[0] = 0
    queue = deque([0])
    d = 0
    while queue:
        i = queue.popleft()
        for j in np.flatnonzero(adj[i]):
            if level[j] < 0:
                level[j] = level[i] + 1
                queue.append(j)
            else:
                d = gcd(d, int(level[i] + 1 - level[j]))
    return d


def validate_chain(raw, tol=ROW_TOL):
    """Check ``raw`` is a finite irreducible stochastic matrix.

    Rows within ``tol`` of summing to one are renormalized.

    Raises
    ------
    NotSquare, NegativeEntry, RowSumViolation, Reducible
    """
    p = np.array(raw, dtype=float)
    if p.ndim != 2 or p.shape[0] != p.shape[1] or p.shape[0] < 1:
        raise NotSquare(p.shape)
    if not np.isfinite(p).all():
        i = int(np.flatnonzero(~np.isfinite(p).all(axis=1))[0])
        raise RowSumViolation(i, float(p[i].sum()))
    neg = np.argwhere(p < 0)
    if len(neg):
        i, j = neg[0]
        raise NegativeEntry(int(i), int(j), float(p[i, j]))
    sums = p.sum(axis=1)
    bad = np.flatnonzero(np.abs(sums - 1.0) > tol)
    if len(bad):
        raise RowSumViolation(int(bad[0]), float(sums[bad[0]]))
    p /= sums[:, None]
    if not is_irreducible(p):
        raise Reducible()
    return StochasticMatrix(_frozen(p))


@dataclass(frozen=True, eq=False)
class MrpSpec:
    """Embedded chain plus holding-time first moments.

    ``p1`` is ``None`` when only the mean sojourn times ``mu`` are known.
    """

    chain: StochasticMatrix
    mu: np.ndarray
    p1: np.ndarray | None = None
    kind: str = "mrp"

    @property
    def m(self):
        return self.chain.m

    @property
    def p(self):
        return self.chain.p

    @property
    def full_moments(self):
        return self.p1 if self.p1 is not None else self.mu[:, None] * self.p

    def conditional_means(self):
        """``E[hold | i -> j]``, zero where ``p_ij = 0``."""
        if self.p1 is None:
            return np.where(self.p > 0, self.mu[:, None], 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(self.p > 0, self.p1 / self.p, 0.0)

    def __repr__(self):
        return f"MrpSpec(kind={self.kind!r}, m={self.m}, mu={self.mu.tolist()})"


def make_spec(chain, mu=None, p1=None, kind=None, tol=ROW_TOL):
    """Build an :class:`MrpSpec`.

    Give neither ``mu`` nor ``p1`` for a discrete-time chain (``mu = e``).
    ``chain`` may be a raw matrix, in which case it is validated first.
    """
    if not isinstance(chain, StochasticMatrix):
        chain = validate_chain(chain, tol)
    m = chain.m
    if p1 is not None:
        p1 = np.array(p1, dtype=float)
        if p1.shape != (m, m):
            raise InvalidMoments(f"P1 must have shape {(m, m)}, got {p1.shape}")
        if (p1 < 0).any():
            i, j = np.argwhere(p1 < 0)[0]
            raise InvalidMoments(f"P1[{i + 1},{j + 1}] = {p1[i, j]!r} is negative")
        stray = np.argwhere((chain.p == 0) & (p1 != 0))
        if len(stray):
            i, j = stray[0]
            raise InvalidMoments(f"P1[{i + 1},{j + 1}] nonzero where p_ij = 0")
        derived = p1.sum(axis=1)
        if mu is not None and not np.allclose(derived, mu, rtol=1e-12, atol=0):
            raise InvalidMoments("mu disagrees with the row sums of P1")
        mu = derived
        kind = kind or "mrp"
    elif mu is None:
        mu = np.ones(m)
        kind = kind or "dtmc"
    else:
        mu = np.array(mu, dtype=float)
        if mu.shape != (m,):
            raise InvalidMoments(f"mu must have length {m}, got shape {mu.shape}")
        kind = kind or "mrp"
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    mu = np.asarray(mu, dtype=float)
    bad = np.flatnonzero(~(mu > 0) | ~np.isfinite(mu))
    if len(bad):
        raise NonpositiveSojourn(int(bad[0]), float(mu[bad[0]]))
    if kind == "dtmc" and not np.array_equal(mu, np.ones(m)):
        raise InvalidMoments("a dtmc must have unit holding times")
    return MrpSpec(chain, _frozen(mu), None if p1 is None else _frozen(p1), kind)


@dataclass(frozen=True, eq=False)
class StationaryProfile:
    pi: np.ndarray
    varpi: np.ndarray
    mu: np.ndarray
    lam: float

    @property
    def Lambda(self):
        return np.diag(self.mu)

    @property
    def Pi(self):
        """``e pi^T``."""
        return np.tile(self.pi, (len(self.pi), 1))


def stationary_embedded(chain):
    """Solve ``pi^T (I - P) = 0``, ``pi^T e = 1``.

    The last equation of ``(I - P)^T pi = 0`` is replaced by the
    normalization row.
    """
    m = chain.m
    a = np.eye(m) - chain.p.T
    a[-1, :] = 1.0
    b = np.zeros(m)
    b[-1] = 1.0
    try:
        pi = solve_dense(a, b)
    except Singular as exc:
        raise SingularSystem(str(exc)) from exc
    # roundoff can leave tiny negatives on near-transient states
    pi = np.clip(pi, 0.0, None)
    return _frozen(pi / pi.sum())


def stationary_profile(spec):
    pi = stationary_embedded(spec.chain)
    lam = float(pi @ spec.mu)
    varpi = pi * spec.mu / lam
    return StationaryProfile(pi, _frozen(varpi), spec.mu, lam)


def stationary_residual(chain, pi):
    return inf_norm(pi @ (np.eye(chain.m) - chain.p))
