"""Continuous-time chains as MRPs, the H-matrix route, and birth-death models.

A CTMC with generator ``Q`` is the MRP with embedded chain
``p_ij = q_ij / nu_i`` (``i != j``), ``nu_i = -q_ii``, and exponential
holding times of mean ``1 / nu_i``.  With ``H = [Q + e u^T]^{-1}`` the
quantities of interest come straight from ``Q``::

    varpi^T = u^T H
    lam     = -1 / (varpi^T Q_d e)
    pi^T    = -lam varpi^T Q_d
    M       = [H - E H_d - Q_d^{-1}] [(e u^T H)_d]^{-1}
    k1      = lam [I - H Q_d + tr(H Q_d)] e

``H Q_d`` equals ``[I - P - mu u^T]^{-1}``: the parametric g-inverse with
``t = mu`` and ``u`` replaced by ``-u``.  The sign flip cancels in every
formula above, so they hold as written.
"""

from dataclasses import dataclass

import numpy as np

from .chain import is_irreducible, make_spec, validate_chain
from .errors import InvalidGenerator, NotSquare, Reducible, ZeroDiagonal
from .ginverse import generator_h
from .linalg import inf_norm

ROW_TOL = 1e-9
DIAG_ATOL = 1e-13


@dataclass(frozen=True, eq=False)
class Generator:
    q: np.ndarray

    @property
    def m(self):
        return self.q.shape[0]

    @property
    def rates(self):
        """Exit rates ``nu_i = -q_ii``."""
        return -np.diag(self.q)

    def __repr__(self):
        return f"Generator(m={self.m})"


def validate_generator(raw, tol=ROW_TOL):
    q = np.array(raw, dtype=float)
    if q.ndim != 2 or q.shape[0] != q.shape[1] or q.shape[0] < 1:
        raise NotSquare(q.shape)
    m = q.shape[0]
    for i in range(m):
        if not q[i, i] < -DIAG_ATOL:
            raise ZeroDiagonal(i, float(q[i, i]))
    off = q - np.diag(np.diag(q))
    if (off < 0).any():
        i, j = np.argwhere(off < 0)[0]
        raise InvalidGenerator(f"negative rate {q[i, j]!r} at ({i + 1}, {j + 1})")
    sums = q.sum(axis=1)
    bad = np.flatnonzero(np.abs(sums) > tol * np.maximum(1.0, -np.diag(q)))
    if len(bad):
        raise InvalidGenerator(f"row {bad[0] + 1} of the generator sums to {sums[bad[0]]!r}, not 0")
    if m > 1 and not is_irreducible(off):
        raise Reducible()
    # restore exact zero row sums
    q[np.diag_indices(m)] = -off.sum(axis=1)
    q.setflags(write=False)
    return Generator(q)


def embedded_chain(gen):
    return (gen.q - np.diag(np.diag(gen.q))) / gen.rates[:, None]


def mrp_from_generator(gen):
    """MrpSpec with ``P`` zero-diagonal, ``mu_i = 1/nu_i``, ``mu_ij = p_ij / nu_i``."""
    p = embedded_chain(gen)
    chain = validate_chain(p)
    return make_spec(chain, p1=chain.p / gen.rates[:, None], kind="ctmc")


def embedding_residual(gen, spec):
    """``||(I - P) - Q_d^{-1} Q||_inf``."""
    qd_inv = np.diag(1.0 / np.diag(gen.q))
    return inf_norm(np.eye(gen.m) - spec.p - qd_inv @ gen.q)


@dataclass(frozen=True, eq=False)
class HProfile:
    varpi: np.ndarray
    lam: float
    pi: np.ndarray
    mvals: np.ndarray
    h: np.ndarray
    u: np.ndarray


def ctmc_profile_H(gen, u=None, p=None):
    """Stationary vectors, ``lam`` and ``M`` from ``H = [Q + e u^T]^{-1}``."""
    m = gen.m
    p = embedded_chain(gen) if p is None else p
    ginv = generator_h(gen.q, p, u)
    h, u = ginv.g, ginv.u
    qd = np.diag(gen.q)
    e = np.ones(m)
    varpi = u @ h
    lam = -1.0 / float(varpi @ (qd * e))
    pi = -lam * varpi * qd
    # (e u^T H)_d is diag(u^T H) = diag(varpi)
    mvals = (h - np.outer(e, np.diag(h)) - np.diag(1.0 / qd)) / varpi[None, :]
    return HProfile(varpi, lam, pi, mvals, h, u)


def kemeny1_ctmc(gen, u=None):
    """``k1 = lam [I - H Q_d + tr(H Q_d)] e``."""
    prof = ctmc_profile_H(gen, u)
    hqd = prof.h * np.diag(gen.q)[None, :]
    e = np.ones(gen.m)
    return prof.lam * (e - hqd @ e + np.trace(hqd) * e)


@dataclass(frozen=True)
class BirthDeathParams:
    """Birth rates ``alpha_1..alpha_{m-1}`` and death rates ``beta_2..beta_m``."""

    alpha: tuple
    beta: tuple

    def __post_init__(self):
        alpha = tuple(float(a) for a in self.alpha)
        beta = tuple(float(b) for b in self.beta)
        if len(alpha) != len(beta) or not alpha:
            raise ValueError("alpha and beta must be nonempty and of equal length")
        if min(alpha + beta) <= 0 or not np.isfinite(alpha + beta).all():
            raise ValueError("birth and death rates must be strictly positive")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def m(self):
        return len(self.alpha) + 1


def bd_generator(params):
    """Tridiagonal generator, ``q_{i,i+1} = alpha_i`` and ``q_{i+1,i} = beta_{i+1}``."""
    m = params.m
    q = np.zeros((m, m))
    for i, (a, b) in enumerate(zip(params.alpha, params.beta)):
        q[i, i + 1] = a
        q[i + 1, i] = b
    q[np.diag_indices(m)] = -q.sum(axis=1)
    return validate_generator(q)


@dataclass(frozen=True, eq=False)
class Bd3Closed:
    mvals: np.ndarray
    pi: np.ndarray
    varpi: np.ndarray
    mu: np.ndarray
    lam: float
    k2c_constant: float
    identities: dict


def bd3_closed(a1, a2, b2, b3):
    """Hand-derived stationary vectors and MFPTs of the three-state birth-death chain.

    ``identities`` maps a label to the residual of each relation among the
    entries.  The often-stated shortcuts ``m13 = m33 + 1/alpha1`` and
    ``m23 = m33 - 1/beta2`` are each off by one term; the corrected forms
    are listed, and the uncorrected ones kept (labelled as such) so reports
    can show the discrepancy.
    """
    if min(a1, a2, b2, b3) <= 0:
        raise ValueError("rates must be strictly positive")
    r2 = a2 / b2
    m11 = 1 / a1 + 1 / b2 + r2 / b3
    m12 = 1 / a1
    m13 = 1 / a1 + 1 / a2 + 1 / (a1 * r2)
    m21 = 1 / b2 + r2 / b3
    m22 = m11 / (1 + r2)
    m23 = 1 / (r2 * a1) + 1 / a2
    m31 = 1 / b2 + (1 + r2) / b3
    m32 = 1 / b3
    m33 = 1 / (r2 * a1) + 1 / a2 + 1 / b3
    mvals = np.array([[m11, m12, m13], [m21, m22, m23], [m31, m32, m33]])

    pi = np.array([1 / (2 * (1 + r2)), 0.5, r2 / (2 * (1 + r2))])
    w1 = 1 / (1 + a1 / b2 + a1 * a2 / (b2 * b3))
    varpi = np.array([w1, a1 / b2 * w1, a1 * a2 / (b2 * b3) * w1])
    mu = np.array([1 / a1, 1 / (a2 + b2), 1 / b3])
    lam = (1 / a1 + 1 / b2 + a2 / (b2 * b3)) / (2 * (1 + r2))
    k2c = (1 - varpi[0]) / a1 + (1 - varpi[2]) / b3

    identities = {
        "m11 = 2 lam (1 + rho2)": m11 - 2 * lam * (1 + r2),
        "m13 = m33 - 1/beta3 + 1/alpha1": m13 - (m33 - 1 / b3 + 1 / a1),
        "m13 = m33 + 1/alpha1 (uncorrected)": m13 - (m33 + 1 / a1),
        "m21 = m11 - 1/alpha1": m21 - (m11 - 1 / a1),
        "m22 = 2 lam": m22 - 2 * lam,
        "m23 = m33 - 1/beta3": m23 - (m33 - 1 / b3),
        "m23 = m33 - 1/beta2 (uncorrected)": m23 - (m33 - 1 / b2),
        "m31 = m11 - 1/alpha1 + 1/beta3": m31 - (m11 - 1 / a1 + 1 / b3),
        "m33 = (1 + rho2) m22 / rho2": m33 - (1 + r2) * m22 / r2,
        "m33 = m11 / rho2": m33 - m11 / r2,
        "lam = 1 / (2 (1 + rho2) alpha1 varpi1)": lam - 1 / (2 * (1 + r2) * a1 * w1),
        "m_ii varpi_i = mu_i": float(np.max(np.abs(np.diag(mvals) * varpi - mu))),
    }
    return Bd3Closed(mvals, pi, varpi, mu, lam, k2c, identities)


UNCORRECTED_IDENTITIES = ("m13 = m33 + 1/alpha1 (uncorrected)", "m23 = m33 - 1/beta2 (uncorrected)")
