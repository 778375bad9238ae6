"""Reference computations that share no code path with the package.

Exact rational elimination, power iteration, Neumann series and value
iteration.  Slow, but simple enough to trust.
"""

from fractions import Fraction

import numpy as np


def exact_solve(a, b):
    """Gauss-Jordan over ``Fraction``; ``a`` and ``b`` hold rationals or ints."""
    n = len(a)
    rows = [[Fraction(x) for x in a[i]] + [Fraction(b[i])] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if rows[r][col] != 0)
        rows[col], rows[piv] = rows[piv], rows[col]
        lead = rows[col][col]
        rows[col] = [x / lead for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return [rows[i][n] for i in range(n)]


def exact_mfpt(p, mu):
    """First passage means by exact elimination, one target column at a time."""
    m = len(p)
    out = [[None] * m for _ in range(m)]
    for j in range(m):
        rest = [k for k in range(m) if k != j]
        a = [[(1 if r == c else 0) - Fraction(p[r][c]) for c in rest] for r in rest]
        col = exact_solve(a, [Fraction(mu[r]) for r in rest]) if rest else []
        for idx, r in enumerate(rest):
            out[r][j] = col[idx]
        out[j][j] = Fraction(mu[j]) + sum((Fraction(p[j][r]) * col[idx] for idx, r in enumerate(rest)),
                                          Fraction(0))
    return out


def exact_stationary(p):
    m = len(p)
    a = [[(1 if r == c else 0) - Fraction(p[c][r]) for c in range(m)] for r in range(m)]
    a[-1] = [Fraction(1)] * m
    return exact_solve(a, [0] * (m - 1) + [1])


def power_stationary(p, tol=1e-15, max_iter=200_000):
    """Left fixed vector of the lazy chain ``(I + P) / 2`` by power iteration."""
    p = np.asarray(p, dtype=float)
    lazy = 0.5 * (np.eye(len(p)) + p)
    x = np.full(len(p), 1.0 / len(p))
    for _ in range(max_iter):
        nxt = x @ lazy
        if np.abs(nxt - x).max() < tol:
            return nxt / nxt.sum()
        x = nxt
    raise RuntimeError("power iteration did not converge")


def series_fundamental(p, pi, tol=1e-15, max_terms=100_000):
    """``Z = sum_n (P - e pi^T)^n``; converges for aperiodic chains."""
    p = np.asarray(p, dtype=float)
    d = p - np.outer(np.ones(len(p)), pi)
    term = np.eye(len(p))
    total = term.copy()
    for _ in range(max_terms):
        term = term @ d
        total += term
        if np.abs(term).max() < tol:
            return total
    raise RuntimeError("series did not converge")


def value_iteration_mfpt(p, mu, tol=1e-13, max_iter=1_000_000):
    """Iterate ``m_ij <- mu_i + sum_{k != j} p_ik m_kj`` from zero."""
    p = np.asarray(p, dtype=float)
    mu = np.asarray(mu, dtype=float)
    m = len(p)
    out = np.zeros((m, m))
    for _ in range(max_iter):
        off = out - np.diag(np.diag(out))
        nxt = mu[:, None] + p @ off
        if np.abs(nxt - out).max() < tol * max(1.0, np.abs(nxt).max()):
            return nxt
        out = nxt
    raise RuntimeError("value iteration did not converge")
