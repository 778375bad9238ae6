"""Seeded random irreducible chains, MRPs and generators for property checks.

Rows are Dirichlet(1, ..., 1) on a randomly thinned support; draws whose
support graph is not strongly connected are rejected and redrawn.
"""

import numpy as np

from .chain import is_irreducible, make_spec, validate_chain
from .ctmc import validate_generator

KEEP = 0.6


def _support(m, rng, keep, zero_diagonal=False):
    while True:
        mask = rng.random((m, m)) < keep
        if zero_diagonal:
            np.fill_diagonal(mask, False)
        if m == 1:
            mask[:] = True
        if mask.any(axis=1).all() and is_irreducible(mask):
            return mask


def random_chain(m, rng, keep=KEEP, zero_diagonal=False):
    mask = _support(m, rng, keep, zero_diagonal)
    p = np.zeros((m, m))
    for i in range(m):
        p[i, mask[i]] = rng.dirichlet(np.ones(mask[i].sum()))
    return validate_chain(p)


def random_mrp(m, rng, mu_range=(0.1, 10.0), pattern="means", keep=KEEP):
    """Random MRP with holding means drawn uniformly from ``mu_range``.

    ``pattern`` is ``"means"`` (one mean per state), ``"full"`` (one
    conditional mean per transition, giving ``P1``) or ``"constant"``
    (all states share a single mean).
    """
    chain = random_chain(m, rng, keep)
    lo, hi = mu_range
    if pattern == "means":
        return make_spec(chain, mu=rng.uniform(lo, hi, m))
    if pattern == "constant":
        return make_spec(chain, mu=np.full(m, rng.uniform(lo, hi)))
    if pattern == "full":
        cond = rng.uniform(lo, hi, (m, m))
        return make_spec(chain, p1=np.where(chain.p > 0, chain.p * cond, 0.0))
    raise ValueError(f"unknown pattern {pattern!r}")


def random_generator(m, rng, rate_range=(0.1, 10.0), keep=KEEP):
    mask = _support(m, rng, keep, zero_diagonal=True)
    q = np.where(mask, rng.uniform(*rate_range, (m, m)), 0.0)
    np.fill_diagonal(q, -q.sum(axis=1))
    return validate_generator(q)


def population(n=1000, seed=20180223, sizes=range(2, 13), patterns=("means", "means", "full", "constant")):
    """Yield ``n`` random MRPs cycling through ``sizes`` and ``patterns``."""
    rng = np.random.default_rng(seed)
    sizes, patterns = list(sizes), list(patterns)
    for k in range(n):
        yield random_mrp(sizes[k % len(sizes)], rng, pattern=patterns[k % len(patterns)])
