"""Kemeny functions of an MRP and their return-time-omitting variants.

Three mixtures of the mean first passage times from state ``i``:

* ``k1 = M pi``            (embedded-chain stationary weights)
* ``k2 = M varpi``         (semi-Markov occupancy weights)
* ``k3 = M (M_d)^{-1} e``  (weights ``1 / m_jj``)

and ``k1c, k2c, k3c`` which drop the ``j = i`` term:
``k1c = k1 - lam e``, ``k2c = k2 - mu``, ``k3c = k3 - e``.

``k2c`` is constant for every finite irreducible MRP; the other five are
constant exactly when all mean sojourn times are equal.
"""

from dataclasses import dataclass, field

import numpy as np

from .chain import stationary_embedded, stationary_profile
from .ginverse import eigen_spectrum, fundamental_matrix, kemeny_from_spectrum
from .linalg import inf_norm
from .mfpt import mfpt_direct

CONST_TOL = 1e-8
WHICH = ("1", "2", "3", "1c", "2c", "3c")
_ALIASES = {"1°": "1c", "2°": "2c", "3°": "3c"}


def _which(which):
    key = _ALIASES.get(str(which), str(which))
    if key not in WHICH:
        raise ValueError(f"unknown Kemeny definition {which!r}; expected one of {WHICH}")
    return key


def constancy_test(v, tol=CONST_TOL):
    """``(max v - min v <= tol * max(1, ||v||_inf), spread)``."""
    v = np.asarray(v, dtype=float)
    spread = float(v.max() - v.min()) if v.size else 0.0
    return bool(spread <= tol * max(1.0, inf_norm(v))), spread


@dataclass(frozen=True, eq=False)
class KemenyReport:
    k1: np.ndarray
    k2: np.ndarray
    k3: np.ndarray
    k1c: np.ndarray
    k2c: np.ndarray
    k3c: np.ndarray
    constant: dict = field(default_factory=dict)
    constants: dict = field(default_factory=dict)
    spread: dict = field(default_factory=dict)
    mu_constant: bool = False

    def vector(self, which):
        return getattr(self, "k" + _which(which))


def _report(vectors, mu, lam, tol):
    constant, constants, spread = {}, {}, {}
    for key, v in vectors.items():
        v.setflags(write=False)
        ok, s = constancy_test(v, tol)
        constant[key], spread[key] = ok, s
        # the mean of the entries is less biased than any single entry
        constants[key] = float(v.mean()) if ok else None
    mu_constant = bool(np.max(np.abs(mu - lam)) <= tol * max(1.0, inf_norm(mu)))
    return KemenyReport(**{"k" + k: v for k, v in vectors.items()},
                        constant=constant, constants=constants, spread=spread,
                        mu_constant=mu_constant)


def kemeny_from_mfpt(mvals, profile, tol=CONST_TOL):
    """All six Kemeny vectors by mixing the rows of ``M`` directly."""
    mv = np.asarray(mvals, dtype=float)
    diag = np.diag(mv)
    off = mv - np.diag(diag)
    vectors = {
        "1": mv @ profile.pi,
        "2": mv @ profile.varpi,
        "3": mv @ (1.0 / diag),
        "1c": off @ profile.pi,
        "2c": off @ profile.varpi,
        "3c": off @ (1.0 / diag),
    }
    return _report(vectors, profile.mu, profile.lam, tol)


def _gtilde_with_mu(ginv, mu):
    return ginv.route == "parametric" and np.allclose(ginv.t, mu, rtol=1e-14, atol=0.0)


def kemeny_closed(spec, ginv, which, profile=None):
    """One Kemeny vector from a g-inverse, without forming ``M``.

    The simplified forms are used where the g-inverse's construction
    guarantees their side condition (``Ze = e``, ``A# e = 0``,
    ``G~ mu = e / u^T e``); otherwise the general form valid for any
    g-inverse of ``I - P``.
    """
    key = _which(which)
    ginv.check_chain(spec.chain)
    profile = profile or stationary_profile(spec)
    mu, pi, lam = spec.mu, profile.pi, profile.lam
    m = spec.m
    e = np.ones(m)
    g = ginv.of_i_minus_p()
    tr = np.trace(g)

    if ginv.route == "fundamental":
        gm = g @ mu
        tgm = float(gm @ pi)  # tr(Z mu pi^T)
        forms = {
            "1": lambda: gm - tgm * e + lam * tr * e,
            "2": lambda: mu + (np.diag(g) @ mu - (gm * pi) @ mu / lam) * e,
            "3": lambda: (gm - tgm * e) / lam + tr * e,
            "1c": lambda: gm - tgm * e + lam * (tr - 1.0) * e,
            "2c": lambda: (np.diag(g) @ mu - (gm * pi) @ mu / lam) * e,
            "3c": lambda: (gm - tgm * e) / lam + (tr - 1.0) * e,
        }
    elif ginv.route == "group":
        gm = g @ mu
        tgm = float(gm @ pi)
        forms = {
            "1": lambda: gm - tgm * e + lam * e + lam * tr * e,
            "2": lambda: mu + (np.diag(g) @ mu - (gm * pi) @ mu / lam) * e,
            "3": lambda: (gm - tgm * e) / lam + e + tr * e,
            "1c": lambda: gm - tgm * e + lam * tr * e,
            "2c": lambda: (np.diag(g) @ mu - (gm * pi) @ mu / lam) * e,
            "3c": lambda: (gm - tgm * e) / lam + tr * e,
        }
    elif _gtilde_with_mu(ginv, mu):
        f = 1.0 / float(np.sum(ginv.u))
        ge = g @ e
        gdm = float(np.diag(g) @ mu)
        forms = {
            "1": lambda: lam * (e - ge + tr * e),
            "2": lambda: mu - f * e + gdm * e,
            "3": lambda: e - ge + tr * e,
            "1c": lambda: lam * (tr * e - ge),
            "2c": lambda: (gdm - f) * e,
            "3c": lambda: tr * e - ge,
        }
    else:
        gm = g @ mu
        ge = g @ e
        tgm = float(gm @ pi)
        k2c = float(np.diag(g) @ mu - (gm * pi) @ mu / lam)
        forms = {
            "1": lambda: gm - tgm * e + lam * e - lam * ge + lam * tr * e,
            "2": lambda: mu + k2c * e,
            "3": lambda: (gm - tgm * e) / lam + e - ge + tr * e,
            "1c": lambda: gm - tgm * e - lam * ge + lam * tr * e,
            "2c": lambda: k2c * e,
            "3c": lambda: (gm - tgm * e) / lam - ge + tr * e,
        }
    return np.asarray(forms[key](), dtype=float)


def kemeny_constant_dtmc(chain, route="trace", pi=None):
    """Kemeny's constant of a discrete-time chain: ``tr(Z)`` or the spectral sum."""
    if route == "trace":
        pi = stationary_embedded(chain) if pi is None else pi
        return float(np.trace(fundamental_matrix(chain, pi).g))
    if route == "eigen":
        return kemeny_from_spectrum(eigen_spectrum(chain))
    raise ValueError(f"unknown route {route!r}; expected 'trace' or 'eigen'")


@dataclass(frozen=True)
class ConstancyVerdict:
    residual: float
    mu_constant: bool
    k1_constant: bool
    k2_constant: bool
    k3_constant: bool
    k2c_constant: bool

    @property
    def consistent(self):
        """Each of k1, k2, k3 is constant exactly when mu is."""
        return self.k1_constant == self.k2_constant == self.k3_constant == self.mu_constant


def constancy_equivalence(spec, tol=CONST_TOL, mvals=None, profile=None):
    """Check that ``k1, k2, k3`` are constant iff the mean sojourn times are.

    Also reports ``||(I - P) k1 - (mu - lam e)||_inf``.
    """
    profile = profile or stationary_profile(spec)
    mvals = mfpt_direct(spec) if mvals is None else mvals
    rep = kemeny_from_mfpt(mvals, profile, tol)
    residual = inf_norm((np.eye(spec.m) - spec.p) @ rep.k1 - (spec.mu - profile.lam))
    return ConstancyVerdict(
        residual=residual,
        mu_constant=rep.mu_constant,
        k1_constant=rep.constant["1"],
        k2_constant=rep.constant["2"],
        k3_constant=rep.constant["3"],
        k2c_constant=rep.constant["2c"],
    )
