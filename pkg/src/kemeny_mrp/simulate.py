"""Monte Carlo estimates of first passage times and stationary frequencies.

Random numbers come from Philox (counter-based) streams keyed by
``(seed, ...)`` through :class:`numpy.random.SeedSequence`.  Hitting-time
trials are grouped in fixed blocks of :data:`BLOCK` trajectories, each block
with its own stream, so results do not depend on how many workers run
the blocks.
"""

from bisect import bisect_right
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

SHAPES = ("exponential", "deterministic", "two_point")
BLOCK = 8192
N_BATCHES = 20


def stream(seed, *key):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))


@dataclass(frozen=True, eq=False)
class HoldingModel:
    """Holding-time law for every transition ``i -> j``.

    ``means[i, j]`` is the conditional mean ``E[hold | i -> j]``;
    ``shapes[i, j]`` picks the law.  ``two_point`` takes the values
    ``low * mean`` and ``high * mean`` with the probability that keeps the
    mean exact.
    """

    means: np.ndarray
    shapes: np.ndarray
    low: float = 0.5
    high: float = 2.0

    @classmethod
    def uniform(cls, spec, shape=None, **kw):
        """Same law on every transition; unit steps for a dtmc, else exponential."""
        if shape is None:
            shape = "deterministic" if spec.kind == "dtmc" else "exponential"
        if shape not in SHAPES:
            raise ValueError(f"unknown holding shape {shape!r}; expected one of {SHAPES}")
        means = spec.conditional_means()
        return cls(means, np.full(means.shape, shape), **kw)

    @property
    def prob_low(self):
        return (self.high - 1.0) / (self.high - self.low)

    def analytic_means(self):
        out = self.means.copy()
        tp = self.shapes == "two_point"
        p = self.prob_low
        out[tp] = self.means[tp] * (p * self.low + (1 - p) * self.high)
        return out

    def sample(self, i, j, u):
        """Holding times for transitions ``i -> j`` by inversion of uniforms ``u``."""
        mean = self.means[i, j]
        shape = self.shapes[i, j]
        out = np.where(shape == "deterministic", mean, 0.0)
        expo = shape == "exponential"
        out = np.where(expo, -mean * np.log1p(-u), out)
        tp = shape == "two_point"
        out = np.where(tp, mean * np.where(u < self.prob_low, self.low, self.high), out)
        return out


@dataclass(frozen=True)
class Estimate:
    value: float
    std_error: float
    trials: int
    seed: int

    def z(self, target):
        if self.std_error == 0.0:
            return 0.0 if np.isclose(self.value, target, rtol=1e-12, atol=1e-12) else np.inf
        return (self.value - target) / self.std_error


def _cum_rows(p):
    cum = np.cumsum(p, axis=1)
    cum[:, -1] = 1.0
    return cum


def _hitting_block(cum, model, src, dst, n, rng):
    state = np.full(n, src)
    total = np.zeros(n)
    active = np.arange(n)
    while active.size:
        cur = state[active]
        u = rng.random((2, active.size))
        nxt = (cum[cur] <= u[0][:, None]).sum(axis=1)
        nxt = np.minimum(nxt, cum.shape[1] - 1)
        total[active] += model.sample(cur, nxt, u[1])
        state[active] = nxt
        active = active[nxt != dst]
    mean = total.mean()
    return n, mean, float(((total - mean) ** 2).sum())


def _merge(a, b):
    # pairwise (Chan et al.) combination of count, mean, sum of squared deviations
    na, ma, sa = a
    nb, mb, sb = b
    n = na + nb
    d = mb - ma
    return n, ma + d * nb / n, sa + sb + d * d * na * nb / n


def simulate_hitting(spec, model, src, dst, trials, seed, workers=1):
    """Mean time from ``src`` until the process first enters ``dst``.

    When ``src == dst`` this is the mean return time: at least one jump is
    made before ``dst`` can count as entered.  States are 0-based.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    cum = _cum_rows(spec.p)
    sizes = [min(BLOCK, trials - b * BLOCK) for b in range(-(-trials // BLOCK))]

    def run(b):
        return _hitting_block(cum, model, src, dst, sizes[b], stream(seed, src, dst, b))

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(b) for b in range(len(sizes))]
    acc = parts[0]
    for part in parts[1:]:
        acc = _merge(acc, part)
    n, mean, ss = acc
    sd = np.sqrt(ss / (n - 1)) if n > 1 else 0.0
    return Estimate(float(mean), float(sd / np.sqrt(n)), trials, seed)


def _walk(p, n, rng, start=0, chunk=65536):
    """Embedded-chain path of ``n`` jumps; returns (from-states, to-states)."""
    cum = [list(row) for row in _cum_rows(p)]
    last = len(cum) - 1
    path = [start]
    s = start
    for lo in range(0, n, chunk):
        for u in rng.random(min(chunk, n - lo)).tolist():
            s = min(bisect_right(cum[s], u), last)
            path.append(s)
    path = np.array(path, dtype=np.int64)
    return path[:-1], path[1:]


def _batch_stderr(batches):
    batches = np.asarray(batches)
    return batches.std(axis=0, ddof=1) / np.sqrt(len(batches))


def estimate_embedded(spec, n, seed, return_stderr=False):
    """Visit frequencies of the jump chain over ``n`` steps after ``n/10`` burn-in.

    For a periodic chain these are Cesaro averages.  With
    ``return_stderr`` also returns batch-means standard errors.
    """
    m = spec.m
    burn = n // 10
    _, visited = _walk(spec.p, burn + n, stream(seed, 0))
    visited = visited[burn:]
    freq = np.bincount(visited, minlength=m) / n
    if not return_stderr:
        return freq
    batches = [np.bincount(b, minlength=m) / len(b) for b in np.array_split(visited, N_BATCHES)]
    return freq, _batch_stderr(batches)


def estimate_occupancy(spec, model, horizon, seed, return_stderr=False):
    """Fraction of time spent in each state over ``[horizon/10, horizon]``."""
    if not horizon > 0:
        raise ValueError("horizon must be positive")
    m = spec.m
    rng = stream(seed, 1)
    starts, ends, states = [], [], []
    t, s = 0.0, 0
    step_guess = max(1024, int(horizon / spec.mu.mean()) // 4)
    while t < horizon:
        src, dst = _walk(spec.p, step_guess, rng, start=s)
        holds = model.sample(src, dst, rng.random(step_guess))
        ends_k = t + np.cumsum(holds)
        starts_k = np.concatenate(([t], ends_k[:-1]))
        keep = starts_k < horizon
        starts.append(starts_k[keep])
        ends.append(ends_k[keep])
        states.append(src[keep])
        t, s = float(ends_k[-1]), int(dst[-1])
    starts, ends, states = map(np.concatenate, (starts, ends, states))
    edges = np.linspace(horizon / 10, horizon, N_BATCHES + 1)

    def occupied_until(x):
        dur = np.clip(np.minimum(ends, x) - starts, 0.0, None)
        return np.bincount(states, weights=dur, minlength=m)

    cum = np.array([occupied_until(x) for x in edges])
    total = cum[-1] - cum[0]
    frac = total / total.sum()
    if not return_stderr:
        return frac
    per = np.diff(cum, axis=0)
    batches = per / per.sum(axis=1, keepdims=True)
    return frac, _batch_stderr(batches)
