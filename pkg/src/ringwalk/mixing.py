"""Total-variation decay curves, the coupling bound, and trajectory simulation.

The worst-start distance d(t) = max_x TV(M^t(x, .), pi) is computed from
exact rational matrix powers for rings of up to 256 elements (so the
geometric bound d(t) <= (1-alpha)^t is checked without rounding) and in
double precision beyond.  The simulator draws from a counter-based Philox
stream keyed by (seed, block); coin flips and Q-samples are integer draws
compared against exact rational thresholds, so every move has its exact
probability and runs reproduce bit-for-bit across platforms and backends.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm, log

import numpy as np

from . import _kernels
from .chain import ClassDistribution, build_M, check_alpha
from .errors import LengthMismatch, ParamOutOfRange
from .rings import FiniteRing
from .stationary import SOLVE_CAP, stationary_recursive, stationary_solve

T_CAP = 64
STEP_CHUNK_ENTRIES = 20_000_000


def tv_distance(mu, nu):
    """Half the l1 distance; exact when both inputs are exact."""
    if len(mu) != len(nu):
        raise LengthMismatch(f"supports differ: {len(mu)} vs {len(nu)}")
    total = sum(abs(a - b) for a, b in zip(mu, nu))
    return total / 2


@dataclass
class MixingCurve:
    """d(t) for t = 0..T with the geometric bound alongside."""

    ts: list
    values: list          # d(t) as floats
    bounds: list          # (1 - alpha)^t as floats
    alpha: Fraction
    ring_label: str
    exact_values: list | None = None    # Fractions when computed exactly
    exact_bounds: list | None = None

    def t_mix(self, eps):
        """First t with d(t) <= eps, using exact values when available."""
        eps = Fraction(eps)
        series = self.exact_values if self.exact_values is not None \
            else [Fraction(v).limit_denominator(10 ** 12) for v in self.values]
        for t, d in zip(self.ts, series):
            if d <= eps:
                return t
        return None

    def bound_holds(self) -> bool:
        if self.exact_values is not None:
            return all(d <= b for d, b in
                       zip(self.exact_values, self.exact_bounds))
        return all(d <= b + 1e-12 for d, b in zip(self.values, self.bounds))


def _exact_curve(matrix, pi, T):
    """Exact d(t) for t = 0..T from integer matrix powers."""
    pden = 1
    for p in pi:
        pden = lcm(pden, p.denominator)
    pnum = [int(p * pden) for p in pi]
    out = []
    for _, power in matrix.powers(T):
        den = power.den * pden
        worst = max(
            sum(abs(v * pden - pn * power.den) for v, pn in zip(row, pnum))
            for row in power.num)
        out.append(Fraction(worst, 2 * den))
    return out


def d_of_t(ring: FiniteRing, Q: ClassDistribution, alpha, T: int) -> MixingCurve:
    """Worst-start TV distance to stationarity for t = 0..T (T <= 64)."""
    if not (0 <= T <= T_CAP):
        raise ParamOutOfRange(f"T must lie in [0, {T_CAP}]")
    alpha = check_alpha(alpha)
    M = build_M(ring, Q, alpha)
    if ring.n <= SOLVE_CAP:
        pi = stationary_solve(M)
        exact = _exact_curve(M.matrix, pi, T)
        values = [float(v) for v in exact]
        exact_bounds = [(1 - alpha) ** t for t in range(T + 1)]
        return MixingCurve(list(range(T + 1)), values,
                           [float(b) for b in exact_bounds], alpha,
                           ring.label, exact, exact_bounds)
    pi = np.array([float(v) for v in stationary_recursive(ring, Q, alpha)])
    arr = M.to_float()
    power = np.eye(ring.n)
    values = []
    for t in range(T + 1):
        values.append(float(0.5 * np.max(np.abs(power - pi[None, :]).sum(axis=1))))
        if t < T:
            power = power @ arr
    bounds = [float((1 - alpha) ** t) for t in range(T + 1)]
    return MixingCurve(list(range(T + 1)), values, bounds, alpha, ring.label)


def mixing_bound(alpha, eps) -> float:
    """Coupling bound on the eps-mixing time: log(eps)/log(1-alpha) + 1."""
    alpha = Fraction(alpha)
    eps = Fraction(eps)
    if not 0 < alpha < 1:
        raise ParamOutOfRange(f"alpha = {alpha} outside (0,1)")
    if not 0 < eps < Fraction(1, 2):
        raise ParamOutOfRange(f"eps = {eps} outside (0, 1/2)")
    return log(eps) / log(1 - alpha) + 1


@dataclass
class SimulationResult:
    """End-state counts of seeded trajectories; same seed, same counts."""

    ring_label: str
    start: int
    steps: int
    samples: int
    seed: int
    side: str
    blocks: int
    counts: np.ndarray

    def empirical(self) -> np.ndarray:
        return self.counts / self.counts.sum()

    def tv_to(self, pi) -> float:
        return float(tv_distance(self.empirical(),
                                 np.array([float(p) for p in pi])))


def simulate(ring: FiniteRing, Q: ClassDistribution, alpha, x0: int, t: int,
             samples: int, seed: int, side: str = "left", blocks: int = 1,
             allow_boundary: bool = False) -> SimulationResult:
    """Run `samples` trajectories of length t from x0 and tally end states.

    Heads (probability alpha): add a uniform ring element.  Tails: multiply
    by a Q-sample, on the left by default to match the transition-matrix
    convention; side="right" uses the mirrored product.  Trajectories split
    into `blocks` independent Philox streams keyed (seed, block) and merge
    deterministically, so any execution order gives identical results.
    """
    alpha = check_alpha(alpha, allow_boundary)
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    if seed is None:
        raise ValueError("a seed is mandatory for reproducible simulation")
    p, s = alpha.numerator, alpha.denominator
    w_int, den = Q.scaled_weights()
    cum = np.cumsum(np.array(w_int, dtype=np.int64))
    counts = np.zeros(ring.n, dtype=np.int64)
    per_block = [samples // blocks] * blocks
    per_block[-1] += samples - sum(per_block)
    for block, m in enumerate(per_block):
        if m == 0:
            continue
        rng = np.random.Generator(np.random.Philox(key=[seed, block]))
        states = np.full(m, x0, dtype=np.int32)
        chunk = max(1, min(t, STEP_CHUNK_ENTRIES // max(m, 1)))
        done = 0
        while done < t:
            step = min(chunk, t - done)
            coins = (rng.integers(0, s, size=(step, m)) < p).astype(np.int8)
            adds = rng.integers(0, ring.n, size=(step, m), dtype=np.int32)
            draws = rng.integers(0, den, size=(step, m), dtype=np.int64)
            zs = np.searchsorted(cum, draws, side="right").astype(np.int32)
            _kernels.run_chain(states, coins, adds, zs, ring.add, ring.mul,
                               left=(side == "left"))
            done += step
        counts += np.bincount(states, minlength=ring.n)
    return SimulationResult(ring.label, x0, t, samples, seed, side, blocks,
                            counts)


def one_step_rows(ring: FiniteRing, Q: ClassDistribution, alpha, samples: int,
                  seed: int, side: str = "left", starts=None) -> np.ndarray:
    """Empirical one-step transition frequencies from each start state."""
    starts = list(range(ring.n)) if starts is None else list(starts)
    rows = np.zeros((len(starts), ring.n))
    for i, a in enumerate(starts):
        res = simulate(ring, Q, alpha, int(a), 1, samples, seed + i, side=side)
        rows[i] = res.empirical()
    return rows
