"""Class-constant multiplication distributions and the walk's transition matrices.

The walk adds a uniform element with probability alpha and otherwise
multiplies by a sample from Q, a distribution constant on similarity
classes.  B holds the multiplication-only transitions

    B[a, b] = sum of Q(x) over x with x*a == b    (left multiplication),

and the full chain matrix is M = (alpha/n) * ones + (1 - alpha) * B.
Everything is exact-rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .errors import (
    AlphaOutOfRange,
    NegativeWeight,
    NotNormalized,
    UnknownClass,
)
from .exact import ScaledMatrix
from .rings import FiniteRing


def check_alpha(alpha, allow_boundary=False) -> Fraction:
    alpha = Fraction(alpha)
    lo, hi = (0, 1)
    ok = (lo <= alpha <= hi) if allow_boundary else (lo < alpha < hi)
    if not ok:
        raise AlphaOutOfRange(
            f"alpha = {alpha} outside {'[0,1]' if allow_boundary else '(0,1)'}")
    return alpha


class ClassDistribution:
    """Probability weights on a ring, constant on similarity classes.

    weights[i] is the per-element weight of class i; the total mass
    sum(|class| * weight) must be exactly 1 and is never silently fixed up.
    """

    def __init__(self, ring: FiniteRing, weights):
        part = ring.similarity
        if len(weights) != len(part):
            raise UnknownClass("need exactly one weight per similarity class")
        weights = [Fraction(w) for w in weights]
        for w in weights:
            if w < 0:
                raise NegativeWeight(f"negative class weight {w}")
        total = sum(w * len(cls) for w, cls in zip(weights, part.classes))
        if total != 1:
            raise NotNormalized(
                f"class masses sum to {total}, not 1 (weights are per element)")
        self.ring = ring
        self.weights = weights

    @classmethod
    def uniform(cls, ring: FiniteRing) -> "ClassDistribution":
        w = Fraction(1, ring.n)
        return cls(ring, [w] * len(ring.similarity))

    @classmethod
    def from_weights(cls, ring: FiniteRing, mapping) -> "ClassDistribution":
        """Build from {element index: per-element weight}.

        Keys may be any member of a class (they are canonicalized); each
        class must be covered exactly once.
        """
        part = ring.similarity
        weights = [None] * len(part)
        for key, w in mapping.items():
            key = int(key)
            if not (0 <= key < ring.n):
                raise UnknownClass(f"{key} is not an element index")
            ci = int(part.class_of[key])
            if weights[ci] is not None:
                raise UnknownClass(
                    f"class of element {key} specified more than once")
            weights[ci] = Fraction(w)
        missing = [int(part.reps[i]) for i, w in enumerate(weights) if w is None]
        if missing:
            raise UnknownClass(f"no weight for classes of representatives {missing}")
        return cls(ring, weights)

    def element_weights(self):
        part = self.ring.similarity
        return [self.weights[part.class_of[x]] for x in range(self.ring.n)]

    def weight_of_element(self, x: int) -> Fraction:
        return self.weights[self.ring.similarity.class_of[x]]

    def scaled_weights(self):
        """(integer per-element weights, common denominator)."""
        ws = self.element_weights()
        den = 1
        for w in ws:
            den = lcm(den, w.denominator)
        return [int(w * den) for w in ws], den

    def __eq__(self, other):
        return (isinstance(other, ClassDistribution)
                and other.ring is self.ring and other.weights == self.weights)


@dataclass
class TransitionMatrix:
    """Row-stochastic exact-rational matrix of kind "B" or "M"."""

    matrix: ScaledMatrix
    kind: str
    ring: FiniteRing
    alpha: Fraction | None = None

    @property
    def n(self):
        return self.matrix.n

    def entry(self, i, j) -> Fraction:
        return self.matrix.entry(i, j)

    def to_float(self) -> np.ndarray:
        return self.matrix.to_float()

    def check_stochastic(self):
        assert all(s == 1 for s in self.matrix.row_sums()), \
            f"{self.kind} rows must sum to exactly 1"


def build_B(ring: FiniteRing, Q: ClassDistribution, side: str = "left") -> TransitionMatrix:
    """Multiplication-only transition matrix with exact rational entries.

    side="left" is the convention the spectral and stationary theory uses
    (transition a -> x*a); side="right" (a -> a*z) exists for the simulator
    comparison and is not the default anywhere.
    """
    assert Q.ring is ring
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    w_int, den = Q.scaled_weights()
    n = ring.n
    w_arr = np.array(w_int, dtype=np.int64)
    num = np.zeros((n, n), dtype=np.int64)
    if den <= (1 << 50):
        for a in range(n):
            targets = ring.mul[:, a] if side == "left" else ring.mul[a, :]
            np.add.at(num[a], targets, w_arr)
        rows = num.tolist()
    else:  # denominators this large only arise from adversarial Q inputs
        rows = [[0] * n for _ in range(n)]
        for a in range(n):
            targets = ring.mul[:, a] if side == "left" else ring.mul[a, :]
            row = rows[a]
            for x, b in enumerate(targets):
                row[b] += w_int[x]
    tm = TransitionMatrix(ScaledMatrix(rows, den), "B", ring)
    tm.check_stochastic()
    return tm


def build_M(ring: FiniteRing, Q: ClassDistribution, alpha,
            allow_boundary: bool = False, side: str = "left") -> TransitionMatrix:
    """Full chain matrix (alpha/n) * ones + (1 - alpha) * B; strictly positive."""
    alpha = check_alpha(alpha, allow_boundary)
    B = build_B(ring, Q, side=side)
    n = ring.n
    p, s = alpha.numerator, alpha.denominator
    common = lcm(n, B.matrix.den)
    add_part = p * (common // n)
    mul_scale = (s - p) * (common // B.matrix.den)
    num = [[add_part + mul_scale * v for v in row] for row in B.matrix.num]
    tm = TransitionMatrix(ScaledMatrix(num, s * common), "M", ring, alpha=alpha)
    tm.check_stochastic()
    if not allow_boundary:
        assert tm.matrix.min_entry() >= Fraction(alpha, n)
    return tm
