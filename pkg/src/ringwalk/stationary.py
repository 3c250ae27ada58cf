"""Stationary distributions: exact solve, ideal-poset recursion, closed forms.

Four routes that must agree exactly wherever their domains overlap:

  * stationary_solve: rational nullspace of (M - I), the oracle (n <= 256).
  * stationary_recursive: the top-down recursion over the principal-ideal
    poset, valid for any class-constant Q.
  * stationary_uniform: the uniform-Q specialization using coset counts and
    annihilator sizes.
  * stationary_gl2: the closed forms for M2(F_q) with uniform Q (any prime
    q, including 2).

All values are Fractions; pi is constant on each S_a, so the recursion only
solves |phi| unknowns and then spreads them.
"""

from __future__ import annotations

from fractions import Fraction

from .chain import ClassDistribution, TransitionMatrix, check_alpha
from .errors import DenominatorZero, SingularSystem, TooLarge
from .exact import stationary_nullspace
from .gl2 import require_m2_ring
from .rings import FiniteRing

SOLVE_CAP = 256


def stationary_solve(M: TransitionMatrix):
    """Unique pi with pi M = pi and sum(pi) = 1, by exact elimination."""
    if M.n > SOLVE_CAP:
        raise TooLarge(f"exact solve capped at {SOLVE_CAP} states, got {M.n}")
    pi = stationary_nullspace(M.matrix)
    if any(p <= 0 for p in pi):
        raise SingularSystem("stationary vector of a positive chain must be "
                             "strictly positive")
    assert M.matrix.vec_mul(pi) == list(pi)
    return pi


def _ideal_order(ring: FiniteRing):
    """Ideal ids sorted so containing ideals come first; ties by generator."""
    poset = ring.ideals
    k = len(poset)
    depth = [int(poset.leq[i].sum()) for i in range(k)]  # how many contain i
    return sorted(range(k), key=lambda i: (depth[i], int(poset.reps[i])))


def _q_transfer(ring: FiniteRing, Q: ClassDistribution, x: int, y: int) -> Fraction:
    """sum over coset reps u of LStab(y) and r in R_{x,y} of Q(r u^{-1})."""
    total = Fraction(0)
    rset = ring.r_xy(x, y)
    if len(rset) == 0:
        return total
    for u in ring.coset_reps(y):
        uinv = ring.inv(int(u))
        for r in rset:
            total += Q.weight_of_element(int(ring.mul[r, uinv]))
    return total


def stationary_recursive(ring: FiniteRing, Q: ClassDistribution, alpha,
                         allow_boundary: bool = False):
    """Solve pi on phi top-down over the ideal poset, spread over S_a."""
    alpha = check_alpha(alpha, allow_boundary)
    poset = ring.ideals
    pi_ideal = {}
    for i in _ideal_order(ring):
        x = int(poset.reps[i])
        num = Fraction(alpha, ring.n)
        for j in poset.strictly_above(i):
            y = int(poset.reps[j])
            num += (1 - alpha) * _q_transfer(ring, Q, x, y) * pi_ideal[j]
        den = 1 - (1 - alpha) * _q_transfer(ring, Q, x, x)
        if den == 0:
            raise DenominatorZero(
                f"recursion denominator vanished at generator {x}; this "
                f"Q/alpha pair is outside the formula's domain")
        pi_ideal[i] = num / den
    return [pi_ideal[int(poset.id_of[x])] for x in range(ring.n)]


def stationary_uniform(ring: FiniteRing, alpha, allow_boundary: bool = False):
    """Uniform-Q closed form: coset counts |U_y| and annihilator sizes."""
    alpha = check_alpha(alpha, allow_boundary)
    poset = ring.ideals
    u_count = {i: len(ring.coset_reps(int(poset.reps[i])))
               for i in range(len(poset))}
    ann = {i: len(ring.lann(int(poset.reps[i]))) for i in range(len(poset))}
    pi_ideal = {}
    for i in _ideal_order(ring):
        num = alpha + (1 - alpha) * sum(
            u_count[j] * ann[j] * pi_ideal[j]
            for j in poset.strictly_above(i))
        den = ring.n - (1 - alpha) * u_count[i] * ann[i]
        if den == 0:
            raise DenominatorZero(f"vanishing denominator at ideal {i}")
        pi_ideal[i] = Fraction(num, 1) / den
    return [pi_ideal[int(poset.id_of[x])] for x in range(ring.n)]


def stationary_units_formula(n: int, u: int, alpha) -> Fraction:
    """Uniform-Q stationary probability of any unit: alpha / (n - u + u*alpha),
    with n the ring size and u the number of units."""
    alpha = Fraction(alpha)
    return alpha / (n - u + u * alpha)


def gl2_stationary_values(q: int, alpha):
    """(unit, nonzero non-unit, zero) stationary probabilities of the
    uniform-multiplication chain on M2(F_q).

    The shared denominator factor is q^3 + q^2 - q + (q^2-1)(q^2-q) alpha,
    i.e. |R| - (1-alpha)|U_R|, matching the unit formula above.
    """
    alpha = Fraction(alpha)
    units = (q * q - 1) * (q * q - q)
    d1 = q ** 3 + q ** 2 - q + units * alpha
    e = 1 + (q * q - 1) * alpha
    pi_unit = alpha / d1
    pi_nonunit = q * q * alpha / (e * d1)
    pi_zero = Fraction(q ** 3 + q ** 2 - q - q * (q * q - 1) * alpha) / (e * d1)
    assert (units * pi_unit + (q ** 4 - units - 1) * pi_nonunit + pi_zero) == 1
    return pi_unit, pi_nonunit, pi_zero


def stationary_gl2(ring: FiniteRing, alpha):
    """Per-element stationary vector on M2(F_q) for uniform Q, from the
    closed forms; q may be any prime, including 2."""
    q = require_m2_ring(ring)
    alpha = check_alpha(alpha)
    pi_unit, pi_nonunit, pi_zero = gl2_stationary_values(q, alpha)
    out = []
    for x in range(ring.n):
        if x == ring.zero:
            out.append(pi_zero)
        elif x in ring.unit_set:
            out.append(pi_unit)
        else:
            out.append(pi_nonunit)
    return out
