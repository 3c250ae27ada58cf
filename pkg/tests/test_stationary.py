"""Stationary distributions: oracle solve, recursion, and closed forms."""

from fractions import Fraction as Fr

import pytest

from ringwalk.chain import ClassDistribution, build_M
from ringwalk.errors import SingularSystem, TooLarge
from ringwalk.rings import (
    matrix_ring,
    product_ring,
    upper_triangular_ring,
    zn_ring,
)
from ringwalk.stationary import (
    gl2_stationary_values,
    stationary_gl2,
    stationary_recursive,
    stationary_solve,
    stationary_uniform,
    stationary_units_formula,
)

ALPHAS = (Fr(1, 4), Fr(1, 2), Fr(3, 4))


def uniform(ring):
    return ClassDistribution.uniform(ring)


def m2f2_paper_values(alpha):
    unit = alpha / (2 * (3 * alpha + 5))
    nonunit = 2 * alpha / ((3 * alpha + 1) * (3 * alpha + 5))
    zero = (5 - 3 * alpha) / ((3 * alpha + 1) * (3 * alpha + 5))
    return unit, nonunit, zero


# ---------------------------------------------------------------------
# the oracle
# ---------------------------------------------------------------------

def test_solve_uniform_rows_gives_uniform_pi():
    ring = zn_ring(6)
    m = build_M(ring, uniform(ring), Fr(1), allow_boundary=True)
    assert stationary_solve(m) == [Fr(1, 6)] * 6


def test_solve_m2f2_golden_values():
    ring = matrix_ring(2)
    m = build_M(ring, uniform(ring), Fr(1, 2))
    pi = stationary_solve(m)
    assert sum(pi) == 1
    unit, nonunit, zero = m2f2_paper_values(Fr(1, 2))
    assert (unit, nonunit, zero) == (Fr(1, 26), Fr(4, 65), Fr(14, 65))
    for x in range(16):
        if x == ring.zero:
            assert pi[x] == zero
        elif x in ring.unit_set:
            assert pi[x] == unit
        else:
            assert pi[x] == nonunit


def test_solve_size_cap():
    ring = matrix_ring(5)
    with pytest.raises(TooLarge):
        stationary_solve(build_M(ring, uniform(ring), Fr(1, 2)))


# ---------------------------------------------------------------------
# recursion and closed forms
# ---------------------------------------------------------------------

def test_recursion_matches_solve_uniform():
    for ring in (zn_ring(6), upper_triangular_ring(2), matrix_ring(2)):
        q = uniform(ring)
        for alpha in ALPHAS:
            m = build_M(ring, q, alpha)
            assert stationary_recursive(ring, q, alpha) == stationary_solve(m)


def test_recursion_matches_solve_nonuniform():
    ring = matrix_ring(2)
    part = ring.similarity
    w = {int(rep): Fr(1, 16) for rep in part.reps}
    w[ring.zero] = Fr(2, 16)
    w[6] = Fr(1, 16) - Fr(1, 48)
    q = ClassDistribution.from_weights(ring, w)
    for alpha in (Fr(1, 4), Fr(2, 5)):
        assert stationary_recursive(ring, q, alpha) == \
            stationary_solve(build_M(ring, q, alpha))


def test_uniform_closed_form_agrees_everywhere():
    rings = (zn_ring(6), zn_ring(12), upper_triangular_ring(2),
             upper_triangular_ring(3), matrix_ring(2), matrix_ring(3),
             product_ring(zn_ring(2), zn_ring(3)))
    for ring in rings:
        got = stationary_uniform(ring, Fr(1, 3))
        assert got == stationary_recursive(ring, uniform(ring), Fr(1, 3))


def test_uniform_boundary_alpha_one():
    ring = matrix_ring(2)
    pi = stationary_uniform(ring, Fr(1), allow_boundary=True)
    assert pi == [Fr(1, 16)] * 16


def test_pi_is_constant_on_generator_sets():
    ring = matrix_ring(3)
    pi = stationary_recursive(ring, uniform(ring), Fr(1, 3))
    for s in ring.ideals.generators:
        vals = {pi[int(x)] for x in s}
        assert len(vals) == 1


def test_pi_is_conjugation_invariant():
    ring = upper_triangular_ring(3)
    pi = stationary_recursive(ring, uniform(ring), Fr(2, 7))
    for u in ring.units:
        uinv = ring.inv(int(u))
        for x in range(ring.n):
            conj = int(ring.mul[ring.mul[u, x], uinv])
            assert pi[conj] == pi[x]


def test_pi_positive_and_fixed():
    ring = upper_triangular_ring(2)
    q = uniform(ring)
    alpha = Fr(2, 5)
    pi = stationary_solve(build_M(ring, q, alpha))
    assert all(p > 0 for p in pi)


# ---------------------------------------------------------------------
# the unit formula
# ---------------------------------------------------------------------

def test_units_formula_m2f2_shape():
    for alpha in (Fr(1, 7), Fr(1, 2), Fr(5, 6)):
        assert stationary_units_formula(16, 6, alpha) == \
            alpha / (2 * (3 * alpha + 5))


def test_units_formula_alpha_one():
    assert stationary_units_formula(16, 6, 1) == Fr(1, 16)
    assert stationary_units_formula(81, 48, 1) == Fr(1, 81)


def test_units_formula_matches_gl2_line():
    for q in (2, 3, 5):
        n = q ** 4
        u = (q * q - 1) * (q * q - q)
        for alpha in (Fr(1, 3), Fr(4, 7)):
            assert stationary_units_formula(n, u, alpha) == \
                gl2_stationary_values(q, alpha)[0]


# ---------------------------------------------------------------------
# the M2(F_q) closed forms
# ---------------------------------------------------------------------

def test_gl2_values_match_section3_example_at_q2():
    for alpha in ALPHAS:
        assert gl2_stationary_values(2, alpha) == m2f2_paper_values(alpha)


def test_gl2_vector_matches_solve_q3():
    ring = matrix_ring(3)
    alpha = Fr(2, 5)
    assert stationary_gl2(ring, alpha) == \
        stationary_solve(build_M(ring, uniform(ring), alpha))


def test_gl2_total_mass_identity_q3():
    q = 3
    alpha = Fr(1, 3)
    unit, nonunit, zero = gl2_stationary_values(q, alpha)
    u = (q * q - 1) * (q * q - q)
    assert u * unit + (q ** 4 - u - 1) * nonunit + zero == 1


def test_monotone_structure_uniform():
    # pi(zero) > pi(nonzero non-unit) > pi(unit) strictly inside (0,1)
    for q in (2, 3):
        for alpha in (Fr(1, 10), Fr(1, 2), Fr(9, 10)):
            unit, nonunit, zero = gl2_stationary_values(q, alpha)
            assert zero > nonunit > unit


def test_solve_flags_singular_inputs():
    from ringwalk.exact import ScaledMatrix, stationary_nullspace
    with pytest.raises(SingularSystem):
        stationary_nullspace(ScaledMatrix.identity(3))
