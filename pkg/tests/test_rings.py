"""Ring constructors, enumeration contracts, and derived structure.

The per-ring structural identities at the bottom run exhaustively on every
test ring with at most 100 elements; the tabulated M2(F_q) facts are
checked against the generator/stabilizer descriptions for q = 3 and q = 5.
"""

from math import gcd

import numpy as np
import pytest

from ringwalk.errors import TooLarge
from ringwalk.gl2 import ring_element_index
from ringwalk.rings import (
    matrix_ring,
    product_ring,
    upper_triangular_ring,
    zn_ring,
)

SMALL_RINGS = None


def small_rings():
    global SMALL_RINGS
    if SMALL_RINGS is None:
        SMALL_RINGS = [
            zn_ring(1),
            zn_ring(4),
            zn_ring(6),
            zn_ring(12),
            product_ring(zn_ring(2), zn_ring(3)),
            upper_triangular_ring(2),
            upper_triangular_ring(3),
            matrix_ring(2),
            matrix_ring(3),
        ]
    return SMALL_RINGS


# ---------------------------------------------------------------------
# constructors and enumeration contracts
# ---------------------------------------------------------------------

def test_zero_ring():
    r = zn_ring(1)
    assert r.n == 1 and r.one == r.zero
    assert r.units.tolist() == [0]      # one = zero is its own inverse


def test_z6_units_by_gcd():
    r = zn_ring(6)
    assert r.units.tolist() == [x for x in range(6) if gcd(x, 6) == 1]


def test_z4_principal_ideals():
    r = zn_ring(4)
    # brute-force ideal generation: {x*a mod 4}
    ideals = {tuple(sorted({(x * a) % 4 for x in range(4)})) for a in range(4)}
    assert ideals == {(0,), (0, 2), (0, 1, 2, 3)}
    assert len(r.phi) == 3


def test_matrix_ring_f2_basics():
    r = matrix_ring(2)
    assert r.n == 16
    assert len(r.units) == (4 - 1) * (4 - 2)     # (q^2-1)(q^2-q) at q=2
    assert r.one == ring_element_index(r, (1, 0, 1 - 1, 1))
    assert r.one == 0b1001                        # lexicographic (1,0,0,1)


def test_matrix_ring_f3_unit_count():
    r = matrix_ring(3)
    assert r.n == 81
    assert len(r.units) == (9 - 1) * (9 - 3)


def test_matrix_ring_size_cap():
    with pytest.raises(TooLarge):
        matrix_ring(7, size=3)                   # 7^9 far beyond the cap
    with pytest.raises(TooLarge):
        zn_ring(20001)
    with pytest.raises(TooLarge):
        product_ring(zn_ring(150), zn_ring(150))


def test_matrix_ring_over_quadratic_extension():
    """The constructor accepts a prime-power field handle; the generic
    structure still holds over GF(4)."""
    from ringwalk.fields import ext_make, field_make
    f4 = ext_make(field_make(2))
    r = matrix_ring(f4)
    assert r.n == 256
    assert len(r.units) == (16 - 1) * (16 - 4)
    assert len(r.phi) == 4 + 3
    for a in r.phi:
        assert len(r.s_set(int(a))) * len(r.lstab(int(a))) == len(r.units)


def test_upper_triangular_sizes_and_units():
    assert upper_triangular_ring(2).n == 8
    r = upper_triangular_ring(3)
    assert r.n == 27
    # invertible iff both diagonal entries are nonzero: exhaustive scan
    expected = sum(1 for a in range(3) for b in range(3) for d in range(3)
                   if a and d)
    assert len(r.units) == expected == 12


def test_upper_triangular_embeds_in_matrix_ring():
    bt = upper_triangular_ring(3)
    m = matrix_ring(3)

    def embed(x):
        a, b, d = (x // 9) % 3, (x // 3) % 3, x % 3
        return ring_element_index(m, (a, b, 0, d))

    for x in range(bt.n):
        for y in range(bt.n):
            assert embed(int(bt.mul[x, y])) == \
                int(m.mul[embed(x), embed(y)])
            assert embed(int(bt.add[x, y])) == \
                int(m.add[embed(x), embed(y)])


def test_product_ring_contracts():
    p = product_ring(zn_ring(2), zn_ring(2))
    assert p.n == 4
    assert p.units.tolist() == [3]               # only (1,1)
    assert p.zero == 0
    p2 = product_ring(zn_ring(2), zn_ring(3))
    assert len(p2.units) == len(zn_ring(6).units)   # CRT comparison


# ---------------------------------------------------------------------
# similarity classes
# ---------------------------------------------------------------------

def test_commutative_rings_have_singleton_classes():
    for r in (zn_ring(6), zn_ring(12), product_ring(zn_ring(2), zn_ring(3))):
        assert len(r.similarity) == r.n
        assert all(len(c) == 1 for c in r.similarity.classes)


def test_m2_class_counts_against_table():
    for q in (3, 5):
        r = matrix_ring(q)
        part = r.similarity
        invertible = int(part.invertible.sum())
        expected_invertible = (q - 1) + (q - 1) + (q - 1) * (q - 2) // 2 \
            + (q * q - q) // 2
        assert invertible == expected_invertible
        assert len(part) == expected_invertible + (q + 1)
    assert len(matrix_ring(3).similarity) == 12


def test_invertible_classes_sit_inside_units():
    for r in small_rings():
        part = r.similarity
        for flag, cls in zip(part.invertible, part.classes):
            inside = all(int(x) in r.unit_set for x in cls)
            outside = all(int(x) not in r.unit_set for x in cls)
            assert (flag and inside) or (not flag and outside)


# ---------------------------------------------------------------------
# ideals, stabilizers, annihilators
# ---------------------------------------------------------------------

def test_m2_ideal_count_is_q_plus_3():
    for q in (2, 3, 5):
        assert len(matrix_ring(q).phi) == q + 3


def test_s_of_identity_is_unit_group():
    for r in small_rings():
        assert set(r.s_set(r.one).tolist()) == r.unit_set


def test_s_of_zero_is_zero():
    for r in small_rings():
        assert r.s_set(r.zero).tolist() == [r.zero]


def test_lstab_description_table_row2():
    # LStab([[0,1],[0,0]]) = {[[1,y],[0,w]] : w != 0}, size q(q-1)
    for q in (3, 5):
        r = matrix_ring(q)
        a = ring_element_index(r, (0, 1, 0, 0))
        expected = {ring_element_index(r, (1, y, 0, w))
                    for y in range(q) for w in range(1, q)}
        assert set(r.lstab(a).tolist()) == expected
        assert len(expected) == q * (q - 1)


def test_lann_of_unit_is_zero():
    for r in small_rings():
        for u in r.units[:3]:
            assert r.lann(int(u)).tolist() == [r.zero]


def test_rxy_examples():
    z4 = zn_ring(4)
    assert z4.r_xy(2, 2).tolist() == [1, 3]
    for r in (zn_ring(6), matrix_ring(2)):
        assert r.r_xy(r.one, r.one).tolist() == [r.one]
        for y in range(r.n):
            assert np.array_equal(r.r_xy(r.zero, y), r.lann(y))


def test_rxy_empty_iff_not_contained():
    r = matrix_ring(2)
    poset = r.ideals
    for x in range(r.n):
        for y in range(r.n):
            nonempty = len(r.r_xy(x, y)) > 0
            contained = bool(poset.leq[poset.id_of[x], poset.id_of[y]])
            assert nonempty == contained


# ---------------------------------------------------------------------
# witnesses and F_a
# ---------------------------------------------------------------------

def test_witness_property_everywhere_small():
    for r in small_rings():
        if r.n > 100:
            continue
        for a in r.phi:
            sa = r.s_set(int(a))
            for x in sa:
                for y in sa:
                    u = r.transitivity_witness(int(a), int(x), int(y))
                    assert int(u) in r.unit_set
                    assert int(r.mul[u, x]) == int(y)


def test_witness_rejects_foreign_pairs():
    r = zn_ring(6)
    with pytest.raises(ValueError):
        r.transitivity_witness(1, 1, 2)   # 2 generates a smaller ideal


def test_f_set_unit_and_zero():
    for r in (matrix_ring(2), matrix_ring(3), upper_triangular_ring(3),
              zn_ring(6)):
        part = r.similarity
        f_one = set(r.f_set(r.one).tolist())
        invertible = {i for i in range(len(part)) if part.invertible[i]}
        assert f_one == invertible
        f_zero = set(r.f_set(r.zero).tolist())
        assert f_zero == set(range(len(part)))


def test_f_set_rank_one_matches_table():
    # F_A cap psi^0 = {[[0,0],[1,0]]} u {[[t,0],[0,0]] : t != 0}
    for q in (3, 5):
        r = matrix_ring(q)
        part = r.similarity
        a = ring_element_index(r, (0, 1, 0, 0))
        a = int(r.phi[r.ideals.id_of[a]])
        fa = set(r.f_set(a).tolist())
        noninv = {ci for ci in fa if not part.invertible[ci]}
        expected = {int(part.class_of[ring_element_index(r, (0, 0, 1, 0))])}
        for t in range(1, q):
            expected.add(int(part.class_of[ring_element_index(r, (t, 0, 0, 0))]))
        assert noninv == expected
        # and the invertible classes are always present
        assert {ci for ci in fa if part.invertible[ci]} == \
            {ci for ci in range(len(part)) if part.invertible[ci]}


def test_table_one_s_sets():
    for q in (3, 5):
        r = matrix_ring(q)
        # column type: S = {[[0,a],[0,b]] nonzero}
        a_col = ring_element_index(r, (0, 1, 0, 0))
        expected = {ring_element_index(r, (0, a, 0, b))
                    for a in range(q) for b in range(q)} - {r.zero}
        assert set(r.s_set(a_col).tolist()) == expected
        # row types: S = {[[a, za],[b, zb]] nonzero}
        for z in range(q):
            a_row = ring_element_index(r, (1, z, 0, 0))
            expected = {ring_element_index(r, (a, a * z % q, b, b * z % q))
                        for a in range(q) for b in range(q)} - {r.zero}
            assert set(r.s_set(a_row).tolist()) == expected


def test_table_one_stabilizers_all_rows():
    mirabolic = lambda r, q: {ring_element_index(r, (1, y, 0, w))
                              for y in range(q) for w in range(1, q)}
    for q in (3, 5):
        r = matrix_ring(q)
        assert r.lstab(r.one).tolist() == [r.one]
        assert set(r.lstab(r.zero).tolist()) == r.unit_set
        a_col = ring_element_index(r, (0, 1, 0, 0))
        assert set(r.lstab(a_col).tolist()) == mirabolic(r, q)
        for z in range(q):
            a_row = ring_element_index(r, (1, z, 0, 0))
            assert set(r.lstab(a_row).tolist()) == mirabolic(r, q)


def test_table_one_f_sets_identity_and_zero_rows():
    for q in (3, 5):
        r = matrix_ring(q)
        part = r.similarity
        noninvertible = {ci for ci in range(len(part))
                         if not part.invertible[ci]}
        f_one = set(r.f_set(r.one).tolist())
        assert f_one & noninvertible == set()
        f_zero = set(r.f_set(r.zero).tolist())
        assert f_zero & noninvertible == noninvertible


# ---------------------------------------------------------------------
# structural identities, exhaustive at n <= 100
# ---------------------------------------------------------------------

def test_orbit_stabilizer_identity():
    for r in small_rings():
        for a in r.phi:
            assert len(r.s_set(int(a))) * len(r.lstab(int(a))) == len(r.units)


def test_generator_sets_partition_ring():
    for r in small_rings():
        counts = np.zeros(r.n, dtype=int)
        for s in r.ideals.generators:
            counts[s] += 1
        assert np.all(counts == 1)


def test_rxy_size_equals_lann_when_nonempty():
    for r in small_rings():
        if r.n > 100:
            continue
        for x in range(r.n):
            for y in range(r.n):
                fiber = r.r_xy(x, y)
                if len(fiber):
                    assert len(fiber) == len(r.lann(y))


def test_coset_reps_biject_with_s():
    for r in small_rings():
        for a in r.phi:
            reps = r.coset_reps(int(a))
            images = {int(r.mul[u, int(a)]) for u in reps}
            assert images == set(r.s_set(int(a)).tolist())
            assert len(reps) == len(r.s_set(int(a)))
