"""Conjugacy classes, character table, and induced decompositions for GL2(F_q).

Covers odd primes q.  Class and representation families:

    classes: central diag(x,x); non-semisimple [[x,1],[0,x]]; split
    diag(x,y) with {x,y} unordered; anisotropic with eigenvalue pair
    {alpha, alpha^q} in the quadratic extension.  Sizes 1, q^2-1, q^2+q,
    q^2-q are derived from centralizer orders and cross-checked against
    ring-level orbit sizes in the test suite.

    irreducibles: one-dimensional det twists; q-dimensional Steinberg
    twists; (q+1)-dimensional principal series for unordered character
    pairs; (q-1)-dimensional cuspidals for Frobenius-orbits of
    non-decomposable extension characters.

Character values are assembled from exact angle fractions and materialized
to complex only inside the table, so orthogonality holds to rounding error.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import UnknownCase, UnknownGenerator, UnsupportedQ
from .fields import (
    MultiplicativeCharacter,
    angle_to_complex,
    ext_make,
    field_make,
    frobenius_twist_index,
    is_prime,
)


@dataclass(frozen=True)
class ConjClass:
    kind: str        # central | unipotent | split | anisotropic
    params: tuple    # (x,) | (x,) | (x, y) with x < y | (alpha_index,)
    size: int
    rep: tuple       # 2x2 matrix entries (a, b, c, d) over F_q

    def label(self) -> str:
        return f"{self.kind}{self.params}"


@dataclass(frozen=True)
class Irrep:
    kind: str        # det | steinberg | principal | cuspidal
    params: tuple    # (k,) | (k,) | (k1, k2) with k1 < k2 | (nu_index,)
    dim: int

    def label(self) -> str:
        return f"{self.kind}{self.params}"


def _require_odd_prime(q: int):
    if not is_prime(q) or q == 2:
        raise UnsupportedQ(
            f"closed-form GL2 layer needs an odd prime, got {q}")


def conj_classes(q: int):
    """All conjugacy classes of GL2(F_q) with sizes from centralizer orders."""
    _require_odd_prime(q)
    ext = ext_make(field_make(q))
    g = (q * q - 1) * (q * q - q)
    classes = []
    for x in range(1, q):
        classes.append(ConjClass("central", (x,), 1, (x, 0, 0, x)))
    for x in range(1, q):
        # centralizer {aI + bN, a != 0} of order q(q-1)
        classes.append(ConjClass("unipotent", (x,), g // (q * (q - 1)),
                                 (x, 1, 0, x)))
    for x in range(1, q):
        for y in range(x + 1, q):
            # centralizer = split torus of order (q-1)^2
            classes.append(ConjClass("split", (x, y), g // ((q - 1) ** 2),
                                     (x, 0, 0, y)))
    seen = set()
    for a in ext.elements():
        if a == 0 or ext.in_base(a):
            continue
        key = min(a, ext.frobenius(a))
        if key in seen:
            continue
        seen.add(key)
        tr = ext.add(key, ext.frobenius(key))
        assert ext.in_base(tr)
        t = tr % ext.p
        nm = ext.norm(key)
        # companion matrix of t^2 - (trace) t + (norm); centralizer is the
        # non-split torus of order q^2 - 1
        classes.append(ConjClass("anisotropic", (key,), g // (q * q - 1),
                                 (0, (-nm) % q, 1, t % q)))
    assert sum(c.size for c in classes) == g
    return classes


def irreps(q: int):
    _require_odd_prime(q)
    m = q - 1
    m2 = q * q - 1
    ext = ext_make(field_make(q))
    reps = []
    for k in range(m):
        reps.append(Irrep("det", (k,), 1))
    for k in range(m):
        reps.append(Irrep("steinberg", (k,), q))
    for k1 in range(m):
        for k2 in range(k1 + 1, m):
            reps.append(Irrep("principal", (k1, k2), q + 1))
    seen = set()
    for k in range(m2):
        kf = frobenius_twist_index(ext, k)
        if kf == k:      # decomposable: not a cuspidal parameter
            continue
        key = min(k, kf)
        if key in seen:
            continue
        seen.add(key)
        reps.append(Irrep("cuspidal", (key,), q - 1))
    assert sum(r.dim ** 2 for r in reps) == (q * q - 1) * (q * q - q)
    return reps


def trivial_irrep() -> Irrep:
    return Irrep("det", (0,), 1)


def char_value(q: int, rep: Irrep, cls: ConjClass) -> complex:
    """Single character-table entry; exact angles, complex at the boundary."""
    F = field_make(q)
    ext = ext_make(F)

    def chi(k, x):
        return MultiplicativeCharacter(F, k).angle(x)

    def nu(k, a):
        return MultiplicativeCharacter(ext, k).angle(a)

    kind, params = rep.kind, rep.params
    if kind == "det":
        (k,) = params
        if cls.kind in ("central", "unipotent"):
            return angle_to_complex(2 * chi(k, cls.params[0]))
        if cls.kind == "split":
            x, y = cls.params
            return angle_to_complex(chi(k, x) + chi(k, y))
        (a,) = cls.params
        return angle_to_complex(chi(k, ext.norm(a)))
    if kind == "steinberg":
        (k,) = params
        if cls.kind == "central":
            return q * angle_to_complex(2 * chi(k, cls.params[0]))
        if cls.kind == "unipotent":
            return 0j
        if cls.kind == "split":
            x, y = cls.params
            return angle_to_complex(chi(k, x) + chi(k, y))
        (a,) = cls.params
        return -angle_to_complex(chi(k, ext.norm(a)))
    if kind == "principal":
        k1, k2 = params
        if cls.kind == "central":
            x = cls.params[0]
            return (q + 1) * angle_to_complex(chi(k1, x) + chi(k2, x))
        if cls.kind == "unipotent":
            x = cls.params[0]
            return angle_to_complex(chi(k1, x) + chi(k2, x))
        if cls.kind == "split":
            x, y = cls.params
            return (angle_to_complex(chi(k1, x) + chi(k2, y))
                    + angle_to_complex(chi(k1, y) + chi(k2, x)))
        return 0j
    if kind == "cuspidal":
        (k,) = params
        if cls.kind == "central":
            x = cls.params[0]
            return (q - 1) * angle_to_complex(nu(k, ext.embed(x)))
        if cls.kind == "unipotent":
            x = cls.params[0]
            return -angle_to_complex(nu(k, ext.embed(x)))
        if cls.kind == "split":
            return 0j
        (a,) = cls.params
        return -(angle_to_complex(nu(k, a))
                 + angle_to_complex(nu(k, ext.frobenius(a))))
    raise UnknownCase(f"unknown irrep kind {kind}")


class CharacterTable:
    """Full character table of GL2(F_q), rows = irreps, columns = classes."""

    def __init__(self, q: int):
        _require_odd_prime(q)
        self.q = q
        self.classes = conj_classes(q)
        self.irreps = irreps(q)
        self.group_order = (q * q - 1) * (q * q - q)
        self.class_sizes = np.array([c.size for c in self.classes])
        self.values = np.array(
            [[char_value(q, r, c) for c in self.classes] for r in self.irreps])
        self._class_index = {(c.kind, c.params): i
                             for i, c in enumerate(self.classes)}
        self._irrep_index = {(r.kind, r.params): i
                             for i, r in enumerate(self.irreps)}

    def class_index(self, kind: str, params: tuple) -> int:
        return self._class_index[(kind, params)]

    def irrep_index(self, rep: Irrep) -> int:
        return self._irrep_index[(rep.kind, rep.params)]

    def row(self, rep: Irrep) -> np.ndarray:
        return self.values[self.irrep_index(rep)]

    def value(self, rep: Irrep, kind: str, params: tuple) -> complex:
        return self.values[self.irrep_index(rep), self.class_index(kind, params)]

    def inner(self, va, vb) -> complex:
        """Class-function inner product (1/|G|) sum |C| va conj(vb)."""
        va = np.asarray(va)
        vb = np.asarray(vb)
        return np.sum(self.class_sizes * va * np.conj(vb)) / self.group_order

    def classify(self, entries) -> int:
        """Class index of an invertible matrix given as entries (a, b, c, d)."""
        q = self.q
        F = field_make(q)
        a, b, c, d = (int(v) % q for v in entries)
        det = (a * d - b * c) % q
        assert det != 0, "classify expects an invertible matrix"
        if b == 0 and c == 0 and a == d:
            return self.class_index("central", (a,))
        tr = (a + d) % q
        disc = (tr * tr - 4 * det) % q
        inv2 = F.inv(2)
        if disc == 0:
            return self.class_index("unipotent", (tr * inv2 % q,))
        ext = ext_make(F)
        s = ext.sqrt(ext.embed(disc))
        if s is not None and ext.in_base(s):
            s = s % q
            x = (tr + s) * inv2 % q
            y = (tr - s) * inv2 % q
            return self.class_index("split", (min(x, y), max(x, y)))
        alpha = ext.mul(ext.add(ext.embed(tr), s), ext.embed(inv2))
        key = min(alpha, ext.frobenius(alpha))
        return self.class_index("anisotropic", (key,))


@lru_cache(maxsize=None)
def character_table(q: int) -> CharacterTable:
    return CharacterTable(q)


def inner_product(q: int, va, vb) -> complex:
    return character_table(q).inner(va, vb)


def mirabolic_trace_sum(q: int, rep: Irrep) -> complex:
    """Sum of the character of rep over P = {[[1, y], [0, w]], w != 0}.

    P splits into the identity, q-1 elements in the unipotent class of 1,
    and q elements in each split class {1, w} for w != 1.
    """
    tab = character_table(q)
    total = tab.value(rep, "central", (1,))
    total += (q - 1) * tab.value(rep, "unipotent", (1,))
    for w in range(2, q):
        total += q * tab.value(rep, "split", (min(1, w), max(1, w)))
    return total


def rank_one_sigma(q: int):
    """Constituents of the representation induced from the trivial character
    of the mirabolic subgroup: trivial, Steinberg, and each principal series
    pairing a nontrivial character with the trivial one."""
    out = [Irrep("det", (0,), 1), Irrep("steinberg", (0,), q)]
    for k in range(1, q - 1):
        out.append(Irrep("principal", (0, k), q + 1))
    return out


def induced_from_P_decomposition(q: int) -> dict:
    """Multiplicity of every irreducible in Ind_P^G(1), from P-fixed vectors."""
    _require_odd_prime(q)
    order_p = q * (q - 1)
    out = {}
    for rep in irreps(q):
        s = mirabolic_trace_sum(q, rep) / order_p
        m = round(s.real)
        assert abs(s - m) < 1e-9, f"non-integral multiplicity {s} for {rep}"
        out[rep] = m
    return out


# ---------------------------------------------------------------------------
# hooks into the ring side of M2(F_q)
# ---------------------------------------------------------------------------

def matrix_rank(entries, q: int) -> int:
    a, b, c, d = (int(v) % q for v in entries)
    if (a * d - b * c) % q != 0:
        return 2
    if a or b or c or d:
        return 1
    return 0


def require_m2_ring(ring):
    desc = ring.descriptor
    if desc.get("kind") != "matrix" or desc.get("size") != 2:
        raise UnsupportedQ(f"{ring.label} is not a 2x2 matrix ring")
    return desc["q"]


def ring_element_index(ring, entries) -> int:
    """Index of the 2x2 matrix with the given entries in the ring enumeration."""
    q = require_m2_ring(ring)
    a, b, c, d = (int(v) % q for v in entries)
    return ((a * q + b) * q + c) * q + d


def sigma_A(ring, a: int):
    """Sigma_A for a in phi of M2(F_q): the irreducible constituents of the
    permutation representation on S_a, keyed by rank of a."""
    q = require_m2_ring(ring)
    _require_odd_prime(q)
    if int(a) not in {int(x) for x in ring.phi}:
        raise UnknownGenerator(f"{a} is not a canonical ideal generator")
    r = matrix_rank(ring.entries[a].ravel(), q)
    if r == 2:
        return irreps(q)
    if r == 1:
        return rank_one_sigma(q)
    return [Irrep("det", (0,), 1)]


def classify_nonunit_class(ring, x: int):
    """Tag a non-invertible element: "zero", ("Y0",) nilpotent rank one, or
    ("Yt", t) for the rank-one class of diag(t, 0)."""
    q = require_m2_ring(ring)
    ent = ring.entries[x].ravel()
    r = matrix_rank(ent, q)
    if r == 0:
        return ("zero",)
    if r != 1:
        raise UnknownCase("element is invertible")
    t = int(ent[0] + ent[3]) % q
    if t == 0:
        return ("Y0",)
    return ("Yt", t)


def class_function_F(ring, A: int, X: int) -> dict:
    """Group-algebra coefficients (unit index -> int) of the class function
    that reproduces, on the span of S_A, the projected action of the class
    sum of the non-invertible class X.  A must be rank one in phi."""
    q = require_m2_ring(ring)
    if int(A) not in {int(x) for x in ring.phi}:
        raise UnknownGenerator(f"{A} is not a canonical ideal generator")
    if matrix_rank(ring.entries[A].ravel(), q) != 1:
        raise UnknownCase("class functions are tabulated for rank-one A only")
    tag = classify_nonunit_class(ring, X)
    part = ring.similarity
    coeffs = {}
    if tag == ("Y0",):
        u1 = ring_element_index(ring, (1, 1, 0, 1))
        for v in part.classes[part.class_of[u1]]:
            coeffs[int(v)] = coeffs.get(int(v), 0) + 1
        ident = ring.one
        coeffs[ident] = coeffs.get(ident, 0) - (q - 1)
    elif tag[0] == "Yt":
        t = tag[1]
        ut = ring_element_index(ring, (t, 1, 0, t))
        for v in part.classes[part.class_of[ut]]:
            coeffs[int(v)] = coeffs.get(int(v), 0) + 1
        central = ring_element_index(ring, (t, 0, 0, t))
        coeffs[central] = coeffs.get(central, 0) + 1
    else:
        raise UnknownCase(f"no tabulated class function for class {tag}")
    return coeffs
