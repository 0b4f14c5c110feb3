"""Brute-force oracles for the GF(p) linear algebra kernel.

Every canonical-form routine is checked against exhaustive enumeration on
small cases, never against itself.
"""

import itertools

import numpy as np
import pytest

from caminagroups.errors import DimensionError, DomainError
from caminagroups.gfp import (
    FieldExt,
    Subspace,
    check_prime,
    enumerate_hyperplanes,
    enumerate_nonzero_vectors,
    enumerate_projective_points,
    enumerate_vectors,
    is_prime,
    least_irreducible,
    nullspace,
    num_projective_points,
    rank,
    rref,
)


def brute_span(rows, p):
    """Set of all GF(p)-combinations of the rows, as tuples."""
    rows = [np.array(r, dtype=np.int64) % p for r in rows]
    n = len(rows[0]) if rows else 0
    out = set()
    for coeffs in itertools.product(range(p), repeat=len(rows)):
        v = np.zeros(n, dtype=np.int64)
        for c, r in zip(coeffs, rows):
            v = (v + c * r) % p
        out.add(tuple(int(x) for x in v))
    if not rows:
        out.add(())
    return out


def random_matrix(rng, p, rows, cols):
    return rng.integers(0, p, size=(rows, cols)).astype(np.int64)


def test_is_prime_small():
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}
    for n in range(40):
        assert is_prime(n) == (n in primes)


def test_check_prime_rejects():
    with pytest.raises(DomainError):
        check_prime(9)
    with pytest.raises(DomainError):
        check_prime(1)
    with pytest.raises(DomainError):
        check_prime((1 << 15) + 1)
    assert check_prime(32749) == 32749


@pytest.mark.parametrize("p", [2, 3, 5])
def test_rref_preserves_row_space(p):
    rng = np.random.default_rng(12345 + p)
    for _ in range(40):
        rows, cols = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        a = random_matrix(rng, p, rows, cols)
        r, pivots = rref(a, p)
        assert brute_span(a, p) == brute_span(r, p) or (
            r.shape[0] == 0 and brute_span(a, p) == {(0,) * cols}
        )
        # canonical shape: unit pivots, cleared pivot columns, increasing pivots
        assert list(pivots) == sorted(pivots)
        for i, c in enumerate(pivots):
            assert r[i, c] == 1
            col = r[:, c].copy()
            col[i] = 0
            assert not col.any()


@pytest.mark.parametrize("p", [2, 3, 5])
def test_rref_idempotent_and_canonical(p):
    rng = np.random.default_rng(999 + p)
    for _ in range(40):
        a = random_matrix(rng, p, int(rng.integers(1, 5)), int(rng.integers(1, 5)))
        r1, piv1 = rref(a, p)
        r2, piv2 = rref(r1, p)
        assert np.array_equal(r1, r2) and piv1 == piv2
        # shuffling rows or scaling by units must not change the canonical form
        perm = rng.permutation(a.shape[0])
        scales = rng.integers(1, p, size=a.shape[0]).astype(np.int64)
        b = (a[perm] * scales[:, None]) % p
        r3, _ = rref(b, p)
        assert np.array_equal(r1, r3)


@pytest.mark.parametrize("p", [2, 3])
def test_nullspace_is_exact_solution_set(p):
    rng = np.random.default_rng(77 + p)
    for _ in range(30):
        rows, cols = int(rng.integers(1, 4)), int(rng.integers(1, 5))
        a = random_matrix(rng, p, rows, cols)
        ns = nullspace(a, p)
        solutions = {
            tuple(int(x) for x in v)
            for v in enumerate_vectors(p, cols)
            if not ((a @ v) % p).any()
        }
        assert brute_span(ns, p) == solutions if ns.shape[0] else solutions == {(0,) * cols}
        assert ns.shape[0] == cols - rank(a, p)


def test_subspace_contains_matches_brute():
    rng = np.random.default_rng(5)
    p = 3
    for _ in range(20):
        vecs = random_matrix(rng, p, int(rng.integers(1, 4)), 4)
        s = Subspace(p, 4, vecs)
        members = brute_span(vecs, p)
        for v in enumerate_vectors(p, 4):
            assert s.contains(v) == (tuple(int(x) for x in v) in members)
        assert s.order() == len(members)


def test_subspace_intersect_and_add_brute():
    rng = np.random.default_rng(31)
    p = 2
    for _ in range(30):
        a = Subspace(p, 5, random_matrix(rng, p, int(rng.integers(1, 4)), 5))
        b = Subspace(p, 5, random_matrix(rng, p, int(rng.integers(1, 4)), 5))
        inter = a.intersect(b)
        sa = {tuple(int(x) for x in v) for v in a.enumerate()}
        sb = {tuple(int(x) for x in v) for v in b.enumerate()}
        si = {tuple(int(x) for x in v) for v in inter.enumerate()}
        assert si == (sa & sb)
        su = {tuple(int(x) for x in v) for v in a.add(b).enumerate()}
        target = brute_span(list(a.basis) + list(b.basis), p)
        assert su == target


def test_subspace_annihilator_brute():
    p = 3
    rng = np.random.default_rng(8)
    for _ in range(15):
        s = Subspace(p, 4, random_matrix(rng, p, 2, 4))
        ann = s.annihilator()
        expected = {
            tuple(int(x) for x in f)
            for f in enumerate_vectors(p, 4)
            if all(int(np.dot(f, v)) % p == 0 for v in s.basis)
        }
        got = {tuple(int(x) for x in v) for v in ann.enumerate()}
        assert got == expected
        # double annihilator comes back to the subspace itself
        assert ann.annihilator() == s


def test_subspace_equality_and_key():
    p = 3
    a = Subspace(p, 3, [[1, 0, 0], [0, 1, 0]])
    b = Subspace(p, 3, [[2, 1, 0], [1, 1, 0]])
    assert a == b and a.key() == b.key() and hash(a) == hash(b)
    c = Subspace(p, 3, [[1, 0, 0], [0, 0, 1]])
    assert a != c


def test_subspace_shape_errors():
    with pytest.raises(DimensionError):
        Subspace(3, 3, [[1, 0]])
    s = Subspace(3, 3, [[1, 0, 0]])
    with pytest.raises(DimensionError):
        s.contains([1, 0])


@pytest.mark.parametrize("p,n", [(2, 3), (3, 2), (3, 3), (5, 2)])
def test_projective_points(p, n):
    pts = list(enumerate_projective_points(p, n))
    assert len(pts) == num_projective_points(p, n) == (p**n - 1) // (p - 1)
    # normalized: first nonzero entry is 1
    for v in pts:
        nz = [int(x) for x in v if x != 0]
        assert nz and nz[0] == 1
    # every nonzero vector is proportional to exactly one representative
    keys = {tuple(int(x) for x in v) for v in pts}
    assert len(keys) == len(pts)
    for w in enumerate_nonzero_vectors(p, n):
        matches = sum(
            1
            for v in pts
            if any(np.array_equal((c * v) % p, w % p) for c in range(1, p))
        )
        assert matches == 1


def test_hyperplane_count():
    assert len(list(enumerate_hyperplanes(3, 8))) == 3280
    assert len(list(enumerate_hyperplanes(3, 4))) == 40


def test_vector_enumeration_order():
    vs = [tuple(int(x) for x in v) for v in enumerate_vectors(2, 2)]
    assert vs == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert len(list(enumerate_nonzero_vectors(3, 2))) == 8


def test_least_irreducible_known():
    # hand checked: the lex-least monic irreducibles in constant-first order
    assert least_irreducible(2, 2) == [1, 1, 1]  # t^2 + t + 1
    assert least_irreducible(3, 2) == [1, 0, 1]  # t^2 + 1
    assert least_irreducible(2, 1) == [0, 1]  # t


@pytest.mark.parametrize("p,deg", [(2, 2), (2, 3), (3, 2), (5, 2), (3, 3)])
def test_field_ext_axioms(p, deg):
    f = FieldExt(p, deg)
    elems = [np.array(t, dtype=np.int64) for t in itertools.product(range(p), repeat=deg)]
    one = f.one()
    zero = np.zeros(deg, dtype=np.int64)
    for a in elems:
        assert np.array_equal(f.multiply(a, one), a % p)
        assert np.array_equal(f.multiply(a, zero), zero)
    # commutativity and no zero divisors
    for a in elems:
        for b in elems:
            ab = f.multiply(a, b)
            assert np.array_equal(ab, f.multiply(b, a))
            if a.any() and b.any():
                assert ab.any()
    # associativity on a deterministic sample of triples
    rng = np.random.default_rng(4242)
    for _ in range(200):
        a, b, c = (elems[int(rng.integers(len(elems)))] for _ in range(3))
        assert np.array_equal(
            f.multiply(f.multiply(a, b), c), f.multiply(a, f.multiply(b, c))
        )
    # every nonzero element has multiplicative order dividing p^deg - 1
    q = p**deg - 1
    for a in elems:
        if not a.any():
            continue
        acc = one.copy()
        for _ in range(q):
            acc = f.multiply(acc, a)
        assert np.array_equal(acc, one)


def test_field_ext_modulus_satisfied():
    f = FieldExt(3, 2)
    t = np.array([0, 1], dtype=np.int64)
    # t^2 = -1 for modulus t^2 + 1
    assert np.array_equal(f.multiply(t, t), np.array([2, 0]))


def test_field_ext_domain():
    with pytest.raises(DomainError):
        FieldExt(4, 2)
    with pytest.raises(DomainError):
        FieldExt(3, 9)
