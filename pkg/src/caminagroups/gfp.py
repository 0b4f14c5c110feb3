"""Exact linear algebra over prime fields GF(p).

Everything here is integer arithmetic on numpy int64 arrays, reduced mod p at
each step.  No floating point anywhere.  Canonical forms (reduced row echelon,
nullspace bases) are deterministic so they can serve as dictionary keys when
deduplicating subspaces.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator

import numpy as np

from .errors import DimensionError, DomainError

MAX_PRIME = 1 << 15
MAX_DIM = 64


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> int:
    """Validate a characteristic.  Returns p, raises DomainError otherwise."""
    if not isinstance(p, int) or isinstance(p, bool):
        raise DomainError(f"prime must be an int, got {type(p).__name__}")
    if p > MAX_PRIME:
        raise DomainError(f"prime {p} exceeds supported bound {MAX_PRIME}")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    return p


def _as_matrix(mat, p: int) -> np.ndarray:
    a = np.asarray(mat, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2:
        raise DimensionError(f"expected a matrix, got ndim={a.ndim}")
    return np.mod(a, p)


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("no inverse of 0")
    return pow(a, p - 2, p)


def rref(mat, p: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row echelon form over GF(p).

    Returns (R, pivots) where R has zero rows dropped, each pivot entry is 1,
    and every pivot column is cleared above and below.  This is the canonical
    representative of the row space.
    """
    a = _as_matrix(mat, p).copy()
    rows, cols = a.shape
    r = 0
    pivots: list[int] = []
    for c in range(cols):
        pr = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        a[r] = (a[r] * inv_mod(int(a[r, c]), p)) % p
        for i in range(rows):
            if i != r and a[i, c] != 0:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a[:r], tuple(pivots)


def rank(mat, p: int) -> int:
    return rref(mat, p)[0].shape[0]


def nullspace(mat, p: int) -> np.ndarray:
    """Canonical basis (as rows, in RREF) of {x : mat @ x = 0 mod p}."""
    a = _as_matrix(mat, p)
    cols = a.shape[1]
    r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    if not free:
        return np.zeros((0, cols), dtype=np.int64)
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-r[i, fc]) % p
    out, _ = rref(basis, p)
    return out


def matvec(mat: np.ndarray, vec: np.ndarray, p: int) -> np.ndarray:
    return np.mod(mat @ vec, p)


class Subspace:
    """A subspace of GF(p)^ambient, stored by its canonical RREF basis.

    Two Subspace objects over the same field and ambient compare equal exactly
    when they are the same subspace, and key() is usable for dict membership.
    """

    __slots__ = ("p", "ambient", "basis", "pivots")

    def __init__(self, p: int, ambient: int, vectors=None):
        if not 0 <= ambient <= MAX_DIM:
            raise DimensionError(f"ambient dimension {ambient} out of range")
        self.p = p
        self.ambient = ambient
        if vectors is None or (hasattr(vectors, "__len__") and len(vectors) == 0):
            self.basis = np.zeros((0, ambient), dtype=np.int64)
            self.pivots: tuple[int, ...] = ()
        else:
            mat = _as_matrix(vectors, p)
            if mat.shape[1] != ambient:
                raise DimensionError(
                    f"vectors have length {mat.shape[1]}, ambient is {ambient}"
                )
            self.basis, self.pivots = rref(mat, p)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def order(self) -> int:
        return self.p ** self.dim

    def key(self) -> bytes:
        return self.basis.tobytes()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.p == other.p
            and self.ambient == other.ambient
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.ambient, self.key()))

    def __repr__(self) -> str:
        return f"Subspace(p={self.p}, ambient={self.ambient}, dim={self.dim})"

    def reduce(self, vec) -> np.ndarray:
        """Residue of vec after clearing every pivot coordinate.  Zero iff vec is in the subspace."""
        v = np.mod(np.asarray(vec, dtype=np.int64), self.p)
        if v.shape != (self.ambient,):
            raise DimensionError(f"vector shape {v.shape} vs ambient {self.ambient}")
        for i, c in enumerate(self.pivots):
            if v[c] != 0:
                v = (v - v[c] * self.basis[i]) % self.p
        return v

    def contains(self, vec) -> bool:
        return not self.reduce(vec).any()

    def contains_subspace(self, other: "Subspace") -> bool:
        self._check_compatible(other)
        return all(self.contains(row) for row in other.basis)

    def _check_compatible(self, other: "Subspace") -> None:
        if self.p != other.p or self.ambient != other.ambient:
            raise DimensionError("subspaces live in different ambient spaces")

    def add(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        stacked = np.vstack([self.basis, other.basis])
        return Subspace(self.p, self.ambient, stacked)

    def intersect(self, other: "Subspace") -> "Subspace":
        """Zassenhaus: row reduce [A|A] over [B|0]; rows with zero left half
        carry the intersection in their right half."""
        self._check_compatible(other)
        n = self.ambient
        top = np.hstack([self.basis, self.basis])
        bot = np.hstack([other.basis, np.zeros_like(other.basis)])
        r, _ = rref(np.vstack([top, bot]), self.p)
        keep = [row[n:] for row in r if not row[:n].any()]
        return Subspace(self.p, n, keep)

    def annihilator(self) -> "Subspace":
        """All functionals (as vectors, standard dot pairing) vanishing on this subspace."""
        return Subspace(self.p, self.ambient, nullspace(self.basis, self.p))

    def enumerate(self) -> Iterator[np.ndarray]:
        """All p^dim member vectors, lexicographic in basis coefficients."""
        for coeffs in itertools.product(range(self.p), repeat=self.dim):
            v = np.zeros(self.ambient, dtype=np.int64)
            for c, row in zip(coeffs, self.basis):
                if c:
                    v = (v + c * row) % self.p
            yield v

    @classmethod
    def full(cls, p: int, ambient: int) -> "Subspace":
        return cls(p, ambient, np.eye(ambient, dtype=np.int64))


def enumerate_vectors(p: int, n: int) -> Iterator[np.ndarray]:
    """All of GF(p)^n in lexicographic order (first coordinate most significant)."""
    for t in itertools.product(range(p), repeat=n):
        yield np.array(t, dtype=np.int64)


def enumerate_nonzero_vectors(p: int, n: int) -> Iterator[np.ndarray]:
    it = enumerate_vectors(p, n)
    next(it)
    yield from it


def enumerate_projective_points(p: int, n: int) -> Iterator[np.ndarray]:
    """One representative per line: first nonzero coordinate is 1, lex order.

    Yields (p^n - 1) // (p - 1) vectors.
    """
    for lead in range(n):
        head = np.zeros(lead, dtype=np.int64)
        for tail in itertools.product(range(p), repeat=n - lead - 1):
            yield np.concatenate([head, [1], np.array(tail, dtype=np.int64)])


def num_projective_points(p: int, n: int) -> int:
    return (p**n - 1) // (p - 1)


def enumerate_hyperplanes(p: int, n: int) -> Iterator[np.ndarray]:
    """Hyperplanes of GF(p)^n as normalized functionals (same set as projective points)."""
    return enumerate_projective_points(p, n)


# ---------------------------------------------------------------------------
# Polynomials over GF(p), just enough to build small extension fields.
# Coefficient tuples are constant-first.


def _poly_mod(num: list[int], den: list[int], p: int) -> list[int]:
    num = [c % p for c in num]
    dd = len(den) - 1
    lead_inv = inv_mod(den[-1], p)
    while len(num) - 1 >= dd and any(num):
        while num and num[-1] == 0:
            num.pop()
        if len(num) - 1 < dd:
            break
        factor = (num[-1] * lead_inv) % p
        shift = len(num) - 1 - dd
        for i, c in enumerate(den):
            num[shift + i] = (num[shift + i] - factor * c) % p
    while num and num[-1] == 0:
        num.pop()
    return num


def _is_irreducible(f: list[int], p: int) -> bool:
    d = len(f) - 1
    if d <= 0:
        return False
    if d == 1:
        return True
    for deg in range(1, d // 2 + 1):
        for lower in itertools.product(range(p), repeat=deg):
            g = list(lower) + [1]
            if not _poly_mod(list(f), g, p):
                return False
    return True


def least_irreducible(p: int, deg: int) -> list[int]:
    """Lexicographically least monic irreducible of given degree, constant-first coeffs."""
    for lower in itertools.product(range(p), repeat=deg):
        f = list(lower) + [1]
        if _is_irreducible(f, p):
            return f
    raise DomainError(f"no irreducible of degree {deg} over GF({p})")


class FieldExt:
    """GF(p^deg) in the power basis 1, t, ..., t^(deg-1) of GF(p)[t]/(f).

    f is the lexicographically least monic irreducible of the requested degree,
    found by exhaustive search, so the structure constants are deterministic.
    """

    MAX_DEG = 8

    def __init__(self, p: int, deg: int):
        check_prime(p)
        if not 1 <= deg <= self.MAX_DEG:
            raise DomainError(f"extension degree {deg} out of range 1..{self.MAX_DEG}")
        self.p = p
        self.deg = deg
        self.modulus = least_irreducible(p, deg)
        # coords of t^k for k = 0 .. 2 deg - 2, reduced mod f
        powers = []
        for k in range(2 * deg - 1):
            poly = [0] * k + [1]
            rem = _poly_mod(poly, self.modulus, p)
            rem = rem + [0] * (deg - len(rem))
            powers.append(np.array(rem, dtype=np.int64))
        self._tpow = powers
        table = np.zeros((deg, deg, deg), dtype=np.int64)
        for i in range(deg):
            for j in range(deg):
                table[i, j] = powers[i + j]
        self.mult_table = table

    def multiply(self, a, b) -> np.ndarray:
        """Product of two field elements given by power-basis coordinate vectors."""
        a = np.mod(np.asarray(a, dtype=np.int64), self.p)
        b = np.mod(np.asarray(b, dtype=np.int64), self.p)
        if a.shape != (self.deg,) or b.shape != (self.deg,):
            raise DimensionError("field element has wrong coordinate length")
        out = np.zeros(self.deg, dtype=np.int64)
        for i in range(self.deg):
            if a[i] == 0:
                continue
            for j in range(self.deg):
                if b[j]:
                    out = (out + a[i] * b[j] * self.mult_table[i, j]) % self.p
        return out

    def one(self) -> np.ndarray:
        v = np.zeros(self.deg, dtype=np.int64)
        v[0] = 1
        return v


def span_of(vectors: Iterable, p: int, ambient: int) -> Subspace:
    return Subspace(p, ambient, list(vectors))
