"""Constructors for the test corpus: Heisenberg and extraspecial groups.

The Heisenberg group of degree p^n is the group of upper unitriangular 3x3
matrices over GF(p^n), presented here on 3n generators in three blocks
(x-block, y-block, central z-block).  The only nontrivial relations are
y_j^(x_i) = y_j * z-word, where the z-word encodes the field product of the
i-th and j-th power-basis elements.
"""

from __future__ import annotations

from .errors import DomainError
from .gfp import FieldExt, check_prime
from .pcgroup import PcGroup, Word

MAX_DEGREE = 4


def heisenberg(p: int, n: int) -> PcGroup:
    """Sylow p-subgroup of SL_3(p^n) on 3n pc generators, for odd p."""
    check_prime(p)
    if p == 2:
        raise DomainError("heisenberg groups are constructed for odd p only")
    if not 1 <= n <= MAX_DEGREE:
        raise DomainError(f"degree must be between 1 and {MAX_DEGREE}, got {n}")
    field = FieldExt(p, n)
    conj: dict[tuple[int, int], Word] = {}
    for i in range(n):
        for j in range(n):
            prod = field.mult_table[i, j]
            # y_j^(x_i) = y_j * [y_j, x_i] and [y_j, x_i] = [x_i, y_j]^(-1)
            word = [
                (2 * n + k + 1, (-int(c)) % p)
                for k, c in enumerate(prod)
                if int(c) % p
            ]
            if word:
                conj[(n + j + 1, i + 1)] = word
    group = PcGroup(p, 3 * n, conj_tails=conj)
    group.assert_consistent()
    return group


def extraspecial_p3(p: int) -> PcGroup:
    """Extraspecial group of order p^3 and exponent p (odd p)."""
    return heisenberg(p, 1)
