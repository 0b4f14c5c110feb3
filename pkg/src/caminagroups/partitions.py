"""Partitions of an elementary abelian group into subgroups.

A partition here is a family of nontrivial proper subgroups of GF(p)^n,
pairwise intersecting trivially, whose union is the whole group.  The number
of parts k obeys a parity bound: k >= p^l + 1 when n = 2l, strictly when
n = 2l + 1.  This module verifies partition instances exhaustively, searches
for the exact minimum k by backtracking, and verifies the dual formulation
(families of subgroups with full pairwise products, one inside every index-p
subgroup), which the annihilator map exchanges with partitions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ContradictionError,
    DomainError,
    InternalInconsistencyError,
    ResourceError,
)
from .gfp import (
    Subspace,
    check_prime,
    enumerate_hyperplanes,
    enumerate_nonzero_vectors,
    enumerate_projective_points,
    span_of,
)

MAX_SEARCH_ORDER = 81  # the search enumerates all subspaces of GF(p)^n
DEFAULT_SEARCH_BUDGET = 2_000_000


def parity_bound(p: int, n: int) -> tuple[int, bool]:
    """Lower bound on the part count over GF(p)^n: (threshold, strict).

    The count must be >= threshold for even n and > threshold for odd n.
    """
    return p ** (n // 2) + 1, bool(n % 2)


def _bound_met(k: int, p: int, n: int) -> bool:
    threshold, strict = parity_bound(p, n)
    return k > threshold if strict else k >= threshold


def _check_instance_shape(p: int, n: int, parts, label: str) -> None:
    check_prime(p)
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DomainError(f"ambient dimension must be a positive int, got {n!r}")
    for part in parts:
        if not isinstance(part, Subspace):
            raise DomainError(f"{label} must be Subspace instances")
        if part.p != p or part.ambient != n:
            raise DomainError(
                f"{label[:-1]} over GF({part.p})^{part.ambient} does not live "
                f"in GF({p})^{n}"
            )


@dataclass(frozen=True)
class PartitionInstance:
    """A candidate partition of GF(p)^n into subgroups."""

    p: int
    n: int
    parts: tuple[Subspace, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        _check_instance_shape(self.p, self.n, self.parts, "parts")


@dataclass(frozen=True)
class DualCoverInstance:
    """Subgroups of GF(p)^n meant to pairwise generate everything while
    hitting every index-p subgroup from below."""

    p: int
    n: int
    subgroups: tuple[Subspace, ...]

    def __post_init__(self):
        object.__setattr__(self, "subgroups", tuple(self.subgroups))
        _check_instance_shape(self.p, self.n, self.subgroups, "subgroups")


@dataclass(frozen=True)
class PartitionReport:
    valid: bool
    k: int
    bound_ok: bool
    equality_case: bool | None  # None when invalid or n is odd
    reason: str = ""


@dataclass(frozen=True)
class DualCoverReport:
    hypotheses_ok: bool
    k: int
    bound_ok: bool
    reason: str = ""


def verify_partition(inst: PartitionInstance) -> PartitionReport:
    """Check the partition axioms by explicit vector enumeration."""
    p, n, parts = inst.p, inst.n, inst.parts
    k = len(parts)

    def invalid(reason):
        return PartitionReport(False, k, False, None, reason)

    for part in parts:
        if part.dim == 0:
            return invalid("a part is trivial")
        if part.dim == n:
            return invalid("a part is the whole group")
    for i in range(k):
        for j in range(i + 1, k):
            if parts[i].intersect(parts[j]).dim > 0:
                return invalid(f"parts {i} and {j} intersect nontrivially")
    for v in enumerate_nonzero_vectors(p, n):
        if not any(part.contains(v) for part in parts):
            return invalid(f"vector {tuple(int(c) for c in v)} is uncovered")

    bound_ok = _bound_met(k, p, n)
    if n % 2:
        return PartitionReport(True, k, bound_ok, None)

    threshold, _ = parity_bound(p, n)
    equality = k == threshold
    if equality:
        half = p ** (n // 2)
        if any(part.order() != half for part in parts):
            raise ContradictionError(
                "a minimum-size partition must split into parts of order "
                f"p^(n/2) = {half}; got orders "
                f"{sorted(part.order() for part in parts)}"
            )
    return PartitionReport(True, k, bound_ok, equality)


def verify_dual_cover(inst: DualCoverInstance) -> DualCoverReport:
    """Check the dual hypotheses: pairwise products are everything, and every
    index-p subgroup contains one of the given subgroups."""
    p, n, subs = inst.p, inst.n, inst.subgroups
    k = len(subs)

    def bad(reason):
        return DualCoverReport(False, k, False, reason)

    if n == 1:
        return bad("dimension 1 admits no proper nontrivial subgroups")
    for sub in subs:
        if sub.dim == 0:
            return bad("a subgroup is trivial")
        if sub.dim == n:
            return bad("a subgroup is the whole group")
    for i in range(k):
        for j in range(i + 1, k):
            if subs[i].add(subs[j]).dim < n:
                return bad(f"subgroups {i} and {j} do not generate everything")
    for lam in enumerate_hyperplanes(p, n):
        if not any(not np.any((sub.basis @ lam) % p) for sub in subs):
            return bad(
                "the index-p subgroup with normal vector "
                f"{tuple(int(c) for c in lam)} contains none of the subgroups"
            )
    return DualCoverReport(True, k, _bound_met(k, p, n))


def dual_cover_of_partition(inst: PartitionInstance) -> DualCoverInstance:
    """Annihilators of the parts.  Trivial intersections dualize to full
    pairwise products and coverage dualizes to hitting every hyperplane."""
    return DualCoverInstance(
        inst.p, inst.n, tuple(part.annihilator() for part in inst.parts)
    )


def partition_of_dual_cover(inst: DualCoverInstance) -> PartitionInstance:
    return PartitionInstance(
        inst.p, inst.n, tuple(sub.annihilator() for sub in inst.subgroups)
    )


@dataclass(frozen=True)
class PartitionSearch:
    k_min: int
    witness: PartitionInstance
    nodes: int


def _proper_subspaces(p: int, n: int) -> list[Subspace]:
    """Every nontrivial proper subspace, in a deterministic order."""
    seen: dict[bytes, Subspace] = {}
    lines = [span_of([pt], p, n) for pt in enumerate_projective_points(p, n)]
    frontier = list(lines)
    for line in frontier:
        seen[line.key()] = line
    while frontier:
        grown = []
        for sub in frontier:
            if sub.dim >= n - 1:
                continue
            for line in lines:
                bigger = sub.add(line)
                if bigger.dim == sub.dim or bigger.key() in seen:
                    continue
                seen[bigger.key()] = bigger
                grown.append(bigger)
        frontier = grown
    out = [s for s in seen.values() if s.dim < n]
    out.sort(key=lambda s: (s.dim, s.key()))
    return out


def min_partition_size(
    p: int, n: int, budget: int = DEFAULT_SEARCH_BUDGET
) -> PartitionSearch:
    """Exact minimum part count over all partitions of GF(p)^n, by
    backtracking over subspaces with a node budget.

    Completeness: the search always extends by a subspace containing the
    least uncovered vector; any partition contains exactly one such part, so
    every partition appears along exactly one branch.
    """
    check_prime(p)
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise DomainError("the search needs ambient dimension at least 2")
    if p**n > MAX_SEARCH_ORDER:
        raise DomainError(
            f"search supports orders up to {MAX_SEARCH_ORDER}, got {p**n}"
        )
    if budget < 1:
        raise DomainError("node budget must be positive")

    vec_index = {
        tuple(int(c) for c in v): i
        for i, v in enumerate(enumerate_nonzero_vectors(p, n))
    }
    nvecs = len(vec_index)
    full_mask = (1 << nvecs) - 1

    candidates = _proper_subspaces(p, n)
    masks = []
    for sub in candidates:
        m = 0
        for v in sub.enumerate():
            key = tuple(int(c) for c in v)
            if key in vec_index:
                m |= 1 << vec_index[key]
        masks.append(m)
    by_bit: list[list[int]] = [[] for _ in range(nvecs)]
    for ci, m in enumerate(masks):
        for b in range(nvecs):
            if m >> b & 1:
                by_bit[b].append(ci)

    # the all-lines partition is always valid: start from it
    line_ids = [i for i, s in enumerate(candidates) if s.dim == 1]
    best_k = len(line_ids)
    best = list(line_ids)
    max_cover = p ** (n - 1) - 1
    nodes = 0

    def descend(covered: int, chosen: list[int]) -> None:
        nonlocal nodes, best_k, best
        nodes += 1
        if nodes > budget:
            raise ResourceError(
                f"partition search exceeded its node budget of {budget}"
            )
        if covered == full_mask:
            if len(chosen) < best_k:
                best_k = len(chosen)
                best = list(chosen)
            return
        remaining = nvecs - covered.bit_count()
        floor = len(chosen) + -(-remaining // max_cover)
        if floor >= best_k:
            return
        uncovered = ~covered & full_mask
        least = (uncovered & -uncovered).bit_length() - 1
        for ci in by_bit[least]:
            if masks[ci] & covered:
                continue
            chosen.append(ci)
            descend(covered | masks[ci], chosen)
            chosen.pop()

    descend(0, [])

    witness = PartitionInstance(p, n, tuple(candidates[i] for i in best))
    report = verify_partition(witness)
    if not report.valid or report.k != best_k:
        raise InternalInconsistencyError("search produced an invalid witness")
    if not _bound_met(best_k, p, n):
        raise InternalInconsistencyError(
            f"search minimum {best_k} violates the proven parity bound"
        )
    return PartitionSearch(best_k, witness, nodes)
