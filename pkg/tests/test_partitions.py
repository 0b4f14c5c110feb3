"""Partition verification, the exhaustive minimum search, and the
annihilator duality with subgroup covers."""

import numpy as np
import pytest

from caminagroups.errors import DomainError, ResourceError
from caminagroups.gfp import FieldExt, Subspace, enumerate_vectors, span_of
from caminagroups.partitions import (
    DualCoverInstance,
    PartitionInstance,
    dual_cover_of_partition,
    min_partition_size,
    parity_bound,
    partition_of_dual_cover,
    verify_dual_cover,
    verify_partition,
)


def lines(p, n):
    """Every 1-dimensional subspace of GF(p)^n."""
    out = []
    seen = set()
    for v in enumerate_vectors(p, n):
        if not v.any():
            continue
        sub = span_of([v], p, n)
        if sub.key() not in seen:
            seen.add(sub.key())
            out.append(sub)
    return out


def field_spread(p, l):
    """Partition of GF(p)^(2l) into the p^l + 1 lines of the plane over the
    degree-l extension field, each read as an l-dimensional subspace."""
    field = FieldExt(p, l)
    scalars = [np.array(c, dtype=np.int64) for c in enumerate_vectors(p, l)]
    zero = np.zeros(l, dtype=np.int64)
    reps = [(field.one(), t) for t in scalars] + [(zero, field.one())]
    parts = []
    for u, w in reps:
        vecs = [
            np.concatenate([field.multiply(c, u), field.multiply(c, w)])
            for c in scalars
        ]
        parts.append(span_of(vecs, p, 2 * l))
    return PartitionInstance(p, 2 * l, tuple(parts))


# -- parity bound ------------------------------------------------------------


def test_parity_bound_values():
    assert parity_bound(3, 2) == (4, False)
    assert parity_bound(2, 4) == (5, False)
    assert parity_bound(2, 3) == (3, True)
    assert parity_bound(3, 13) == (3**6 + 1, True)


# -- verify_partition --------------------------------------------------------


def test_lines_of_gf3_squared_partition():
    inst = PartitionInstance(3, 2, lines(3, 2))
    report = verify_partition(inst)
    assert report.valid
    assert report.k == 4
    assert report.bound_ok
    assert report.equality_case is True
    assert all(part.order() == 3 for part in inst.parts)


def test_missing_line_fails_coverage():
    inst = PartitionInstance(3, 2, lines(3, 2)[:3])
    report = verify_partition(inst)
    assert not report.valid
    assert "uncovered" in report.reason
    assert not report.bound_ok
    assert report.equality_case is None


def test_overlapping_parts_fail():
    plane = span_of([[1, 0, 0], [0, 1, 0]], 2, 3)
    inside = span_of([[1, 0, 0]], 2, 3)
    outside = span_of([[0, 0, 1]], 2, 3)
    report = verify_partition(PartitionInstance(2, 3, (plane, inside, outside)))
    assert not report.valid
    assert "intersect" in report.reason


def test_improper_parts_fail():
    whole = Subspace.full(3, 2)
    report = verify_partition(PartitionInstance(3, 2, (whole,)))
    assert not report.valid
    assert "whole group" in report.reason
    trivial = Subspace(3, 2)
    report = verify_partition(PartitionInstance(3, 2, (trivial,)))
    assert not report.valid
    assert "trivial" in report.reason


def test_instance_shape_errors():
    with pytest.raises(DomainError):
        PartitionInstance(4, 2, lines(2, 2))
    with pytest.raises(DomainError):
        PartitionInstance(2, 3, lines(2, 2))
    with pytest.raises(DomainError):
        PartitionInstance(2, 0, ())


def test_field_spread_of_gf4_plane():
    inst = field_spread(2, 2)
    report = verify_partition(inst)
    assert report.valid
    assert report.k == 5
    assert report.bound_ok
    assert report.equality_case is True
    assert all(part.order() == 4 and part.dim == 2 for part in inst.parts)


def test_field_spread_degree_one_is_the_line_partition():
    inst = field_spread(3, 1)
    assert {part.key() for part in inst.parts} == {
        part.key() for part in lines(3, 2)
    }


def test_odd_dimension_has_no_equality_case():
    search = min_partition_size(2, 3)
    report = verify_partition(search.witness)
    assert report.valid
    assert report.equality_case is None
    assert report.bound_ok


# -- verify_dual_cover -------------------------------------------------------


def test_lines_of_gf3_squared_dual_cover():
    report = verify_dual_cover(DualCoverInstance(3, 2, lines(3, 2)))
    assert report.hypotheses_ok
    assert report.k == 4
    assert report.bound_ok


def test_dropping_a_subgroup_breaks_hyperplane_coverage():
    report = verify_dual_cover(DualCoverInstance(3, 2, lines(3, 2)[1:]))
    assert not report.hypotheses_ok
    assert "contains none" in report.reason


def test_small_pairwise_product_fails():
    subs = (span_of([[1, 0, 0]], 2, 3), span_of([[0, 1, 0]], 2, 3))
    report = verify_dual_cover(DualCoverInstance(2, 3, subs))
    assert not report.hypotheses_ok
    assert "generate" in report.reason


def test_dimension_one_is_vacuous():
    report = verify_dual_cover(DualCoverInstance(2, 1, ()))
    assert not report.hypotheses_ok
    assert report.k == 0


# -- annihilator duality -----------------------------------------------------


@pytest.mark.parametrize("p,n", [(2, 2), (3, 2), (2, 3), (2, 4)])
def test_duality_on_search_witnesses(p, n):
    witness = min_partition_size(p, n).witness
    dual = dual_cover_of_partition(witness)
    report = verify_dual_cover(dual)
    assert report.hypotheses_ok
    assert report.k == len(witness.parts)
    # the annihilator is involutive, so the round trip restores the parts
    back = partition_of_dual_cover(dual)
    assert {s.key() for s in back.parts} == {s.key() for s in witness.parts}
    assert verify_partition(back).valid


def test_duality_from_the_cover_side():
    cover = DualCoverInstance(2, 4, field_spread(2, 2).parts)
    assert verify_dual_cover(cover).hypotheses_ok
    part = partition_of_dual_cover(cover)
    report = verify_partition(part)
    assert report.valid
    assert report.k == 5


# -- min_partition_size ------------------------------------------------------


@pytest.mark.parametrize(
    "p,n,expected",
    [(2, 2, 3), (3, 2, 4), (2, 3, 5), (2, 4, 5), (3, 3, 10)],
)
def test_minimum_part_counts(p, n, expected):
    search = min_partition_size(p, n)
    assert search.k_min == expected
    report = verify_partition(search.witness)
    assert report.valid
    assert report.k == expected
    threshold, strict = parity_bound(p, n)
    assert search.k_min > threshold if strict else search.k_min >= threshold


def test_search_is_deterministic():
    one = min_partition_size(2, 4)
    two = min_partition_size(2, 4)
    assert one.nodes == two.nodes
    assert [s.key() for s in one.witness.parts] == [
        s.key() for s in two.witness.parts
    ]


def test_search_budget_exhaustion():
    with pytest.raises(ResourceError):
        min_partition_size(2, 4, budget=100)


def test_search_argument_validation():
    with pytest.raises(DomainError):
        min_partition_size(3, 5)
    with pytest.raises(DomainError):
        min_partition_size(2, 7)
    with pytest.raises(DomainError):
        min_partition_size(2, 1)
    with pytest.raises(DomainError):
        min_partition_size(6, 2)
    with pytest.raises(DomainError):
        min_partition_size(2, 4, budget=0)
