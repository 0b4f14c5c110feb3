"""Brute-force oracles used by the test suite.

Everything here works by explicit enumeration over group elements, never
through the subgroup / series / strata machinery under test.  Keep the
groups fed to these helpers small.
"""

import numpy as np

from caminagroups.pcgroup import PcGroup, serialize


def d8():
    # dihedral of order 8: gen 1 reflection, gen 2 rotation, gen 3 = rotation^2
    return PcGroup(2, 3, pow_tails={2: [(3, 1)]}, conj_tails={(2, 1): [(3, 1)]})


def d16():
    return PcGroup(
        2,
        4,
        pow_tails={2: [(3, 1)], 3: [(4, 1)]},
        conj_tails={(2, 1): [(3, 1), (4, 1)], (3, 1): [(4, 1)]},
    )


def d32():
    return PcGroup(
        2,
        5,
        pow_tails={2: [(3, 1)], 3: [(4, 1)], 4: [(5, 1)]},
        conj_tails={
            (2, 1): [(3, 1), (4, 1), (5, 1)],
            (3, 1): [(4, 1), (5, 1)],
            (4, 1): [(5, 1)],
        },
    )


def c8():
    return PcGroup(2, 3, pow_tails={1: [(2, 1)], 2: [(3, 1)]})


def extraspecial(p):
    # Heisenberg group of order p^3
    return PcGroup(p, 3, conj_tails={(2, 1): [(3, p - 1)]})


def extraspecial3():
    return extraspecial(3)


def big_exponent_probe():
    # class 3, generators of order 3, order 3^8: too big to enumerate
    return PcGroup(
        3,
        8,
        conj_tails={(2, 1): [(3, 1)], (3, 1): [(4, 1)]},
    )


def class3_81():
    # 3-group of order 81 and nilpotence class 3
    return PcGroup(
        3,
        4,
        conj_tails={(2, 1): [(3, 1)], (3, 1): [(4, 1)]},
    )


def extraspecial_243():
    # extraspecial of order 3^5: two commuting planes sharing one center
    return PcGroup(3, 5, conj_tails={(2, 1): [(5, 1)], (4, 3): [(5, 1)]})


def class2_243():
    # class 2, center equals the rank-2 derived subgroup, exponent 3
    return PcGroup(3, 5, conj_tails={(2, 1): [(4, 1)], (3, 1): [(5, 1)]})


def elements(group):
    return list(group.enumerate_elements())


def keyset(group, vectors):
    return {group.as_key(v) for v in vectors}


def closure(group, gens):
    """Set of all products of the given elements, grown breadth-first."""
    gens = [group.coerce(g) for g in gens]
    seen = {group.as_key(group.identity())}
    frontier = [group.identity()]
    while frontier:
        nxt = []
        for u in frontier:
            for g in gens:
                w = group.multiply(u, g)
                k = group.as_key(w)
                if k not in seen:
                    seen.add(k)
                    nxt.append(w)
        frontier = nxt
    return seen


def center(group):
    gens = group.gens()
    return {
        group.as_key(v)
        for v in elements(group)
        if all(group.is_identity(group.commutator(v, g)) for g in gens)
    }


def centralizer(group, g):
    g = group.coerce(g)
    return {
        group.as_key(v)
        for v in elements(group)
        if group.is_identity(group.commutator(v, g))
    }


_derived_memo: dict[str, set] = {}


def derived(group):
    # all pairs on purpose; memoized because several oracles start here
    key = serialize(group)
    if key not in _derived_memo:
        elts = elements(group)
        comms = [group.commutator(a, b) for a in elts for b in elts]
        _derived_memo[key] = closure(group, comms)
    return _derived_memo[key]


def lower_central(group):
    """Element-key sets [G, gamma_2, ...], excluding the trivial term."""
    series = [keyset(group, elements(group))]
    gens = group.gens()
    while True:
        current = [np.array(k, dtype=np.int64) for k in series[-1]]
        comms = [group.commutator(u, g) for u in current for g in gens]
        nxt = closure(group, comms)
        if nxt == {group.as_key(group.identity())}:
            return series
        series.append(nxt)


def upper_central(group):
    """Element-key sets [Z_1, Z_2, ..., G]."""
    gens = group.gens()
    series = [center(group)]
    while len(series[-1]) < group.order():
        prev = series[-1]
        series.append(
            {
                group.as_key(v)
                for v in elements(group)
                if all(group.as_key(group.commutator(v, g)) in prev for g in gens)
            }
        )
    return series


def conjugacy_class(group, g):
    g = group.coerce(g)
    out = set()
    for x in elements(group):
        ix = group.inverse(x)
        out.add(group.as_key(group.multiply_all([ix, g, x])))
    return out


def has_exponent_p(group):
    return all(
        group.is_identity(group.power(v, group.p)) for v in elements(group)
    )


def subgroup_keys(sub):
    return keyset(sub.group, list(sub.enumerate()))


def m27():
    # extraspecial of order 27 and exponent 9
    return PcGroup(3, 3, pow_tails={1: [(3, 1)]}, conj_tails={(2, 1): [(3, 2)]})


def frattini(group):
    dvecs = [np.array(k, dtype=np.int64) for k in derived(group)]
    powers = [group.power(v, group.p) for v in elements(group)]
    return closure(group, dvecs + powers)


def coarse_centralizer(group, a):
    """Keys of {x : [a, x] in the third lower-central term}."""
    series = lower_central(group)
    if len(series) >= 3:
        bottom = series[2]
    else:
        bottom = {group.as_key(group.identity())}
    a = group.coerce(a)
    return {
        group.as_key(x)
        for x in elements(group)
        if group.as_key(group.commutator(a, x)) in bottom
    }


def derived_centralizer(group):
    dvecs = [np.array(k, dtype=np.int64) for k in derived(group)]
    return {
        group.as_key(x)
        for x in elements(group)
        if all(group.is_identity(group.commutator(w, x)) for w in dvecs)
    }


def camina(group):
    """Every conjugacy class outside the derived set is a full coset."""
    der = derived(group)
    dvecs = [np.array(k, dtype=np.int64) for k in der]
    seen = set()
    for x in elements(group):
        xk = group.as_key(x)
        if xk in der or xk in seen:
            continue
        coset = {group.as_key(group.multiply(x, d)) for d in dvecs}
        seen |= coset
        # one representative settles the coset: a full class absorbs it
        if conjugacy_class(group, x) != coset:
            return False
    return True


def is_vz(group):
    der = derived(group)
    zc = center(group)
    for x in elements(group):
        if group.as_key(x) in zc:
            continue
        if len(conjugacy_class(group, x)) != len(der):
            return False
    return True


def maximal_central_subgroups(group):
    """Every index-p subgroup of the center, as key sets."""
    import itertools

    zc = center(group)
    target = len(zc) // group.p
    vecs = [np.array(k, dtype=np.int64) for k in sorted(zc)]
    found = {}
    for r in range(1, 4):
        for combo in itertools.combinations(vecs, r):
            sub = closure(group, list(combo))
            if len(sub) == target:
                found[frozenset(sub)] = sub
    # self-check the count against the rank of the elementary quotient
    powers = closure(group, [group.power(v, group.p) for v in vecs])
    d = 0
    q = len(zc) // len(powers)
    while q > 1:
        q //= group.p
        d += 1
    expected = (group.p**d - 1) // (group.p - 1)
    assert len(found) == expected, (len(found), expected)
    return list(found.values())


def special_class(group):
    """Definitional route on key sets: all center quotients extraspecial."""
    der = derived(group)
    if len(der) == 1 or len(der) == group.order():
        return "none"
    dvecs = [np.array(k, dtype=np.int64) for k in der]
    if not all(
        group.is_identity(group.commutator(w, g))
        for w in dvecs
        for g in group.gens()
    ):
        return "none"  # class exceeds 2
    for nset in maximal_central_subgroups(group):
        if not _quotient_extraspecial(group, nset, dvecs):
            return "none"
    return "ultraspecial" if group.order() == len(der) ** 3 else "semiextraspecial"


def _quotient_extraspecial(group, nset, dvecs):
    p = group.p
    elts = elements(group)
    gens = group.gens()
    nvecs = [np.array(k, dtype=np.int64) for k in nset]
    zn = {
        group.as_key(x)
        for x in elts
        if all(group.as_key(group.commutator(x, g)) in nset for g in gens)
    }
    if len(zn) != p * len(nset):
        return False
    dn = closure(group, dvecs + nvecs)
    if dn != zn:
        return False
    fn = closure(group, dvecs + nvecs + [group.power(x, p) for x in elts])
    return fn == zn
