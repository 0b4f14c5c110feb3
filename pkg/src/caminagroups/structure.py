"""Subgroups, central series, and coordinate strata of a pc group.

Subgroups are held as induced generating sequences: triangular rows with
distinct leading coordinates, leading coefficient 1, and every row reduced at
the other rows' leads.  That canonical shape makes subgroup equality a row
comparison and membership a sift.

The second half of the module sets up GF(p) coordinates on the three layers
G/G', G'/G_3, G_3 of a group of nilpotence class at most 3, together with the
two bilinear maps induced by commutation.  Everything downstream (Camina
verdicts, centralizer families) runs on these coordinates, and the
construction cross-checks itself against genuine collected commutators.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable, Iterator

import numpy as np

from .errors import (
    ClassError,
    InternalInconsistencyError,
    InvariantError,
    ResourceError,
    ShapeError,
)
from .gfp import Subspace, inv_mod, nullspace
from .pcgroup import PcGroup, quotient_by_central

BRUTE_LIMIT = 3**7


def _cached(group: PcGroup, key: str, build: Callable):
    if key not in group._cache:
        group._cache[key] = build()
    return group._cache[key]


def _first_nonzero(v) -> int:
    for i, x in enumerate(v):
        if x:
            return i
    return -1


class Subgroup:
    """Subgroup of a PcGroup in canonical triangular form."""

    def __init__(self, group: PcGroup, rows: dict[int, np.ndarray]):
        self.group = group
        self.rows = dict(sorted(rows.items()))
        self._invs: dict[int, list[np.ndarray]] = {}

    # construction ---------------------------------------------------------

    @classmethod
    def trivial(cls, group: PcGroup) -> "Subgroup":
        return cls(group, {})

    @classmethod
    def from_rows(cls, group: PcGroup, vectors: Iterable) -> "Subgroup":
        """Wrap rows that are already known to be closed.

        The caller vouches for closure (typically the rows are a layered
        preimage under a homomorphism, where closure holds structurally).
        Only the triangular shape is checked here; sifting against such rows
        is exact whenever the closure claim is true.
        """
        rows: dict[int, np.ndarray] = {}
        for v in vectors:
            v = group.coerce(v)
            lead = _first_nonzero(v)
            if lead < 0:
                continue
            if lead in rows:
                raise ShapeError("from_rows needs distinct leading coordinates")
            if int(v[lead]) != 1:
                v = group.power(v, inv_mod(int(v[lead]), group.p))
            rows[lead] = v
        return cls(group, rows)

    @classmethod
    def full(cls, group: PcGroup) -> "Subgroup":
        return cls.from_generators(group, group.gens())

    @classmethod
    def from_generators(
        cls, group: PcGroup, vectors: Iterable, conjugators: Iterable = ()
    ) -> "Subgroup":
        """Close the generators into an igs.

        The worklist keeps the rows closed under p-th powers and mutual
        conjugation (so sifting decides membership exactly), and additionally
        under conjugation by every element of `conjugators`.
        """
        p = group.p
        conjugators = [group.coerce(c) for c in conjugators]
        rows: dict[int, np.ndarray] = {}
        invs: dict[int, list[np.ndarray]] = {}

        def inv_pow(lead: int, c: int) -> np.ndarray:
            cache = invs.get(lead)
            if cache is None:
                r_inv = group.inverse(rows[lead])
                cache = [None, r_inv]  # type: ignore[list-item]
                for _ in range(p - 2):
                    cache.append(group.multiply(cache[-1], r_inv))
                invs[lead] = cache
            return cache[c]

        def sift(v: np.ndarray) -> np.ndarray:
            while v.any():
                lead = _first_nonzero(v)
                if lead not in rows:
                    return v
                v = group.multiply(inv_pow(lead, int(v[lead])), v)
            return v

        work = [group.coerce(v) for v in vectors]
        while work:
            v = sift(work.pop())
            if not v.any():
                continue
            lead = _first_nonzero(v)
            v = group.power(v, inv_mod(int(v[lead]), p))
            others = list(rows.values())
            rows[lead] = v
            work.append(group.power(v, p))
            iv = group.inverse(v)
            for s in others:
                work.append(group.conjugate(s, v, iv=iv))
                work.append(group.conjugate(v, s))
            for c in conjugators:
                work.append(group.conjugate(v, c))

        # reduce each row at the other leads, highest lead first so the rows
        # used for reduction are already final
        leads = sorted(rows, reverse=True)
        final_invs: dict[int, list[np.ndarray]] = {}

        def final_inv_pow(lead: int, c: int) -> np.ndarray:
            cache = final_invs.get(lead)
            if cache is None:
                r_inv = group.inverse(rows[lead])
                cache = [None, r_inv]  # type: ignore[list-item]
                for _ in range(p - 2):
                    cache.append(group.multiply(cache[-1], r_inv))
                final_invs[lead] = cache
            return cache[c]

        for lead in leads:
            row = rows[lead]
            for m in sorted(l for l in rows if l > lead):
                c = int(row[m])
                if c:
                    row = group.multiply(row, final_inv_pow(m, c))
            rows[lead] = row

        sub = cls(group, rows)
        sub._verify()
        return sub

    def _verify(self) -> None:
        """Closure sanity: powers and mutual conjugates sift to the identity."""
        for r in self.rows.values():
            if self.sift(self.group.power(r, self.group.p)).any():
                raise InternalInconsistencyError("row power escapes the subgroup")
        items = list(self.rows.values())
        for a in items:
            for b in items:
                if self.sift(self.group.conjugate(a, b)).any():
                    raise InternalInconsistencyError("row conjugate escapes the subgroup")

    # basics ---------------------------------------------------------------

    @property
    def leads(self) -> list[int]:
        return list(self.rows)

    def num_rows(self) -> int:
        return len(self.rows)

    def order(self) -> int:
        return self.group.p ** len(self.rows)

    def key(self) -> bytes:
        if not self.rows:
            return b""
        return np.vstack(list(self.rows.values())).tobytes()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and self.group == other.group
            and self.leads == other.leads
            and all(np.array_equal(self.rows[l], other.rows[l]) for l in self.rows)
        )

    def __hash__(self):
        return hash((self.group, tuple(self.leads), self.key()))

    def __repr__(self):
        return f"Subgroup(order={self.group.p}^{len(self.rows)} of {self.group!r})"

    def _inv_pow(self, lead: int, c: int) -> np.ndarray:
        cache = self._invs.get(lead)
        if cache is None:
            r_inv = self.group.inverse(self.rows[lead])
            cache = [None, r_inv]  # type: ignore[list-item]
            for _ in range(self.group.p - 2):
                cache.append(self.group.multiply(cache[-1], r_inv))
            self._invs[lead] = cache
        return cache[c]

    def sift(self, v) -> np.ndarray:
        """Left-divide by rows in ascending lead order; zero residue = member."""
        v = self.group.coerce(v)
        while v.any():
            lead = _first_nonzero(v)
            if lead not in self.rows:
                return v
            v = self.group.multiply(self._inv_pow(lead, int(v[lead])), v)
        return v

    def sift_with_coefficients(self, v):
        """Returns ({lead: coefficient}, residue) with v = prod rows^coeff * residue."""
        v = self.group.coerce(v)
        coeffs: dict[int, int] = {}
        while v.any():
            lead = _first_nonzero(v)
            if lead not in self.rows:
                break
            c = int(v[lead])
            coeffs[lead] = c
            v = self.group.multiply(self._inv_pow(lead, c), v)
        return coeffs, v

    def contains(self, v) -> bool:
        return not self.sift(v).any()

    def contains_subgroup(self, other: "Subgroup") -> bool:
        return all(self.contains(r) for r in other.rows.values())

    def index_in(self, other: "Subgroup") -> int:
        if not other.contains_subgroup(self):
            raise ShapeError("index_in requires containment")
        return other.order() // self.order()

    def equals_as_set(self, other: "Subgroup") -> bool:
        """Same subgroup regardless of row normalization."""
        return (
            self.group == other.group
            and len(self.rows) == len(other.rows)
            and self.contains_subgroup(other)
        )

    # properties -----------------------------------------------------------

    def is_trivial(self) -> bool:
        return not self.rows

    def is_abelian(self) -> bool:
        items = list(self.rows.values())
        for i, a in enumerate(items):
            for b in items[i + 1 :]:
                if not self.group.is_identity(self.group.commutator(a, b)):
                    return False
        return True

    def is_central(self) -> bool:
        return all(
            self.group.is_identity(self.group.commutator(r, g))
            for r in self.rows.values()
            for g in self.group.gens()
        )

    def is_elementary_abelian(self) -> bool:
        return self.is_abelian() and all(
            self.group.is_identity(self.group.power(r, self.group.p))
            for r in self.rows.values()
        )

    def is_normal(self, conjugators: Iterable | None = None) -> bool:
        if conjugators is None:
            conjugators = self.group.gens()
        return all(
            self.contains(self.group.conjugate(r, c))
            for r in self.rows.values()
            for c in conjugators
        )

    # enumeration ----------------------------------------------------------

    def enumerate(self) -> Iterator[np.ndarray]:
        """All members, ascending-lead staircase products, coefficients lex."""
        items = [self.rows[l] for l in self.leads]
        for coeffs in itertools.product(range(self.group.p), repeat=len(items)):
            v = self.group.identity()
            for c, r in zip(coeffs, items):
                if c:
                    v = self.group.multiply(v, self.group.power(r, c))
            yield v

    def random_element(self, rng: np.random.Generator) -> np.ndarray:
        v = self.group.identity()
        for r in self.rows.values():
            c = int(rng.integers(0, self.group.p))
            if c:
                v = self.group.multiply(v, self.group.power(r, c))
        return v

    def coset_reps(self, sub: "Subgroup") -> Iterator[np.ndarray]:
        """Transversal of a NORMAL subgroup `sub` inside self: every element
        is uniquely rep * s with s in sub."""
        if not self.contains_subgroup(sub):
            raise ShapeError("coset_reps requires sub <= self")
        if not all(
            sub.contains(self.group.conjugate(s, r))
            for s in sub.rows.values()
            for r in self.rows.values()
        ):
            raise ShapeError("coset_reps requires sub normal in self")
        free = [self.rows[l] for l in self.leads if l not in sub.rows]
        for coeffs in itertools.product(range(self.group.p), repeat=len(free)):
            v = self.group.identity()
            for c, r in zip(coeffs, free):
                if c:
                    v = self.group.multiply(v, self.group.power(r, c))
            yield v


# ---------------------------------------------------------------------------
# derived and central series


def commutator_subgroup(
    group: PcGroup,
    left: Iterable,
    right: Iterable,
    conjugators: Iterable | None = None,
) -> Subgroup:
    """Subgroup generated by [a, b] over the two generator lists, closed under
    the given conjugators.  Defaults to closing under the generator lists
    themselves, which is correct when they generate the two subgroups."""
    left = [group.coerce(a) for a in left]
    right = [group.coerce(b) for b in right]
    if conjugators is None:
        conjugators = left + right
    gens = []
    for a in left:
        ia = group.inverse(a)
        for b in right:
            gens.append(group.commutator(a, b, iu=ia))
    return Subgroup.from_generators(group, gens, conjugators=conjugators)


def derived_subgroup(group: PcGroup) -> Subgroup:
    def build():
        gens = group.gens()
        pairs = [(gens[i], gens[j]) for i in range(len(gens)) for j in range(i + 1, len(gens))]
        comms = [group.commutator(a, b) for a, b in pairs]
        return Subgroup.from_generators(group, comms, conjugators=gens)

    return _cached(group, "derived", build)


def lower_central_series(group: PcGroup) -> list[Subgroup]:
    """[G, [G,G], [[G,G],G], ...] down to (but excluding) the trivial term."""

    def build():
        series = [Subgroup.full(group)]
        gens = group.gens()
        while True:
            current = series[-1]
            nxt = (
                derived_subgroup(group)
                if len(series) == 1
                else commutator_subgroup(
                    group, list(current.rows.values()), gens, conjugators=gens
                )
            )
            if nxt.is_trivial():
                return series
            if nxt.order() >= current.order():
                raise InternalInconsistencyError("lower central series fails to shrink")
            series.append(nxt)

    return _cached(group, "lcs", build)


def nilpotency_class(group: PcGroup) -> int:
    # the series excludes its trivial tail, so its length is the class
    return len(lower_central_series(group))


def center(group: PcGroup) -> Subgroup:
    """Peel one central order-p element at a time and recurse on the quotient.

    With G/<z> handled recursively, the center of G is the kernel of the
    commutation maps from the preimage of Z(G/<z>) into <z>, which is a
    GF(p)-linear problem because each map lands in a group of order p.
    """

    def build():
        if not group.conj_tails:
            return Subgroup.full(group)
        last = lower_central_series(group)[-1]
        row = next(iter(last.rows.values()))
        z = group.power(row, group.element_order(row) // group.p)
        quotient, project, lift, kept = quotient_by_central(group, [z])
        zq = center(quotient)
        p1 = Subgroup.from_generators(
            group, [lift(r) for r in zq.rows.values()] + [z]
        )
        zlead = _first_nonzero(z)
        zinv = inv_mod(int(z[zlead]), group.p)
        p1_rows = [p1.rows[l] for l in p1.leads]
        mat = np.zeros((group.ngens, len(p1_rows)), dtype=np.int64)
        for gi, g in enumerate(group.gens()):
            for col, r in enumerate(p1_rows):
                c = group.commutator(r, g)
                if group.is_identity(c):
                    continue
                k = (int(c[zlead]) * zinv) % group.p
                if not np.array_equal(c, group.power(z, k)):
                    raise InternalInconsistencyError(
                        "commutator of the center preimage left the central line"
                    )
                mat[gi, col] = k
        kernel = nullspace(mat, group.p)
        # z itself must be listed: the kernel combinations alone generate a
        # subgroup that covers the center only modulo <z>
        gens = [z]
        for coeffs in kernel:
            v = group.identity()
            for c, r in zip(coeffs, p1_rows):
                if c:
                    v = group.multiply(v, group.power(r, int(c)))
            gens.append(v)
        result = Subgroup.from_generators(group, gens)
        if not result.is_central():
            raise InternalInconsistencyError("computed center is not central")
        return result

    return _cached(group, "center", build)


def upper_central_series(group: PcGroup) -> list[Subgroup]:
    """[Z_1, Z_2, ..., G].  Built from iterated central quotients."""

    def build():
        out: list[Subgroup] = []
        lifts: list[Callable] = []
        current = group
        accumulated: list[np.ndarray] = []

        def pull_back(v):
            for lift in reversed(lifts):
                v = lift(v)
            return v

        while True:
            zq = center(current)
            if zq.is_trivial():
                raise InternalInconsistencyError("p-group quotient with trivial center")
            accumulated = accumulated + [pull_back(r) for r in zq.rows.values()]
            zk = Subgroup.from_generators(group, accumulated)
            out.append(zk)
            if zk.order() == group.order():
                return out
            nxt, project, lift, kept = quotient_by_central(current, list(zq.rows.values()))
            lifts.append(lift)
            current = nxt

    return _cached(group, "ucs", build)


def has_exponent_p(group: PcGroup) -> bool:
    """Whether every element has order dividing p.

    For odd p and class at most 2 it is enough that the generators do; in the
    remaining cases fall back to full enumeration when the group is small.
    """
    p = group.p
    gens_ok = all(group.is_identity(group.power(g, p)) for g in group.gens())
    if not gens_ok:
        return False
    if p > 2 and nilpotency_class(group) <= 2:
        return True
    if p == 2:
        # exponent 2 forces abelian; with abelian, generator orders suffice
        return not group.conj_tails or all(
            group.is_identity(group.commutator(a, b))
            for a in group.gens()
            for b in group.gens()
        )
    if group.order() <= BRUTE_LIMIT:
        return all(group.is_identity(group.power(v, p)) for v in group.enumerate_elements())
    raise ResourceError(
        f"exponent check for class > 2 needs enumeration; order {group.order()} too large"
    )


def conjugacy_class(group: PcGroup, g, limit: int | None = None) -> set[tuple[int, ...]]:
    """Orbit of g under conjugation, as normal-form keys.  Stops early past `limit`."""
    g = group.coerce(g)
    gens = group.gens()
    invs = [group.gen_inverse(i) for i in range(1, group.ngens + 1)]
    seen = {group.as_key(g)}
    frontier = [g]
    while frontier:
        nxt = []
        for u in frontier:
            for x, ix in zip(gens, invs):
                w = group.conjugate(u, x, iv=ix)
                k = group.as_key(w)
                if k not in seen:
                    seen.add(k)
                    nxt.append(w)
                    if limit is not None and len(seen) > limit:
                        return seen
        frontier = nxt
    return seen


# ---------------------------------------------------------------------------
# strata and commutator forms for class <= 3


class Strata:
    """GF(p) coordinates on the three layers of a class <= 3 group.

    top space: G modulo the derived subgroup (dimension nv)
    middle space: derived subgroup modulo the third lower central term (nw)
    bottom space: the third lower central term itself (nt, zero for class 2)

    Commutation induces an alternating bilinear map top x top -> middle
    (tensor B, shape (nv, nv, nw)) and a bilinear map middle x top -> bottom
    (tensor C, shape (nw, nv, nt)).  Both tensors are built from genuinely
    collected commutators and rechecked against random perturbations.
    """

    def __init__(self, group: PcGroup):
        self.group = group
        cls = nilpotency_class(group)
        if cls > 3:
            raise ClassError(f"strata support nilpotence class <= 3, got {cls}")
        self.nilpotency_class = cls
        lcs = lower_central_series(group)
        self.derived = lcs[1] if cls >= 2 else Subgroup.trivial(group)
        self.bottom = lcs[2] if cls >= 3 else Subgroup.trivial(group)
        p = group.p

        for g in group.gens():
            if not self.derived.contains(group.power(g, p)):
                raise InvariantError(
                    "quotient by the derived subgroup is not elementary abelian"
                )
        for r in self.derived.rows.values():
            if not self.bottom.contains(group.power(r, p)):
                raise InvariantError(
                    "derived subgroup modulo the bottom layer is not elementary abelian"
                )
            for s in self.derived.rows.values():
                if not self.bottom.contains(group.commutator(r, s)):
                    raise InternalInconsistencyError(
                        "derived subgroup is not abelian modulo the bottom layer"
                    )
        if not self.bottom.is_trivial():
            if not self.bottom.is_central():
                raise InternalInconsistencyError("bottom layer is not central")
            if not self.bottom.is_elementary_abelian():
                raise InvariantError("bottom layer is not elementary abelian")

        self.kept = [i for i in range(group.ngens) if i not in self.derived.rows]
        self.wleads = [l for l in self.derived.leads if l not in self.bottom.rows]
        self.tleads = self.bottom.leads
        self.nv = len(self.kept)
        self.nw = len(self.wleads)
        self.nt = len(self.tleads)

        self._build_forms()
        self._spot_check()

    # coordinates ----------------------------------------------------------

    def vcoords(self, u) -> np.ndarray:
        rho = self.derived.sift(u)
        return np.array([int(rho[i]) for i in self.kept], dtype=np.int64)

    def vlift(self, a) -> np.ndarray:
        v = self.group.identity()
        for pos, i in enumerate(self.kept):
            v[i] = int(a[pos]) % self.group.p
        return v

    def wcoords(self, u) -> np.ndarray:
        coeffs, residue = self.derived.sift_with_coefficients(u)
        if residue.any():
            raise ShapeError("element is not in the derived subgroup")
        return np.array([coeffs.get(l, 0) for l in self.wleads], dtype=np.int64)

    def wlift(self, b) -> np.ndarray:
        v = self.group.identity()
        for c, l in zip(b, self.wleads):
            if int(c) % self.group.p:
                v = self.group.multiply(
                    v, self.group.power(self.derived.rows[l], int(c) % self.group.p)
                )
        return v

    def tcoords(self, u) -> np.ndarray:
        coeffs, residue = self.bottom.sift_with_coefficients(u)
        if residue.any():
            raise ShapeError("element is not in the bottom layer")
        return np.array([coeffs.get(l, 0) for l in self.tleads], dtype=np.int64)

    def tlift(self, t) -> np.ndarray:
        v = self.group.identity()
        for c, l in zip(t, self.tleads):
            if int(c) % self.group.p:
                v = self.group.multiply(
                    v, self.group.power(self.bottom.rows[l], int(c) % self.group.p)
                )
        return v

    # forms ----------------------------------------------------------------

    def _build_forms(self) -> None:
        p = self.group.p
        nv, nw, nt = self.nv, self.nw, self.nt
        basis = [self.group.gen(i + 1) for i in self.kept]
        inv = [self.group.inverse(x) for x in basis]
        B = np.zeros((nv, nv, nw), dtype=np.int64)
        for i in range(nv):
            for j in range(nv):
                c = self.group.commutator(basis[i], basis[j], iu=inv[i], iv=inv[j])
                B[i, j] = self.wcoords(c)
        if np.any(B[np.arange(nv), np.arange(nv)]):
            raise InternalInconsistencyError("commutator form has a nonzero diagonal")
        if np.any((B + B.transpose(1, 0, 2)) % p):
            raise InternalInconsistencyError("commutator form is not alternating")
        self.B = B
        C = np.zeros((nw, nv, nt), dtype=np.int64)
        for k, l in enumerate(self.wleads):
            w = self.derived.rows[l]
            iw = self.group.inverse(w)
            for j in range(nv):
                C[k, j] = self.tcoords(
                    self.group.commutator(w, basis[j], iu=iw, iv=inv[j])
                )
        self.C = C

    def _spot_check(self, count: int = 40) -> None:
        """Perturb form arguments by derived/bottom elements; the coordinate
        values must not move.  Guards against a class-3 assumption silently
        failing on exotic input."""
        rng = np.random.default_rng(0xC0FFEE)
        p = self.group.p
        for _ in range(count):
            i = int(rng.integers(self.nv)) if self.nv else 0
            j = int(rng.integers(self.nv)) if self.nv else 0
            if not self.nv:
                break
            a = self.group.gen(self.kept[i] + 1)
            b = self.group.gen(self.kept[j] + 1)
            da = self.derived.random_element(rng)
            db = self.derived.random_element(rng)
            got = self.wcoords(
                self.group.commutator(self.group.multiply(a, da), self.group.multiply(b, db))
            )
            if not np.array_equal(got, self.B[i, j]):
                raise InternalInconsistencyError(
                    "top form value moved under a derived-subgroup perturbation"
                )
            if self.nw and self.nt:
                k = int(rng.integers(self.nw))
                w = self.group.multiply(
                    self.derived.rows[self.wleads[k]], self.bottom.random_element(rng)
                )
                got_t = self.tcoords(self.group.commutator(w, self.group.multiply(b, db)))
                if not np.array_equal(got_t, self.C[k, j]):
                    raise InternalInconsistencyError(
                        "middle form value moved under a bottom-layer perturbation"
                    )

    def bmat(self, a) -> np.ndarray:
        """Matrix of [a, .] on top coordinates: rows indexed by the second
        argument, columns by middle coordinates."""
        a = np.mod(np.asarray(a, dtype=np.int64), self.group.p)
        return np.tensordot(a, self.B, axes=(0, 0)) % self.group.p

    def b_eval(self, a, b) -> np.ndarray:
        m = self.bmat(a)
        return (np.asarray(b, dtype=np.int64) @ m) % self.group.p

    def c_eval(self, w, a) -> np.ndarray:
        w = np.mod(np.asarray(w, dtype=np.int64), self.group.p)
        m = np.tensordot(w, self.C, axes=(0, 0)) % self.group.p  # (nv, nt)
        return (np.asarray(a, dtype=np.int64) @ m) % self.group.p

    def kernel_subspace(self, a) -> Subspace:
        """All top vectors x with B(a, x) = 0."""
        m = self.bmat(a)
        return Subspace(self.group.p, self.nv, nullspace(m.T, self.group.p))

    def brank(self, a) -> int:
        return self.nv - self.kernel_subspace(a).dim


def stratify(group: PcGroup) -> Strata:
    return _cached(group, "strata", lambda: Strata(group))
