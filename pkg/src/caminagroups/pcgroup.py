"""Finite p-groups given by power-conjugate presentations.

A group of order p^n is described on generators x_1 .. x_n by relations

    x_i^p = T_i          (a word in generators with index > i)
    x_j^{x_i} = x_j T_ji (i < j, tail in generators with index > j)

where x^y means y^-1 x y.  Omitted relations have trivial tails.  Every
element then has a unique normal form x_1^{a_1} ... x_n^{a_n} with exponents
in [0, p), provided the presentation is consistent, which check_consistency
verifies through the standard overlap tests.  Elements are exponent vectors
(numpy int64, 0-indexed coordinate k for generator k+1).

Multiplication is collection from the left with memoized generator
conjugates, which is fast enough to enumerate cosets in groups of order 3^14.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    DomainError,
    DuplicateRelationError,
    InvariantError,
    NotCentralError,
    ParseError,
)
from .gfp import check_prime, inv_mod

MAX_NGENS = 64

Word = list[tuple[int, int]]  # [(generator index, exponent)], 1-based, ascending


def _validate_word(word: Iterable[tuple[int, int]], p: int, ngens: int, floor: int) -> Word:
    """Check a tail word: 1-based gens strictly ascending, all > floor, exps in [1, p)."""
    out: Word = []
    prev = floor
    for g, e in word:
        if not floor < g <= ngens:
            raise InvariantError(f"tail generator {g} out of range ({floor}, {ngens}]")
        if g <= prev:
            raise InvariantError(f"tail generators must be strictly ascending, got {g} after {prev}")
        if not 1 <= e < p:
            raise InvariantError(f"tail exponent {e} out of range [1, {p})")
        out.append((g, e))
        prev = g
    return out


class PcGroup:
    """A power-conjugate presentation together with its collector state.

    pow_tails maps i -> word for x_i^p; conj_tails maps (j, i) with i < j to
    the word T in x_j^{x_i} = x_j T.  Both omit trivial relations.
    """

    def __init__(
        self,
        p: int,
        ngens: int,
        pow_tails: dict[int, Word] | None = None,
        conj_tails: dict[tuple[int, int], Word] | None = None,
    ):
        check_prime(p)
        if not 1 <= ngens <= MAX_NGENS:
            raise DomainError(f"ngens {ngens} out of range 1..{MAX_NGENS}")
        self.p = p
        self.ngens = ngens
        self.pow_tails: dict[int, Word] = {}
        self.conj_tails: dict[tuple[int, int], Word] = {}
        for i, word in sorted((pow_tails or {}).items()):
            if not 1 <= i <= ngens:
                raise InvariantError(f"pow relation for generator {i} out of range")
            w = _validate_word(word, p, ngens, i)
            if w:
                self.pow_tails[i] = w
        for (j, i), word in sorted((conj_tails or {}).items()):
            if not 1 <= i < j <= ngens:
                raise InvariantError(f"conj relation ({j}, {i}) needs 1 <= i < j <= ngens")
            w = _validate_word(word, p, ngens, j)
            if w:
                self.conj_tails[(j, i)] = w
        # 0-based internal tables
        n = ngens
        self._pow = [None] * n  # type: list[Word | None]
        for i, w in self.pow_tails.items():
            self._pow[i - 1] = [(g - 1, e) for g, e in w]
        self._rel = {}  # (m, g) 0-based -> x_m^{x_g} as coordinate list
        for (j, i), w in self.conj_tails.items():
            vec = [0] * n
            vec[j - 1] = 1
            for g, e in w:
                vec[g - 1] = e
            self._rel[(j - 1, i - 1)] = vec
        self._conj_cache: dict[tuple[int, int, int], list[int]] = {}
        self._gen_inv: dict[int, np.ndarray] = {}
        self._cache: dict[str, object] = {}  # memoized structure results

    # -- basic elements ----------------------------------------------------

    def order(self) -> int:
        return self.p**self.ngens

    def identity(self) -> np.ndarray:
        return np.zeros(self.ngens, dtype=np.int64)

    def gen(self, i: int) -> np.ndarray:
        """Generator x_i, 1-based."""
        if not 1 <= i <= self.ngens:
            raise DomainError(f"generator index {i} out of range")
        v = self.identity()
        v[i - 1] = 1
        return v

    def gens(self) -> list[np.ndarray]:
        return [self.gen(i) for i in range(1, self.ngens + 1)]

    def coerce(self, u) -> np.ndarray:
        v = np.mod(np.asarray(u, dtype=np.int64), self.p)
        if v.shape != (self.ngens,):
            raise DomainError(f"element must have {self.ngens} coordinates, got shape {v.shape}")
        return v

    def is_identity(self, u) -> bool:
        return not np.asarray(u).any()

    @staticmethod
    def as_key(u) -> tuple[int, ...]:
        return tuple(int(x) for x in u)

    def random_element(self, rng: np.random.Generator) -> np.ndarray:
        return rng.integers(0, self.p, size=self.ngens).astype(np.int64)

    # -- collection --------------------------------------------------------

    def _conj_gen(self, m: int, g: int, e: int) -> list[int] | None:
        """x_m^{x_g^e} as a coordinate list, or None when they commute.

        0-based m > g, 1 <= e < p.  Cached.
        """
        base = self._rel.get((m, g))
        if base is None:
            return None
        if e == 1:
            return base
        key = (m, g, e)
        hit = self._conj_cache.get(key)
        if hit is not None:
            return hit
        # conjugate x_m^{x_g^(e-1)} once more by x_g, factor by factor
        prev = self._conj_gen(m, g, e - 1)
        acc = self._mul_list([0] * self.ngens, self._factor_seq(prev), conj_by=(g, 1))
        self._conj_cache[key] = acc
        return acc

    def _factor_seq(self, coords: Sequence[int]) -> list[tuple[int, int]]:
        return [(k, int(c)) for k, c in enumerate(coords) if c]

    def _mul_list(
        self,
        a: list[int],
        factors: list[tuple[int, int]],
        conj_by: tuple[int, int] | None = None,
    ) -> list[int]:
        """Collect a * prod(factors) in place, 0-based factor list, pop order = list order.

        When conj_by = (g, e) each factor (k, c) is first replaced by
        (x_k^{x_g^e})^c, which is how generator-conjugate vectors get built.
        """
        p = self.p
        n = self.ngens
        stack: list[tuple[int, int]] = list(reversed(factors))
        if conj_by is not None:
            g0, e0 = conj_by
            conj_stack: list[tuple[int, int]] = []
            for k, c in factors:
                w = self._conj_gen(k, g0, e0)
                if w is None:
                    conj_stack.append((k, c))
                else:
                    seq = self._factor_seq(w)
                    for _ in range(c):
                        conj_stack.extend(seq)
            stack = list(reversed(conj_stack))
        rel = self._rel
        pow_tails = self._pow
        while stack:
            g, e = stack.pop()
            c = a[g] + e
            if c >= p:
                q, r = divmod(c, p)
            else:
                q, r = 0, c
            suffix = [(m, a[m]) for m in range(g + 1, n) if a[m]]
            conj_needed = any((m, g) in rel for m, _ in suffix)
            a[g] = r
            if not suffix:
                if q and pow_tails[g]:
                    stack.extend(reversed(pow_tails[g] * q))
                continue
            if not conj_needed and not q:
                continue
            seq: list[tuple[int, int]] = []
            if q and pow_tails[g]:
                seq.extend(pow_tails[g] * q)
            if not conj_needed:
                seq.extend(suffix)
            else:
                for m, cm in suffix:
                    w = self._conj_gen(m, g, e)
                    if w is None:
                        seq.append((m, cm))
                    else:
                        wseq = self._factor_seq(w)
                        for _ in range(cm):
                            seq.extend(wseq)
            for m, _ in suffix:
                a[m] = 0
            stack.extend(reversed(seq))
        return a

    def multiply(self, u, v) -> np.ndarray:
        p = self.p
        a = [int(x) % p for x in u]
        factors = [(k, int(v[k]) % p) for k in range(self.ngens) if int(v[k]) % p]
        self._mul_list(a, factors)
        return np.array(a, dtype=np.int64)

    def multiply_all(self, elems: Iterable) -> np.ndarray:
        out = self.identity()
        for e in elems:
            out = self.multiply(out, e)
        return out

    def power(self, u, e: int) -> np.ndarray:
        """u^e for any integer e (square and multiply; powers of u commute)."""
        if e < 0:
            return self.power(self.inverse(u), -e)
        acc = self.identity()
        base = self.coerce(u)
        while e:
            if e & 1:
                acc = self.multiply(acc, base)
            e >>= 1
            if e:
                base = self.multiply(base, base)
        return acc

    def inverse(self, u) -> np.ndarray:
        """Clear coordinates in ascending order; n small multiplications."""
        p = self.p
        prod = [int(x) % p for x in u]
        v = self.identity()
        for i in range(self.ngens):
            c = prod[i]
            if not c:
                continue
            e = p - c
            self._mul_list(prod, [(i, e)])
            v = self.multiply(v, self._single(i, e))
        if any(prod):
            raise InvariantError("inverse collection failed to reach the identity")
        return v

    def _single(self, g: int, e: int) -> np.ndarray:
        v = self.identity()
        v[g] = e
        return v

    def gen_inverse(self, i: int) -> np.ndarray:
        """Cached inverse of generator x_i (1-based)."""
        hit = self._gen_inv.get(i)
        if hit is None:
            hit = self.inverse(self.gen(i))
            self._gen_inv[i] = hit
        return hit

    def conjugate(self, u, v, iv=None) -> np.ndarray:
        """u^v = v^-1 u v.  Pass iv to reuse a precomputed inverse of v."""
        if iv is None:
            iv = self.inverse(v)
        return self.multiply(self.multiply(iv, u), v)

    def commutator(self, u, v, iu=None, iv=None) -> np.ndarray:
        """[u, v] = u^-1 v^-1 u v."""
        if iu is None:
            iu = self.inverse(u)
        if iv is None:
            iv = self.inverse(v)
        return self.multiply(self.multiply(self.multiply(iu, iv), u), v)

    def element_order(self, u) -> int:
        v = self.coerce(u)
        order = 1
        while v.any():
            v = self.power(v, self.p)
            order *= self.p
            if order > self.order():
                raise InvariantError("element order exceeds group order")
        return order

    def enumerate_elements(self) -> Iterator[np.ndarray]:
        from .gfp import enumerate_vectors

        return enumerate_vectors(self.p, self.ngens)

    # -- consistency -------------------------------------------------------

    def _pow_vector(self, i: int) -> np.ndarray:
        """x_i^p as an element (the tail word collected, 0-based i)."""
        tail = self._pow[i]
        if tail is None:
            return self.identity()
        a = [0] * self.ngens
        self._mul_list(a, list(tail))
        return np.array(a, dtype=np.int64)

    def check_consistency(self) -> list[str]:
        """All Sims overlap tests; returns descriptions of the failures."""
        bad: list[str] = []
        n = self.ngens
        p = self.p
        gens = self.gens()
        for k in range(2, n):
            xk = gens[k]
            for j in range(1, k):
                kj = self.multiply(xk, gens[j])
                for i in range(j):
                    lhs = self.multiply(kj, gens[i])
                    rhs = self.multiply(xk, self.multiply(gens[j], gens[i]))
                    if not np.array_equal(lhs, rhs):
                        bad.append(f"(x{k+1}*x{j+1})*x{i+1} != x{k+1}*(x{j+1}*x{i+1})")
        for j in range(1, n):
            pj = self._pow_vector(j)
            xj_p1 = self.power(gens[j], p - 1)
            for i in range(j):
                lhs = self.multiply(pj, gens[i])
                rhs = self.multiply(xj_p1, self.multiply(gens[j], gens[i]))
                if not np.array_equal(lhs, rhs):
                    bad.append(f"(x{j+1}^p)*x{i+1} != x{j+1}^(p-1)*(x{j+1}*x{i+1})")
        for j in range(n):
            pj = self._pow_vector(j)
            for i in range(j):
                pi = self._pow_vector(i)
                lhs = self.multiply(gens[j], pi)
                rhs = self.multiply(self.multiply(gens[j], gens[i]), self.power(gens[i], p - 1))
                if not np.array_equal(lhs, rhs):
                    bad.append(f"x{j+1}*(x{i+1}^p) != (x{j+1}*x{i+1})*x{i+1}^(p-1)")
        for i in range(n):
            pi = self._pow_vector(i)
            lhs = self.multiply(pi, gens[i])
            rhs = self.multiply(gens[i], pi)
            if not np.array_equal(lhs, rhs):
                bad.append(f"(x{i+1}^p)*x{i+1} != x{i+1}*(x{i+1}^p)")
        return bad

    def is_consistent(self) -> bool:
        return not self.check_consistency()

    def assert_consistent(self) -> "PcGroup":
        bad = self.check_consistency()
        if bad:
            raise InvariantError(
                f"inconsistent presentation, {len(bad)} failed overlap(s), first: {bad[0]}"
            )
        return self

    # -- structural equality ----------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PcGroup)
            and self.p == other.p
            and self.ngens == other.ngens
            and self.pow_tails == other.pow_tails
            and self.conj_tails == other.conj_tails
        )

    def __hash__(self):
        return hash((self.p, self.ngens, tuple(sorted(self.pow_tails.items())),
                     tuple(sorted(self.conj_tails.items()))))

    def __repr__(self) -> str:
        return f"PcGroup(p={self.p}, ngens={self.ngens}, order=p^{self.ngens})"


# ---------------------------------------------------------------------------
# text format


_TOKEN = re.compile(r"\S+")


def _tokens(line: str) -> list[tuple[str, int]]:
    """(token, 1-based column) pairs; text after '#' is comment."""
    cut = line.find("#")
    if cut >= 0:
        line = line[:cut]
    return [(m.group(), m.start() + 1) for m in _TOKEN.finditer(line)]


def _parse_int(tok: str, lineno: int, col: int, what: str) -> int:
    if not tok.isdigit():
        raise ParseError(f"expected {what}, got {tok!r}", lineno, col)
    return int(tok)


def _parse_word(toks: list[tuple[str, int]], lineno: int, p: int, ngens: int) -> Word:
    word: Word = []
    for tok, col in toks:
        if "^" in tok:
            gs, _, es = tok.partition("^")
            g = _parse_int(gs, lineno, col, "generator index")
            e = _parse_int(es, lineno, col + len(gs) + 1, "exponent")
        else:
            g = _parse_int(tok, lineno, col, "generator index")
            e = 1
        if not 1 <= g <= ngens:
            raise ParseError(f"generator {g} out of range 1..{ngens}", lineno, col)
        if not 1 <= e <= p - 1:
            raise ParseError(f"exponent {e} out of range 1..{p - 1}", lineno, col)
        word.append((g, e))
    return word


def parse(text: str) -> PcGroup:
    """Parse the line format: header 'pcgroup v1', 'p N', 'ngens N', then
    'pow i : word' and 'conj j i : word' lines.  '#' starts a comment."""
    lines = text.splitlines()
    sig: list[tuple[int, list[tuple[str, int]]]] = []
    for idx, line in enumerate(lines, start=1):
        toks = _tokens(line)
        if toks:
            sig.append((idx, toks))
    if not sig:
        raise ParseError("empty input, expected 'pcgroup v1' header")
    (ln, toks) = sig[0]
    if [t for t, _ in toks] != ["pcgroup", "v1"]:
        raise ParseError("first line must be 'pcgroup v1'", ln, toks[0][1])
    if len(sig) < 3:
        raise ParseError("missing 'p' and 'ngens' lines", ln)
    (ln, toks) = sig[1]
    if toks[0][0] != "p" or len(toks) != 2:
        raise ParseError("second line must be 'p <prime>'", ln, toks[0][1])
    p = _parse_int(toks[1][0], ln, toks[1][1], "prime")
    if not 2 <= p or not _is_probably_ok_prime(p):
        raise ParseError(f"p must be a prime at most {1 << 15}, got {p}", ln, toks[1][1])
    (ln, toks) = sig[2]
    if toks[0][0] != "ngens" or len(toks) != 2:
        raise ParseError("third line must be 'ngens <count>'", ln, toks[0][1])
    ngens = _parse_int(toks[1][0], ln, toks[1][1], "generator count")
    if not 1 <= ngens <= MAX_NGENS:
        raise ParseError(f"ngens must be in 1..{MAX_NGENS}, got {ngens}", ln, toks[1][1])

    pow_tails: dict[int, Word] = {}
    conj_tails: dict[tuple[int, int], Word] = {}
    for ln, toks in sig[3:]:
        kind = toks[0][0]
        if kind == "pow":
            if len(toks) < 3 or toks[2][0] != ":":
                raise ParseError("expected 'pow <i> : <word>'", ln, toks[0][1])
            i = _parse_int(toks[1][0], ln, toks[1][1], "generator index")
            if not 1 <= i <= ngens:
                raise ParseError(f"generator {i} out of range 1..{ngens}", ln, toks[1][1])
            if i in pow_tails:
                raise DuplicateRelationError(f"second pow relation for generator {i}", ln, toks[1][1])
            word = _parse_word(toks[3:], ln, p, ngens)
            _check_tail(word, i, ln, toks, "pow tail")
            pow_tails[i] = word
        elif kind == "conj":
            if len(toks) < 4 or toks[3][0] != ":":
                raise ParseError("expected 'conj <j> <i> : <word>'", ln, toks[0][1])
            j = _parse_int(toks[1][0], ln, toks[1][1], "generator index")
            i = _parse_int(toks[2][0], ln, toks[2][1], "generator index")
            if not 1 <= i < j <= ngens:
                raise ParseError(f"conj needs 1 <= i < j <= {ngens}, got j={j} i={i}", ln, toks[1][1])
            if (j, i) in conj_tails:
                raise DuplicateRelationError(f"second conj relation for ({j}, {i})", ln, toks[1][1])
            word = _parse_word(toks[4:], ln, p, ngens)
            _check_tail(word, j, ln, toks, "conj tail")
            conj_tails[(j, i)] = word
        else:
            raise ParseError(f"unknown directive {kind!r}", ln, toks[0][1])
    try:
        return PcGroup(p, ngens, pow_tails, conj_tails)
    except (InvariantError, DomainError) as exc:
        raise ParseError(str(exc)) from exc


def _is_probably_ok_prime(p: int) -> bool:
    from .gfp import MAX_PRIME, is_prime

    return p <= MAX_PRIME and is_prime(p)


def _check_tail(word: Word, floor: int, ln: int, toks, what: str) -> None:
    prev = floor
    for g, _ in word:
        if g <= prev:
            raise ParseError(
                f"{what} generators must be strictly ascending and greater than {floor}",
                ln,
                toks[0][1],
            )
        prev = g


def parse_file(path) -> PcGroup:
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read())


def bundled_names() -> list[str]:
    from importlib import resources

    root = resources.files("caminagroups.data")
    return sorted(f.name[:-3] for f in root.iterdir() if f.name.endswith(".pc"))


def bundled_group(name: str) -> PcGroup:
    """Load one of the presentations shipped with the package by short name."""
    from importlib import resources

    ref = resources.files("caminagroups.data").joinpath(f"{name}.pc")
    if not ref.is_file():
        raise DomainError(f"no bundled group {name!r}; available: {', '.join(bundled_names())}")
    return parse(ref.read_text(encoding="utf-8"))


def serialize(group: PcGroup) -> str:
    out = ["pcgroup v1", f"p {group.p}", f"ngens {group.ngens}"]

    def fmt(word: Word) -> str:
        return " ".join(f"{g}^{e}" if e != 1 else f"{g}" for g, e in word)

    for i in sorted(group.pow_tails):
        out.append(f"pow {i} : {fmt(group.pow_tails[i])}")
    for (j, i) in sorted(group.conj_tails):
        out.append(f"conj {j} {i} : {fmt(group.conj_tails[(j, i)])}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# central quotients


def _central_igs(group: PcGroup, vectors) -> dict[int, np.ndarray]:
    """Triangular generating rows, lead coefficient 1, for a CENTRAL subgroup.

    Keyed by 0-based leading coordinate.  Central elements still need group
    multiplication (power relations fire on overflow), but leads behave
    linearly, which makes plain sifting terminate.
    """
    p = group.p
    rows: dict[int, np.ndarray] = {}
    work = [group.coerce(v) for v in vectors]
    while work:
        v = work.pop()
        while v.any():
            lead = int(np.flatnonzero(v)[0])
            row = rows.get(lead)
            if row is None:
                v = group.power(v, inv_mod(int(v[lead]), p))
                rows[lead] = v
                work.append(group.power(v, p))
                break
            v = group.multiply(v, group.power(row, p - int(v[lead])))
    return rows


def central_subgroup_contains(group: PcGroup, rows: dict[int, np.ndarray], v) -> bool:
    v = group.coerce(v)
    while v.any():
        lead = int(np.flatnonzero(v)[0])
        row = rows.get(lead)
        if row is None:
            return False
        v = group.multiply(v, group.power(row, group.p - int(v[lead])))
    return True


def quotient_by_central(group: PcGroup, vectors):
    """Quotient of the group by the central subgroup generated by the vectors.

    Returns (quotient, project, lift, kept) where project maps parent vectors
    onto quotient vectors, lift is a set-theoretic section, and kept lists the
    1-based parent generators that survive.  Raises NotCentralError when a
    generator fails to commute with some group generator.
    """
    for v in vectors:
        vv = group.coerce(v)
        for x in group.gens():
            if not group.is_identity(group.commutator(vv, x)):
                raise NotCentralError("subgroup generator is not central")
    rows = _central_igs(group, vectors)
    leads = sorted(rows)
    kept = [i for i in range(group.ngens) if i not in rows]
    newindex = {old: new for new, old in enumerate(kept)}

    def project(u) -> np.ndarray:
        v = group.coerce(u)
        for lead in leads:
            c = int(v[lead])
            if c:
                v = group.multiply(v, group.power(rows[lead], group.p - c))
        if any(int(v[lead]) for lead in leads):
            raise InvariantError("central sifting left residue on a pivot coordinate")
        return np.array([int(v[i]) for i in kept], dtype=np.int64)

    def lift(q) -> np.ndarray:
        v = group.identity()
        for newpos, old in enumerate(kept):
            v[old] = int(q[newpos]) % group.p
        return v

    def as_word(qvec) -> Word:
        return [(k + 1, int(c)) for k, c in enumerate(qvec) if c]

    pow_tails: dict[int, Word] = {}
    conj_tails: dict[tuple[int, int], Word] = {}
    for pos, old in enumerate(kept):
        q = project(group.power(group.gen(old + 1), group.p))
        if q[: pos + 1].any():
            raise InvariantError("projected power tail reaches down to its own generator")
        w = as_word(q)
        if w:
            pow_tails[pos + 1] = w
    for jp, oldj in enumerate(kept):
        for ip, oldi in enumerate(kept[:jp]):
            q = project(group.conjugate(group.gen(oldj + 1), group.gen(oldi + 1)))
            if int(q[jp]) != 1 or q[:jp].any():
                raise InvariantError("projected conjugate has the wrong leading part")
            q[jp] = 0
            w = as_word(q)
            if w:
                conj_tails[(jp + 1, ip + 1)] = w
    quotient = PcGroup(group.p, len(kept), pow_tails, conj_tails)
    quotient.assert_consistent()
    return quotient, project, lift, [i + 1 for i in kept]
