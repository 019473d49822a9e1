"""Squares of idempotents: singular squares with witness search, linked
diamonds/triangles/pairs, NT-reducing square constructions, and permutation
labels of idempotents."""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from .diagram import (
    FiniteStarSemigroup,
    Partition,
    PartitionHandleBase,
    d_projection,
    eq_refines,
    involution,
    multiply,
    partition_from_blocks,
)
from .green import DClassData

ORIENTATIONS = ("LR", "RL", "UD", "DU")
HORIZONTAL = ("LR", "RL")
VERTICAL = ("UD", "DU")


@dataclass(frozen=True)
class Square:
    """Array (e f; g h) with e R f, g R h, e L g, f L h."""

    e: Any
    f: Any
    g: Any
    h: Any

    def corners(self):
        return (self.e, self.f, self.g, self.h)

    @property
    def degenerate(self) -> bool:
        return self.e == self.f or self.e == self.g


@dataclass(frozen=True)
class SingularWitness:
    square: Square
    orientation: str
    u: Any


@dataclass(frozen=True)
class LinkedDiamond:
    """(s, u; v, w): four friendly pairs with psp = v and pup = w."""

    s: Any
    u: Any
    v: Any
    w: Any
    p: Any  # one witnessing projection

    def degeneracy(self) -> tuple[str, ...]:
        flags = []
        if self.s == self.u:
            flags.append("D1")
        if self.v == self.w:
            flags.append("D2")
        if self.s == self.v and self.u == self.w:
            flags.append("D3")
        return tuple(flags)

    @property
    def degenerate(self) -> bool:
        return bool(self.degeneracy())


def is_square(h: FiniteStarSemigroup, sq: Square) -> bool:
    from .green import l_related, r_related

    return (
        r_related(h, sq.e, sq.f)
        and r_related(h, sq.g, sq.h)
        and l_related(h, sq.e, sq.g)
        and l_related(h, sq.f, sq.h)
    )


# -- orientation equations ---------------------------------------------------


def is_lr_singular(h: FiniteStarSemigroup, sq: Square, u) -> bool:
    """ue=e, ug=g, eu=f, gu=h."""
    e, f, g, hh = sq.corners()
    p = h.product
    return p(u, e) == e and p(u, g) == g and p(e, u) == f and p(g, u) == hh


def is_rl_singular(h: FiniteStarSemigroup, sq: Square, u) -> bool:
    e, f, g, hh = sq.corners()
    return is_lr_singular(h, Square(f, e, hh, g), u)


def is_ud_singular(h: FiniteStarSemigroup, sq: Square, u) -> bool:
    """eu=e, fu=f, ue=g, uf=h."""
    e, f, g, hh = sq.corners()
    p = h.product
    return p(e, u) == e and p(f, u) == f and p(u, e) == g and p(u, f) == hh


def is_du_singular(h: FiniteStarSemigroup, sq: Square, u) -> bool:
    e, f, g, hh = sq.corners()
    return is_ud_singular(h, Square(g, hh, e, f), u)


_CHECKS = {
    "LR": is_lr_singular,
    "RL": is_rl_singular,
    "UD": is_ud_singular,
    "DU": is_du_singular,
}


def witness_orientations(h: FiniteStarSemigroup, sq: Square, u) -> list[str]:
    """The orientations in which u singularises sq."""
    return [o for o in ORIENTATIONS if _CHECKS[o](h, sq, u)]


def _nt_of(h: FiniteStarSemigroup, u) -> int:
    return u.nt() if isinstance(u, Partition) else 0


def find_singularizers(
    h: FiniteStarSemigroup, sq: Square, idempotents: Sequence | None = None
) -> list[SingularWitness]:
    """All witnesses, all four orientations, scanning E(S) in increasing NT(u).

    A candidate u is pruned unless it is a two-sided identity for the pair of
    corners forced below it by the orientation.
    """
    pool = list(idempotents) if idempotents is not None else h.idempotents()
    pool.sort(key=lambda u: (_nt_of(h, u), h.sort_key(u)))
    e, f, g, hh = sq.corners()
    needs = {
        "LR": (f, hh),
        "RL": (e, g),
        "UD": (g, hh),
        "DU": (e, f),
    }
    p = h.product
    out = []
    for u in pool:
        for orient in ORIENTATIONS:
            x, y = needs[orient]
            if p(u, x) != x or p(x, u) != x or p(u, y) != y or p(y, u) != y:
                continue
            if _CHECKS[orient](h, sq, u):
                out.append(SingularWitness(sq, orient, u))
    return out


# -- D-class enumeration -----------------------------------------------------


@dataclass(frozen=True)
class SquareEntry:
    """One deduplicated singular square of a D-class.

    rows/cols are unordered projection-index pairs; oclass is "horizontal"
    or "vertical"; square holds the canonically oriented corners and u the
    first witness found in scan order, with its orientation for that layout.
    """

    rows: tuple[int, int]
    cols: tuple[int, int]
    oclass: str
    square: Square
    orientation: str
    u: Any


class _WitnessIndex:
    """Left/right identity sets over E(S), keyed by the projections of a
    D-class: u x = x iff u (x x*) = x x*, and dually."""

    def __init__(self, d: DClassData):
        h = d.handle
        self.h = h
        pool = h.idempotents()
        if isinstance(h, PartitionHandleBase) and d.rank is not None:
            pool = [u for u in pool if u.rank() >= d.rank]
        self.pool = sorted(pool, key=lambda u: (_nt_of(h, u), h.sort_key(u)))
        self.order = {u: i for i, u in enumerate(self.pool)}
        self.lid: list[frozenset] = []
        self.rid: list[frozenset] = []
        for p in d.projections:
            self.lid.append(
                frozenset(u for u in self.pool if h.product(u, p) == p)
            )
            self.rid.append(
                frozenset(u for u in self.pool if h.product(p, u) == p)
            )
        self.above = [l & r for l, r in zip(self.lid, self.rid)]

    def sortu(self, us: Iterable) -> list:
        return sorted(us, key=self.order.__getitem__)


def _square_candidates(d: DClassData):
    """Non-degenerate 2x2 grids of group H-classes, canonically oriented."""
    cols_of: dict[int, list[int]] = {}
    for (i, j) in d.friendly:
        cols_of.setdefault(i, []).append(j)
    for i in cols_of:
        cols_of[i].sort()
    rows = sorted(cols_of)
    for a, i in enumerate(rows):
        si = set(cols_of[i])
        for k in rows[a + 1 :]:
            common = sorted(si.intersection(cols_of[k]))
            for j, l in itertools.combinations(common, 2):
                yield i, k, j, l


def enumerate_singular_squares(d: DClassData, threads: int = 1) -> list[SquareEntry]:
    """All non-degenerate singular squares of the D-class, deduplicated by
    unordered row pair + unordered column pair + orientation class."""
    h = d.handle
    widx = _WitnessIndex(d)
    p = h.product
    candidates = list(_square_candidates(d))

    def classify(chunk):
        out = []
        for i, k, j, l in chunk:
            e = d.e_of_pair[(i, j)]
            f = d.e_of_pair[(i, l)]
            g = d.e_of_pair[(k, j)]
            hh = d.e_of_pair[(k, l)]
            sq = Square(e, f, g, hh)
            # Candidate witnesses: the left/right identity conditions of each
            # orientation reduce to membership in row/column identity sets;
            # only the two remaining equations need products.
            found = None
            for u in widx.sortu(widx.lid[i] & widx.lid[k] & widx.rid[l]):
                if p(e, u) == f and p(g, u) == hh:
                    found = ("LR", u)
                    break
            if found is None:
                for u in widx.sortu(widx.lid[i] & widx.lid[k] & widx.rid[j]):
                    if p(f, u) == e and p(hh, u) == g:
                        found = ("RL", u)
                        break
            if found:
                out.append(
                    SquareEntry((i, k), (j, l), "horizontal", sq, found[0], found[1])
                )
            found = None
            for u in widx.sortu(widx.rid[j] & widx.rid[l] & widx.lid[k]):
                if p(u, e) == g and p(u, f) == hh:
                    found = ("UD", u)
                    break
            if found is None:
                for u in widx.sortu(widx.rid[j] & widx.rid[l] & widx.lid[i]):
                    if p(u, g) == e and p(u, hh) == f:
                        found = ("DU", u)
                        break
            if found:
                out.append(
                    SquareEntry((i, k), (j, l), "vertical", sq, found[0], found[1])
                )
        return out

    if threads > 1 and len(candidates) > 64:
        shards = [candidates[s::threads] for s in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(classify, shards))
        entries = [entry for part in results for entry in part]
    else:
        entries = classify(candidates)
    entries.sort(key=lambda s: (s.rows, s.cols, s.oclass))
    return entries


def brute_force_singular_squares(d: DClassData) -> set[tuple]:
    """Independent oracle: try every 4-tuple grid and every idempotent u
    against the raw orientation equations.  Returns dedup keys."""
    h = d.handle
    keys = set()
    for i, k, j, l in _square_candidates(d):
        sq = Square(
            d.e_of_pair[(i, j)],
            d.e_of_pair[(i, l)],
            d.e_of_pair[(k, j)],
            d.e_of_pair[(k, l)],
        )
        for u in h.idempotents():
            for orient in ORIENTATIONS:
                if _CHECKS[orient](h, sq, u):
                    oclass = "horizontal" if orient in HORIZONTAL else "vertical"
                    keys.add(((i, k), (j, l), oclass))
    return keys


# -- linked diamonds / triangles / pairs --------------------------------------


def conjugators(d: DClassData) -> list:
    """Projections of the ambient monoid, in canonical order."""
    return d.handle.projections()


def enumerate_linked_diamonds(d: DClassData, threads: int = 1) -> list[LinkedDiamond]:
    """All linked diamonds (s,u;v,w) over P_D, one witness kept per diamond
    (the earliest conjugating projection in canonical order), deduplicated
    under (s,u;v,w) ~ (u,s;w,v)."""
    h = d.handle
    P = d.projections
    pidx = {p: i for i, p in enumerate(P)}
    fr = d.friendly
    conj = conjugators(d)

    def scan(indexed):
        part: dict[tuple, tuple[int, LinkedDiamond]] = {}
        for pord, p in indexed:
            image = {}
            for i, s in enumerate(P):
                v = h.product(h.product(p, s), p)
                j = pidx.get(v)
                if j is not None:
                    image[i] = j
            items = sorted(image.items())
            for si, vi in items:
                for ui, wi in items:
                    if (
                        (si, vi) in fr
                        and (si, wi) in fr
                        and (ui, vi) in fr
                        and (ui, wi) in fr
                    ):
                        key = min((si, ui, vi, wi), (ui, si, wi, vi))
                        if key not in part or pord < part[key][0]:
                            if key not in part:
                                part[key] = (
                                    pord,
                                    LinkedDiamond(P[si], P[ui], P[vi], P[wi], p),
                                )
        return part

    indexed = list(enumerate(conj))
    if threads > 1 and len(indexed) > 8:
        shards = [indexed[s::threads] for s in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(scan, shards))
        found: dict[tuple, tuple[int, LinkedDiamond]] = {}
        for part in parts:
            for key, val in part.items():
                if key not in found or val[0] < found[key][0]:
                    found[key] = val
    else:
        found = scan(indexed)
    return [found[k][1] for k in sorted(found)]


def linked_triangles(d: DClassData) -> list[tuple]:
    """p-linked triangles (s,u,w): psp=s, pup=w, with (s,w),(u,s),(u,w) friendly."""
    h = d.handle
    P = d.projections
    pidx = {p: i for i, p in enumerate(P)}
    fr = d.friendly
    found: dict[tuple, Any] = {}
    for p in conjugators(d):
        image = {}
        for i, s in enumerate(P):
            v = h.product(h.product(p, s), p)
            j = pidx.get(v)
            if j is not None:
                image[i] = j
        for si, vi in sorted(image.items()):
            if vi != si:
                continue
            for ui, wi in sorted(image.items()):
                if (si, wi) in fr and (ui, si) in fr and (ui, wi) in fr:
                    key = (si, ui, wi)
                    if key not in found:
                        found[key] = (P[si], P[ui], P[wi], p)
    return [found[k] for k in sorted(found)]


def is_linked_pair(h: FiniteStarSemigroup, p, s, u) -> bool:
    """s = spups and u = upspu."""
    def m(*xs):
        acc = xs[0]
        for x in xs[1:]:
            acc = h.product(acc, x)
        return acc

    return m(s, p, u, p, s) == s and m(u, p, s, p, u) == u


def is_linked_diamond(h: FiniteStarSemigroup, d: DClassData, s, u, v, w, p) -> bool:
    fr = d.friendly
    i, j = d.proj_index(s), d.proj_index(u)
    k, l = d.proj_index(v), d.proj_index(w)
    if not ((i, k) in fr and (i, l) in fr and (j, k) in fr and (j, l) in fr):
        return False
    return (
        h.product(h.product(p, s), p) == v
        and h.product(h.product(p, u), p) == w
    )


# -- NT-reducing squares ------------------------------------------------------


def is_nt_reducing(sq: Square) -> bool:
    """NTu of the top-right corner and NTd of the bottom-left corner both
    drop strictly below those of the base (bottom-right)."""
    return sq.f.ntu() < sq.h.ntu() and sq.g.ntd() < sq.h.ntd()


def _merge_blocks(e: Partition, blocks_to_merge: list[tuple[int, ...]]) -> Partition:
    merged = []
    pool = set()
    for b in blocks_to_merge:
        pool.update(b)
    merged.append(tuple(sorted(pool, key=lambda p: (p < 0, abs(p)))))
    for b in e.blocks():
        if tuple(b) not in [tuple(x) for x in blocks_to_merge]:
            merged.append(b)
    return partition_from_blocks(e.n, merged)


def projection_nt_square(e: Partition) -> tuple[Square, Partition]:
    """NT-reducing singular square with base a projection having a
    transversal and at least two upper blocks; returns (square, witness)."""
    blocks = e.blocks()
    trans = sorted(
        [b for b in blocks if any(p > 0 for p in b) and any(p < 0 for p in b)]
    )
    uppers = sorted([tuple(p for p in b) for b in blocks if all(p > 0 for p in b)])
    if not trans or len(uppers) < 2:
        raise ValueError("base must be a projection with a transversal and >= 2 upper blocks")
    A = tuple(sorted(p for p in trans[0] if p > 0))
    B, C = uppers[0], uppers[1]
    rest = [
        b
        for b in blocks
        if b != trans[0]
        and tuple(b) not in (B, C)
        and tuple(-p for p in b) not in (B, C)
    ]
    n = e.n
    negb = tuple(-p for p in B)
    negc = tuple(-p for p in C)
    nega = tuple(-p for p in A)
    e1 = partition_from_blocks(n, [A + C + nega + negb, B, negc, *rest])
    e2 = partition_from_blocks(n, [A + C + nega, B, negb, negc, *rest])
    e3 = partition_from_blocks(n, [A + nega + negb, B, C, negc, *rest])
    u = partition_from_blocks(n, [A + nega + negb, B, C + negc, *rest])
    return Square(e1, e2, e3, e), u


def nt_reducing_square_for(e: Partition) -> tuple[Square, Partition]:
    """An NT-reducing singular square with base e, for any idempotent of
    rank >= 1 outside F(n,r); returns (square, witness).

    Projections with >= 2 upper blocks use the three-block construction;
    non-projections merge an upper block into a transversal (preferring the
    same super-kernel component) and use the Ehresmann square, on the star
    side when the kernel sits inside the cokernel.
    """
    if involution(e) == e:
        return projection_nt_square(e)
    if eq_refines(e.ker(), e.coker()):
        sq, u = _nonprojection_nt_square(involution(e))
        return (
            Square(
                involution(sq.e), involution(sq.g), involution(sq.f), involution(sq.h)
            ),
            involution(u),
        )
    return _nonprojection_nt_square(e)


def _nonprojection_nt_square(e: Partition) -> tuple[Square, Partition]:
    assert not eq_refines(e.ker(), e.coker())
    blocks = e.blocks()
    uppers = sorted([b for b in blocks if all(p > 0 for p in b)])
    assert uppers, "base must have an upper non-transversal"
    comp_of = {}
    for idx, (cls, _r) in enumerate(
        sorted(((sorted(c), r) for c, r in _components(e)))
    ):
        for x in cls:
            comp_of[x] = idx
    trans = sorted(
        [b for b in blocks if any(p > 0 for p in b) and any(p < 0 for p in b)]
    )
    A = uppers[0]
    same = [t for t in trans if comp_of[t[0]] == comp_of[A[0]]]
    target = same[0] if same else trans[0]
    f = _merge_blocks(e, [A, target])
    De = d_projection(e)
    e3 = multiply(e, De)
    e1 = multiply(f, De)
    return Square(e1, f, e3, e), De


def _components(e: Partition):
    from .diagram import idempotent_components

    comps = idempotent_components(e)
    assert comps is not None, "base must be an idempotent"
    return comps


def ehresmann_square(e: Partition, f: Partition) -> tuple[Square, Partition]:
    """(fD(e) f; eD(e) e), RL-singularised by D(e), for e L f with
    ker(e) contained in ker(f)."""
    De = d_projection(e)
    return Square(multiply(f, De), f, multiply(e, De), e), De


# -- F(n, r) -----------------------------------------------------------------


def f_set(d: DClassData) -> list:
    """Full-domain or full-codomain idempotents plus P_1, for rank >= 1."""
    assert d.rank is not None and d.rank >= 1
    out = [
        e
        for e in d.idempotents
        if e.ntu() == 0
        or e.ntd() == 0
        or (involution(e) == e and e.ntu() == 1)
    ]
    return out


# -- labels -------------------------------------------------------------------


def label_prime(e: Partition) -> tuple[tuple[int, int], ...]:
    """Partial bijection pairing minima of the two halves of each transversal."""
    pairs = []
    for b in e.blocks():
        tops = [p for p in b if p > 0]
        bots = [-p for p in b if p < 0]
        if tops and bots:
            pairs.append((min(tops), min(bots)))
    pairs.sort()
    return tuple(pairs)


def scale_down(pairs: Sequence[tuple[int, int]]) -> tuple[int, ...]:
    """Compress a partial bijection to a permutation of [r] (0-based images)."""
    tops = sorted(a for a, _ in pairs)
    bots = sorted(b for _, b in pairs)
    trank = {x: i for i, x in enumerate(tops)}
    brank = {x: i for i, x in enumerate(bots)}
    perm = [0] * len(pairs)
    for a, b in pairs:
        perm[trank[a]] = brank[b]
    return tuple(perm)


def label(e: Partition) -> tuple[int, ...]:
    """The permutation of [r] scaled down from label_prime(e); rank 0 errors."""
    if e.rank() == 0:
        raise ValueError("label is undefined for rank-0 elements")
    return scale_down(label_prime(e))


def perm_inverse(perm: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(perm)
    for i, x in enumerate(perm):
        out[x] = i
    return tuple(out)


def is_coxeter_idempotent(e: Partition) -> bool:
    """Label is an adjacent transposition (i, i+1)."""
    perm = label(e)
    moved = [i for i, x in enumerate(perm) if x != i]
    return (
        len(moved) == 2
        and moved[1] == moved[0] + 1
        and perm[moved[0]] == moved[1]
        and perm[moved[1]] == moved[0]
    )
