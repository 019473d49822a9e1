"""Green's relations, regular D-class assembly and friendliness structure.

For a handle with involution the R- and L-classes of a D-class are indexed
by the projections it contains (a a* and a*a pick out the indices); generic
handles without involution fall back to arbitrary class representatives.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .diagram import (
    AdjacencySemigroup,
    FiniteStarSemigroup,
    PartitionHandleBase,
)


class EmptyClassError(ValueError):
    pass


# -- Green's relations ------------------------------------------------------


def _is_partition_like(h: FiniteStarSemigroup) -> bool:
    return isinstance(h, PartitionHandleBase)


def r_related(h: FiniteStarSemigroup, a, b) -> bool:
    if _is_partition_like(h):
        return a.dom() == b.dom() and a.ker() == b.ker()
    return _right_ideal(h, a) == _right_ideal(h, b)


def l_related(h: FiniteStarSemigroup, a, b) -> bool:
    if _is_partition_like(h):
        return a.codom() == b.codom() and a.coker() == b.coker()
    return _left_ideal(h, a) == _left_ideal(h, b)


def d_related(h: FiniteStarSemigroup, a, b) -> bool:
    if _is_partition_like(h):
        return a.rank() == b.rank()
    # D = R o L in a finite semigroup
    ra = _right_ideal(h, a)
    for c in h.elements():
        if _right_ideal(h, c) == ra and _left_ideal(h, c) == _left_ideal(h, b):
            return True
    return False


def _right_ideal(h: FiniteStarSemigroup, a) -> frozenset:
    out = {a}
    out.update(h.product(a, s) for s in h.elements())
    return frozenset(out)


def _left_ideal(h: FiniteStarSemigroup, a) -> frozenset:
    out = {a}
    out.update(h.product(s, a) for s in h.elements())
    return frozenset(out)


def r_related_ideal(h: FiniteStarSemigroup, a, b) -> bool:
    """Principal-ideal definition, as an independent oracle."""
    return _right_ideal(h, a) == _right_ideal(h, b)


def l_related_ideal(h: FiniteStarSemigroup, a, b) -> bool:
    return _left_ideal(h, a) == _left_ideal(h, b)


def d_related_ideal(h: FiniteStarSemigroup, a, b) -> bool:
    ra = _right_ideal(h, a)
    lb = _left_ideal(h, b)
    return any(
        _right_ideal(h, c) == ra and _left_ideal(h, c) == lb
        for c in h.elements()
    )


# -- D-class data -----------------------------------------------------------


@dataclass
class DClassData:
    """A regular D-class with projection-indexed structure.

    For star handles, `projections` indexes both the R- and the L-classes;
    `friendly` holds the index pairs (i, j) whose H-class is a group, and
    `e_of_pair` maps such a pair to the unique idempotent p_i p_j in it.
    The zero D-class of an adjacency semigroup is excluded: only the unique
    non-zero class is built.
    """

    handle: FiniteStarSemigroup
    rank: int | None
    size: int
    projections: list          # P_D (star handles); R-class reps otherwise
    lreps: list                # == projections for star handles
    idempotents: list          # E_D in canonical order
    friendly: set[tuple[int, int]]
    e_of_pair: dict[tuple[int, int], Any]
    strata: dict[tuple[int, int], list] = field(default_factory=dict)
    elements: list | None = None

    @property
    def is_star(self) -> bool:
        return self.handle.has_star

    def proj_index(self, p) -> int:
        return self._pindex[p]

    def lrep_index(self, q) -> int:
        return self._lindex[q]

    def r_index_of(self, e) -> int:
        """Index of the R-class of the idempotent e."""
        h = self.handle
        if self.is_star:
            return self._pindex[h.product(e, h.star(e))]
        return self._pindex[self._rkey(e)]

    def l_index_of(self, e) -> int:
        h = self.handle
        if self.is_star:
            return self._lindex[h.product(h.star(e), e)]
        return self._lindex[self._lkey(e)]

    @staticmethod
    def _rkey(a):
        return (
            tuple(sorted(a.dom())),
            tuple(sorted(tuple(sorted(c)) for c in a.ker())),
        )

    @staticmethod
    def _lkey(a):
        return (
            tuple(sorted(a.codom())),
            tuple(sorted(tuple(sorted(c)) for c in a.coker())),
        )

    def idempotent_index(self, e) -> int:
        return self._eindex[e]

    def finish(self) -> "DClassData":
        """Build the lookup dictionaries; called after construction/load."""
        self._pindex = {p: i for i, p in enumerate(self.projections)}
        self._lindex = {q: j for j, q in enumerate(self.lreps)}
        self._eindex = {e: k for k, e in enumerate(self.idempotents)}
        return self

    # -- invariants -------------------------------------------------------

    def check_invariants(self) -> None:
        h = self.handle
        if self.is_star:
            for i, p in enumerate(self.projections):
                for j, q in enumerate(self.projections):
                    fr = (
                        h.product(h.product(p, q), p) == p
                        and h.product(h.product(q, p), q) == q
                    )
                    assert ((i, j) in self.friendly) == fr, "friendliness mismatch"
            assert len(self.friendly) == len(self.idempotents), (
                "the map (p,q) -> pq must biject onto E_D"
            )
            seen = set()
            for (i, j) in self.friendly:
                e = h.product(self.projections[i], self.projections[j])
                assert e == self.e_of_pair[(i, j)]
                assert e not in seen
                seen.add(e)
        if self.strata:
            total = sum(len(v) for v in self.strata.values())
            assert total == len(self.idempotents), "strata must partition E_D"
            for (k, l), es in self.strata.items():
                for e in es:
                    assert e.ntu() == k and e.ntd() == l


def dclass_data(h: FiniteStarSemigroup, r: int | None = None) -> DClassData:
    """Assemble the D-class of rank r (or the unique non-zero class)."""
    if isinstance(h, AdjacencySemigroup):
        return _adjacency_dclass(h)
    if r is None:
        raise EmptyClassError("a rank is required for partition-like handles")
    elems = [a for a in h.elements() if a.rank() == r]
    if not elems:
        raise EmptyClassError(f"{h.describe()} has no elements of rank {r}")
    idem = [e for e in elems if h.is_idempotent(e)]
    if h.has_star:
        projections = [p for p in idem if h.star(p) == p]
        lreps = projections
    else:
        rkeys = sorted({DClassData._rkey(a) for a in elems})
        lkeys = sorted({DClassData._lkey(a) for a in elems})
        projections, lreps = list(rkeys), list(lkeys)
    d = DClassData(
        handle=h,
        rank=r,
        size=len(elems),
        projections=projections,
        lreps=lreps,
        idempotents=idem,
        friendly=set(),
        e_of_pair={},
        elements=elems,
    )
    d.finish()
    for e in idem:
        pair = (d.r_index_of(e), d.l_index_of(e))
        d.friendly.add(pair)
        d.e_of_pair[pair] = e
    for e in idem:
        d.strata.setdefault((e.ntu(), e.ntd()), []).append(e)
    d.check_invariants()
    return d


def _adjacency_dclass(h: AdjacencySemigroup) -> DClassData:
    from .diagram import ADJ_ZERO

    elems = [x for x in h.elements() if x != ADJ_ZERO]
    idem = [e for e in elems if h.is_idempotent(e)]
    projections = [p for p in idem if h.star(p) == p]
    d = DClassData(
        handle=h,
        rank=None,
        size=len(elems),
        projections=projections,
        lreps=projections,
        idempotents=idem,
        friendly=set(),
        e_of_pair={},
        elements=elems,
    )
    d.finish()
    for e in idem:
        pair = (d.r_index_of(e), d.l_index_of(e))
        d.friendly.add(pair)
        d.e_of_pair[pair] = e
    d.check_invariants()
    return d


def h_class_idempotent(d: DClassData, p, q):
    """The idempotent pq when (p, q) is friendly; None otherwise."""
    i = d.proj_index(p)
    j = d.lrep_index(q)
    return d.e_of_pair.get((i, j))


def sandwich_set(h: FiniteStarSemigroup, e, f) -> list:
    """S(e,f) = {idempotents h' with e h' f = ef and f h' e = h'}."""
    if not h.is_idempotent(e) or not h.is_idempotent(f):
        raise ValueError("sandwich_set requires idempotent arguments")
    ef = h.product(e, f)
    out = []
    for x in h.idempotents():
        if h.product(h.product(e, x), f) == ef and h.product(h.product(f, x), e) == x:
            out.append(x)
    return out


# -- serialization -----------------------------------------------------------

DCLASS_SCHEMA_VERSION = 1


def dclass_to_doc(d: DClassData) -> dict:
    """Versioned JSON-ready document (star handles only)."""
    if not d.is_star:
        raise ValueError("only star handles serialize to the D-class schema")
    h = d.handle
    return {
        "version": DCLASS_SCHEMA_VERSION,
        "monoid": h.describe(),
        "rank": d.rank,
        "size": d.size,
        "projections": [h.text(p) for p in d.projections],
        "idempotents": [h.text(e) for e in d.idempotents],
        "friendly": sorted(map(list, d.friendly)),
        "strata": {
            f"{k},{l}": [d.idempotent_index(e) for e in es]
            for (k, l), es in sorted(d.strata.items())
        },
    }


def dclass_from_doc(h: FiniteStarSemigroup, doc: dict) -> DClassData:
    if doc.get("version") != DCLASS_SCHEMA_VERSION:
        raise ValueError("unsupported D-class document version")
    projections = [h.parse(s) for s in doc["projections"]]
    idem = [h.parse(s) for s in doc["idempotents"]]
    d = DClassData(
        handle=h,
        rank=doc["rank"],
        size=doc["size"],
        projections=projections,
        lreps=projections,
        idempotents=idem,
        friendly={tuple(p) for p in doc["friendly"]},
        e_of_pair={},
        elements=None,
    )
    d.finish()
    for pair in d.friendly:
        d.e_of_pair[pair] = h.product(projections[pair[0]], projections[pair[1]])
    for key, idxs in doc["strata"].items():
        k, l = map(int, key.split(","))
        d.strata[(k, l)] = [idem[i] for i in idxs]
    return d
