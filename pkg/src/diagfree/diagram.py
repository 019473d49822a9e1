"""Exact arithmetic for set partitions of {1..n, 1'..n'} and related monoids.

Points are signed integers: k > 0 is the top point k, k < 0 is the bottom
point |k|'.  A partition of degree n is stored as a labelling of the 2n
points in the fixed order 1..n, 1'..n', with block ids canonicalised to
first-occurrence order, so equal partitions have equal labellings and a
stable fingerprint.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

DEGREE_CAP = 8


class DegreeError(ValueError):
    pass


class BlockError(ValueError):
    pass


def _canonical(raw: Sequence[int]) -> tuple[int, ...]:
    """Relabel arbitrary block ids to 0,1,2,... in first-occurrence order."""
    seen: dict[int, int] = {}
    out = []
    for x in raw:
        if x not in seen:
            seen[x] = len(seen)
        out.append(seen[x])
    return tuple(out)


class Partition:
    """A set partition of the 2n points, canonically labelled; immutable."""

    __slots__ = ("n", "labels", "_hash")

    def __init__(self, n: int, labels: Sequence[int], _canon: bool = False):
        if n < 1:
            raise DegreeError("degree must be a positive integer")
        if len(labels) != 2 * n:
            raise BlockError("labelling must cover exactly 2n points")
        self.n = n
        self.labels = tuple(labels) if _canon else _canonical(labels)
        self._hash = hash((n, self.labels))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Partition)
            and self.n == other.n
            and self.labels == other.labels
        )

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Partition") -> bool:
        return (self.n, self.labels) < (other.n, other.labels)

    def __repr__(self) -> str:
        return f"Partition({self.n}, {self.to_text()!r})"

    # -- block views ---------------------------------------------------

    def blocks(self) -> list[tuple[int, ...]]:
        """Blocks as tuples of signed points, in first-occurrence order."""
        n = self.n
        out: list[list[int]] = []
        for pos, lab in enumerate(self.labels):
            point = pos + 1 if pos < n else -(pos - n + 1)
            if lab == len(out):
                out.append([point])
            else:
                out[lab].append(point)
        return [tuple(b) for b in out]

    def to_text(self) -> str:
        parts = []
        for block in self.blocks():
            toks = [str(p) if p > 0 else f"{-p}'" for p in block]
            parts.append(" ".join(toks))
        return "; ".join(parts)

    # -- derived data ---------------------------------------------------

    def _half_classes(self, lower: bool) -> frozenset[frozenset[int]]:
        n = self.n
        by_label: dict[int, set[int]] = {}
        off = n if lower else 0
        for i in range(n):
            by_label.setdefault(self.labels[off + i], set()).add(i + 1)
        return frozenset(frozenset(v) for v in by_label.values())

    def ker(self) -> frozenset[frozenset[int]]:
        """Equivalence on [n] induced by the top half."""
        return self._half_classes(False)

    def coker(self) -> frozenset[frozenset[int]]:
        return self._half_classes(True)

    def _transversal_labels(self) -> set[int]:
        n = self.n
        return set(self.labels[:n]) & set(self.labels[n:])

    def rank(self) -> int:
        return len(self._transversal_labels())

    def dom(self) -> frozenset[int]:
        trans = self._transversal_labels()
        return frozenset(
            i + 1 for i in range(self.n) if self.labels[i] in trans
        )

    def codom(self) -> frozenset[int]:
        trans = self._transversal_labels()
        n = self.n
        return frozenset(
            i + 1 for i in range(n) if self.labels[n + i] in trans
        )

    def ntu(self) -> int:
        """Number of upper non-transversal blocks."""
        return len(set(self.labels[: self.n])) - self.rank()

    def ntd(self) -> int:
        return len(set(self.labels[self.n :])) - self.rank()

    def nt(self) -> int:
        return self.ntu() + self.ntd()


def identity(n: int) -> Partition:
    return Partition(n, tuple(range(n)) * 2, _canon=True)


def partition_from_blocks(n: int, blocks: Iterable[Iterable[int]]) -> Partition:
    """Build a canonical partition from blocks of signed points.

    Raises BlockError naming the offending point on overlap, omission or
    out-of-range input.
    """
    if n < 1:
        raise DegreeError("degree must be a positive integer")
    raw = [-1] * (2 * n)
    for bid, block in enumerate(blocks):
        block = tuple(block)
        if not block:
            raise BlockError("empty block")
        for p in block:
            if p == 0 or abs(p) > n:
                raise BlockError(f"point {_point_name(p)} out of range for degree {n}")
            pos = p - 1 if p > 0 else n + (-p) - 1
            if raw[pos] != -1:
                raise BlockError(f"point {_point_name(p)} appears in more than one block")
            raw[pos] = bid
    for pos, bid in enumerate(raw):
        if bid == -1:
            p = pos + 1 if pos < n else -(pos - n + 1)
            raise BlockError(f"point {_point_name(p)} is not covered by any block")
    return Partition(n, raw)


def _point_name(p: int) -> str:
    return str(p) if p > 0 else f"{-p}'"


def partition_from_text(n: int, text: str) -> Partition:
    """Parse the semicolon-separated block text form."""
    blocks = []
    for chunk in text.split(";"):
        toks = chunk.split()
        if not toks:
            raise BlockError("empty block in text form")
        block = []
        for tok in toks:
            if tok.endswith("'"):
                block.append(-int(tok[:-1]))
            else:
                block.append(int(tok))
        blocks.append(block)
    return partition_from_blocks(n, blocks)


# -- product ------------------------------------------------------------


def _product_parent(a: Partition, b: Partition) -> list[int]:
    """Union-find parent array for the 3n-vertex product graph of a, b.

    Slots 0..n-1 are the top row, n..2n-1 the bottom row, 2n..3n-1 the
    middle row.
    """
    n = a.n
    parent = list(range(3 * n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx

    # a occupies top + middle, b occupies middle + bottom.
    first: dict[int, int] = {}
    la = a.labels
    for i in range(n):
        lab = la[i]
        if lab in first:
            union(first[lab], i)
        else:
            first[lab] = i
    for i in range(n):
        lab = la[n + i]
        if lab in first:
            union(first[lab], 2 * n + i)
        else:
            first[lab] = 2 * n + i
    first.clear()
    lb = b.labels
    for i in range(n):
        lab = lb[i]
        if lab in first:
            union(first[lab], 2 * n + i)
        else:
            first[lab] = 2 * n + i
    for i in range(n):
        lab = lb[n + i]
        if lab in first:
            union(first[lab], n + i)
        else:
            first[lab] = n + i
    return [find(x) for x in range(3 * n)]


def multiply(a: Partition, b: Partition) -> Partition:
    """Product in the partition monoid."""
    if a.n != b.n:
        raise DegreeError(f"degree mismatch: {a.n} vs {b.n}")
    n = a.n
    roots = _product_parent(a, b)
    return Partition(n, roots[: 2 * n])


def multiply_with_floats(a: Partition, b: Partition) -> tuple[Partition, int]:
    """Product together with the count of floating (middle-only) components."""
    if a.n != b.n:
        raise DegreeError(f"degree mismatch: {a.n} vs {b.n}")
    n = a.n
    roots = _product_parent(a, b)
    outer = set(roots[: 2 * n])
    floating = {r for r in roots[2 * n :] if r not in outer}
    return Partition(n, roots[: 2 * n]), len(floating)


def floating_components(a: Partition, b: Partition) -> list[frozenset[int]]:
    """Floating components of the product graph, as sets of middle points i''."""
    if a.n != b.n:
        raise DegreeError(f"degree mismatch: {a.n} vs {b.n}")
    n = a.n
    roots = _product_parent(a, b)
    outer = set(roots[: 2 * n])
    comps: dict[int, set[int]] = {}
    for i in range(n):
        r = roots[2 * n + i]
        if r not in outer:
            comps.setdefault(r, set()).add(i + 1)
    return sorted((frozenset(v) for v in comps.values()), key=sorted)


def involution(a: Partition) -> Partition:
    """Swap dashed and undashed points."""
    n = a.n
    return Partition(n, a.labels[n:] + a.labels[:n])


def is_idempotent(a: Partition) -> bool:
    return multiply(a, a) == a


# -- equivalences on [n] --------------------------------------------------


def eq_join(
    sigma: frozenset[frozenset[int]], tau: frozenset[frozenset[int]], n: int
) -> frozenset[frozenset[int]]:
    parent = list(range(n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for cls in itertools.chain(sigma, tau):
        it = iter(sorted(cls))
        first = next(it)
        for other in it:
            ra, rb = find(first), find(other)
            if ra != rb:
                parent[rb] = ra
    groups: dict[int, set[int]] = {}
    for x in range(1, n + 1):
        groups.setdefault(find(x), set()).add(x)
    return frozenset(frozenset(v) for v in groups.values())


def eq_refines(
    sigma: frozenset[frozenset[int]], tau: frozenset[frozenset[int]]
) -> bool:
    """True iff sigma <= tau as relations (each sigma-class inside a tau-class)."""
    lookup = {}
    for cls in tau:
        for x in cls:
            lookup[x] = cls
    return all(cls <= lookup[next(iter(cls))] for cls in sigma)


def super_kernel(a: Partition) -> frozenset[frozenset[int]]:
    return eq_join(a.ker(), a.coker(), a.n)


def idempotent_components(a: Partition):
    """KER(a)-component decomposition certifying idempotency, or None.

    Returns a list of (component point set on [n], rank of the restriction)
    exactly when a decomposes as a disjoint union over its KER-classes with
    every component of rank <= 1; returns None otherwise.  The truthiness of
    the result matches is_idempotent(a).
    """
    n = a.n
    classes = sorted(super_kernel(a), key=sorted)
    cls_of = {}
    for idx, cls in enumerate(classes):
        for x in cls:
            cls_of[x] = idx
    ranks = [0] * len(classes)
    for block in a.blocks():
        tops = [p for p in block if p > 0]
        bots = [-p for p in block if p < 0]
        home = {cls_of[x] for x in tops} | {cls_of[x] for x in bots}
        if len(home) != 1:
            return None
        if tops and bots:
            ranks[next(iter(home))] += 1
    if any(r > 1 for r in ranks):
        return None
    return [(classes[i], ranks[i]) for i in range(len(classes))]


# -- projections ----------------------------------------------------------


def is_projection(a: Partition) -> bool:
    return involution(a) == a and is_idempotent(a)


def full_domain_projection(
    n: int, classes: Iterable[Iterable[int]]
) -> Partition:
    """The full-(co)domain projection whose transversals are the given classes."""
    raw = [-1] * (2 * n)
    for bid, cls in enumerate(sorted((sorted(c) for c in classes))):
        for x in cls:
            raw[x - 1] = bid
            raw[n + x - 1] = bid
    if -1 in raw:
        raise BlockError("classes do not cover [n]")
    return Partition(n, raw)


def d_projection(a: Partition) -> Partition:
    """id_{ker(a)}: the full-domain projection with D(a) * a = a."""
    return full_domain_projection(a.n, a.ker())


def r_projection(a: Partition) -> Partition:
    """id_{coker(a)}: a * R(a) = a."""
    return full_domain_projection(a.n, a.coker())


def projection_from_parts(
    n: int,
    transversals: Iterable[Iterable[int]],
    nontransversals: Iterable[Iterable[int]],
) -> Partition:
    """Projection with given transversal classes and matched upper/lower blocks."""
    blocks: list[list[int]] = []
    for cls in transversals:
        cls = sorted(cls)
        blocks.append([*cls, *(-x for x in cls)])
    for cls in nontransversals:
        cls = sorted(cls)
        blocks.append(list(cls))
        blocks.append([-x for x in cls])
    return partition_from_blocks(n, blocks)


# -- twisted product -------------------------------------------------------


@dataclass(frozen=True)
class TwistedElement:
    shift: int
    part: Partition


def twisted_multiply(x: TwistedElement, y: TwistedElement) -> TwistedElement:
    prod, phi = multiply_with_floats(x.part, y.part)
    return TwistedElement(x.shift + y.shift + phi, prod)


# -- finite (star) semigroup handles ---------------------------------------


class FiniteStarSemigroup:
    """Abstract finite semigroup with optional involution.

    Subclasses define `kind`, `_enumerate`, `product`, and (optionally)
    `star`.  All values are immutable and all operations pure.
    """

    kind: str = "abstract"
    has_star: bool = True

    def __init__(self):
        self._elements: list | None = None
        self._idempotents: list | None = None
        self._projections: list | None = None

    # subclass surface
    def _enumerate(self) -> Iterator:
        raise NotImplementedError

    def product(self, x, y):
        raise NotImplementedError

    def star(self, x):
        raise NotImplementedError

    def text(self, x) -> str:
        raise NotImplementedError

    def parse(self, s: str):
        raise NotImplementedError

    def sort_key(self, x):
        return x

    def rank(self, x) -> int | None:
        return None

    # shared helpers
    def elements(self) -> list:
        if self._elements is None:
            self._elements = sorted(self._enumerate(), key=self.sort_key)
        return self._elements

    def size(self) -> int:
        return len(self.elements())

    def is_idempotent(self, x) -> bool:
        return self.product(x, x) == x

    def idempotents(self) -> list:
        if self._idempotents is None:
            self._idempotents = [x for x in self.elements() if self.is_idempotent(x)]
        return self._idempotents

    def projections(self) -> list:
        if self._projections is None:
            if not self.has_star:
                raise ValueError(f"{self.kind} has no involution")
            self._projections = [
                e for e in self.idempotents() if self.star(e) == e
            ]
        return self._projections

    def describe(self) -> str:
        return self.kind


def _rgs_strings(m: int) -> Iterator[tuple[int, ...]]:
    """All restricted growth strings of length m (canonical set partitions).

    A string satisfies a[0] = 0 and a[i] <= 1 + max(a[0..i-1]); the bound
    array b tracks that maximum plus one.
    """
    a = [0] * m
    b = [1] * m
    while True:
        yield tuple(a)
        i = m - 1
        while i >= 1 and a[i] == b[i]:
            i -= 1
        if i <= 0:
            return
        a[i] += 1
        nb = max(b[i], a[i] + 1)
        for j in range(i + 1, m):
            a[j] = 0
            b[j] = nb


class PartitionHandleBase(FiniteStarSemigroup):
    """Shared surface for handles whose elements are Partitions."""

    def __init__(self, n: int, allow_large: bool = False):
        super().__init__()
        if n < 1:
            raise DegreeError("degree must be positive")
        if n > DEGREE_CAP and not allow_large:
            raise DegreeError(
                f"degree {n} exceeds the default cap {DEGREE_CAP}; "
                "pass allow_large=True to override"
            )
        self.n = n

    def product(self, x: Partition, y: Partition) -> Partition:
        return multiply(x, y)

    def star(self, x: Partition) -> Partition:
        return involution(x)

    def text(self, x: Partition) -> str:
        return x.to_text()

    def parse(self, s: str) -> Partition:
        return partition_from_text(self.n, s)

    def sort_key(self, x: Partition):
        return x.labels

    def rank(self, x: Partition) -> int:
        return x.rank()

    def ranks(self) -> list[int]:
        raise NotImplementedError


class PartitionMonoid(PartitionHandleBase):
    kind = "partition"

    def _enumerate(self) -> Iterator[Partition]:
        n = self.n
        for rgs in _rgs_strings(2 * n):
            yield Partition(n, rgs, _canon=True)

    def ranks(self) -> list[int]:
        return list(range(self.n + 1))

    def describe(self) -> str:
        return f"P_{self.n}"


class BrauerMonoid(PartitionHandleBase):
    kind = "brauer"

    def _enumerate(self) -> Iterator[Partition]:
        n = self.n
        points = list(range(2 * n))

        def matchings(free: tuple[int, ...]) -> Iterator[list[tuple[int, int]]]:
            if not free:
                yield []
                return
            x, rest = free[0], free[1:]
            for k, y in enumerate(rest):
                sub = rest[:k] + rest[k + 1 :]
                for m in matchings(sub):
                    yield [(x, y)] + m

        for m in matchings(tuple(points)):
            raw = [0] * (2 * n)
            for bid, (x, y) in enumerate(m):
                raw[x] = bid
                raw[y] = bid
            yield Partition(n, raw)

    def ranks(self) -> list[int]:
        return list(range(self.n % 2, self.n + 1, 2))

    def describe(self) -> str:
        return f"B_{self.n}"


class TransformationMonoid(PartitionHandleBase):
    """T_n as the partitions with full domain and trivial cokernel."""

    kind = "transformation"
    has_star = False

    def _enumerate(self) -> Iterator[Partition]:
        n = self.n
        for images in itertools.product(range(1, n + 1), repeat=n):
            yield transformation_partition(n, images)

    def star(self, x):
        raise ValueError("T_n is not closed under the involution")

    def ranks(self) -> list[int]:
        return list(range(1, self.n + 1))

    def describe(self) -> str:
        return f"T_{self.n}"


def transformation_partition(n: int, images: Sequence[int]) -> Partition:
    """The partition of the map i -> images[i-1] (full domain, trivial cokernel)."""
    raw = [-1] * (2 * n)
    nxt = 0
    by_img: dict[int, int] = {}
    for i in range(n):
        img = images[i]
        if img not in by_img:
            by_img[img] = nxt
            nxt += 1
        raw[i] = by_img[img]
    for j in range(n):
        if (j + 1) in by_img:
            raw[n + j] = by_img[j + 1]
        else:
            raw[n + j] = nxt
            nxt += 1
    return Partition(n, raw)


ADJ_ZERO = ("0",)


class AdjacencySemigroup(FiniteStarSemigroup):
    """Adjacency semigroup of a finite symmetric reflexive connected digraph.

    Elements are ordered vertex pairs plus a distinguished zero; the product
    of (p,q) and (r,s) is (p,s) when (q,r) is an edge and zero otherwise.
    """

    kind = "adjacency"

    def __init__(self, vertices: Iterable[str], edges: Iterable[tuple[str, str]]):
        super().__init__()
        self.vertices = tuple(sorted(set(map(str, vertices))))
        if not self.vertices:
            raise ValueError("vertex set is empty")
        es = set()
        for u, v in edges:
            es.add((str(u), str(v)))
            es.add((str(v), str(u)))
        for v in self.vertices:
            es.add((v, v))
        for u, v in es:
            if u not in self.vertices or v not in self.vertices:
                raise ValueError(f"edge endpoint {u!r} or {v!r} is not a vertex")
        self.edges = frozenset(es)
        if not self._connected():
            raise ValueError("the simple reduct of the graph must be connected")

    def _connected(self) -> bool:
        seen = {self.vertices[0]}
        todo = [self.vertices[0]]
        while todo:
            u = todo.pop()
            for a, b in self.edges:
                if a == u and b not in seen:
                    seen.add(b)
                    todo.append(b)
        return len(seen) == len(self.vertices)

    def simple_edge_count(self) -> int:
        return len({frozenset((u, v)) for u, v in self.edges if u != v})

    def _enumerate(self) -> Iterator:
        yield ADJ_ZERO
        for p in self.vertices:
            for q in self.vertices:
                yield (p, q)

    def product(self, x, y):
        if x == ADJ_ZERO or y == ADJ_ZERO:
            return ADJ_ZERO
        if (x[1], y[0]) in self.edges:
            return (x[0], y[1])
        return ADJ_ZERO

    def star(self, x):
        if x == ADJ_ZERO:
            return ADJ_ZERO
        return (x[1], x[0])

    def text(self, x) -> str:
        if x == ADJ_ZERO:
            return "0"
        return f"({x[0]},{x[1]})"

    def parse(self, s: str):
        s = s.strip()
        if s == "0":
            return ADJ_ZERO
        if not (s.startswith("(") and s.endswith(")")):
            raise ValueError(f"bad adjacency element text {s!r}")
        p, q = s[1:-1].split(",")
        return (p.strip(), q.strip())

    def sort_key(self, x):
        return (0,) if x == ADJ_ZERO else (1, x)

    def describe(self) -> str:
        return f"A(graph on {len(self.vertices)} vertices)"
