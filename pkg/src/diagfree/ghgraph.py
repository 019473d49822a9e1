"""Graham-Houghton graphs of regular D-classes and the named spanning trees.

The graph of a D-class is bipartite on the R-class indices I and L-class
indices J (two copies of the projection list for star handles); its edges
are the idempotents of the class.  Tree constructors return TreeSet values
whose edges are monoid elements; `verify_spanning_tree` certifies spanning
either of the full graph or of a stated induced subgraph.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Sequence

from .diagram import (
    Partition,
    involution,
    partition_from_blocks,
    transformation_partition,
)
from .green import DClassData


@dataclass
class GHGraph:
    dclass: DClassData
    edges: dict[tuple[int, int], Any]  # (i, j) -> idempotent

    @property
    def n_left(self) -> int:
        return len(self.dclass.projections)

    @property
    def n_right(self) -> int:
        return len(self.dclass.lreps)

    def endpoints(self, e) -> tuple[int, int]:
        return (self.dclass.r_index_of(e), self.dclass.l_index_of(e))

    def adjacency(self) -> dict[int, list[int]]:
        """Adjacency over the fused vertex set: left i -> i, right j -> n_left + j."""
        adj: dict[int, list[int]] = {
            v: [] for v in range(self.n_left + self.n_right)
        }
        for (i, j) in sorted(self.edges):
            adj[i].append(self.n_left + j)
            adj[self.n_left + j].append(i)
        return adj


@dataclass
class TreeSet:
    kind: str
    edges: list  # idempotents, canonical order
    scope: str = "full"  # "full" or "induced"
    left_vertices: frozenset[int] | None = None
    right_vertices: frozenset[int] | None = None

    def __contains__(self, e) -> bool:
        return e in set(self.edges)

    def __len__(self) -> int:
        return len(self.edges)


def build_gh_graph(d: DClassData) -> GHGraph:
    return GHGraph(d, dict(d.e_of_pair))


def is_connected(g: GHGraph) -> bool:
    total = g.n_left + g.n_right
    if total == 0:
        return False
    adj = g.adjacency()
    seen = {0}
    todo = [0]
    while todo:
        v = todo.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return len(seen) == total


def spanning_tree_bfs(g: GHGraph, root: int = 0) -> TreeSet:
    """Deterministic BFS spanning tree of the full graph, rooted at left[root]."""
    if not is_connected(g):
        raise ValueError("graph is not connected")
    adj = g.adjacency()
    nl = g.n_left
    edge_lookup = {}
    for (i, j), e in g.edges.items():
        edge_lookup[(i, nl + j)] = e
        edge_lookup[(nl + j, i)] = e
    seen = {root}
    frontier = [root]
    edges = []
    while frontier:
        nxt = []
        for v in frontier:
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    edges.append(edge_lookup[(v, w)])
                    nxt.append(w)
        frontier = nxt
    d = g.dclass
    edges.sort(key=d.handle.sort_key)
    return TreeSet("generic", edges)


def spanning_tree_with_projections(g: GHGraph) -> TreeSet:
    """A spanning tree of the full graph containing every projection edge.

    The projection edges (i_p, j_p) form a perfect matching between the two
    sides, so greedily extending them in canonical edge order cannot create
    a cycle before the graph is spanned.
    """
    d = g.dclass
    if not d.is_star:
        raise ValueError("requires a projection-indexed D-class")
    nl = g.n_left
    parent = list(range(nl + g.n_right))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edges = []

    def take(i: int, j: int, e) -> bool:
        ri, rj = find(i), find(nl + j)
        if ri == rj:
            return False
        parent[rj] = ri
        edges.append(e)
        return True

    for i in range(nl):
        take(i, i, d.e_of_pair[(i, i)])
    for (i, j) in sorted(g.edges):
        take(i, j, g.edges[(i, j)])
    tree = TreeSet("generic-with-projections", sorted(edges, key=d.handle.sort_key))
    if not verify_spanning_tree(g, tree):
        raise ValueError("graph is not connected")
    return tree


def tree_scope(g: GHGraph, t: TreeSet) -> tuple[set[int], set[int]]:
    """The stated vertex scope of a tree kind, as (left, right) index sets.

    T_lex spans the full-domain rows against the trivial-cokernel columns;
    T_fd those rows against every column with at least one lower block, and
    T_fc is its mirror image.  All other kinds claim the full graph.
    """
    d = g.dclass
    if t.scope == "full":
        return set(range(g.n_left)), set(range(g.n_right))
    if t.left_vertices is not None and t.right_vertices is not None:
        return set(t.left_vertices), set(t.right_vertices)
    nr = d.handle.n - d.rank
    ntu = [p.ntu() for p in d.projections]
    if t.kind == "T_lex":
        return (
            {i for i, k in enumerate(ntu) if k == 0},
            {j for j, k in enumerate(ntu) if k == nr},
        )
    if t.kind == "T_fd":
        return (
            {i for i, k in enumerate(ntu) if k == 0},
            {j for j, k in enumerate(ntu) if k >= 1},
        )
    if t.kind == "T_fc":
        return (
            {i for i, k in enumerate(ntu) if k >= 1},
            {j for j, k in enumerate(ntu) if k == 0},
        )
    raise ValueError(f"no stated scope for tree kind {t.kind}")


def verify_spanning_tree(g: GHGraph, t: TreeSet, scope: str | None = None) -> bool:
    """Edge membership, connectivity, and the tree edge count, on the stated
    scope (full graph, or the induced subgraph the tree kind claims)."""
    pairs = []
    edge_set = {}
    for (i, j), e in g.edges.items():
        edge_set[e] = (i, j)
    for e in t.edges:
        if e not in edge_set:
            return False
        pairs.append(edge_set[e])
    left, right = tree_scope(g, t)
    for (i, j) in pairs:
        if i not in left or j not in right:
            return False
    if len(pairs) != len(left) + len(right) - 1:
        return False
    # connectivity of the tree over the scope vertices
    adj: dict[tuple[str, int], list] = {}
    for (i, j) in pairs:
        adj.setdefault(("L", i), []).append(("R", j))
        adj.setdefault(("R", j), []).append(("L", i))
    verts = {("L", i) for i in left} | {("R", j) for j in right}
    if not verts:
        return False
    start = next(iter(sorted(verts)))
    seen = {start}
    todo = [start]
    while todo:
        v = todo.pop()
        for w in adj.get(v, ()):
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen == verts


# -- named trees for the partition monoid -------------------------------------


def set_partitions_into(items: Sequence[int], k: int):
    """Set partitions of items into exactly k blocks, deterministic order."""
    items = list(items)
    if k <= 0 or k > len(items):
        return
    if len(items) == k:
        yield [[x] for x in items]
        return
    if k == 1:
        yield [list(items)]
        return
    first, rest = items[0], items[1:]
    for part in set_partitions_into(rest, k - 1):
        yield [[first]] + [list(b) for b in part]
    for part in set_partitions_into(rest, k):
        for i in range(len(part)):
            yield [
                ([first] + list(b)) if i == idx else list(b)
                for idx, b in enumerate(part)
            ]


def idempotent_transformation(n: int, blocks: Sequence[Sequence[int]], image: Sequence[int]) -> Partition:
    """e_{V,C}: maps each block V_i to its chosen cross-section point c_i."""
    images = [0] * n
    for block, c in zip(blocks, image):
        for x in block:
            images[x - 1] = c
    return transformation_partition(n, images)


def _lex_c_of(blocks: list[list[int]]) -> list[int]:
    return [min(b) for b in blocks]


def _lex_v_of(c: Sequence[int], n: int) -> list[list[int]]:
    c = sorted(c)
    blocks = []
    lo = 1
    for ci in c[:-1]:
        # blocks [1,c1], (c1,c2], ..., (c_{r-1}, n]
        blocks.append(list(range(lo, ci + 1)))
        lo = ci + 1
    blocks.append(list(range(lo, n + 1)))
    return blocks


def t_lex(n: int, r: int) -> TreeSet:
    """Spanning tree of the transformation part of the rank-r class.

    For every kernel V the edge onto the lexicographically least
    cross-section, and for every image set C the edge from the least
    partition it crosses; the base idempotent is listed by both.
    """
    if not (1 <= r <= n - 2):
        raise ValueError("t_lex requires 1 <= r <= n-2")
    edges = set()
    for v in set_partitions_into(range(1, n + 1), r):
        blocks = sorted((sorted(b) for b in v), key=lambda b: b[0])
        edges.add(idempotent_transformation(n, blocks, _lex_c_of(blocks)))
    for c in itertools.combinations(range(1, n + 1), r):
        blocks = _lex_v_of(c, n)
        edges.add(idempotent_transformation(n, blocks, sorted(c)))
    return TreeSet("T_lex", sorted(edges, key=lambda e: e.labels), scope="induced")


def _projection_parts(p: Partition) -> tuple[list[list[int]], list[list[int]]]:
    trans, upper = [], []
    for b in p.blocks():
        tops = sorted(x for x in b if x > 0)
        bots = sorted(-x for x in b if x < 0)
        if tops and bots:
            trans.append(tops)
        elif tops:
            upper.append(tops)
    return trans, upper


def e_p_edge(p: Partition) -> Partition:
    """Full-domain idempotent attached to a projection with >= 1 upper block:
    the non-transversal classes are absorbed into the transversal class with
    the least minimum, and reappear below as non-transversals."""
    trans, upper = _projection_parts(p)
    assert upper, "projection must have at least one upper block"
    trans.sort(key=min)
    a1 = trans[0]
    blocks: list[list[int]] = []
    blocks.append(
        sorted(a1 + [x for b in upper for x in b]) + [-x for x in a1]
    )
    for a in trans[1:]:
        blocks.append(sorted(a) + [-x for x in a])
    for b in upper:
        blocks.append([-x for x in b])
    return partition_from_blocks(p.n, blocks)


def _projections_by_stratum(n: int, r: int, k: int) -> list[Partition]:
    """P_k(n, r): projections of rank r with exactly k upper blocks."""
    from .diagram import projection_from_parts

    total = r + k
    out = []
    if total > n or total < 1:
        return out
    for part in set_partitions_into(range(1, n + 1), total):
        blocks = [sorted(b) for b in part]
        for tset in itertools.combinations(range(total), r):
            trans = [blocks[i] for i in tset]
            nontrans = [blocks[i] for i in range(total) if i not in tset]
            out.append(projection_from_parts(n, trans, nontrans))
    return sorted(set(out), key=lambda e: e.labels)


def t_fd(n: int, r: int) -> TreeSet:
    """t_lex extended by the absorbing edges of every projection with
    between 1 and n-r-1 upper blocks; spans full-domain rows against all
    columns except the full-codomain ones."""
    if not (1 <= r <= n - 2):
        raise ValueError("t_fd requires 1 <= r <= n-2")
    edges = set(t_lex(n, r).edges)
    for k in range(1, n - r):
        for p in _projections_by_stratum(n, r, k):
            edges.add(e_p_edge(p))
    return TreeSet("T_fd", sorted(edges, key=lambda e: e.labels), scope="induced")


def t_fc(n: int, r: int) -> TreeSet:
    edges = [involution(e) for e in t_fd(n, r).edges]
    return TreeSet("T_fc", sorted(edges, key=lambda e: e.labels), scope="induced")


def t_s(n: int, r: int, s: Partition) -> TreeSet:
    """t_fd + t_fc joined by a single full-(co)domain projection s."""
    from .diagram import is_projection

    if not (1 <= r <= n - 2):
        raise ValueError("t_s requires 1 <= r <= n-2")
    if not (s.n == n and s.rank() == r and s.ntu() == 0 and is_projection(s)):
        raise ValueError("s must be a full-domain projection of rank r")
    edges = set(t_fd(n, r).edges) | set(t_fc(n, r).edges) | {s}
    return TreeSet("T_s", sorted(edges, key=lambda e: e.labels), scope="full")


def t_pg(n: int, r: int) -> TreeSet:
    """t_fd together with every projection of the class; contains P_D."""
    if not (1 <= r <= n - 2):
        raise ValueError("t_pg requires 1 <= r <= n-2")
    edges = set(t_fd(n, r).edges)
    for k in range(0, n - r + 1):
        edges.update(_projections_by_stratum(n, r, k))
    return TreeSet("T_pg", sorted(edges, key=lambda e: e.labels), scope="full")


def t_rank0(n: int) -> TreeSet:
    """All rank-0 idempotents with a single upper or a single lower block."""
    if n < 2:
        raise ValueError("t_rank0 requires n >= 2")
    edges = set()
    top = [list(range(1, n + 1))]
    for k in range(1, n + 1):
        for part in set_partitions_into(range(1, n + 1), k):
            lower = [[-x for x in b] for b in part]
            edges.add(partition_from_blocks(n, [sum(lower, [])] + [list(b) for b in part]))
            edges.add(
                partition_from_blocks(
                    n, [list(range(1, n + 1))] + lower
                )
            )
    return TreeSet("T_rank0", sorted(edges, key=lambda e: e.labels), scope="full")


def p0_projections(n: int, r: int) -> list[Partition]:
    return _projections_by_stratum(n, r, 0)


def p1_projections(n: int, r: int) -> list[Partition]:
    return _projections_by_stratum(n, r, 1)


def friendliness_tree(d: DClassData, root: int = 0) -> list[tuple[int, int]]:
    """Directed BFS spanning tree of the friendliness digraph, rooted at
    the projection with the given index; edges point away from the root."""
    nbrs: dict[int, list[int]] = {}
    for (i, j) in sorted(d.friendly):
        if i != j:
            nbrs.setdefault(i, []).append(j)
    seen = {root}
    frontier = [root]
    out: list[tuple[int, int]] = []
    while frontier:
        nxt = []
        for v in frontier:
            for w in nbrs.get(v, ()):
                if w not in seen:
                    seen.add(w)
                    out.append((v, w))
                    nxt.append(w)
        frontier = nxt
    if len(seen) != len(d.projections):
        raise ValueError("friendliness digraph is not connected")
    return out


# -- exports -------------------------------------------------------------------


def gh_to_dot(g: GHGraph, tree: TreeSet | None = None) -> str:
    """DOT rendering with tree edges coloured."""
    d = g.dclass
    h = d.handle
    tree_edges = set(tree.edges) if tree is not None else set()
    lines = ["graph gh {", "  rankdir=TB;", "  node [shape=box, fontsize=9];"]
    for i, p in enumerate(d.projections):
        label = h.text(p) if d.is_star else str(p)
        lines.append(f'  L{i} [label="R: {_dot_escape(label)}"];')
    for j, q in enumerate(d.lreps):
        label = h.text(q) if d.is_star else str(q)
        lines.append(f'  R{j} [label="L: {_dot_escape(label)}"];')
    for (i, j) in sorted(g.edges):
        e = g.edges[(i, j)]
        style = ' [color=red, penwidth=2]' if e in tree_edges else ""
        lines.append(f"  L{i} -- R{j}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_escape(s) -> str:
    return str(s).replace('"', '\\"')


def tree_to_json(d: DClassData, t: TreeSet) -> dict:
    h = d.handle
    return {
        "kind": t.kind,
        "scope": t.scope,
        "edges": [h.text(e) for e in t.edges],
    }
