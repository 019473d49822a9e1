"""Group presentations for the maximal subgroups, semigroup presentation
documents, and deterministic Tietze simplification.

Words over a presentation's generators are tuples of signed 1-based
indices: +k is generator k-1, -k its inverse.  Relators are freely
reduced.  Generator names are keyed by the canonical text form of the
indexing idempotent (or projection pair), so presentations are
byte-for-byte reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .biorder import LinkedDiamond, SquareEntry
from .diagram import FiniteStarSemigroup
from .green import DClassData
from .ghgraph import TreeSet

Word = tuple[int, ...]


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def gen_index(self, name: str) -> int:
        return self.generators.index(name)

    def word_str(self, w: Word) -> str:
        if not w:
            return "1"
        parts = []
        for x in w:
            name = self.generators[abs(x) - 1]
            parts.append(name if x > 0 else name + "^-1")
        return "*".join(parts)

    def describe(self) -> str:
        return (
            f"<{len(self.generators)} generators | {len(self.relators)} relators>"
        )


def free_reduce(w: Sequence[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w: Word) -> Word:
    w = free_reduce(w)
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return w


def invert_word(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def relator_key(w: Word) -> Word:
    """Canonical form up to rotation and inversion, for deduplication."""
    w = cyclic_reduce(w)
    if not w:
        return ()
    best = None
    for v in (w, invert_word(w)):
        for i in range(len(v)):
            rot = v[i:] + v[:i]
            if best is None or rot < best:
                best = rot
    return best


# -- presentation constructors -------------------------------------------------


def gen_name_for_idempotent(h: FiniteStarSemigroup, e) -> str:
    return f"a[{h.text(e)}]"


def gen_name_for_pair(h: FiniteStarSemigroup, p, q) -> str:
    return f"a[{h.text(p)} | {h.text(q)}]"


def _square_relators(
    d: DClassData, squares: Iterable[SquareEntry], gen_of: dict
) -> list[Word]:
    """One relator a_e^-1 a_f a_h^-1 a_g per deduplicated (rows, cols) key."""
    seen = set()
    out = []
    for s in sorted(squares, key=lambda s: (s.rows, s.cols, s.oclass)):
        key = (s.rows, s.cols)
        if key in seen:
            continue
        seen.add(key)
        i, k = key[0]
        j, l = key[1]
        e = gen_of[d.e_of_pair[(i, j)]]
        f = gen_of[d.e_of_pair[(i, l)]]
        g = gen_of[d.e_of_pair[(k, j)]]
        hh = gen_of[d.e_of_pair[(k, l)]]
        out.append(free_reduce((-e, f, -hh, g)))
    return [w for w in out if w]


def presn_ig(
    d: DClassData, t: TreeSet, squares: Sequence[SquareEntry]
) -> GroupPresentation:
    """Maximal-subgroup presentation over a spanning tree: a_e = 1 on the
    tree, plus one quotient relation per singular square."""
    h = d.handle
    from .ghgraph import build_gh_graph, verify_spanning_tree

    if not verify_spanning_tree(build_gh_graph(d), t, scope="full"):
        raise ValueError("tree does not span the Graham-Houghton graph")
    gens = tuple(gen_name_for_idempotent(h, e) for e in d.idempotents)
    gen_of = {e: idx + 1 for idx, e in enumerate(d.idempotents)}
    relators: list[Word] = []
    for e in sorted(t.edges, key=h.sort_key):
        relators.append((gen_of[e],))
    relators.extend(_square_relators(d, squares, gen_of))
    return GroupPresentation(gens, tuple(relators))


def presn_pg_squares(
    d: DClassData, t: TreeSet, squares: Sequence[SquareEntry]
) -> GroupPresentation:
    """The same presentation with a_e a_{e*} = 1 adjoined; the tree must
    contain every projection of the class."""
    h = d.handle
    missing = [p for p in d.projections if p not in set(t.edges)]
    if missing:
        raise ValueError("tree must contain every projection of the D-class")
    base = presn_ig(d, t, squares)
    gen_of = {e: idx + 1 for idx, e in enumerate(d.idempotents)}
    inv_rel: list[Word] = []
    for e in d.idempotents:
        es = h.star(e)
        if h.sort_key(e) <= h.sort_key(es):
            inv_rel.append((gen_of[e], gen_of[es]))
    return GroupPresentation(base.generators, base.relators + tuple(inv_rel))


def presn_pg_linked(
    d: DClassData,
    diamonds: Sequence[LinkedDiamond],
    f_tree: Sequence[tuple[int, int]],
) -> GroupPresentation:
    """Presentation on generators a_{p,q} for friendly pairs: tree edges and
    diagonal generators trivial, a_{p,q} inverse to a_{q,p}, and one quotient
    relation per non-degenerate linked diamond."""
    h = d.handle
    P = d.projections
    pairs = sorted(d.friendly)
    gens = tuple(gen_name_for_pair(h, P[i], P[j]) for (i, j) in pairs)
    gid = {pair: idx + 1 for idx, pair in enumerate(pairs)}
    tree_pairs = set(f_tree)
    if tree_pairs - set(pairs):
        raise ValueError("tree edge outside the friendliness relation")
    relators: list[Word] = []
    for (i, j) in sorted(tree_pairs):
        relators.append((gid[(i, j)],))
    for i in range(len(P)):
        relators.append((gid[(i, i)],))
    for (i, j) in pairs:
        if i < j and (j, i) in gid:
            relators.append((gid[(i, j)], gid[(j, i)]))
    for dia in diamonds:
        if dia.degenerate:
            continue
        s, u = d.proj_index(dia.s), d.proj_index(dia.u)
        v, w = d.proj_index(dia.v), d.proj_index(dia.w)
        word = free_reduce(
            (-gid[(s, v)], gid[(s, w)], -gid[(u, w)], gid[(u, v)])
        )
        if word:
            relators.append(word)
    return GroupPresentation(gens, tuple(relators))


def presn_pg_triangles(
    d: DClassData,
    triangles: Sequence[tuple],
    f_tree: Sequence[tuple[int, int]],
) -> GroupPresentation:
    """Variant whose quotient relations are a_{u,s} a_{s,w} = a_{u,w} over
    the linked triangles."""
    h = d.handle
    P = d.projections
    pairs = sorted(d.friendly)
    gens = tuple(gen_name_for_pair(h, P[i], P[j]) for (i, j) in pairs)
    gid = {pair: idx + 1 for idx, pair in enumerate(pairs)}
    relators: list[Word] = []
    for (i, j) in sorted(set(f_tree)):
        relators.append((gid[(i, j)],))
    for i in range(len(P)):
        relators.append((gid[(i, i)],))
    for (i, j) in pairs:
        if i < j and (j, i) in gid:
            relators.append((gid[(i, j)], gid[(j, i)]))
    for (s, u, w, _p) in triangles:
        si, ui, wi = d.proj_index(s), d.proj_index(u), d.proj_index(w)
        word = free_reduce((gid[(ui, si)], gid[(si, wi)], -gid[(ui, wi)]))
        if word:
            relators.append(word)
    return GroupPresentation(gens, tuple(relators))


# -- semigroup presentation documents -------------------------------------------


@dataclass(frozen=True)
class SemigroupPresentationDoc:
    family: str
    generators: tuple[str, ...]
    relations: tuple[tuple[tuple[str, ...], tuple[str, ...]], ...]

    def render(self) -> str:
        lines = [f"# {self.family} presentation", f"generators ({len(self.generators)}):"]
        lines.extend(f"  {g}" for g in self.generators)
        lines.append(f"relations ({len(self.relations)}):")
        for lhs, rhs in self.relations:
            lines.append("  " + " ".join(lhs) + " = " + " ".join(rhs))
        return "\n".join(lines) + "\n"


def emit_semigroup_presentation(
    h: FiniteStarSemigroup, family: str, size_cap: int = 20000
) -> SemigroupPresentationDoc:
    """Symbolic defining presentations over the idempotents or projections.

    family: "ig" (basic pairs), "rig" (ig plus sandwich relations),
    "pg" (projection generators), or "pg-e" (idempotent generators with the
    projection-product relations adjoined).
    """
    from .green import sandwich_set

    if h.size() > size_cap:
        raise ValueError("handle too large to enumerate for emission")
    E = h.idempotents()
    name_e = {e: f"x[{h.text(e)}]" for e in E}

    def basic_relations():
        rels = []
        for e in E:
            for f in E:
                ef = h.product(e, f)
                fe = h.product(f, e)
                if ef in (e, f) or fe in (e, f):
                    rels.append(((name_e[e], name_e[f]), (name_e[ef],)))
        return rels

    if family == "ig":
        return SemigroupPresentationDoc(
            "ig", tuple(name_e[e] for e in E), tuple(basic_relations())
        )
    if family == "rig":
        rels = basic_relations()
        for e in E:
            for f in E:
                ef = (name_e[e], name_e[f])
                for s in sandwich_set(h, e, f):
                    rels.append(
                        ((name_e[e], name_e[s], name_e[f]), ef)
                    )
        return SemigroupPresentationDoc(
            "rig", tuple(name_e[e] for e in E), tuple(rels)
        )
    P = h.projections()
    name_p = {p: f"x[{h.text(p)}]" for p in P}
    if family == "pg":
        rels = []
        for p in P:
            rels.append(((name_p[p], name_p[p]), (name_p[p],)))
        for p in P:
            for q in P:
                pq = (name_p[p], name_p[q])
                rels.append((pq + pq, pq))
        for p in P:
            for q in P:
                pqp = h.product(h.product(p, q), p)
                rels.append(
                    ((name_p[p], name_p[q], name_p[p]), (name_p[pqp],))
                )
        return SemigroupPresentationDoc(
            "pg", tuple(name_p[p] for p in P), tuple(rels)
        )
    if family == "pg-e":
        rels = basic_relations()
        for p in P:
            for q in P:
                pq = h.product(p, q)
                rels.append(((name_e[p], name_e[q]), (name_e[pq],)))
        return SemigroupPresentationDoc(
            "pg-e", tuple(name_e[e] for e in E), tuple(rels)
        )
    raise ValueError(f"unknown family {family!r}")


def basic_pairs(h: FiniteStarSemigroup) -> list[tuple]:
    E = h.idempotents()
    out = []
    for e in E:
        for f in E:
            if h.product(e, f) in (e, f) or h.product(f, e) in (e, f):
                out.append((e, f))
    return out


# -- Tietze simplification -------------------------------------------------------


@dataclass
class SimplifyResult:
    presentation: GroupPresentation
    complete: bool
    eliminations: int


def tietze_simplify(
    p: GroupPresentation, budget: int | None = None
) -> SimplifyResult:
    """Deterministic elimination loop.

    Moves, applied to the lexicographically least eliminable generator:
    a generator equal to 1 (length-1 relator), a generator equal to another
    generator or its inverse (length-2 relator on two distinct generators),
    a generator occurring exactly once in exactly one relator (the relator
    is solved for it and discarded), and, when nothing else applies, a
    generator with a single occurrence in some relator (that relator is
    solved for it and the value substituted everywhere).  Every move
    removes a generator, so the loop terminates.  Relators are kept freely
    and cyclically reduced and deduplicated up to rotation and inversion.
    The output presents a group isomorphic to the input's.
    """
    names = list(p.generators)
    store: dict[Word, Word] = {}
    occ: dict[int, int] = {}
    by_gen: dict[int, set[Word]] = {}

    def add(w: Word) -> None:
        key = relator_key(w)
        if not key or key in store:
            return
        store[key] = w
        for x in w:
            occ[abs(x)] = occ.get(abs(x), 0) + 1
            by_gen.setdefault(abs(x), set()).add(key)

    def remove(key: Word) -> Word:
        w = store.pop(key)
        for x in w:
            occ[abs(x)] -= 1
        gens_in = {abs(x) for x in w}
        for g in gens_in:
            by_gen[g].discard(key)
        return w

    for w in p.relators:
        add(cyclic_reduce(w))

    eliminations = 0
    alive = set(range(1, len(names) + 1))

    while True:
        if budget is not None and eliminations >= budget:
            return _finish(names, alive, store, False, eliminations)
        candidates: dict[int, int] = {}  # gen -> move rank (0 best)
        for key, w in store.items():
            if len(w) == 1:
                g = abs(w[0])
                if candidates.get(g, 9) > 0:
                    candidates[g] = 0
            elif len(w) == 2 and abs(w[0]) != abs(w[1]):
                for x in w:
                    g = abs(x)
                    if candidates.get(g, 9) > 1:
                        candidates[g] = 1
        for g, cnt in occ.items():
            if cnt == 1 and g not in candidates:
                candidates[g] = 2
        general: tuple | None = None
        if not candidates:
            # General elimination: a single occurrence inside some relator.
            # Choose the substitution with the least growth of total relator
            # length (ties by length, then names) rather than by generator
            # name alone: name-first choices can wedge the collapse.
            for key, w in store.items():
                counts: dict[int, int] = {}
                for x in w:
                    counts[abs(x)] = counts.get(abs(x), 0) + 1
                for g, c in counts.items():
                    if c != 1:
                        continue
                    delta = (occ[g] - 1) * (len(w) - 1) - len(w)
                    cand = (delta, len(w), names[g - 1], key, g)
                    if general is None or cand < general:
                        general = cand
        if not candidates and general is None:
            return _finish(names, alive, store, True, eliminations)
        if candidates:
            g = min(candidates, key=lambda x: names[x - 1])
            move = candidates[g]
        else:
            g = general[4]
            move = 3
        if move == 0:
            drop = min(k for k in by_gen[g] if len(store[k]) == 1)
            repl: Word | None = ()
        elif move == 1:
            drop = min(
                k
                for k in by_gen[g]
                if len(store[k]) == 2 and abs(store[k][0]) != abs(store[k][1])
            )
            w = store[drop]
            pos = 0 if abs(w[0]) == g else 1
            x, y = w[pos], w[1 - pos]
            repl = (-y,) if x > 0 else (y,)
        elif move == 2:
            drop = min(by_gen[g])
            repl = None
        else:
            drop = general[3]
            w = store[drop]
            idx = next(i for i, x in enumerate(w) if abs(x) == g)
            gamma = w[idx + 1 :] + w[:idx]
            repl = invert_word(gamma) if w[idx] > 0 else gamma
        remove(drop)
        alive.discard(g)
        eliminations += 1
        if repl is not None:
            affected = sorted(by_gen.get(g, ()))
            for key in affected:
                old = remove(key)
                add(cyclic_reduce(_substitute(old, g, repl)))


def _substitute(w: Word, g: int, repl: Word) -> Word:
    out: list[int] = []
    for x in w:
        if x == g:
            out.extend(repl)
        elif x == -g:
            out.extend(invert_word(repl))
        else:
            out.append(x)
    return free_reduce(out)


def _finish(names, alive, relators, complete, eliminations) -> SimplifyResult:
    keep = sorted(alive)
    renum = {g: i + 1 for i, g in enumerate(keep)}
    new_gens = tuple(names[g - 1] for g in keep)
    new_rels = []
    for w in relators.values():
        assert all(abs(x) in renum for x in w)
        new_rels.append(tuple(renum[abs(x)] * (1 if x > 0 else -1) for x in w))
    new_rels.sort(key=lambda w: (len(w), w))
    return SimplifyResult(
        GroupPresentation(new_gens, tuple(new_rels)), complete, eliminations
    )


# -- emitters ---------------------------------------------------------------------


def to_cas_text(p: GroupPresentation, title: str = "") -> str:
    """Generic CAS-readable form with positional names and a trailing key."""
    lines = []
    if title:
        lines.append(f"# {title}")
    short = [f"a{i+1}" for i in range(len(p.generators))]
    quoted = ", ".join(f'"{s}"' for s in short)
    lines.append(f"F := FreeGroup({quoted});")
    body = []
    for w in p.relators:
        toks = []
        for x in w:
            toks.append(short[abs(x) - 1] + ("" if x > 0 else "^-1"))
        body.append("*".join(toks) if toks else "One(F)")
    lines.append("rels := [")
    for i, b in enumerate(body):
        comma = "," if i + 1 < len(body) else ""
        lines.append(f"  {b}{comma}")
    lines.append("];")
    for i, name in enumerate(p.generators):
        lines.append(f"# {short[i]} = {name}")
    return "\n".join(lines) + "\n"


def to_json_doc(p: GroupPresentation) -> dict:
    return {
        "generators": list(p.generators),
        "relators": [list(w) for w in p.relators],
    }


def presentation_from_json(doc: dict) -> GroupPresentation:
    return GroupPresentation(
        tuple(doc["generators"]),
        tuple(tuple(w) for w in doc["relators"]),
    )
