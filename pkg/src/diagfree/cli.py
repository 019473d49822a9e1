"""Command-line front end: stats, presentations, identification, square and
graph dumps, and the acceptance suite.

Exit codes: 0 ok, 1 acceptance failure, 2 usage error.  D-class and square
data are cached as versioned JSON keyed by (monoid, n, rank, code version);
the cache directory comes from --cache-dir, then $DIAGFREE_CACHE_DIR, then
~/.cache/diagfree.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .biorder import (
    SquareEntry,
    enumerate_linked_diamonds,
    enumerate_singular_squares,
    label,
    linked_triangles,
)
from .diagram import (
    AdjacencySemigroup,
    BrauerMonoid,
    FiniteStarSemigroup,
    PartitionMonoid,
    TransformationMonoid,
)
from .green import DClassData, dclass_data, dclass_from_doc, dclass_to_doc
from .ghgraph import (
    build_gh_graph,
    friendliness_tree,
    gh_to_dot,
    is_connected,
    p0_projections,
    p1_projections,
    spanning_tree_bfs,
    spanning_tree_with_projections,
    t_fc,
    t_fd,
    t_lex,
    t_pg,
    t_rank0,
    t_s,
    TreeSet,
)
from .groupid import IdentifyHints, identify
from .present import (
    gen_name_for_idempotent,
    presn_ig,
    presn_pg_linked,
    presn_pg_squares,
    presn_pg_triangles,
    to_cas_text,
    to_json_doc,
    tietze_simplify,
)

CACHE_SCHEMA = 1


def cache_dir(args) -> Path:
    if getattr(args, "cache_dir", None):
        return Path(args.cache_dir)
    env = os.environ.get("DIAGFREE_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "diagfree"


def make_handle(args) -> FiniteStarSemigroup:
    kind = args.monoid.lower()
    if kind in ("pn", "partition"):
        return PartitionMonoid(args.n, allow_large=args.allow_large)
    if kind == "brauer":
        return BrauerMonoid(args.n, allow_large=args.allow_large)
    if kind in ("tn", "transformation"):
        return TransformationMonoid(args.n, allow_large=args.allow_large)
    if kind == "adjacency":
        if not args.graph:
            raise SystemExit2("--graph FILE is required for adjacency semigroups")
        return read_adjacency(Path(args.graph))
    raise SystemExit2(f"unknown monoid kind {args.monoid!r}")


def read_adjacency(path: Path) -> AdjacencySemigroup:
    """Edge list, one `u v` pair per line; loops are implicit."""
    vertices: set[str] = set()
    edges = []
    for line in path.read_text().splitlines():
        toks = line.split()
        if not toks or toks[0].startswith("#"):
            continue
        if len(toks) == 1:
            vertices.add(toks[0])
            continue
        if len(toks) != 2:
            raise SystemExit2(f"bad edge line {line!r}")
        vertices.update(toks)
        edges.append((toks[0], toks[1]))
    return AdjacencySemigroup(sorted(vertices), edges)


class SystemExit2(SystemExit):
    def __init__(self, msg: str):
        print(f"error: {msg}", file=sys.stderr)
        super().__init__(2)


def _cache_key(h: FiniteStarSemigroup, rank, what: str) -> str:
    tag = h.describe().replace("(", "_").replace(")", "").replace(" ", "")
    return f"{tag}-r{rank}-{what}-v{CACHE_SCHEMA}.{__version__}.json"


def load_dclass(args, h: FiniteStarSemigroup, rank) -> DClassData:
    if isinstance(h, AdjacencySemigroup) or getattr(args, "no_cache", False):
        return dclass_data(h, rank)
    path = cache_dir(args) / _cache_key(h, rank, "dclass")
    if path.exists():
        return dclass_from_doc(h, json.loads(path.read_text()))
    d = dclass_data(h, rank)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(dclass_to_doc(d), indent=2, sort_keys=True))
    return d


def squares_to_doc(d: DClassData, squares: list[SquareEntry]) -> dict:
    h = d.handle
    return {
        "version": CACHE_SCHEMA,
        "monoid": h.describe(),
        "rank": d.rank,
        "squares": [
            {
                "rows": list(s.rows),
                "cols": list(s.cols),
                "oclass": s.oclass,
                "corners": [h.text(x) for x in s.square.corners()],
                "orientation": s.orientation,
                "witness": h.text(s.u),
            }
            for s in squares
        ],
    }


def squares_from_doc(d: DClassData, doc: dict) -> list[SquareEntry]:
    from .biorder import Square

    h = d.handle
    out = []
    for item in doc["squares"]:
        corners = [h.parse(s) for s in item["corners"]]
        out.append(
            SquareEntry(
                tuple(item["rows"]),
                tuple(item["cols"]),
                item["oclass"],
                Square(*corners),
                item["orientation"],
                h.parse(item["witness"]),
            )
        )
    return out


def load_squares(args, h, rank, d: DClassData) -> list[SquareEntry]:
    if isinstance(h, AdjacencySemigroup) or getattr(args, "no_cache", False):
        return enumerate_singular_squares(d, threads=getattr(args, "threads", 1))
    path = cache_dir(args) / _cache_key(h, rank, "squares")
    if path.exists():
        return squares_from_doc(d, json.loads(path.read_text()))
    sq = enumerate_singular_squares(d, threads=getattr(args, "threads", 1))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(squares_to_doc(d, sq), indent=2, sort_keys=True))
    return sq


def pick_tree(args, h, d: DClassData) -> TreeSet:
    g = build_gh_graph(d)
    kind = getattr(args, "tree", "auto") or "auto"
    n, r = getattr(h, "n", None), d.rank
    if kind == "auto":
        if isinstance(h, AdjacencySemigroup) or r is None:
            return spanning_tree_with_projections(g)
        if r == 0:
            return t_rank0(n)
        if 1 <= r <= n - 2:
            return t_s(n, r, p0_projections(n, r)[0])
        return spanning_tree_bfs(g)
    if kind == "bfs":
        return spanning_tree_bfs(g)
    if kind == "lex":
        return t_lex(n, r)
    if kind == "fd":
        return t_fd(n, r)
    if kind == "fc":
        return t_fc(n, r)
    if kind == "s":
        return t_s(n, r, p0_projections(n, r)[0])
    if kind == "pg":
        if r is not None and 1 <= r <= n - 2:
            return t_pg(n, r)
        return spanning_tree_with_projections(g)
    if kind == "rank0":
        return t_rank0(n)
    raise SystemExit2(f"unknown tree kind {kind!r}")


def pg_tree(args, h, d: DClassData) -> TreeSet:
    n, r = getattr(h, "n", None), d.rank
    if (
        not isinstance(h, AdjacencySemigroup)
        and r is not None
        and 1 <= r <= n - 2
    ):
        return t_pg(n, r)
    return spanning_tree_with_projections(build_gh_graph(d))


# -- commands -----------------------------------------------------------------


def cmd_stats(args) -> int:
    h = make_handle(args)
    d = load_dclass(args, h, args.rank)
    g = build_gh_graph(d)
    print(f"monoid: {h.describe()}  rank: {d.rank}")
    print(f"|D| = {d.size}")
    print(f"|P_D| = {len(d.projections)}")
    print(f"|E_D| = {len(d.idempotents)}")
    print(f"GH graph: {g.n_left}+{g.n_right} vertices, {len(g.edges)} edges, "
          f"connected: {is_connected(g)}")
    if d.strata:
        print("strata (NTu, NTd) -> count:")
        for key in sorted(d.strata):
            print(f"  {key}: {len(d.strata[key])}")
    return 0


def _ig_presentation(args, h, d, squares):
    tree = pick_tree(args, h, d)
    return presn_ig(d, tree, squares)


def _family_presentation(args, h, d):
    family = args.family
    if family == "ig":
        squares = load_squares(args, h, d.rank, d)
        return presn_ig(d, pick_tree(args, h, d), squares)
    if family == "pg":
        squares = load_squares(args, h, d.rank, d)
        return presn_pg_squares(d, pg_tree(args, h, d), squares)
    if family == "pg-linked":
        diamonds = enumerate_linked_diamonds(d)
        return presn_pg_linked(d, diamonds, friendliness_tree(d, 0))
    if family == "pg-triangles":
        tris = linked_triangles(d)
        return presn_pg_triangles(d, tris, friendliness_tree(d, 0))
    raise SystemExit2(f"unknown family {family!r}")


def cmd_presentation(args) -> int:
    h = make_handle(args)
    d = load_dclass(args, h, args.rank)
    pres = _family_presentation(args, h, d)
    if args.simplify:
        pres = tietze_simplify(pres).presentation
    title = f"{args.family} maximal subgroup presentation, {h.describe()}, rank {d.rank}"
    if args.format == "json":
        out = json.dumps(to_json_doc(pres), indent=2, sort_keys=True)
    else:
        out = to_cas_text(pres, title)
    if args.output:
        Path(args.output).write_text(out)
        print(f"wrote {args.output}")
    else:
        sys.stdout.write(out)
    return 0


def cmd_identify(args) -> int:
    h = make_handle(args)
    d = load_dclass(args, h, args.rank)
    pres = _family_presentation(args, h, d)
    hints = IdentifyHints(max_cosets=args.max_cosets)
    r = d.rank
    if (
        args.family in ("ig", "pg")
        and not isinstance(h, AdjacencySemigroup)
        and r is not None
        and r >= 1
    ):
        labels = {
            gen_name_for_idempotent(h, e): label(e) for e in d.idempotents
        }
        quot = ()
        if args.family == "ig" and r <= h.n - 2:
            quot = (gen_name_for_idempotent(h, p1_projections(h.n, r)[0]),)
        hints = IdentifyHints(
            rank=r, labels=labels, quotient_generators=quot,
            max_cosets=args.max_cosets,
        )
    verdict = identify(pres, hints)
    if args.format == "json":
        print(json.dumps(verdict.to_json(), indent=2, sort_keys=True))
    else:
        print(verdict.describe())
        for line in verdict.evidence:
            print(f"  - {line}")
    return 0


def cmd_squares(args) -> int:
    h = make_handle(args)
    d = load_dclass(args, h, args.rank)
    doc = squares_to_doc(d, load_squares(args, h, d.rank, d))
    if args.diamonds:
        diamonds = enumerate_linked_diamonds(d)
        doc["diamonds"] = [
            {
                "s": h.text(x.s), "u": h.text(x.u),
                "v": h.text(x.v), "w": h.text(x.w),
                "witness": h.text(x.p),
                "degeneracy": list(x.degeneracy()),
            }
            for x in diamonds
        ]
    out = json.dumps(doc, indent=2, sort_keys=True)
    if args.output:
        Path(args.output).write_text(out)
        print(f"wrote {args.output}")
    else:
        print(out)
    return 0


def cmd_graph(args) -> int:
    h = make_handle(args)
    d = load_dclass(args, h, args.rank)
    g = build_gh_graph(d)
    tree = pick_tree(args, h, d) if args.tree else None
    out = gh_to_dot(g, tree)
    if args.output:
        Path(args.output).write_text(out)
        print(f"wrote {args.output}")
    else:
        sys.stdout.write(out)
    return 0


def cmd_verify(args) -> int:
    from .verify import run_all

    results = run_all(include_slow=args.slow, threads=args.threads)
    failed = 0
    for res in results:
        status = "PASS" if res.ok else "FAIL"
        print(f"[{status}] criterion {res.number}: {res.title}")
        if res.detail and (args.verbose or not res.ok):
            print(f"        {res.detail}")
        failed += 0 if res.ok else 1
    print(f"{len(results) - failed}/{len(results)} criteria passed")
    return 0 if failed == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="diagfree",
        description="Diagram monoids and maximal subgroups of their free "
        "idempotent- and projection-generated semigroups.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, rank_required=True):
        p.add_argument("--monoid", default="pn",
                       help="pn | brauer | tn | adjacency (default pn)")
        p.add_argument("--n", type=int, default=3)
        p.add_argument("--rank", type=int, required=rank_required)
        p.add_argument("--graph", help="edge-list file for adjacency semigroups")
        p.add_argument("--allow-large", action="store_true",
                       help="override the default degree cap")
        p.add_argument("--no-cache", action="store_true")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--cache-dir", help="cache directory override")

    p = sub.add_parser("stats", help="D-class statistics")
    common(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("presentation", help="emit a maximal-subgroup presentation")
    common(p)
    p.add_argument("--family", default="ig",
                   help="ig | pg | pg-linked | pg-triangles")
    p.add_argument("--tree", default="auto",
                   help="auto | bfs | lex | fd | fc | s | pg | rank0")
    p.add_argument("--simplify", action="store_true")
    p.add_argument("--format", default="cas", choices=("cas", "json"))
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_presentation)

    p = sub.add_parser("identify", help="identify the maximal subgroup")
    common(p)
    p.add_argument("--family", default="ig",
                   help="ig | pg | pg-linked | pg-triangles")
    p.add_argument("--tree", default="auto")
    p.add_argument("--max-cosets", type=int, default=10**6)
    p.add_argument("--format", default="text", choices=("text", "json"))
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("squares", help="dump singular squares (and diamonds)")
    common(p)
    p.add_argument("--diamonds", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_squares)

    p = sub.add_parser("graph", help="DOT export of the Graham-Houghton graph")
    common(p)
    p.add_argument("--tree", default="",
                   help="colour these tree edges (bfs | lex | fd | fc | s | pg | rank0)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--slow", action="store_true", help="include the slow degree-5 items")
    p.add_argument("--verbose", action="store_true")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit2:
        raise
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
