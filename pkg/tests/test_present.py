"""Presentation construction, Tietze simplification, emitters."""

import json

import pytest

from diagfree.biorder import (
    enumerate_linked_diamonds,
    enumerate_singular_squares,
    linked_triangles,
)
from diagfree.diagram import PartitionMonoid, involution
from diagfree.green import dclass_data
from diagfree.ghgraph import (
    build_gh_graph,
    friendliness_tree,
    spanning_tree_bfs,
    t_pg,
    t_rank0,
    t_s,
    p0_projections,
)
from diagfree.groupid import abelianization
from diagfree.present import (
    GroupPresentation,
    cyclic_reduce,
    emit_semigroup_presentation,
    free_reduce,
    presentation_from_json,
    presn_ig,
    presn_pg_linked,
    presn_pg_squares,
    presn_pg_triangles,
    relator_key,
    tietze_simplify,
    to_cas_text,
    to_json_doc,
)

P2 = PartitionMonoid(2)
P3 = PartitionMonoid(3)


def test_word_helpers():
    assert free_reduce((1, -1, 2)) == (2,)
    assert cyclic_reduce((1, 2, -1)) == (2,)
    assert relator_key((2, 1)) == relator_key((1, 2))
    assert relator_key((1, 2)) == relator_key((-2, -1))


def test_presn_ig_d32_counts():
    d = dclass_data(P3, 2)
    sq = enumerate_singular_squares(d)
    g = build_gh_graph(d)
    pres = presn_ig(d, spanning_tree_bfs(g), sq)
    assert len(pres.generators) == 18
    assert len(pres.relators) == 11  # tree relators only; no singular squares
    assert all(pres.relators)  # degenerate (empty) relators are never emitted


def test_presn_ig_rejects_non_spanning_tree():
    from diagfree.ghgraph import TreeSet

    d = dclass_data(P3, 2)
    sq = enumerate_singular_squares(d)
    with pytest.raises(ValueError):
        presn_ig(d, TreeSet("generic", d.idempotents[:3]), sq)


def test_presn_pg_squares_requires_projections():
    d = dclass_data(P3, 1)
    sq = enumerate_singular_squares(d)
    g = build_gh_graph(d)
    bfs = spanning_tree_bfs(g)
    if not set(d.projections) <= set(bfs.edges):
        with pytest.raises(ValueError):
            presn_pg_squares(d, bfs, sq)


def test_pg_ig_differ_exactly_by_inverse_relators():
    d = dclass_data(P3, 1)
    sq = enumerate_singular_squares(d)
    t = t_pg(3, 1)
    ig = presn_ig(d, t, sq)
    pg = presn_pg_squares(d, t, sq)
    assert pg.generators == ig.generators
    extra = set(pg.relators) - set(ig.relators)
    assert set(ig.relators) <= set(pg.relators)
    gen_of = {e: i + 1 for i, e in enumerate(d.idempotents)}
    expected = set()
    for e in d.idempotents:
        es = involution(e)
        if e.labels <= es.labels:
            expected.add((gen_of[e], gen_of[es]))
    assert extra == expected


def test_pg_linked_vs_triangles_same_group():
    from diagfree.groupid import identify

    d = dclass_data(P3, 0)
    dias = enumerate_linked_diamonds(d)
    tris_pres = presn_pg_triangles(d, linked_triangles(d), friendliness_tree(d, 0))
    link_pres = presn_pg_linked(d, dias, friendliness_tree(d, 0))
    assert identify(link_pres).is_trivial
    assert identify(tris_pres).is_trivial


def test_square_linked_presentations_agree_d31():
    """The squares-based and diamonds-based constructions present the same
    group for the rank-1 class of P_3."""
    from diagfree.groupid import identify, IdentifyHints
    from diagfree.biorder import label
    from diagfree.present import gen_name_for_idempotent

    d = dclass_data(P3, 1)
    sq = enumerate_singular_squares(d)
    labels = {gen_name_for_idempotent(P3, e): label(e) for e in d.idempotents}
    v1 = identify(
        presn_pg_squares(d, t_pg(3, 1), sq), IdentifyHints(rank=1, labels=labels)
    )
    v2 = identify(presn_pg_linked(d, enumerate_linked_diamonds(d), friendliness_tree(d, 0)))
    assert v1.order == v2.order == 1


def test_tietze_simple_cases():
    p = GroupPresentation(("a", "b"), ((1,), (1, -2)))
    res = tietze_simplify(p)
    assert res.complete
    assert res.presentation.generators == ()
    assert res.presentation.relators == ()
    # torsion relators survive
    p2 = GroupPresentation(("a",), ((1, 1),))
    assert tietze_simplify(p2).presentation.relators == ((1, 1),)


def test_tietze_idempotent_and_budget():
    d = dclass_data(P3, 1)
    sq = enumerate_singular_squares(d)
    pres = presn_ig(d, t_s(3, 1, p0_projections(3, 1)[0]), sq)
    full = tietze_simplify(pres)
    again = tietze_simplify(full.presentation)
    assert again.presentation == full.presentation
    capped = tietze_simplify(pres, budget=3)
    assert not capped.complete
    assert capped.eliminations == 3


def test_tietze_preserves_abelianization():
    d31 = dclass_data(P3, 1)
    sq31 = enumerate_singular_squares(d31)
    d30 = dclass_data(P3, 0)
    sq30 = enumerate_singular_squares(d30)
    d32 = dclass_data(P3, 2)
    sq32 = enumerate_singular_squares(d32)
    cases = [
        presn_ig(d31, t_s(3, 1, p0_projections(3, 1)[0]), sq31),
        presn_pg_squares(d31, t_pg(3, 1), sq31),
        presn_ig(d30, t_rank0(3), sq30),
        presn_pg_linked(d30, enumerate_linked_diamonds(d30), friendliness_tree(d30, 0)),
        presn_ig(d32, spanning_tree_bfs(build_gh_graph(d32)), sq32),
        GroupPresentation(("a", "b"), ((1, 1, 1), (2, 2), (1, 2, -1, -2))),
        GroupPresentation(("a", "b", "c"), ((1, 2, 3), (3, 3))),
    ]
    for p in cases:
        before = abelianization(p)
        after = abelianization(tietze_simplify(p).presentation)
        assert before == after


def test_emit_ig_doc_p2():
    doc = emit_semigroup_presentation(P2, "ig")
    assert len(doc.generators) == 12
    for (lhs, rhs) in doc.relations:
        assert len(lhs) == 2 and len(rhs) == 1
    text = doc.render()
    assert "generators (12):" in text


def test_emit_pg_doc_third_family_count():
    doc = emit_semigroup_presentation(P2, "pg")
    p_count = len(P2.projections())
    third = [rel for rel in doc.relations if len(rel[0]) == 3]
    assert len(third) == p_count * p_count


def test_emit_pg_doc_golden():
    from pathlib import Path

    doc = emit_semigroup_presentation(P2, "pg")
    golden = Path(__file__).parent / "golden" / "semigroup_pg_p2.txt"
    assert doc.render() == golden.read_text()


def test_emit_pg_e_and_rig():
    doc = emit_semigroup_presentation(P2, "pg-e")
    assert len(doc.generators) == 12
    rig = emit_semigroup_presentation(P2, "rig")
    assert len(rig.relations) > len(emit_semigroup_presentation(P2, "ig").relations)
    with pytest.raises(ValueError):
        emit_semigroup_presentation(P2, "nope")


def test_basic_pairs_products_idempotent():
    from diagfree.present import basic_pairs
    from diagfree.diagram import multiply, is_idempotent

    for e, f in basic_pairs(P2):
        assert is_idempotent(multiply(e, f))
        assert is_idempotent(multiply(f, e))


def test_cas_and_json_emitters():
    p = GroupPresentation(("a[x]", "a[y]"), ((1, -2), (2, 2)))
    text = to_cas_text(p, "demo")
    assert 'F := FreeGroup("a1", "a2");' in text
    assert "a1*a2^-1" in text
    assert "# a2 = a[y]" in text
    doc = to_json_doc(p)
    assert presentation_from_json(json.loads(json.dumps(doc))) == p
