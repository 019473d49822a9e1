"""Green's relations, D-class assembly, friendliness, strata, sandwich sets."""

import json
import random

import pytest

from diagfree.diagram import (
    BrauerMonoid,
    PartitionMonoid,
    involution,
    multiply,
    partition_from_blocks,
)
from diagfree.green import (
    EmptyClassError,
    dclass_data,
    dclass_from_doc,
    dclass_to_doc,
    d_related,
    h_class_idempotent,
    l_related,
    r_related,
    r_related_ideal,
    l_related_ideal,
    sandwich_set,
)


def test_counts_closed_formulas():
    d = dclass_data(PartitionMonoid(4), 3)
    assert len(d.projections) == 10 and len(d.idempotents) == 34
    d = dclass_data(PartitionMonoid(3), 2)
    assert len(d.projections) == 6 and len(d.idempotents) == 18


def test_rank0_p2_all_idempotent():
    d = dclass_data(PartitionMonoid(2), 0)
    assert d.size == 4
    assert len(d.idempotents) == 4


def test_empty_class_errors():
    with pytest.raises(EmptyClassError):
        dclass_data(PartitionMonoid(3), 5)
    with pytest.raises(EmptyClassError):
        dclass_data(BrauerMonoid(4), 1)  # parity
    with pytest.raises(EmptyClassError):
        dclass_data(PartitionMonoid(3), None)


def test_r_related_projections():
    h = PartitionMonoid(3)
    p = partition_from_blocks(3, [{1, 2, -1, -2}, {3, -3}])
    q = partition_from_blocks(3, [{1, 2, -1, -2, 3, -3}])
    # distinct rank-2/other projections with equal kernels are R-related
    a = partition_from_blocks(3, [{1, 2, -1, -2}, {3, -3}])
    b = partition_from_blocks(3, [{1, 2, -3}, {3, -1, -2}])
    assert a.ker() == b.ker() and a.dom() == b.dom()
    assert r_related(h, a, b)
    assert not r_related(h, p, q)


def test_green_fast_path_vs_ideals_sampled():
    h = PartitionMonoid(3)
    els = h.elements()
    rng = random.Random(23)
    for _ in range(300):
        a, b = rng.choice(els), rng.choice(els)
        assert r_related(h, a, b) == r_related_ideal(h, a, b)
        assert l_related(h, a, b) == l_related_ideal(h, a, b)


def test_rank_differs_implies_not_d_related():
    from diagfree.diagram import identity

    h = PartitionMonoid(3)
    a = partition_from_blocks(3, [{1, -1}, {2}, {3}, {-2}, {-3}])
    assert not d_related(h, a, identity(3))
    assert d_related(h, a, involution(a))


def test_aa_star_projection_indexing():
    h = PartitionMonoid(3)
    for r in (0, 1, 2):
        d = dclass_data(h, r)
        for a in d.elements:
            p = multiply(a, involution(a))
            q = multiply(involution(a), a)
            assert p in set(d.projections) and q in set(d.projections)
            assert p.rank() == r and r_related(h, p, a)
            assert l_related(h, q, a)


def test_friendliness_bijection():
    for (h, r) in ((PartitionMonoid(3), 1), (PartitionMonoid(4), 2), (BrauerMonoid(4), 0)):
        d = dclass_data(h, r)
        assert len(d.friendly) == len(d.idempotents)


def test_h_class_idempotent():
    h = PartitionMonoid(3)
    d = dclass_data(h, 0)
    # rank-0 class is a rectangular band: every pair is friendly
    for p in d.projections:
        assert h_class_idempotent(d, p, p) == p
        for q in d.projections:
            e = h_class_idempotent(d, p, q)
            assert e == multiply(p, q)


def test_group_h_class_count_oracle_p3():
    h = PartitionMonoid(3)
    els = h.elements()
    rid = {}
    lid = {}
    for a in els:
        rid[a] = frozenset([a] + [multiply(a, s) for s in els])
        lid[a] = frozenset([a] + [multiply(s, a) for s in els])
    for r in (0, 1, 2):
        d = dclass_data(h, r)
        hclasses = {}
        for a in d.elements:
            hclasses.setdefault((rid[a], lid[a]), []).append(a)
        groups = sum(
            1
            for members in hclasses.values()
            if any(multiply(e, e) == e for e in members)
        )
        assert groups == len(d.idempotents)


def test_strata_partition_and_tn_corner():
    d = dclass_data(PartitionMonoid(4), 2)
    total = sum(len(v) for v in d.strata.values())
    assert total == len(d.idempotents)
    corner = d.strata.get((0, 2), [])
    expect = [e for e in d.idempotents if e.ntu() == 0 and e.ntd() == 2]
    assert sorted(corner) == sorted(expect)
    for e in expect:
        assert all(len(c) == 1 for c in e.coker())  # transformations


def test_sandwich_sets():
    h = PartitionMonoid(3)
    E = h.idempotents()
    for e in E[:12]:
        assert e in sandwich_set(h, e, e)
    rng = random.Random(5)
    for _ in range(40):
        e, f = rng.choice(E), rng.choice(E)
        sw = sandwich_set(h, e, f)
        ef = multiply(e, f)
        for x in sw:
            assert multiply(multiply(e, x), f) == ef
            assert multiply(multiply(f, x), e) == x
    non_idem = next(a for a in h.elements() if not h.is_idempotent(a))
    with pytest.raises(ValueError):
        sandwich_set(h, non_idem, E[0])


def test_sandwich_nonempty_all_pairs_p3():
    h = PartitionMonoid(3)
    E = h.idempotents()
    for e in E:
        for f in E:
            ef = multiply(e, f)
            assert any(
                multiply(multiply(e, x), f) == ef
                and multiply(multiply(f, x), e) == x
                for x in E
            ), "regular biordered set must have non-empty sandwich sets"


def test_sandwich_duplicate_evaluation_oracle_p4():
    h = PartitionMonoid(4)
    E = h.idempotents()
    rng = random.Random(99)
    pairs = [(rng.choice(E), rng.choice(E)) for _ in range(100)]
    for e, f in pairs:
        first = sandwich_set(h, e, f)
        second = [
            x
            for x in E
            if multiply(multiply(e, x), f) == multiply(e, f)
            and multiply(multiply(f, x), e) == x
        ]
        assert first == second


def test_dclass_serialization_round_trip():
    h = PartitionMonoid(3)
    d = dclass_data(h, 1)
    doc = dclass_to_doc(d)
    blob = json.dumps(doc, indent=2, sort_keys=True)
    d2 = dclass_from_doc(h, json.loads(blob))
    blob2 = json.dumps(dclass_to_doc(d2), indent=2, sort_keys=True)
    assert blob == blob2
    assert d2.projections == d.projections
    assert d2.idempotents == d.idempotents
    assert d2.friendly == d.friendly
