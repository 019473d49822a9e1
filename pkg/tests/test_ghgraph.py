"""Graham-Houghton graphs, the named spanning trees, and exports."""

import pytest

from diagfree.diagram import (
    PartitionMonoid,
    TransformationMonoid,
    partition_from_blocks,
    projection_from_parts,
)
from diagfree.green import dclass_data
from diagfree.ghgraph import (
    build_gh_graph,
    e_p_edge,
    friendliness_tree,
    gh_to_dot,
    idempotent_transformation,
    is_connected,
    p0_projections,
    p1_projections,
    set_partitions_into,
    spanning_tree_bfs,
    spanning_tree_with_projections,
    t_fc,
    t_fd,
    t_lex,
    t_pg,
    t_rank0,
    t_s,
    tree_scope,
    tree_to_json,
    verify_spanning_tree,
)

P3 = PartitionMonoid(3)
P4 = PartitionMonoid(4)


def test_gh_tn_42_shape():
    d = dclass_data(TransformationMonoid(4), 2)
    g = build_gh_graph(d)
    assert g.n_left == 7 and g.n_right == 6
    assert len(g.edges) == 24  # brute-force count of rank-2 idempotent maps
    assert is_connected(g)


def test_connectivity_all_classes():
    for n in (2, 3, 4):
        h = PartitionMonoid(n)
        for r in range(n):
            assert is_connected(build_gh_graph(dclass_data(h, r)))


def test_bfs_tree_properties():
    d = dclass_data(P3, 1)
    g = build_gh_graph(d)
    t = spanning_tree_bfs(g)
    assert len(t) == g.n_left + g.n_right - 1
    assert verify_spanning_tree(g, t)


def test_bfs_depth_on_rank0_class():
    # the rank-0 friendliness is complete, so the BFS tree is a double star
    d = dclass_data(P3, 0)
    g = build_gh_graph(d)
    t = spanning_tree_bfs(g, root=0)
    depth = {("L", 0): 0}
    edges = [(d.r_index_of(e), d.l_index_of(e)) for e in t.edges]
    frontier = [("L", 0)]
    while frontier:
        nxt = []
        for side, v in frontier:
            for (i, j) in edges:
                if side == "L" and i == v and ("R", j) not in depth:
                    depth[("R", j)] = depth[(side, v)] + 1
                    nxt.append(("R", j))
                if side == "R" and j == v and ("L", i) not in depth:
                    depth[("L", i)] = depth[(side, v)] + 1
                    nxt.append(("L", i))
        frontier = nxt
    assert len(depth) == g.n_left + g.n_right
    assert max(depth.values()) <= 2


def test_lex_cross_section_example():
    blocks = [[1, 2], [3, 4]]
    assert [min(b) for b in blocks] == [1, 3]


def test_t_lex_42_is_figure_tree():
    t = t_lex(4, 2)
    red = {
        ((1,), (2, 3, 4)): (1, 2),
        ((1, 2), (3, 4)): (1, 3),
        ((1, 2, 3), (4,)): (1, 4),
        ((1, 2, 4), (3,)): (1, 3),
        ((1, 3), (2, 4)): (1, 2),
        ((1, 3, 4), (2,)): (1, 2),
        ((1, 4), (2, 3)): (1, 2),
    }
    blue = {
        (1, 2): ((1,), (2, 3, 4)),
        (1, 3): ((1,), (2, 3, 4)),
        (1, 4): ((1,), (2, 3, 4)),
        (2, 3): ((1, 2), (3, 4)),
        (2, 4): ((1, 2), (3, 4)),
        (3, 4): ((1, 2, 3), (4,)),
    }
    expected = set()
    for v, c in red.items():
        blocks = [list(b) for b in v]
        image = [min(b) for b in blocks]
        assert tuple(sorted(image)) == c
        expected.add(idempotent_transformation(4, blocks, image))
    for c, v in blue.items():
        blocks = [list(b) for b in v]
        image = sorted(c)
        expected.add(idempotent_transformation(4, blocks, image))
    assert set(t.edges) == expected
    assert len(t) == 12


def test_t_lex_31_size():
    t = t_lex(3, 1)
    # |I| = S(3,1) = 1, |J| = C(3,1) = 3 so a spanning tree has 3 edges
    assert len(t) == 3
    g = build_gh_graph(dclass_data(P3, 1))
    assert verify_spanning_tree(g, t)


def test_t_lex_range_errors():
    with pytest.raises(ValueError):
        t_lex(3, 2)
    with pytest.raises(ValueError):
        t_lex(3, 0)
    with pytest.raises(ValueError):
        t_rank0(1)


def test_e_p_edge_example():
    # p with transversal classes {1}, {2} and one upper block {3, 4}
    p = projection_from_parts(4, [[1], [2]], [[3, 4]])
    e = e_p_edge(p)
    expected = partition_from_blocks(4, [{1, 3, 4, -1}, {2, -2}, {-3, -4}])
    assert e == expected
    from diagfree.biorder import label

    assert label(e) == (0, 1)


def test_t_fd_labels_are_trivial():
    from diagfree.biorder import label

    for e in t_fd(4, 2).edges:
        assert label(e) == (0, 1)


def test_t_fd_t_fc_verify():
    for (n, r) in ((4, 1), (4, 2), (3, 1)):
        d = dclass_data(PartitionMonoid(n), r)
        g = build_gh_graph(d)
        assert verify_spanning_tree(g, t_fd(n, r))
        assert verify_spanning_tree(g, t_fc(n, r))


def test_t_fd_union_t_fc_two_components():
    n, r = 4, 2
    d = dclass_data(P4, r)
    g = build_gh_graph(d)
    union = set(t_fd(n, r).edges) | set(t_fc(n, r).edges)
    # count components of the union on the full vertex set
    nl = g.n_left
    adj = {}
    for e in union:
        i, j = d.r_index_of(e), nl + d.l_index_of(e)
        adj.setdefault(i, []).append(j)
        adj.setdefault(j, []).append(i)
    seen = set()
    comps = 0
    for v in range(nl + g.n_right):
        if v in seen:
            continue
        comps += 1
        stack = [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            for y in adj.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    assert comps == 2


def test_t_s_all_choices():
    d = dclass_data(P4, 2)
    g = build_gh_graph(d)
    choices = p0_projections(4, 2)
    assert len(choices) == 7  # one per partition of [4] into two blocks
    for s in choices:
        assert verify_spanning_tree(g, t_s(4, 2, s))
    with pytest.raises(ValueError):
        t_s(4, 2, p1_projections(4, 2)[0])


def test_t_pg_contains_projections_and_spans():
    d = dclass_data(P3, 1)
    g = build_gh_graph(d)
    t = t_pg(3, 1)
    assert set(d.projections) <= set(t.edges)
    assert verify_spanning_tree(g, t)


def test_t_rank0():
    for n in (2, 3):
        d = dclass_data(PartitionMonoid(n), 0)
        g = build_gh_graph(d)
        t = t_rank0(n)
        for e in t.edges:
            assert len(e.ker()) == 1 or len(e.coker()) == 1
        assert verify_spanning_tree(g, t)


def test_spanning_tree_with_projections():
    d = dclass_data(P4, 3)
    g = build_gh_graph(d)
    t = spanning_tree_with_projections(g)
    assert set(d.projections) <= set(t.edges)
    assert verify_spanning_tree(g, t)


def test_cycle_rank_nonnegative():
    for (n, r) in ((3, 1), (3, 0), (4, 3)):
        d = dclass_data(PartitionMonoid(n), r)
        g = build_gh_graph(d)
        assert len(g.edges) - g.n_left - g.n_right + 1 >= 0


def test_friendliness_tree():
    d = dclass_data(P3, 1)
    edges = friendliness_tree(d, 0)
    assert len(edges) == len(d.projections) - 1
    children = {c for (_p, c) in edges}
    assert len(children) == len(edges)  # a tree reaches each vertex once
    assert 0 not in children


def test_set_partitions_into_counts():
    # Stirling numbers S(4, k)
    assert len(list(set_partitions_into(range(1, 5), 1))) == 1
    assert len(list(set_partitions_into(range(1, 5), 2))) == 7
    assert len(list(set_partitions_into(range(1, 5), 3))) == 6
    assert len(list(set_partitions_into(range(1, 5), 4))) == 1


def test_dot_and_json_export():
    d = dclass_data(P3, 2)
    g = build_gh_graph(d)
    t = spanning_tree_bfs(g)
    dot = gh_to_dot(g, t)
    assert dot.startswith("graph gh {") and dot.count("--") == len(g.edges)
    assert dot.count("color=red") == len(t.edges)
    doc = tree_to_json(d, t)
    assert doc["kind"] == "generic" and len(doc["edges"]) == len(t.edges)


def test_tree_scope_resolution():
    d = dclass_data(P4, 2)
    g = build_gh_graph(d)
    left, right = tree_scope(g, t_fd(4, 2))
    ntu = [p.ntu() for p in d.projections]
    assert left == {i for i, k in enumerate(ntu) if k == 0}
    assert right == {j for j, k in enumerate(ntu) if k >= 1}
