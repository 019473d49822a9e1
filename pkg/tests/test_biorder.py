"""Singular squares, linked diamonds and triangles, NT-reduction, labels."""

import pytest

from diagfree.biorder import (
    Square,
    brute_force_singular_squares,
    enumerate_linked_diamonds,
    enumerate_singular_squares,
    f_set,
    find_singularizers,
    is_linked_diamond,
    is_linked_pair,
    is_lr_singular,
    is_nt_reducing,
    is_rl_singular,
    is_ud_singular,
    is_coxeter_idempotent,
    label,
    label_prime,
    linked_triangles,
    nt_reducing_square_for,
    perm_inverse,
    projection_nt_square,
    scale_down,
    witness_orientations,
)
from diagfree.diagram import (
    BrauerMonoid,
    PartitionMonoid,
    full_domain_projection,
    identity,
    involution,
    multiply,
    partition_from_blocks,
)
from diagfree.green import dclass_data

P2 = PartitionMonoid(2)
P3 = PartitionMonoid(3)
P4 = PartitionMonoid(4)


def test_totally_degenerate_square_lr_singular():
    p = full_domain_projection(2, [{1, 2}])
    sq = Square(p, p, p, p)
    assert is_lr_singular(P2, sq, p)
    assert is_ud_singular(P2, sq, p)


def test_identity_singularises_nothing_nondegenerate():
    e1 = partition_from_blocks(2, [{1, 2, -1, -2}])
    f1 = partition_from_blocks(2, [{1, 2, -1}, {-2}])
    g1 = partition_from_blocks(2, [{1, -1, -2}, {2}])
    h1 = partition_from_blocks(2, [{1, -1}, {2}, {-2}])
    sq = Square(e1, f1, g1, h1)
    assert not is_lr_singular(P2, sq, identity(2))
    assert not is_ud_singular(P2, sq, identity(2))
    assert find_singularizers(P2, sq) == []


def test_derived_ud_square_from_linked_diamond():
    d = dclass_data(P3, 1)
    dias = [x for x in enumerate_linked_diamonds(d) if not x.degenerate]
    assert dias
    for dia in dias[:20]:
        e = multiply(dia.s, dia.v)
        f = multiply(dia.s, dia.w)
        vw = multiply(dia.v, dia.w)
        assert is_ud_singular(P3, Square(e, f, dia.v, vw), dia.p)


def test_enumerate_matches_brute_force_d31():
    d = dclass_data(P3, 1)
    fast = {(s.rows, s.cols, s.oclass) for s in enumerate_singular_squares(d)}
    assert fast == brute_force_singular_squares(d)


def test_enumerate_empty_at_rank_n_minus_1():
    assert enumerate_singular_squares(dclass_data(P3, 2)) == []


def test_adjacency_no_nondegenerate_singular_squares():
    from diagfree.diagram import AdjacencySemigroup

    g = AdjacencySemigroup("abc", [("a", "b"), ("b", "c"), ("a", "c")])
    d = dclass_data(g)
    assert enumerate_singular_squares(d) == []
    dias = enumerate_linked_diamonds(d)
    assert all(x.degenerate for x in dias)


def test_threaded_enumeration_matches():
    d = dclass_data(P3, 1)
    single = enumerate_singular_squares(d, threads=1)
    sharded = enumerate_singular_squares(d, threads=3)
    assert single == sharded
    assert enumerate_linked_diamonds(d, threads=3) == enumerate_linked_diamonds(d)


def test_rank0_diamonds_tau_linked():
    d = dclass_data(P3, 0)
    nab = partition_from_blocks(3, [{1, 2, 3}, {-1, -2, -3}])
    sig = partition_from_blocks(3, [{1, 2}, {3}, {-1, -2}, {-3}])
    tau = nab
    taut = full_domain_projection(3, [{1, 2, 3}])
    assert is_linked_diamond(P3, d, nab, sig, nab, tau, taut)
    assert is_linked_pair(P3, taut, nab, sig)


def test_brauer_b4_diamonds_all_degenerate():
    d = dclass_data(BrauerMonoid(4), 0)
    assert all(x.degenerate for x in enumerate_linked_diamonds(d))


def test_diamond_implies_vfw():
    for r in (0, 1):
        d = dclass_data(P3, r)
        for dia in enumerate_linked_diamonds(d):
            i = d.proj_index(dia.v)
            j = d.proj_index(dia.w)
            assert (i, j) in d.friendly


def test_linked_triangles_are_diamonds():
    d = dclass_data(P3, 0)
    tris = linked_triangles(d)
    assert tris
    for (s, u, w, p) in tris[:25]:
        assert is_linked_diamond(P3, d, s, u, s, w, p)


def test_degenerate_square_not_nt_reducing():
    p = full_domain_projection(2, [{1, 2}])
    assert not is_nt_reducing(Square(p, p, p, p))


def test_projection_nt_square_in_p4():
    # base (A | B | C ; A | B | C) + f with a transversal and two upper blocks
    e = partition_from_blocks(4, [{1, -1}, {2, 3}, {-2, -3}, {4}, {-4}])
    sq, u = projection_nt_square(e)
    assert sq.h == e
    assert is_nt_reducing(sq)
    assert is_rl_singular(P4, sq, u)


def test_ehresmann_square_witnessed_across_d31():
    """For every L-related pair with nested kernels in the rank-1 class of
    P_3, the square (fD(e) f; eD(e) e) is RL-singularised by D(e)."""
    from diagfree.biorder import ehresmann_square
    from diagfree.diagram import d_projection, eq_refines
    from diagfree.green import l_related

    d = dclass_data(P3, 1)
    pairs = 0
    for e in d.idempotents:
        for f in d.idempotents:
            if not (l_related(P3, e, f) and eq_refines(e.ker(), f.ker())):
                continue
            sq, u = ehresmann_square(e, f)
            assert u == d_projection(e)
            assert is_rl_singular(P3, sq, u)
            if e.ker() != f.ker() and not eq_refines(e.ker(), e.coker()):
                assert is_nt_reducing(sq)
            pairs += 1
    assert pairs > len(d.idempotents)  # some non-trivial pairs exist


def test_nt_reducing_ehresmann_instance_d41():
    # kernel strictly inside the merged kernel, kernel not inside cokernel
    d = dclass_data(P4, 1)
    fs = set(f_set(d))
    bases = [e for e in d.idempotents if e not in fs][:40]
    assert bases
    for e in bases:
        sq, u = nt_reducing_square_for(e)
        assert sq.h == e
        assert is_nt_reducing(sq)
        assert witness_orientations(P4, sq, u)


def test_label_worked_example_e53():
    e = partition_from_blocks(
        5, [{1, 4, -4}, {2, -2}, {3}, {5, -3, -5}, {-1}]
    )
    assert label_prime(e) == ((1, 4), (2, 2), (5, 3))
    assert label(e) == (2, 0, 1)  # 1->3, 2->1, 3->2 in 1-based terms


def test_labels_of_figure_elements():
    a6 = partition_from_blocks(6, [{1, 4}, {2, 3, -4, -5}, {5, 6}, {-1, -2, -6}, {-3}])
    b6 = partition_from_blocks(6, [{1, 2}, {3, 4, -1}, {5, -5, -6}, {6}, {-2, -3}, {-4}])
    assert label(a6) == (0,)
    assert label(b6) == (0, 1)


def test_label_star_inverse_exhaustive_e42():
    d = dclass_data(P4, 2)
    for e in d.idempotents:
        assert label(involution(e)) == perm_inverse(label(e))
        comp = [label(e)[perm_inverse(label(e))[i]] for i in range(2)]
        assert comp == [0, 1]


def test_label_rank0_error():
    z = partition_from_blocks(2, [{1}, {2}, {-1}, {-2}])
    with pytest.raises(ValueError):
        label(z)


def test_label_consecutive_stability():
    # perturbing one pair by 1 without reordering leaves the label fixed
    base = ((1, 4), (2, 2), (5, 3))
    wiggled = ((1, 5), (2, 2), (5, 3))
    assert scale_down(base) == scale_down(wiggled)
    base2 = ((1, 1), (3, 4))
    wiggled2 = ((2, 1), (3, 4))
    assert scale_down(base2) == scale_down(wiggled2)


def test_coxeter_idempotent():
    # a transformation with label (1 2)
    from diagfree.ghgraph import idempotent_transformation

    e = idempotent_transformation(4, [[1, 4], [2, 3]], [4, 2])
    assert label(e) == (1, 0)
    assert is_coxeter_idempotent(e)
    ident = idempotent_transformation(4, [[1, 4], [2, 3]], [1, 2])
    assert not is_coxeter_idempotent(ident)


def test_witness_orientations_consistency():
    d = dclass_data(P3, 1)
    entries = enumerate_singular_squares(d)
    for entry in entries[:60]:
        assert entry.orientation in witness_orientations(P3, entry.square, entry.u)
