import networkx as nx
import pytest

from dcx import (
    PreconditionError,
    check_layering_theory,
    frame_dim,
    globe,
    is_frame_acyclic,
    is_hasse_acyclic,
    layering_to_ordering,
    layerings,
    maxflow,
    orderings,
    oriental,
    paste,
    path,
    pre_layerings,
    pre_orderings,
)


def test_frame_dim_examples(horiz, vert):
    assert frame_dim(globe(2)) == -1
    assert frame_dim(oriental(3)) == -1
    assert frame_dim(path(2)) == 0
    assert frame_dim(vert) == 1
    assert frame_dim(horiz) == 0


def test_maxflow_path():
    fg = maxflow(path(2), 0)
    assert set(fg.vertices) == {(1, 0), (1, 1)}
    assert fg.edges == {((1, 0), (1, 1))}


def test_maxflow_whisker_level(horiz):
    fg = maxflow(horiz, 1)
    assert len(fg.vertices) == 2 and not fg.edges


def test_maxflow_atom_trivial():
    for k in (-1, 0, 1):
        fg = maxflow(globe(2), k)
        assert len(fg.vertices) == 1 and not fg.edges


def test_maxflow_minus_one_edgeless(corpus):
    for mol in corpus[:20]:
        fg = maxflow(mol, -1)
        assert not fg.edges
        assert set(fg.vertices) == set(mol.as_closed().maximal())


def test_topological_sorts_match_networkx(corpus):
    for mol in corpus[:25]:
        for k in range(-1, mol.dim):
            fg = maxflow(mol, k)
            if len(fg.vertices) > 7:
                continue
            g = nx.DiGraph()
            g.add_nodes_from(fg.vertices)
            g.add_edges_from(fg.edges)
            if not nx.is_directed_acyclic_graph(g):
                continue
            expect = {tuple(s) for s in nx.all_topological_sorts(g)}
            assert {tuple(s) for s in fg.topological_sorts()} == expect


def test_pre_layerings_path():
    assert pre_layerings(path(3), 0).n == 4
    assert pre_layerings(path(2), 0).n == 2


def test_pre_layerings_trivial_cases():
    assert pre_layerings(globe(2), 0).n == 1
    assert pre_layerings(globe(2), 1).n == 1
    assert pre_layerings(globe(2), -1).n == 1


def test_layerings_path_and_whiskers(horiz):
    lays = layerings(path(3), 0)
    assert len(lays) == 1 and [l.size() for l in lays[0]] == [3, 3, 3]
    assert len(layerings(horiz, 1)) == 2
    assert len(layerings(globe(2), 1)) == 1
    assert len(layerings(globe(2), -1)) == 1


def test_orderings(horiz):
    assert len(orderings(path(3), 0)) == 1
    assert len(orderings(horiz, 1)) == 2


def test_pre_orderings_two_path():
    po = pre_orderings(path(2), 0)
    assert po.n == 2


def test_layering_to_ordering(horiz):
    lays = layerings(path(2), 0)
    part = layering_to_ordering(path(2), lays[0], 0)
    assert part == (frozenset({(1, 0)}), frozenset({(1, 1)}))
    trivial = [lay for lay in pre_layerings(horiz, 0).elements if len(lay) == 1][0]
    part = layering_to_ordering(horiz, trivial, 0)
    assert len(part) == 1 and len(part[0]) == 2


def test_frame_acyclic_small(horiz, vert):
    for mol in (globe(3), path(4), horiz, vert, oriental(3)):
        assert is_frame_acyclic(mol)


def test_frame_acyclic_low_dim(corpus):
    # every molecule of dimension <= 3 is frame-acyclic
    for mol in corpus:
        assert mol.dim <= 3
        res = is_frame_acyclic(mol)
        assert res.ok, (mol.counts, res.offending, res.cycle)


def test_hasse_acyclic_implies_frame_acyclic(corpus):
    for mol in corpus[:40]:
        if is_hasse_acyclic(mol.poset):
            assert is_frame_acyclic(mol)


def test_layering_to_ordering_injective_order_preserving(corpus):
    # no frame-acyclicity assumption on this one
    for mol in corpus[:30]:
        for k in range(mol.dim):
            pl = pre_layerings(mol, k)
            if pl.n > 120:
                continue
            images = [layering_to_ordering(mol, lay, k) for lay in pl.elements]
            assert len(set(images)) == pl.n
            po = pre_orderings(mol, k)
            index = {part: i for i, part in enumerate(po.elements)}
            for i in range(pl.n):
                for j in range(pl.n):
                    if pl.leq(i, j):
                        assert po.leq(index[images[i]], index[images[j]])


def test_check_layering_theory_examples(horiz):
    rep = check_layering_theory(path(3), 0)
    assert rep["iso"] and rep["pre_layerings"] == 4 and rep["pre_orderings"] == 4
    rep = check_layering_theory(horiz, 1)
    assert rep["iso"] and rep["layerings"] == 2 and rep["orderings"] == 2


def test_check_layering_theory_precondition():
    with pytest.raises(PreconditionError):
        check_layering_theory(globe(2), 5)
    with pytest.raises(PreconditionError):
        check_layering_theory(path(3), -1)


def test_check_layering_theory_random(corpus):
    for mol in corpus[:40]:
        r = frame_dim(mol)
        for k in range(max(r, 0), mol.dim):
            rep = check_layering_theory(mol, k)
            assert rep["iso"], (mol.counts, k, rep)


def test_flow_graph_acyclic_at_top_for_frame_acyclic(corpus):
    from dcx import submolecules

    for mol in corpus[:15]:
        if not is_frame_acyclic(mol):
            continue
        for sub in submolecules(mol):
            Q, _ = sub.subset.extract()
            from dcx import Molecule

            m = Molecule(Q)
            assert maxflow(m, m.dim - 1).is_acyclic()