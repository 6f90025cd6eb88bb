import pytest

from dcx import (
    BoundaryMismatchError,
    NotParallelError,
    NotRoundError,
    atom,
    factors_through_atom,
    find_iso,
    globe,
    is_molecule,
    is_round,
    join,
    molecule_iso,
    oriental,
    oriental_with_labels,
    parse_tree,
    paste,
    path,
    point,
    replay,
    splits,
    submolecules,
    suspension,
    theta_from_tree,
)


def test_point_and_globes():
    assert point().counts == (1,)
    assert globe(0).counts == (1,)
    assert globe(2).counts == (2, 2, 1)
    assert globe(3).counts == (2, 2, 2, 1)


def test_globe_boundaries_are_globes():
    g3 = globe(3)
    for j in range(3):
        for alpha in "-+":
            sub, _ = g3.boundary(j, alpha).extract()
            assert find_iso(sub, globe(j).poset) is not None


def test_paste_arrows():
    p2 = paste(path(1), path(1), 0)
    assert p2.counts == (3, 2)


def test_paste_globes_at_one():
    # pushout oracle: [2,2,1] glued with [2,2,1] along an arrow [2,1]
    vert = paste(globe(2), globe(2), 1)
    assert vert.counts == (2, 3, 2)


def test_paste_mismatch():
    with pytest.raises(BoundaryMismatchError):
        paste(globe(2), path(2), 1)


def test_paste_counts_side_by_side():
    horiz = paste(globe(2), globe(2), 0)
    assert horiz.counts == (3, 4, 2)


def test_atom_arrow():
    assert atom(point(), point()).counts == (2, 1)


def test_atom_two_oriental():
    d2 = atom(path(1), path(2))
    assert molecule_iso(d2, oriental(2)) is not None


def test_atom_on_two_paths():
    # sphere gluing oracle: two copies of [3,2] share both endpoints
    lens = atom(path(2), path(2))
    assert lens.counts == (4, 4, 1)
    assert lens.greatest() == (2, 0)


def test_atom_requires_round():
    horiz = paste(globe(2), globe(2), 0)
    assert not is_round(horiz)
    with pytest.raises(NotRoundError):
        atom(horiz, horiz)


def test_atom_requires_parallel():
    with pytest.raises(NotParallelError):
        atom(path(1), point())
    # both round of dimension 2 but with boundary paths of different lengths
    with pytest.raises(NotParallelError):
        atom(globe(2), atom(path(2), path(2)))


def test_atom_boundaries_recovered():
    U, V = path(2), path(2)
    lens = atom(U, V)
    for alpha, side in (("-", U), ("+", V)):
        sub, _ = lens.boundary(1, alpha).extract()
        assert find_iso(sub, side.poset) is not None


def test_suspension_globe():
    for k in range(4):
        assert molecule_iso(suspension(globe(k)), globe(k + 1)) is not None


def test_suspension_of_path_is_stacked_globes():
    assert molecule_iso(suspension(path(2)), paste(globe(2), globe(2), 1)) is not None


def test_suspension_dim_and_cert():
    s = suspension(path(2))
    assert s.dim == path(2).dim + 1
    assert molecule_iso(replay(s.cert), s) is not None


def test_join_point_point():
    assert join(point(), point()).counts == (2, 1)


def test_join_arrow_point_is_two_oriental():
    d2 = join(path(1), point())
    assert molecule_iso(d2, atom(path(1), path(2))) is not None


def test_join_associative_up_to_iso():
    a = join(join(point(), point()), point())
    b = join(point(), join(point(), point()))
    assert find_iso(a.poset, b.poset) is not None


def test_oriental_sizes():
    for n in range(6):
        assert oriental(n).size() == 2 ** (n + 1) - 1
    assert oriental(3).size() == 15


def test_oriental_is_atom():
    for n in range(5):
        assert oriental(n).greatest() is not None


def test_oriental_labels_are_subsets():
    mol, labels = oriental_with_labels(3)
    assert len(labels) == 15
    assert labels[frozenset({0, 1, 2, 3})] == mol.greatest()
    for subset, el in labels.items():
        assert el[0] == len(subset) - 1


def test_theta_trees():
    assert theta_from_tree("()").counts == (1,)
    assert molecule_iso(theta_from_tree("((),())"), path(2)) is not None
    assert molecule_iso(theta_from_tree("((()))"), globe(2)) is not None


def test_parse_tree_rejects_garbage():
    with pytest.raises(ValueError):
        parse_tree("((")
    with pytest.raises(ValueError):
        parse_tree("()x")


def test_round_examples(horiz):
    assert is_round(path(2))
    assert all(is_round(globe(k)) for k in range(4))
    assert not is_round(horiz)


def test_atoms_are_round(corpus):
    for mol in corpus:
        if mol.greatest() is not None:
            assert is_round(mol)


def test_round_molecules_are_pure(round_corpus):
    assert len(round_corpus) >= 100
    for mol in round_corpus:
        top_dim = mol.dim
        assert all(el[0] == top_dim for el in mol.as_closed().maximal())


def test_is_molecule_on_constructions(corpus):
    for mol in corpus[:60]:
        cert = is_molecule(mol.poset)
        assert cert is not None
        assert molecule_iso(replay(cert), mol) is not None


def test_is_molecule_rejections(sphere_boundary, parallel_pair):
    assert is_molecule(sphere_boundary) is None
    assert is_molecule(parallel_pair) is None


def test_splits_of_atom_empty():
    assert splits(globe(2), 0) == []
    assert splits(globe(2), 1) == []
    assert splits(oriental(2), 0) == []


def test_splits_of_path():
    got = {(a.size(), b.size()) for a, b in splits(path(3), 0)}
    assert got == {(3, 5), (5, 3)}


def test_splits_whiskers(horiz, vert):
    assert len(splits(horiz, 1)) == 2
    assert splits(vert, 0) == []


def test_splits_parts_cover_and_meet(corpus):
    for mol in corpus[:30]:
        P = mol.poset
        for k in range(mol.dim):
            for a, b in splits(mol, k):
                union = tuple(x | y for x, y in zip(a.masks, b.masks))
                assert union == P.full_masks()
                inter = tuple(x & y for x, y in zip(a.masks, b.masks))
                assert inter == P.boundary_masks(a.masks, k, "+")
                assert inter == P.boundary_masks(b.masks, k, "-")


def test_submolecules_path():
    subs = submolecules(path(3))
    assert len(subs) == 10


def test_submolecules_of_two_path():
    subs = {tuple(s.subset.masks) for s in submolecules(path(2))}
    assert len(subs) == 6  # the whole, two edges, three vertices


def test_submolecules_globe():
    got = {tuple(s.subset.masks) for s in submolecules(globe(2))}
    assert len(got) == 5  # whole, two boundary arrows, two poles


def test_submolecule_members_are_molecules(corpus):
    for mol in corpus[:20]:
        for sub in submolecules(mol):
            assert is_molecule(sub.subset.extract()[0]) is not None


def test_factors_through_atom(horiz):
    from dcx import Closed, closure

    o2 = oriental(2)
    # the length-2 path inside the 2-simplex sits under the top cell
    assert factors_through_atom(o2, o2.boundary(1, "+"))
    # a single cell closure always factors
    assert factors_through_atom(horiz, closure(horiz.poset, [(2, 0)]))
    # the input path of the side-by-side composite straddles both cells
    assert not factors_through_atom(horiz, horiz.boundary(1, "-"))
    assert not factors_through_atom(horiz, Closed.full(horiz.poset))


def test_paste_associative_and_unital(corpus):
    import itertools

    triples = 0
    pool = [m for m in corpus if m.size() <= 12]
    for A, B in itertools.islice(itertools.combinations(pool, 2), 300):
        for k in range(min(A.dim, B.dim) + 1):
            try:
                AB = paste(A, B, k)
            except BoundaryMismatchError:
                continue
            try:
                BC = paste(B, B, k)
                left = paste(AB, B, k)
                right = paste(A, BC, k)
            except BoundaryMismatchError:
                continue
            assert find_iso(left.poset, right.poset) is not None
            triples += 1
            if triples >= 12:
                return
    assert triples > 0
