import pytest

from dcx import (
    Molecule,
    atom,
    globe,
    is_round,
    oriental,
    paste,
    path,
    point,
    random_molecules,
    suspension,
    validate,
)

CORPUS_SEED = 20260809
CORPUS_SIZE = 200


@pytest.fixture(scope="session")
def corpus():
    """Random molecules shared by the property and acceptance tests."""
    return random_molecules(CORPUS_SIZE, seed=CORPUS_SEED)


@pytest.fixture(scope="session")
def round_corpus(corpus):
    """At least 100 distinct round molecules."""
    pool = {}

    def add(m):
        if is_round(m) and m.key not in pool:
            pool[m.key] = m

    for m in corpus:
        add(m)
    for k in range(13):
        add(path(k))
        add(suspension(path(k)))
        add(suspension(suspension(path(min(k, 6)))))
    for k in range(5):
        add(globe(k))
    for n in range(6):
        add(oriental(n))
    lenses = {}
    for a in range(1, 7):
        for b in range(1, 7):
            lens = atom(path(a), path(b))
            lenses[(a, b)] = lens
            add(lens)
            if a + b <= 7:
                add(suspension(lens))
    for a in range(1, 4):
        for b in range(1, 4):
            add(atom(lenses[(a, b)], lenses[(a, b)]))
    tower = globe(2)
    for _ in range(6):
        tower = paste(tower, globe(2), 1)
        add(tower)
    assert len(pool) >= 100
    return list(pool.values())


@pytest.fixture(scope="session")
def small_corpus(corpus):
    return [m for m in corpus if m.size() <= 16][:60]


@pytest.fixture
def horiz():
    """Two 2-globes pasted side by side at level 0."""
    return paste(globe(2), globe(2), 0)


@pytest.fixture
def vert():
    """Two 2-globes stacked at level 1."""
    return paste(globe(2), globe(2), 1)


@pytest.fixture
def sphere_boundary():
    """The boundary of the 2-simplex with the top cell removed."""
    return validate([3, [([0], [1]), ([1], [2]), ([0], [2])]])


@pytest.fixture
def parallel_pair():
    """Two parallel edges between the same endpoints."""
    return validate([2, [([0], [1]), ([0], [1])]])


def compositions(k):
    """All compositions of k, as tuples of positive integers."""
    if k == 0:
        return [()]
    out = []
    for first in range(1, k + 1):
        for rest in compositions(k - first):
            out.append((first,) + rest)
    return out


def composition_refines(fine, coarse):
    """fine refines coarse by consecutive grouping (sums)."""
    i = 0
    for part in coarse:
        acc = 0
        while i < len(fine) and acc < part:
            acc += fine[i]
            i += 1
        if acc != part:
            return False
    return i == len(fine)
