import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ordercomplex.errors import SimplexLimit
from ordercomplex.homology import (
    CollapseCertificate,
    SimplicialComplexData,
    boundary_matrices,
    count_chains,
    elementary_collapse,
    homology_of,
    order_complex,
    reduced_homology,
    replay_collapse,
)
from ordercomplex.lattice import Poset

# six-vertex projective plane
RP2 = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
       (1, 2, 4), (2, 3, 5), (1, 3, 4), (2, 4, 5), (1, 3, 5)]


def complex_of(faces, n=None):
    n = n if n is not None else max(max(f) for f in faces) + 1
    return SimplicialComplexData.from_faces(tuple(range(n)), faces)


def test_known_spaces():
    circle = complex_of([(0, 1), (1, 2), (0, 2)])
    assert homology_of(circle).nonzero() == {1: 1}
    sphere = complex_of([f for f in itertools.combinations(range(4), 3)])
    assert homology_of(sphere).nonzero() == {2: 1}
    assert homology_of(sphere, reduced=False).nonzero() == {0: 1, 2: 1}
    rp2 = homology_of(complex_of(RP2))
    assert rp2.nonzero() == {} and rp2.torsion[1] == [2]
    assert not rp2.is_acyclic()
    torus_like = complex_of([(0, 1), (2, 3)])
    assert homology_of(torus_like).nonzero() == {0: 1}


def test_empty_and_point():
    empty = SimplicialComplexData((), [])
    h = homology_of(empty)
    assert h.betti == {-1: 1} and not h.is_acyclic()
    point = complex_of([(0,)])
    assert homology_of(point).is_acyclic()
    assert homology_of(point, reduced=False).betti == {0: 1}


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(0, 6), min_size=1, max_size=4, unique=True), min_size=1, max_size=12))
def test_boundary_squares_to_zero_and_euler(faces):
    c = complex_of([tuple(f) for f in faces], 7)
    mats = boundary_matrices(c)
    for a, b in zip(mats, mats[1:]):
        assert not a.matmul(b).entries
    h = homology_of(c)  # internally checks the Euler relation
    assert h.euler() == c.euler_characteristic() - 1
    cert, term = elementary_collapse(c, restarts=2, seed=1)
    assert replay_collapse(c, cert).counts() == term.counts()
    h2 = reduced_homology(c)
    assert h2.nonzero() == h.nonzero() and h2.to_json()["torsion"] == h.to_json()["torsion"]


def test_collapse_replay_rejects_tampering():
    c = complex_of([(0, 1, 2), (2, 3)])
    cert, term = elementary_collapse(c)
    assert cert.contractible and term.is_point()
    bad = CollapseCertificate(list(reversed(cert.pairs)), cert.terminal_counts)
    with pytest.raises(ValueError):
        replay_collapse(c, bad)
    with pytest.raises(ValueError):
        replay_collapse(c, CollapseCertificate(cert.pairs, [3]))


def test_collapse_does_not_change_homology():
    c = complex_of(RP2)
    cert, term = elementary_collapse(c, restarts=4)
    assert not cert.contractible
    assert homology_of(term).to_json()["torsion"] == homology_of(c).to_json()["torsion"] == {"1": [2]}


def boolean_poset(n):
    """Proper part of the Boolean lattice on n atoms (a sphere of dimension n - 2)."""
    subsets = [frozenset(s) for r in range(1, n) for s in itertools.combinations(range(n), r)]
    return Poset.from_relation(subsets, [(a, b) for a in subsets for b in subsets if a < b])


@pytest.mark.parametrize("n", [2, 3, 4])
def test_order_complex_of_boolean_lattice(n):
    p = boolean_poset(n)
    c = order_complex(p)
    assert c.counts() == count_chains(p)
    assert homology_of(c).nonzero() == {n - 2: 1}


def test_simplex_cap():
    with pytest.raises(SimplexLimit):
        order_complex(boolean_poset(4), simplex_cap=10)


def test_chain_counts_match_brute_force():
    p = boolean_poset(4)
    n = len(p)
    rel = p.less
    brute = [0] * n
    for r in range(1, n + 1):
        for ch in itertools.combinations(range(n), r):
            if all(rel[a, b] for a, b in zip(ch, ch[1:])):
                brute[r - 1] += 1
            if r > 4:
                break
    brute = [b for b in brute if b]
    assert count_chains(p) == brute


def test_json_shape():
    c = complex_of([(0, 1)])
    doc = c.to_json()
    assert doc["dims"] == [2, 1] and doc["simplices"][-1] == [0, 1]
    assert np.array(doc["dims"]).sum() == c.size()
