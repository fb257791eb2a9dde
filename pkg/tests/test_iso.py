import random

import networkx as nx
import pytest
from hypothesis import given

from gifree.catalog import make
from gifree.generators import graphs_on, random_graph, random_relabel
from gifree.graph import build, complement, relabel
from gifree.iso import SizeLimitError, are_isomorphic, canonical_form, canonical_graph, is_isomorphism
from oracles import brute_isomorphic, graphs, permutations_of, to_nx


def test_examples():
    rng = random.Random(3)
    P = make("petersen")
    assert canonical_form(random_relabel(rng, P)).certificate == canonical_form(random_relabel(rng, P)).certificate
    assert canonical_form(make("P4")).certificate == canonical_form(complement(make("P4"))).certificate
    assert canonical_form(make("C6")).certificate != canonical_form(make("2K3")).certificate
    assert are_isomorphic(make("C5"), complement(make("C5"))) is not None
    assert are_isomorphic(make("K_{1,3}"), make("K3+P1")) is None


@given(graphs(max_n=9), permutations_of(9))
def test_relabel_invariance(G, perm):
    perm = [p for p in perm if p < G.n]
    R = relabel(G, perm)
    assert canonical_form(G).certificate == canonical_form(R).certificate
    assert canonical_graph(G) == canonical_graph(R)
    f = are_isomorphic(G, R)
    assert f is not None and is_isomorphism(G, R, f)


@given(graphs(max_n=7), graphs(max_n=7))
def test_agrees_with_brute_force(G, H):
    expected = brute_isomorphic(G, H)
    assert (are_isomorphic(G, H) is not None) == expected
    same = canonical_form(G).certificate == canonical_form(H).certificate
    assert same == expected


@given(graphs(min_n=8, max_n=14), graphs(min_n=8, max_n=14))
def test_agrees_with_networkx(G, H):
    assert (are_isomorphic(G, H) is not None) == nx.is_isomorphic(to_nx(G), to_nx(H))


def test_certificates_separate_all_seven_vertex_graphs():
    certs = {canonical_form(G).certificate for G in graphs_on(7)}
    assert len(certs) == len(graphs_on(7)) == 1044


@pytest.mark.parametrize("name", ["petersen", "K_{3,3}", "grid_4", "C8", "3K3", "co(petersen)"])
def test_symmetric_graphs(name):
    rng = random.Random(11)
    G = make(name)
    for _ in range(5):
        R = random_relabel(rng, G)
        f = are_isomorphic(G, R)
        assert f is not None and is_isomorphism(G, R, f)


def test_strongly_regular_pair():
    # Shrikhande graph versus the 4x4 rook's graph: same parameters, not isomorphic
    rook = build(16, [(a, b) for a in range(16) for b in range(a + 1, 16)
                      if a // 4 == b // 4 or a % 4 == b % 4])
    def sh(a, b):
        d = ((a // 4 - b // 4) % 4, (a % 4 - b % 4) % 4)
        return d in {(0, 1), (0, 3), (1, 0), (3, 0), (1, 1), (3, 3)}
    shrikhande = build(16, [(a, b) for a in range(16) for b in range(a + 1, 16) if sh(a, b)])
    assert rook.degree_sequence() == shrikhande.degree_sequence()
    assert are_isomorphic(rook, shrikhande) is None
    assert not nx.is_isomorphic(to_nx(rook), to_nx(shrikhande))


def test_random_graphs_against_networkx():
    rng = random.Random(5)
    for _ in range(40):
        n = rng.randint(10, 20)
        G = random_graph(rng, n, 0.5)
        H = random_relabel(rng, G) if rng.random() < 0.5 else random_graph(rng, n, 0.5)
        assert (are_isomorphic(G, H) is not None) == nx.is_isomorphic(to_nx(G), to_nx(H))


def test_is_isomorphism_rejects_non_bijections():
    G = make("P3")
    assert is_isomorphism(G, G, (2, 1, 0))
    assert not is_isomorphism(G, G, (0, 0, 1))
    assert not is_isomorphism(G, G, (1, 0, 2))
    assert not is_isomorphism(G, make("P2"), (0, 1))


def test_size_limit():
    with pytest.raises(SizeLimitError):
        canonical_form(make("P5"), limit=4)
