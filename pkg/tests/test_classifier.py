import itertools

import pytest

from gifree.catalog import make
from gifree.classifier import (
    CW_OPEN,
    GI_OPEN,
    MAX_VERTICES,
    RULE_DESCRIPTIONS,
    ClassifierError,
    classify_cw,
    classify_gi,
    equivalence_closure,
    rule_guard_holds,
)
from gifree.generators import small_graphs
from gifree.graph import complement
from gifree.iso import are_isomorphic


def iso(a, b):
    return are_isomorphic(a, b) is not None


def has_pair(closure, a, b):
    a, b = make(a) if isinstance(a, str) else a, make(b) if isinstance(b, str) else b
    return any(
        (iso(m.h1, a) and iso(m.h2, b)) or (iso(m.h1, b) and iso(m.h2, a)) for m in closure
    )


def test_closure_examples():
    c = equivalence_closure(make("K3"), make("P5"))
    assert has_pair(c, "paw", "P5")
    assert has_pair(c, "3P1", complement(make("P5")))
    assert has_pair(c, "P1+P3", complement(make("P5")))
    assert len(equivalence_closure(make("P4"), make("P4"))) == 1


def test_closure_size_bound():
    for a, b in itertools.combinations_with_replacement(small_graphs(4), 2):
        assert 1 <= len(equivalence_closure(a, b)) <= 8


@pytest.mark.parametrize(
    "h1, h2, status, rule",
    [
        ("gem", "P1+2P2", "GIComplete", "T10.2.viii"),
        ("crossed-house", "P5", "Polynomial", "T10.1.viii"),
        ("K3", "P7", "Open", "OP-GI.i"),
        ("P4", "petersen", "Polynomial", "T10.1.i"),
    ],
)
def test_gi_examples(h1, h2, status, rule):
    v = classify_gi(make(h1), make(h2))
    assert (v.status, v.rule) == (status, rule)
    assert rule_guard_holds(v.rule, v)


@pytest.mark.parametrize(
    "h1, h2, status, rule",
    [
        ("gem", "P1+2P2", "Unbounded", "T9.2.vii"),
        ("K3", "S_{1,2,3}", "Open", "OP-CW.i"),
        ("paw", "P6", "Bounded", "T9.1.iii"),
    ],
)
def test_cw_examples(h1, h2, status, rule):
    v = classify_cw(make(h1), make(h2))
    assert (v.status, v.rule) == (status, rule)
    assert rule_guard_holds(v.rule, v)


def test_order_of_arguments_is_irrelevant():
    for a, b in itertools.combinations(small_graphs(4), 2):
        assert classify_gi(a, b).status == classify_gi(b, a).status
        assert classify_cw(a, b).status == classify_cw(b, a).status


def test_status_is_constant_on_closures():
    for a, b in itertools.combinations_with_replacement(small_graphs(4), 2):
        gi = classify_gi(a, b).status
        cw = classify_cw(a, b).status
        for m in equivalence_closure(a, b):
            assert classify_gi(m.h1, m.h2).status == gi
            assert classify_cw(m.h1, m.h2).status == cw


def test_every_verdict_reverifies():
    for a, b in itertools.combinations_with_replacement(small_graphs(4), 2):
        for v in (classify_gi(a, b), classify_cw(a, b)):
            assert rule_guard_holds(v.rule, v)
            assert v.description == RULE_DESCRIPTIONS[v.rule]


@pytest.mark.parametrize("table, classify", [(GI_OPEN, classify_gi), (CW_OPEN, classify_cw)])
def test_listed_open_pairs_are_open(table, classify):
    for rid, (a, b) in table:
        v = classify(make(a), make(b))
        assert (v.status, v.rule) == ("Open", rid)


@pytest.mark.parametrize(
    "h1, h2",
    [("paw", "P6"), ("paw", "S_{1,2,2}"), ("paw", "P2+P4"), ("diamond", "P1+2P2"), ("gem", "P1+P4"), ("gem", "P5")],
)
def test_bounded_width_pairs_are_polynomial(h1, h2):
    assert classify_cw(make(h1), make(h2)).status == "Bounded"
    assert classify_gi(make(h1), make(h2)).status == "Polynomial"


def test_gi_complete_implies_unbounded_width():
    # a GI-complete class must have unbounded clique-width
    for a, b in itertools.combinations_with_replacement(small_graphs(4), 2):
        if classify_gi(a, b).status == "GIComplete":
            assert classify_cw(a, b).status == "Unbounded"


def test_size_cap():
    with pytest.raises(ClassifierError):
        classify_gi(make(f"P{MAX_VERTICES + 1}"), make("K3"))
    classify_gi(make(f"P{MAX_VERTICES}"), make("K3"))
