import random

import pytest
from hypothesis import given, settings

from gifree.catalog import make
from gifree.cliquewidth import (
    CertificateError,
    CliqueWidthError,
    Create,
    GridPartitionCertificate,
    Join,
    Rename,
    Union,
    build_hn_prime,
    certificate_from_mapping,
    clique_expression,
    cw_at_most,
    evaluate,
    exact_cliquewidth,
    expression_text,
    labels_used,
    parse_partition,
    verify_grid_certificate,
)
from gifree.generators import graphs_on, random_graph
from gifree.graph import complement, empty
from gifree.subiso import contains_induced
from oracles import graphs


def test_evaluate_examples():
    assert evaluate(Create(1)) == make("P1")
    assert evaluate(Join(1, 2, Union(Create(1), Create(2)))) == make("P2")
    assert evaluate(clique_expression(5)) == make("K5")
    assert labels_used(clique_expression(5)) == {1, 2}


def test_evaluate_rejects_bad_labels():
    with pytest.raises(CliqueWidthError):
        evaluate(Create(3), k=2)
    with pytest.raises(CliqueWidthError):
        evaluate(Join(1, 1, Create(1)))
    with pytest.raises(CliqueWidthError):
        evaluate(Create(0))


def test_rename_merges_labels():
    e = Join(1, 2, Rename(3, 2, Union(Create(1, 0), Union(Create(2, 1), Create(3, 2)))))
    assert evaluate(e) == make("K_{1,2}")
    assert expression_text(Rename(2, 1, Create(2, 0))) == "r2>1[2(v0)]"
    assert expression_text(Join(1, 2, Union(Create(1), Create(2)))) == "j1,2[(1() + 2())]"


def test_known_widths():
    assert exact_cliquewidth(empty(4)).width == 1
    for n in range(2, 7):
        assert exact_cliquewidth(make(f"K{n}")).width == 2
    res = exact_cliquewidth(make("P4"))
    assert res.width == 3
    assert cw_at_most(make("P4"), 2) is None
    assert exact_cliquewidth(make("C5")).width == 3
    assert exact_cliquewidth(make("P1")).width == 1


def test_limit_and_cap():
    res = exact_cliquewidth(make("P4"), limit=2)
    assert res.exceeds_limit and res.expression is None
    with pytest.raises(CliqueWidthError):
        exact_cliquewidth(make("P11"))


def test_width_two_is_cograph():
    # width <= 2 exactly for P4-free graphs
    P4 = make("P4")
    for n in range(2, 7):
        for G in graphs_on(n):
            assert (cw_at_most(G, 2) is not None) == (not contains_induced(G, P4))


@settings(max_examples=40)
@given(graphs(min_n=1, max_n=7))
def test_witness_rebuilds_graph(G):
    res = exact_cliquewidth(G)
    assert res.width is not None
    assert evaluate(res.expression, k=res.width) == G
    assert len(labels_used(res.expression)) <= res.width
    if res.width > 1:
        assert cw_at_most(G, res.width - 1) is None


def test_complement_bounds():
    # complementing at most doubles clique-width
    rng = random.Random(4)
    for _ in range(15):
        G = random_graph(rng, 7, 0.5)
        a = exact_cliquewidth(G).width
        b = exact_cliquewidth(complement(G)).width
        assert b <= 2 * a and a <= 2 * b


@pytest.mark.parametrize("n, bound", [(3, 2), (4, 2), (5, 3), (6, 3)])
def test_hn_prime_certificates(n, bound):
    G, cert = build_hn_prime(n)
    assert verify_grid_certificate(G, cert) == bound


def test_larger_certificate():
    G, cert = build_hn_prime(9)
    assert verify_grid_certificate(G, cert) == 5


def test_corrupted_certificates():
    G, cert = build_hn_prime(4)
    cells = list(cert.partition)
    moved = [v for v, c in enumerate(cells) if c == (1, 1)]
    for v in moved:
        cells[v] = (1, 2)
    with pytest.raises(CertificateError) as err:
        verify_grid_certificate(G, GridPartitionCertificate(tuple(cells), 1, 4))
    assert err.value.premise == 1
    cells = list(cert.partition)
    cells[0] = (5, 1)
    with pytest.raises(CertificateError) as err:
        verify_grid_certificate(G, GridPartitionCertificate(tuple(cells), 1, 4))
    assert err.value.premise == 0
    with pytest.raises(CertificateError):
        verify_grid_certificate(G, GridPartitionCertificate(cert.partition[:-1], 1, 4))
    with pytest.raises(CliqueWidthError):
        verify_grid_certificate(G, GridPartitionCertificate(cert.partition, 2, 3))


def test_partition_text_round_trip():
    G, cert = build_hn_prime(3)
    mapping = parse_partition("# cells\n" + cert.to_text())
    assert certificate_from_mapping(mapping, 1) == cert
    with pytest.raises(CliqueWidthError):
        parse_partition("0 1\n")
    with pytest.raises(CliqueWidthError):
        parse_partition("0 1 1\n0 2 2\n")
    with pytest.raises(CliqueWidthError):
        parse_partition("a b c\n")
