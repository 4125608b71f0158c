"""Collections, certificates, verification, and the threshold hypergraph."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transversals.collection import (
    Collection,
    TransversalCertificate,
    collection_min_degree,
    induced_collection,
    is_cycle_copy,
    rainbow_colouring,
    threshold_hypergraph,
    verify_certificate,
)
from transversals.errors import InvalidInput
from transversals.gen import GenSpec, generate
from transversals.hypergraph import Hypergraph, complete_graph, cycle_graph, min_degree_d
from transversals.links import cycle_on, single_edge_link, triangle_link
from transversals.rng import rng_for


def make_cycle_cert(n):
    """A certificate assigning edge i of the n-cycle to colour i."""
    target = cycle_graph(n)
    edges = sorted(target.edges)
    return target, TransversalCertificate.from_mapping(
        target, {e: i for i, e in enumerate(edges)}
    )


def all_complete(n, m):
    return Collection(n, 2, tuple(complete_graph(n) for _ in range(m)))


def test_collection_rejects_mismatched_members():
    with pytest.raises(InvalidInput):
        Collection(4, 2, (complete_graph(4), complete_graph(5)))


def test_colours_of_lists_members_containing_edge():
    C = Collection(4, 2, (cycle_graph(4), complete_graph(4)))
    assert C.colours_of((0, 2)) == [1]
    assert C.colours_of((0, 1)) == [0, 1]


def test_verify_accepts_valid_cycle_certificate():
    n = 6
    C = all_complete(n, n)
    _, cert = make_cycle_cert(n)
    assert verify_certificate(C, cert, single_edge_link(2, 1))


def test_verify_rejects_duplicate_colour():
    n = 4
    C = all_complete(n, n)
    target = cycle_graph(n)
    edges = sorted(target.edges)
    cert = TransversalCertificate.from_mapping(
        target, {e: min(i, 2) for i, e in enumerate(edges)}
    )
    res = verify_certificate(C, cert)
    assert not res and res.reason == "DuplicateColour"


def test_verify_rejects_edge_outside_member():
    n = 4
    C = Collection(n, 2, tuple([cycle_graph(n)] * n))
    target = Hypergraph.from_edges(n, 2, [(0, 2), (0, 1), (1, 3), (2, 3)])
    cert = TransversalCertificate.from_mapping(
        target, {e: i for i, e in enumerate(sorted(target.edges))}
    )
    res = verify_certificate(C, cert)
    assert not res and res.reason == "EdgeNotInColour"


def test_verify_rejects_non_spanning():
    C = all_complete(6, 3)
    target = Hypergraph.from_edges(6, 2, [(0, 1), (1, 2), (0, 2)])
    cert = TransversalCertificate.from_mapping(
        target, {e: i for i, e in enumerate(sorted(target.edges))}
    )
    res = verify_certificate(C, cert, triangle_link())
    assert not res and res.reason == "NotSpanning"


def test_verify_rejects_wrong_shape():
    n = 6
    C = all_complete(n, n)
    # spanning, right edge count, but a theta-graph rather than a cycle
    target = Hypergraph.from_edges(
        n, 2, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 2)]
    )
    cert = TransversalCertificate.from_mapping(
        target, {e: i for i, e in enumerate(sorted(target.edges))}
    )
    res = verify_certificate(C, cert, single_edge_link(2, 1))
    assert not res and res.reason == "NotCycleShape"


def test_is_cycle_copy_relabelled():
    link = single_edge_link(2, 1)
    # the 5-cycle 0-2-4-1-3-0
    seq = [0, 2, 4, 1, 3]
    edges = [tuple(sorted((seq[i], seq[(i + 1) % 5]))) for i in range(5)]
    assert is_cycle_copy(Hypergraph.from_edges(5, 2, edges), link)
    assert is_cycle_copy(cycle_on(triangle_link(), 6), triangle_link())


def test_certificate_json_round_trip():
    n = 5
    _, cert = make_cycle_cert(n)
    back = TransversalCertificate.from_json(cert.to_json(), n, 2)
    assert back == cert


def test_threshold_hypergraph_counts():
    C = Collection(4, 2, (cycle_graph(4), cycle_graph(4), complete_graph(4)))
    K2 = threshold_hypergraph(C, range(3), 2)
    assert K2.edges == cycle_graph(4).edges
    K3 = threshold_hypergraph(C, range(3), 3)
    assert K3.edges == cycle_graph(4).edges
    K1 = threshold_hypergraph(C, range(3), 1)
    assert K1.edges == complete_graph(4).edges


def test_threshold_audit_random_instance():
    # brute-force degree audit of the threshold guarantee
    C = generate(GenSpec(n=8, k=2, m=10, delta_fraction=0.5, family="random", seed=3))
    theta = 3
    K = threshold_hypergraph(C, range(C.m), theta)
    bound = collection_min_degree(C, 1) - theta * 8 / 10
    assert min_degree_d(K, 1) >= bound


def test_induced_collection_relabels():
    C = all_complete(6, 2)
    sub, labels = induced_collection(C, [1, 3, 5])
    assert sub.n == 3 and labels == [1, 3, 5]
    assert sub.members[0].edges == complete_graph(3).edges


def test_rainbow_colouring_found():
    n = 5
    C = all_complete(n, n)
    cert = rainbow_colouring(C, cycle_graph(n), range(n))
    assert cert is not None
    assert verify_certificate(C, cert)


def test_rainbow_colouring_none_is_hall_refutation():
    # colours 0 and 1 only contain edge (0,1): two target edges cannot both use it
    n = 4
    empty = Hypergraph(n, 2, frozenset({(0, 1)}))
    C = Collection(n, 2, (empty, empty, complete_graph(n), complete_graph(n)))
    assert rainbow_colouring(C, cycle_graph(n), range(4)) is None


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_rainbow_colouring_matches_brute_force(seed):
    rng = rng_for(seed, "rainbow-oracle")
    n = 5
    target = cycle_graph(n)
    members = []
    for _ in range(n):
        edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < 0.4]
        members.append(Hypergraph.from_edges(n, 2, edges))
    C = Collection(n, 2, tuple(members))
    got = rainbow_colouring(C, target, range(n))
    # brute force over all injective colourings
    edges = sorted(target.edges)
    exists = any(
        all(edges[i] in C.members[p[i]].edges for i in range(n))
        for p in itertools.permutations(range(n))
    )
    assert (got is not None) == exists
    if got is not None:
        assert verify_certificate(C, got)
