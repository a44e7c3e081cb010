"""Generator families and their structural counts."""

import random

import pytest

from disknet import generators as gen
from disknet.errors import BadN
from disknet.medial import check_irreducible
from disknet.netcore import Kind, canonical_code, is_valid

@pytest.mark.parametrize("n,vertices,edges", [(3, 3, 3), (4, 6, 6), (5, 10, 10), (6, 12, 15), (7, 14, 21), (8, 20, 28)])
def test_layered_polygon_counts(n, vertices, edges):
    net = gen.four_periodic(n)
    assert (net.n_vertices, net.n_edges) == (vertices, edges)
    assert len(net.boundary_order) == n
    assert is_valid(net)


@pytest.mark.parametrize("n", range(3, 9))
def test_spider_adds_center_hub(n):
    base, net = gen.four_periodic(n), gen.spider(n)
    assert net.n_vertices == base.n_vertices + 1
    assert net.n_edges == base.n_edges + n
    b = net.interior_boundary
    assert net.kinds[b] is Kind.INTERIOR_BOUNDARY
    assert len(net.rotation[b]) == n


def test_spider3_shape():
    net = gen.spider(3)
    assert (net.n_vertices, net.n_edges) == (4, 6)


@pytest.mark.parametrize("n", [-1, 0, 1, 2])
def test_bad_n(n):
    with pytest.raises(BadN):
        gen.four_periodic(n)
    with pytest.raises(BadN):
        gen.spider(n)


def test_layers():
    assert [gen.layers(n) for n in range(3, 12)] == [1, 1, 1, 1, 2, 2, 2, 2, 3]


def test_deterministic():
    assert canonical_code(gen.four_periodic(9)) == canonical_code(gen.four_periodic(9))
    a = gen.random_network(17, 5, 5, extras=3, interior_boundary=True)
    b = gen.random_network(17, 5, 5, extras=3, interior_boundary=True)
    assert canonical_code(a) == canonical_code(b)


@pytest.mark.parametrize("seed", range(25))
def test_random_networks_valid(seed):
    net = gen.random_network(seed, 3 + seed % 4, seed % 5, extras=seed % 3, interior_boundary=seed % 2 == 1)
    assert is_valid(net)
    assert len(net.boundary_order) == 3 + seed % 4
    assert all(e.conductance > 0 for e in net.edges)


def test_random_extras_break_irreducibility():
    # a parallel pair or a loop always yields a reducible medial graph
    hits = 0
    for seed in range(40):
        net = gen.random_network(seed, 4, 3, extras=2)
        pairs = {}
        for e in net.edges:
            pairs[frozenset((e.u, e.v))] = pairs.get(frozenset((e.u, e.v)), 0) + 1
        if any(e.is_loop for e in net.edges) or any(c > 1 for c in pairs.values()):
            hits += 1
            assert not check_irreducible(net).ok
    assert hits > 0


def test_random_conductances_positive_and_seeded():
    a = gen.random_conductances(gen.spider(5), random.Random(3))
    b = gen.random_conductances(gen.spider(5), random.Random(3))
    assert [e.conductance for e in a.edges] == [e.conductance for e in b.edges]
    assert all(e.conductance > 0 for e in a.edges)


def test_star_family():
    fam = gen.star_inserted_family()
    assert len(fam) >= 10
    names = [n for n, _ in fam]
    assert len(set(names)) == len(names)
    for _, net in fam:
        assert is_valid(net)
        assert net.interior_boundary is not None


def test_fixture_networks():
    ex = gen.example1()
    assert (ex.n_vertices, ex.n_edges, len(ex.boundary_order)) == (4, 6, 2)
    fig = gen.figure1_rnpd()
    assert fig.interior_boundary is not None
    assert len(fig.boundary_order) == 2
