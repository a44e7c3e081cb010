"""Kirchhoff/response matrices, Dirichlet solves and peeling updates."""

import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from disknet import generators as gen
from disknet.errors import Disconnected, ShapeMismatch, SpikeSingular
from disknet.netcore import NetworkEditor, contract_edge, delete_edge
from disknet.ratlinalg import RationalMatrix, schur_complement
from disknet.response import (
    kirchhoff,
    peel_boundary_edge,
    peel_boundary_spike,
    response,
    response_float,
    solve_dirichlet,
)

EXAMPLE1_K = [[-5, 1, 1, 3], [1, -5, 2, 2], [1, 2, -3, 0], [3, 2, 0, -5]]


def test_example1_kirchhoff_exact():
    assert kirchhoff(gen.example1()).matrix == RationalMatrix(EXAMPLE1_K)


def test_example1_response_is_schur_complement():
    lam = response(gen.example1())
    assert lam.matrix == RationalMatrix([[F(-43, 15), F(43, 15)], [F(43, 15), F(-43, 15)]])


def test_sign_slip_block_gives_stated_off_diagonal():
    # the stated 7/15 comes from a coupling block with a sign slip in one entry
    a = RationalMatrix([[-5, 1], [1, -5]])
    b = RationalMatrix([[1, 3], [2, -2]])
    c = RationalMatrix([[-3, 0], [0, -5]])
    assert schur_complement(a, b, c) == RationalMatrix([[F(-43, 15), F(7, 15)], [F(7, 15), F(-43, 15)]])


def test_series_response():
    lam = response(gen.path_network([2, 3]))
    assert lam.matrix == RationalMatrix([[F(-6, 5), F(6, 5)], [F(6, 5), F(-6, 5)]])


def test_dirichlet_example1():
    sol = solve_dirichlet(gen.example1(), [1, 0])
    assert list(sol.boundary_currents) == [F(-43, 15), F(43, 15)]
    # internal vertices satisfy Kirchhoff's current law
    net = gen.example1()
    for v in net.internal_vertices():
        flow = sum(sol.currents[e.id] * (1 if e.u == v else -1) for e in net.edges if v in (e.u, e.v) and not e.is_loop)
        assert flow == 0


def test_dirichlet_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        solve_dirichlet(gen.example1(), [1])


def test_disconnected_raises():
    ed = NetworkEditor(gen.single_edge())
    ed.remove_edge(0)
    net = ed.finish()[0]
    with pytest.raises(Disconnected):
        response(net)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_response_properties(seed):
    net = gen.random_network(seed, n_boundary=4, n_interior=4, extras=2, interior_boundary=seed % 2 == 0)
    lam = response(net).matrix
    assert lam.is_symmetric()
    for i in range(lam.rows):
        assert sum(lam.row(i)) == 0
        assert lam[i, i] <= 0
    assert np.allclose(lam.to_float(), response_float(net))


def test_peel_boundary_edge_matches_deletion():
    rng = random.Random(4)
    for _ in range(20):
        net = gen.random_conductances(gen.four_periodic(6), rng)
        slot = {v: i for i, v in enumerate(net.boundary_vertices())}
        for e in net.edges:
            if e.u in slot and e.v in slot:
                peeled = peel_boundary_edge(response(net), slot[e.u], slot[e.v], e.conductance)
                assert peeled == response(delete_edge(net, e.id))


def test_peel_boundary_spike_matches_contraction():
    rng = random.Random(5)
    for _ in range(20):
        net = gen.random_conductances(gen.four_periodic(5), rng)
        for i, p in enumerate(net.boundary_order):
            (d,) = net.rotation[p]
            peeled = peel_boundary_spike(response(net), i, net.edges[d >> 1].conductance)
            assert peeled == response(contract_edge(net, d >> 1))


def test_spike_singular():
    with pytest.raises(SpikeSingular):
        peel_boundary_spike(RationalMatrix([[-1, 1], [1, -1]]), 0, 1)
