"""Kirchhoff and response matrices, Dirichlet solves and peeling updates.

Matrix rows follow ``net.boundary_vertices()`` (circle order, then the
interior boundary vertex) followed by internal vertices in id order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import Disconnected, ShapeMismatch, SpikeSingular
from .netcore import EmbeddedNetwork
from .ratlinalg import RationalMatrix, schur_complement, solve, to_fraction


@dataclass(frozen=True)
class KirchhoffMatrix:
    matrix: RationalMatrix
    n_boundary: int
    order: tuple[int, ...]  # matrix index -> vertex id

    def index(self, v: int) -> int:
        return self.order.index(v)


@dataclass(frozen=True)
class ResponseMatrix:
    matrix: RationalMatrix
    boundary: tuple[int, ...]  # matrix index -> vertex id

    @property
    def n(self) -> int:
        return self.matrix.rows

    def __eq__(self, other):
        if isinstance(other, ResponseMatrix):
            return self.matrix == other.matrix
        if isinstance(other, RationalMatrix):
            return self.matrix == other
        return NotImplemented

    def __hash__(self):
        return hash(self.matrix)


@dataclass(frozen=True)
class PotentialSolution:
    potentials: tuple[Fraction, ...]  # by vertex id
    voltages: tuple[Fraction, ...]  # by edge id, f(u) - f(v)
    currents: tuple[Fraction, ...]  # by edge id, flowing u -> v
    boundary_currents: tuple[Fraction, ...]  # into each boundary vertex, boundary order


def vertex_order(net: EmbeddedNetwork) -> list[int]:
    return net.boundary_vertices() + net.internal_vertices()


def kirchhoff(net: EmbeddedNetwork) -> KirchhoffMatrix:
    if not net.is_connected():
        raise Disconnected("network is not connected")
    order = vertex_order(net)
    idx = {v: i for i, v in enumerate(order)}
    m = len(order)
    k = [[Fraction(0)] * m for _ in range(m)]
    for e in net.edges:
        if e.is_loop:
            continue
        i, j = idx[e.u], idx[e.v]
        c = e.conductance
        k[i][j] += c
        k[j][i] += c
        k[i][i] -= c
        k[j][j] -= c
    return KirchhoffMatrix(RationalMatrix(k, m), len(net.boundary_vertices()), tuple(order))


def _blocks(k: RationalMatrix, n: int):
    m = k.rows
    bi = list(range(n))
    ii = list(range(n, m))
    return k.submatrix(bi, bi), k.submatrix(bi, ii), k.submatrix(ii, ii)


def response(net: EmbeddedNetwork) -> ResponseMatrix:
    km = kirchhoff(net)
    a, b, c = _blocks(km.matrix, km.n_boundary)
    return ResponseMatrix(schur_complement(a, b, c), km.order[: km.n_boundary])


def response_float(net: EmbeddedNetwork, conductances: Sequence[float] | None = None) -> np.ndarray:
    """Float response matrix; conductances override the network's own."""
    if not net.is_connected():
        raise Disconnected("network is not connected")
    order = vertex_order(net)
    idx = {v: i for i, v in enumerate(order)}
    m = len(order)
    n = len(net.boundary_vertices())
    k = np.zeros((m, m))
    for e in net.edges:
        if e.is_loop:
            continue
        c = float(e.conductance if conductances is None else conductances[e.id])
        i, j = idx[e.u], idx[e.v]
        k[i, j] += c
        k[j, i] += c
        k[i, i] -= c
        k[j, j] -= c
    a, b, cc = k[:n, :n], k[:n, n:], k[n:, n:]
    if m == n:
        return a
    return a - b @ np.linalg.solve(cc, b.T)


def solve_dirichlet(net: EmbeddedNetwork, boundary_potentials: Sequence) -> PotentialSolution:
    km = kirchhoff(net)
    n = km.n_boundary
    if len(boundary_potentials) != n:
        raise ShapeMismatch(f"expected {n} boundary potentials, got {len(boundary_potentials)}")
    u = [to_fraction(x) for x in boundary_potentials]
    a, b, c = _blocks(km.matrix, n)
    # C x = -B^T u
    rhs = [-s for s in b.transpose().apply(u)] if b.cols else []
    inner = solve(c, rhs) if c.rows else []
    f_ordered = u + list(inner)
    f = [Fraction(0)] * net.n_vertices
    for i, v in enumerate(km.order):
        f[v] = f_ordered[i]
    volts = tuple(f[e.u] - f[e.v] for e in net.edges)
    currents = tuple(e.conductance * dv for e, dv in zip(net.edges, volts))
    kf = km.matrix.apply(f_ordered)
    return PotentialSolution(tuple(f), volts, currents, tuple(kf[:n]))


def _unwrap(lam):
    if isinstance(lam, ResponseMatrix):
        return lam.matrix, lam.boundary
    return lam, None


def _wrap(m: RationalMatrix, boundary):
    return m if boundary is None else ResponseMatrix(m, boundary)


def peel_boundary_edge(lam, p: int, q: int, c):
    """Response after deleting a boundary edge of conductance c between indices p and q."""
    m, boundary = _unwrap(lam)
    c = to_fraction(c)
    rows = m.tolist()
    rows[p][p] += c
    rows[q][q] += c
    rows[p][q] -= c
    rows[q][p] -= c
    return _wrap(RationalMatrix(rows, m.cols), boundary)


def peel_boundary_spike(lam, p: int, xi):
    """Response after contracting the spike of conductance xi at boundary index p.

    The spike's inner endpoint takes over index p.
    """
    m, boundary = _unwrap(lam)
    xi = to_fraction(xi)
    lpp = m[p, p]
    den = lpp + xi
    if den == 0:
        raise SpikeSingular("spike conductance makes the update singular")
    n = m.rows
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == p and j == p:
                out[i][j] = lpp * xi / den
            elif i == p:
                out[i][j] = xi * m[p, j] / den
            elif j == p:
                out[i][j] = xi * m[i, p] / den
            else:
                out[i][j] = m[i, j] - m[i, p] * m[p, j] / den
    return _wrap(RationalMatrix(out, n), boundary)
