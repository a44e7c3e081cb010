"""Conductance recovery by peeling, Algorithm 1 and the necessary-condition checker.

Recovery peels boundary spikes (contraction) and boundary edges (deletion).
Each peeled conductance is the unique value that makes the response minor of
a connection broken by the edit vanish.  Once no internal vertex is left the
response matrix is the Kirchhoff matrix and the rest is read off directly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .connections import CriticalityReport, find_breaking_connection, is_critical_cprn
from .errors import DegenerateSystem, InconsistentResponse, NotACprn, PeelStuck, ShapeMismatch
from .netcore import (
    EmbeddedNetwork,
    Kind,
    NetworkEditor,
    augmented_faces,
    canonical_code,
    contract_edge_with_maps,
    delete_edge_with_maps,
    validate,
)
from .ratlinalg import RationalMatrix, det, format_fraction
from .response import ResponseMatrix, peel_boundary_edge, peel_boundary_spike

# ---------------------------------------------------------------------------
# single-conductance derivations


def _minor(m: RationalMatrix, rows: Sequence[int], cols: Sequence[int]) -> Fraction:
    return det(m.submatrix(list(rows), list(cols)))


def _as_matrix(lam) -> RationalMatrix:
    return lam.matrix if isinstance(lam, ResponseMatrix) else lam


def derive_edge_conductance(lam, p: int, q: int, P: Sequence[int], Q: Sequence[int]) -> Fraction:
    """Conductance of the boundary edge between indices p and q.

    Deleting the edge changes the (P;Q) minor affinely in its conductance;
    the broken connection forces that minor to zero.
    """
    m = _as_matrix(lam)
    g0 = _minor(m, P, Q)
    g1 = _minor(_as_matrix(peel_boundary_edge(m, p, q, 1)), P, Q)
    if g0 == g1:
        raise DegenerateSystem("the minor does not depend on this edge")
    c = g0 / (g0 - g1)
    if c <= 0:
        raise _no_positive_root(c)
    return c


def derive_spike_conductance(lam, p: int, P: Sequence[int], Q: Sequence[int]) -> Fraction:
    """Conductance of the boundary spike at index p.

    With t = 1/(lam_pp + xi) the contracted (P;Q) minor is affine in t when p
    lies outside P and Q; the broken connection fixes t and hence xi.
    """
    m = _as_matrix(lam)
    if p in P or p in Q:
        raise DegenerateSystem("the spike's boundary vertex lies in the connection, so no positive root exists")
    d0 = _minor(m, P, Q)
    n = m.rows
    rows = m.tolist()
    shifted = [[rows[i][j] - rows[i][p] * rows[p][j] for j in range(n)] for i in range(n)]
    f1 = _minor(RationalMatrix(shifted, n), P, Q)
    if d0 == 0 or d0 == f1:
        raise DegenerateSystem("the minor does not depend on this spike")
    xi = (d0 - f1) / d0 - m[p, p]
    if xi <= 0:
        raise _no_positive_root(xi)
    return xi


def _no_positive_root(x: Fraction) -> DegenerateSystem:
    err = DegenerateSystem(f"no positive root (got {format_fraction(x)})")
    err.root = x
    return err


# ---------------------------------------------------------------------------
# peeling


@dataclass(frozen=True)
class PeelStep:
    kind: str  # "spike", "edge" or "terminal"
    edge: int  # edge id in the input skeleton
    ends: tuple[int, ...]  # response-matrix indices involved
    P: tuple[int, ...]  # broken connection, as response-matrix indices
    Q: tuple[int, ...]
    conductance: Fraction

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "edge": self.edge,
            "ends": list(self.ends),
            "P": list(self.P),
            "Q": list(self.Q),
            "conductance": format_fraction(self.conductance),
        }


@dataclass
class RecoveryResult:
    conductances: dict[int, Fraction]
    log: list[PeelStep] = field(default_factory=list)

    def as_list(self, n_edges: int) -> list[Fraction]:
        return [self.conductances[e] for e in range(n_edges)]

    def to_json(self) -> dict:
        return {
            "conductances": {str(e): format_fraction(c) for e, c in sorted(self.conductances.items())},
            "log": [s.to_json() for s in self.log],
        }


def _terminal(cur: EmbeddedNetwork, lam: RationalMatrix, back: dict[int, int], out: dict, log: list):
    pos = {v: i for i, v in enumerate(cur.boundary_vertices())}
    seen: dict[frozenset, int] = {}
    for e in cur.edges:
        if e.is_loop:
            raise PeelStuck(f"self-loop {back[e.id]} has no effect on the response")
        key = frozenset((e.u, e.v))
        if key in seen:
            raise PeelStuck(f"edges {back[seen[key]]} and {back[e.id]} are parallel and cannot be separated")
        seen[key] = e.id
    n = lam.rows
    rebuilt = [[Fraction(0)] * n for _ in range(n)]
    for e in cur.edges:
        i, j = pos[e.u], pos[e.v]
        c = lam[i, j]
        if c <= 0:
            raise InconsistentResponse(f"edge {back[e.id]} would get conductance {format_fraction(c)}")
        out[back[e.id]] = c
        log.append(PeelStep("terminal", back[e.id], (i, j), (), (), c))
        rebuilt[i][j] += c
        rebuilt[j][i] += c
        rebuilt[i][i] -= c
        rebuilt[j][j] -= c
    if RationalMatrix(rebuilt, n) != lam:
        raise InconsistentResponse("the remaining response is not the Kirchhoff matrix of the remaining edges")


def _spike_candidates(cur: EmbeddedNetwork):
    for i, p in enumerate(cur.boundary_order):
        if cur.degree(p) != 1:
            continue
        d = cur.rotation[p][0]
        r = cur.head(d)
        if r != p and not cur.is_boundary(r):
            yield i, d >> 1


def _edge_candidates(cur: EmbeddedNetwork):
    slot = {v: i for i, v in enumerate(cur.boundary_order)}
    cands = []
    for e in cur.edges:
        if e.is_loop or e.u not in slot or e.v not in slot:
            continue
        i, j = sorted((slot[e.u], slot[e.v]))
        cands.append((i, j, e.id))
    return sorted(cands)


def recover(skeleton: EmbeddedNetwork, lam, max_k: int | None = None) -> RecoveryResult:
    """Conductances of every skeleton edge that reproduce lam.

    The skeleton's own conductances are ignored.  Rows of lam follow
    ``skeleton.boundary_vertices()``.
    """
    m = _as_matrix(lam)
    nb = len(skeleton.boundary_vertices())
    if m.rows != nb or m.cols != nb:
        raise ShapeMismatch(f"response matrix is {m.rows}x{m.cols}, network has {nb} boundary vertices")
    if not m.is_symmetric():
        raise InconsistentResponse("response matrix is not symmetric")
    cur = skeleton
    back = {e: e for e in range(skeleton.n_edges)}
    out: dict[int, Fraction] = {}
    log: list[PeelStep] = []
    while cur.internal_vertices():
        step = _peel_once(cur, m, max_k)
        if step is None:
            raise PeelStuck(
                f"no boundary spike or boundary edge with a usable broken connection; {len(out)} edges recovered so far"
            )
        kind, e, ends, P, Q, c = step
        if c <= 0:
            raise InconsistentResponse(f"edge {back[e]} would get conductance {format_fraction(c)}")
        out[back[e]] = c
        log.append(PeelStep(kind, back[e], ends, P, Q, c))
        if kind == "spike":
            m = _as_matrix(peel_boundary_spike(m, ends[0], c))
            cur, _, emap = contract_edge_with_maps(cur, e)
        else:
            m = _as_matrix(peel_boundary_edge(m, ends[0], ends[1], c))
            cur, _, emap = delete_edge_with_maps(cur, e, allow_disconnect=True)
        back = {emap[old]: orig for old, orig in back.items() if old in emap}
    _terminal(cur, m, back, out, log)
    return RecoveryResult(out, log)


def _peel_once(cur: EmbeddedNetwork, m: RationalMatrix, max_k):
    pos = {v: i for i, v in enumerate(cur.boundary_vertices())}
    for i, e in _spike_candidates(cur):
        hit = find_breaking_connection(cur, e, "contract", True, max_k)
        if hit is None:
            continue
        P = tuple(pos[v] for v in hit[0])
        Q = tuple(pos[v] for v in hit[1])
        try:
            c = derive_spike_conductance(m, i, P, Q)
        except DegenerateSystem as err:
            _reraise_root(err)
            continue
        return "spike", e, (i,), P, Q, c
    for i, j, e in _edge_candidates(cur):
        hit = find_breaking_connection(cur, e, "delete", True, max_k)
        if hit is None:
            continue
        P = tuple(pos[v] for v in hit[0])
        Q = tuple(pos[v] for v in hit[1])
        try:
            c = derive_edge_conductance(m, i, j, P, Q)
        except DegenerateSystem as err:
            _reraise_root(err)
            continue
        return "edge", e, (i, j), P, Q, c
    return None


def _reraise_root(err: DegenerateSystem):
    root = getattr(err, "root", None)
    if root is not None:
        raise InconsistentResponse(
            f"the broken connection forces a non-positive conductance {format_fraction(root)} on a peeled edge"
        ) from err


# ---------------------------------------------------------------------------
# Algorithm 1


@dataclass
class Algorithm1Result:
    network: EmbeddedNetwork
    removed: list  # vertex labels in removal order
    placed: list  # vertex labels moved onto the circle, in order
    dropped: list = field(default_factory=list)  # labels of vertices cut off from the circle


def _placement(net: EmbeddedNetwork, x: int):
    """(circle slot, rotation start dart) if x touches a face next to the circle."""
    base = 2 * net.n_edges
    n = len(net.boundary_order)
    faces = augmented_faces(net)
    where = {}
    for fi, f in enumerate(faces):
        for d in f:
            where[d] = fi
    for j in range(n):
        f = faces[where[base + 2 * j + 1]]
        m = len(f)
        for k in range(m):
            d_out = f[(k + 1) % m]
            if d_out < base and net.tail(d_out) == x:
                return j, d_out
    return None


def _place(net: EmbeddedNetwork, x: int, j: int, d_out: int) -> EmbeddedNetwork:
    ed = NetworkEditor(net)
    ed.kinds[x] = Kind.BOUNDARY
    if ed.b == x:
        ed.b = None
    r = ed.rot[x]
    i = r.index(d_out)
    ed.rot[x] = r[i:] + r[:i]
    ed.order.insert(j + 1, x)
    return ed.finish()[0]


def _remove(net: EmbeddedNetwork, x: int) -> tuple[EmbeddedNetwork, dict[int, int]]:
    ed = NetworkEditor(net)
    for d in list(ed.rot[x]):
        if d >> 1 in ed.edges:
            ed.remove_edge(d >> 1)
    if ed.b == x:
        ed.b = None
    ed.remove_vertex(x)
    net2, vmap, _ = ed.finish()
    return net2, vmap


def _drop_floating(net: EmbeddedNetwork) -> tuple[EmbeddedNetwork, list]:
    reach = set(net.boundary_order)
    stack = list(reach)
    while stack:
        v = stack.pop()
        for w in net.neighbors(v):
            if w not in reach:
                reach.add(w)
                stack.append(w)
    gone = [v for v in range(net.n_vertices) if v not in reach]
    if not gone:
        return net, []
    ed = NetworkEditor(net)
    labels = []
    for v in gone:
        for d in list(ed.rot[v]):
            if d >> 1 in ed.edges:
                ed.remove_edge(d >> 1)
    for v in gone:
        labels.append(net.vertex_labels[v])
        ed.remove_vertex(v)
    return ed.finish()[0], labels


def algorithm1(net: EmbeddedNetwork, rng: random.Random | None = None) -> Algorithm1Result:
    """Reduce an rnpd to a cprn by promoting neighbors and removing what cannot reach the circle.

    Pending vertices that touch a face next to the circle are placed on it;
    the others are removed and their neighbors become pending.  Without rng
    the smallest label goes first and placement beats removal; with rng the
    next pending vertex is chosen at random.
    """
    b = net.interior_boundary
    if b is None:
        raise NotACprn("algorithm 1 needs an interior boundary vertex")
    removed, placed = [], []
    if len(set(net.vertex_labels)) != net.n_vertices:
        ed = NetworkEditor(net)
        ed.vlabels = {v: v for v in ed.kinds}
        net = ed.finish()[0]
    cur = net
    hit = _placement(cur, b)
    if hit is not None:
        # b already reaches the circle: redraw it there and stop
        cur = _place(cur, b, *hit)
        placed.append(net.vertex_labels[b])
        return Algorithm1Result(validate(cur), removed, placed)
    label_of = lambda v: cur.vertex_labels[v]  # noqa: E731
    pending = {label_of(b)}
    # demote b so the working copy is a cprn-in-progress
    ed = NetworkEditor(cur)
    ed.kinds[b] = Kind.INTERNAL
    ed.b = None
    cur = ed.finish()[0]
    while pending:
        by_label = {label_of(v): v for v in range(cur.n_vertices)}
        pending &= set(by_label)
        if not pending:
            break
        options = sorted(pending, key=str)
        spots = {lab: _placement(cur, by_label[lab]) for lab in options}
        if rng is None:
            ready = [lab for lab in options if spots[lab] is not None]
            lab = ready[0] if ready else options[0]
        else:
            lab = rng.choice(options)
        pending.discard(lab)
        x = by_label[lab]
        if spots[lab] is not None:
            cur = _place(cur, x, *spots[lab])
            placed.append(lab)
            continue
        nbrs = [label_of(w) for w in cur.neighbors(x) if w != x and not cur.on_circle(w)]
        cur, _ = _remove(cur, x)
        removed.append(lab)
        pending |= set(nbrs)
    cur, dropped = _drop_floating(cur)
    return Algorithm1Result(validate(cur), removed, placed, dropped)


def algorithm1_code(result: Algorithm1Result) -> tuple:
    """Comparison key for Algorithm 1 outputs, ignoring ids and conductances."""
    return canonical_code(result.network, with_conductance=False)


@dataclass
class NecessaryConditionReport:
    ok: bool
    reduced: Algorithm1Result
    criticality: CriticalityReport

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "removed": [str(x) for x in self.reduced.removed],
            "placed": [str(x) for x in self.reduced.placed],
            "dropped": [str(x) for x in self.reduced.dropped],
            "failing": [[e, mode] for e, mode in self.criticality.failing],
        }


def necessary_condition(net: EmbeddedNetwork, max_k: int | None = None) -> NecessaryConditionReport:
    """Run Algorithm 1 and test the resulting cprn for criticality; failure rules out recoverability."""
    red = algorithm1(net)
    crit = is_critical_cprn(red.network, max_k)
    return NecessaryConditionReport(crit.critical, red, crit)
