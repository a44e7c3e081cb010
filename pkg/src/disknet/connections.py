"""Connections through vertex-disjoint paths, criticality and broken-connection search.

A connection (P, Q) exists when |P| vertex-disjoint paths join P to Q and no
path passes through a boundary vertex other than its own two ends.  Path
existence is a unit vertex-capacity max flow.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .errors import NotACprn, OrderingViolation
from .netcore import EmbeddedNetwork


@dataclass(frozen=True)
class Connection:
    P: tuple[int, ...]
    Q: tuple[int, ...]
    paths: tuple[tuple[int, ...], ...]  # vertex sequences, each from a P vertex to a Q vertex

    @property
    def permutation(self) -> tuple[int, ...]:
        """pi[i] = index in Q reached from P[i]."""
        ends = {p[0]: p[-1] for p in self.paths}
        return tuple(self.Q.index(ends[p]) for p in self.P)


@dataclass
class _Graph:
    """Plain multigraph view used by the flow: adjacency by vertex, edge ids kept."""

    adj: dict[int, list[tuple[int, int]]]  # v -> [(edge id, other end)]
    boundary: set[int]

    @classmethod
    def of(cls, net: EmbeddedNetwork) -> "_Graph":
        adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(net.n_vertices)}
        for e in net.edges:
            if e.is_loop:
                continue
            adj[e.u].append((e.id, e.v))
            adj[e.v].append((e.id, e.u))
        return cls(adj, set(net.boundary_vertices()))

    def without_edge(self, e: int) -> "_Graph":
        return _Graph({v: [(f, w) for f, w in nb if f != e] for v, nb in self.adj.items()}, set(self.boundary))

    def contracted(self, e: int) -> tuple["_Graph", dict[int, int]]:
        """Merge the ends of e; the merged vertex is boundary if either end was."""
        ends = [(v, w) for v, nb in self.adj.items() for f, w in nb if f == e]
        if not ends:
            raise KeyError(e)
        u, v = ends[0]
        keep, drop = (v, u) if v in self.boundary and u not in self.boundary else (u, v)
        merged = {x: x for x in self.adj}
        merged[drop] = keep
        adj: dict[int, list[tuple[int, int]]] = {x: [] for x in self.adj if x != drop}
        for x, nb in self.adj.items():
            for f, w in nb:
                if f == e:
                    continue
                a, b = merged[x], merged[w]
                if a != b:
                    adj[a].append((f, b))
        bnd = {merged[x] for x in self.boundary}
        return _Graph(adj, bnd), merged


def _max_paths(g: _Graph, P: Sequence[int], Q: Sequence[int]) -> list[list[int]]:
    """Maximum family of vertex-disjoint P-Q paths avoiding other boundary vertices."""
    P, Q = list(P), list(Q)
    Ps, Qs = set(P), set(Q)
    allowed = {v for v in g.adj if v not in g.boundary} | Ps | Qs
    # nodes: ("i", v) and ("o", v); residual capacities in a dict of dicts
    cap: dict = {}

    orig: dict[tuple[int, int], int] = {}

    def arc(a, b, c):
        if a[0] == "o" and b[0] == "i":
            orig[(a[1], b[1])] = orig.get((a[1], b[1]), 0) + c
        cap.setdefault(a, {})
        cap.setdefault(b, {})
        cap[a][b] = cap[a].get(b, 0) + c
        cap[b].setdefault(a, 0)

    S, T = ("s",), ("t",)
    for v in allowed:
        arc(("i", v), ("o", v), 1)
    for v in allowed:
        if v in Qs:
            continue  # a Q vertex only ends paths
        for _, w in g.adj[v]:
            if w in allowed and w not in Ps:
                arc(("o", v), ("i", w), 1)
    for p in P:
        arc(S, ("i", p), 1)
    for q in Q:
        arc(("o", q), T, 1)
    if S not in cap or T not in cap:
        return []
    flow = 0
    while True:
        prev = {S: None}
        dq = deque([S])
        while dq and T not in prev:
            a = dq.popleft()
            for b, c in cap[a].items():
                if c > 0 and b not in prev:
                    prev[b] = a
                    dq.append(b)
        if T not in prev:
            break
        b = T
        while prev[b] is not None:
            a = prev[b]
            cap[a][b] -= 1
            cap[b][a] += 1
            b = a
        flow += 1
    # net flow along graph arcs, with opposite flows cancelled
    succ: dict[int, list[int]] = {}
    for (v, w), c in orig.items():
        f = c - cap[("o", v)][("i", w)]
        g_ = orig.get((w, v), 0) - cap.get(("o", w), {}).get(("i", v), 0)
        if f > 0 and f > g_:
            succ.setdefault(v, []).append(w)
    paths = []
    for p in P:
        if cap[S][("i", p)] != 0:
            continue
        path = [p]
        x = p
        while x not in Qs:
            x = succ[x].pop()
            path.append(x)
        paths.append(path)
    return paths


def _check_order(net: EmbeddedNetwork, P: Sequence[int], Q: Sequence[int]):
    b = net.interior_boundary
    Ps, Qs = set(P) - {b}, set(Q) - {b}
    for v in list(P) + list(Q):
        if not net.is_boundary(v):
            raise OrderingViolation(f"vertex {v} is not a boundary vertex")
    if len(P) != len(Q):
        raise OrderingViolation("P and Q must have the same size")
    if set(P) & set(Q) or len(set(P)) != len(P) or len(set(Q)) != len(Q):
        raise OrderingViolation("P and Q must be disjoint sets")
    seq = [v for v in net.boundary_order if v in Ps or v in Qs]
    if not seq:
        return
    marks = [v in Ps for v in seq]
    changes = sum(marks[i] != marks[i - 1] for i in range(len(marks)))
    if changes > 2:
        raise OrderingViolation("P and Q interleave around the circle")


def exists_connection(net: EmbeddedNetwork, P: Sequence[int], Q: Sequence[int]) -> Connection | None:
    """Witness paths for (P, Q), or None when they are not connected through the network."""
    _check_order(net, P, Q)
    return _connection(_Graph.of(net), P, Q)


def _connection(g: _Graph, P, Q) -> Connection | None:
    paths = _max_paths(g, P, Q)
    if len(paths) < len(P):
        return None
    return Connection(tuple(P), tuple(Q), tuple(tuple(p) for p in paths))


def max_connection_size(net: EmbeddedNetwork, P: Sequence[int], Q: Sequence[int]) -> int:
    """Largest number of disjoint P-Q paths avoiding other boundary vertices."""
    return len(_max_paths(_Graph.of(net), P, Q))


def candidate_pairs(net: EmbeddedNetwork, exclude_b: bool = True, max_k: int | None = None):
    """Every ordering-compatible (P, Q), smallest k first, each unordered pair once.

    P is listed clockwise and Q counterclockwise, so P[i] faces Q[i].
    """
    circle = list(net.boundary_order)
    n = len(circle)
    b = net.interior_boundary
    with_b = not exclude_b and b is not None
    top = (n + with_b) // 2
    if max_k is not None:
        top = min(top, max_k)
    for k in range(1, top + 1):
        seen = set()
        for chosen in combinations(range(n), 2 * k):
            for s in range(2 * k):
                rot = [circle[chosen[(s + i) % (2 * k)]] for i in range(2 * k)]
                P = tuple(rot[:k])
                Q = tuple(reversed(rot[k:]))
                key = frozenset((frozenset(P), frozenset(Q)))
                if key in seen:
                    continue
                seen.add(key)
                yield P, Q
        if with_b and 2 * k - 1 <= n:
            # b joins either side; the circle part has k-1 on b's side
            for chosen in combinations(range(n), 2 * k - 1):
                for s in range(2 * k - 1):
                    rot = [circle[chosen[(s + i) % (2 * k - 1)]] for i in range(2 * k - 1)]
                    yield tuple(rot[: k - 1]) + (b,), tuple(reversed(rot[k - 1:]))


def connections(net: EmbeddedNetwork, exclude_b: bool = True, max_k: int | None = None) -> list[Connection]:
    g = _Graph.of(net)
    out = []
    for P, Q in candidate_pairs(net, exclude_b, max_k):
        c = _connection(g, P, Q)
        if c is not None:
            out.append(c)
    return out


def _edge_ends(net: EmbeddedNetwork, e: int) -> tuple[int, int]:
    edge = net.edges[e]
    return edge.u, edge.v


def _broken_after(g: _Graph, net: EmbeddedNetwork, e: int, mode: str, conns: Iterable[Connection]):
    """First connection of conns that the edit of e destroys."""
    u, v = _edge_ends(net, e)
    if mode == "delete":
        g2 = g.without_edge(e)
        for c in conns:
            if any(_path_uses(p, u, v) for p in c.paths) and _connection(g2, c.P, c.Q) is None:
                return c
        return None
    if mode != "contract":
        raise ValueError(f"unknown mode {mode!r}")
    g2, merged = g.contracted(e)
    for c in conns:
        if not any(u in p or v in p for p in c.paths):
            continue
        P = [merged[x] for x in c.P]
        Q = [merged[x] for x in c.Q]
        if len(set(P) | set(Q)) < len(P) + len(Q):
            return c  # two terminals merged, so the pair no longer exists
        if _connection(g2, P, Q) is None:
            return c
    return None


def _path_uses(path: Sequence[int], u: int, v: int) -> bool:
    return any({path[i], path[i + 1]} == {u, v} for i in range(len(path) - 1))


def find_breaking_connection(
    net: EmbeddedNetwork,
    e: int,
    mode: str = "delete",
    exclude_b: bool = True,
    max_k: int | None = None,
) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Smallest (P, Q) connected before deleting/contracting e and not after."""
    net.edges[e]  # IndexError on a bad id
    if net.edges[e].is_loop:
        return None
    g = _Graph.of(net)
    for P, Q in candidate_pairs(net, exclude_b, max_k):
        c = _connection(g, P, Q)
        if c is None:
            continue
        hit = _broken_after(g, net, e, mode, [c])
        if hit is not None:
            return hit.P, hit.Q
    return None


@dataclass
class CriticalityReport:
    critical: bool
    delete_witness: dict[int, tuple] = field(default_factory=dict)  # edge -> (P, Q)
    contract_witness: dict[int, tuple] = field(default_factory=dict)
    failing: list[tuple[int, str]] = field(default_factory=list)  # (edge, mode) with no witness

    def __bool__(self):
        return self.critical


def is_critical_cprn(net: EmbeddedNetwork, max_k: int | None = None) -> CriticalityReport:
    """Every edge's deletion and contraction must each break some connection."""
    if net.interior_boundary is not None:
        raise NotACprn("network has an interior boundary vertex")
    g = _Graph.of(net)
    conns = connections(net, True, max_k)
    rep = CriticalityReport(True)
    for e in net.edges:
        if e.is_loop:
            rep.failing.append((e.id, "delete"))
            rep.failing.append((e.id, "contract"))
            continue
        for mode, store in (("delete", rep.delete_witness), ("contract", rep.contract_witness)):
            hit = _broken_after(g, net, e.id, mode, conns)
            if hit is None:
                rep.failing.append((e.id, mode))
            else:
                store[e.id] = (hit.P, hit.Q)
    rep.critical = not rep.failing
    return rep
