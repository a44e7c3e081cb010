"""Drawn move patterns and the matcher that finds them inside a network.

A pattern is a small straight-line drawing.  Vertex colors follow the usual
figure conventions: ``white`` is the interior boundary vertex, ``black`` an
internal vertex whose every edge is drawn, ``grey`` a vertex that may carry
further edges outside the drawing.  A grey vertex's drawn edges must sit as a
contiguous run in the network's rotation (not wrapping the circle gap).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .netcore import EmbeddedNetwork, Kind, NetworkEditor, from_coordinates

TDart = tuple[str, int]  # (edge label, 0 at the first-listed end, 1 at the other)


@dataclass
class Template:
    name: str
    vertices: dict[str, tuple[float, float, str]]
    edges: dict[str, tuple[str, str]]
    rot: dict[str, list[TDart]] = field(default_factory=dict)
    white: str | None = None

    def __post_init__(self):
        self.rot = _rotations(self)
        whites = [v for v, (_, _, c) in self.vertices.items() if c == "white"]
        self.white = whites[0] if whites else None

    def tail(self, td: TDart) -> str:
        return self.edges[td[0]][td[1]]

    def head(self, td: TDart) -> str:
        return self.edges[td[0]][1 - td[1]]

    def color(self, v: str) -> str:
        return self.vertices[v][2]

    def mirrored(self) -> "Template":
        return Template(
            self.name + "~",
            {v: (-x, y, c) for v, (x, y, c) in self.vertices.items()},
            dict(self.edges),
        )


def _angle(t: Template, td: TDart) -> float:
    x0, y0, _ = t.vertices[t.tail(td)]
    x1, y1, _ = t.vertices[t.head(td)]
    return math.atan2(y1 - y0, x1 - x0)


def _rotations(t: Template) -> dict[str, list[TDart]]:
    rot: dict[str, list[TDart]] = {v: [] for v in t.vertices}
    for label, (u, v) in t.edges.items():
        rot[u].append((label, 0))
        rot[v].append((label, 1))
    for v in rot:
        rot[v].sort(key=lambda td: -_angle(t, td))  # clockwise
    # trace faces to find the outer one (negative signed area)
    pos = {td: (v, i) for v, r in rot.items() for i, td in enumerate(r)}

    def succ(td):
        v, i = pos[td]
        return rot[v][(i + 1) % len(rot[v])]

    seen = set()
    outer_corners = set()
    best = None
    for start in pos:
        if start in seen:
            continue
        face = []
        d = start
        while d not in seen:
            seen.add(d)
            face.append(d)
            d = succ((d[0], 1 - d[1]))
        area = 0.0
        for td in face:
            x0, y0, _ = t.vertices[t.tail(td)]
            x1, y1, _ = t.vertices[t.head(td)]
            area += x0 * y1 - x1 * y0
        if best is None or area < best[0]:
            best = (area, face)
    # each outer-face dart starts just clockwise of an outside corner at its tail
    outer_corners.update(best[1])
    for v, r in rot.items():
        if t.vertices[v][2] != "grey":
            continue
        starts = [i for i, td in enumerate(r) if td in outer_corners]
        if len(starts) != 1:
            raise ValueError(f"pattern {t.name}: grey vertex {v} must touch the outside exactly once")
        i = starts[0]
        rot[v] = r[i:] + r[:i]
    return rot


@dataclass(frozen=True)
class Match:
    vertices: dict  # template vertex -> network vertex
    edges: dict  # template edge label -> network edge
    darts: dict  # template dart -> network dart
    mirrored: bool


def _align(t: Template, net: EmbeddedNetwork, tv: str, x: int, td: TDart, nd: int):
    """Template dart list at tv aligned to the network list at x, or None."""
    r = t.rot[tv]
    nr = net.rotation[x]
    p = r.index(td)
    q = nr.index(nd)
    m, deg = len(r), len(nr)
    color = t.color(tv)
    if color in ("black", "white"):
        if deg != m:
            return None
        return [(r[i], nr[(q - p + i) % deg]) for i in range(m)]
    start = q - p
    if net.on_circle(x):
        if start < 0 or start + m > deg:
            return None
        return [(r[i], nr[start + i]) for i in range(m)]
    if m > deg:
        return None
    return [(r[i], nr[(start + i) % deg]) for i in range(m)]


def find_matches(t: Template, net: EmbeddedNetwork, mirrored: bool = False) -> list[Match]:
    b = net.interior_boundary
    if b is None or t.white is None:
        return []
    tb = t.white
    deg = net.degree(b)
    if deg != len(t.rot[tb]):
        return []
    out = []
    for k in range(deg):
        m = _extend(t, net, tb, b, k)
        if m is not None:
            out.append(Match(m[0], m[1], m[2], mirrored))
    return out


def _extend(t: Template, net: EmbeddedNetwork, tb: str, b: int, k: int):
    vmap = {tb: b}
    used_v = {b: tb}
    dmap: dict = {}
    used_d: dict = {}
    queue = []

    def assign(td, nd) -> bool:
        if td in dmap:
            return dmap[td] == nd
        if nd in used_d:
            return False
        dmap[td] = nd
        used_d[nd] = td
        queue.append(td)
        return True

    r = t.rot[tb]
    nr = net.rotation[b]
    for i, td in enumerate(r):
        if not assign(td, nr[(k + i) % len(nr)]):
            return None
    while queue:
        td = queue.pop()
        nd = dmap[td]
        twin_t = (td[0], 1 - td[1])
        if not assign(twin_t, nd ^ 1):
            return None
        hv = t.head(td)
        x = net.head(nd)
        if hv in vmap:
            if vmap[hv] != x:
                return None
            continue
        if x in used_v:
            return None
        color = t.color(hv)
        if color == "white":
            return None
        if color == "black" and net.kinds[x] is not Kind.INTERNAL:
            return None
        if color == "grey" and net.kinds[x] is Kind.INTERIOR_BOUNDARY:
            return None
        pairs = _align(t, net, hv, x, twin_t, nd ^ 1)
        if pairs is None:
            return None
        vmap[hv] = x
        used_v[x] = hv
        for a, bnd in pairs:
            if not assign(a, bnd):
                return None
    if len(vmap) != len(t.vertices):
        return None
    emap = {label: dmap[(label, 0)] >> 1 for label in t.edges}
    if len(set(emap.values())) != len(emap):
        return None
    for label, (u, v) in t.edges.items():
        if net.tail(dmap[(label, 0)]) != vmap[u] or net.tail(dmap[(label, 1)]) != vmap[v]:
            return None
    return vmap, emap, dmap


@dataclass
class PatternMove:
    """A pattern rewrite: lhs, rhs, the grey correspondence rhs -> lhs, and the conductance map."""

    name: str
    lhs: Template
    rhs: Template
    grey_map: dict[str, str]
    formula: Callable[[Mapping[str, Fraction]], dict[str, Fraction]]

    def __post_init__(self):
        self.lhs_m = self.lhs.mirrored()
        self.rhs_m = self.rhs.mirrored()

    def matches(self, net: EmbeddedNetwork) -> list[Match]:
        out = find_matches(self.lhs, net, False) + find_matches(self.lhs_m, net, True)
        seen = set()
        uniq = []
        for m in out:
            key = (tuple(sorted(m.vertices.items())), tuple(sorted(m.edges.items())))
            if key in seen:
                continue
            seen.add(key)
            uniq.append(m)
        return uniq

    def rewrite(self, net: EmbeddedNetwork, m: Match, values: Mapping[str, Fraction]) -> EmbeddedNetwork:
        lhs = self.lhs_m if m.mirrored else self.lhs
        rhs = self.rhs_m if m.mirrored else self.rhs
        ed = NetworkEditor(net)
        to_lhs = dict(self.grey_map)
        vnet: dict[str, int] = {}
        for rv, (_, _, color) in rhs.vertices.items():
            if color == "white":
                vnet[rv] = net.interior_boundary
            elif color == "grey":
                vnet[rv] = m.vertices[to_lhs[rv]]
            else:
                vnet[rv] = ed.add_vertex(Kind.INTERNAL)
        new_edge = {}
        for label, (u, v) in rhs.edges.items():
            new_edge[label] = ed.add_edge(vnet[u], vnet[v], values[label])

        def ndart(td):
            return 2 * new_edge[td[0]] + td[1]

        for rv, (_, _, color) in rhs.vertices.items():
            if color != "grey":
                continue
            lv = to_lhs[rv]
            x = m.vertices[lv]
            old = [m.darts[td] for td in lhs.rot[lv]]
            new = [ndart(td) for td in rhs.rot[rv]]
            r = ed.rot[x]
            i = r.index(old[0])
            if net.on_circle(x):
                if r[i:i + len(old)] != old:
                    raise ValueError("pattern block is no longer contiguous")
                ed.rot[x] = r[:i] + new + r[i + len(old):]
            else:
                r = r[i:] + r[:i]
                if r[: len(old)] != old:
                    raise ValueError("pattern block is no longer contiguous")
                ed.rot[x] = new + r[len(old):]
        for rv, (_, _, color) in rhs.vertices.items():
            if color in ("white", "black"):
                ed.rot[vnet[rv]] = [ndart(td) for td in rhs.rot[rv]]
        for lv, (_, _, color) in lhs.vertices.items():
            if color == "black":
                x = m.vertices[lv]
                ed.rot[x] = []
                ed.remove_vertex(x)
        for e in m.edges.values():
            del ed.edges[e]
            del ed.elabels[e]
        return ed.finish()[0]


def template_host(t: Template) -> tuple[EmbeddedNetwork, list[str]]:
    """The pattern as a network plus its edge labels in edge-id order.

    Grey vertices go on the circle, black ones are internal and the white one
    is the interior boundary vertex.
    """
    names = list(t.vertices)
    idx = {v: i for i, v in enumerate(names)}
    kinds = []
    for v in names:
        c = t.color(v)
        kinds.append(Kind.BOUNDARY if c == "grey" else Kind.INTERNAL if c == "black" else Kind.INTERIOR_BOUNDARY)
    coords = [(t.vertices[v][0], t.vertices[v][1]) for v in names]
    labels = list(t.edges)
    edges = [(idx[t.edges[lab][0]], idx[t.edges[lab][1]], 1) for lab in labels]
    # circle order: greys in the order the outside walk meets them
    greys = [v for v in names if t.color(v) == "grey"]
    outward = {}
    for g in greys:
        r = t.rot[g]
        a0, a1 = _angle(t, r[0]), _angle(t, r[-1])
        # the outside wedge runs clockwise from the last drawn edge to the first
        gap = (a1 - a0) % (2 * math.pi) if len(r) > 1 else 2 * math.pi
        outward[idx[g]] = a1 - gap / 2
    order = _circle_order(t, greys)
    net = from_coordinates(coords, kinds, edges, [idx[g] for g in order], outward, names)
    return net.with_conductances([1] * len(edges)), labels


def _circle_order(t: Template, greys: list[str]) -> list[str]:
    cx = sum(t.vertices[g][0] for g in greys) / len(greys)
    cy = sum(t.vertices[g][1] for g in greys) / len(greys)
    return sorted(greys, key=lambda g: -math.atan2(t.vertices[g][1] - cy, t.vertices[g][0] - cx))
