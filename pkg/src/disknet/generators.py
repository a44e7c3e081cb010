"""Constructors for the layered polygon family, spider networks and random networks."""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.spatial import Delaunay

from .errors import BadN
from .netcore import (
    EmbeddedNetwork,
    Kind,
    NetworkEditor,
    from_coordinates,
    insert_star,
    is_valid,
    trace_faces,
)

B, IB, IN = Kind.BOUNDARY, Kind.INTERIOR_BOUNDARY, Kind.INTERNAL


# ---------------------------------------------------------------------------
# worked examples


def example1() -> EmbeddedNetwork:
    """Two boundary vertices a, c and internal b, d, with a doubled c-d edge.

    Kirchhoff order is a, c, b, d.
    """
    # ids: a=0, c=1, b=2, d=3
    edges = [
        (2, 1, 2),  # e0 b-c
        (2, 0, 1),  # e1 b-a
        (3, 1, 1),  # e2 d-c, straight
        (3, 0, 3),  # e3 d-a
        (1, 0, 1),  # e4 c-a
        (1, 3, 1),  # e5 c-d, bent
    ]
    rotation = [
        [3, 9, 7],  # a: b, c, d
        [5, 10, 8, 1],  # c: d straight, d bent, a, b
        [0, 2],  # b
        [6, 11, 4],  # d: a, c bent, c straight
    ]
    net = EmbeddedNetwork([B, B, IN, IN], edges, rotation, [0, 1], None, ["a", "c", "b", "d"])
    return net


def figure1_rnpd() -> EmbeddedNetwork:
    """The punctured-disk network with boundary L, R, internal T, D and center b."""
    coords = [(-2, 0), (2, 0), (0, 2), (0, -2), (0, 0)]
    kinds = [B, B, IN, IN, IB]
    L, R, T, D, b = range(5)
    edges = [(T, R, 1), (T, L, 2), (D, R, 7), (D, L, 3), (R, b, 1), (L, b, 1), (b, D, 5), (b, T, 1)]
    return from_coordinates(coords, kinds, edges, [L, R], vertex_labels=["L", "R", "T", "D", "b"])


# ---------------------------------------------------------------------------
# layered polygons and spiders


def layers(n: int) -> int:
    return (n + 1) // 4


def _four_periodic_drawing(n: int):
    """Coordinates, kinds, edges, circle order and outward angles of the layered polygon."""
    if n < 3:
        raise BadN(f"n must be at least 3, got {n}")
    ell = layers(n)
    r = n % 4
    coords = []
    kinds = []
    labels = []
    vid = {}

    def angle(i):
        return math.pi / 2 - 2 * math.pi * i / n

    def add(key, radius, i, kind):
        vid[key] = len(coords)
        coords.append((radius * math.cos(angle(i)), radius * math.sin(angle(i))))
        kinds.append(kind)
        labels.append(f"L{key[1]}.{i}")

    for k in range(1, ell + 1):
        for i in range(n):
            add(("L", k, i), k, i, IN)
    edges = []
    for k in range(1, ell + 1):
        for i in range(n):
            edges.append((vid[("L", k, i)], vid[("L", k, (i + 1) % n)], 1))
        if k < ell:
            for i in range(n):
                edges.append((vid[("L", k, i)], vid[("L", k + 1, i)], 1))
    if r == 0:
        spiked = list(range(n // 2))
    elif r in (1, 2):
        spiked = list(range(n))
    else:
        spiked = []
    circle = []
    for i in range(n):
        outer = vid[("L", ell, i)]
        if i in spiked:
            s = len(coords)
            coords.append(((ell + 1) * math.cos(angle(i)), (ell + 1) * math.sin(angle(i))))
            kinds.append(B)
            labels.append(f"S.{i}")
            vid[("S", i)] = s
            edges.append((outer, s, 1))
            circle.append(s)
        else:
            kinds[outer] = B
            circle.append(outer)
    if r == 2:
        for i in range(n // 2 - 1, n - 1):
            edges.append((vid[("S", i)], vid[("S", i + 1)], 1))
    outward = {v: math.atan2(coords[v][1], coords[v][0]) for v in circle}
    return coords, kinds, edges, circle, outward, labels


def four_periodic(n: int) -> EmbeddedNetwork:
    """Layered polygon cprn with floor((n+1)/4) concentric n-gons and residue-dependent spikes."""
    coords, kinds, edges, circle, outward, labels = _four_periodic_drawing(n)
    return from_coordinates(coords, kinds, edges, circle, outward, labels)


def spider(n: int) -> EmbeddedNetwork:
    """The layered polygon with an interior boundary vertex joined to every vertex of the center face."""
    coords, kinds, edges, circle, outward, labels = _four_periodic_drawing(n)
    b = len(coords)
    coords = coords + [(0.0, 0.0)]
    kinds = kinds + [IB]
    labels = labels + ["b"]
    edges = edges + [(i, b, 1) for i in range(n)]
    return from_coordinates(coords, kinds, edges, circle, outward, labels)


def center_face(net: EmbeddedNetwork) -> int:
    """Index of the inner face whose corners are the innermost layer (ids 0..n-1)."""
    n = len(net.boundary_order)
    target = set(range(n))
    for i, f in enumerate(trace_faces(net)):
        if not f.is_outer and set(f.vertices(net)) == target and len(f) == n:
            return i
    raise ValueError("no center face")


def star_inserted(base: EmbeddedNetwork, face: int, attach_count: int | None = None) -> EmbeddedNetwork:
    """Insert a star into an inner face, joined to the first attach_count face corners (all by default)."""
    f = trace_faces(base)[face]
    verts = f.vertices(base)
    k = len(verts) if attach_count is None else attach_count
    return insert_star(base, face, verts[:k])


def star_inserted_family() -> list[tuple[str, EmbeddedNetwork]]:
    """Star insertions into the layered polygons other than the spiders, named base/face/attach."""
    out = []
    for n in range(4, 8):
        base = four_periodic(n)
        center = center_face(base)
        for i, f in enumerate(trace_faces(base)):
            if f.is_outer:
                continue
            for k in sorted({1, 2, len(f.vertices(base))}):
                if i == center and k == len(f.vertices(base)):
                    continue  # that one is the spider
                out.append((f"layered{n}/face{i}/attach{k}", star_inserted(base, i, k)))
    return out


# ---------------------------------------------------------------------------
# conductances


def random_conductances(net: EmbeddedNetwork, rng: random.Random, lo: int = 1, hi: int = 9) -> EmbeddedNetwork:
    return net.with_conductances([Fraction(rng.randint(lo, hi), rng.randint(lo, hi)) for _ in net.edges])


def ones(net: EmbeddedNetwork) -> EmbeddedNetwork:
    return net.with_conductances([1] * net.n_edges)


# ---------------------------------------------------------------------------
# random planar networks


def _add_parallel(ed: NetworkEditor, e: int, c) -> int:
    u, v, _ = ed.edges[e]
    f = ed.add_edge(u, v, c)
    ru = ed.rot[u]
    ru.insert(ru.index(2 * e) + 1, 2 * f)
    rv = ed.rot[v]
    rv.insert(rv.index(2 * e + 1), 2 * f + 1)
    return f


def _subdivide(ed: NetworkEditor, e: int, c) -> int:
    """Split edge e with a new internal vertex; e keeps its u end."""
    u, v, _ = ed.edges[e]
    w = ed.add_vertex(IN)
    f = ed.add_edge(w, v, c)
    ed.edges[e][1] = w
    # dart 2e+1 moves to w; f's v-end takes its old slot
    ed.replace_dart(v, 2 * e + 1, [2 * f + 1])
    ed.rot[w] = [2 * e + 1, 2 * f]
    return w


def _add_pendant(ed: NetworkEditor, v: int, c, rng: random.Random) -> int:
    w = ed.add_vertex(IN)
    f = ed.add_edge(v, w, c)
    r = ed.rot[v]
    pos = rng.randint(1, len(r) - 1) if ed.kinds[v] is B and len(r) > 1 else rng.randint(0, len(r))
    if ed.kinds[v] is B and not r:
        pos = 0
    r.insert(pos, 2 * f)
    ed.rot[w] = [2 * f + 1]
    return w


def _add_loop(ed: NetworkEditor, v: int, c, rng: random.Random) -> int:
    e = ed.add_edge(v, v, c)
    r = ed.rot[v]
    pos = rng.randint(0, len(r))
    r[pos:pos] = [2 * e, 2 * e + 1]
    return e


def random_network(
    seed: int,
    n_boundary: int = 4,
    n_interior: int = 4,
    keep: float = 0.7,
    extras: int = 0,
    interior_boundary: bool = False,
    lo: int = 1,
    hi: int = 9,
) -> EmbeddedNetwork:
    """Random planar network: triangulate, thin edges, then add parallel/series/pendant/loop extras.

    Boundary points sit on the unit circle, interior points strictly inside,
    so the triangulation's hull is the boundary polygon.
    """
    rng = random.Random(seed)
    pts = []
    base = rng.random() * 2 * math.pi
    for i in range(n_boundary):
        a = base - 2 * math.pi * (i + 0.2 + 0.6 * rng.random()) / n_boundary
        pts.append((math.cos(a), math.sin(a)))
    for _ in range(n_interior):
        rad = 0.8 * math.sqrt(rng.random())
        a = rng.random() * 2 * math.pi
        pts.append((rad * math.cos(a), rad * math.sin(a)))
    kinds = [B] * n_boundary + [IN] * n_interior
    if len(pts) >= 3:
        tri = Delaunay(np.array(pts))
        es = set()
        for s in tri.simplices:
            for i in range(3):
                a, b = int(s[i]), int(s[(i + 1) % 3])
                es.add((min(a, b), max(a, b)))
        es = sorted(es)
    else:
        es = [(0, 1)] if len(pts) == 2 else []
    # thin edges while staying connected
    order = list(es)
    rng.shuffle(order)
    kept = set(es)
    for e in order:
        if rng.random() < keep:
            continue
        trial = kept - {e}
        if _connected(len(pts), trial):
            kept = trial
    edges = [(a, b, Fraction(rng.randint(lo, hi), rng.randint(lo, hi))) for a, b in sorted(kept)]
    outward = {v: math.atan2(pts[v][1], pts[v][0]) for v in range(n_boundary)}
    net = from_coordinates(pts, kinds, edges, list(range(n_boundary)), outward)
    if extras or interior_boundary:
        ed = NetworkEditor(net)
        for _ in range(extras):
            choice = rng.choice(["parallel", "series", "pendant", "loop"])
            cond = Fraction(rng.randint(lo, hi), rng.randint(lo, hi))
            if choice == "parallel" and ed.edges:
                _add_parallel(ed, rng.choice(sorted(ed.edges)), cond)
            elif choice == "series" and ed.edges:
                _subdivide(ed, rng.choice(sorted(ed.edges)), cond)
            elif choice == "loop":
                _add_loop(ed, rng.choice(sorted(ed.kinds)), cond, rng)
            else:
                _add_pendant(ed, rng.choice(sorted(ed.kinds)), cond, rng)
        if interior_boundary:
            internal = [v for v, k in sorted(ed.kinds.items()) if k is IN]
            if internal:
                v = rng.choice(internal)
                ed.kinds[v] = IB
                ed.b = v
        net = ed.finish()[0]
    assert is_valid(net)
    return net


def _connected(nv: int, edges) -> bool:
    adj = {v: [] for v in range(nv)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == nv


def path_network(conductances: Sequence = (1, 1)) -> EmbeddedNetwork:
    """Boundary p, internal vertices, boundary q in a line: p - r1 - ... - q."""
    k = len(conductances)
    coords = [(float(i), 0.0) for i in range(k + 1)]
    kinds = [B] + [IN] * (k - 1) + [B]
    edges = [(i, i + 1, c) for i, c in enumerate(conductances)]
    return from_coordinates(coords, kinds, edges, [0, k], {0: math.pi, k: 0.0})


def single_edge(c=1) -> EmbeddedNetwork:
    return path_network([c])


def parallel_pair(c1=1, c2=1) -> EmbeddedNetwork:
    net = single_edge(c1)
    ed = NetworkEditor(net)
    _add_parallel(ed, 0, c2)
    return ed.finish()[0]


# ---------------------------------------------------------------------------
# decorations that keep a drawn pattern intact


def spike_out(net: EmbeddedNetwork, v: int, c=1) -> EmbeddedNetwork:
    """Make circle vertex v internal and hang a new circle vertex off it by a spike."""
    if not net.on_circle(v):
        raise ValueError(f"vertex {v} is not on the circle")
    ed = NetworkEditor(net)
    s = ed.add_vertex(B)
    e = ed.add_edge(v, s, c)
    ed.kinds[v] = IN
    ed.rot[v].append(2 * e)
    ed.rot[s] = [2 * e + 1]
    ed.order[ed.order.index(v)] = s
    return ed.finish()[0]


def add_boundary_edge(net: EmbeddedNetwork, j: int, c=1) -> EmbeddedNetwork:
    """Join circle vertex j to circle vertex j+1 along the circle."""
    order = net.boundary_order
    n = len(order)
    if n < 2:
        raise ValueError("need two circle vertices")
    u, v = order[j % n], order[(j + 1) % n]
    ed = NetworkEditor(net)
    e = ed.add_edge(u, v, c)
    ed.rot[u].insert(0, 2 * e)
    ed.rot[v].append(2 * e + 1)
    return ed.finish()[0]


def decorate(net: EmbeddedNetwork, rng: random.Random, count: int, lo: int = 1, hi: int = 9) -> EmbeddedNetwork:
    """Apply ``count`` random spike-outs and boundary-edge additions."""
    for _ in range(count):
        c = Fraction(rng.randint(lo, hi), rng.randint(lo, hi))
        if rng.random() < 0.5:
            net = spike_out(net, rng.choice(net.boundary_order), c)
        else:
            net = add_boundary_edge(net, rng.randrange(len(net.boundary_order)), c)
    return net


def add_antenna(net: EmbeddedNetwork, v: int, position: int, c=1) -> EmbeddedNetwork:
    """Hang a degree-one interior boundary vertex off v at the given rotation slot."""
    if net.interior_boundary is not None:
        raise ValueError("network already has an interior boundary vertex")
    r = net.rotation[v]
    if net.on_circle(v) and not 0 < position < len(r):
        raise ValueError("on a circle vertex the antenna must sit strictly between two edges")
    ed = NetworkEditor(net)
    b = ed.add_vertex(IB, "b")
    e = ed.add_edge(v, b, c)
    ed.rot[v].insert(position, 2 * e)
    ed.rot[b] = [2 * e + 1]
    return ed.finish()[0]
