"""Planar-embedded resistor networks in a (possibly punctured) disk.

A network stores, per vertex, the clockwise cyclic order of its incident
edge-ends ("darts").  Dart ``2*e`` sits at ``edges[e].u`` and dart ``2*e + 1``
at ``edges[e].v``; ``d ^ 1`` is the opposite end of the same edge.

Vertices on the disk's circle keep their dart list *linear*: the list starts
just clockwise of the stretch of circle at that vertex, so the wedge between
the last and first dart is the one that touches the circle.  The interior
boundary vertex, when present, is an ordinary interior vertex as far as the
embedding is concerned.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import (
    AttachNotOnFace,
    ConnectivityBroken,
    EmbeddingInconsistent,
    EmptyRestriction,
    FaceNotFound,
    NotACprn,
    SelfLoopContraction,
)
from .ratlinalg import to_fraction


class Kind(str, Enum):
    BOUNDARY = "Boundary"
    INTERIOR_BOUNDARY = "InteriorBoundary"
    INTERNAL = "Internal"


class EdgeClass(str, Enum):
    BOUNDARY_EDGE = "BoundaryEdge"
    BOUNDARY_SPIKE = "BoundarySpike"
    PSEUDO_BOUNDARY_EDGE = "PseudoBoundaryEdge"
    BOUNDARY_PSEUDO_SPIKE = "BoundaryPseudoSpike"
    PLAIN = "Plain"


@dataclass(frozen=True)
class Edge:
    id: int
    u: int
    v: int
    conductance: Fraction

    @property
    def is_loop(self) -> bool:
        return self.u == self.v

    def other(self, x: int) -> int:
        return self.v if x == self.u else self.u


def twin(d: int) -> int:
    return d ^ 1


def edge_of(d: int) -> int:
    return d >> 1


@dataclass(frozen=True)
class Face:
    """A face as the cyclic list of darts having it on their left."""

    darts: tuple[int, ...]
    is_outer: bool

    def corners(self, net: "EmbeddedNetwork") -> list[tuple[int, int]]:
        return [(net.tail(d), edge_of(d)) for d in self.darts]

    def vertices(self, net: "EmbeddedNetwork") -> list[int]:
        return [net.tail(d) for d in self.darts]

    def __len__(self):
        return len(self.darts)


class EmbeddedNetwork:
    """Immutable embedded network. Build edited copies with NetworkEditor."""

    __slots__ = (
        "kinds",
        "edges",
        "rotation",
        "boundary_order",
        "interior_boundary",
        "vertex_labels",
        "edge_labels",
        "_pos",
        "_tail",
        "_cache",
    )

    def __init__(
        self,
        kinds: Sequence,
        edges: Sequence,
        rotation: Sequence[Sequence[int]],
        boundary_order: Sequence[int],
        interior_boundary: int | None = None,
        vertex_labels: Sequence[Hashable] | None = None,
        edge_labels: Sequence[Hashable] | None = None,
    ):
        self.kinds = tuple(Kind(k) for k in kinds)
        es = []
        for i, e in enumerate(edges):
            if isinstance(e, Edge):
                u, v, c = e.u, e.v, e.conductance
            else:
                u, v, c = e
            es.append(Edge(i, int(u), int(v), to_fraction(c)))
        self.edges = tuple(es)
        self.rotation = tuple(tuple(int(d) for d in r) for r in rotation)
        self.boundary_order = tuple(int(v) for v in boundary_order)
        self.interior_boundary = None if interior_boundary is None else int(interior_boundary)
        nv = len(self.kinds)
        self.vertex_labels = tuple(vertex_labels) if vertex_labels is not None else tuple(range(nv))
        self.edge_labels = tuple(edge_labels) if edge_labels is not None else tuple(range(len(es)))
        self._cache = {}
        self._check_structure()

    # structural checks that every value must pass (restrictions included)
    def _check_structure(self):
        nv = len(self.kinds)
        if len(self.rotation) != nv:
            raise EmbeddingInconsistent("rotation must list every vertex")
        if len(self.vertex_labels) != nv or len(self.edge_labels) != len(self.edges):
            raise EmbeddingInconsistent("label arrays have the wrong length")
        tail = {}
        for e in self.edges:
            if not (0 <= e.u < nv and 0 <= e.v < nv):
                raise EmbeddingInconsistent(f"edge {e.id} has an unknown endpoint")
            if e.conductance <= 0:
                raise EmbeddingInconsistent(f"edge {e.id} has non-positive conductance")
            tail[2 * e.id] = e.u
            tail[2 * e.id + 1] = e.v
        pos = {}
        for v, r in enumerate(self.rotation):
            for i, d in enumerate(r):
                if d not in tail:
                    raise EmbeddingInconsistent(f"vertex {v} lists unknown edge end {d}")
                if tail[d] != v:
                    raise EmbeddingInconsistent(f"edge end {d} listed at vertex {v} but belongs to {tail[d]}")
                if d in pos:
                    raise EmbeddingInconsistent(f"edge end {d} listed twice")
                pos[d] = (v, i)
        if len(pos) != len(tail):
            raise EmbeddingInconsistent("some edge ends are missing from the rotation")
        on_circle = [v for v in range(nv) if self.kinds[v] is Kind.BOUNDARY]
        if sorted(on_circle) != sorted(self.boundary_order) or len(set(self.boundary_order)) != len(self.boundary_order):
            raise EmbeddingInconsistent("boundary_order must list each on-circle boundary vertex once")
        ib = [v for v in range(nv) if self.kinds[v] is Kind.INTERIOR_BOUNDARY]
        if len(ib) > 1:
            raise EmbeddingInconsistent("at most one interior boundary vertex is allowed")
        if (ib[0] if ib else None) != self.interior_boundary:
            raise EmbeddingInconsistent("interior_boundary does not match vertex kinds")
        self._pos = pos
        self._tail = tail

    # basic queries
    @property
    def n_vertices(self) -> int:
        return len(self.kinds)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def is_rnpd(self) -> bool:
        return self.interior_boundary is not None

    def tail(self, d: int) -> int:
        return self._tail[d]

    def head(self, d: int) -> int:
        return self._tail[d ^ 1]

    def position(self, d: int) -> tuple[int, int]:
        return self._pos[d]

    def succ(self, d: int) -> int:
        """Next dart clockwise around the dart's vertex."""
        v, i = self._pos[d]
        r = self.rotation[v]
        return r[(i + 1) % len(r)]

    def pred(self, d: int) -> int:
        v, i = self._pos[d]
        r = self.rotation[v]
        return r[(i - 1) % len(r)]

    def face_next(self, d: int) -> int:
        """Next dart along the face on the left of d."""
        return self.succ(d ^ 1)

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def neighbors(self, v: int) -> list[int]:
        return [self.head(d) for d in self.rotation[v]]

    def is_boundary(self, v: int) -> bool:
        return self.kinds[v] is not Kind.INTERNAL

    def on_circle(self, v: int) -> bool:
        return self.kinds[v] is Kind.BOUNDARY

    def boundary_vertices(self) -> list[int]:
        """On-circle vertices in circle order, then the interior boundary vertex."""
        out = list(self.boundary_order)
        if self.interior_boundary is not None:
            out.append(self.interior_boundary)
        return out

    def internal_vertices(self) -> list[int]:
        return [v for v in range(self.n_vertices) if self.kinds[v] is Kind.INTERNAL]

    def edges_between(self, u: int, v: int) -> list[int]:
        return [e.id for e in self.edges if {e.u, e.v} == {u, v} and (u != v or e.is_loop)]

    def is_connected(self) -> bool:
        if self.n_vertices == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in self.neighbors(x):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.n_vertices

    def with_conductances(self, values) -> "EmbeddedNetwork":
        """Copy with new conductances (a sequence, or a mapping by edge id)."""
        if isinstance(values, Mapping):
            cs = [values.get(e.id, e.conductance) for e in self.edges]
        else:
            cs = list(values)
        return EmbeddedNetwork(
            self.kinds,
            [(e.u, e.v, c) for e, c in zip(self.edges, cs)],
            self.rotation,
            self.boundary_order,
            self.interior_boundary,
            self.vertex_labels,
            self.edge_labels,
        )

    def conductances(self) -> list[Fraction]:
        return [e.conductance for e in self.edges]

    def __eq__(self, other):
        if not isinstance(other, EmbeddedNetwork):
            return NotImplemented
        return (
            self.kinds == other.kinds
            and [(e.u, e.v, e.conductance) for e in self.edges] == [(e.u, e.v, e.conductance) for e in other.edges]
            and self.rotation == other.rotation
            and self.boundary_order == other.boundary_order
            and self.interior_boundary == other.interior_boundary
        )

    def __hash__(self):
        return hash((self.kinds, self.rotation, self.boundary_order))

    def __repr__(self):
        kind = "rnpd" if self.is_rnpd else "cprn"
        return f"<EmbeddedNetwork {kind} V={self.n_vertices} E={self.n_edges} n={len(self.boundary_order)}>"


# ---------------------------------------------------------------------------
# faces


def _trace(rotation: Mapping[int, Sequence[int]]) -> list[list[int]]:
    """Trace faces of a rotation system given as vertex -> dart list."""
    pos = {}
    for v, r in rotation.items():
        for i, d in enumerate(r):
            pos[d] = (v, i)
    seen = set()
    faces = []
    for start in sorted(pos):
        if start in seen:
            continue
        face = []
        d = start
        while d not in seen:
            seen.add(d)
            face.append(d)
            t = d ^ 1
            if t not in pos:
                raise EmbeddingInconsistent(f"edge end {t} has no position")
            v, i = pos[t]
            r = rotation[v]
            d = r[(i + 1) % len(r)]
        if d != start:
            raise EmbeddingInconsistent("face trace does not close")
        faces.append(face)
    return faces


def trace_faces(net: EmbeddedNetwork) -> list[Face]:
    """All faces of the drawn graph, the one touching the circle flagged outer."""
    key = "faces"
    if key in net._cache:
        return net._cache[key]
    raw = _trace({v: r for v, r in enumerate(net.rotation)})
    outer_darts = set()
    for v in net.boundary_order:
        if net.rotation[v]:
            outer_darts.add(net.rotation[v][0])
    faces = [Face(tuple(f), bool(outer_darts.intersection(f))) for f in raw]
    if net.n_edges == 0 and net.n_vertices > 0:
        faces = [Face((), True)]
    net._cache[key] = faces
    return faces


def face_of_dart(net: EmbeddedNetwork) -> dict[int, int]:
    """Map each dart to the index (in trace_faces) of the face on its left."""
    key = "face_of"
    if key not in net._cache:
        m = {}
        for i, f in enumerate(trace_faces(net)):
            for d in f.darts:
                m[d] = i
        net._cache[key] = m
    return net._cache[key]


def outer_face_index(net: EmbeddedNetwork) -> int | None:
    for i, f in enumerate(trace_faces(net)):
        if f.is_outer:
            return i
    return None


def augmented_rotation(net: EmbeddedNetwork) -> tuple[dict[int, list[int]], dict[int, int]]:
    """Rotation of the graph plus the circle arcs between consecutive boundary vertices.

    Arc j runs from boundary_order[j] to boundary_order[j+1]; its darts are
    ``2E + 2j`` (leaving v_j) and ``2E + 2j + 1`` (arriving at v_{j+1}).
    Returns (rotation by vertex, tail of every dart).
    """
    base = 2 * net.n_edges
    order = net.boundary_order
    n = len(order)
    rot = {v: list(r) for v, r in enumerate(net.rotation)}
    tail = dict(net._tail)
    for j, v in enumerate(order):
        nxt = base + 2 * j
        prv = base + 2 * ((j - 1) % n) + 1
        rot[v] = [nxt] + rot[v] + [prv]
        tail[nxt] = v
        tail[base + 2 * j + 1] = order[(j + 1) % n]
    return rot, tail


def augmented_faces(net: EmbeddedNetwork) -> list[list[int]]:
    key = "aug_faces"
    if key not in net._cache:
        rot, _ = augmented_rotation(net)
        net._cache[key] = _trace(rot)
    return net._cache[key]


def validate(net: EmbeddedNetwork) -> EmbeddedNetwork:
    """Check connectivity and that the embedding sits in the disk as declared."""
    if not net.is_connected():
        raise ConnectivityBroken("network is not connected")
    n = len(net.boundary_order)
    if n == 0:
        f = len(trace_faces(net))
        chi = net.n_vertices - net.n_edges + f
    else:
        f = len(augmented_faces(net))
        chi = net.n_vertices - (net.n_edges + n) + f
    if chi != 2:
        raise EmbeddingInconsistent(f"Euler characteristic {chi} != 2: rotation is not a disk embedding")
    return net


def is_valid(net: EmbeddedNetwork) -> bool:
    try:
        validate(net)
    except (EmbeddingInconsistent, ConnectivityBroken):
        return False
    return True


# ---------------------------------------------------------------------------
# editing


class NetworkEditor:
    """Mutable scratch copy used to build edited networks."""

    def __init__(self, net: EmbeddedNetwork):
        self.kinds = dict(enumerate(net.kinds))
        self.edges = {e.id: [e.u, e.v, e.conductance] for e in net.edges}
        self.rot = {v: list(r) for v, r in enumerate(net.rotation)}
        self.order = list(net.boundary_order)
        self.b = net.interior_boundary
        self.vlabels = dict(enumerate(net.vertex_labels))
        self.elabels = dict(enumerate(net.edge_labels))
        self._next_v = net.n_vertices
        self._next_e = net.n_edges
        self._next_vlabel = _next_label(net.vertex_labels)
        self._next_elabel = _next_label(net.edge_labels)

    def tail(self, d: int) -> int:
        return self.edges[d >> 1][d & 1]

    def head(self, d: int) -> int:
        return self.edges[d >> 1][1 - (d & 1)]

    def add_vertex(self, kind: Kind, label=None) -> int:
        v = self._next_v
        self._next_v += 1
        self.kinds[v] = Kind(kind)
        self.rot[v] = []
        if label is None:
            label = self._next_vlabel
            self._next_vlabel += 1
        self.vlabels[v] = label
        if kind is Kind.INTERIOR_BOUNDARY:
            self.b = v
        return v

    def add_edge(self, u: int, v: int, c, label=None) -> int:
        """Create an edge; the caller places darts 2e (at u) and 2e+1 (at v)."""
        e = self._next_e
        self._next_e += 1
        self.edges[e] = [u, v, to_fraction(c)]
        if label is None:
            label = self._next_elabel
            self._next_elabel += 1
        self.elabels[e] = label
        return e

    def remove_edge(self, e: int):
        for d in (2 * e, 2 * e + 1):
            v = self.tail(d)
            self.rot[v].remove(d)
        del self.edges[e]
        del self.elabels[e]

    def remove_vertex(self, v: int):
        if self.rot[v]:
            raise EmbeddingInconsistent(f"vertex {v} still has edges")
        del self.rot[v]
        del self.kinds[v]
        del self.vlabels[v]
        if v in self.order:
            self.order.remove(v)
        if self.b == v:
            self.b = None

    def replace_dart(self, v: int, old: int, new: Sequence[int]):
        r = self.rot[v]
        i = r.index(old)
        self.rot[v] = r[:i] + list(new) + r[i + 1:]

    def finish(self) -> tuple[EmbeddedNetwork, dict[int, int], dict[int, int]]:
        """Compact ids; return (network, old->new vertex map, old->new edge map)."""
        vs = sorted(self.kinds)
        es = sorted(self.edges)
        vmap = {v: i for i, v in enumerate(vs)}
        emap = {e: i for i, e in enumerate(es)}

        def dmap(d):
            return 2 * emap[d >> 1] + (d & 1)

        net = EmbeddedNetwork(
            [self.kinds[v] for v in vs],
            [(vmap[self.edges[e][0]], vmap[self.edges[e][1]], self.edges[e][2]) for e in es],
            [[dmap(d) for d in self.rot[v]] for v in vs],
            [vmap[v] for v in self.order],
            None if self.b is None else vmap[self.b],
            [self.vlabels[v] for v in vs],
            [self.elabels[e] for e in es],
        )
        return net, vmap, emap


def _next_label(labels: Sequence) -> int:
    ints = [x for x in labels if isinstance(x, int)]
    return (max(ints) + 1) if ints else 0


def delete_edge_with_maps(net: EmbeddedNetwork, e: int, allow_disconnect: bool = False):
    ed = NetworkEditor(net)
    ed.remove_edge(e)
    out, vmap, emap = ed.finish()
    if not allow_disconnect and not out.is_connected():
        raise ConnectivityBroken(f"deleting edge {e} disconnects the network")
    return out, vmap, emap


def delete_edge(net: EmbeddedNetwork, e: int, allow_disconnect: bool = False) -> EmbeddedNetwork:
    return delete_edge_with_maps(net, e, allow_disconnect)[0]


def contract_edge_with_maps(net: EmbeddedNetwork, e: int):
    edge = net.edges[e]
    if edge.is_loop:
        raise SelfLoopContraction(f"edge {e} is a self-loop")
    u, v = edge.u, edge.v
    if net.is_boundary(u) and net.is_boundary(v):
        raise EmbeddingInconsistent("contraction would merge two boundary vertices")
    # the surviving vertex keeps its kind, position and circle slot
    keep, drop = (v, u) if net.is_boundary(v) else (u, v)
    dk = 2 * e if edge.u == keep else 2 * e + 1
    dd = dk ^ 1
    ed = NetworkEditor(net)
    rd = ed.rot[drop]
    i = rd.index(dd)
    seq = rd[i + 1:] + rd[:i]
    ed.replace_dart(keep, dk, seq)
    for d in seq:
        ed.edges[d >> 1][d & 1] = keep
    ed.rot[drop] = []
    del ed.edges[e]
    del ed.elabels[e]
    ed.remove_vertex(drop)
    return ed.finish()


def contract_edge(net: EmbeddedNetwork, e: int) -> EmbeddedNetwork:
    return contract_edge_with_maps(net, e)[0]


def remove_vertex(net: EmbeddedNetwork, v: int) -> tuple[EmbeddedNetwork, dict[int, int], dict[int, int]]:
    """Delete a vertex and all incident edges (connectivity not enforced)."""
    ed = NetworkEditor(net)
    for d in list(ed.rot[v]):
        e = d >> 1
        if e in ed.edges:
            ed.remove_edge(e)
    ed.remove_vertex(v)
    return ed.finish()


def _match_attach(corners: list[tuple[int, int]], attach: Sequence[int]) -> list[int]:
    """Indices of face corners realizing attach as a cyclic subsequence."""
    verts = [c[0] for c in corners]
    for a in attach:
        if a not in verts:
            raise AttachNotOnFace(f"vertex {a} is not on the face")
    m = len(corners)
    for s in range(m):
        if verts[s] != attach[0]:
            continue
        picked = []
        j = 0
        for t in range(m):
            idx = (s + t) % m
            if j < len(attach) and verts[idx] == attach[j]:
                picked.append(idx)
                j += 1
        if j == len(attach):
            return picked
    raise AttachNotOnFace("attach vertices are not in face order")


def insert_star(
    net: EmbeddedNetwork,
    face,
    attach: Sequence[int],
    conductances: Sequence | None = None,
) -> EmbeddedNetwork:
    """Place a new interior boundary vertex inside an inner face, joined to attach.

    ``face`` is an index into trace_faces(net) or a Face; attach lists
    vertices in the face's traversal order (counterclockwise).
    """
    if net.interior_boundary is not None:
        raise NotACprn("network already has an interior boundary vertex")
    faces = trace_faces(net)
    if isinstance(face, Face):
        if face not in faces:
            raise FaceNotFound("face is not a face of this network")
        f = face
    else:
        if not (0 <= int(face) < len(faces)):
            raise FaceNotFound(f"no face with index {face}")
        f = faces[int(face)]
    if f.is_outer:
        raise FaceNotFound("the outer face cannot host a star")
    if not attach:
        raise AttachNotOnFace("attach set is empty")
    corners = [(net.tail(d), d) for d in f.darts]
    picked = _match_attach(corners, list(attach))
    if conductances is None:
        conductances = [1] * len(picked)
    ed = NetworkEditor(net)
    b = ed.add_vertex(Kind.INTERIOR_BOUNDARY)
    b_darts = []
    for idx, c in zip(picked, conductances):
        w, d = corners[idx]
        e = ed.add_edge(w, b, c)
        r = ed.rot[w]
        r.insert(r.index(d), 2 * e)
        b_darts.append(2 * e + 1)
    # the face runs counterclockwise, so b sees the attach points clockwise reversed
    ed.rot[b] = list(reversed(b_darts))
    return ed.finish()[0]


def _restricted(net: EmbeddedNetwork, keep_v: set, keep_e: set, make_boundary: set) -> EmbeddedNetwork:
    ed = NetworkEditor(net)
    for e in range(net.n_edges):
        if e not in keep_e:
            ed.remove_edge(e)
    for v in range(net.n_vertices):
        if v not in keep_v:
            ed.rot[v] = []
            ed.remove_vertex(v)
    for v in sorted(make_boundary):
        if ed.kinds[v] is Kind.INTERNAL:
            ed.kinds[v] = Kind.BOUNDARY
            ed.order.append(v)
    return ed.finish()[0]


def restrict_strong(net: EmbeddedNetwork, vertices: Iterable[int]) -> EmbeddedNetwork:
    """Keep edges inside the vertex set; members with a neighbor outside become boundary."""
    vs = set(vertices)
    if not vs:
        raise EmptyRestriction("vertex set is empty")
    keep_e = {e.id for e in net.edges if e.u in vs and e.v in vs}
    frontier = {x for x in vs if any(y not in vs for y in net.neighbors(x))}
    return _restricted(net, vs, keep_e, frontier)


def restrict_weak(net: EmbeddedNetwork, vertices: Iterable[int]) -> EmbeddedNetwork:
    """Keep edges touching the vertex set; the added outside ends become boundary.

    New boundary vertices are appended to the circle order by id, so only the
    combinatorics of the result is meaningful, not its circle positions.
    """
    vs = set(vertices)
    if not vs:
        raise EmptyRestriction("vertex set is empty")
    keep_e = {e.id for e in net.edges if e.u in vs or e.v in vs}
    closure = set(vs)
    for e in keep_e:
        closure.add(net.edges[e].u)
        closure.add(net.edges[e].v)
    return _restricted(net, closure, keep_e, closure - vs)


def classify_edges(net: EmbeddedNetwork, pseudo: bool = False) -> dict[int, EdgeClass]:
    """Boundary edges and spikes; with pseudo=True also the pseudo classes.

    Pseudo classes look at the two ends of the run of boundary edges along
    the circle.  An end's edge into an internal vertex that carries a spike is
    a pseudo-boundary edge; failing that, the other edge of a degree-2 end is
    a boundary pseudo-spike.
    """
    out = {}
    for e in net.edges:
        if e.is_loop:
            out[e.id] = EdgeClass.PLAIN
        elif net.is_boundary(e.u) and net.is_boundary(e.v):
            out[e.id] = EdgeClass.BOUNDARY_EDGE
        elif (net.is_boundary(e.u) and net.degree(e.u) == 1) or (net.is_boundary(e.v) and net.degree(e.v) == 1):
            out[e.id] = EdgeClass.BOUNDARY_SPIKE
        else:
            out[e.id] = EdgeClass.PLAIN
    if not pseudo:
        return out
    carries_spike = set()
    for e in net.edges:
        if out[e.id] is EdgeClass.BOUNDARY_SPIKE:
            carries_spike.add(e.v if net.degree(e.u) == 1 and net.is_boundary(e.u) else e.u)
    for x in net.boundary_order:
        bd = [d for d in net.rotation[x] if out[edge_of(d)] is EdgeClass.BOUNDARY_EDGE]
        if len(bd) != 1:
            continue
        others = [d for d in net.rotation[x] if out[edge_of(d)] is EdgeClass.PLAIN]
        hit = [d for d in others if net.head(d) in carries_spike and not net.is_boundary(net.head(d))]
        if hit:
            for d in hit:
                out[edge_of(d)] = EdgeClass.PSEUDO_BOUNDARY_EDGE
        elif net.degree(x) == 2 and len(others) == 1:
            out[edge_of(others[0])] = EdgeClass.BOUNDARY_PSEUDO_SPIKE
    return out


# ---------------------------------------------------------------------------
# construction from a drawing and canonical codes


def from_coordinates(
    coords: Sequence[tuple[float, float]],
    kinds: Sequence,
    edges: Sequence[tuple[int, int, object]],
    boundary_order: Sequence[int],
    outward: Mapping[int, float] | None = None,
    vertex_labels: Sequence | None = None,
) -> EmbeddedNetwork:
    """Build the rotation system of a straight-line drawing (y axis up).

    On-circle vertices start their dart list clockwise of the outward
    direction, which defaults to pointing away from the centroid of the
    on-circle vertices.
    """
    kinds = [Kind(k) for k in kinds]
    circle = [v for v in range(len(coords)) if kinds[v] is Kind.BOUNDARY]
    if circle:
        cx = sum(coords[v][0] for v in circle) / len(circle)
        cy = sum(coords[v][1] for v in circle) / len(circle)
    else:
        cx = cy = 0.0
    darts: dict[int, list[tuple[float, int]]] = {v: [] for v in range(len(coords))}
    for i, (u, v, _c) in enumerate(edges):
        if u == v:
            raise EmbeddingInconsistent("self-loops cannot be placed from coordinates")
        for d, a, b in ((2 * i, u, v), (2 * i + 1, v, u)):
            ang = math.atan2(coords[b][1] - coords[a][1], coords[b][0] - coords[a][0])
            darts[a].append((ang, d))
    rotation = []
    for v in range(len(coords)):
        if kinds[v] is Kind.BOUNDARY:
            if outward and v in outward:
                phi = outward[v]
            else:
                phi = math.atan2(coords[v][1] - cy, coords[v][0] - cx)
        else:
            phi = math.pi / 2
        # clockwise = decreasing angle, starting just past phi
        rotation.append([d for _, d in sorted(darts[v], key=lambda t: ((phi - t[0]) % (2 * math.pi), t[1]))])
    ib = [v for v in range(len(coords)) if kinds[v] is Kind.INTERIOR_BOUNDARY]
    return EmbeddedNetwork(
        kinds,
        edges,
        rotation,
        boundary_order,
        ib[0] if ib else None,
        vertex_labels,
    )


def canonical_code(net: EmbeddedNetwork, with_conductance: bool = True, root: int | None = None) -> tuple:
    """Relabeling-invariant code of the embedded network rooted at v_1.

    Two networks get equal codes exactly when an orientation-preserving
    isomorphism maps the root to the root and keeps circle order and kinds.
    """
    if net.n_vertices == 0:
        return ()
    if root is None:
        if net.boundary_order:
            root = net.boundary_order[0]
        elif net.interior_boundary is not None:
            root = net.interior_boundary
        else:
            root = 0
    start_dart = {root: net.rotation[root][0] if net.rotation[root] else None}
    order = [root]
    index = {root: 0}
    q = deque([root])
    rows = []
    while q:
        v = q.popleft()
        r = list(net.rotation[v])
        if not net.on_circle(v) and r:
            s = r.index(start_dart[v])
            r = r[s:] + r[:s]
        row = []
        for d in r:
            w = net.head(d)
            if w not in index:
                index[w] = len(order)
                order.append(w)
                start_dart[w] = d ^ 1
                q.append(w)
            # position of the twin within w's canonical list is implied by BFS
            entry = (index[w],)
            if with_conductance:
                entry += (net.edges[d >> 1].conductance,)
            row.append(entry)
        rows.append((net.kinds[v].value, tuple(row)))
    # twin positions: record which slot of the neighbor each dart lands in
    slots = []
    canon_lists = {}
    for v in order:
        r = list(net.rotation[v])
        if not net.on_circle(v) and r:
            s = r.index(start_dart[v])
            r = r[s:] + r[:s]
        canon_lists[v] = r
    slot_of = {d: i for v in order for i, d in enumerate(canon_lists[v])}
    for v in order:
        slots.append(tuple(slot_of[d ^ 1] for d in canon_lists[v]))
    circle = tuple(index.get(v, -1) for v in net.boundary_order)
    ib = index.get(net.interior_boundary, -1) if net.interior_boundary is not None else None
    return (len(order), net.n_vertices, tuple(rows), tuple(slots), circle, ib)
