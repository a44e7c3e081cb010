"""Medial graphs, strands, z-sequences, lens/loop/circle detection and irreducibility.

Every edge e carries a medial vertex with four ports ``(d, side)``, one per
corner touching e: ``d`` is one of e's darts and side 0/1 is the corner just
counterclockwise/clockwise of d at its tail.  A strand crossing the medial
vertex enters at ``(d, s)`` and leaves at ``(d ^ 1, s)``.

Medial edges are the corners of the network with circle arcs added.  The
corner from dart x to its clockwise successor y at vertex v joins
``(x, 1)`` to ``(y, 0)``; walking it in that direction has v on the right and
the face holding the corner on the left.  Corners next to a circle arc end at
a boundary stub instead of a port.  Stubs are numbered 1..2n clockwise with
stub 1 just counterclockwise of the first circle vertex.

Regions of the medial graph are the vertices of the network plus the faces
of the arc-augmented map.  The face outside the circle stands for the
exterior and is used to decide which regions a closed curve encloses.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable

from .errors import AmbiguousOrientation, EmbeddingInconsistent, NotATriangle
from .netcore import EmbeddedNetwork, _trace, augmented_rotation, canonical_code

Node = tuple  # ("p", dart, side) or ("t", stub_number)


@dataclass(frozen=True)
class MedialEdge:
    id: int
    a: Node
    b: Node
    vertex: int  # network vertex on the right when walking a -> b
    face: int  # augmented face on the left when walking a -> b


@dataclass
class Strand:
    """A maximal straight walk. ``steps`` lists (medial edge id, forward?)."""

    id: int
    steps: list[tuple[int, bool]]
    crossings: list[tuple[int, int]]  # (network edge, pass side) in order
    start: int | None  # stub number, None for closed strands
    end: int | None
    closed: bool = False
    reversed_orientation: bool = False

    @property
    def edges_crossed(self) -> list[int]:
        return [e for e, _ in self.crossings]

    def self_intersections(self) -> list[int]:
        seen = {}
        out = []
        for e, _ in self.crossings:
            if e in seen:
                out.append(e)
            seen[e] = True
        return out


@dataclass
class MedialGraph:
    net: EmbeddedNetwork
    edges: list[MedialEdge]
    at: dict  # node -> medial edge id
    faces: list[list[int]]
    face_of: dict  # augmented dart -> face index
    exterior: int
    n_stubs: int
    _strands: list | None = field(default=None, repr=False)

    def other(self, eid: int, node: Node) -> Node:
        me = self.edges[eid]
        return me.b if me.a == node else me.a

    @property
    def strands(self) -> list[Strand]:
        if self._strands is None:
            self._strands = _trace_strands(self)
        return self._strands

    def region_of_vertex(self, v: int) -> Hashable:
        return ("v", v)

    def regions_of(self, eid: int, forward: bool) -> tuple[Hashable, Hashable]:
        """(right region, left region) when walking the medial edge."""
        me = self.edges[eid]
        rv, lf = ("v", me.vertex), ("f", me.face)
        return (rv, lf) if forward else (lf, rv)


def medial_graph(net: EmbeddedNetwork) -> MedialGraph:
    rot, _tail = augmented_rotation(net)
    base = 2 * net.n_edges
    n = len(net.boundary_order)
    faces = _trace(rot)
    face_of = {}
    for i, f in enumerate(faces):
        for d in f:
            face_of[d] = i
    exterior = face_of[base] if n else -1
    pos = {d: (v, i) for v, r in rot.items() for i, d in enumerate(r)}

    def node(d: int, side: int, v: int) -> Node:
        if d < base:
            return ("p", d, side)
        # arc darts: the out-dart at v_j borders stub 2j, the in-dart stub 2j-1
        j = net.boundary_order.index(v) + 1
        return ("t", 2 * j) if (d - base) % 2 == 0 else ("t", 2 * j - 1)

    edges = []
    at = {}
    for v, r in rot.items():
        k = len(r)
        for i in range(k):
            x, y = r[i], r[(i + 1) % k]
            if x >= base and y >= base and (x - base) % 2 == 1 and (y - base) % 2 == 0:
                continue  # the exterior wedge at a circle vertex
            a = node(x, 1, v)
            b = node(y, 0, v)
            eid = len(edges)
            fy = face_of[y]
            edges.append(MedialEdge(eid, a, b, v, fy))
            for nd in (a, b):
                if nd in at:
                    raise EmbeddingInconsistent(f"medial node {nd} used twice")
                at[nd] = eid
    return MedialGraph(net, edges, at, faces, face_of, exterior, 2 * n)


def _trace_strands(mg: MedialGraph) -> list[Strand]:
    used = set()
    strands = []

    def walk(start: Node, eid: int):
        steps = []
        crossings = []
        node = start
        while True:
            me = mg.edges[eid]
            forward = me.a == node
            nxt = me.b if forward else me.a
            steps.append((eid, forward))
            used.add(eid)
            if nxt[0] == "t":
                return steps, crossings, nxt[1]
            _, d, s = nxt
            crossings.append((d >> 1, s))
            node = ("p", d ^ 1, s)
            eid = mg.at[node]

    for t in range(1, mg.n_stubs + 1):
        stub = ("t", t)
        eid = mg.at.get(stub)
        if eid is None or eid in used:
            continue
        steps, crossings, end = walk(stub, eid)
        strands.append(Strand(len(strands), steps, crossings, t, end))
    # closed strands
    for eid in range(len(mg.edges)):
        if eid in used:
            continue
        me = mg.edges[eid]
        start = me.a
        steps = []
        crossings = []
        node = start
        cur = eid
        while True:
            m = mg.edges[cur]
            forward = m.a == node
            nxt = m.b if forward else m.a
            steps.append((cur, forward))
            used.add(cur)
            _, d, s = nxt
            crossings.append((d >> 1, s))
            node = ("p", d ^ 1, s)
            cur = mg.at[node]
            if cur == eid and node == start:
                break
        strands.append(Strand(len(strands), steps, crossings, None, None, closed=True))
    return strands


def strands(mg_or_net) -> list[Strand]:
    mg = mg_or_net if isinstance(mg_or_net, MedialGraph) else medial_graph(mg_or_net)
    return mg.strands


# ---------------------------------------------------------------------------
# regions


def _adjacency(mg: MedialGraph, skip: set[int], with_exterior: bool) -> dict:
    adj: dict = {}

    def link(a, b):
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)

    for me in mg.edges:
        adj.setdefault(("v", me.vertex), set())
        adj.setdefault(("f", me.face), set())
        if me.id in skip:
            continue
        link(("v", me.vertex), ("f", me.face))
    for v in range(mg.net.n_vertices):
        adj.setdefault(("v", v), set())
    if with_exterior and mg.exterior >= 0:
        x = ("f", mg.exterior)
        base = 2 * mg.net.n_edges
        for j, v in enumerate(mg.net.boundary_order):
            link(x, ("v", v))
            link(x, ("f", mg.face_of[base + 2 * j + 1]))
    return adj


def _flood(adj: dict, seeds: Iterable) -> set:
    seen = set(seeds)
    q = deque(seen)
    while q:
        r = q.popleft()
        for s in adj.get(r, ()):
            if s not in seen:
                seen.add(s)
                q.append(s)
    return seen


def enclosed_regions(mg: MedialGraph, curve: set[int]) -> set:
    """Regions cut off from the exterior by the given medial edges."""
    adj = _adjacency(mg, curve, True)
    if mg.exterior < 0:
        raise EmbeddingInconsistent("region tests need at least one circle vertex")
    outside = _flood(adj, [("f", mg.exterior)])
    return set(adj) - outside


def _contains_b(mg: MedialGraph, curve: set[int]) -> bool:
    b = mg.net.interior_boundary
    if b is None:
        return False
    return ("v", b) in enclosed_regions(mg, curve)


@dataclass(frozen=True)
class Lens:
    strands: tuple[int, int]
    points: tuple[int, int]  # network edges at the two corners
    contains_interior_boundary: bool


@dataclass(frozen=True)
class Loop:
    strand: int
    point: int
    contains_interior_boundary: bool


@dataclass(frozen=True)
class Circle:
    strand: int
    contains_interior_boundary: bool


@dataclass
class RegionReport:
    lenses: list[Lens]
    loops: list[Loop]
    circles: list[Circle]


def _segment(strand: Strand, i: int, j: int) -> list[int]:
    """Medial edges between crossing i and crossing j (i < j) along the strand."""
    # step k comes just before crossing k
    return [strand.steps[k][0] for k in range(i + 1, j + 1)]


def _segment_wrap(strand: Strand, j: int, i: int) -> list[int]:
    """Closed strand: edges from crossing j around to crossing i."""
    m = len(strand.steps)
    return [strand.steps[k % m][0] for k in range(j + 1, i + 1 + m)]


def _pairs_positions(strand: Strand) -> dict:
    pos: dict = {}
    for k, (e, _s) in enumerate(strand.crossings):
        pos.setdefault(e, []).append(k)
    return pos


def detect_regions(mg_or_net) -> RegionReport:
    mg = mg_or_net if isinstance(mg_or_net, MedialGraph) else medial_graph(mg_or_net)
    ss = mg.strands
    circles = []
    loops = []
    lenses = []
    for s in ss:
        if s.closed:
            curve = {eid for eid, _ in s.steps}
            circles.append(Circle(s.id, _contains_b(mg, curve)))
        for e, ps in _pairs_positions(s).items():
            if len(ps) == 2:
                i, j = ps
                curve = set(_segment(s, i, j))
                loops.append(Loop(s.id, e, _contains_b(mg, curve)))
    pos = [_pairs_positions(s) for s in ss]
    for a in range(len(ss)):
        for b in range(a + 1, len(ss)):
            common = [e for e in pos[a] if e in pos[b]]
            if len(common) < 2:
                continue
            sa, sb = ss[a], ss[b]
            along = sorted((pos[a][e][0], e) for e in common)
            pairs = list(zip(along, along[1:]))
            if sa.closed:
                pairs.append((along[-1], along[0]))
            for (i, e1), (j, e2) in pairs:
                if i < j:
                    seg_a = _segment(sa, i, j)
                else:
                    seg_a = _segment_wrap(sa, i, j)
                k1, k2 = pos[b][e1][0], pos[b][e2][0]
                lo, hi = min(k1, k2), max(k1, k2)
                cands = [_segment(sb, lo, hi)]
                if sb.closed:
                    cands.append(_segment_wrap(sb, hi, lo))
                for seg_b in cands:
                    curve = set(seg_a) | set(seg_b)
                    lenses.append(Lens((a, b), (e1, e2), _contains_b(mg, curve)))
    return RegionReport(lenses, loops, circles)


def intersection_counts(mg_or_net) -> dict[tuple[int, int], int]:
    """Number of crossings between each pair of distinct strands."""
    mg = mg_or_net if isinstance(mg_or_net, MedialGraph) else medial_graph(mg_or_net)
    owner: dict = {}
    for s in mg.strands:
        for e, side in s.crossings:
            owner.setdefault(e, []).append(s.id)
    out: dict = {}
    for e, ids in owner.items():
        if len(ids) == 2 and ids[0] != ids[1]:
            key = tuple(sorted(ids))
            out[key] = out.get(key, 0) + 1
    return out


@dataclass(frozen=True)
class IrreducibilityReport:
    ok: bool
    violations: tuple[str, ...]
    details: tuple[str, ...]


def check_irreducible(net: EmbeddedNetwork) -> IrreducibilityReport:
    """Check the three medial conditions: circles (a), self-crossings (b), lenses (c)."""
    mg = medial_graph(net)
    rep = detect_regions(mg)
    bad = []
    details = []
    if rep.circles:
        bad.append("a")
        details.append(f"{len(rep.circles)} medial circle(s)")
    selfish = [s for s in mg.strands if s.self_intersections()]
    total_self = sum(len(s.self_intersections()) for s in mg.strands)
    if len(selfish) > 1 or total_self > 1 or any(not lp.contains_interior_boundary for lp in rep.loops):
        bad.append("b")
        details.append(f"{len(selfish)} self-intersecting strand(s), {total_self} self-intersection(s)")
    counts = intersection_counts(mg)
    if any(c > 2 for c in counts.values()) or any(not ln.contains_interior_boundary for ln in rep.lenses):
        bad.append("c")
        empty = sum(1 for ln in rep.lenses if not ln.contains_interior_boundary)
        details.append(f"max pair crossings {max(counts.values(), default=0)}, {empty} lens(es) without b")
    return IrreducibilityReport(not bad, tuple(bad), tuple(details))


# ---------------------------------------------------------------------------
# orientation and z-sequences


@dataclass(frozen=True)
class ZLabel:
    strand: int  # 1-based strand number
    sign: str | None  # "+", "-" or None for networks without an interior boundary vertex
    barred: bool

    def __str__(self):
        return f"{self.strand}{'~' if self.barred else ''}{self.sign or ''}"


@dataclass(frozen=True)
class ZSequence:
    labels: tuple[ZLabel, ...]

    def __str__(self):
        return " ".join(str(x) for x in self.labels)

    def __len__(self):
        return len(self.labels)

    def numbers(self) -> list[int]:
        return [x.strand for x in self.labels]

    def rotations(self) -> list["ZSequence"]:
        return [rotate_zsequence(self, k) for k in range(len(self.labels))]

    def equivalent(self, other: "ZSequence") -> bool:
        """Equal up to the choice of starting stub (with renumbering)."""
        return any(r == other for r in self.rotations())


def rotate_zsequence(z: ZSequence, k: int) -> ZSequence:
    labs = z.labels[k:] + z.labels[:k]
    renum: dict = {}
    out = []
    for x in labs:
        if x.strand not in renum:
            renum[x.strand] = len(renum) + 1
        out.append(ZLabel(renum[x.strand], x.sign, x.barred))
    return ZSequence(tuple(out))


def _right_of_b(mg: MedialGraph, strand: Strand) -> bool:
    """True when the interior boundary vertex lies right of the strand as traced."""
    b = mg.net.interior_boundary
    target = ("v", b)
    if strand.self_intersections():
        for e, ps in _pairs_positions(strand).items():
            if len(ps) != 2:
                continue
            i, j = ps
            seg = _segment(strand, i, j)
            curve = set(seg)
            inside = enclosed_regions(mg, curve)
            if target not in inside:
                continue
            eid, fwd = strand.steps[i + 1]
            right, left = mg.regions_of(eid, fwd)
            if (right in inside) == (left in inside):
                continue
            return right in inside
    curve = {eid for eid, _ in strand.steps}
    adj = _adjacency(mg, curve, False)
    rights, lefts = set(), set()
    for eid, fwd in strand.steps:
        r, l = mg.regions_of(eid, fwd)
        rights.add(r)
        lefts.add(l)
    rr = _flood(adj, rights - lefts)
    ll = _flood(adj, lefts - rights)
    in_r, in_l = target in rr, target in ll
    if in_r == in_l:
        raise AmbiguousOrientation(f"strand {strand.id} does not separate the interior boundary vertex")
    return in_r


def z_sequence(net_or_mg, start: int = 0) -> ZSequence:
    """Strand-endpoint labels read clockwise from stub 1 (or a rotated start)."""
    mg = net_or_mg if isinstance(net_or_mg, MedialGraph) else medial_graph(net_or_mg)
    net = mg.net
    by_stub: dict = {}
    for s in mg.strands:
        if s.closed:
            continue
        by_stub[s.start] = (s, "start")
        by_stub[s.end] = (s, "end")
    sign_of = {}
    if net.interior_boundary is not None:
        for s in mg.strands:
            if s.closed:
                continue
            # traced start is the minus end when b is on the right
            if _right_of_b(mg, s):
                sign_of[s.id] = {"start": "-", "end": "+"}
            else:
                sign_of[s.id] = {"start": "+", "end": "-"}
    number: dict = {}
    out = []
    total = mg.n_stubs
    for k in range(total):
        t = (start + k) % total + 1
        s, which = by_stub[t]
        if s.id not in number:
            number[s.id] = len(number) + 1
        sign = sign_of[s.id][which] if sign_of else None
        barred = bool(s.self_intersections()) and net.interior_boundary is not None
        out.append(ZLabel(number[s.id], sign, barred))
    return ZSequence(tuple(out))


def parse_zsequence(text: str) -> ZSequence:
    out = []
    for tok in text.split():
        sign = None
        if tok[-1] in "+-":
            sign = tok[-1]
            tok = tok[:-1]
        barred = tok.endswith("~")
        if barred:
            tok = tok[:-1]
        out.append(ZLabel(int(tok), sign, barred))
    return ZSequence(tuple(out))


def standard_zsequence(n: int) -> ZSequence:
    return ZSequence(tuple(ZLabel(i, None, False) for i in list(range(1, n + 1)) * 2))


# ---------------------------------------------------------------------------
# strand endpoint counts


def endpoint_count_off_center(mg: MedialGraph, strand: Strand, center_face: int) -> int:
    """Number of stubs strictly between the strand's ends on the side without the center face.

    ``center_face`` is an index into ``mg.faces``.
    """
    target = ("f", center_face)
    curve = {eid for eid, _ in strand.steps}
    adj = _adjacency(mg, curve, False)
    rights, lefts = set(), set()
    for eid, fwd in strand.steps:
        r, l = mg.regions_of(eid, fwd)
        rights.add(r)
        lefts.add(l)
    right_side = _flood(adj, rights - lefts)
    left_side = _flood(adj, lefts - rights)
    if target in right_side:
        far = left_side
    elif target in left_side:
        far = right_side
    else:
        raise AmbiguousOrientation("strand does not separate the center face")
    # walk the stubs clockwise from the start stub; the circle gaps between
    # stubs alternate between a vertex region and a boundary face region
    total = mg.n_stubs
    net = mg.net
    base = 2 * net.n_edges

    def gap_region(t: int):
        # region on the circle just clockwise of stub t
        j = (t + 1) // 2  # stub t sits next to v_j
        if t % 2 == 1:
            return ("v", net.boundary_order[j - 1])
        return ("f", mg.face_of[base + 2 * (j - 1) + 1])

    s1, s2 = strand.start, strand.end
    cw = (s2 - s1) % total - 1
    return cw if gap_region(s1) in far else total - 2 - cw


# ---------------------------------------------------------------------------
# motions


def apply_motion(net: EmbeddedNetwork, triangle) -> EmbeddedNetwork:
    """Flip a medial triangle: ("vertex", v) for a Y at v, ("face", i) for a triangular face."""
    from . import moves

    kind, where = triangle
    try:
        if kind == "vertex":
            return moves.apply_move(net, moves.MoveKind.Y_TO_DELTA, moves.MoveSite(vertices=(where,)))
        if kind == "face":
            return moves.apply_move(net, moves.MoveKind.DELTA_TO_Y, moves.MoveSite(face=where))
    except moves.SiteMismatch as exc:
        raise NotATriangle(str(exc)) from exc
    raise NotATriangle(f"unknown triangle designation {kind!r}")


def motion_sites(net: EmbeddedNetwork) -> list[tuple[str, int]]:
    from . import moves

    out = [("vertex", s.vertices[0]) for s in moves.find_sites(net, moves.MoveKind.Y_TO_DELTA)]
    out += [("face", s.face) for s in moves.find_sites(net, moves.MoveKind.DELTA_TO_Y)]
    return out


def find_motion_path(source: EmbeddedNetwork, target: EmbeddedNetwork, max_depth: int = 6, max_states: int = 20000):
    """Breadth-first search for motions turning source into target's skeleton.

    Returns the list of motions, or None when the bounded search is inconclusive.
    """
    goal = canonical_code(target, with_conductance=False)
    start = canonical_code(source, with_conductance=False)
    if start == goal:
        return []
    seen = {start}
    q = deque([(source, [])])
    while q and len(seen) < max_states:
        net, path = q.popleft()
        if len(path) >= max_depth:
            continue
        for site in motion_sites(net):
            try:
                nxt = apply_motion(net, site)
            except NotATriangle:
                continue
            code = canonical_code(nxt, with_conductance=False)
            if code in seen:
                continue
            if code == goal:
                return path + [site]
            seen.add(code)
            q.append((nxt, path + [site]))
    return None


# ---------------------------------------------------------------------------
# export

_PALETTE = ["red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "cyan", "gold", "gray40"]


def medial_dot(mg_or_net) -> str:
    mg = mg_or_net if isinstance(mg_or_net, MedialGraph) else medial_graph(mg_or_net)
    lines = ["graph medial {", "  node [shape=point];"]
    for e in range(mg.net.n_edges):
        lines.append(f'  m{e} [label="m{e}", shape=circle, width=0.2];')
    for t in range(1, mg.n_stubs + 1):
        lines.append(f'  t{t} [label="t{t}", shape=plaintext];')

    def name(node):
        return f"t{node[1]}" if node[0] == "t" else f"m{node[1] >> 1}"

    for s in mg.strands:
        color = _PALETTE[s.id % len(_PALETTE)]
        for eid, _fwd in s.steps:
            me = mg.edges[eid]
            lines.append(f'  {name(me.a)} -- {name(me.b)} [color={color}, label="s{s.id + 1}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
