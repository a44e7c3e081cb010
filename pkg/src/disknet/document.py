"""JSON network documents and DOT export.

Document layout::

    {"version": 1,
     "vertices": [{"id": 0, "kind": "Boundary", "label": "a"}, ...],
     "edges": [{"id": 0, "u": 2, "v": 1, "conductance": "2"}, ...],
     "rotation": {"0": [3, 9, 7], ...},
     "boundary_order": [0, 1],
     "interior_boundary": null}

Rotation lists hold edge-end ids (2 * edge id + 0 at u, + 1 at v) in
clockwise order; a circle vertex's list starts just clockwise of the
outside of the disk.
"""

from __future__ import annotations

import json
import re
from typing import Any

from .errors import NetworkError, ParseError
from .netcore import EmbeddedNetwork, Kind, validate
from .ratlinalg import RationalMatrix, format_fraction, to_fraction

VERSION = 1


def network_to_json(net: EmbeddedNetwork) -> dict[str, Any]:
    return {
        "version": VERSION,
        "vertices": [
            {"id": v, "kind": net.kinds[v].value, "label": _plain(net.vertex_labels[v])} for v in range(net.n_vertices)
        ],
        "edges": [
            {
                "id": e.id,
                "u": e.u,
                "v": e.v,
                "conductance": format_fraction(e.conductance),
                "label": _plain(net.edge_labels[e.id]),
            }
            for e in net.edges
        ],
        "rotation": {str(v): list(r) for v, r in enumerate(net.rotation)},
        "boundary_order": list(net.boundary_order),
        "interior_boundary": net.interior_boundary,
    }


def _plain(x):
    return x if isinstance(x, (int, str)) else str(x)


def dumps_network(net: EmbeddedNetwork) -> str:
    return json.dumps(network_to_json(net), indent=2)


def _locate(text: str, *needles: str) -> tuple[int | None, int | None]:
    """Line and column of the last needle, each searched after the previous one."""
    pos = 0
    found = None
    for nd in needles:
        i = text.find(nd, pos)
        if i < 0:
            break
        found = i
        pos = i + len(nd)
    if found is None:
        return None, None
    line = text.count("\n", 0, found) + 1
    col = found - (text.rfind("\n", 0, found) + 1) + 1
    return line, col


def _nth(text: str, section: str, n: int) -> tuple[int | None, int | None]:
    """Position of the n-th object inside the named top-level array."""
    start = text.find(f'"{section}"')
    if start < 0:
        return None, None
    brace = [m.start() for m in re.finditer(r"\{", text[start:])]
    if n >= len(brace):
        return _locate(text, f'"{section}"')
    i = start + brace[n]
    return text.count("\n", 0, i) + 1, i - (text.rfind("\n", 0, i) + 1) + 1


def _fail(msg: str, where: tuple) -> ParseError:
    line, col = where
    return ParseError(msg, line, col)


def loads_network(text: str, check: bool = True) -> EmbeddedNetwork:
    """Parse a network document; errors carry the line and column they refer to."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(err.msg, err.lineno, err.colno) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", 1, 1)
    for key in ("vertices", "edges", "rotation", "boundary_order"):
        if key not in doc:
            raise ParseError(f"missing key {key!r}", 1, 1)
    version = doc.get("version", VERSION)
    if version != VERSION:
        raise _fail(f"unsupported version {version!r}", _locate(text, '"version"'))
    verts = doc["vertices"]
    if not isinstance(verts, list):
        raise _fail("vertices must be a list", _locate(text, '"vertices"'))
    n = len(verts)
    kinds, vlabels = [None] * n, [None] * n
    for i, rec in enumerate(verts):
        where = _nth(text, "vertices", i)
        if not isinstance(rec, dict) or "id" not in rec or "kind" not in rec:
            raise _fail("each vertex needs an id and a kind", where)
        vid = rec["id"]
        if not isinstance(vid, int) or not 0 <= vid < n or kinds[vid] is not None:
            raise _fail(f"vertex ids must be 0..{n - 1}, each once (got {vid!r})", where)
        try:
            kinds[vid] = Kind(rec["kind"])
        except ValueError:
            raise _fail(f"unknown vertex kind {rec['kind']!r}; use Boundary, InteriorBoundary or Internal", where) from None
        vlabels[vid] = rec.get("label", vid)
    edges_in = doc["edges"]
    if not isinstance(edges_in, list):
        raise _fail("edges must be a list", _locate(text, '"edges"'))
    m = len(edges_in)
    edges, elabels = [None] * m, [None] * m
    for i, rec in enumerate(edges_in):
        where = _nth(text, "edges", i)
        if not isinstance(rec, dict) or not {"id", "u", "v", "conductance"} <= set(rec):
            raise _fail("each edge needs id, u, v and conductance", where)
        eid = rec["id"]
        if not isinstance(eid, int) or not 0 <= eid < m or edges[eid] is not None:
            raise _fail(f"edge ids must be 0..{m - 1}, each once (got {eid!r})", where)
        try:
            c = to_fraction(rec["conductance"])
        except (ValueError, TypeError, ZeroDivisionError):
            raise _fail(f"bad conductance {rec['conductance']!r}", where) from None
        edges[eid] = (rec["u"], rec["v"], c)
        elabels[eid] = rec.get("label", eid)
    rot_in = doc["rotation"]
    if not isinstance(rot_in, dict):
        raise _fail("rotation must map vertex ids to edge-end lists", _locate(text, '"rotation"'))
    rotation = [[] for _ in range(n)]
    for key, lst in rot_in.items():
        where = _locate(text, '"rotation"', f'"{key}"')
        try:
            v = int(key)
        except ValueError:
            raise _fail(f"rotation key {key!r} is not a vertex id", where) from None
        if not 0 <= v < n or not isinstance(lst, list):
            raise _fail(f"bad rotation entry for {key!r}", where)
        rotation[v] = lst
    ib = doc.get("interior_boundary")
    try:
        net = EmbeddedNetwork(kinds, edges, rotation, doc["boundary_order"], ib, vlabels, elabels)
        if check:
            validate(net)
    except NetworkError as err:
        raise _fail(str(err), _locate(text, '"rotation"')) from None
    except (TypeError, ValueError) as err:
        raise ParseError(f"malformed document: {err}", 1, 1) from None
    return net


def load_network(path: str) -> EmbeddedNetwork:
    with open(path, encoding="utf-8") as fh:
        return loads_network(fh.read())


def matrix_to_json(m: RationalMatrix) -> list[list[str]]:
    return [[format_fraction(x) for x in row] for row in m.tolist()]


def matrix_from_json(data) -> RationalMatrix:
    if isinstance(data, dict):
        data = data.get("matrix")
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise ParseError("expected a list of rows", 1, 1)
    n = len(data[0]) if data else 0
    try:
        return RationalMatrix([[to_fraction(x) for x in row] for row in data], n)
    except (ValueError, TypeError, ZeroDivisionError) as err:
        raise ParseError(f"bad matrix entry: {err}", 1, 1) from None


# ---------------------------------------------------------------------------
# DOT


def network_dot(net: EmbeddedNetwork) -> str:
    """Boundary vertices unfilled, internal ones filled, the interior boundary vertex double-circled."""
    lines = ["graph network {", "  node [shape=circle, label=\"\", width=0.25];"]
    for v in range(net.n_vertices):
        k = net.kinds[v]
        if k is Kind.INTERNAL:
            style = "style=filled, fillcolor=black"
        elif k is Kind.INTERIOR_BOUNDARY:
            style = "shape=doublecircle, style=filled, fillcolor=white"
        else:
            style = "style=filled, fillcolor=white"
        lines.append(f'  v{v} [{style}, xlabel="{net.vertex_labels[v]}"];')
    for e in net.edges:
        lines.append(f'  v{e.u} -- v{e.v} [label="{format_fraction(e.conductance)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
