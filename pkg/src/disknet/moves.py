"""Response-preserving local moves and conditional pattern moves.

Each move has a site finder and an applier.  Sites are plain records of the
vertices, edges or face a move acts on; applying a move at a site that does
not fit raises SiteMismatch.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import NegativeConductance, NetworkError, SiteMismatch
from .netcore import (
    EmbeddedNetwork,
    Kind,
    NetworkEditor,
    is_valid,
    trace_faces,
)
from .ratlinalg import format_fraction, relative_close, to_fraction
from .templates import Match, PatternMove, Template


class MoveKind(str, Enum):
    LOOP_REMOVAL = "LoopRemoval"
    PENDANT_REMOVAL = "PendantRemoval"
    SERIES = "Series"
    PARALLEL = "Parallel"
    Y_TO_DELTA = "YToDelta"
    DELTA_TO_Y = "DeltaToY"
    ANTENNA_JUMP = "AntennaJump"
    ANTENNA_ABSORB = "AntennaAbsorb"
    TRIANGLE_COND = "TriangleCond"
    TRIANGLE_COND_INVERSE = "TriangleCondInverse"
    SQUARE_COND = "SquareCond"
    PENTAGON_COND = "PentagonCond"
    PENTAGON_COND_INVERSE = "PentagonCondInverse"
    HEXAGON_COND_CONJECTURAL = "HexagonCondConjectural"


UNCONDITIONAL = (
    MoveKind.LOOP_REMOVAL,
    MoveKind.PENDANT_REMOVAL,
    MoveKind.SERIES,
    MoveKind.PARALLEL,
    MoveKind.Y_TO_DELTA,
    MoveKind.DELTA_TO_Y,
    MoveKind.ANTENNA_JUMP,
    MoveKind.ANTENNA_ABSORB,
)
CONDITIONAL = (
    MoveKind.TRIANGLE_COND,
    MoveKind.TRIANGLE_COND_INVERSE,
    MoveKind.SQUARE_COND,
    MoveKind.PENTAGON_COND,
    MoveKind.PENTAGON_COND_INVERSE,
)


class ConjecturalMove(NetworkError):
    """The hexagon move was requested without opting in."""


class ConjectureViolation(NetworkError):
    """The hexagon move changed the response matrix beyond tolerance."""


@dataclass(frozen=True)
class MoveSite:
    vertices: tuple = ()
    edges: tuple = ()
    face: int | None = None
    shift: int = 0  # antenna jump direction, +1 clockwise or -1
    mirrored: bool = False

    def to_json(self) -> dict:
        out = {}
        if self.vertices:
            out["vertices"] = list(self.vertices)
        if self.edges:
            out["edges"] = list(self.edges)
        if self.face is not None:
            out["face"] = self.face
        if self.shift:
            out["shift"] = self.shift
        if self.mirrored:
            out["mirrored"] = True
        return out

    @classmethod
    def from_json(cls, d: Mapping) -> "MoveSite":
        return cls(
            tuple(d.get("vertices", ())),
            tuple(d.get("edges", ())),
            d.get("face"),
            int(d.get("shift", 0)),
            bool(d.get("mirrored", False)),
        )


# ---------------------------------------------------------------------------
# unconditional local moves


def _loop_sites(net):
    return [MoveSite(edges=(e.id,)) for e in net.edges if e.is_loop]


def _pendant_sites(net):
    out = []
    for v in net.internal_vertices():
        if net.degree(v) == 1 and not net.edges[net.rotation[v][0] >> 1].is_loop:
            out.append(MoveSite(vertices=(v,), edges=(net.rotation[v][0] >> 1,)))
    return out


def _series_sites(net):
    out = []
    for v in net.internal_vertices():
        r = net.rotation[v]
        if len(r) != 2:
            continue
        e1, e2 = r[0] >> 1, r[1] >> 1
        if e1 == e2 or net.edges[e1].is_loop or net.edges[e2].is_loop:
            continue
        out.append(MoveSite(vertices=(v,), edges=(e1, e2)))
    return out


def _parallel_sites(net):
    groups: dict = {}
    for e in net.edges:
        if e.is_loop:
            continue
        groups.setdefault(frozenset((e.u, e.v)), []).append(e.id)
    out = []
    for ids in groups.values():
        for i in range(len(ids)):
            for j in range(i + 1, len(ids)):
                out.append(MoveSite(edges=(ids[i], ids[j])))
    return sorted(out, key=lambda s: s.edges)


def _y_sites(net):
    out = []
    for v in net.internal_vertices():
        r = net.rotation[v]
        if len(r) != 3:
            continue
        if any(net.edges[d >> 1].is_loop for d in r):
            continue
        nbrs = [net.head(d) for d in r]
        if len(set(nbrs)) == 3:
            out.append(MoveSite(vertices=(v,)))
    return out


def _delta_sites(net):
    out = []
    for i, f in enumerate(trace_faces(net)):
        if f.is_outer or len(f) != 3:
            continue
        vs = f.vertices(net)
        if len(set(vs)) == 3:
            out.append(MoveSite(face=i))
    return out


def _jump_sites(net):
    b = net.interior_boundary
    if b is None or net.degree(b) != 1:
        return []
    d = net.rotation[b][0]
    v = net.head(d)
    if v == b:
        return []
    r = net.rotation[v]
    i = r.index(d ^ 1)
    out = []
    for shift in (1, -1):
        j = i + shift
        if net.on_circle(v) and not (0 <= j < len(r)):
            continue
        if len(r) < 2:
            continue
        out.append(MoveSite(vertices=(b, v), shift=shift))
    return out


def _apply_loop(net, site):
    (e,) = site.edges
    if not (0 <= e < net.n_edges) or not net.edges[e].is_loop:
        raise SiteMismatch("edge is not a self-loop")
    ed = NetworkEditor(net)
    ed.remove_edge(e)
    return ed.finish()[0]


def _apply_pendant(net, site):
    if site not in _pendant_sites(net):
        raise SiteMismatch("not a pendant internal vertex")
    (v,) = site.vertices
    ed = NetworkEditor(net)
    ed.remove_edge(site.edges[0])
    ed.remove_vertex(v)
    return ed.finish()[0]


def _apply_series(net, site):
    (v,) = site.vertices
    if site not in _series_sites(net):
        raise SiteMismatch("not an internal vertex of degree two")
    d1, d2 = net.rotation[v]
    a, b = net.edges[d1 >> 1].conductance, net.edges[d2 >> 1].conductance
    x, y = net.head(d1), net.head(d2)
    ed = NetworkEditor(net)
    f = ed.add_edge(x, y, a * b / (a + b))
    # the new edge takes the old edges' slots at both far ends
    ed.replace_dart(x, d1 ^ 1, [2 * f])
    ed.replace_dart(y, d2 ^ 1, [2 * f + 1])
    ed.rot[v] = []
    for d in (d1, d2):
        del ed.edges[d >> 1]
        del ed.elabels[d >> 1]
    ed.remove_vertex(v)
    return ed.finish()[0]


def _apply_parallel(net, site):
    if len(site.edges) != 2 or MoveSite(edges=tuple(sorted(site.edges))) not in _parallel_sites(net):
        raise SiteMismatch("edges are not parallel")
    e1, e2 = site.edges
    ed = NetworkEditor(net)
    ed.edges[e1][2] = net.edges[e1].conductance + net.edges[e2].conductance
    ed.remove_edge(e2)
    return ed.finish()[0]


def _apply_y_to_delta(net, site):
    if MoveSite(vertices=site.vertices) not in _y_sites(net):
        raise SiteMismatch("not an internal vertex of degree three with distinct neighbors")
    (r,) = site.vertices
    darts = list(net.rotation[r])
    nb = [net.head(d) for d in darts]
    cs = [net.edges[d >> 1].conductance for d in darts]
    s = sum(cs)
    ed = NetworkEditor(net)
    # edge k joins nb[k] to nb[k+1]
    tri = []
    for k in range(3):
        k1 = (k + 1) % 3
        tri.append(ed.add_edge(nb[k], nb[k1], cs[k] * cs[k1] / s))
    for k in range(3):
        nxt = tri[k]  # toward the clockwise-next neighbor, leaves nb[k] as end 0
        prv = tri[(k - 1) % 3]  # toward the previous neighbor, arrives at nb[k] as end 1
        ed.replace_dart(nb[k], darts[k] ^ 1, [2 * nxt, 2 * prv + 1])
    ed.rot[r] = []
    for d in darts:
        del ed.edges[d >> 1]
        del ed.elabels[d >> 1]
    ed.remove_vertex(r)
    return ed.finish()[0]


def _apply_delta_to_y(net, site):
    if site.face is None or MoveSite(face=site.face) not in _delta_sites(net):
        raise SiteMismatch("not a triangular inner face with distinct corners")
    f = trace_faces(net)[site.face]
    du, dv, dw = f.darts  # u->v, v->w, w->u, counterclockwise
    u, v, w = net.tail(du), net.tail(dv), net.tail(dw)
    A = net.edges[du >> 1].conductance  # u-v, opposite w
    B = net.edges[dv >> 1].conductance  # v-w, opposite u
    C = net.edges[dw >> 1].conductance  # w-u, opposite v
    num = A * B + A * C + B * C
    ed = NetworkEditor(net)
    r = ed.add_vertex(Kind.INTERNAL)
    eu = ed.add_edge(r, u, num / B)
    ev = ed.add_edge(r, v, num / C)
    ew = ed.add_edge(r, w, num / A)
    # at each corner the two triangle darts are adjacent: incoming twin then outgoing dart
    for x, d_in, d_out, e in ((u, dw ^ 1, du, eu), (v, du ^ 1, dv, ev), (w, dv ^ 1, dw, ew)):
        rr = ed.rot[x]
        i = rr.index(d_in)
        if rr[(i + 1) % len(rr)] != d_out:
            raise SiteMismatch("triangle corner darts are not adjacent")
        if i + 1 == len(rr):
            ed.rot[x] = [2 * e + 1] + rr[1:-1]
        else:
            ed.rot[x] = rr[:i] + [2 * e + 1] + rr[i + 2:]
    ed.rot[r] = [2 * eu, 2 * ew, 2 * ev]
    for d in (du, dv, dw):
        del ed.edges[d >> 1]
        del ed.elabels[d >> 1]
    return ed.finish()[0]


def _apply_jump(net, site):
    if site not in _jump_sites(net):
        raise SiteMismatch("not an antenna jump")
    b, v = site.vertices
    d = net.rotation[b][0] ^ 1
    ed = NetworkEditor(net)
    r = ed.rot[v]
    i = r.index(d)
    j = (i + site.shift) % len(r)
    r[i], r[j] = r[j], r[i]
    return ed.finish()[0]


# ---------------------------------------------------------------------------
# pattern moves


def _F(x) -> Fraction:
    return Fraction(x)


def _antenna_absorb(v):
    a, b, c, d, e, f, g = (v[k] for k in "abcdefg")
    s = a + b + c + g
    return {"A": a * g / s, "B": b * g / s, "C": c * g / s, "D": d + a * b / s, "E": e + b * c / s, "F": f + a * c / s}


def _triangle_fwd(v):
    a, b, c, d, e, f = (v[k] for k in "abcdef")
    n = b * f + d * e + d * f + e * f
    return {
        "A": (e * a - b * f) / e,
        "B": b * n / (d * e),
        "C": (c * d - b * f) / d,
        "D": n / e,
        "E": n / d,
        "F": n / f,
    }


def _triangle_inv(v):
    A, B, C, D, E, F = (v[k] for k in "ABCDEF")
    s = B + D + E + F
    return {
        "a": (A * B + A * D + A * E + A * F + B * D) / s,
        "b": B * F / s,
        "c": (B * C + B * E + C * D + C * E + C * F) / s,
        "d": D * F / s,
        "e": E * F / s,
        "f": D * E / s,
    }


def _square(v):
    a, b, c, d, e, f, g, h, i = (v[k] for k in "abcdefghi")
    s = b + e + f + i
    n = b * g * h + d * e * f + e * f * g + e * f * h + e * g * h + f * g * h + g * h * i
    return {
        "A": (a * b * g + a * e * g + a * f * g + a * g * i + b * e * g - d * e * f) / (g * s),
        "B": b * i / s,
        "C": (b * c * h + b * f * h + c * e * h + c * f * h + c * h * i - d * e * f) / (h * s),
        "D": d * n / (g * h * s),
        "E": e * i / s,
        "F": f * i / s,
        "G": n / (h * s),
        "H": n / (g * s),
        "I": n / (e * f),
    }


def _pentagon_fwd(v):
    a, b, c, d, e, f, g, h, i, j, k, l, m = (v[x] for x in "abcdefghijklm")
    gam = f * g * j * (d + h + i + m)
    dlt = a*b*h*i + a*f*h*i + a*g*h*i + b*f*h*i + b*h*i*j + f*g*h*i + f*h*i*j + g*h*i*j
    p = dlt + a*h*i*l + h*i*j*l
    q = dlt + b*h*i*k + g*h*i*k
    den = gam + dlt + a*h*i*l + b*h*i*k + f*h*i*k + f*h*i*l + g*h*i*k + h*i*j*l + h*i*k*l
    return {
        "A": a + a * p / gam,
        "B": b + b * q / gam,
        "C": c + g * (d*f*h*j - a*b*h*i - a*f*h*i - b*f*h*i - b*h*i*j - i*h*b*k) / gam,
        "D": d * f * g * j * m / gam,
        "E": e + j * (d*f*g*i - a*b*h*i - a*f*h*i - a*g*h*i - a*h*i*l - b*f*h*i) / gam,
        "F": f * (gam + p) * (gam + q) / (gam * den),
        "G": g + g * q / gam,
        "H": f * g * h * j * m / gam,
        "I": f * g * i * j * m / gam,
        "J": j + j * p / gam,
        "K": k * (gam + p) / den,
        # L gains the gamma term its mirror K has; M's numerator leads with f, not g
        "L": l * (gam + q) / den,
        "M": f * h * i * k * l / den,
    }


def _pentagon_inv(v):
    A, B, C, D, E, F, G, H, I, J, K, L, M = (v[x] for x in "ABCDEFGHIJKLM")
    beta = F*K*L + F*K*M + F*L*M + K*L*M
    alpha = (A*B*M + A*F*M + A*G*M + A*L*M + B*F*M + B*J*M + B*K*M + F*G*M + F*J*M
             + F*K*L + F*K*M + F*L*M + G*J*M + G*K*M + J*L*M + K*L*M)
    p = beta + B*K*M + G*K*M
    q = beta + A*L*M + J*L*M
    t = D*F*G*J*M + H*F*G*J*M + I*F*G*J*M
    return {
        "a": A * p / alpha,
        "b": B * q / alpha,
        "c": C + (A*B*G*I*M + A*F*G*I*M + B*F*G*I*M + B*G*I*J*M + B*G*I*K*M - D*F*G*J*M) / (I * alpha),
        "d": D + D * t / (I * H * alpha),
        "e": E + (A*B*H*J*M + A*F*H*J*M + A*G*H*J*M + A*H*J*L*M + B*F*H*J*M - D*F*G*J*M) / (H * alpha),
        "f": p * q / (L * K * alpha),
        "g": G * q / alpha,
        "h": H + t / (I * alpha),
        "i": I + t / (H * alpha),
        "j": J * p / alpha,
        "k": p / (F * L),
        "l": q / (K * F),
        "m": (H * I * alpha + t) / (F * G * J * M),
    }


def _hexagon(v):
    a, b, c, d, e, f, g, h, i, j, k, l, m, n, o, p, q = (v[x] for x in "abcdefghijklmnopq")
    alpha = g*m*n + g*m*q + g*n*q + m*n*q
    beta = (a*b*q + a*g*q + a*h*q + a*n*q + b*g*q + b*l*q + b*m*q + g*h*q + g*l*q + h*l*q
            + h*m*q + l*n*q)
    # gamma's last term is degree six like its siblings (g h j k l q); numerically confirmed
    gamma = (d*e*g*h*l*q + d*g*h*j*l*q + d*g*h*k*l*q + e*g*h*i*l*q + e*g*h*j*l*q + g*h*i*j*l*q
             + g*h*i*k*l*q + g*h*j*k*l*q)
    delta = (d*g*h*l*p*q + g*h*i*l*p*q + e*g*h*l*o*q + g*h*k*l*o*q + g*h*j*l*o*q + g*h*j*l*p*q
             + g*h*l*o*p*q)
    ab = alpha + beta
    u1 = alpha + b*m*q + h*m*q
    u2 = alpha + a*n*q + l*n*q
    w1 = gamma + d*g*h*l*p*q + g*h*i*l*p*q
    w2 = gamma + e*g*h*l*o*q + g*h*k*l*o*q
    z = i * j * k * ab
    return {
        "A": a * u1 / ab,
        "B": b * u2 / ab,
        "C": c + (h*j*k*(a*b*q + a*g*q + b*g*q + b*l*q + b*m*q) - d*e*g*h*l*q - d*g*h*j*l*q
                  - d*g*h*k*l*q - d*g*h*l*p*q - e*g*h*j*l*q) / (j * k * ab),
        "D": d + d * w1 / z,
        "E": e + e * w2 / z,
        "F": f + (i*j*l*(a*b*q + a*g*q + a*h*q + a*n*q + b*g*q) - d*e*g*h*l*q - d*g*h*j*l*q
                  - e*g*h*i*l*q - e*g*h*j*l*q - e*g*h*l*o*q) / (i * j * ab),
        "G": u1 * u2 / (m * n * ab),
        "H": h * u2 / ab,
        "I": i + w1 / (j * k * ab),
        "J": (z + w1) * (z + w2) / (i * k * ab * (z + gamma + delta)),
        "K": k + k * w2 / z,
        "L": l * u1 / ab,
        "M": u1 / (g * n),
        "N": u2 / (g * m),
        "O": o * (z + w1) / (z + gamma + delta),
        "P": p * (z + w2) / (z + gamma + delta),
        "Q": h * g * j * l * o * p * q / (z + gamma + delta),
    }


def _tpl(name, verts, edges):
    return Template(name, verts, edges)


G, K, W = "grey", "black", "white"

ANTENNA_LHS = _tpl(
    "antenna-absorb",
    {"L": (0, 0, G), "T": (1.5, 2.5, G), "R": (3, 0, G), "r": (1.5, 1, K), "b": (1.5, 0.25, W)},
    {"a": ("R", "r"), "b": ("L", "r"), "c": ("T", "r"), "d": ("R", "L"), "e": ("L", "T"), "f": ("T", "R"), "g": ("b", "r")},
)
ANTENNA_RHS = _tpl(
    "antenna-absorbed",
    {"L": (6, 0, G), "T": (7.5, 2.5, G), "R": (9, 0, G), "b": (7.5, 1, W)},
    {"A": ("R", "b"), "B": ("L", "b"), "C": ("T", "b"), "D": ("R", "L"), "E": ("L", "T"), "F": ("T", "R")},
)

TRIANGLE_LHS = _tpl(
    "triangle",
    {"L": (0, 0, G), "T": (1.5, 2.5, G), "R": (3, 0, G), "b": (1.5, 1, W)},
    {"a": ("b", "R"), "b": ("b", "L"), "c": ("b", "T"), "e": ("L", "T"), "f": ("T", "R"), "d": ("R", "L")},
)
TRIANGLE_RHS = _tpl(
    "triangle-moved",
    {"X": (5, -1, G), "Lp": (6.5, 0, K), "Tp": (8, 2.5, G), "Rp": (9.5, 0, G), "b": (8, 1, W)},
    {"B": ("Lp", "b"), "C": ("Tp", "b"), "A": ("Rp", "b"), "E": ("Lp", "Tp"), "F": ("X", "Lp"), "D": ("Rp", "Lp")},
)

SQUARE_LHS = _tpl(
    "square",
    {"SW": (0, 0, K), "NW": (0, 2, G), "SE": (2, 0, G), "NE": (2, 2, G), "b": (1, 1, W), "X": (-1, -1, G)},
    {
        "b": ("SW", "b"), "c": ("NW", "b"), "a": ("SE", "b"), "e": ("SW", "SE"), "f": ("SW", "NW"),
        "d": ("NE", "b"), "g": ("NW", "NE"), "h": ("NE", "SE"), "i": ("X", "SW"),
    },
)
SQUARE_RHS = _tpl(
    "square-moved",
    {"SWp": (5, 0, G), "NWp": (5, 2, G), "SEp": (7, 0, G), "NEp": (7, 2, K), "b": (6, 1, W), "Xp": (8, 3, G)},
    {
        "B": ("SWp", "b"), "C": ("NWp", "b"), "A": ("SEp", "b"), "E": ("SWp", "SEp"), "F": ("SWp", "NWp"),
        "D": ("NEp", "b"), "G": ("NWp", "NEp"), "H": ("NEp", "SEp"), "I": ("Xp", "NEp"),
    },
)

PENTAGON_LHS = _tpl(
    "pentagon",
    {
        "b": (0, 0, W), "top": (0, 1.5, K), "RB": (0.882, -1.213, K), "LB": (-0.882, -1.213, K),
        "RU": (1.427, 0.464, G), "LU": (-1.427, 0.464, G), "Top": (0, 3, G),
        "RBo": (1.764, -2.426, G), "LBo": (-1.764, -2.426, G),
    },
    {
        "a": ("b", "RB"), "b": ("b", "LB"), "c": ("b", "LU"), "d": ("b", "top"), "e": ("b", "RU"),
        "f": ("RB", "LB"), "g": ("LB", "LU"), "h": ("LU", "top"), "i": ("top", "RU"), "j": ("RU", "RB"),
        "k": ("RBo", "RB"), "l": ("LBo", "LB"), "m": ("Top", "top"),
    },
)
PENTAGON_RHS = _tpl(
    "pentagon-moved",
    {
        "b": (7, 0, W), "Topp": (7, 1.5, G), "RBp": (7.882, -1.213, K), "LBp": (6.118, -1.213, K),
        "RUp": (8.427, 0.464, G), "LUp": (5.573, 0.464, G),
        "RBop": (8.764, -2.426, G), "LBop": (5.236, -2.426, G),
    },
    {
        "A": ("b", "RBp"), "B": ("b", "LBp"), "C": ("b", "LUp"), "D": ("b", "Topp"), "E": ("b", "RUp"),
        "F": ("RBp", "LBp"), "G": ("LBp", "LUp"), "H": ("LUp", "Topp"), "I": ("Topp", "RUp"), "J": ("RUp", "RBp"),
        "K": ("RBop", "RBp"), "L": ("LBop", "LBp"), "M": ("RBop", "LBop"),
    },
)
PENTAGON_GREYS = {"Topp": "Top", "RUp": "RU", "LUp": "LU", "RBop": "RBo", "LBop": "LBo"}

_HEX_V = {
    "b": (0, 0, W), "BR": (0.75, -1.3, K), "BL": (-0.75, -1.3, K), "TL": (-0.75, 1.3, K), "TR": (0.75, 1.3, K),
    "R": (1.5, 0, G), "L": (-1.5, 0, G), "BRo": (1.5, -2.6, G), "BLo": (-1.5, -2.6, G),
    "TLo": (-1.5, 2.6, G), "TRo": (1.5, 2.6, G),
}
_HEX_E = {
    "a": ("b", "BR"), "b": ("b", "BL"), "c": ("b", "L"), "d": ("b", "TL"), "e": ("b", "TR"), "f": ("b", "R"),
    "g": ("BR", "BL"), "h": ("BL", "L"), "i": ("L", "TL"), "j": ("TL", "TR"), "k": ("TR", "R"), "l": ("R", "BR"),
    "m": ("BR", "BRo"), "n": ("BL", "BLo"), "o": ("TL", "TLo"), "p": ("TR", "TRo"),
}
HEXAGON_LHS = _tpl("hexagon", dict(_HEX_V), {**_HEX_E, "q": ("BLo", "BRo")})
HEXAGON_RHS = _tpl(
    "hexagon-moved",
    dict(_HEX_V),
    {k.upper(): v for k, v in {**_HEX_E, "q": ("TLo", "TRo")}.items()},
)
_HEX_GREYS = {v: v for v, (_, _, c) in _HEX_V.items() if c == G}

PATTERN_MOVES: dict[MoveKind, PatternMove] = {
    MoveKind.ANTENNA_ABSORB: PatternMove(
        "antenna-absorb", ANTENNA_LHS, ANTENNA_RHS, {"L": "L", "T": "T", "R": "R"}, _antenna_absorb
    ),
    MoveKind.TRIANGLE_COND: PatternMove(
        "triangle", TRIANGLE_LHS, TRIANGLE_RHS, {"X": "L", "Tp": "T", "Rp": "R"}, _triangle_fwd
    ),
    MoveKind.TRIANGLE_COND_INVERSE: PatternMove(
        "triangle-inverse", TRIANGLE_RHS, TRIANGLE_LHS, {"L": "X", "T": "Tp", "R": "Rp"}, _triangle_inv
    ),
    MoveKind.SQUARE_COND: PatternMove(
        "square", SQUARE_LHS, SQUARE_RHS, {"SWp": "X", "NWp": "NW", "SEp": "SE", "Xp": "NE"}, _square
    ),
    MoveKind.PENTAGON_COND: PatternMove("pentagon", PENTAGON_LHS, PENTAGON_RHS, PENTAGON_GREYS, _pentagon_fwd),
    MoveKind.PENTAGON_COND_INVERSE: PatternMove(
        "pentagon-inverse", PENTAGON_RHS, PENTAGON_LHS, {v: k for k, v in PENTAGON_GREYS.items()}, _pentagon_inv
    ),
    MoveKind.HEXAGON_COND_CONJECTURAL: PatternMove("hexagon", HEXAGON_LHS, HEXAGON_RHS, _HEX_GREYS, _hexagon),
}


def _site_of(pm: PatternMove, m: Match) -> MoveSite:
    tpl = pm.lhs
    return MoveSite(
        vertices=tuple(m.vertices[v] for v in tpl.vertices),
        edges=tuple(m.edges[label] for label in tpl.edges),
        mirrored=m.mirrored,
    )


def pattern_values(net: EmbeddedNetwork, kind: MoveKind, site: MoveSite) -> dict[str, Fraction]:
    """Conductances of the pattern's drawn edges, keyed by edge label."""
    pm = PATTERN_MOVES[kind]
    return {label: net.edges[e].conductance for label, e in zip(pm.lhs.edges, site.edges)}


def pattern_outputs(kind: MoveKind, values: Mapping[str, Fraction]) -> dict[str, Fraction]:
    return PATTERN_MOVES[kind].formula({k: Fraction(v) for k, v in values.items()})


def _apply_pattern(net, kind, site, allow_conjectural=False, check=True):
    pm = PATTERN_MOVES[kind]
    if kind is MoveKind.HEXAGON_COND_CONJECTURAL and not allow_conjectural:
        raise ConjecturalMove("the hexagon move is conjectural; pass allow_conjectural=True to apply it")
    for m in pm.matches(net):
        if _site_of(pm, m) == site:
            break
    else:
        raise SiteMismatch(f"site does not match the {pm.name} pattern")
    values = pattern_values(net, kind, site)
    out = pm.formula(values)
    bad = {k: v for k, v in out.items() if v <= 0}
    if bad:
        raise NegativeConductance(
            "non-positive output conductance: " + ", ".join(f"{k}={format_fraction(v)}" for k, v in sorted(bad.items()))
        )
    res = pm.rewrite(net, m, out)
    if not is_valid(res):
        raise SiteMismatch("rewritten embedding is not a disk embedding")
    if kind is MoveKind.HEXAGON_COND_CONJECTURAL and check:
        from .response import response_float

        before, after = response_float(net), response_float(res)
        if not relative_close(before, after, 1e-9):
            raise ConjectureViolation(
                "hexagon move changed the response matrix; inputs "
                + json.dumps({k: format_fraction(v) for k, v in sorted(values.items())})
            )
    return res


# ---------------------------------------------------------------------------
# dispatch


_FINDERS = {
    MoveKind.LOOP_REMOVAL: _loop_sites,
    MoveKind.PENDANT_REMOVAL: _pendant_sites,
    MoveKind.SERIES: _series_sites,
    MoveKind.PARALLEL: _parallel_sites,
    MoveKind.Y_TO_DELTA: _y_sites,
    MoveKind.DELTA_TO_Y: _delta_sites,
    MoveKind.ANTENNA_JUMP: _jump_sites,
}

_APPLIERS = {
    MoveKind.LOOP_REMOVAL: _apply_loop,
    MoveKind.PENDANT_REMOVAL: _apply_pendant,
    MoveKind.SERIES: _apply_series,
    MoveKind.PARALLEL: _apply_parallel,
    MoveKind.Y_TO_DELTA: _apply_y_to_delta,
    MoveKind.DELTA_TO_Y: _apply_delta_to_y,
    MoveKind.ANTENNA_JUMP: _apply_jump,
}


def find_sites(net: EmbeddedNetwork, kind) -> list[MoveSite]:
    kind = MoveKind(kind)
    if kind in _FINDERS:
        return _FINDERS[kind](net)
    pm = PATTERN_MOVES[kind]
    return [_site_of(pm, m) for m in pm.matches(net)]


def apply_move(net: EmbeddedNetwork, kind, site: MoveSite, allow_conjectural: bool = False) -> EmbeddedNetwork:
    kind = MoveKind(kind)
    if kind in _APPLIERS:
        return _APPLIERS[kind](net, site)
    return _apply_pattern(net, kind, site, allow_conjectural)


# ---------------------------------------------------------------------------
# one-way move reversals, which need explicit parameters


def insert_loop(net: EmbeddedNetwork, v: int, position: int, c) -> EmbeddedNetwork:
    """Add a self-loop at v whose two ends sit at ``position`` in v's rotation."""
    ed = NetworkEditor(net)
    e = ed.add_edge(v, v, c)
    ed.rot[v][position:position] = [2 * e, 2 * e + 1]
    return ed.finish()[0]


def insert_pendant(net: EmbeddedNetwork, v: int, position: int, c) -> EmbeddedNetwork:
    ed = NetworkEditor(net)
    w = ed.add_vertex(Kind.INTERNAL)
    e = ed.add_edge(v, w, c)
    ed.rot[v].insert(position, 2 * e)
    ed.rot[w] = [2 * e + 1]
    return ed.finish()[0]


def split_series(net: EmbeddedNetwork, e: int, c1) -> EmbeddedNetwork:
    """Replace edge e by two series edges; the one at e's first end gets c1."""
    c = net.edges[e].conductance
    c1 = to_fraction(c1)
    if c1 <= c:
        raise NegativeConductance("the first series part must exceed the original conductance")
    c2 = c * c1 / (c1 - c)
    ed = NetworkEditor(net)
    u, v, _ = ed.edges[e]
    w = ed.add_vertex(Kind.INTERNAL)
    f = ed.add_edge(w, v, c2)
    ed.edges[e][1] = w
    ed.edges[e][2] = c1
    ed.replace_dart(v, 2 * e + 1, [2 * f + 1])
    ed.rot[w] = [2 * e + 1, 2 * f]
    return ed.finish()[0]


def split_parallel(net: EmbeddedNetwork, e: int, c1) -> EmbeddedNetwork:
    c = net.edges[e].conductance
    c1 = to_fraction(c1)
    if not 0 < c1 < c:
        raise NegativeConductance("the split part must lie strictly between 0 and the original conductance")
    ed = NetworkEditor(net)
    u, v, _ = ed.edges[e]
    ed.edges[e][2] = c1
    f = ed.add_edge(u, v, c - c1)
    ru = ed.rot[u]
    ru.insert(ru.index(2 * e) + 1, 2 * f)
    rv = ed.rot[v]
    rv.insert(rv.index(2 * e + 1), 2 * f + 1)
    return ed.finish()[0]


# ---------------------------------------------------------------------------
# random walks


@dataclass
class TraceStep:
    kind: MoveKind
    site: MoveSite
    before: list[Fraction]
    after: list[Fraction]

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "site": self.site.to_json(),
            "before": [format_fraction(x) for x in self.before],
            "after": [format_fraction(x) for x in self.after],
        }


def random_walk(
    net: EmbeddedNetwork,
    kinds: Iterable,
    steps: int,
    seed: int = 0,
) -> tuple[EmbeddedNetwork, list[TraceStep]]:
    """Apply up to ``steps`` random applicable moves; skip steps with no usable site."""
    rng = random.Random(seed)
    kinds = [MoveKind(k) for k in kinds]
    trace: list[TraceStep] = []
    for _ in range(steps):
        options = [(k, s) for k in kinds for s in find_sites(net, k)]
        rng.shuffle(options)
        for k, s in options:
            try:
                nxt = apply_move(net, k, s)
            except (NegativeConductance, SiteMismatch, ConjecturalMove):
                continue
            trace.append(TraceStep(k, s, net.conductances(), nxt.conductances()))
            net = nxt
            break
    return net, trace


def pattern_instance(kind, seed: int = 0, decorations: int = 2, max_tries: int = 1000) -> EmbeddedNetwork:
    """A random network containing the pattern of ``kind`` where the move is applicable.

    Conductances are resampled until every output conductance is positive.
    """
    from .generators import decorate
    from .templates import template_host

    kind = MoveKind(kind)
    pm = PATTERN_MOVES[kind]
    rng = random.Random(seed)
    host, _ = template_host(pm.lhs)
    net = decorate(host, rng, decorations)
    for _ in range(max_tries):
        trial = net.with_conductances([Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in net.edges])
        site = find_sites(trial, kind)[0]
        if all(v > 0 for v in pm.formula(pattern_values(trial, kind, site)).values()):
            return trial
    raise NegativeConductance(f"no positive instance of {kind.value} found in {max_tries} tries")


# ---------------------------------------------------------------------------
# randomized verification


def random_instance(kind, seed: int) -> tuple[EmbeddedNetwork, MoveSite]:
    """A seeded random network together with an applicable site for ``kind``."""
    from . import generators as gen

    kind = MoveKind(kind)
    rng = random.Random(seed)
    if kind in PATTERN_MOVES:
        net = pattern_instance(kind, rng.randrange(2**31), decorations=rng.randint(0, 3))
        return net, find_sites(net, kind)[0]
    for attempt in range(200):
        s = rng.randrange(2**31)
        net = gen.random_network(
            s,
            n_boundary=rng.randint(2, 5),
            n_interior=rng.randint(1, 6),
            keep=rng.uniform(0.4, 0.9),
            extras=rng.randint(0, 4),
        )
        if kind is MoveKind.ANTENNA_JUMP:
            v = rng.randrange(net.n_vertices)
            deg = net.degree(v)
            if net.on_circle(v):
                if deg < 2:
                    continue
                pos = rng.randint(1, deg - 1)
            else:
                pos = rng.randint(0, deg)
            net = gen.add_antenna(net, v, pos, Fraction(rng.randint(1, 9), rng.randint(1, 9)))
        sites = find_sites(net, kind)
        if sites:
            return net, rng.choice(sites)
    raise SiteMismatch(f"no instance of {kind.value} found for seed {seed}")


@dataclass
class VerifyResult:
    kind: MoveKind
    trials: int
    preserved: int
    failures: list = field(default_factory=list)  # (seed, message)

    @property
    def ok(self) -> bool:
        return self.preserved == self.trials

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "trials": self.trials,
            "preserved": self.preserved,
            "failures": [{"seed": s, "message": m} for s, m in self.failures],
        }


def verify_kind(kind, trials: int, seed: int = 0, rtol: float = 1e-9) -> VerifyResult:
    """Apply ``kind`` on ``trials`` random instances and compare response matrices.

    Exact comparison for every move except the hexagon, which is compared in
    floating point at relative tolerance ``rtol``.
    """
    from .response import response, response_float

    kind = MoveKind(kind)
    res = VerifyResult(kind, trials, 0)
    for t in range(trials):
        s = seed * 1_000_003 + t
        try:
            net, site = random_instance(kind, s)
            out = apply_move(net, kind, site, allow_conjectural=True)
            if kind is MoveKind.HEXAGON_COND_CONJECTURAL:
                same = relative_close(response_float(net), response_float(out), rtol)
            else:
                same = response(net) == response(out)
        except NetworkError as err:
            res.failures.append((s, f"{type(err).__name__}: {err}"))
            continue
        if same:
            res.preserved += 1
        else:
            res.failures.append((s, "response matrix changed"))
    return res
