"""Acceptance suite: one test per criterion, each printing a PASS/FAIL verdict.

Run alone with ``pytest tests/test_acceptance.py -v``; the verdict lines are
collected in the "acceptance criteria" section of the terminal summary.
"""

import random
import time
import timeit
from fractions import Fraction as F

import pytest

from disknet import generators as gen
from disknet import moves
from disknet.medial import (
    check_irreducible,
    detect_regions,
    endpoint_count_off_center,
    medial_graph,
    standard_zsequence,
    z_sequence,
)
from disknet.moves import MoveKind
from disknet.netcore import trace_faces
from disknet.ratlinalg import RationalMatrix
from disknet.recovery import necessary_condition, recover
from disknet.response import kirchhoff, response

# ---------------------------------------------------------------------------
# 1. worked example


EXAMPLE1_K = RationalMatrix([[-5, 1, 1, 3], [1, -5, 2, 2], [1, 2, -3, 0], [3, 2, 0, -5]])
EXAMPLE1_LAMBDA = RationalMatrix([[F(-43, 15), F(43, 15)], [F(43, 15), F(-43, 15)]])
# the value as originally stated; its rows do not sum to zero, so no network has it
EXAMPLE1_STATED = RationalMatrix([[F(-43, 15), F(7, 15)], [F(7, 15), F(-43, 15)]])


def _example1():
    net = gen.example1()
    return kirchhoff(net).matrix, response(net).matrix


def test_criterion_1_example(verdict):
    k, lam = _example1()
    best = min(timeit.repeat(_example1, number=1, repeat=50))
    exact = k == EXAMPLE1_K and lam == EXAMPLE1_LAMBDA
    literal = lam == EXAMPLE1_STATED
    verdict(
        1,
        exact and literal and best < 1e-3,
        f"Kirchhoff exact={k == EXAMPLE1_K}, response off-diagonal {lam[0, 1]} "
        f"(stated 7/15 reproduced={literal}), {best * 1e3:.3f} ms",
    )
    assert exact and best < 1e-3


@pytest.mark.xfail(strict=True, reason="the stated off-diagonal 7/15 breaks zero row sums; the true value is 43/15")
def test_criterion_1_stated_value():
    assert _example1()[1] == EXAMPLE1_STATED


# ---------------------------------------------------------------------------
# 2-4. moves


EXACT_KINDS = list(moves.UNCONDITIONAL) + list(moves.CONDITIONAL)


def test_criterion_2_move_invariance(verdict):
    start = time.perf_counter()
    results = [moves.verify_kind(kind, 100, seed=2024) for kind in EXACT_KINDS]
    elapsed = time.perf_counter() - start
    bad = [f"{r.kind.value} {r.preserved}/{r.trials}" for r in results if not r.ok]
    ok = not bad and elapsed < 120
    verdict(2, ok, f"{len(results)} kinds x 100 instances, exact, {elapsed:.1f} s" + (f"; failing {bad}" if bad else ""))
    assert ok


ROUND_TRIPS = [
    (MoveKind.TRIANGLE_COND, MoveKind.TRIANGLE_COND_INVERSE),
    (MoveKind.PENTAGON_COND, MoveKind.PENTAGON_COND_INVERSE),
]


def test_criterion_3_round_trips(verdict):
    misses = []
    for fwd, inv in ROUND_TRIPS:
        for seed in range(100):
            net = moves.pattern_instance(fwd, seed)
            values = moves.pattern_values(net, fwd, moves.find_sites(net, fwd)[0])
            if moves.pattern_outputs(inv, moves.pattern_outputs(fwd, values)) != values:
                misses.append((fwd.value, seed))
    pinned_in = dict(zip("abcdef", map(F, (2, 1, 2, 1, 1, 1))))
    pinned_out = moves.pattern_outputs(MoveKind.TRIANGLE_COND, pinned_in)
    pinned = [pinned_out[k] for k in "ABCDEF"] == [1, 4, 1, 4, 4, 4]
    pinned_back = moves.pattern_outputs(MoveKind.TRIANGLE_COND_INVERSE, pinned_out) == pinned_in
    ok = not misses and pinned and pinned_back
    verdict(3, ok, f"2 moves x 100 instances, {len(misses)} mismatches; pinned (2,1,2,1,1,1)->(1,4,1,4,4,4) {pinned}")
    assert ok


def test_criterion_4_hexagon(verdict):
    # apply_move checks the response itself and raises ConjectureViolation with the inputs
    res = moves.verify_kind(MoveKind.HEXAGON_COND_CONJECTURAL, 40, seed=7, rtol=1e-9)
    counterexamples = [m for _, m in res.failures]
    verdict(4, res.ok, f"{res.preserved}/{res.trials} instances within 1e-9 relative"
            + (f"; counterexample {counterexamples[0]}" if counterexamples else ""))
    assert res.ok


# ---------------------------------------------------------------------------
# 5-6. medial structure


def test_criterion_5_layered_polygons(verdict):
    bad = []
    for n in range(3, 13):
        net = gen.four_periodic(n)
        mg = medial_graph(net)
        rep = detect_regions(mg)
        ell = gen.layers(n)
        expected = {3: 4 * ell - 2, 0: 4 * ell - 1, 1: 4 * ell, 2: 4 * ell + 1}[n % 4]
        center = mg.face_of[trace_faces(net)[gen.center_face(net)].darts[0]]
        counts = {endpoint_count_off_center(mg, s, center) for s in mg.strands}
        if not z_sequence(mg).equivalent(standard_zsequence(n)) or rep.lenses or rep.circles or counts != {expected}:
            bad.append(n)
    verdict(5, not bad, "n=3..12 standard z-sequence, lens- and circle-free, endpoint counts by residue"
            + (f"; failing n={bad}" if bad else ""))
    assert not bad


def test_criterion_6_irreducibility_checker(verdict):
    spiders = {n: check_irreducible(gen.spider(n)).ok for n in range(3, 9)}
    labels = {}
    for n in range(3, 9):
        net = gen.spider(n)
        e = net.edges[0]
        labels.setdefault("parallel", set()).add(
            check_irreducible(moves.split_parallel(net, 0, e.conductance / 2)).violations)
        labels.setdefault("pendant", set()).add(check_irreducible(moves.insert_pendant(net, 0, 0, 1)).violations)
        labels.setdefault("empty lens", set()).add(
            check_irreducible(moves.split_series(net, 0, 2 * e.conductance)).violations)
    want = {"parallel": {("c",)}, "pendant": {("b",)}, "empty lens": {("c",)}}
    ok = all(spiders.values()) and labels == want
    verdict(6, ok, f"spiders n=3..8 irreducible={all(spiders.values())}; injected labels "
            + ", ".join(f"{k}->{sorted(v)}" for k, v in labels.items()))
    assert ok


# ---------------------------------------------------------------------------
# 7. recovery


def test_criterion_7_recovery(verdict):
    families = [(f"spider{n}", gen.spider(n)) for n in range(3, 9)] + gen.star_inserted_family()
    start = time.perf_counter()
    misses = []
    for name, skel in families:
        rng = random.Random(name)
        for _ in range(50):
            net = gen.random_conductances(skel, rng)
            if recover(skel, response(net)).as_list(net.n_edges) != net.conductances():
                misses.append(name)
    elapsed = time.perf_counter() - start
    ok = not misses and elapsed < 300
    verdict(7, ok, f"{len(families)} networks (6 spiders, {len(families) - 6} star insertions) x 50 conductance sets, "
            f"{len(misses)} mismatches, {elapsed:.1f} s")
    assert ok


# ---------------------------------------------------------------------------
# 8-10. z-sequences, Algorithm 1, motions


def test_criterion_8_z_sequence_example(verdict):
    z = str(z_sequence(gen.figure1_rnpd()))
    n_strands = len(medial_graph(gen.example1()).strands)
    ok = z == "1~+ 2~- 2~+ 1~-" and n_strands == 2
    verdict(8, ok, f"z = {z}, {n_strands} strands")
    assert ok


def _non_critical_family():
    # doubled boundary edges survive Algorithm 1, so the reduced cprn stays non-critical
    base = gen.parallel_pair()
    inner = next(i for i, f in enumerate(trace_faces(base)) if not f.is_outer)
    out = [gen.star_inserted(base, inner)]
    for n in range(3, 9):
        doubled = gen.add_boundary_edge(gen.add_boundary_edge(gen.four_periodic(n), 0), 0)
        out.append(gen.star_inserted(doubled, gen.center_face(doubled)))
    return out


def test_criterion_9_algorithm1(verdict):
    t0 = time.perf_counter()
    good = [necessary_condition(gen.spider(n)).ok for n in range(3, 9)]
    t1 = time.perf_counter()
    bad = [necessary_condition(net).ok for net in _non_critical_family()]
    t2 = time.perf_counter()
    ok = all(good) and not any(bad) and t1 - t0 < 1 and t2 - t1 < 1
    verdict(9, ok, f"spiders ok {sum(good)}/{len(good)} in {t1 - t0:.2f} s; "
            f"non-critical bases rejected {len(bad) - sum(bad)}/{len(bad)} in {t2 - t1:.2f} s")
    assert ok


def test_criterion_10_motion_invariance(verdict):
    details = []
    ok = True
    for n in (5, 7):
        net = gen.spider(n)
        z = z_sequence(net)
        rng = random.Random(n)
        changed = 0
        for _ in range(1000):
            options = [(k, s) for k in (MoveKind.Y_TO_DELTA, MoveKind.DELTA_TO_Y) for s in moves.find_sites(net, k)]
            kind, site = rng.choice(options)
            net = moves.apply_move(net, kind, site)
            changed += z_sequence(net) != z
        ok &= changed == 0
        details.append(f"spider{n}: 1000 steps, {changed} changes")
    verdict(10, ok, "; ".join(details))
    assert ok
