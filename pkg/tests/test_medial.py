"""Medial graphs, strands, regions, z-sequences and motions."""

import random
from collections import Counter
from fractions import Fraction as F

import pytest

from disknet import generators as gen
from disknet import moves
from disknet.errors import NotATriangle
from disknet.medial import (
    apply_motion,
    check_irreducible,
    detect_regions,
    endpoint_count_off_center,
    find_motion_path,
    intersection_counts,
    medial_dot,
    medial_graph,
    motion_sites,
    parse_zsequence,
    rotate_zsequence,
    standard_zsequence,
    z_sequence,
)
from disknet.netcore import canonical_code, trace_faces


def _nets():
    yield gen.example1()
    yield gen.figure1_rnpd()
    for n in range(3, 9):
        yield gen.four_periodic(n)
        yield gen.spider(n)
    for seed in range(10):
        yield gen.random_network(seed, 4, 4, extras=1, interior_boundary=seed % 2 == 0)


@pytest.mark.parametrize("net", list(_nets()))
def test_medial_degrees(net):
    mg = medial_graph(net)
    deg = Counter()
    for me in mg.edges:
        for nd in (me.a, me.b):
            deg[nd[:2] if nd[0] == "p" else nd] += 1
    for e in net.edges:
        assert deg[("p", 2 * e.id)] + deg[("p", 2 * e.id + 1)] == 4
    for t in range(1, 2 * len(net.boundary_order) + 1):
        assert deg[("t", t)] == 1
    assert len(mg.edges) == 2 * net.n_edges + len(net.boundary_order)


@pytest.mark.parametrize("net", list(_nets()))
def test_strands_cover_each_medial_edge_once(net):
    mg = medial_graph(net)
    seen = Counter(eid for s in mg.strands for eid, _ in s.steps)
    assert set(seen) == set(range(len(mg.edges)))
    assert set(seen.values()) == {1}
    # every network edge is crossed exactly twice in total
    crossed = Counter(e for s in mg.strands for e in s.edges_crossed)
    assert all(crossed[e.id] == 2 for e in net.edges)


def test_figure1_z_sequence():
    assert str(z_sequence(gen.figure1_rnpd())) == "1~+ 2~- 2~+ 1~-"


def test_example1_two_strands():
    assert len(medial_graph(gen.example1()).strands) == 2


def test_single_edge_z():
    z = z_sequence(gen.single_edge())
    assert z.numbers() == [1, 2, 1, 2]
    assert len(medial_graph(gen.single_edge()).strands) == 2


@pytest.mark.parametrize("n", range(3, 13))
def test_layered_polygon_structure(n):
    net = gen.four_periodic(n)
    mg = medial_graph(net)
    assert z_sequence(mg).equivalent(standard_zsequence(n))
    rep = detect_regions(mg)
    assert not rep.lenses and not rep.circles and not rep.loops
    assert set(intersection_counts(mg).values()) == {1}
    ell = gen.layers(n)
    expected = {3: 4 * ell - 2, 0: 4 * ell - 1, 1: 4 * ell, 2: 4 * ell + 1}[n % 4]
    center = mg.face_of[trace_faces(net)[gen.center_face(net)].darts[0]]
    assert [endpoint_count_off_center(mg, s, center) for s in mg.strands] == [expected] * n


@pytest.mark.parametrize("n", range(3, 9))
def test_spider_irreducible(n):
    rep = check_irreducible(gen.spider(n))
    assert rep.ok, rep.details


@pytest.mark.parametrize("n", [3, 5, 6])
def test_injection_labels(n):
    net = gen.spider(n)
    for e in net.edges:
        assert check_irreducible(moves.split_parallel(net, e.id, e.conductance / 2)).violations == ("c",)
        assert check_irreducible(moves.split_series(net, e.id, 2 * e.conductance)).violations == ("c",)
    for v in range(net.n_vertices):
        assert check_irreducible(moves.insert_pendant(net, v, 0, 1)).violations == ("b",)
        assert check_irreducible(moves.insert_loop(net, v, 0, 1)).violations == ("b",)


def test_hanging_parallel_pair_gives_circle():
    net = gen.spider(4)
    v = net.boundary_order[0]
    hung = moves.insert_pendant(net, v, 1, 1)
    e = hung.n_edges - 1
    out = moves.split_parallel(hung, e, F(1, 2))
    assert check_irreducible(out).violations == ("a", "c")


def test_delta_to_y_keeps_triangle_irreducible():
    tri = gen.four_periodic(3)
    assert check_irreducible(tri).ok
    star = moves.apply_move(tri, moves.MoveKind.DELTA_TO_Y, moves.find_sites(tri, "DeltaToY")[0])
    assert check_irreducible(star).ok


def test_zsequence_text_round_trip():
    z = z_sequence(gen.figure1_rnpd())
    assert parse_zsequence(str(z)) == z
    assert rotate_zsequence(z, 0) == z
    assert all(r.equivalent(z) for r in z.rotations())


def test_zsequence_start_rotation():
    net = gen.spider(5)
    z0 = z_sequence(net)
    for k in range(10):
        assert z_sequence(net, start=k) == rotate_zsequence(z0, k)


def test_motion_round_trip_and_invariance():
    rng = random.Random(1)
    for n in (4, 5, 6):
        net = gen.spider(n)
        z = z_sequence(net)
        for _ in range(8):
            site = rng.choice(motion_sites(net))
            nxt = apply_motion(net, site)
            assert z_sequence(nxt).equivalent(z)
            back = find_motion_path(nxt, net, max_depth=1)
            assert back is not None and len(back) == 1
            net = nxt


def test_motion_rejects_non_triangle():
    net = gen.four_periodic(4)
    with pytest.raises(NotATriangle):
        apply_motion(net, ("vertex", net.boundary_order[0]))
    with pytest.raises(NotATriangle):
        apply_motion(net, ("edge", 0))


def test_motion_path_between_delta_and_y():
    tri = gen.four_periodic(3)
    star = moves.apply_move(tri, "DeltaToY", moves.find_sites(tri, "DeltaToY")[0])
    path = find_motion_path(tri, star)
    assert len(path) == 1 and path[0][0] == "face"
    assert find_motion_path(star, star) == []
    assert canonical_code(apply_motion(tri, path[0]), False) == canonical_code(star, False)


def test_medial_dot_mentions_every_stub():
    dot = medial_dot(gen.example1())
    assert dot.startswith("graph medial {")
    for t in range(1, 5):
        assert f"t{t} " in dot
