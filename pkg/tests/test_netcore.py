"""Embedded network structure, faces, edits and classification."""

from collections import Counter

import pytest

from disknet import generators as gen
from disknet.errors import (
    AttachNotOnFace,
    ConnectivityBroken,
    EmbeddingInconsistent,
    EmptyRestriction,
    FaceNotFound,
    NotACprn,
    SelfLoopContraction,
)
from disknet.moves import insert_loop
from disknet.netcore import (
    EdgeClass,
    EmbeddedNetwork,
    Kind,
    canonical_code,
    classify_edges,
    contract_edge,
    delete_edge,
    insert_star,
    is_valid,
    outer_face_index,
    restrict_strong,
    restrict_weak,
    trace_faces,
    validate,
)
from disknet.response import response

B, IN = Kind.BOUNDARY, Kind.INTERNAL


def test_example1_is_valid_with_expected_faces():
    net = gen.example1()
    validate(net)
    faces = trace_faces(net)
    assert len(faces) == net.n_edges - net.n_vertices + 2
    assert sum(f.is_outer for f in faces) == 1
    assert outer_face_index(net) is not None


def test_every_dart_lies_on_exactly_one_face():
    for net in (gen.example1(), gen.spider(5), gen.random_network(3, extras=3)):
        darts = [d for f in trace_faces(net) for d in f.darts]
        assert sorted(darts) == list(range(2 * net.n_edges))


def test_bad_rotation_rejected():
    with pytest.raises(EmbeddingInconsistent):
        EmbeddedNetwork([B, B], [(0, 1, 1)], [[0], [0]], [0, 1])


def test_non_disk_rotation_detected():
    # two parallel edges listed so the circle arcs cross them
    net = EmbeddedNetwork([B, B], [(0, 1, 1), (0, 1, 1)], [[0, 2], [1, 3]], [0, 1])
    assert not is_valid(net)


def test_delete_edge_keeps_connectivity_or_raises():
    net = gen.path_network([1, 1])
    with pytest.raises(ConnectivityBroken):
        delete_edge(net, 0)
    ex = gen.example1()
    assert delete_edge(ex, 5).n_edges == 5


def test_contract_edge():
    net = gen.path_network([2, 3])
    out = contract_edge(net, 0)
    assert out.n_vertices == 2 and out.n_edges == 1
    assert is_valid(out)
    with pytest.raises(SelfLoopContraction):
        contract_edge(insert_loop(gen.example1(), 2, 0, 1), 6)


def test_insert_star_builds_spider():
    for n in range(3, 9):
        base = gen.four_periodic(n)
        f = gen.center_face(base)
        corners = trace_faces(base)[f].vertices(base)
        star = insert_star(base, f, corners)
        assert star.degree(star.interior_boundary) == n
        assert canonical_code(star, with_conductance=False) == canonical_code(gen.spider(n), with_conductance=False)


def test_insert_star_errors():
    base = gen.four_periodic(4)
    with pytest.raises(FaceNotFound):
        insert_star(base, outer_face_index(base), [0])
    f = gen.center_face(base)
    with pytest.raises(AttachNotOnFace):
        insert_star(base, f, [base.boundary_order[0]])
    with pytest.raises(NotACprn):
        insert_star(gen.spider(4), 0, [0])


def test_restrictions():
    net = gen.spider(4)
    inner = set(range(4))
    strong = restrict_strong(net, inner)
    assert strong.n_vertices == 4
    weak = restrict_weak(net, inner)
    assert weak.n_edges >= strong.n_edges
    with pytest.raises(EmptyRestriction):
        restrict_strong(net, [])


@pytest.mark.parametrize(
    "n, classes",
    [
        (4, {EdgeClass.BOUNDARY_EDGE: 1, EdgeClass.BOUNDARY_SPIKE: 2, EdgeClass.PSEUDO_BOUNDARY_EDGE: 2}),
        (6, {EdgeClass.BOUNDARY_EDGE: 3, EdgeClass.BOUNDARY_SPIKE: 2, EdgeClass.BOUNDARY_PSEUDO_SPIKE: 2}),
        (8, {EdgeClass.BOUNDARY_EDGE: 3, EdgeClass.BOUNDARY_SPIKE: 4, EdgeClass.PSEUDO_BOUNDARY_EDGE: 2}),
    ],
)
def test_edge_classes_of_layered_polygons(n, classes):
    got = Counter(classify_edges(gen.four_periodic(n), pseudo=True).values())
    for k, v in classes.items():
        assert got[k] == v


def test_canonical_code_ignores_ids():
    a = gen.random_network(8, extras=2)
    b = gen.random_network(8, extras=2)
    assert canonical_code(a) == canonical_code(b)
    assert canonical_code(a) != canonical_code(a.with_conductances([c * 2 for c in a.conductances()]))


def test_with_conductances_keeps_response_shape():
    net = gen.spider(3)
    assert response(net.with_conductances([2] * net.n_edges)).matrix.rows == 4
