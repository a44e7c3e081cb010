"""Local moves: pinned values, sites, response invariance and round trips."""

import random
from fractions import Fraction as F

import pytest

from disknet import generators as gen
from disknet import moves
from disknet.errors import NegativeConductance, SiteMismatch
from disknet.moves import (
    CONDITIONAL,
    PATTERN_MOVES,
    UNCONDITIONAL,
    ConjecturalMove,
    ConjectureViolation,
    MoveKind,
    MoveSite,
    apply_move,
    find_sites,
    pattern_instance,
    pattern_outputs,
    pattern_values,
    random_instance,
    random_walk,
    verify_kind,
)
from disknet.netcore import canonical_code, is_valid
from disknet.response import response


def _ones(labels):
    return {k: F(1) for k in labels}


def test_series_pinned():
    net = gen.path_network([2, 2])
    (site,) = find_sites(net, MoveKind.SERIES)
    out = apply_move(net, MoveKind.SERIES, site)
    assert out.n_edges == 1 and out.edges[0].conductance == 1


def test_parallel_pinned():
    net = gen.parallel_pair(2, 3)
    (site,) = find_sites(net, "Parallel")
    out = apply_move(net, "Parallel", site)
    assert [e.conductance for e in out.edges] == [5]


def test_delta_to_y_and_back_pinned():
    tri = gen.four_periodic(3)
    (site,) = find_sites(tri, MoveKind.DELTA_TO_Y)
    star = apply_move(tri, MoveKind.DELTA_TO_Y, site)
    assert sorted(e.conductance for e in star.edges) == [3, 3, 3]
    (ysite,) = find_sites(star, MoveKind.Y_TO_DELTA)
    back = apply_move(star, MoveKind.Y_TO_DELTA, ysite)
    assert [e.conductance for e in back.edges] == [1, 1, 1]
    assert canonical_code(back) == canonical_code(tri)


def test_antenna_absorb_pinned():
    out = pattern_outputs(MoveKind.ANTENNA_ABSORB, _ones("abcdefg"))
    assert out == {"A": F(1, 4), "B": F(1, 4), "C": F(1, 4), "D": F(5, 4), "E": F(5, 4), "F": F(5, 4)}


def test_triangle_pinned_both_ways():
    fwd = pattern_outputs(MoveKind.TRIANGLE_COND, dict(zip("abcdef", map(F, (2, 1, 2, 1, 1, 1)))))
    assert [fwd[k] for k in "ABCDEF"] == [1, 4, 1, 4, 4, 4]
    inv = pattern_outputs(MoveKind.TRIANGLE_COND_INVERSE, fwd)
    assert [inv[k] for k in "abcdef"] == [2, 1, 2, 1, 1, 1]


def test_triangle_all_ones_is_not_applicable():
    net = pattern_instance(MoveKind.TRIANGLE_COND, seed=0)
    net = net.with_conductances([1] * net.n_edges)
    site = find_sites(net, MoveKind.TRIANGLE_COND)[0]
    with pytest.raises(NegativeConductance, match="A=0"):
        apply_move(net, MoveKind.TRIANGLE_COND, site)


def test_site_counts():
    assert len(find_sites(gen.example1(), "Parallel")) == 1
    assert find_sites(gen.spider(3), "AntennaJump") == []
    assert len(find_sites(gen.path_network([1, 1]), "Series")) == 1
    assert find_sites(gen.four_periodic(5), "LoopRemoval") == []


def test_site_json_round_trip():
    for kind in UNCONDITIONAL + CONDITIONAL:
        net, site = random_instance(kind, 3)
        assert MoveSite.from_json(site.to_json()) == site


def test_bad_site_rejected():
    net = gen.four_periodic(5)
    with pytest.raises(SiteMismatch):
        apply_move(net, "YToDelta", MoveSite(vertices=(net.boundary_order[0],)))
    with pytest.raises(SiteMismatch):
        apply_move(net, "TriangleCond", MoveSite(vertices=(0, 1, 2), edges=(0, 1, 2)))


@pytest.mark.parametrize("kind", list(UNCONDITIONAL) + list(CONDITIONAL))
def test_response_preserved(kind):
    res = verify_kind(kind, 25, seed=11)
    assert res.ok, res.failures[:3]


@pytest.mark.parametrize("fwd,inv,n", [
    (MoveKind.TRIANGLE_COND, MoveKind.TRIANGLE_COND_INVERSE, "abcdef"),
    (MoveKind.PENTAGON_COND, MoveKind.PENTAGON_COND_INVERSE, "abcdefghijklm"),
])
def test_conditional_round_trip(fwd, inv, n):
    for seed in range(30):
        net = pattern_instance(fwd, seed)
        vals = pattern_values(net, fwd, find_sites(net, fwd)[0])
        out = pattern_outputs(fwd, vals)
        assert pattern_outputs(inv, out) == vals
        after = apply_move(net, fwd, find_sites(net, fwd)[0])
        back = apply_move(after, inv, find_sites(after, inv)[0])
        assert canonical_code(back) == canonical_code(net)


def test_hexagon_needs_opt_in():
    net, site = random_instance(MoveKind.HEXAGON_COND_CONJECTURAL, 0)
    with pytest.raises(ConjecturalMove):
        apply_move(net, MoveKind.HEXAGON_COND_CONJECTURAL, site)
    out = apply_move(net, MoveKind.HEXAGON_COND_CONJECTURAL, site, allow_conjectural=True)
    assert is_valid(out)


def test_hexagon_violation_reported(monkeypatch):
    net, site = random_instance(MoveKind.HEXAGON_COND_CONJECTURAL, 1)
    pm = PATTERN_MOVES[MoveKind.HEXAGON_COND_CONJECTURAL]
    real = pm.formula

    def skewed(v):
        out = real(v)
        out["A"] *= 2
        return out

    monkeypatch.setattr(pm, "formula", skewed)
    with pytest.raises(ConjectureViolation, match="inputs"):
        apply_move(net, MoveKind.HEXAGON_COND_CONJECTURAL, site, allow_conjectural=True)


def test_reverse_helpers_preserve_response():
    net = gen.random_conductances(gen.spider(4), random.Random(2))
    lam = response(net)
    e = net.edges[0]
    assert response(moves.split_series(net, 0, 3 * e.conductance)) == lam
    assert response(moves.split_parallel(net, 0, e.conductance / 3)) == lam
    assert response(moves.insert_pendant(net, 0, 0, 7)) == lam
    assert response(moves.insert_loop(net, 0, 0, 7)) == lam
    with pytest.raises(NegativeConductance):
        moves.split_series(net, 0, e.conductance)
    with pytest.raises(NegativeConductance):
        moves.split_parallel(net, 0, e.conductance)


def test_reverse_then_remove_is_identity():
    net = gen.four_periodic(5)
    code = canonical_code(net)
    for make, kind in ((lambda: moves.insert_loop(net, 3, 0, 2), "LoopRemoval"),
                       (lambda: moves.insert_pendant(net, 3, 1, 2), "PendantRemoval"),
                       (lambda: moves.split_series(net, 2, 2), "Series"),
                       (lambda: moves.split_parallel(net, 2, F(1, 2)), "Parallel")):
        grown = make()
        (site,) = find_sites(grown, kind)
        assert canonical_code(apply_move(grown, kind, site)) == code


def test_antenna_jump_keeps_conductances():
    for seed in range(10):
        net, site = random_instance(MoveKind.ANTENNA_JUMP, seed)
        out = apply_move(net, MoveKind.ANTENNA_JUMP, site)
        assert sorted(out.conductances()) == sorted(net.conductances())
        assert response(out) == response(net)


def test_random_walk():
    net = gen.example1()
    same, trace = random_walk(net, UNCONDITIONAL, 0)
    assert trace == [] and canonical_code(same) == canonical_code(net)
    out, trace = random_walk(net, UNCONDITIONAL, 5, seed=4)
    assert 1 <= len(trace) <= 5
    assert response(out) == response(net)
    assert all(isinstance(t.to_json()["kind"], str) for t in trace)
