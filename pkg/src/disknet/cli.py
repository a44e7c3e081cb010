"""Command-line interface: ``disknet <command> ...``.

Exit codes: 0 on success, 1 on a domain error, 2 on a usage error.
Network arguments accept a path or ``-`` (the default) for stdin.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from . import connections as conn
from . import generators as gen
from . import medial, moves, recovery
from .document import (
    dumps_network,
    loads_network,
    matrix_from_json,
    matrix_to_json,
    network_dot,
)
from .errors import NetworkError, ParseError
from .ratlinalg import format_fraction, to_fraction
from .response import response, solve_dirichlet

DEFAULT_SEED = 0
FAMILIES = ("example1", "fig1-rnpd", "four-periodic", "spider", "random", "single-edge", "parallel-pair", "path")


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _net(path: str):
    return loads_network(_read(path))


def _emit(obj, pretty: bool = False):
    if isinstance(obj, str):
        sys.stdout.write(obj if obj.endswith("\n") else obj + "\n")
    else:
        sys.stdout.write(json.dumps(obj, indent=2 if pretty else None) + "\n")


def _ints(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated vertex ids, got {text!r}") from None


# ---------------------------------------------------------------------------
# commands


def cmd_generate(a):
    rng = random.Random(a.seed)
    fam = a.family
    needs_n = fam in ("four-periodic", "spider")
    if needs_n and a.n is None:
        raise UsageError(f"{fam} needs n")
    if fam == "example1":
        net = gen.example1()
    elif fam == "fig1-rnpd":
        net = gen.figure1_rnpd()
    elif fam == "four-periodic":
        net = gen.four_periodic(a.n)
    elif fam == "spider":
        net = gen.spider(a.n)
    elif fam == "random":
        net = gen.random_network(
            a.seed,
            n_boundary=a.n or 4,
            n_interior=a.interior,
            extras=a.extras,
            interior_boundary=a.with_b,
        )
    elif fam == "single-edge":
        net = gen.single_edge()
    elif fam == "parallel-pair":
        net = gen.parallel_pair()
    else:
        net = gen.path_network([1] * (a.n or 2))
    if a.conductance == "ones":
        net = gen.ones(net)
    elif a.conductance == "random":
        net = gen.random_conductances(net, rng)
    return dumps_network(net)


def cmd_respond(a):
    net = _net(a.network)
    lam = response(net)
    return {
        "boundary": [net.vertex_labels[v] for v in lam.boundary],
        "matrix": matrix_to_json(lam.matrix),
    }


def cmd_solve(a):
    net = _net(a.network)
    try:
        pots = [to_fraction(x) for x in a.potentials.split(",")]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad potentials {a.potentials!r}") from None
    sol = solve_dirichlet(net, pots)
    return {
        "potentials": [format_fraction(x) for x in sol.potentials],
        "currents": [format_fraction(x) for x in sol.currents],
        "boundary_currents": [format_fraction(x) for x in sol.boundary_currents],
    }


def cmd_move(a):
    net = _net(a.network)
    if a.kind == "list":
        return {k.value: [s.to_json() for s in moves.find_sites(net, k)] for k in moves.MoveKind}
    kind = moves.MoveKind(a.kind)
    if a.walk is not None:
        out, trace = moves.random_walk(net, [kind], a.walk, a.seed)
        return {"network": json.loads(dumps_network(out)), "trace": [t.to_json() for t in trace]}
    sites = moves.find_sites(net, kind)
    if a.list_sites:
        return [s.to_json() for s in sites]
    if not 0 <= a.site < len(sites):
        raise NetworkError(f"{kind.value} has {len(sites)} site(s); --site {a.site} is out of range")
    out = moves.apply_move(net, kind, sites[a.site], allow_conjectural=a.conjectural)
    return dumps_network(out)


def cmd_medial(a):
    net = _net(a.network)
    mg = medial.medial_graph(net)
    if a.dot:
        return medial.medial_dot(mg)
    return {
        "stubs": mg.n_stubs,
        "strands": [
            {"id": s.id + 1, "start": s.start, "end": s.end, "closed": s.closed, "crossings": s.edges_crossed}
            for s in mg.strands
        ],
        "intersections": {f"{i + 1},{j + 1}": c for (i, j), c in sorted(medial.intersection_counts(mg).items())},
    }


def cmd_zseq(a):
    net = _net(a.network)
    return str(medial.z_sequence(net, a.start))


def cmd_check_irreducible(a):
    rep = medial.check_irreducible(_net(a.network))
    return {"ok": rep.ok, "violations": list(rep.violations), "details": list(rep.details)}


def cmd_connections(a):
    net = _net(a.network)
    P, Q = _ints(a.P), _ints(a.Q)
    if P or Q:
        c = conn.exists_connection(net, P, Q)
        if c is None:
            return {"P": P, "Q": Q, "connected": False}
        return {"P": P, "Q": Q, "connected": True, "paths": [list(p) for p in c.paths]}
    found = conn.connections(net, exclude_b=not a.with_b, max_k=a.max_k)
    return [{"P": list(c.P), "Q": list(c.Q), "paths": [list(p) for p in c.paths]} for c in found]


def cmd_critical(a):
    rep = conn.is_critical_cprn(_net(a.network), a.max_k)
    return {
        "critical": rep.critical,
        "failing": [[e, mode] for e, mode in rep.failing],
        "delete_witness": {str(e): [list(p), list(q)] for e, (p, q) in sorted(rep.delete_witness.items())},
        "contract_witness": {str(e): [list(p), list(q)] for e, (p, q) in sorted(rep.contract_witness.items())},
    }


def cmd_recover(a):
    net = _net(a.skeleton)
    try:
        lam = matrix_from_json(json.loads(_read(a.response)))
    except json.JSONDecodeError as err:
        raise ParseError(err.msg, err.lineno, err.colno) from None
    return recovery.recover(net, lam, a.max_k).to_json()


def cmd_algorithm1(a):
    net = _net(a.network)
    if a.check:
        return recovery.necessary_condition(net, a.max_k).to_json()
    res = recovery.algorithm1(net)
    return {
        "network": json.loads(dumps_network(res.network)),
        "removed": [str(x) for x in res.removed],
        "placed": [str(x) for x in res.placed],
        "dropped": [str(x) for x in res.dropped],
    }


def _verify_one(args):
    kind, trials, seed = args
    return moves.verify_kind(kind, trials, seed)


def cmd_verify_moves(a):
    if a.kind == "all":
        kinds = list(moves.MoveKind)
    else:
        kinds = [moves.MoveKind(k) for k in a.kind.split(",")]
    jobs = [(k, a.trials, a.seed) for k in kinds]
    if a.jobs > 1:
        with ProcessPoolExecutor(a.jobs) as pool:
            results = list(pool.map(_verify_one, jobs))
    else:
        results = [_verify_one(j) for j in jobs]
    a._exit = 0 if all(r.ok for r in results) else 1
    return {"seed": a.seed, "results": [r.to_json() for r in results]}


def cmd_export_dot(a):
    net = _net(a.network)
    return medial.medial_dot(net) if a.medial else network_dot(net)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="disknet", description="Resistor networks in a punctured disk.")
    p.add_argument("--version", action="version", version=f"disknet {__version__}")
    p.add_argument("--pretty", action="store_true", help="indent JSON output")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def net_cmd(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("network", nargs="?", default="-", help="network JSON file, - for stdin")
        sp.set_defaults(fn=fn)
        return sp

    g = sub.add_parser("generate", help="build a network from a family")
    g.add_argument("family", choices=FAMILIES)
    g.add_argument("n", nargs="?", type=int, help="size parameter (four-periodic, spider; boundary count for random)")
    g.add_argument("--conductance", choices=("keep", "ones", "random"), default="keep")
    g.add_argument("--seed", type=int, default=DEFAULT_SEED)
    g.add_argument("--interior", type=int, default=4, help="interior points for random")
    g.add_argument("--extras", type=int, default=0, help="parallel/series/pendant/loop extras for random")
    g.add_argument("--with-b", action="store_true", help="random: make one internal vertex the interior boundary")
    g.set_defaults(fn=cmd_generate)

    net_cmd("respond", cmd_respond, "response matrix")

    s = net_cmd("solve", cmd_solve, "Dirichlet problem for given boundary potentials")
    s.add_argument("--potentials", required=True, help="comma-separated, in boundary order (e.g. 1,0 or 1/2,0)")

    m = net_cmd("move", cmd_move, "apply a local move")
    m.add_argument("--kind", required=True, choices=["list"] + [k.value for k in moves.MoveKind])
    m.add_argument("--site", type=int, default=0, help="index into the site list")
    m.add_argument("--list-sites", action="store_true")
    m.add_argument("--conjectural", action="store_true", help="allow the hexagon move")
    m.add_argument("--walk", type=int, help="random walk of this many steps instead of one move")
    m.add_argument("--seed", type=int, default=DEFAULT_SEED)

    md = net_cmd("medial", cmd_medial, "medial graph strands")
    md.add_argument("--dot", action="store_true")

    z = net_cmd("zseq", cmd_zseq, "z-sequence")
    z.add_argument("--start", type=int, default=0, help="rotate the starting boundary vertex")

    net_cmd("check-irreducible", cmd_check_irreducible, "check the three medial conditions")

    c = net_cmd("connections", cmd_connections, "test one connection or list all")
    c.add_argument("--P", help="comma-separated vertex ids")
    c.add_argument("--Q", help="comma-separated vertex ids")
    c.add_argument("--with-b", action="store_true", help="let the interior boundary vertex take part")
    c.add_argument("--max-k", type=int)

    cr = net_cmd("critical", cmd_critical, "criticality of a cprn")
    cr.add_argument("--max-k", type=int)

    r = sub.add_parser("recover", help="recover conductances from a response matrix")
    r.add_argument("skeleton", help="network JSON (conductances ignored)")
    r.add_argument("response", help="response JSON: rows of fractions or the respond output")
    r.add_argument("--max-k", type=int)
    r.set_defaults(fn=cmd_recover)

    a1 = net_cmd("algorithm1", cmd_algorithm1, "reduce an rnpd to a cprn")
    a1.add_argument("--check", action="store_true", help="also test the result for criticality")
    a1.add_argument("--max-k", type=int)

    v = sub.add_parser("verify-moves", help="check response preservation on random instances")
    v.add_argument("--kind", default="all", help="all, or comma-separated move kinds")
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.add_argument("--jobs", type=int, default=1)
    v.set_defaults(fn=cmd_verify_moves)

    d = net_cmd("export-dot", cmd_export_dot, "DOT drawing of the network or its medial graph")
    d.add_argument("--medial", action="store_true")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args._exit = 0
    try:
        out = args.fn(args)
    except UsageError as err:
        parser.print_usage(sys.stderr)
        print(f"disknet: error: {err}", file=sys.stderr)
        return 2
    except ParseError as err:
        print(f"disknet: parse error: {err}", file=sys.stderr)
        return 1
    except (NetworkError, ValueError) as err:
        print(f"disknet: {type(err).__name__}: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"disknet: {err}", file=sys.stderr)
        return 1
    _emit(out, args.pretty)
    return args._exit


if __name__ == "__main__":
    sys.exit(main())
