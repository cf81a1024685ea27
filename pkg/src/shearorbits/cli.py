"""Command-line interface.

Exit statuses: 0 success, 2 input error, 3 solver failure, 1 internal error.
Every subcommand is a thin adapter over the library; identical inputs produce
byte-identical stdout and files.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from . import forcing, markov, sweep
from .forcing import parse_element
from .kicked import MapParams, OrbitNotFound, orbit_search_grid, orbit_to_json
from .rationals import parse_pair
from .sweep import SweepConfig, load_config, parse_real


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shearorbits",
        description="Forcing queries, Markov cycle enumeration, periodic-orbit search and tongue sweeps",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    q = sub.add_parser("force-query", help="does element A force element B?")
    q.add_argument("a", help="orbit 'q/p' or pair 'q1/p1 v q2/p2'")
    q.add_argument("b", help="orbit 'q/p' or pair 'q1/p1 v q2/p2'")
    q.set_defaults(func=cmd_force_query)

    c = sub.add_parser("force-closure", help="finite forced set of a pair as JSON")
    c.add_argument("pair", help="'q1/p1 v q2/p2'")
    c.add_argument("--max-den", type=int, required=True, help="denominator bound")
    c.set_defaults(func=cmd_force_closure)

    t = sub.add_parser("force-tree", help="mediant subdivision tree of a pair")
    t.add_argument("pair")
    t.add_argument("--depth", type=int, required=True)
    t.set_defaults(func=cmd_force_tree)

    g = sub.add_parser("markov-graph", help="transition skeleton as a DOT file")
    g.add_argument("pair")
    g.add_argument("--out", required=True, help="output .dot path")
    g.set_defaults(func=cmd_markov_graph)

    o = sub.add_parser("markov-orbits", help="enumerate symbolic cycles with rotation numbers")
    o.add_argument("pair")
    o.add_argument("--max-period", type=int, required=True)
    o.set_defaults(func=cmd_markov_orbits)

    v = sub.add_parser("markov-verify", help="cross-check realized rotation numbers against the forcing closure")
    v.add_argument("pair")
    v.add_argument("--max-den", type=int, required=True)
    v.set_defaults(func=cmd_markov_verify)

    f = sub.add_parser("orbit-find", help="Newton search for a periodic orbit")
    f.add_argument("--k", required=True, help="kick strength (suffix 'pi' allowed)")
    f.add_argument("--omega", required=True, help="drift per step (suffix 'pi' allowed)")
    f.add_argument("--period", type=int, required=True)
    f.add_argument("--wj", type=int, required=True, help="J winding over one period")
    f.add_argument("--grid-n", type=int, default=12, help="seed lattice size (default 12)")
    f.add_argument("--tol", type=float, default=1e-12)
    f.add_argument("--all", action="store_true", help="print every distinct orbit found")
    f.set_defaults(func=cmd_orbit_find)

    s = sub.add_parser("sweep-run", help="scan the (k, omega) plane and emit CSV/SVG")
    s.add_argument("--config", help="flat key=value config file")
    s.add_argument("--csv", required=True, help="output CSV path")
    s.add_argument("--svg", help="optional output SVG path")
    s.add_argument("--k-min")
    s.add_argument("--k-max")
    s.add_argument("--omega-min")
    s.add_argument("--omega-max")
    s.add_argument("--nk", type=int)
    s.add_argument("--nomega", type=int)
    s.add_argument("--max-period", type=int)
    s.add_argument("--grid-n", type=int)
    s.add_argument("--tol", type=float)
    s.add_argument("--periods", help="comma-separated w_J/p targets, e.g. '0/1,1/2'")
    s.set_defaults(func=cmd_sweep_run)

    return parser


def cmd_force_query(args) -> int:
    a = parse_element(args.a)
    b = parse_element(args.b)
    print("true" if forcing.forces(a, b) else "false")
    return 0


def cmd_force_closure(args) -> int:
    pair = parse_pair(args.pair)
    result = forcing.forced_set(pair, args.max_den)
    print(json.dumps(forcing.forced_set_to_json(result), indent=2))
    return 0


def cmd_force_tree(args) -> int:
    pair = parse_pair(args.pair)
    tree = forcing.mediant_tree(pair, args.depth)
    for line in _tree_lines(tree, 0):
        print(line)
    return 0


def _tree_lines(node: forcing.MediantTree, level: int) -> list[str]:
    pad = "  " * level
    lines = [f"{pad}{node.pair}  mediant={node.mediant}"]
    if node.children is not None:
        for child in node.children:
            lines.extend(_tree_lines(child, level + 1))
    return lines


def cmd_markov_graph(args) -> int:
    pair = parse_pair(args.pair)
    graph = markov.build_skeleton_graph(pair)
    with open(args.out, "w", newline="") as fh:
        fh.write(markov.graph_to_dot(graph))
    return 0


def cmd_markov_orbits(args) -> int:
    pair = parse_pair(args.pair)
    graph = markov.build_skeleton_graph(pair)
    cycles = markov.enumerate_cycles(graph, args.max_period)
    payload = [
        {
            "indices": list(c.indices),
            "length": len(c),
            "rotation": str(markov.cycle_rotation_number(c, pair)),
        }
        for c in cycles
    ]
    print(json.dumps(payload, indent=2))
    return 0


def cmd_markov_verify(args) -> int:
    pair = parse_pair(args.pair)
    ok, missing = markov.verify_against_forcing(pair, args.max_den)
    if ok:
        print("PASS")
        return 0
    print("FAIL: unrealized rotation numbers " + ", ".join(str(r) for r in sorted(missing)))
    return 1


def cmd_orbit_find(args) -> int:
    params = MapParams(parse_real(args.k), parse_real(args.omega))
    orbits = orbit_search_grid(params, args.period, args.wj, args.grid_n, tol=args.tol)
    if not orbits:
        raise OrbitNotFound(
            "max_iterations",
            f"no period-{args.period} orbit with w_J={args.wj} found from a "
            f"{args.grid_n}x{args.grid_n} seed grid",
        )
    if args.all:
        print(json.dumps([orbit_to_json(o, params) for o in orbits], indent=2))
    else:
        print(json.dumps(orbit_to_json(orbits[0], params), indent=2))
    return 0


def cmd_sweep_run(args) -> int:
    config = load_config(args.config) if args.config else SweepConfig()
    overrides = {}
    for key in ("k_min", "k_max", "omega_min", "omega_max"):
        value = getattr(args, key)
        if value is not None:
            overrides[key] = parse_real(value)
    for key in ("nk", "nomega", "max_period", "grid_n", "tol"):
        value = getattr(args, key)
        if value is not None:
            overrides[key] = value
    if args.periods is not None:
        overrides["periods"] = sweep._parse_periods(args.periods)
    if overrides:
        config = replace(config, **overrides)
    records = sweep.run_sweep(config)
    sweep.emit_csv(records, args.csv)
    if args.svg:
        sweep.emit_svg(records, args.svg)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OrbitNotFound as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
