"""Command-line front end: solve, simulate, compile, verify, generate, fuzz.

Exit codes: 0 success or full agreement, 1 usage error, 2 malformed or
inconsistent input, 3 a search or oracle hit its state limit, 4 a
verification step found a disagreement.  Artifacts go to stdout,
diagnostics to stderr.  With a fixed seed every invocation is
byte-for-byte reproducible.
"""

from __future__ import annotations

import argparse
import re
import sys

from .cnf import CnfError, OracleLimit as CnfOracleLimit, gen_cnf, parse_dimacs, serialize_dimacs
from .dungeon import DungeonError, initial_state
from .dungeon_text import (
    ParseError,
    parse_dungeon,
    parse_plan,
    parse_region,
    render_state,
    serialize_dungeon,
    serialize_plan,
)
from .engine import StepRejected, is_goal, step
from .gadgets import GADGET_TYPES, parse_network
from .gridgraph import (
    GridGraphError,
    OracleLimit as GraphOracleLimit,
    gen_connected_grid_graph,
    gen_grid_graph,
    parse_grid_graph,
    serialize_grid_graph,
)
from .randgen import MECHANIC_SETS, gen_dungeon, gen_network
from .reductions import (
    REDUCTION_KINDS,
    CompileError,
    compile_hamcycle_floor,
    compile_hampath_crystal,
    compile_hampath_hookshot,
    compile_network,
    compile_sat_kodongo,
    verify_reduction,
)
from .regions import RegionLimitExceeded, verify_realization
from .solvers import (
    LIMIT,
    solve_bruteforce,
    solve_crystal,
    solve_hookshot,
    solve_switchhook,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BAD_INPUT = 2
EXIT_LIMIT = 3
EXIT_DISAGREE = 4

_POLY_SOLVERS = {
    "hookshot": solve_hookshot,
    "switchhook": solve_switchhook,
    "crystal": solve_crystal,
}

# auto picks the structured solver whose mechanic set matches the file.
_AUTO_BY_MECHANICS = {
    frozenset(names): _POLY_SOLVERS[family]
    for family, names in MECHANIC_SETS.items()
}


def _kebab(name: str) -> str:
    return re.sub(
        r"(?<=[a-zA-Z])(?=[A-Z0-9])|(?<=[0-9])(?=[a-zA-Z])", "-", name
    ).lower()


GADGET_KEBAB = {_kebab(name): name for name in GADGET_TYPES}


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; the contract reserves 1 for that."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, "%s: error: %s\n" % (self.prog, message))


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _cmd_solve(args) -> int:
    spec = parse_dungeon(_read_text(args.dungeon))
    name = args.solver
    if name == "auto":
        solver = _AUTO_BY_MECHANICS.get(spec.config.mechanics)
        if solver is None:
            name = "brute"
    else:
        solver = _POLY_SOLVERS.get(name)
    if name == "brute":
        verdict = solve_bruteforce(spec, max_states=args.max_states)
    else:
        verdict = solver(spec)
    print(verdict.status)
    if verdict.plan is not None:
        _emit(serialize_plan(verdict.plan), args.plan_out)
    return EXIT_LIMIT if verdict.status == LIMIT else EXIT_OK


def _cmd_simulate(args) -> int:
    spec = parse_dungeon(_read_text(args.dungeon))
    plan = parse_plan(_read_text(args.plan))
    state = initial_state(spec)
    if args.trace:
        print(render_state(spec, state))
    outcome = None
    for action in plan:
        try:
            state = step(spec, state, action)
        except StepRejected as exc:
            print("rejected %s: %s" % (action.describe(), exc), file=sys.stderr)
            outcome = "Stuck"
            break
        if args.trace:
            print()
            print("# " + action.describe())
            print(render_state(spec, state))
        if not state.alive:
            outcome = "Died"
            break
        if is_goal(spec, state):
            outcome = "Reached"
            break
    if outcome is None:
        outcome = "Reached" if is_goal(spec, state) else "Stuck"
    print(outcome)
    return EXIT_OK


_COMPILE_KINDS = (
    "hampath-hookshot",
    "hampath-crystal",
    "hamcycle-floor-block",
    "hamcycle-floor-color",
    "sat-kodongo",
    "network",
)


def _cmd_compile(args) -> int:
    text = _read_text(args.instance)
    kind = args.kind
    if kind == "hampath-hookshot":
        spec = compile_hampath_hookshot(parse_grid_graph(text))
    elif kind == "hampath-crystal":
        spec = compile_hampath_crystal(parse_grid_graph(text))
    elif kind.startswith("hamcycle-floor-"):
        spec = compile_hamcycle_floor(parse_grid_graph(text), kind.rsplit("-", 1)[1])
    elif kind == "sat-kodongo":
        spec = compile_sat_kodongo(parse_dimacs(text))
    else:
        if args.mechanic is None:
            print("compile network requires --mechanic", file=sys.stderr)
            return EXIT_USAGE
        spec = compile_network(parse_network(text), args.mechanic)
    _emit(serialize_dungeon(spec), args.out)
    return EXIT_OK


def _cmd_verify_gadget(args) -> int:
    region = parse_region(_read_text(args.region))
    gadget = GADGET_TYPES[GADGET_KEBAB[args.target]]
    result = verify_realization(region, gadget)
    if result.verified:
        print("Verified")
        for state in sorted(result.assignment):
            print("state %s -> class %s" % (state, result.assignment[state]))
        return EXIT_OK
    print("Mismatch: %s" % result.reason)
    if result.missing is not None:
        for s, p, q, s2 in result.missing:
            print("missing transition: %s %s->%s %s" % (s, p, q, s2))
    if result.offending is not None:
        print("offending run: " + " ".join(str(x) for x in result.offending))
    return EXIT_DISAGREE


def _seed_range(text: str) -> tuple[int, int]:
    """argparse type for --seeds; bad ranges become usage errors."""
    match = re.fullmatch(r"(\d+)\.\.(\d+)", text)
    if match is None:
        raise argparse.ArgumentTypeError("seed range must look like A..B")
    lo, hi = int(match.group(1)), int(match.group(2))
    if hi < lo:
        raise argparse.ArgumentTypeError("empty seed range")
    return lo, hi


def _gen_reduction_instance(kind: str, seed: int, size: int):
    if kind in ("hampath-hookshot", "hampath-crystal"):
        return gen_grid_graph(seed, size)
    if kind in ("hamcycle-floor-block", "hamcycle-floor-color"):
        return gen_connected_grid_graph(seed, size)
    if kind == "sat-kodongo":
        return gen_cnf(seed, size, 2 * size)
    mechanic = kind.split("-", 1)[1]
    return gen_network(seed, mechanic, size)


def _cmd_verify_reduction(args) -> int:
    lo, hi = args.seeds
    agreed = 0
    total = 0
    hit_limit = False
    disagreed = False
    for seed in range(lo, hi + 1):
        instance = _gen_reduction_instance(args.kind, seed, args.size)
        report = verify_reduction(args.kind, instance, max_states=args.max_states)
        print(report.line)
        total += 1
        if report.agree:
            agreed += 1
        elif report.dungeon_verdict.status == LIMIT:
            hit_limit = True
        else:
            disagreed = True
    print("%d/%d agree" % (agreed, total))
    if disagreed:
        return EXIT_DISAGREE
    if hit_limit:
        return EXIT_LIMIT
    return EXIT_OK


def _cmd_gen(args) -> int:
    if args.what == "grid":
        text = serialize_grid_graph(gen_grid_graph(args.seed, args.size))
    else:
        text = serialize_dimacs(gen_cnf(args.seed, args.size, 2 * args.size))
    _emit(text, args.out)
    return EXIT_OK


def _cmd_fuzz(args) -> int:
    poly = _POLY_SOLVERS[args.mechanics]
    hit_limit = False
    disagreed = False
    for index in range(args.count):
        seed = args.seed + index
        spec = gen_dungeon(seed, args.mechanics, args.size)
        pv = poly(spec)
        bv = solve_bruteforce(spec, max_states=args.max_states)
        agree = pv.status == bv.status
        print(
            "instance %d poly=%s brute=%s agree=%s"
            % (seed, pv.status, bv.status, "true" if agree else "false")
        )
        if not agree:
            if LIMIT in (pv.status, bv.status):
                hit_limit = True
            else:
                disagreed = True
    if disagreed:
        return EXIT_DISAGREE
    if hit_limit:
        return EXIT_LIMIT
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zcl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="decide a dungeon and emit a plan")
    p.add_argument("dungeon", help="dungeon file")
    p.add_argument(
        "--solver",
        choices=("auto", "brute", "hookshot", "switchhook", "crystal"),
        default="auto",
    )
    p.add_argument("--max-states", type=int, default=None)
    p.add_argument("--plan-out", default=None, help="write the plan here instead of stdout")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("simulate", help="replay a plan and report the outcome")
    p.add_argument("dungeon")
    p.add_argument("plan")
    p.add_argument("--trace", action="store_true", help="print the grid after each action")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("compile", help="compile a source instance into a dungeon")
    p.add_argument("kind", choices=_COMPILE_KINDS)
    p.add_argument("instance", help="grid-graph, DIMACS cnf, or network file")
    p.add_argument("--mechanic", default=None, help="gadget realization for network compiles")
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=_cmd_compile)

    p = sub.add_parser("verify-gadget", help="check a room against a gadget table")
    p.add_argument("region", help="region file with port declarations")
    p.add_argument("--target", required=True, choices=sorted(GADGET_KEBAB))
    p.set_defaults(func=_cmd_verify_gadget)

    p = sub.add_parser("verify-reduction", help="sweep seeded instances through a compiler")
    p.add_argument("kind", choices=REDUCTION_KINDS)
    p.add_argument("--seeds", required=True, type=_seed_range, help="inclusive range A..B")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--max-states", type=int, default=None)
    p.set_defaults(func=_cmd_verify_reduction)

    p = sub.add_parser("gen", help="emit a seeded source instance")
    p.add_argument("what", choices=("grid", "cnf"))
    p.add_argument("--seed", type=int, required=True)
    p.add_argument(
        "--size",
        type=int,
        required=True,
        help="grid: vertex count; cnf: variable count (clauses = 2x)",
    )
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("fuzz", help="differential poly-vs-brute sweep on random dungeons")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--size", type=int, default=8)
    p.add_argument("--mechanics", required=True, choices=sorted(MECHANIC_SETS))
    p.add_argument("--max-states", type=int, default=None)
    p.set_defaults(func=_cmd_fuzz)

    return parser


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (RegionLimitExceeded, GraphOracleLimit, CnfOracleLimit) as exc:
        print("limit exceeded: %s" % exc, file=sys.stderr)
        return EXIT_LIMIT
    except (ParseError, CnfError, GridGraphError, CompileError, DungeonError,
            ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_BAD_INPUT
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_BAD_INPUT


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
