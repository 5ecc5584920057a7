"""Command-line entry point.

Artifacts go to stdout or the files named by flags; logging goes to stderr.
Exit codes: 0 success, 1 unrealizable goals or a failed check, 2 usage or
input errors, 3 resource ceilings, 4 internal errors.
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional, Sequence, TextIO

from . import dfa as dfa_module
from . import formula as fm
from .alphabet import Alphabet
from .bench import FAMILIES, FamilyParams, generate, run_comparison, run_family
from .config import VAR_ORDERS, Limits
from .exceptions import MpsynthError, SpecError
from .formats import ENUM_CSV, JSON, NDJSON, REPORT_CSV, TEXT
from .harness import EnvPolicy, format_trace, simulate, verify_exhaustive
from .parser import parse_formula, parse_spec, read_spec
from .pipeline import Synthesizer
from .spec import Spec, format_goal_set
from .transducer import Transducer

LOG = logging.getLogger(__name__)

PROG = "mpsynth"


def _labels(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _common(suppress: bool = False) -> argparse.ArgumentParser:
    # subcommand copies leave flags given before the subcommand untouched
    def default(value: object) -> object:
        return argparse.SUPPRESS if suppress else value

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=default(0),
        help="log phases (-v) or fixed-point progress (-vv) to stderr",
    )
    common.add_argument(
        "--var-order",
        choices=VAR_ORDERS,
        default=default("blocked"),
        help="decision diagram variable order preset",
    )
    common.add_argument(
        "--node-ceiling",
        type=int,
        default=default(None),
        help="abort once an engine holds this many live nodes",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG, description="Multi-property LTLf synthesis", parents=[_common()]
    )
    common = _common(suppress=True)
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("maximal", parents=[common], help="print maximal realizable goal sets")
    p.add_argument("spec", help=".mpl specification")
    p.add_argument("--solver", choices=["symbolic", "explicit"], default="symbolic")
    p.add_argument("--dump-relation", metavar="PATH", help="write the explicit relation as JSON")

    p = sub.add_parser("synth", parents=[common], help="extract a winning strategy")
    p.add_argument("spec", help=".mpl specification")
    chosen = p.add_mutually_exclusive_group(required=True)
    chosen.add_argument("--goals", type=_labels, help="comma-separated goal labels")
    chosen.add_argument("--maximum", action="store_true", help="the largest realizable set")
    chosen.add_argument(
        "--all-maximal", action="store_true", help="one strategy per maximal set"
    )
    p.add_argument("--solver", choices=["symbolic", "explicit"], default="symbolic")
    p.add_argument("--out", metavar="PATH", help="write the strategy JSON here")
    p.add_argument("--dot", metavar="PATH", help="also write the strategy as DOT")

    p = sub.add_parser("enum", parents=[common], help="run the enumeration baseline")
    p.add_argument("spec", help=".mpl specification")
    p.add_argument("--mode", choices=["symbolic", "explicit"], default="symbolic")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timeout", type=float, default=None, help="seconds per subset")

    p = sub.add_parser("simulate", parents=[common], help="play a strategy")
    p.add_argument("spec", help=".mpl specification")
    p.add_argument("--strategy", required=True, metavar="PATH", help="strategy JSON")
    p.add_argument("--env", choices=["random", "exhaustive"], default="random")
    p.add_argument("--depth", type=int, default=100, help="round budget")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--goals", type=_labels, default=None, help="goals the strategy claims")

    p = sub.add_parser("bench", parents=[common], help="compare against enumeration")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--d", type=int, nargs="+", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--compare", action="store_true", help="also run the baseline")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timeout", type=float, default=None, help="seconds per instance")
    p.add_argument("--stats", metavar="PATH", help="write per-iteration NDJSON here")
    p.add_argument("--emit-spec", action="store_true", help="print the instance and stop")

    p = sub.add_parser("dfa", parents=[common], help="compile one formula")
    p.add_argument("--formula", required=True)
    p.add_argument("--inputs", type=_labels, default=None)
    p.add_argument("--outputs", type=_labels, default=None)
    p.add_argument("--dot", metavar="PATH", help="write DOT here instead of stdout")
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )
    logging.getLogger("mpsynth").setLevel(level)


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


def _load_strategy(path: str, spec: Spec) -> Transducer:
    with open(path, encoding="utf-8") as f:
        t = Transducer.from_doc(JSON.loads(f.read()))
    if t.alphabet != spec.alphabet:
        raise SpecError("strategy atoms do not match the specification")
    return t


def _cmd_maximal(args: argparse.Namespace, synth: Synthesizer, out: TextIO) -> int:
    spec = read_spec(args.spec)
    sets = synth.maximal(spec, args.solver)
    out.write(JSON.dumps([spec.labels_of(c) for c in sets]))
    if args.dump_relation:
        _write(args.dump_relation, JSON.dumps(synth.relation(spec, "maximal")))
    return 0


def _cmd_synth(args: argparse.Namespace, synth: Synthesizer, out: TextIO) -> int:
    spec = read_spec(args.spec)
    if args.all_maximal:
        results = synth.synthesize_all(spec, args.solver)
        docs = [{"goals": spec.labels_of(c), "strategy": t.to_doc()} for c, t in results]
        text = JSON.dumps(docs)
        dot = "".join(t.to_dot(f"strategy{i}") for i, (_, t) in enumerate(results))
    else:
        goals = "maximum" if args.maximum else args.goals
        c, t = synth.synthesize(spec, goals, args.solver)
        LOG.info("strategy for %s", format_goal_set(spec.labels_of(c)))
        text = JSON.dumps(t.to_doc())
        dot = t.to_dot()
    if args.out:
        _write(args.out, text)
    else:
        out.write(text)
    if args.dot:
        _write(args.dot, dot)
    return 0


def _cmd_enum(args: argparse.Namespace, synth: Synthesizer, out: TextIO) -> int:
    spec = read_spec(args.spec)
    report = synth.enumerate(spec, args.mode, args.workers, args.timeout)
    out.write(ENUM_CSV.dumps(report.rows))
    return 0


def _cmd_simulate(args: argparse.Namespace, synth: Synthesizer, out: TextIO) -> int:
    spec = read_spec(args.spec)
    t = _load_strategy(args.strategy, spec)
    required = spec.mask_of(args.goals) if args.goals is not None else None
    if args.env == "exhaustive":
        verdict = verify_exhaustive(spec, t, required or 0, args.depth, synth.limits)
        if verdict is True:
            out.write(f"satisfied: every input sequence up to depth {args.depth}\n")
            return 0
        shown = " ".join(format_goal_set(sorted(x)) for x in verdict)
        out.write(f"counterexample: {shown}\n")
        return 1
    result = simulate(spec, t, EnvPolicy.random(args.seed), args.depth, required)
    out.write(TEXT.dumps(format_trace(result)))
    return 0 if result.verdict in ("satisfied", "vacuous") else 1


def _cmd_bench(args: argparse.Namespace, synth: Synthesizer, out: TextIO) -> int:
    grid = [FamilyParams(args.family, n, d, args.seed) for n in args.n for d in args.d]
    if args.emit_spec:
        for p in grid:
            out.write(generate(p))
        return 0
    if args.workers > 1:
        rows, stats = run_family(grid, args.workers, args.timeout, args.compare)
    else:
        rows, stats = [], []
        for p in grid:
            spec = parse_spec(generate(p))

            def record(s: object, p: FamilyParams = p) -> None:
                stats.append({"family": p.family, "n": p.n, "d": p.d, "seed": p.seed, **s})  # type: ignore[dict-item]

            result = run_comparison(
                spec,
                args.timeout,
                family=p.family,
                d=p.d,
                compare=args.compare,
                synthesizer=synth,
                on_iteration=record,
            )
            rows.append(result.row)
    out.write(REPORT_CSV.dumps(rows))
    if args.stats:
        _write(args.stats, NDJSON.dumps(stats))
    return 0


def _cmd_dfa(args: argparse.Namespace, synth: Synthesizer, out: TextIO) -> int:
    f = parse_formula(args.formula)
    used = sorted(fm.atoms(f))
    inputs = args.inputs if args.inputs is not None else []
    outputs = args.outputs if args.outputs is not None else [a for a in used if a not in inputs]
    alphabet = Alphabet(inputs, outputs)
    for name in used:
        if name not in alphabet:
            raise SpecError(f"undeclared atom: {name}")
    d = dfa_module.build_dfa(f, alphabet.atoms, synth.limits)
    dot = dfa_module.to_dot(d)
    if args.dot:
        _write(args.dot, dot)
    else:
        out.write(dot)
    LOG.info("%s states, %s accepting", d.n_states, len(d.finals))
    return 0


_COMMANDS = {
    "maximal": _cmd_maximal,
    "synth": _cmd_synth,
    "enum": _cmd_enum,
    "simulate": _cmd_simulate,
    "bench": _cmd_bench,
    "dfa": _cmd_dfa,
}


def run_cli(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    """Run one command and return its exit code.

    :param argv: arguments without the program name, ``sys.argv[1:]`` by default
    :param out: stream for artifacts, ``sys.stdout`` by default
    """
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    _configure_logging(args.verbose)
    limits = Limits.from_env()
    if args.node_ceiling is not None:
        limits = limits.replace(node_ceiling=args.node_ceiling)
    synth = Synthesizer(limits, args.var_order)
    try:
        return _COMMANDS[args.command](args, synth, out)
    except MpsynthError as e:
        print(f"{PROG}: {e.message}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"{PROG}: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli())
