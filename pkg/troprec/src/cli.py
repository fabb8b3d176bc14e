"""Command line: ``troprec {analyze,detect,entropy,check,witness} VECTOR ...``.

Exit codes: 0 success (and AllPeriodic for ``detect``), 1 domain error,
2 malformed input, 3 NonPeriodicExists, 4 window enumeration hit --max-states.
"""
import argparse
import json
import logging
import os
import sys
import typing as t

from troprec import __version__
from troprec.src.core import CoefficientVector, classify_regular, newton_polygon, parse_rational, parse_vector, \
    progression_difference, format_rational
from troprec.src.detector import RecurrenceDetector
from troprec.src.entropy import Mode, entropy_report
from troprec.src.errors import InfiniteCoefficient, TropRecError
from troprec.src.recurrence import Family, check_word, generate_witness, parse_period, parse_word, verify_periodic


logger = logging.getLogger(__name__)

EXIT_NON_PERIODIC = 3
DEFAULT_MAX_STATES = 2_000_000


def _emit(payload: t.Dict[str, t.Any], as_json: bool, lines: t.Iterable[str]) -> None:
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _progression_text(indices: t.Sequence[int]) -> str:
    difference = progression_difference(indices)
    return f"progression d={difference}" if difference is not None else "not an arithmetic progression"


def cmd_analyze(args: argparse.Namespace) -> int:
    a = parse_vector(args.vector)
    polygon = newton_polygon(a)
    regularity = classify_regular(a, polygon)
    payload = {"schema_version": 1, **a.to_dict(), **polygon.to_dict(), "regularity": regularity.to_dict(),
               "zero_set_progression": progression_difference(a.zero_set)}
    lines = [f"vector: {a}",
             f"n={a.n} M={format_rational(a.M)}",
             f"support: {list(a.support)}",
             f"zero set: {list(a.zero_set)} ({_progression_text(a.zero_set)})",
             f"hull vertices: {[(i, format_rational(v)) for i, v in polygon.hull_vertices]}"]
    for index, edge in enumerate(polygon.edges):
        lines.append(f"edge {index}: [{edge.start[0]},{edge.end[0]}] slope {format_rational(edge.slope)} "
                     f"on-edge {list(edge.on_edge)} ({_progression_text(edge.on_edge)})")
    lines.append("regular" if regularity.is_regular else "not regular")
    _emit(payload, args.json, lines)
    return 0


def cmd_detect(args: argparse.Namespace) -> int:
    a = parse_vector(args.vector)
    detector = RecurrenceDetector(a, edge_index=args.edge, max_states=args.max_states,
                                  workers=args.threads, progress=args.progress)
    verdict = detector.run()
    if args.dot:
        detector.export_dot(args.dot)
    lines = [f"vector: {a} (normalized {detector.normalized})",
             f"verdict: {verdict.verdict.value}",
             f"stable periodic only: {verdict.stable_periodic_only}",
             "stats: " + ", ".join(f"{k}={v}" for k, v in sorted(verdict.stats.items()))]
    if verdict.all_periodic:
        lines += [f"periodic: {p.render()}" for p in detector.periodic_solutions()]
    else:
        lines.append(f"witness: {verdict.witness.kind.value}")
        lines.append(f"word: {detector.witness_word()}")
    _emit(detector.to_dict(), args.json, lines)
    return 0 if verdict.all_periodic else EXIT_NON_PERIODIC


def cmd_entropy(args: argparse.Namespace) -> int:
    a = parse_vector(args.vector)
    mode = Mode.minimal if args.minimal else Mode.satisfy
    table = entropy_report(a, args.s_max, mode, progress=args.progress)
    name = "m" if mode is Mode.minimal else "d"
    lines = [f"{name}_{int(row.s)} = {int(row.dim)}  ratio {format_rational(row.ratio)}"
             for row in table.rows.itertuples(index=False)]
    lines.append(f"upper bound: {format_rational(table.h_upper)}")
    if table.h_lower is not None:
        lines.append(f"lower bound: {format_rational(table.h_lower)} ({table.family.description})")
    _emit(table.to_dict(), args.json, lines)
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    a = parse_vector(args.vector)
    if args.period:
        report = verify_periodic(a, parse_period(args.period)).to_dict()
    else:
        report = check_word(a, parse_word(args.word))
    lines = [f"satisfies: {report['satisfies']}", f"minimal: {report['minimal']}"]
    if report.get("failing_windows"):
        lines.append(f"failing windows: {report['failing_windows']}")
    if report.get("non_minimal_positions"):
        lines.append(f"non-minimal positions: {report['non_minimal_positions']}")
    _emit({"schema_version": 1, **report}, args.json, lines)
    return 0


def _witness_params(a: CoefficientVector, family: Family, args: argparse.Namespace) -> t.Dict[str, t.Any]:
    params: t.Dict[str, t.Any] = {}
    if args.range:
        params["span"] = tuple(args.range)
    if family is Family.prop1:
        params["shifts"] = args.shifts or [0]
        params["bumps"] = args.bumps or [1]
    elif family is Family.thm2 and args.q is not None:
        params["q"] = args.q
    elif family is Family.prop3 and args.e is not None:
        params["e"] = args.e
    elif family is Family.polygon:
        params["edge_lengths"] = args.lengths or [edge.length for edge in newton_polygon(a).edges]
    return params


def cmd_witness(args: argparse.Namespace) -> int:
    a = parse_vector(args.vector)
    family = Family.handle(args.family)
    word = generate_witness(a, family, **_witness_params(a, family, args))
    report = check_word(a, word)
    lines = [f"family: {family.value}",
             f"range: [{word.offset}, {word.offset + word.N}]",
             f"word: {word}",
             f"satisfies: {report['satisfies']}",
             f"minimal: {report['minimal']}"]
    _emit({"schema_version": 1, "family": family.value, "word": word.to_dict(), "check": report}, args.json, lines)
    return 0 if report["satisfies"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="troprec", description="Tropical min-plus recurrences")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logs")
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name: str, handler: t.Callable[[argparse.Namespace], int], help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("vector", help="comma-separated rationals or inf, e.g. 0,1,0")
        sub.add_argument("--json", action="store_true", help="machine-readable output")
        sub.set_defaults(handler=handler)
        return sub

    command("analyze", cmd_analyze, "Newton polygon and regularity")

    detect = command("detect", cmd_detect, "decide whether non-periodic minimal sequences exist")
    detect.add_argument("--edge", type=int, default=None,
                        help="bounded edge to normalize onto the axis; the detector needs a_0 = a_n = 0 "
                             "afterwards, so a vector with several edges fails with EndpointsNotZero "
                             "unless the chosen edge spans 0..n")
    detect.add_argument("--max-states", type=int,
                        default=int(os.environ.get("TROPREC_MAX_STATES", DEFAULT_MAX_STATES)),
                        help="abort window enumeration beyond this many windows (env TROPREC_MAX_STATES)")
    detect.add_argument("--threads", type=int, default=os.cpu_count() or 1, help="worker processes")
    detect.add_argument("--dot", default=None, help="write the pruned window graph as Graphviz DOT")
    detect.add_argument("--progress", action="store_true")

    entropy = command("entropy", cmd_entropy, "dimensions d_s or m_s and entropy bounds")
    entropy.add_argument("--s-max", type=int, required=True)
    entropy.add_argument("--minimal", action="store_true", help="compute m_s instead of d_s")
    entropy.add_argument("--progress", action="store_true")

    check = command("check", cmd_check, "check a finite word or a periodic sequence")
    target = check.add_mutually_exclusive_group(required=True)
    target.add_argument("--word", help="comma-separated rationals")
    target.add_argument("--period", help="d:v0,v1,...:drift")

    witness = command("witness", cmd_witness, "build and check a witness word")
    witness.add_argument("--family", required=True, choices=[f.value for f in Family])
    witness.add_argument("--q", type=parse_rational, default=None)
    witness.add_argument("--e", type=parse_rational, default=None)
    witness.add_argument("--shifts", type=int, nargs="+", default=None)
    witness.add_argument("--bumps", type=parse_rational, nargs="+", default=None)
    witness.add_argument("--lengths", type=int, nargs="+", default=None)
    witness.add_argument("--range", type=int, nargs=2, metavar=("LO", "HI"), default=None)
    return parser


def main(argv: t.Optional[t.Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.handler(args)
    except TropRecError as exc:
        if args.json:
            print(json.dumps(exc.to_dict(), indent=2, sort_keys=True, default=str))
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        if isinstance(exc, InfiniteCoefficient):
            print("hint: vectors with infinite entries are handled by `troprec witness --family prop1`",
                  file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
