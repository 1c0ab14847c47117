import argparse
import os
import platform
import shlex
import shutil
import subprocess
import time
from typing import Dict, List, Optional, Sequence, Tuple

from rich.console import Console

from . import constants
from .__version__ import __version__
from .config import TateSmithConfig
from .constants import (
    BINARY_COMMANDS,
    COMMANDS,
    EXAMPLE_SPACES,
    EXIT_CROSS_CHECK,
    EXIT_INVALID_INPUT,
    EXIT_OK,
    WINDOW_COMMANDS,
)
from .documents import (
    RunReport,
    WeightsDocument,
    digest,
    dump_strat_sheaf,
    dumps,
    loads_document,
    read_source,
)
from .equivsimp import (
    SimplicialPiComplex,
    example_sheaf,
    example_space,
    face_poset_export,
    regularize,
    smith_localization_check,
)
from .errors import CrossCheckError, DocumentError, InputError, InvalidWindow
from .formatter import print_report
from .homcx import PiComplex, cohomology
from .parity import (
    check_parity,
    check_tate_parity,
    decompose_tate,
    hyperco_check,
    lift_L,
    modular_compare,
    smith,
)
from .stratsheaf import CellSheafComplex, require_valid, sections, tate_stalk_table
from .tate import classify, eps_formula, is_perfect, stable_hom, tate_cohomology
from .weights import demo_gr_weights

SIMPLICIAL_COMMANDS = ["simp-smith", "export-poset"]

Tables = Dict[str, List[Dict[str, object]]]
Result = Tuple[Dict[str, object], Tables]


def parse_pre_args() -> argparse.Namespace:
    pre_parser = argparse.ArgumentParser(add_help=False)
    pre_parser.add_argument("--version", "-v", action="store_true", dest="version")
    pre_parser.add_argument("--config", action="store_true", dest="config")
    pre_parser.add_argument("--help", "-h", action="store_true", dest="help")
    return pre_parser.parse_known_args()[0]


class WindowAction(argparse.Action):
    """Store --window and record that it was given."""

    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, list(values))
        namespace.window_given = True


def create_parser(cfg: TateSmithConfig) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Tate cohomology, parity sheaves and Smith theory for Z/p actions"
    )
    parser.add_argument(
        "command",
        type=str,
        nargs="?",
        choices=COMMANDS,
        metavar="COMMAND",
        help=f"operation to run: {', '.join(COMMANDS)}",
    )
    parser.add_argument(
        "inputs",
        type=str,
        nargs="*",
        metavar="INPUT",
        help="input JSON documents (two for stablehom; reduce-compare takes one or two)",
    )
    parser.add_argument(
        "--config",
        action="store_true",
        help="open the default configuration file using system text editor",
    )
    parser.add_argument(
        "-d",
        "--debug",
        action="store_true",
        default=cfg.debug,
        help="show debug output",
    )
    parser.add_argument(
        "--example",
        type=str,
        choices=EXAMPLE_SPACES,
        metavar="NAME",
        help=f"use a named example instead of an input document: {', '.join(EXAMPLE_SPACES)}",
    )
    parser.add_argument(
        "--coeff",
        type=str,
        default="integral",
        choices=["integral", "fp"],
        help="coefficients for parity-check (default: integral)",
    )
    parser.add_argument(
        "--json",
        action="store_true",
        default=cfg.json,
        help="output the report in JSON format",
    )
    parser.add_argument(
        "--nocolor",
        action="store_true",
        default=cfg.no_color,
        help="disable colored output",
    )
    parser.add_argument(
        "-p",
        "--p",
        type=int,
        dest="p",
        default=None,
        metavar="P",
        help=f"override the prime of the input documents (examples use {cfg.prime})",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=cfg.seed,
        metavar="N",
        help=f"seed for sampled property checks (default: {cfg.seed})",
    )
    parser.add_argument(
        "--samples",
        type=int,
        default=cfg.samples,
        metavar="N",
        help=f"number of sampled morphisms (default: {cfg.samples})",
    )
    parser.add_argument(
        "--checks",
        type=int,
        default=cfg.stabilization_checks,
        metavar="N",
        help=f"extra stabilization levels compared by stablehom (default: {cfg.stabilization_checks})",
    )
    parser.add_argument(
        "--window",
        type=int,
        nargs=2,
        action=WindowAction,
        default=cfg.window,
        metavar=("LO", "HI"),
        help=f"degree window for reading Tate cohomology (default: {' '.join(str(w) for w in cfg.window)})",
    )
    parser.add_argument(
        "-v",
        "--version",
        action="store_true",
        help="show program's version number and exit",
    )
    parser.set_defaults(window_given=False)
    return parser


def _expect(obj: object, kind: type, command: str) -> None:
    if not isinstance(obj, kind):
        raise DocumentError(f"{command} needs a {kind.__name__} input, got {type(obj).__name__}")


def load_inputs(args: argparse.Namespace, prime: int) -> Tuple[List[object], List[str]]:
    """Objects for the command, and the texts they were read from."""
    if args.example:
        p = args.p or prime
        if args.command in SIMPLICIAL_COMMANDS:
            return [example_space(args.example, p)], [f"example:{args.example}:{p}"]
        return [example_sheaf(args.example, p)], [f"example:{args.example}:{p}"]
    if not args.inputs:
        raise DocumentError(f"{args.command} needs an input document or --example")
    if len(args.inputs) > (2 if args.command in BINARY_COMMANDS else 1):
        raise DocumentError(f"too many input documents for {args.command}")
    texts = [read_source(source) for source in args.inputs]
    objects = [loads_document(text, args.p) for text in texts]
    for obj in objects:
        if isinstance(obj, CellSheafComplex):
            require_valid(obj)
    return objects, texts


def _window(args: argparse.Namespace) -> Tuple[int, int]:
    return tuple(args.window)


def run_tate(objects: Sequence[object], args: argparse.Namespace) -> Result:
    obj = objects[0]
    if isinstance(obj, CellSheafComplex):
        table = tate_stalk_table(obj)
        vs = tate_cohomology(sections(obj), _window(args))
        rows = [{"stratum": x, "t0": t[0], "t1": t[1]} for x, t in table.items()]
        return vs.as_dict(), {"stalks": rows}
    _expect(obj, PiComplex, "tate")
    vs = tate_cohomology(obj, _window(args))
    rows = [{"degree": n, "H": str(inv)} for n, inv in cohomology(obj).items()]
    return vs.as_dict(), {"cohomology": rows}


def run_classify(objects: Sequence[object], args: argparse.Namespace) -> Result:
    _expect(objects[0], PiComplex, "classify")
    k0, k1, diff = classify(objects[0])
    verdicts = {"k0": k0, "k1": k1, "difference": diff}
    if objects[0].is_trivial_action():
        verdicts["eps_formula"] = list(eps_formula(objects[0]))
    return verdicts, {}


def run_perfect(objects: Sequence[object], args: argparse.Namespace) -> Result:
    _expect(objects[0], PiComplex, "perfect")
    return {"perfect": is_perfect(objects[0])}, {}


def run_stablehom(objects: Sequence[object], args: argparse.Namespace) -> Result:
    if len(objects) != 2:
        raise DocumentError("stablehom needs two pi_complex inputs")
    for obj in objects:
        _expect(obj, PiComplex, "stablehom")
    S = stable_hom(objects[0], objects[1], args.checks)
    rows = [{"level": n, "even": d[0], "odd": d[1]} for n, d in S.route_b.items()]
    verdicts = {"hom": list(S.grading), "level": S.level, "routes_agree": True}
    return verdicts, {"projective route": rows}


def run_smith(objects: Sequence[object], args: argparse.Namespace) -> Result:
    _expect(objects[0], CellSheafComplex, "smith")
    report = smith(objects[0])
    psm = [{"stratum": x, "tate": list(d)} for x, d in report.table.items()]
    return {"verdict": report.verdict}, {"fixed strata": [r.as_dict() for r in report.rows], "psm": psm}


def run_parity(objects: Sequence[object], args: argparse.Namespace) -> Result:
    _expect(objects[0], CellSheafComplex, "parity-check")
    report = check_parity(objects[0], args.coeff)
    return {"coeff": report.coeff, "verdict": report.verdict}, {"strata": [r.as_dict() for r in report.rows]}


def run_tate_parity(objects: Sequence[object], args: argparse.Namespace) -> Result:
    _expect(objects[0], CellSheafComplex, "tate-parity-check")
    report = check_tate_parity(objects[0])
    verdicts = {"verdict": report.verdict, "certificate": report.certificate}
    return verdicts, {"strata": [r.as_dict() for r in report.rows]}


def run_decompose(objects: Sequence[object], args: argparse.Namespace) -> Result:
    _expect(objects[0], CellSheafComplex, "decompose")
    report = decompose_tate(objects[0], args.max_enumeration)
    verdicts = {
        "local": report.local,
        "algebra_dim": report.algebra_dim,
        "idempotents": report.idempotents,
        "justification": report.justification,
    }
    return verdicts, {"summands": [s.as_dict() for s in report.summands]}


def run_reduce_compare(objects: Sequence[object], args: argparse.Namespace) -> Result:
    for obj in objects:
        _expect(obj, CellSheafComplex, "reduce-compare")
    G = objects[1] if len(objects) > 1 else None
    return modular_compare(objects[0], G, args.samples, args.seed), {}


def run_lift(objects: Sequence[object], args: argparse.Namespace) -> Result:
    _expect(objects[0], CellSheafComplex, "lift")
    report = lift_L(objects[0], args.samples, args.seed)
    verdicts = report.as_dict()
    objects_table = [
        {"stratum": x, "mod p cohomology": {str(n): d for n, d in dims.items()}}
        for x, dims in verdicts.pop("objects").items()
    ]
    return verdicts, {"objects": objects_table}


def run_hyperco(objects: Sequence[object], args: argparse.Namespace) -> Result:
    _expect(objects[0], CellSheafComplex, "hyperco-check")
    report = hyperco_check(objects[0])
    rows = [{"s,q": k, "dim": d} for k, d in report.pop("page").items()]
    return report, {"page": rows}


def run_simp_smith(objects: Sequence[object], args: argparse.Namespace) -> Result:
    _expect(objects[0], SimplicialPiComplex, "simp-smith")
    return smith_localization_check(regularize(objects[0])).as_dict(), {}


def run_export(objects: Sequence[object], args: argparse.Namespace) -> Result:
    _expect(objects[0], SimplicialPiComplex, "export-poset")
    P, F = face_poset_export(regularize(objects[0]))
    rows = [
        {"stratum": x, "dim": P.dim[x], "dagger": P.dagger[x], "image": P.act(x)}
        for x in P.ordered()
    ]
    args.document = dump_strat_sheaf(F)
    return {"strata": len(P.elements), "fixed": len(P.fixed_points())}, {"strata": rows}


def run_weights(objects: Sequence[object], args: argparse.Namespace) -> Result:
    _expect(objects[0], WeightsDocument, "demo-gr-weights")
    report = demo_gr_weights(objects[0].p, objects[0].entries)
    tables = {
        "kept": [{"weight": w, "multiplicity": m, "pairing": c} for w, m, c in report.kept],
        "dropped": [{"weight": w, "multiplicity": m, "pairing": c} for w, m, c in report.dropped],
    }
    return {"kept": len(report.kept), "dropped": len(report.dropped)}, tables


HANDLERS = {
    "tate": run_tate,
    "classify": run_classify,
    "perfect": run_perfect,
    "stablehom": run_stablehom,
    "smith": run_smith,
    "parity-check": run_parity,
    "tate-parity-check": run_tate_parity,
    "decompose": run_decompose,
    "reduce-compare": run_reduce_compare,
    "lift": run_lift,
    "hyperco-check": run_hyperco,
    "simp-smith": run_simp_smith,
    "export-poset": run_export,
    "demo-gr-weights": run_weights,
}


def run(args: argparse.Namespace, prime: int = constants.PRIME) -> RunReport:
    """Load the inputs, dispatch the command and time it."""
    start = time.perf_counter()
    if args.window_given and args.command not in WINDOW_COMMANDS:
        raise InvalidWindow(f"--window only applies to {', '.join(WINDOW_COMMANDS)}, not {args.command}")
    objects, texts = load_inputs(args, prime)
    args.document = None
    verdicts, tables = HANDLERS[args.command](objects, args)
    return RunReport(
        args.command,
        digest(texts),
        verdicts,
        tables,
        time.perf_counter() - start,
        document=args.document,
    )


def emit(report: RunReport, as_json: bool) -> None:
    if as_json:
        print(dumps(report.as_dict()))
    else:
        print_report(report)


def open_config(cfg: TateSmithConfig) -> int:
    if not os.path.exists(cfg.config_file):
        cfg.create_config_file()
        return EXIT_OK
    constants.console.print(f"opening {cfg.config_file}")
    editor = os.environ.get("EDITOR")
    if not editor:
        system = platform.system()
        if system == "Linux":
            fallback = "xdg-open"
        elif system == "Darwin":
            fallback = "open"
        elif system == "Windows":
            fallback = "notepad"
        else:
            fallback = None

        if fallback and shutil.which(fallback):
            editor = fallback
        else:
            constants.console.print(
                "[red]Error:[/red] No editor found. Set $EDITOR environment variable "
                "or install an editor."
            )
            return 1
    try:
        subprocess.run(shlex.split(editor) + [cfg.config_file], check=True)
    except FileNotFoundError:
        constants.console.print(f"[red]Error:[/red] Editor '{editor}' not found.")
        return 1
    except subprocess.CalledProcessError as e:
        constants.console.print(f"[red]Error opening editor:[/red] {e}")
        return 1
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> None:
    pre_args = parse_pre_args()

    skip_config_creation = not pre_args.config

    cfg = TateSmithConfig(skip_config_creation=skip_config_creation)

    parser = create_parser(cfg)
    args = parser.parse_args(argv)
    args.max_enumeration = cfg.max_enumeration

    if args.nocolor:
        constants.console = Console(color_system=None, force_terminal=True)

    constants.DEBUG = args.debug
    constants.debug(f"Config: {args}")

    if args.config:
        exit(open_config(cfg))
    if args.version:
        constants.console.print(__version__)
        exit(EXIT_OK)
    if not args.command:
        parser.print_help()
        exit(EXIT_OK)
    if args.p is not None and not cfg.validate_prime(args.p):
        exit(EXIT_INVALID_INPUT)

    try:
        report = run(args, cfg.prime)
    except InputError as e:
        constants.console.print(f"[red]Error:[/red] {e}")
        exit(EXIT_INVALID_INPUT)
    except CrossCheckError as e:
        constants.console.print(f"[red]Error:[/red] cross-check failed: {e}")
        exit(EXIT_CROSS_CHECK)
    emit(report, args.json)
    exit(EXIT_OK)


if __name__ == "__main__":
    main()
