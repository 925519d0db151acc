"""Command-line front end: ``python -m quiverdyn <subcommand> ...``.

Exit codes: 0 pass, 1 property violated (witness printed), 2 usage or
validation error, 3 budget or precision abort.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import mpmath

from . import __version__
from .catalog import FamilySpec, family_map, make_family, known_bracket, known_casimirs
from .dynamics import build_system, iterate_orbit, monomial_map
from .errors import FiberMismatch, InvarianceViolation, QuiverError
from .exact import RationalMatrix, random_positive_rationals
from .laurent import laurent_check
from .poisson import casimir_basis, find_invariant_structures, poisson_map_check, poisson_reduce
from .presymplectic import cartan_reduce, make_reduced_map, pullback_check, reduced_map_eval
from .quiver import find_period, load_quiver, mutate_sequence, quiver_to_document
from .report import VerificationReport

SCHEMA_VERSION = 1

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE, EXIT_ABORT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _rationals(text: str) -> list[Fraction]:
    try:
        return [Fraction(v.strip()) for v in text.split(",") if v.strip()]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"expected comma-separated rationals, got {text!r}") from None


def _load_input(args):
    """Quiver matrix and optional family spec from --family/--params or --quiver."""
    if args.family and args.quiver:
        raise UsageError("give either --family or --quiver, not both")
    if args.family:
        if not args.params:
            raise UsageError("--family needs --params")
        spec = FamilySpec.parse(args.family, args.params)
        return make_family(spec), spec
    if args.quiver:
        try:
            with open(args.quiver) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read quiver file: {exc}") from None
        return load_quiver(text), None
    raise UsageError("no input quiver: use --family NAME --params ... or --quiver FILE")


def _iteration_map(args, B, spec):
    monomial = getattr(args, "monomial", False)
    if spec is not None and args.period is None:
        return family_map(spec, monomial=monomial)
    if monomial:
        return monomial_map(B, args.period)
    return build_system(B, args.period)


def _points(args, n):
    rng = random.Random(args.seed)
    return [random_positive_rationals(rng, n) for _ in range(args.samples)]


def _pointwise(check, points, jobs):
    """Run a single-point check over ``points``, merged in input order."""
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            parts = list(pool.map(lambda p: check([p]), points))
    else:
        parts = [check([p]) for p in points]
    merged = VerificationReport(parts[0].check if parts else "empty", True)
    for part in parts:
        merged.residuals += part.residuals
        merged.points += part.points
        if not part.ok and merged.ok:
            merged.ok = False
            merged.witness = part.witness
    return merged


_BRACKET_ALIASES = {"paper-iii": "iii", "paper-iv": "iv"}


def _bracket(args, B):
    name = _BRACKET_ALIASES.get(args.bracket, args.bracket)
    if name == "iii":
        if args.family is None or args.family.upper() != "A":
            raise UsageError("bracket iii belongs to family A")
        return known_bracket("iii", _ints(args.params)), "iii"
    if name == "iv":
        return known_bracket("iv"), "iv"
    if name == "B":
        return RationalMatrix.from_rows(B.b, B.n), None
    try:
        with open(name) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read bracket {name!r}: {exc}") from None
    rows = doc["matrix"] if isinstance(doc, dict) else doc
    try:
        return RationalMatrix.from_rows([[Fraction(str(v)) for v in r] for r in rows]), None
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad bracket matrix: {exc}") from None


def _fmt(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, mpmath.mpf):
        return mpmath.nstr(v, 30)
    return v


# --------------------------------------------------------------------------
# subcommands; each returns (exit code, result dict, text lines)


def cmd_mutate(args):
    B, _ = _load_input(args)
    nodes = _ints(args.nodes) if args.nodes else []
    out = mutate_sequence(B, nodes)
    return EXIT_OK, {"nodes": nodes, "quiver": quiver_to_document(out)}, [str(out)]


def cmd_period(args):
    B, _ = _load_input(args)
    rep = find_period(B, args.max)
    lines = [f"period: {rep.period if rep.period is not None else 'none'}"]
    return EXIT_OK, rep.to_dict(), lines


def cmd_simulate(args):
    B, spec = _load_input(args)
    phi = _iteration_map(args, B, spec)
    x0 = _rationals(args.x0) if args.x0 else [Fraction(1)] * phi.n
    orbit = iterate_orbit(phi, x0, args.steps, args.mode, args.precision, args.budget_digits)
    code = EXIT_OK if orbit.ok else EXIT_ABORT
    result = {
        "status": orbit.status,
        "message": orbit.message,
        "steps": orbit.steps,
        "points": [[_fmt(v) if args.mode != "fast" else v for v in p] for p in orbit.points],
    }
    return code, result, [orbit.to_csv(args.digits).rstrip("\n")], orbit


def cmd_check_presymplectic(args):
    B, spec = _load_input(args)
    phi = _iteration_map(args, B, spec)
    rep = _pointwise(lambda pts: pullback_check(phi, B, pts), _points(args, B.n), args.jobs)
    return _verdict(rep)


def cmd_check_poisson(args):
    B, spec = _load_input(args)
    phi = _iteration_map(args, B, spec)
    C, _ = _bracket(args, B)
    rep = _pointwise(lambda pts: poisson_map_check(C, phi, pts), _points(args, B.n), args.jobs)
    return _verdict(rep)


def _verdict(rep):
    lines = [f"{'PASS' if rep.ok else 'FAIL'}: {rep.check} identity at {rep.points} points (exact)"]
    if not rep.ok:
        lines.append("witness: (" + ", ".join(str(v) for v in rep.witness) + ")")
    return (EXIT_OK if rep.ok else EXIT_VIOLATED), rep.to_dict(), lines


def cmd_find_poisson(args):
    B, spec = _load_input(args)
    phi = _iteration_map(args, B, spec)
    sol = find_invariant_structures(phi, B.n, args.samples, args.verify, args.seed)
    lines = [f"solution space dimension {sol.dimension}"]
    for M in sol.basis:
        lines.append(str(M))
    return EXIT_OK, sol.to_dict(), lines


def cmd_reduce_presymplectic(args):
    B, spec = _load_input(args)
    phi = _iteration_map(args, B, spec)
    chart = cartan_reduce(B)
    handle = make_reduced_map(phi, chart=chart, precision=args.precision)
    y = _rationals(args.point)
    if len(y) != 2 * chart.half_rank:
        raise UsageError(f"--point needs {2 * chart.half_rank} coordinates")
    out = reduced_map_eval(handle, y)
    result = {"chart": chart.to_dict(), "point": [str(v) for v in y], "image": [_fmt(v) for v in out]}
    return EXIT_OK, result, ["(" + ", ".join(mpmath.nstr(v, args.digits) for v in out) + ")"]


def cmd_reduce_poisson(args):
    B, spec = _load_input(args)
    phi = _iteration_map(args, B, spec)
    C, example = _bracket(args, B)
    casimirs = known_casimirs(example) if example and not args.kernel_casimirs else casimir_basis(C).exponent_vectors
    y = _rationals(args.point)
    if len(y) != len(casimirs):
        raise UsageError(f"--point needs {len(casimirs)} coordinates")
    out = poisson_reduce(C, phi, y, casimirs=casimirs, precision=args.precision)
    result = {"casimirs": [list(k) for k in casimirs], "point": [str(v) for v in y], "image": [_fmt(v) for v in out]}
    return EXIT_OK, result, ["(" + ", ".join(str(_fmt(v)) for v in out) + ")"]


def cmd_laurent_check(args):
    B, _ = _load_input(args)
    nodes = _ints(args.nodes) if args.nodes else list(range(1, B.n + 1))
    rep = laurent_check(B, nodes, args.depth, args.term_budget, args.shift)
    lines = [f"{rep.status}: {len(rep.steps)} mutations"]
    lines += [f"step {s.step} node {s.node}: {s.terms} terms, {s.max_coeff_digits} coefficient digits" for s in rep.steps]
    if rep.message:
        lines.append(rep.message)
    code = {"laurent": EXIT_OK, "non-laurent": EXIT_VIOLATED, "budget": EXIT_ABORT}[rep.status]
    return code, rep.to_dict(), lines


COMMANDS = {
    "mutate": cmd_mutate,
    "period": cmd_period,
    "simulate": cmd_simulate,
    "check-presymplectic": cmd_check_presymplectic,
    "reduce-presymplectic": cmd_reduce_presymplectic,
    "check-poisson": cmd_check_poisson,
    "find-poisson": cmd_find_poisson,
    "reduce-poisson": cmd_reduce_poisson,
    "laurent-check": cmd_laurent_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quiverdyn", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"quiverdyn {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", help="A, B6, C5 or D3")
    common.add_argument("--params", help="comma-separated family parameters")
    common.add_argument("--quiver", help="quiver document (JSON: n plus matrix or upper)")
    common.add_argument("--format", choices=["text", "json", "csv"], default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--precision", type=int, default=256, help="big-float bits")
    common.add_argument("--digits", type=int, default=17, help="digits in float output")

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    p = add("mutate", "mutate a quiver at a node sequence")
    p.add_argument("--nodes", default="")

    p = add("period", "find the mutation period")
    p.add_argument("--max", type=int, default=None)

    def map_opts(p):
        p.add_argument("--period", type=int, default=None, help="override the period m")
        p.add_argument("--monomial", action="store_true", help="drop the +1 (monomial variant)")

    p = add("simulate", "iterate the map from x0")
    map_opts(p)
    p.add_argument("--x0", default=None)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--mode", choices=["exact", "bigfloat", "fast"], default="exact")
    p.add_argument("--budget-digits", type=int, default=10 ** 5)

    p = add("check-presymplectic", "exact test of phi^* omega = omega")
    map_opts(p)
    p.add_argument("--samples", type=int, default=20)

    p = add("reduce-presymplectic", "evaluate the reduced map through the Cartan chart")
    map_opts(p)
    p.add_argument("--point", required=True)

    for name, help_text in [("check-poisson", "exact Poisson-map test"), ("reduce-poisson", "Casimir reduced map")]:
        p = add(name, help_text)
        map_opts(p)
        p.add_argument("--bracket", default="iii", help="iii, iv, B, or a JSON matrix file")
        if name == "check-poisson":
            p.add_argument("--samples", type=int, default=20)
        else:
            p.add_argument("--point", required=True)
            p.add_argument("--kernel-casimirs", action="store_true", help="use the computed kernel basis")

    p = add("find-poisson", "solve for all invariant log-canonical brackets")
    map_opts(p)
    p.add_argument("--samples", type=int, default=None, help="sample points (default N^2)")
    p.add_argument("--verify", type=int, default=20)

    p = add("laurent-check", "symbolic mutation with exact Laurent division")
    p.add_argument("--nodes", default="")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--term-budget", type=int, default=10 ** 6)
    p.add_argument("--shift", type=int, default=0, help="advance the node sequence by this much each pass")
    return parser


def _config_echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "command"}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    orbit = None
    try:
        outcome = COMMANDS[args.command](args)
    except (FiberMismatch, InvarianceViolation) as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        print("witness: (" + ", ".join(str(v) for v in exc.witness or ()) + ")")
        return EXIT_VIOLATED
    except (UsageError, QuiverError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    code, result, lines = outcome[:3]
    if len(outcome) == 4:
        orbit = outcome[3]
    if args.format == "json":
        report = {
            "schema_version": SCHEMA_VERSION,
            "tool": "quiverdyn",
            "version": __version__,
            "command": args.command,
            "config": _config_echo(args),
            "seed": args.seed,
            "mode": getattr(args, "mode", "exact"),
            "tolerances": {"bigfloat_bits": args.precision, "guard_bits": 16},
            "exit_code": code,
            "result": result,
        }
        print(json.dumps(report, indent=2, default=str))
    elif args.format == "csv":
        if orbit is None:
            print("error: csv output is only available for simulate", file=sys.stderr)
            return EXIT_USAGE
        sys.stdout.write(orbit.to_csv(args.digits))
    else:
        if args.command != "simulate":
            mode = getattr(args, "mode", "exact")
            print(f"# quiverdyn {__version__} {args.command} seed={args.seed} mode={mode} precision={args.precision}")
        print("\n".join(lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
