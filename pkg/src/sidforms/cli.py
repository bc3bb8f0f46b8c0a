"""Command-line front end.

Subcommands: classify, count, deficit, tau, search, verify-paper.
Reports go to stdout as aligned text, or as a single JSON object with
--json; exact rationals are always rendered as "num/den" strings.

System file grammar (line oriented, '#' starts a comment):

    q <int>            # or  q <p>^<e>
    modulus c0 c1 ...  # optional, extension fields only
    rows
    <k integers per row, negatives allowed>
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from fractions import Fraction

from . import __version__
from .classify import Trilean, classify_system
from .counting import count_solutions, deficits, load_point_set, save_point_set
from .errors import ParseError, SidformsError
from .field import field_from_order, make_field
from .fourier import SpectralFunction, sum_tau_shortest
from .linalg import LinearSystem, min_induced_length, normalize, structural_flags
from .search import SearchConfig, run_search


def parse_system(path) -> tuple[LinearSystem, dict]:
    """Parse a system file; returns (system, echo-of-inputs)."""
    q_spec = None
    modulus = None
    rows = []
    in_rows = False
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if not in_rows:
                if parts[0] == "q":
                    if len(parts) != 2:
                        raise ParseError("expected 'q <int>' or 'q <p>^<e>'", lineno)
                    q_spec = (parts[1], lineno)
                elif parts[0] == "modulus":
                    try:
                        modulus = tuple(int(v) for v in parts[1:])
                    except ValueError:
                        raise ParseError("modulus coefficients must be integers",
                                         lineno) from None
                elif parts[0] == "rows":
                    in_rows = True
                else:
                    raise ParseError(f"unexpected directive {parts[0]!r}", lineno)
            else:
                try:
                    row = [int(v) for v in parts]
                except ValueError:
                    raise ParseError("rows must contain integers", lineno) from None
                if rows and len(row) != len(rows[0]):
                    raise ParseError(
                        f"row has {len(row)} entries, expected {len(rows[0])}", lineno)
                rows.append(row)
    if q_spec is None:
        raise ParseError("missing 'q' directive")
    text, lineno = q_spec
    try:
        if "^" in text:
            p_str, e_str = text.split("^", 1)
            field = make_field(int(p_str), int(e_str), modulus)
        else:
            if modulus is not None:
                raise ParseError("modulus override requires 'q <p>^<e>' form", lineno)
            field = field_from_order(int(text))
    except ValueError as exc:
        raise ParseError(str(exc), lineno) from None
    if not rows:
        raise ParseError("no coefficient rows found")
    system, dropped = normalize(field, rows)
    echo = {
        "q": field.q,
        "p": field.p,
        "e": field.e,
        "raw_rows": rows,
        "rows": [list(r) for r in system.rows],
        "dropped_rows": dropped,
    }
    if field.e > 1:
        echo["modulus"] = list(field.modulus)
    return system, echo


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _report_base(command, args):
    rep = {"tool": "sidforms", "version": __version__, "command": command}
    if getattr(args, "seed", None) is not None:
        rep["seed"] = args.seed
    return rep


def _emit(report, args, text_lines):
    if not args.no_timestamp:
        report["timestamp"] = datetime.datetime.now(
            datetime.timezone.utc).isoformat()
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        for line in text_lines:
            print(line)


def _verdict_json(verdict):
    return {
        "sidorenko": verdict.sidorenko.value,
        "common": verdict.common.value,
        "degenerate": verdict.degenerate,
        "certificates": [
            {"rule": c.rule.value, "payload": c.payload} for c in verdict.certificates
        ],
    }


def _cmd_classify(args):
    system, echo = parse_system(args.system)
    s, shortest = min_induced_length(system)
    flags = structural_flags(system)
    verdict = classify_system(
        system,
        seed=args.seed,
        attempt_witness=not args.no_witness,
    )
    report = _report_base("classify", args)
    report["inputs"] = {"system_file": args.system, "system": echo}
    report["structure"] = {
        "m": system.m,
        "k": system.k,
        "s": s,
        "translation_invariant": flags["translation_invariant"],
        "degenerate": flags["degenerate"],
        "shortest_equations": [list(eq.coeffs) for eq in shortest],
    }
    report["verdict"] = _verdict_json(verdict)
    lines = [
        f"system: {system.m} x {system.k} over F_{system.field.q}",
        f"s (minimal induced length): {s}",
        f"translation invariant: {flags['translation_invariant']}",
        f"sidorenko: {verdict.sidorenko.value}",
        f"common:    {verdict.common.value}",
        "certificates:",
    ]
    for c in verdict.certificates:
        lines.append(f"  - {c.rule.value}: {json.dumps(c.payload)}")
    _emit(report, args, lines)
    if args.require_decision and Trilean.UNKNOWN in (
            verdict.sidorenko, verdict.common):
        return 2
    return 0


def _cmd_count(args):
    system, echo = parse_system(args.system)
    points = load_point_set(args.set, system.field, args.n)
    sc = count_solutions(system, points, args.method)
    k, q, n = system.k, system.field.q, args.n
    benchmark = Fraction(len(points) ** k, q ** (n * system.m))
    report = _report_base("count", args)
    report["inputs"] = {
        "system_file": args.system,
        "set_file": args.set,
        "n": n,
        "set_size": len(points),
        "system": echo,
    }
    report["count"] = {
        "method": sc.method,
        "count": sc.count,
        "total": sc.total,
        "density": _frac(sc.density),
        "float_derived": sc.float_derived,
        "sidorenko_benchmark": _frac(benchmark),
        "meets_benchmark": sc.count >= benchmark,
    }
    _emit(report, args, [
        f"solutions in A:        {sc.count}   (method: {sc.method})",
        f"solutions in F_q^n:    {sc.total}",
        f"density:               {_frac(sc.density)}",
        f"sidorenko benchmark:   {_frac(benchmark)}  "
        f"({'met' if sc.count >= benchmark else 'VIOLATED'})",
    ])
    return 0


def _cmd_deficit(args):
    system, echo = parse_system(args.system)
    points = load_point_set(args.set, system.field, args.n)
    rep = deficits(system, points)
    report = _report_base("deficit", args)
    report["inputs"] = {
        "system_file": args.system,
        "set_file": args.set,
        "n": args.n,
        "set_size": len(points),
        "system": echo,
    }
    report["deficits"] = {
        "alpha": _frac(rep.alpha),
        "density": _frac(rep.density),
        "density_complement": _frac(rep.density_complement),
        "sidorenko_deficit": _frac(rep.sidorenko_deficit),
        "common_deficit": _frac(rep.common_deficit),
    }
    _emit(report, args, [
        f"alpha:              {_frac(rep.alpha)}",
        f"density(A):         {_frac(rep.density)}",
        f"density(complement):{_frac(rep.density_complement)}",
        f"sidorenko deficit:  {_frac(rep.sidorenko_deficit)}",
        f"common deficit:     {_frac(rep.common_deficit)}",
    ])
    return 0


def _cmd_tau(args):
    system, echo = parse_system(args.system)
    f = SpectralFunction.load(args.function, system.field)
    rep = sum_tau_shortest(system, f)
    report = _report_base("tau", args)
    report["inputs"] = {
        "system_file": args.system,
        "function_file": args.function,
        "mean": f.mean,
        "system": echo,
    }
    report["tau"] = {
        "per_equation": [[t.real, t.imag] for t in rep.taus],
        "sum": [rep.total.real, rep.total.imag],
        "xi": rep.xi,
        "zeta": rep.zeta,
    }
    lines = [f"E f = {f.mean}"]
    for i, t in enumerate(rep.taus):
        lines.append(f"tau[{i}] = {t.real:+.12e}  (imag {t.imag:+.2e})")
    lines.append(f"sum     = {rep.total.real:+.12e}")
    lines.append(f"xi      = {rep.xi:.6e}")
    lines.append(f"zeta    = {rep.zeta:+.6e}")
    _emit(report, args, lines)
    return 0


def _cmd_search(args):
    system, echo = parse_system(args.system)
    if args.strategy == "exhaustive":
        strategy = "exhaustive"
    elif args.strategy == "exhaustive-fixed":
        if args.size is None:
            raise SidformsError("--size is required with exhaustive-fixed")
        strategy = ("exhaustive_fixed", args.size)
    elif args.strategy == "anneal":
        strategy = ("anneal", args.steps)
    else:
        raise SidformsError(f"unknown strategy {args.strategy}")
    initial = None
    if args.initial_set:
        initial = load_point_set(args.initial_set, system.field, args.n)
    cfg = SearchConfig(
        n=args.n,
        objective=args.objective,
        strategy=strategy,
        seed=args.seed,
        restarts=args.restarts,
        initial=initial,
    )
    witness = run_search(system, cfg)
    report = _report_base("search", args)
    report["inputs"] = {
        "system_file": args.system,
        "n": args.n,
        "objective": args.objective,
        "strategy": args.strategy,
        "system": echo,
    }
    report["witness"] = {
        "size": len(witness.points),
        "points": [list(p) for p in witness.points.points()],
        "deficit": _frac(witness.deficit),
        "negative": witness.deficit < 0,
        "evaluations": witness.evaluations,
        "trace": witness.trace,
    }
    if args.out_set:
        save_point_set(args.out_set, witness.points)
    _emit(report, args, [
        f"best set size:  {len(witness.points)}",
        f"deficit:        {_frac(witness.deficit)} "
        f"({'NEGATIVE: witness found' if witness.deficit < 0 else 'nonnegative'})",
        f"evaluations:    {witness.evaluations}",
        f"points:         {' '.join(str(tuple(p)) for p in witness.points.points())}",
    ])
    return 0


def _cmd_verify_paper(args):
    from .verify import run_all

    results = run_all(verbose=not args.json)
    report = _report_base("verify-paper", args)
    report["checks"] = [
        {"name": name, "passed": ok, "detail": detail} for name, ok, detail in results
    ]
    report["all_passed"] = all(ok for _, ok, _ in results)
    if args.json:
        _emit(report, args, [])
    else:
        n_pass = sum(1 for _, ok, _ in results if ok)
        print(f"\n{n_pass}/{len(results)} checks passed")
    return 0 if report["all_passed"] else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sidforms",
        description="Classify, count and search systems of linear forms over F_q.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1,
                       help="worker cap (computations are deterministic)")
        p.add_argument("--no-timestamp", action="store_true",
                       help="omit the timestamp field for byte-stable output")

    p = sub.add_parser("classify", help="run every classification rule")
    p.add_argument("--system", required=True)
    p.add_argument("--require-decision", action="store_true",
                   help="exit 2 when the verdict is Unknown")
    p.add_argument("--no-witness", action="store_true",
                   help="skip the numeric witness construction")
    common(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("count", help="count solutions inside a point set")
    p.add_argument("--system", required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", default="auto",
                   choices=["auto", "bruteforce", "kernel", "fourier", "ntt"])
    common(p)
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("deficit", help="exact Sidorenko and common deficits")
    p.add_argument("--system", required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--n", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_deficit)

    p = sub.add_parser("tau", help="shortest-equation tau values of a function")
    p.add_argument("--system", required=True)
    p.add_argument("--function", required=True)
    common(p)
    p.set_defaults(func=_cmd_tau)

    p = sub.add_parser("search", help="look for negative-deficit witness sets")
    p.add_argument("--system", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--objective", default="sidorenko",
                   choices=["sidorenko", "common"])
    p.add_argument("--strategy", default="exhaustive",
                   choices=["exhaustive", "exhaustive-fixed", "anneal"])
    p.add_argument("--size", type=int, help="set size for exhaustive-fixed")
    p.add_argument("--steps", type=int, default=100_000, help="anneal steps")
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--initial-set", help="point-set file to start annealing from")
    p.add_argument("--out-set", help="write the witness in point-set format")
    common(p)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("verify-paper", help="run the built-in reproduction checks")
    common(p)
    p.set_defaults(func=_cmd_verify_paper)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SidformsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
