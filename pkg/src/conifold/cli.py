"""Command-line entry point.

Exit codes: 0 all requested invariants pass, 1 invariant failure,
2 input error, 3 resource error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .config import load, parse_complex
from .dubrovin import IntegrationError
from .lattice import InputError, intersection_matrix, to_jsonable, fmt_rational
from .pl_stokes import DEFAULT_CAP, ResourceError, hurwitz_mutate, relation_classify
from .report import (
    analyze,
    cluster_section,
    dumps,
    full_report,
    monodromy_section,
    render_text,
)

EXIT_OK, EXIT_INVARIANT, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


def _complex_arg(s: str) -> complex:
    try:
        return parse_complex(s, "--z")
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON output (default)")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text", help="human-readable output")
    common.add_argument("--seed", type=int, default=0, help="seed for random-config property checks")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="group exploration element cap")

    loop = argparse.ArgumentParser(add_help=False)
    loop.add_argument("--z", type=_complex_arg, default=None, help="z as 're,im' (default: config value)")
    loop.add_argument("--radius", type=float, default=0.3)
    loop.add_argument("--tol", type=float, default=1e-10)
    loop.add_argument("--orientation", choices=("ccw", "cw"), default="ccw")
    loop.add_argument("--max-steps", type=int, default=200_000)
    loop.add_argument("--base", type=float, default=0.5, help="base point offset u = q + 1")
    loop.add_argument("--extended", action="store_true", help="extended-precision arithmetic")

    p = argparse.ArgumentParser(prog="conifold", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="exact operator, atom and graph analysis")
    a.add_argument("config")
    a.add_argument("--max-len", type=int, default=2, help="word length for group exploration")
    a.add_argument("--samples", type=int, default=0, help="random configs to property-check")

    m = sub.add_parser("monodromy", parents=[common, loop], help="numerical loop monodromy at q=-1")
    m.add_argument("config")

    b = sub.add_parser("braid", parents=[common], help="classify the relation between T_i and T_j")
    b.add_argument("config")
    b.add_argument("i", type=int)
    b.add_argument("j", type=int)

    mu = sub.add_parser("mutate", parents=[common], help="Hurwitz move delta_i -> delta_i - lambda_ij delta_j")
    mu.add_argument("config")
    mu.add_argument("i", type=int)
    mu.add_argument("j", type=int)
    mu.add_argument("--inverse", action="store_true", help="apply the inverse move")

    r = sub.add_parser("report", parents=[common, loop], help="analysis plus monodromy, cluster and K-data sections")
    r.add_argument("config")
    r.add_argument("--max-len", type=int, default=2)
    r.add_argument("--samples", type=int, default=0)
    return p


def _emit(obj: dict, fmt: str | None) -> None:
    sys.stdout.write(render_text(obj) + "\n" if fmt == "text" else dumps(obj))


def _loop_kw(args) -> dict:
    if not 0 < args.radius < 1:
        raise InputError("radius must lie in (0, 1): loop would enclose q=0")
    return dict(z=args.z, radius=args.radius, tol=args.tol, orientation=args.orientation,
                max_steps=args.max_steps, base=args.base, extended=args.extended)


def run(args) -> int:
    dc = load(args.config)
    cmd = args.command
    if cmd == "analyze":
        out = analyze(dc, max_len=args.max_len, cap=args.cap, samples=args.samples, seed=args.seed)
        status = EXIT_INVARIANT if out["failures"] else EXIT_OK
    elif cmd == "monodromy":
        out = analyze(dc, cap=args.cap)
        out["monodromy"] = monodromy_section(dc, **_loop_kw(args))
        out["failures"] += [c["invariant"] for c in out["monodromy"]["checks"] if not c["passed"]]
        status = EXIT_INVARIANT if out["failures"] else EXIT_OK
    elif cmd == "report":
        out = full_report(dc, max_len=args.max_len, cap=args.cap, samples=args.samples,
                          seed=args.seed, **_loop_kw(args))
        status = EXIT_INVARIANT if out["failures"] else EXIT_OK
    elif cmd == "braid":
        lam = intersection_matrix(dc.cycles)
        rel = relation_classify(dc.cycles, args.i, args.j)
        if args.fmt == "text":
            sys.stdout.write(rel + "\n")
            return EXIT_OK
        out = {"i": args.i, "j": args.j, "lambda": fmt_rational(lam[args.i - 1, args.j - 1]), "relation": rel}
        status = EXIT_OK
    elif cmd == "mutate":
        mutated = hurwitz_mutate(dc.cycles, args.i, args.j, inverse=args.inverse)
        raw = dict(dc.raw)
        raw["cycles"] = [to_jsonable(c) for c in mutated.cycles]
        out = {"mutated_config": raw, "lambda": fmt_rational(intersection_matrix(dc.cycles)[args.i - 1, args.j - 1])}
        if dc.cluster is not None and dc.cycles.r == 2 and not args.inverse:
            out["cluster"] = cluster_section(dc)
        status = EXIT_OK
    else:  # pragma: no cover - argparse enforces the choice
        raise InputError(f"unknown command {cmd}")
    _emit(out, args.fmt)
    return status


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args)
    except InputError as exc:
        print(json.dumps({"error": "input", "message": str(exc)}), file=sys.stderr)
        return EXIT_INPUT
    except (ResourceError, IntegrationError) as exc:
        print(json.dumps({"error": "resource", "message": str(exc)}), file=sys.stderr)
        return EXIT_RESOURCE
    except AssertionError as exc:
        print(json.dumps({"error": "invariant", "message": str(exc)}), file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
