"""Command-line front end.

Subcommands: derive, certify, falsify, simulate, compare.  Every run
prints a single JSON document that echoes the full effective config and
the tool version, so any output can be reproduced exactly from the
report alone.  Exit codes:

    0   success (derive/certify verified, falsify found a witness,
        simulate/compare passed)
    1   clean falsification run with no witness, or a failed
        comparison/simulation gate
    2   internal verification failure (a certificate did not verify)
    64  usage error (bad flags, unparseable candidate, invalid fraction)
    66  input file unreadable

The environment variable BORN_SEED overrides the default seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__
from .axioms import candidate_from_expression
from .derivation import (
    ConstraintLedger,
    build_ledger,
    compare_to_born,
    continuity_extension_check,
    verify_ledger,
)
from .errors import CertificateError, ParameterError, ParseError
from .falsifier import FalsifierConfig, falsify
from .montecarlo import simulate_fractions

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_VERIFICATION = 2
EXIT_USAGE = 64
EXIT_NOINPUT = 66


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _default_seed() -> int:
    return int(os.environ.get("BORN_SEED", "0"))


def _emit(subcommand: str, config: dict, result: dict, path=None) -> None:
    payload = {
        "tool": "bornlab",
        "version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "subcommand": subcommand,
        "config": config,
        "result": result,
    }
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    else:
        print(text)


def _parse_fraction(text: str) -> Fraction:
    try:
        num, den = text.split("/")
        frac = Fraction(int(num), int(den))
    except (ValueError, ZeroDivisionError):
        raise _UsageError(f"invalid fraction {text!r}, expected K/N")
    if not 0 <= frac <= 1:
        raise _UsageError(f"fraction {text!r} must lie in [0, 1]")
    return frac


def _parse_range(text: str) -> tuple[int, ...]:
    try:
        if ".." in text:
            lo, hi = map(int, text.split(".."))
            dims = tuple(range(lo, hi + 1))
        else:
            dims = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise _UsageError(f"invalid dimension range {text!r}, expected A..B or a list")
    if not dims or min(dims) < 1:
        raise _UsageError(f"dimension range {text!r} must cover dimensions >= 1")
    return dims


def _load_ledger(path: str) -> ConstraintLedger:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise FileNotFoundError(f"cannot read ledger {path!r}: {exc}")
    body = payload.get("result", payload)
    return ConstraintLedger.from_json(body.get("ledger", body))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bornlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    derive = sub.add_parser("derive", help="Build and verify the constraint ledger")
    derive.add_argument("--n-max", type=int, default=64)
    derive.add_argument("--theta", type=float, action="append", default=None)
    derive.add_argument("--rotate-bases", action="store_true")
    derive.add_argument("--full-certificates", action="store_true")
    derive.add_argument("--seed", type=int, default=None)
    derive.add_argument("-o", "--output", default=None)

    certify = sub.add_parser("certify", help="Re-verify a serialized ledger")
    certify.add_argument("ledger")
    certify.add_argument("-o", "--output", default=None)

    fals = sub.add_parser("falsify", help="Search for an axiom violation")
    fals.add_argument("-p", "--candidate", required=True)
    fals.add_argument("--n-range", default="2..8")
    fals.add_argument("--trials", type=int, default=50)
    fals.add_argument("--optimizer-steps", type=int, default=200)
    fals.add_argument("--step-scale", type=float, default=0.1)
    fals.add_argument("--threshold", type=float, default=1e-6)
    fals.add_argument("--theta", type=float, action="append", default=None)
    fals.add_argument("--seed", type=int, default=None)
    fals.add_argument("-o", "--output", default=None)

    sim = sub.add_parser("simulate", help="Frequentist check of Born weights")
    sim.add_argument("--fraction", default=None, help="K/N; simulates (K/N, 1-K/N)")
    sim.add_argument("--probs", default=None, help="comma-separated exact fractions")
    sim.add_argument("--samples", type=int, default=1_000_000)
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--format", choices=("json", "csv"), default="json")
    sim.add_argument("-o", "--output", default=None)

    comp = sub.add_parser("compare", help="Continuity probe against a ledger")
    comp.add_argument("-p", "--candidate", required=True)
    comp.add_argument("ledger")
    comp.add_argument("--grid", type=int, default=256)
    comp.add_argument("--tolerance", type=float, default=1e-9)
    comp.add_argument("-o", "--output", default=None)
    return parser


def _cmd_derive(args) -> int:
    if args.n_max < 1:
        raise _UsageError(f"--n-max must be >= 1, got {args.n_max}")
    seed = args.seed if args.seed is not None else _default_seed()
    config = {
        "n_max": args.n_max,
        "theta": args.theta,
        "rotate_bases": args.rotate_bases,
        "full_certificates": args.full_certificates,
        "seed": seed,
    }
    try:
        ledger = build_ledger(args.n_max, args.theta, args.rotate_bases, seed)
    except CertificateError as exc:
        _emit("derive", config, {"error": str(exc)}, args.output)
        return EXIT_VERIFICATION
    failures = verify_ledger(ledger)
    born_gap = compare_to_born(ledger)
    result = {
        "ledger": ledger.to_json(args.full_certificates),
        "entry_count": len(ledger.entries),
        "compare_to_born": f"{born_gap.numerator}/{born_gap.denominator}",
        "failures": [list(f) for f in failures],
    }
    _emit("derive", config, result, args.output)
    return EXIT_OK if not failures and born_gap == 0 else EXIT_VERIFICATION


def _cmd_certify(args) -> int:
    config = {"ledger": args.ledger}
    try:
        ledger = _load_ledger(args.ledger)
    except CertificateError as exc:
        _emit("certify", config, {"verified": False, "error": str(exc)}, args.output)
        return EXIT_VERIFICATION
    failures = verify_ledger(ledger)
    result = {
        "verified": not failures and compare_to_born(ledger) == 0,
        "entry_count": len(ledger.entries),
        "failures": [list(f) for f in failures],
    }
    _emit("certify", config, result, args.output)
    return EXIT_OK if result["verified"] else EXIT_VERIFICATION


def _cmd_falsify(args) -> int:
    try:
        candidate = candidate_from_expression(args.candidate)
    except ParseError as exc:
        raise _UsageError(f"candidate does not parse: {exc}")
    n_range = _parse_range(args.n_range)
    seed = args.seed if args.seed is not None else _default_seed()
    cfg = FalsifierConfig(
        n_range=n_range,
        random_trials=args.trials,
        optimizer_steps=args.optimizer_steps,
        step_scale=args.step_scale,
        violation_threshold=args.threshold,
        seed=seed,
    )
    ledger = build_ledger(max(n_range), args.theta, rotate_bases=False, seed=seed)
    outcome = falsify(candidate, cfg, ledger)
    config = {
        "candidate": args.candidate,
        "n_range": list(n_range),
        "trials": args.trials,
        "optimizer_steps": args.optimizer_steps,
        "step_scale": args.step_scale,
        "threshold": args.threshold,
        "theta": args.theta,
        "seed": seed,
    }
    _emit("falsify", config, outcome.to_json(), args.output)
    return EXIT_OK if outcome.falsified else EXIT_FAIL


def _cmd_simulate(args) -> int:
    if (args.fraction is None) == (args.probs is None):
        raise _UsageError("give exactly one of --fraction or --probs")
    if args.samples < 1:
        raise _UsageError("--samples must be >= 1")
    if args.fraction is not None:
        frac = _parse_fraction(args.fraction)
        probs = [frac] if frac == 1 else [frac, 1 - frac]
    else:
        try:
            probs = [Fraction(part) for part in args.probs.split(",")]
        except (ValueError, ZeroDivisionError):
            raise _UsageError(f"invalid --probs {args.probs!r}")
    seed = args.seed if args.seed is not None else _default_seed()
    config = {
        "fraction": args.fraction,
        "probs": args.probs,
        "samples": args.samples,
        "seed": seed,
        "format": args.format,
    }
    try:
        report = simulate_fractions(probs, args.samples, seed)
    except ParameterError as exc:
        raise _UsageError(str(exc))
    if args.format == "csv":
        text = report.to_csv()
        if args.output:
            with open(args.output, "w", encoding="utf-8") as handle:
                handle.write(text)
        else:
            sys.stdout.write(text)
    else:
        _emit("simulate", config, report.to_json(), args.output)
    return EXIT_OK if report.passed else EXIT_FAIL


def _cmd_compare(args) -> int:
    try:
        candidate = candidate_from_expression(args.candidate)
    except ParseError as exc:
        raise _UsageError(f"candidate does not parse: {exc}")
    if args.grid < 2:
        raise _UsageError("--grid must be >= 2")
    ledger = _load_ledger(args.ledger)
    report = continuity_extension_check(candidate, ledger, args.grid)
    config = {
        "candidate": args.candidate,
        "ledger": args.ledger,
        "grid": args.grid,
        "tolerance": args.tolerance,
    }
    passed = (
        report["max_rational_residual"] <= args.tolerance
        and report["max_grid_deviation_from_born"] <= args.tolerance
    )
    report["passed"] = passed
    _emit("compare", config, report, args.output)
    return EXIT_OK if passed else EXIT_FAIL


_COMMANDS = {
    "derive": _cmd_derive,
    "certify": _cmd_certify,
    "falsify": _cmd_falsify,
    "simulate": _cmd_simulate,
    "compare": _cmd_compare,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.subcommand](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_NOINPUT


if __name__ == "__main__":
    sys.exit(main())
