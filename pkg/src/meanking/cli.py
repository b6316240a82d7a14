"""Command-line entry point: verify, simulate, bases, tomography, diagnose.

All output is deterministic: a fixed default seed (never wall-clock entropy),
sorted JSON keys, no timestamps.  Exit codes: 0 success, 1 invariant or
protocol failure, 2 invalid input.  The only environment variable honored is
NO_COLOR, which disables the PASS/FAIL coloring of text output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .mub import (
    EXACT,
    FLOAT,
    PrimeDim,
    build_mub_family,
    diagnose_composite,
    verify_trace_relations,
    verify_unbiasedness,
)
from .protocol import (
    simulate,
    verify_entangled_basis,
    verify_measurement_basis,
    verify_retrodiction,
)
from .tomography import probabilities_of, random_density, reconstruct

SCHEMA_VERSION = 1
DEFAULT_SEED = 42

# full exact verification is pure-Python ring arithmetic; beyond these the
# p^2 x p^2 Gram checks stop being interactive
EXACT_VERIFY_MAX_P = 13
FLOAT_VERIFY_MAX_P = 31


def _use_color() -> bool:
    return sys.stdout.isatty() and not os.environ.get("NO_COLOR")


def _status(passed: bool) -> str:
    word = "PASS" if passed else "FAIL"
    if _use_color():
        code = "32" if passed else "31"
        return f"\x1b[{code}m{word}\x1b[0m"
    return word


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(payload: dict, out_path: str | None) -> None:
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", out_path)


class InvalidInput(Exception):
    """Invalid input; the CLI maps this to exit code 2."""


def _parse_prime(value: int, hint: str = "") -> PrimeDim:
    try:
        return PrimeDim(value)
    except ValueError as exc:
        raise InvalidInput(f"{exc}{hint}") from None


def cmd_verify(args) -> int:
    dim = _parse_prime(
        args.p, hint=f"; for composite dimensions run `meanking diagnose --p {args.p}`"
    )
    ceiling = EXACT_VERIFY_MAX_P if args.backend == EXACT else FLOAT_VERIFY_MAX_P
    if dim.p > ceiling:
        raise InvalidInput(
            f"p={dim.p} exceeds the {args.backend}-backend verify ceiling of {ceiling}"
        )
    fam = build_mub_family(dim, "object", args.backend)
    reports = [
        verify_unbiasedness(fam),
        verify_trace_relations(dim, args.backend),
        verify_entangled_basis(dim, args.backend),
        verify_measurement_basis(dim, args.backend),
        verify_retrodiction(dim, args.backend),
    ]
    passed = all(r.passed for r in reports)
    if args.json:
        _emit_json(
            {
                "command": "verify",
                "p": dim.p,
                "backend": args.backend,
                "passed": passed,
                "checks": [r.to_json() for r in reports],
            },
            args.out,
        )
    else:
        lines = [f"verify p={dim.p} backend={args.backend}"]
        for r in reports:
            lines.append(f"  {r.name:<20} {_status(r.passed)} ({r.checks} checks)")
        lines.append("all identities hold" if passed else "violations found")
        _emit("\n".join(lines) + "\n", args.out)
    return 0 if passed else 1


def cmd_simulate(args) -> int:
    dim = _parse_prime(args.p)
    try:
        summary = simulate(
            dim,
            rounds=args.rounds,
            strategy=args.king_strategy,
            seed=args.seed,
            keep_records=args.emit_rounds,
        )
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None
    if args.json:
        _emit_json(
            {"command": "simulate", **summary.to_json(include_records=args.emit_rounds)},
            args.out,
        )
    else:
        _emit(
            f"simulate p={dim.p} rounds={summary.rounds} seed={summary.seed} "
            f"strategy={summary.strategy}\n"
            f"successes={summary.successes} success_rate={summary.success_rate}\n",
            args.out,
        )
    return 0 if summary.success_rate == 1.0 else 1


def cmd_bases(args) -> int:
    dim = _parse_prime(args.p)
    fam = build_mub_family(dim, args.side, args.backend)
    if args.format == "json":
        _emit_json({"command": "bases", **fam.to_json()}, args.out)
    else:
        float_fam = fam.as_float()
        lines = [f"bases p={dim.p} side={args.side} backend={args.backend}"]
        for m in range(dim.p + 1):
            lines.append(f"basis m={m}")
            for k in range(1, dim.p + 1):
                ket = float_fam.ket(m, k)
                comps = "  ".join(f"{z.real:+.6f}{z.imag:+.6f}i" for z in ket)
                lines.append(f"  k={k}: {comps}")
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_tomography(args) -> int:
    dim = _parse_prime(args.p)
    fam = build_mub_family(dim, "object", FLOAT)
    rho = random_density(dim, args.seed)
    table = probabilities_of(rho, fam)
    rebuilt = reconstruct(table, fam)
    error = float(np.linalg.norm(rebuilt.matrix - rho.matrix))
    payload = {
        "command": "tomography",
        "p": dim.p,
        "seed": args.seed,
        "rho": rho.to_json(),
        "table": table.to_json(),
        "reconstruction": rebuilt.to_json(),
        "frobenius_error": error,
    }
    if args.json:
        _emit_json(payload, args.out)
    else:
        _emit(
            f"tomography p={dim.p} seed={args.seed}\n"
            f"frobenius_error={error:.3e} {_status(error <= 1e-9)}\n",
            args.out,
        )
    return 0 if error <= 1e-9 else 1


def cmd_diagnose(args) -> int:
    try:
        diag = diagnose_composite(args.p)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None
    if args.json:
        _emit_json({"command": "diagnose", **diag.to_json()}, args.out)
    else:
        lines = [
            f"diagnose n={diag.n}: {len(diag.witnesses)} violated-invariant witnesses",
            f"first failure: {diag.first_failure}",
        ]
        for w in diag.witnesses[:8]:
            lines.append(f"  {w}")
        _emit("\n".join(lines) + "\n", args.out)
    return 0 if diag.witnesses else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meanking",
        description=(
            "Complementary observables for prime dimensions: construction, "
            "exact verification, retrodiction-protocol simulation, tomography, "
            "and composite-dimension diagnosis."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser(
        "verify",
        help="check every construction identity at a prime p "
        f"(exact backend up to p={EXACT_VERIFY_MAX_P}, float up to p={FLOAT_VERIFY_MAX_P})",
    )
    verify.add_argument("--p", type=int, required=True)
    verify.add_argument("--backend", choices=[EXACT, FLOAT], default=EXACT)
    verify.add_argument("--json", action="store_true")
    verify.add_argument("--out", default=None)
    verify.set_defaults(func=cmd_verify)

    sim = sub.add_parser("simulate", help="play seeded protocol rounds")
    sim.add_argument("--p", type=int, required=True)
    sim.add_argument("--rounds", type=int, default=1000)
    sim.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sim.add_argument("--king-strategy", default="uniform", metavar="uniform|fixed:<m>")
    sim.add_argument("--json", action="store_true")
    sim.add_argument("--emit-rounds", action="store_true")
    sim.add_argument("--out", default=None)
    sim.set_defaults(func=cmd_simulate)

    bases = sub.add_parser("bases", help="emit the p+1 orthonormal bases")
    bases.add_argument("--p", type=int, required=True)
    bases.add_argument("--side", choices=["object", "ancilla"], default="object")
    bases.add_argument("--backend", choices=[EXACT, FLOAT], default=EXACT)
    bases.add_argument("--format", choices=["json", "text"], default="json")
    bases.add_argument("--out", default=None)
    bases.set_defaults(func=cmd_bases)

    tomo = sub.add_parser("tomography", help="round-trip a random state through its probability table")
    tomo.add_argument("--p", type=int, required=True)
    tomo.add_argument("--seed", type=int, default=DEFAULT_SEED)
    tomo.add_argument("--json", action="store_true")
    tomo.add_argument("--out", default=None)
    tomo.set_defaults(func=cmd_tomography)

    diag = sub.add_parser("diagnose", help="show what breaks at a composite dimension")
    diag.add_argument("--p", type=int, required=True)
    diag.add_argument("--json", action="store_true")
    diag.add_argument("--out", default=None)
    diag.set_defaults(func=cmd_diagnose)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
