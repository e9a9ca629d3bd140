"""Command-line front end: ``gprdensity <subcommand> ...``.

Exit status: 0 success, 1 a check found mismatches, 2 usage error,
3 the input violates a mathematical precondition, 4 resource limits.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

from . import constants, report
from .almost_prime import DEFAULT_MEMORY_BUDGET, Mode
from .errors import HypothesisError, MemoryBudgetError

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_PRECONDITION, EXIT_RESOURCE = 0, 1, 2, 3, 4
PRECISION_ENV = "GPRDENSITY_PRECISION_BITS"
TABLE_ELLS = (1, 2, 5, 10, 20, 50)
TABLE_BASES = (2, 3, 5)


@dataclass
class RunConfig:
    subcommand: str
    a: int | None = None
    ell: int | None = None
    x: int | None = None
    n: int | None = None
    mode: str = Mode.AT_MOST.value
    P: int = constants.DEFAULT_TRUNCATION
    precision_bits: int = constants.DEFAULT_PRECISION
    fmt: str = "json"
    output: str | None = None
    workers: int = 1

    def validate(self):
        if self.P < 100:
            raise ValueError("--P must be >= 100")
        if self.precision_bits < 96:
            raise ValueError("--precision-bits must be >= 96")
        if self.ell is not None and self.ell < 1:
            raise ValueError("--ell must be >= 1")
        if self.x is not None and self.x < 2:
            raise ValueError("--x must be >= 2")
        if self.workers < 1:
            raise ValueError("--workers must be >= 1")


def _default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    return int(raw) if raw else constants.DEFAULT_PRECISION


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=("json", "csv", "human"), default=None,
                        help="output format (default: csv for table, json otherwise)")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    common.add_argument("--workers", type=int, default=1)

    precise = argparse.ArgumentParser(add_help=False)
    precise.add_argument("--P", type=int, default=constants.DEFAULT_TRUNCATION, help="truncation prime")
    precise.add_argument("--precision-bits", type=int, default=_default_precision())

    parser = argparse.ArgumentParser(prog="gprdensity", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("constant", parents=[common, precise], help="density constant breakdown")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)

    p = sub.add_parser("count", parents=[common, precise], help="count almost primes with a as gpr")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.AT_MOST.value)
    p.add_argument("--predict", action="store_true", help="attach the predicted constant")
    p.add_argument("--memory-budget", type=int, default=DEFAULT_MEMORY_BUDGET, help="sieve budget in bytes")

    p = sub.add_parser("test", parents=[common], help="test one modulus both ways")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("verify", parents=[common], help="run self-check suites")
    p.add_argument("--suite", choices=("identities", "characterization"), required=True)
    p.add_argument("--ell-max", type=int, default=10)
    p.add_argument("--bound", type=int, default=10**6)

    p = sub.add_parser("splitting", parents=[common], help="empirical split-prime density")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--m-prime", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--x", type=int, default=10**6)

    p = sub.add_parser("table", parents=[common, precise], help="grid of constants as CSV")
    p.add_argument("--ells", type=_int_list, default=list(TABLE_ELLS))
    p.add_argument("--bases", type=_int_list, default=list(TABLE_BASES))
    return parser


def _cmd_constant(args):
    spec = constants.DensitySpec.from_a(args.a, args.ell)
    return [constants.density_constant(spec, args.P, args.precision_bits)], EXIT_OK


def _cmd_count(args):
    from . import empirics

    if args.predict:
        rep = empirics.density_report(
            args.a, args.ell, args.x, args.mode, args.P, args.precision_bits, args.workers, args.memory_budget
        )
    else:
        rep = empirics.count_gpr(args.a, args.ell, args.x, args.mode, args.workers, memory_budget=args.memory_budget)
    return [rep], EXIT_OK


def _cmd_test(args):
    from . import arith, gpr

    f = arith.factorize(args.n)
    direct = gpr.is_gpr_direct(args.a, f)
    if f.is_squarefree and f.n > 1:
        try:
            charac = gpr.is_gpr_characterization(args.a, gpr.SquarefreeModulus.from_factorization(f))
        except ValueError:
            charac = False
    else:
        charac = None
    agree = charac is None or charac == direct
    rec = {"a": args.a, "n": args.n, "characterization": charac, "direct": direct, "agree": agree}
    return [rec], EXIT_OK if agree else EXIT_MISMATCH


def _cmd_verify(args):
    from . import verify

    if args.suite == "identities":
        res = verify.identity_suite(ell_max=args.ell_max)
    else:
        res = verify.characterization_suite(args.bound, workers=args.workers)
    rec = {"suite": res.name, "checked": res.checked, "mismatches": len(res.mismatches),
           "first_mismatches": repr(res.mismatches[:5])}
    return [rec], EXIT_OK if res.ok else EXIT_MISMATCH


def _cmd_splitting(args):
    from . import splitting

    cfg = splitting.KummerConfig.from_a(args.a, args.m_prime, args.m)
    res = splitting.empirical_splitting_density(cfg, args.x)
    rec = {"a": args.a, "m_prime": args.m_prime, "m": args.m, "x": args.x,
           "hits": res.hits, "trials": res.trials, "observed": repr(res.observed),
           "expected": f"{res.expected.numerator}/{res.expected.denominator}",
           "epsilon": splitting.epsilon_correction(cfg), "degree": splitting.extension_degree(cfg)}
    return [rec], EXIT_OK


def _cmd_table(args):
    rows = []
    for ell in args.ells:
        value, _ = constants.euler_product((ell, 1), args.P, args.precision_bits)
        row = {"ell": ell, "euler_product": report.format_mpfr(value)}
        for a in args.bases:
            c = constants.density_constant(constants.DensitySpec.from_a(a, ell), args.P, args.precision_bits).C
            row[f"C({a})"] = report.format_mpfr(c)
        rows.append(row)
    return rows, EXIT_OK


COMMANDS = {
    "constant": _cmd_constant,
    "count": _cmd_count,
    "test": _cmd_test,
    "verify": _cmd_verify,
    "splitting": _cmd_splitting,
    "table": _cmd_table,
}


def _render(results, fmt: str) -> str:
    records = [r if isinstance(r, dict) else report.to_record(r) for r in results]
    if fmt == "json":
        import json

        return json.dumps(records[0] if len(records) == 1 else records, indent=2) + "\n"
    if fmt == "csv":
        return report.dumps_csv(records)
    return report.human(records)


def run(config: RunConfig, args: argparse.Namespace | None = None) -> int:
    """Dispatch one validated configuration; returns the exit status."""
    args = args or argparse.Namespace(**vars(config))
    try:
        config.validate()
        results, status = COMMANDS[config.subcommand](args)
    except HypothesisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (MemoryBudgetError, MemoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    text = _render(results, config.fmt)
    if config.output:
        with open(config.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = RunConfig(
        subcommand=args.subcommand,
        a=getattr(args, "a", None),
        ell=getattr(args, "ell", None),
        x=getattr(args, "x", None),
        n=getattr(args, "n", None),
        mode=getattr(args, "mode", Mode.AT_MOST.value),
        P=getattr(args, "P", constants.DEFAULT_TRUNCATION),
        precision_bits=getattr(args, "precision_bits", constants.DEFAULT_PRECISION),
        fmt=args.fmt or ("csv" if args.subcommand == "table" else "json"),
        output=args.output,
        workers=args.workers,
    )
    return run(config, args)


if __name__ == "__main__":
    sys.exit(main())
