"""Command-line interface: ``weingarten {eval,paths,sample,verify}``.

Exit codes: 0 success, 1 a bound failed, 2 bad input, 3 a size cap was hit,
4 a singular system. Output goes to stdout only on success; diagnostics go
to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import bounds
from .exact import (
    CapExceededError,
    format_fraction,
    parse_fraction,
    wg_full_cycle,
    wg_orthogonal_gram,
    wg_orthogonal_series,
    wg_symplectic,
    wg_unitary_gram,
    wg_unitary_recursion,
    wg_unitary_series,
)
from .graph import EnumerationCapError, count_paths_orthogonal, count_paths_unitary
from .linalg import SingularMatrixError
from .pairing import Pairing, coset_representative
from .perm import ParseError, Partition, Permutation, cycle_type, partitions
from .process import (
    estimate_L_power_sum,
    estimate_Ti_tail_curve,
    estimate_time_to_halve,
    run_wp_orthogonal,
    run_wp_unitary,
)
from .rng import Stream

EXIT_OK, EXIT_BOUND, EXIT_INPUT, EXIT_CAP, EXIT_SINGULAR = 0, 1, 2, 3, 4


class UsageError(ValueError):
    """Flags are individually valid but do not fit together."""


def _N(text: str) -> Fraction:
    try:
        return parse_fraction(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weingarten", description="Exact Weingarten values, path counts, sampling and bound checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def state_flags(p, pairing=True):
        p.add_argument("--group", choices=("U", "O", "SP"), default="U")
        p.add_argument("--n", type=int)
        group = p.add_mutually_exclusive_group()
        group.add_argument("--class", "--lambda", dest="cls", metavar="PARTITION", help='cycle or coset type, e.g. "3,1"')
        group.add_argument("--sigma", help='permutation in cycle notation, e.g. "(1 2 3)(4 5)"')
        if pairing:
            group.add_argument("--pairing", help='pairing, e.g. "{1-2, 3-4}"')

    p = sub.add_parser("eval", help="exact Weingarten values")
    state_flags(p)
    p.add_argument("--N", type=_N, required=True, help='exact "p" or "p/q"')
    p.add_argument("--method", choices=("gram", "recursion", "series", "closed"))
    p.add_argument("--g-max", type=int, default=6, help="last genus of a series evaluation")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("paths", help="count paths in the Weingarten graph")
    state_flags(p)
    p.add_argument("--g", type=int, default=0)
    p.add_argument("--g1", type=int, default=0)
    p.add_argument("--g2", type=int, default=0)

    p = sub.add_parser("sample", help="run the Weingarten process")
    state_flags(p)
    p.add_argument("--stat", choices=("trace", "Lsum", "T", "Titail"), default="trace")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exponent", type=_N, default=Fraction(3, 2), help="power of L in Lsum")
    p.add_argument("--i", type=int, default=0, help="index i of the increment T_{i+1} - T_i")
    p.add_argument("--t", type=int, action="append", help="tail threshold (repeatable)")

    p = sub.add_parser("verify", help="certify a bound on finite instances")
    p.add_argument("--claim", choices=tuple(bounds.CLAIMS), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--N", type=_N, help='exact "p" or "p/q"')
    p.add_argument("--class", "--lambda", dest="cls", metavar="PARTITION", help="start class for the process claim")
    p.add_argument("--norm-cap", type=int, default=2, help="largest |sigma| for the small claim")
    p.add_argument("--seed", type=int, default=bounds.DEFAULT_SEED)
    p.add_argument("--samples", type=int, default=bounds.MC_SAMPLES)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--workers", type=int, default=1)
    return parser


# --------------------------------------------------------------------------
# State resolution
# --------------------------------------------------------------------------


def _resolve_class(args) -> Partition | None:
    """The class named by ``--class``, ``--sigma`` or ``--pairing``, checked against ``--n``."""
    lam = None
    if args.cls is not None:
        lam = Partition.parse(args.cls)
    elif args.sigma is not None:
        lam = cycle_type(Permutation.parse(args.sigma, args.n))
    elif getattr(args, "pairing", None) is not None:
        lam = Pairing.parse(args.pairing).coset_type
    if lam is not None and args.n is not None and lam.size != args.n:
        raise UsageError(f"class {lam} has size {lam.size}, not --n {args.n}")
    return lam


def _level(args, lam: Partition | None) -> int:
    if lam is not None:
        return lam.size
    if args.n is None:
        raise UsageError("give --n or a state")
    if args.n < 0:
        raise UsageError("--n must be nonnegative")
    return args.n


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------


def cmd_eval(args) -> str:
    lam = _resolve_class(args)
    n = _level(args, lam)
    group = args.group
    method = args.method or ("recursion" if group == "U" else "gram")
    if method == "closed":
        if group != "U" or lam is None or lam.length != 1:
            raise UsageError("the closed form covers the full cycle class of U only")
        return _emit_values(args, {lam: wg_full_cycle(n, args.N)})
    if method == "series":
        if lam is None:
            raise UsageError("a series evaluation needs one class")
        if group == "U":
            res = wg_unitary_series(lam.representative(), args.N, args.g_max)
        elif group == "O":
            pi = Pairing.parse(args.pairing) if args.pairing else coset_representative(lam)
            res = wg_orthogonal_series(pi, args.N, args.g_max)
        else:
            raise UsageError("no series engine for SP")
        if args.format == "json":
            return json.dumps(
                {"partition": str(lam), "partial": format_fraction(res.partial), "tail": format_fraction(res.tail), "terms": list(res.terms)}
            ) + "\n"
        return f"partial {format_fraction(res.partial)}\ntail {format_fraction(res.tail)}\n"
    if group == "U":
        table = wg_unitary_gram(n, args.N) if method == "gram" else wg_unitary_recursion(n, args.N)
    elif method != "gram":
        raise UsageError(f"{group} values come from the gram method only")
    elif group == "O":
        table = wg_orthogonal_gram(n, args.N)
    else:
        table = wg_symplectic(n, args.N)
    wanted = [lam] if lam is not None else partitions(n)
    values = {mu: table[mu] for mu in wanted}
    if args.format == "json":
        recs = [r for r in table.records() if r["level"] == n and Partition.parse(r["partition"]) in values]
        return json.dumps(recs, ensure_ascii=False) + "\n"
    prefix = "" if table.sign_resolved else "±"
    return _emit_values(args, values, prefix)


def _emit_values(args, values: dict, prefix: str = "") -> str:
    if args.format == "json":
        return json.dumps([{"partition": str(k), "value": format_fraction(v)} for k, v in values.items()], ensure_ascii=False) + "\n"
    if len(values) == 1:
        return prefix + format_fraction(next(iter(values.values()))) + "\n"
    return "".join(f"{k}\t{prefix}{format_fraction(v)}\n" for k, v in values.items())


def cmd_paths(args) -> str:
    if args.group == "U":
        if args.sigma is not None:
            sigma = Permutation.parse(args.sigma, args.n)
        else:
            lam = _resolve_class(args)
            if lam is None:
                raise UsageError("give --class or --sigma")
            sigma = lam.representative()
        return f"{count_paths_unitary(sigma, args.g)}\n"
    if args.pairing is not None:
        pi = Pairing.parse(args.pairing)
        if args.n is not None and pi.n != args.n:
            raise UsageError(f"pairing has n = {pi.n}, not --n {args.n}")
    else:
        lam = _resolve_class(args)
        if lam is None:
            raise UsageError("give --pairing or --class")
        pi = coset_representative(lam)
    return f"{count_paths_orthogonal(pi, args.g1, args.g2)}\n"


def cmd_sample(args) -> str:
    lam = _resolve_class(args)
    if args.group == "SP":
        raise UsageError("sampling covers U and O")
    if args.stat == "trace":
        if args.sigma is not None:
            start = Permutation.parse(args.sigma, args.n)
        elif getattr(args, "pairing", None) is not None:
            start = Pairing.parse(args.pairing)
        elif lam is not None:
            start = lam
        else:
            raise UsageError("give a starting state")
        runner = run_wp_orthogonal if args.group == "O" or isinstance(start, Pairing) else run_wp_unitary
        count = args.samples or 1
        return "".join(runner(start, Stream(args.seed, i)).to_jsonl() for i in range(count))
    if lam is None:
        raise UsageError("statistics need a start class")
    samples = args.samples or bounds.MC_SAMPLES
    if args.stat == "Lsum":
        reports = [estimate_L_power_sum(lam, args.exponent, samples, args.seed)]
    elif args.stat == "T":
        reports = [estimate_time_to_halve(lam, samples, args.seed)]
    else:
        reports = estimate_Ti_tail_curve(lam, args.i, args.t or [1], samples, args.seed)
    return "".join(r.to_json() + "\n" for r in reports)


def _verify_job(args) -> tuple[str, dict]:
    claim, n = args.claim, args.n
    needs_N = {"main", "orth", "small", "log", "energy"}
    if claim in needs_N and args.N is None:
        raise UsageError(f"claim {claim} needs --N")
    if claim in ("main", "orth", "log", "energy"):
        return claim, {"n": n, "N": args.N}
    if claim == "small":
        return claim, {"n_max": n, "norm_cap": args.norm_cap, "Ns": [args.N]}
    if claim == "paths":
        return claim, {"n": n, "samples": args.samples, "seed": args.seed}
    if claim == "process":
        lam = Partition.parse(args.cls) if args.cls else Partition((n,))
        if lam.size != n:
            raise UsageError(f"class {lam} has size {lam.size}, not --n {n}")
        return claim, {"lam": lam, "samples": args.samples, "seed": args.seed}
    return claim, {"k_max": n}


def cmd_verify(args) -> tuple[int, str]:
    results = bounds.run_jobs([_verify_job(args)], args.workers)
    report = bounds.emit_report(results, args.format)
    failures = [r for r in results if r.hypothesis_met and not r.satisfied]
    return (EXIT_BOUND if failures else EXIT_OK), report


# --------------------------------------------------------------------------
# Entry point
# --------------------------------------------------------------------------


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            code, text = cmd_verify(args)
            if args.out:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(text)
                text = ""
            if code != EXIT_OK:
                print("bound check failed", file=sys.stderr)
                sys.stderr.write(text)
                return code
        else:
            text = {"eval": cmd_eval, "paths": cmd_paths, "sample": cmd_sample}[args.command](args)
    except (CapExceededError, EnumerationCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except SingularMatrixError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (ParseError, UsageError, ValueError, ZeroDivisionError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
