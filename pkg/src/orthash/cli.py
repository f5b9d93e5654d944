"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 bad configuration,
3 size/work cap exceeded, 4 search or sampling exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from ._backend import BACKEND
from .codes import plan_random, plan_rs
from .errors import ConfigError, OAError
from .hash import HashFunction
from .oa import (
    DEFAULT_CELL_CAP,
    OrthogonalArray,
    build_oa,
    bush_oa,
    factor_sizes,
    product_for,
    rao_bound,
    rao_gap,
    read_csv,
    read_oa,
    stream_oa,
    write_csv,
    write_oa,
)
from .primes import PrimeSearchConfig, prime_in_ap, prime_power
from .verify import DEFAULT_WORK_CAP, verify_oa


def _fmt_ratio(r: Fraction) -> str:
    return f"{r.numerator}/{r.denominator} ({float(r):.6g})"


def _nu(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"--nu must be a rational number, got {text!r}") from None


def _positive(name: str):
    def parse(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer") from None
        if v < 1:
            raise argparse.ArgumentTypeError(f"{name} must be positive")
        return v

    return parse


def _add_nmt(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=_positive("n"), required=True, help="alphabet size")
    p.add_argument("--m", type=_positive("m"), required=True, help="number of columns / inputs")
    p.add_argument("--t", type=_positive("t"), required=True, help="strength")


def _check_nmt(n: int, m: int, t: int) -> None:
    if n < 2 or not 2 <= t <= m:
        raise ConfigError(f"need n >= 2 and 2 <= t <= m (n={n}, m={m}, t={t})")


# -- build -----------------------------------------------------------------


def cmd_build(args: argparse.Namespace) -> int:
    n, m, t = args.n, args.m, args.t
    _check_nmt(n, m, t)
    if args.p_override is not None and args.code != "random":
        raise ConfigError("--p-override only applies to --code random")
    if args.zero_based and args.format != "csv":
        raise ConfigError("--zero-based only applies to --format csv")
    out = sys.stdout if args.out in (None, "-") else None
    info = sys.stderr if out is not None else sys.stdout

    plan = None
    array: OrthogonalArray | None = None
    if args.code == "rs":
        plan = plan_rs(
            n, m, t, prime_mode=args.prime_mode, seed=args.seed, exponent_cap=_nu(args.nu)
        )
    elif args.code == "random":
        plan = plan_random(n, m, t, seed=args.seed, p_override=args.p_override)
    elif args.dry_run:
        raise ConfigError("--dry-run needs a code-based path (rs or random)")
    elif args.code == "bush":
        array = bush_oa(n, m, t)
    else:
        array = product_for(n, m, t, args.cell_cap)

    rao = rao_bound(m, n, t)
    if plan is not None:
        plan.check()
        desc = plan.describe()
        summary = " ".join(f"{k}={v}" for k, v in desc.items())
        s = plan.rows
        if args.dry_run:
            print(f"plan {summary} rao={rao} ratio={_fmt_ratio(rao_gap(s, m, n, t))}")
            return 0
    else:
        s = array.s
        summary = f"provenance={array.provenance} n={n} m={m} t={t} s={s}"

    def emit(fh) -> None:
        if args.format == "csv":
            write_csv(array if array is not None else build_oa(plan, args.cell_cap, args.threads),
                      fh, header=args.csv_header, zero_based=args.zero_based)
        elif array is not None:
            write_oa(array, fh)
        else:
            stream_oa(plan, fh, args.cell_cap, args.threads)

    if out is None:
        with open(args.out, "w", newline="\n") as fh:
            emit(fh)
    else:
        emit(out)
    lam = s // n**t
    print(f"{summary} lambda={lam} rao={rao} ratio={_fmt_ratio(rao_gap(s, m, n, t))}", file=info)
    return 0


# -- verify ----------------------------------------------------------------


def cmd_verify(args: argparse.Namespace) -> int:
    if args.format == "csv":
        if args.n is None:
            raise ConfigError("--n is required for csv input")
        A = read_csv(args.input, args.n, args.t, zero_based=args.zero_based)
    else:
        A = read_oa(args.input)
    report = verify_oa(A, args.t, work_cap=args.work_cap)
    if args.report == "json":
        print(json.dumps(report.to_json()))
    else:
        print(report.to_text())
    return 0 if report.passed else 1


def cmd_rao(args: argparse.Namespace) -> int:
    print(rao_bound(args.m, args.n, args.t))
    return 0


# -- hash ------------------------------------------------------------------


def _load_hash(path: str) -> HashFunction:
    return HashFunction.from_bytes(Path(path).read_bytes())


def _save_hash(h: HashFunction, path: str) -> None:
    Path(path).write_bytes(h.to_bytes())


def cmd_hash_new(args: argparse.Namespace) -> int:
    _check_nmt(args.n, args.m, args.t)
    h = HashFunction.new(
        args.n, args.m, args.t, args.seed, mode=args.mode, prime_mode=args.prime_mode,
        exponent_cap=_nu(args.nu),
    )
    blob = h.to_bytes()
    if args.out:
        Path(args.out).write_bytes(blob)
        print(f"n={h.n} m={h.m} t={h.t} p={h.p} mode={h.mode} bytes={len(blob)}")
    else:
        print(blob.hex())
    return 0


def cmd_hash_eval(args: argparse.Namespace) -> int:
    h = _load_hash(args.input)
    before = h.to_bytes()
    try:
        print(h(args.x))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if h.to_bytes() != before:
        _save_hash(h, args.input)
    return 0


def cmd_hash_batch(args: argparse.Namespace) -> int:
    h = _load_hash(args.input)
    before = h.to_bytes()
    text = sys.stdin.read() if args.inputs == "-" else Path(args.inputs).read_text()
    try:
        xs = [int(tok) for tok in text.split()]
        values = h.eval_many(xs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    sys.stdout.write("".join(f"{v}\n" for v in values))
    if h.to_bytes() != before:
        _save_hash(h, args.input)
    return 0


# -- prime / compare -------------------------------------------------------


def cmd_prime(args: argparse.Namespace) -> int:
    cfg = PrimeSearchConfig(
        args.eta, args.residue, args.min, _nu(args.nu), mode=args.mode, seed=args.seed
    )
    print(prime_in_ap(cfg))
    return 0


def compare_rows(n: int, m: int, t: int) -> list[dict]:
    """Sizes of each construction path for (n, m, t), without building."""
    rao = rao_bound(m, n, t)
    rows: list[dict] = [{"path": "rao", "s": rao, "note": "lower bound"}]
    rs = plan_rs(n, m, t)
    rows.append({"path": "rs", "s": rs.rows, "note": f"q={rs.q} tau={rs.tau} k={rs.k}"})
    pe = prime_power(n)
    if pe is None:
        rows.append({"path": "bush", "s": None, "note": f"n/a: {n} is not a prime power"})
    elif m > n + 1:
        rows.append({"path": "bush", "s": None, "note": f"n/a: needs m <= {n + 1}"})
    else:
        rows.append({"path": "bush", "s": n**t, "note": f"F_{n}"})
    parts = factor_sizes(n, m, t)
    s = 1
    for _, _, rows_f in parts:
        s *= rows_f
    note = " x ".join(f"{f}:{how}({rows_f})" for f, how, rows_f in parts)
    rows.append({"path": "product", "s": s, "note": note})
    for row in rows:
        row["ratio"] = None if row["s"] is None else Fraction(row["s"], rao)
    return rows


def cmd_compare(args: argparse.Namespace) -> int:
    _check_nmt(args.n, args.m, args.t)
    rows = compare_rows(args.n, args.m, args.t)
    print(f"{'path':<8} {'s':>14} {'s/rao':>14}  note")
    for row in rows:
        s = "-" if row["s"] is None else str(row["s"])
        r = "-" if row["ratio"] is None else f"{float(row['ratio']):.6g}"
        print(f"{row['path']:<8} {s:>14} {r:>14}  {row['note']}")
    return 0


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orthash",
        description="Orthogonal arrays and strongly t-universal hashing for any alphabet size.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct an orthogonal array")
    _add_nmt(p)
    p.add_argument("--code", choices=["rs", "random", "bush", "product"], default="rs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p-override", type=int, default=None,
                   help="prime for the random-code path (desk-scale testing)")
    p.add_argument("--prime-mode", choices=["scan", "sample"], default="scan")
    p.add_argument("--nu", default="6", help="prime search upper bound is eta**nu (rs path)")
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.add_argument("--csv-header", action="store_true")
    p.add_argument("--zero-based", action="store_true", help="csv symbols 0..n-1")
    p.add_argument("--dry-run", action="store_true", help="print the plan only")
    p.add_argument("--threads", type=_positive("threads"), default=1)
    p.add_argument("--cell-cap", type=_positive("cell-cap"), default=DEFAULT_CELL_CAP)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="check an array's strength exactly")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--t", type=_positive("t"), required=True)
    p.add_argument("--report", choices=["text", "json"], default="text")
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.add_argument("--n", type=_positive("n"), default=None, help="alphabet size (csv only)")
    p.add_argument("--zero-based", action="store_true")
    p.add_argument("--work-cap", type=_positive("work-cap"), default=DEFAULT_WORK_CAP)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("rao", help="Rao lower bound on the number of rows")
    _add_nmt(p)
    p.set_defaults(func=cmd_rao)

    p = sub.add_parser("hash", help="create and evaluate hash functions")
    hsub = p.add_subparsers(dest="hash_command", required=True)
    q = hsub.add_parser("new")
    _add_nmt(q)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--mode", choices=["lazy", "derived"], default="lazy")
    q.add_argument("--prime-mode", choices=["scan", "sample"], default="scan")
    q.add_argument("--nu", default="6", help="prime search upper bound is eta**nu")
    q.add_argument("--out", default=None, help="state file (default: print hex)")
    q.set_defaults(func=cmd_hash_new)
    q = hsub.add_parser("eval")
    q.add_argument("--in", dest="input", required=True)
    q.add_argument("--x", type=int, required=True)
    q.set_defaults(func=cmd_hash_eval)
    q = hsub.add_parser("batch")
    q.add_argument("--in", dest="input", required=True)
    q.add_argument("--inputs", required=True, help="file of whitespace-separated inputs, or -")
    q.set_defaults(func=cmd_hash_batch)

    p = sub.add_parser("prime", help="prime in an arithmetic progression")
    p.add_argument("--eta", type=int, required=True)
    p.add_argument("--min", type=int, default=0)
    p.add_argument("--residue", type=int, default=1)
    p.add_argument("--nu", default="6", help="exponent cap (may be a fraction)")
    p.add_argument("--mode", choices=["scan", "sample"], default="scan")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_prime)

    p = sub.add_parser("compare", help="sizes of each construction against the Rao bound")
    _add_nmt(p)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OAError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ConfigError.exit_code


if __name__ == "__main__":
    sys.exit(main())
