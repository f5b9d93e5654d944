"""Time the compiled kernels against the numpy/pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--quick]

Each kernel runs on identical inputs under both backends; outputs are
compared before timing so a speedup never hides a wrong answer.
"""

from __future__ import annotations

import argparse
import time
from collections.abc import Callable

import numpy as np

from orthash import _backend
from orthash.codes import plan_random, plan_rs, rs_bad_vector, rs_code


def _cases(quick: bool) -> list[tuple[str, Callable]]:
    big = plan_rs(6, 12, 3) if not quick else plan_rs(6, 8, 2)
    G, b = big.code.generator, big.bad.b
    total = min(big.q**big.k, 2000 if quick else 20000)
    rnd = plan_random(2, 8, 2, seed=1, p_override=5)
    A = np.asarray(
        _backend.python_kernels.build_rows(
            rnd.code.generator, rnd.bad.b, rnd.q, rnd.n, rnd.tau, 0, rnd.q**rnd.k
        ),
        dtype=np.int32,
    )
    p61 = (1 << 61) - 1
    code61 = rs_code(p61, 12, 3)
    bad61 = rs_bad_vector(p61, 12, 4)
    rng = np.random.default_rng(0)
    coeffs = rng.integers(0, p61, 8, dtype=np.int64)
    xs = rng.integers(1, 1 << 40, 20000 if quick else 200000, dtype=np.int64)
    hp = 13 if quick else 37  # both = 1 mod 6
    return [
        (f"build_rows RS({big.n},{big.m},{big.t}) {total} codewords",
         lambda k: k.build_rows(G, b, big.q, big.n, big.tau, 0, total)),
        ("subset_worst_deviation 40000x8 t=2",
         lambda k: k.subset_worst_deviation(A, 2, 2, A.shape[0] // 4)),
        ("subset_worst_deviation 40000x8 t=4",
         lambda k: k.subset_worst_deviation(A, 2, 4, A.shape[0] // 16)),
        (f"hash_counts n=6 t=3 p={hp}",
         lambda k: k.hash_counts(6, 3, hp, (1, 2, 3))),
        ("subsets_full_rank RS(p=2^61-1, m=12) r=4",
         lambda k: k.subsets_full_rank(code61.generator, p61, 4)),
        ("any_subset_consistent RS(p=2^61-1, m=12) r=5",
         lambda k: k.any_subset_consistent(code61.generator, bad61.b, p61, 5)),
        (f"hash_gap_batch t=8 x{len(xs)} p=2^61-1",
         lambda k: k.hash_gap_batch(coeffs, xs, p61)),
    ]


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    if isinstance(a, list):
        return [tuple(x) for x in a] == [tuple(x) for x in b]
    return bool(np.array_equal(np.asarray(a), np.asarray(b)))


def _time(fn: Callable, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller inputs")
    args = ap.parse_args()

    fast = _backend.compiled_kernels
    slow = _backend.python_kernels
    if fast is None:
        raise SystemExit("compiled kernels are not built; run `pip install -e .` first")

    print(f"{'kernel':<48} {'python':>10} {'cython':>10} {'speedup':>9}")
    for name, case in _cases(args.quick):
        ref, got = case(slow), case(fast)
        if not _same(ref, got):
            raise SystemExit(f"backends disagree on {name}")
        ts = _time(lambda: case(slow), args.repeat)
        tf = _time(lambda: case(fast), args.repeat)
        print(f"{name:<48} {ts * 1e3:>8.1f}ms {tf * 1e3:>8.1f}ms {ts / tf:>8.1f}x")


if __name__ == "__main__":
    main()
