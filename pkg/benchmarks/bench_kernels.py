"""Compare the numba kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--bits 32 40 44] [--reps 3]

Each row solves the same discrete logs on both paths and checks that they
return the same answers.
"""

import argparse
import os
import statistics
import time

from votecrack import _kernels
from votecrack.dlp import bsgs, pollard_rho
from votecrack.modmath import GroupOrder, gen_safe_prime, make_rng


def _time(fn, reps):
    out, times = None, []
    for _ in range(reps):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return out, statistics.median(times)


def _on_path(jit, fn):
    old = os.environ.get("VOTECRACK_DISABLE_JIT")
    os.environ["VOTECRACK_DISABLE_JIT"] = "0" if jit else "1"
    try:
        return fn()
    finally:
        if old is None:
            del os.environ["VOTECRACK_DISABLE_JIT"]
        else:
            os.environ["VOTECRACK_DISABLE_JIT"] = old


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--bits", type=int, nargs="+", default=[32, 40, 44])
    ap.add_argument("--reps", type=int, default=3)
    ap.add_argument("--instances", type=int, default=5)
    args = ap.parse_args()

    if not _kernels._HAVE_NUMBA:
        print("numba is not installed; only the Python path is available")
        return

    # warm the JIT cache so compile time is not billed to the first row
    warm = gen_safe_prime(24, make_rng(0), GroupOrder.QR_SUBGROUP)
    _on_path(True, lambda: pollard_rho(warm.g, warm.g, warm.q, warm.p, make_rng(0)))
    _on_path(True, lambda: bsgs(warm.g, warm.g, warm.q, warm.p))

    print(f"{'kernel':<6} {'bits':>4} {'python s':>10} {'numba s':>10} {'speedup':>8}")
    for bits in args.bits:
        params = gen_safe_prime(bits, make_rng(bits), GroupOrder.QR_SUBGROUP)
        rng = make_rng(bits + 1)
        targets = [pow(params.g, rng.randrange(params.q), params.p) for _ in range(args.instances)]

        def rho():
            return [pollard_rho(params.g, h, params.q, params.p, make_rng(i)) for i, h in enumerate(targets)]

        def baby_giant():
            return [bsgs(params.g, h, params.q, params.p) for h in targets]

        for name, fn in (("rho", rho), ("bsgs", baby_giant)):
            py_out, py_t = _on_path(False, lambda: _time(fn, args.reps))
            jit_out, jit_t = _on_path(True, lambda: _time(fn, args.reps))
            assert py_out == jit_out, f"{name} paths disagree at {bits} bits"
            print(f"{name:<6} {bits:>4} {py_t:>10.4f} {jit_t:>10.4f} {py_t / jit_t:>7.1f}x")


if __name__ == "__main__":
    main()
