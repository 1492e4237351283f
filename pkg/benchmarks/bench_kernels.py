"""Time the integer counting kernels with and without numba.

Run: python3 benchmarks/bench_kernels.py [--repeat N]
Set FLOEROBS_NUMBA=0 to see the fallback used as the default path.
"""
import argparse
import time

from floerobs import _kernels
from floerobs.graded_roots import SeifertData, seifert_invariants


def timed(fn, repeat):
    fn()  # warm up (and jit compile)
    t0 = time.perf_counter()
    for _ in range(repeat):
        out = fn()
    return (time.perf_counter() - t0) / repeat, out


def cases():
    for a in [(2, 3, 7), (2, 7, 13), (3, 5, 7), (5, 7, 11), (7, 11, 13)]:
        S = SeifertData(*a)
        e0, ws = seifert_invariants(S)
        A = S.a1 * S.a2 * S.a3
        yield "brieskorn_counts%s" % (a,), lambda a=a, u=None: _kernels.brieskorn_counts(*a, use_numba=u)
        yield "delta_values%s" % (a,), (
            lambda S=S, e0=e0, ws=ws, A=A, u=None:
            _kernels.delta_values(-e0, S.alphas, ws, 4 * A, use_numba=u))
    for p, q in [(3, 7), (5, 11), (11, 17)]:
        yield "torus_signature(%d,%d)" % (p, q), (
            lambda p=p, q=q, u=None: _kernels.torus_signature_count(p, q, use_numba=u))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    print("numba enabled by default: %s" % _kernels.ENABLE_NUMBA)
    print("%-32s %12s %12s %8s" % ("kernel", "numpy [ms]", "numba [ms]", "ratio"))
    for name, fn in cases():
        tp, rp = timed(lambda: fn(u=False), args.repeat)
        if _kernels.numba is not None:
            tn, rn = timed(lambda: fn(u=True), args.repeat)
            same = (rp == rn).all() if hasattr(rp, "all") else rp == rn
            assert same, "numba and numpy disagree on %s" % name
            print("%-32s %12.3f %12.3f %8.1f" % (name, tp * 1e3, tn * 1e3, tp / tn))
        else:
            print("%-32s %12.3f %12s" % (name, tp * 1e3, "n/a"))


if __name__ == "__main__":
    main()
