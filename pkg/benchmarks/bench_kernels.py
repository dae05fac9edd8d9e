"""Compare the compiled and pure-Python Bareiss kernels.

    python benchmarks/bench_kernels.py [--sizes 20 40 80] [--repeat 3]

Three workloads: every codifferential block used by the homology
computation, random sparse small-integer matrices, and a full homology
run with the kernel switched underneath it. Both backends must agree on
every result. Random matrices of moderate size usually push the int64
kernel into overflow, so the compiled path falls back to Python there;
the table reports how many did.
"""

import argparse
import random
import time

from cartankit import homology, linalg


def sparse_matrix(rng, rows, cols, density=0.15):
    return [[rng.choice((-2, -1, 1, 2)) if rng.random() < density else 0 for _ in range(cols)]
            for _ in range(rows)]


def best_of(fn, repeat):
    best, out = None, None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        dt = time.perf_counter() - t
        best = dt if best is None else min(best, dt)
    return best, out


def overflows(m, ncols):
    try:
        linalg._elim_c.bareiss_echelon(m, ncols)
    except OverflowError:
        return True
    return False


def run_both(mats, repeat, label):
    tc, rc = best_of(lambda: [linalg.echelon_int(m, c, "cython") for m, c in mats], repeat)
    tp, rp = best_of(lambda: [linalg.echelon_int(m, c, "python") for m, c in mats], repeat)
    assert rc == rp, "backends disagree"
    fell = sum(overflows(m, c) for m, c in mats)
    print(f"{label:>24} {len(mats):>5} {fell:>9} {tc:>10.4f} {tp:>10.4f} {tp / tc:>7.1f}x")


def codiff_blocks(n):
    mats = []
    for c in (2, 3):
        for key in homology.chain_blocks(n, c):
            m, src, tgt = homology.codiff_matrix(n, c, key)
            if m and src:
                mats.append((m, len(src)))
    return mats


def bench_matrices(sizes, repeat, seed):
    rng = random.Random(seed)
    print(f"{'workload':>24} {'mats':>5} {'overflow':>9} {'cython s':>10} {'python s':>10} {'speedup':>8}")
    for n in (4, 5):
        run_both(codiff_blocks(n), repeat, f"codiff blocks n={n}")
    for n in sizes:
        mats = [(sparse_matrix(rng, n, n, 3 / n), n) for _ in range(5)]
        run_both(mats, repeat, f"random sparse {n}x{n}")


def bench_homology(n, repeat):
    saved = linalg.BACKEND
    res = {}
    try:
        for backend in ("cython", "python"):
            linalg.BACKEND = backend
            res[backend] = best_of(lambda: homology.homology_dims(n), repeat)
    finally:
        linalg.BACKEND = saved
    assert res["cython"][1] == res["python"][1], "backends disagree"
    tc, tp = res["cython"][0], res["python"][0]
    print(f"homology n={n}: cython {tc:.3f}s, python {tp:.3f}s, speedup {tp / tc:.1f}x")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[20, 40, 80])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--homology-n", type=int, default=4)
    args = ap.parse_args()
    if linalg._elim_c is None:
        print("compiled kernel not available; only the Python backend would run")
        return
    bench_matrices(args.sizes, args.repeat, args.seed)
    bench_homology(args.homology_n, args.repeat)


if __name__ == "__main__":
    main()
