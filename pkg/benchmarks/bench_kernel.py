"""Compare the compiled and pure-Python row-reduction kernels.

    python3 benchmarks/bench_kernel.py [--repeat 200] [--seed 0]

Times raw ``rref`` calls on random Gaussian-integer matrices, then two
end-to-end workloads (a general-position check and a generic certificate
verification) with each backend switched in.
"""

import argparse
import random
import time

from rigidweb import _kernel_py, kernel
from rigidweb.genpos import system_in_general_position
from rigidweb.linalg import random_system
from rigidweb.rigidity import cert_hyperplanes, verify_certificate_generic

try:
    from rigidweb import _kernel
except ImportError:
    _kernel = None


def random_rows(rng, m, n, bound, complex_entries):
    rows = []
    for _ in range(m):
        r = []
        for _ in range(n):
            r.append(rng.randint(-bound, bound))
            r.append(rng.randint(-bound, bound) if complex_entries else 0)
        rows.append(r)
    return rows


def time_rref(fn, cases, repeat):
    t = time.perf_counter()
    for _ in range(repeat):
        for rows, n in cases:
            fn(rows, n)
    return (time.perf_counter() - t) / (repeat * len(cases))


def workload(name):
    kernel.set_backend(name)
    t = time.perf_counter()
    for seed in range(5):
        system_in_general_position(random_system(4, (1, 2, 3, 1, 2, 3, 2), seed))
    gp = time.perf_counter() - t
    t = time.perf_counter()
    verify_certificate_generic(cert_hyperplanes(4, 5), trials=50)
    ver = time.perf_counter() - t
    return gp, ver


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if _kernel is None:
        print("compiled kernel not built; nothing to compare")
        return
    rng = random.Random(args.seed)
    print(f"{'shape':>10} {'entries':>8} {'cython us':>10} {'python us':>10} {'speedup':>8}")
    for m, n in [(3, 3), (4, 6), (6, 5), (8, 8), (12, 10)]:
        for cplx in (False, True):
            cases = [(random_rows(rng, m, n, 100, cplx), n) for _ in range(20)]
            tc = time_rref(_kernel.rref, cases, args.repeat)
            tp = time_rref(_kernel_py.rref, cases, args.repeat)
            label = "complex" if cplx else "real"
            print(f"{m:>4} x {n:<3} {label:>8} {tc * 1e6:>10.1f} {tp * 1e6:>10.1f} {tp / tc:>7.1f}x")
    print()
    print(f"{'backend':>8} {'genpos s':>10} {'verify s':>10}")
    for name in ("cython", "python"):
        gp, ver = workload(name)
        print(f"{name:>8} {gp:>10.2f} {ver:>10.2f}")
    kernel.set_backend("cython")


if __name__ == "__main__":
    main()
