"""Time the prime-field kernels under numba and pure numpy.

    python3 benchmarks/bench_kernels.py [--sizes 50 100 200] [--repeat 3]

Also times one Lefschetz rank on a cyclic polytope boundary
with each backend by re-importing in a subprocess with STRESSLAB_NO_JIT set.
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from stresslab import _kernels as K

P = 2147483629  # prime just below 2^31


def best_of(fn, repeat):
    out = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        out = min(out, time.perf_counter() - t)
    return out


def kernel_table(sizes, repeat):
    rng = np.random.default_rng(0)
    print(f"{'kernel':<8} {'n':>5} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for n in sizes:
        a = rng.integers(0, P, size=(n, n), dtype=np.int64)
        b = rng.integers(0, P, size=(n, n), dtype=np.int64)
        if K.HAVE_NUMBA:  # compile outside the timed region
            K.rref_mod_p_numba(a[:2, :2], P)
            K.matmul_mod_p_numba(a[:2, :2], b[:2, :2], P)
        for name, np_fn, jit_fn in (
            ("rref", lambda: K.rref_mod_p_numpy(a, P), lambda: K.rref_mod_p_numba(a, P)),
            ("matmul", lambda: K.matmul_mod_p_numpy(a, b, P), lambda: K.matmul_mod_p_numba(a, b, P)),
        ):
            t_np = best_of(np_fn, repeat)
            t_jit = best_of(jit_fn, repeat) if K.HAVE_NUMBA else float("nan")
            print(f"{name:<8} {n:>5} {t_np:>10.4f} {t_jit:>10.4f} {t_np / t_jit:>8.1f}")


SNIPPET = """
import time
from stresslab._kernels import BACKEND
from stresslab.complex import cyclic_polytope_boundary
from stresslab.lefschetz import lefschetz_check
c = cyclic_polytope_boundary(10, 4)
lefschetz_check(c, 1, field="fp:2147483629")  # warm-up
t = time.perf_counter()
cert = lefschetz_check(c, 2, field="fp:2147483629")
print(BACKEND, cert.rank, round(time.perf_counter() - t, 4))
"""


def end_to_end():
    print("\nend to end: Lefschetz k=2 on the cyclic 4-polytope with 10 vertices")
    for flag in ("0", "1"):
        env = dict(os.environ, STRESSLAB_NO_JIT=flag)
        res = subprocess.run([sys.executable, "-c", SNIPPET], env=env, capture_output=True, text=True)
        print("  backend, rank, seconds:", res.stdout.strip() or res.stderr.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--skip-end-to-end", action="store_true")
    args = ap.parse_args()
    print(f"numba available: {K.HAVE_NUMBA}; active backend: {K.BACKEND}")
    kernel_table(args.sizes, args.repeat)
    if not args.skip_end_to_end:
        end_to_end()


if __name__ == "__main__":
    main()
