"""Hot loops for linear algebra over prime fields.

Two interchangeable implementations are provided for every kernel: a numba
``@njit`` version and a vectorized pure-numpy version.  The numba path is
used when numba imports cleanly and the environment variable
``STRESSLAB_NO_JIT`` is unset (or ``0``); otherwise the numpy path is used.

All kernels operate on ``int64`` arrays whose entries lie in ``[0, p)`` with
``p < 2**31`` so that a single product fits in 63 bits.
"""
from __future__ import annotations

import os

import numpy as np

MAX_PRIME = 2**31


def _inv_mod(a: int, p: int) -> int:
    return pow(int(a), -1, int(p))


# --------------------------------------------------------------------------
# numpy implementations
# --------------------------------------------------------------------------

def rref_mod_p_numpy(a: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form of ``a`` mod ``p``; returns (rows, pivots).

    ``rows`` holds only the nonzero rows; ``pivots[i]`` is the pivot column
    of row ``i``.
    """
    a = np.array(a, dtype=np.int64, copy=True)
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = _inv_mod(a[r, c], p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            a[rows] = (a[rows] - np.outer(col[rows], a[r]) % p) % p
        pivots.append(c)
        r += 1
    return a[:r], np.asarray(pivots, dtype=np.int64)


def matmul_mod_p_numpy(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    # split a into 16-bit halves so every partial sum stays below 2**63
    lo = a & 0xFFFF
    hi = a >> 16
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    step = 1 << 15
    for s in range(0, a.shape[1], step):
        bs = b[s:s + step]
        plo = (lo[:, s:s + step] @ bs) % p
        phi = (hi[:, s:s + step] @ bs) % p
        out = (out + plo + (phi * 65536) % p) % p
    return out


# --------------------------------------------------------------------------
# numba implementations
# --------------------------------------------------------------------------

try:
    from numba import njit

    @njit(cache=True)
    def _rref_mod_p_jit(a, p):
        nrows, ncols = a.shape
        pivots = np.empty(min(nrows, ncols), dtype=np.int64)
        r = 0
        for c in range(ncols):
            if r == nrows:
                break
            i = r
            while i < nrows and a[i, c] == 0:
                i += 1
            if i == nrows:
                continue
            if i != r:
                for j in range(ncols):
                    t = a[r, j]
                    a[r, j] = a[i, j]
                    a[i, j] = t
            # modular inverse by extended Euclid
            x0, x1, aa, bb = 1, 0, a[r, c], p
            while bb != 0:
                q = aa // bb
                aa, bb = bb, aa - q * bb
                x0, x1 = x1, x0 - q * x1
            inv = x0 % p
            for j in range(c, ncols):
                a[r, j] = (a[r, j] * inv) % p
            for i2 in range(nrows):
                if i2 == r:
                    continue
                f = a[i2, c]
                if f == 0:
                    continue
                for j in range(c, ncols):
                    if a[r, j] != 0:
                        a[i2, j] = (a[i2, j] - f * a[r, j]) % p
            pivots[r] = c
            r += 1
        return r, pivots

    @njit(cache=True)
    def _matmul_mod_p_jit(a, bt, p):
        # products are < 2**62, so three of them fit in a uint64 before reducing
        n, m = a.shape
        k = bt.shape[0]
        out = np.zeros((n, k), dtype=np.int64)
        up = np.uint64(p)
        for i in range(n):
            for j in range(k):
                acc = np.uint64(0)
                cnt = 0
                for t in range(m):
                    x = a[i, t]
                    if x == 0:
                        continue
                    acc += np.uint64(x) * np.uint64(bt[j, t])
                    cnt += 1
                    if cnt == 3:
                        acc %= up
                        cnt = 0
                out[i, j] = np.int64(acc % up)
        return out

    def rref_mod_p_numba(a: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
        a = np.array(a, dtype=np.int64, copy=True)
        if a.size == 0:
            return a[:0], np.zeros(0, dtype=np.int64)
        r, piv = _rref_mod_p_jit(a, np.int64(p))
        return a[:r], piv[:r].copy()

    def matmul_mod_p_numba(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
        a = np.ascontiguousarray(a, dtype=np.int64)
        bt = np.ascontiguousarray(np.asarray(b, dtype=np.int64).T)
        return _matmul_mod_p_jit(a, bt, np.int64(p))

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False
    rref_mod_p_numba = None
    matmul_mod_p_numba = None


def _use_jit() -> bool:
    flag = os.environ.get("STRESSLAB_NO_JIT", "0").strip().lower()
    return HAVE_NUMBA and flag in ("", "0", "false", "no")


BACKEND = "numba" if _use_jit() else "numpy"

if BACKEND == "numba":
    rref_mod_p = rref_mod_p_numba
    matmul_mod_p = matmul_mod_p_numba
else:
    rref_mod_p = rref_mod_p_numpy
    matmul_mod_p = matmul_mod_p_numpy
