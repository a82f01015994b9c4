"""Pure numpy kernels: modular rank and modular polynomial product.

All inputs are int64 arrays with entries already reduced to [0, p), p < 2**31,
so a single product of two residues fits in a signed 64-bit integer.
"""
import numpy as np

_LIMB = 1 << 16


def rank_mod_p(A, p):
    A = np.array(A, dtype=np.int64, copy=True)
    if A.ndim != 2 or A.size == 0:
        return 0
    m, n = A.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r, c:] = (A[r, c:] * inv) % p
        below = A[r + 1:, c]
        rows = np.flatnonzero(below)
        if rows.size:
            rows += r + 1
            f = A[rows, c][:, None]
            A[rows, c:] = (A[rows, c:] - (f * A[r, c:]) % p) % p
        r += 1
    return r


def polymul_mod_p(a, b, p):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.size == 0 or b.size == 0:
        return np.zeros(0, dtype=np.int64)
    if min(a.size, b.size) >= _LIMB:
        raise OverflowError("operand too long for limb-split convolution")
    lo = b % _LIMB
    hi = b // _LIMB
    out = np.convolve(a, lo) % p
    out = (out + (np.convolve(a, hi) % p) * _LIMB) % p
    return out
