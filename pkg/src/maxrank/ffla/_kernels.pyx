# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: modular rank and modular polynomial product."""
import numpy as np
cimport numpy as cnp

ctypedef long long i64

cdef i64 LIMB = 1 << 16


cdef i64 _inv(i64 a, i64 p) noexcept nogil:
    cdef i64 t = 0, newt = 1, r = p, newr = a, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def rank_mod_p(A, i64 p):
    cdef cnp.ndarray[i64, ndim=2] M = np.array(A, dtype=np.int64, copy=True, order="C")
    if M.shape[0] == 0 or M.shape[1] == 0:
        return 0
    cdef Py_ssize_t m = M.shape[0], n = M.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef i64 inv, f, tmp
    cdef i64[:, ::1] W = M
    with nogil:
        for c in range(n):
            if r == m:
                break
            piv = -1
            for i in range(r, m):
                if W[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(c, n):
                    tmp = W[r, j]
                    W[r, j] = W[piv, j]
                    W[piv, j] = tmp
            inv = _inv(W[r, c], p)
            for j in range(c, n):
                W[r, j] = (W[r, j] * inv) % p
            for i in range(r + 1, m):
                f = W[i, c]
                if f == 0:
                    continue
                f = p - f  # add (p - f) * row instead of subtracting: one reduction
                for j in range(c, n):
                    W[i, j] = (W[i, j] + f * W[r, j]) % p
            r += 1
    return r


def polymul_mod_p(a, b, i64 p):
    cdef cnp.ndarray[i64, ndim=1] x = np.ascontiguousarray(a, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] y = np.ascontiguousarray(b, dtype=np.int64)
    cdef Py_ssize_t la = x.shape[0], lb = y.shape[0], i, j
    if la == 0 or lb == 0:
        return np.zeros(0, dtype=np.int64)
    if la < lb:
        x, y = y, x
        la, lb = lb, la
    if lb >= LIMB:
        raise OverflowError("operand too long for limb-split convolution")
    # split y into 16-bit limbs so that lb products of (31 x 16) bits fit in 63 bits
    cdef cnp.ndarray[i64, ndim=1] lo = np.zeros(la + lb - 1, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] hi = np.zeros(la + lb - 1, dtype=np.int64)
    cdef i64[::1] X = x, Y = y, L = lo, H = hi
    cdef i64 yj, ylo, yhi
    with nogil:
        for j in range(lb):
            yj = Y[j]
            if yj == 0:
                continue
            ylo = yj & (LIMB - 1)
            yhi = yj >> 16
            for i in range(la):
                L[i + j] += X[i] * ylo
                H[i + j] += X[i] * yhi
        for i in range(la + lb - 1):
            L[i] = (L[i] % p + (H[i] % p) * LIMB) % p
    return lo
