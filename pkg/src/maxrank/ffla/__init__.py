"""Exact dense linear algebra over prime fields, monomials and binary forms.

The two hot kernels (row reduction and polynomial convolution) come from a
compiled extension when it is importable and from a numpy implementation
otherwise.  Set ``MAXRANK_BACKEND=python`` to force the fallback.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

from . import _fallback

DEFAULT_PRIME = 2**31 - 1
SECOND_PRIME = 10**9 + 7

_impl = _fallback
if os.environ.get("MAXRANK_BACKEND", "").lower() != "python":
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _fallback

BACKEND = "python" if _impl is _fallback else "cython"


def is_prime(p):
    from sympy import isprime

    return bool(isprime(int(p)))


@dataclass(frozen=True)
class PrimeField:
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        p = int(self.p)
        if p < 3 or p >= 2**31 or not is_prime(p):
            raise ValueError(f"need an odd prime below 2**31, got {self.p}")

    def random(self, rng, size=None):
        return rng.integers(0, self.p, size=size, dtype=np.int64)


@dataclass(frozen=True)
class MonomialBasis:
    n: int
    t: int
    exponents: tuple

    def __len__(self):
        return len(self.exponents)

    def index(self, alpha):
        return self._lookup()[tuple(alpha)]

    def _lookup(self):
        return _basis_index(self.n, self.t)


def _compositions(total, parts):
    # exponent tuples summing to `total`, first coordinate descending
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def monomial_basis(n, t):
    """All (n+1)-variable exponent vectors of degree t in graded-lex order."""
    if n < 1 or t < 0:
        raise ValueError("need n >= 1 and t >= 0")
    return MonomialBasis(n, t, tuple(_compositions(t, n + 1)))


@lru_cache(maxsize=None)
def _basis_index(n, t):
    return {a: i for i, a in enumerate(monomial_basis(n, t).exponents)}


@dataclass
class FFMatrix:
    """Row-major matrix with entries in [0, p)."""

    entries: np.ndarray
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=np.int64)
        if a.ndim == 1:
            a = a.reshape(0, a.size) if a.size == 0 else a.reshape(1, -1)
        self.entries = a % self.p

    @property
    def rows(self):
        return self.entries.shape[0]

    @property
    def cols(self):
        return self.entries.shape[1]

    def vstack(self, other):
        if self.p != other.p:
            raise ValueError("matrices over different fields")
        return FFMatrix(np.vstack([self.entries, other.entries]), self.p)

    def transpose(self):
        return FFMatrix(self.entries.T.copy(), self.p)

    def dump(self):
        lines = [f"# {self.rows} {self.cols} {self.p}"]
        lines += [" ".join(str(int(x)) for x in row) for row in self.entries]
        return "\n".join(lines) + "\n"

    @classmethod
    def load(cls, text):
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        _, rows, cols, p = lines[0].split()
        rows, cols = int(rows), int(cols)
        data = np.array([[int(x) for x in ln.split()] for ln in lines[1:]], dtype=np.int64)
        return cls(data.reshape(rows, cols), int(p))


def rank_ff(M, p=None):
    """Rank over F_p by modular row reduction.  The input is not modified."""
    if isinstance(M, FFMatrix):
        p = M.p if p is None else p
        data = M.entries
    else:
        data = np.asarray(M, dtype=np.int64)
        p = DEFAULT_PRIME if p is None else p
    if data.ndim != 2 or data.size == 0:
        return 0
    return int(_impl.rank_mod_p(data % p, p))


def polymul(a, b, p):
    return _impl.polymul_mod_p(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64), p)


@dataclass(frozen=True)
class BinaryForm:
    """Form in (s, u); ``coeffs[i]`` multiplies s**i * u**(degree - i)."""

    coeffs: tuple
    p: int = field(default=DEFAULT_PRIME, compare=False)

    @classmethod
    def of(cls, coeffs, p=DEFAULT_PRIME):
        return cls(tuple(int(c) % p for c in coeffs), p)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def array(self):
        return np.array(self.coeffs, dtype=np.int64)

    def __call__(self, s, u=1):
        p = self.p
        e = self.degree
        return sum(c * pow(s, i, p) * pow(u, e - i, p) for i, c in enumerate(self.coeffs)) % p

    def is_zero(self):
        return not any(self.coeffs)


def binary_pow_product(forms, p=DEFAULT_PRIME):
    """Coefficients of prod f_i**e_i, exact over F_p."""
    out = np.ones(1, dtype=np.int64)
    for form, e in forms:
        if e < 0:
            raise ValueError("negative exponent")
        base = form.array() % p
        for _ in range(e):
            out = polymul(out, base, p)
    return BinaryForm(tuple(int(x) for x in out), p)


def _trim(poly):
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def _poly_mod(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    while len(_trim(a)) >= len(b):
        shift = len(a) - len(b)
        f = a[-1] * inv % p
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - f * c) % p
    return a


def _poly_gcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _trim(_poly_mod(a, b, p))
    return a


def forms_share_root(f, g, p=DEFAULT_PRIME):
    """True if two binary forms of positive degree vanish at a common point of P^1."""
    if f.is_zero() or g.is_zero():
        return True
    # point u = 0 is a root iff the s**degree coefficient vanishes
    if f.coeffs[-1] == 0 and g.coeffs[-1] == 0:
        return True
    return len(_poly_gcd(f.coeffs, g.coeffs, p)) > 1


def capacity(n, t):
    return comb(n + t, n)
