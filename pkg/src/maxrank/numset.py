"""Numerical sets (n; s; d_1,g_1; ...; d_s,g_s) and their combinatorics.

Covers admissibility, the condition counts w_k, critical values, the two
``≺`` relations (n = 4 and n >= 5), extremal elements of the downsets they
generate, the r(m)/q(m) pair, and the numeric interpolation predicates.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from math import comb
from typing import Iterator, NamedTuple

PREC4_VARIANTS = ("literal", "interpolation")


class ParseError(ValueError):
    def __init__(self, msg, text, pos):
        self.text = text
        self.pos = pos
        super().__init__(f"{msg} at column {pos + 1}: {text!r}")


class NotAdmissible(ValueError):
    pass


class LemmaViolation(Exception):
    """An extremal search contradicted a numeric bound it is supposed to satisfy."""

    def __init__(self, msg, eps=None, eta=None, value=None, bound=None):
        super().__init__(msg)
        self.eps = eps
        self.eta = eta
        self.value = value
        self.bound = bound


def pair_admissible(n, d, g):
    if g == 0:
        return d > 0
    return g > 0 and d >= max(2 * g - 1, g + n)


def pair_generalized(n, d, g):
    return (d, g) == (0, 0) or pair_admissible(n, d, g)


def _contribution(k, d, g):
    if (d, g) == (0, 0):
        return 0
    return k * d + 1 - g


@dataclass(frozen=True)
class NumericalSet:
    n: int
    pairs: tuple

    def __post_init__(self):
        pairs = tuple((int(d), int(g)) for d, g in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if self.n < 3:
            raise ValueError(f"ambient dimension must be >= 3, got {self.n}")
        if not pairs:
            raise ValueError("a numerical set needs at least one component")
        if any(d < 0 or g < 0 for d, g in pairs):
            raise ValueError("degrees and genera are non-negative")

    @classmethod
    def of(cls, n, *pairs):
        return cls(n, tuple(pairs))

    @property
    def s(self):
        return len(self.pairs)

    @property
    def degrees(self):
        return tuple(d for d, _ in self.pairs)

    @property
    def genera(self):
        return tuple(g for _, g in self.pairs)

    def is_admissible(self):
        return all(pair_admissible(self.n, d, g) for d, g in self.pairs)

    def is_generalized(self):
        return any(p != (0, 0) for p in self.pairs) and all(
            pair_generalized(self.n, d, g) for d, g in self.pairs
        )

    def canonical(self):
        """Components sorted by genus, then degree, both descending."""
        return NumericalSet(self.n, tuple(sorted(self.pairs, key=lambda p: (p[1], p[0]), reverse=True)))

    def nonzero(self):
        return tuple(p for p in self.pairs if p != (0, 0))

    def __str__(self):
        return f"{self.n}; " + "; ".join(f"{d},{g}" for d, g in self.pairs)

    def long_form(self):
        return f"({self.n};{self.s};" + ";".join(f"{d},{g}" for d, g in self.pairs) + ")"


_INT = re.compile(r"\s*(\d+)\s*")


def parse(text):
    """Parse ``n; d1,g1; d2,g2; ...`` (an optional ``s`` after ``n`` is checked)."""
    if not isinstance(text, str):
        raise ParseError("expected a string", str(text), 0)
    segments = []
    pos = 0
    for piece in text.split(";"):
        segments.append((piece, pos))
        pos += len(piece) + 1
    head, hpos = segments[0]
    m = _INT.fullmatch(head)
    if not m:
        raise ParseError("expected ambient dimension", text, hpos)
    n = int(m.group(1))
    body = segments[1:]
    declared_s = None
    if body and "," not in body[0][0] and _INT.fullmatch(body[0][0]):
        declared_s = int(body[0][0])
        body = body[1:]
    if not body:
        raise ParseError("expected at least one d,g pair", text, len(text))
    pairs = []
    for piece, ppos in body:
        parts = piece.split(",")
        if len(parts) != 2:
            raise ParseError("expected 'd,g'", text, ppos)
        vals = []
        off = ppos
        for part in parts:
            mm = _INT.fullmatch(part)
            if not mm:
                raise ParseError("expected a non-negative integer", text, off)
            vals.append(int(mm.group(1)))
            off += len(part) + 1
        pairs.append(tuple(vals))
    if declared_s is not None and declared_s != len(pairs):
        raise ParseError(f"declared s={declared_s} but found {len(pairs)} pairs", text, segments[1][1])
    if n < 3:
        raise ParseError("ambient dimension must be >= 3", text, hpos)
    return NumericalSet(n, tuple(pairs))


def _require_generalized(eps):
    if not (eps.is_admissible() or eps.is_generalized()):
        raise NotAdmissible(f"{eps.long_form()} is neither admissible nor admissible-generalized")


def w_raw(pairs, k):
    return sum(_contribution(k, d, g) for d, g in pairs)


def wk(eps, k):
    """Sum of k*d_i + 1 - g_i over the components with (d_i, g_i) != (0, 0)."""
    if k < 1:
        raise ValueError("k must be positive")
    _require_generalized(eps)
    return w_raw(eps.pairs, k)


class CriticalValueReport(NamedTuple):
    k: int
    w_at_k: int
    capacity: int
    slack: int


def _critical_k(n, pairs):
    if all(g == 0 for _, g in pairs) and w_raw(pairs, 1) <= n + 1:
        return 1
    k = 2
    while w_raw(pairs, k) > comb(n + k, n):
        k += 1
    return k


def critical_value(eps):
    _require_generalized(eps)
    k = _critical_k(eps.n, eps.pairs)
    w = w_raw(eps.pairs, k)
    cap = comb(eps.n + k, eps.n)
    return CriticalValueReport(k, w, cap, cap - w)


def check_nn1(eps, k):
    """Either w_k exceeds capacity or w_{k+1} stays strictly below the next one."""
    if k < 2:
        raise ValueError("k must be >= 2")
    if eps.n < 3 or any(not d > g >= 0 for d, g in eps.pairs):
        raise ValueError("requires n >= 3 and d_i > g_i >= 0 for every component")
    n = eps.n
    return w_raw(eps.pairs, k) > comb(n + k, n) or w_raw(eps.pairs, k + 1) < comb(n + k + 1, n)


# --- the two ≺ relations ---------------------------------------------------


def prec4_pair(a, q, d, g, variant="literal"):
    if variant not in PREC4_VARIANTS:
        raise ValueError(f"unknown prec4 variant {variant!r}")
    if not pair_admissible(4, d, g):
        return False
    if (a, q) == (0, 0):
        return g == 0
    if not pair_admissible(4, a, q):
        return False
    if g < q or a < g - q + 1:
        return False
    gap, drop = d - a, g - q
    if variant == "literal":
        if gap == 2:
            return (a >= 4 and drop <= 2) or (a >= 3 and drop <= 1)
        return gap >= 2 * drop
    if (a, q) == (d, g):
        return True
    if gap < 1 or 1 + drop > 2 * gap:
        return False
    if (gap, drop) == (2, 3):
        return a >= 4
    return True


def _check_shapes(eta, eps, n_ok):
    if eta.n != eps.n:
        raise ValueError(f"dimension mismatch: {eta.n} vs {eps.n}")
    if eta.s != eps.s:
        raise ValueError(f"length mismatch: {eta.s} vs {eps.s}")
    if not n_ok(eps.n):
        raise ValueError(f"relation not defined for n={eps.n}")


def prec4(eta, eps, variant="literal"):
    _check_shapes(eta, eps, lambda n: n == 4)
    return all(prec4_pair(a, q, d, g, variant) for (a, q), (d, g) in zip(eta.pairs, eps.pairs))


def prec4_leq(eta, eps, variant="literal"):
    if prec4(eta, eps, variant):
        return True
    diff = [i for i, (x, y) in enumerate(zip(eta.pairs, eps.pairs)) if x != y]
    return len(diff) == 1 and eta.pairs[diff[0]] == (0, 0)


def _excess_genus_bound(n, g):
    return max(2 * g - 1, n + g)


def prec_n_pair(n, a, q, d, g):
    if q > g or a < 0:
        return False
    if g == 0:
        return 0 <= a <= d
    if q == 0 and a == 0:
        return True
    if q > 0:
        lo = a - _excess_genus_bound(n, q)
        return 0 <= lo <= d - _excess_genus_bound(n, g)
    return d == 2 * g - 1 > g + n and 2 <= a <= n


def prec_n(eta, eps):
    _check_shapes(eta, eps, lambda n: n >= 5)
    return all(prec_n_pair(eps.n, a, q, d, g) for (a, q), (d, g) in zip(eta.pairs, eps.pairs))


def pair_relation(n, variant="literal"):
    if n == 4:
        return lambda a, q, d, g: prec4_pair(a, q, d, g, variant)
    if n >= 5:
        return lambda a, q, d, g: prec_n_pair(n, a, q, d, g)
    raise ValueError(f"no ≺ relation for n={n}")


def downset_options(eps, variant="literal"):
    """Per-component lists of (a, q) with (a, q) ≺ (d_i, g_i), largest first."""
    rel = pair_relation(eps.n, variant)
    out = []
    for d, g in eps.pairs:
        opts = [(a, q) for a in range(d, -1, -1) for q in range(g, -1, -1) if rel(a, q, d, g)]
        out.append(opts)
    return out


# --- extremal elements -------------------------------------------------------


class Extremal(NamedTuple):
    eta: NumericalSet
    value: int


def _suffix_states(options, weight):
    """states[i] = set of (sum, any_nonzero) reachable by components i..s-1."""
    s = len(options)
    states = [set() for _ in range(s + 1)]
    states[s] = {(0, False)}
    for i in range(s - 1, -1, -1):
        nxt = states[i + 1]
        cur = set()
        for opt in options[i]:
            c = weight(opt)
            nz = opt != (0, 0)
            for tot, flag in nxt:
                cur.add((tot + c, flag or nz))
        states[i] = cur
    return states


def _pick_lex_greatest(options, weight, states, target):
    chosen = []
    remaining = target
    need_nonzero = True
    for i, opts in enumerate(options):
        for opt in opts:  # options are sorted largest first
            c = weight(opt)
            nz = opt != (0, 0)
            rest = remaining - c
            ok = any(tot == rest and (flag or nz or not need_nonzero) for tot, flag in states[i + 1])
            if ok:
                chosen.append(opt)
                remaining = rest
                need_nonzero = need_nonzero and not nz
                break
        else:  # pragma: no cover - states guarantee a choice
            raise RuntimeError("reconstruction failed")
    return tuple(chosen)


def maximal_bound(n, k):
    return 2 * k - 4 if n == 4 else 2 * k


def maximal_eta(eps, variant="literal"):
    """Maximal η ≺ ε with critical value < k, and its slack at degree k-1.

    The element returned has the smallest slack in the downset (any such
    element is automatically maximal); ties go to the lexicographically
    greatest pair list.
    """
    if not eps.is_admissible():
        raise NotAdmissible(f"{eps.long_form()} is not admissible")
    n = eps.n
    k = critical_value(eps).k
    if eps.s < 2:
        raise ValueError("needs s >= 2")
    if n >= 5 and k < 3:
        raise ValueError(f"needs critical value >= 3 for n >= 5, got {k}")
    if n == 4 and k < 5:
        raise ValueError(f"needs critical value >= 5 for n = 4, got {k}")
    if n < 4:
        raise ValueError("no ≺ relation for n = 3")
    cap = comb(n + k - 1, n)
    options = downset_options(eps, variant)
    weight = lambda opt: _contribution(k - 1, *opt)  # noqa: E731
    states = _suffix_states(options, weight)
    feasible = [tot for tot, flag in states[0] if flag and tot <= cap]
    if not feasible:
        raise LemmaViolation("no η ≺ ε with smaller critical value", eps=eps)
    best = max(feasible)
    eta = NumericalSet(n, _pick_lex_greatest(options, weight, states, best))
    slack = cap - best
    bound = maximal_bound(n, k)
    if not 0 <= slack <= bound:
        raise LemmaViolation(f"slack {slack} outside [0, {bound}]", eps=eps, eta=eta, value=slack, bound=bound)
    return Extremal(eta, slack)


def minimal_eta(eps, k):
    """Minimal η ≺ ε with w_k(η) >= C(n+k, n), and its excess over that capacity."""
    n = eps.n
    if n < 5:
        raise ValueError("minimal_eta needs n >= 5")
    if k < 2:
        raise ValueError("k must be >= 2")
    if not eps.is_admissible():
        raise NotAdmissible(f"{eps.long_form()} is not admissible")
    cap = comb(n + k, n)
    if w_raw(eps.pairs, k) < cap:
        raise ValueError(f"w_{k}(ε) = {w_raw(eps.pairs, k)} is below {cap}")
    options = downset_options(eps)
    weight = lambda opt: _contribution(k, *opt)  # noqa: E731
    states = _suffix_states(options, weight)
    best = min(tot for tot, flag in states[0] if flag and tot >= cap)
    eta = NumericalSet(n, _pick_lex_greatest(options, weight, states, best))
    excess = best - cap
    if excess > 2 * k:
        raise LemmaViolation(f"excess {excess} above {2 * k}", eps=eps, eta=eta, value=excess, bound=2 * k)
    return Extremal(eta, excess)


def hor2_check(eta, k):
    n = eta.n
    total = sum(eta.degrees)
    ok = total >= 8 * k - 1
    if n * (n + 1) * (k + 1) <= k * (n + k - 1):
        ok = ok and total >= comb(n + k - 2, n - 2)
    return ok


# --- r(m), q(m) ----------------------------------------------------------------


class RQPair(NamedTuple):
    m: int
    r: int
    q: int


def rq(m):
    """The unique r, q with m*r + 1 + q = C(m+3, 3) and 0 <= q < m (q = 0 when m divides)."""
    if m < 1:
        raise ValueError("m must be positive")
    r, q = divmod(comb(m + 3, 3) - 1, m)
    return RQPair(m, r, q)


def rq_closed_form(m):
    """Residue-class formulas for (r, q); returns (r, q, reconciled)."""
    k, j = divmod(m - 1, 6)
    j += 1
    table = {
        1: (6 * k * k + 8 * k + 3, 0),
        2: (6 * k * k + 10 * k + 4, 3 * k + 1),
        3: (6 * k * k + 12 * k + 6, 2 * k + 1),
        4: (6 * k * k + 14 * k + 8, 3 * k + 2),
        5: (6 * k * k + 16 * k + 11, 0),
        6: (6 * k * k + 18 * k + 13, 5 * k + 5),
    }
    r, q = table[j]
    # the printed residue-4 formula repeats "6k+4)=" and is read as 6k^2+14k+8
    return r, q, j == 4


# --- interpolation predicates ---------------------------------------------------


def interpolation_ok(kind, m_or_n, d, g, x):
    """Whether the named interpolation result yields a curve through x general points."""
    if x < 0:
        raise ValueError("x must be non-negative")
    if kind == "aly1":
        m = m_or_n
        if m < 3 or g < 0 or d < g + m or x <= 0:
            raise ValueError("aly1 needs m >= 3, d >= g + m, x > 0")
        if (d, g, m) in {(5, 2, 3), (7, 2, 5)}:
            return x <= 9
        return (m + 1) * d + (m - 3) * (1 - g) >= (m - 1) * x
    if kind == "l5":
        n = m_or_n
        if n < 3 or g < 0 or (n + 1) * d < n * g + n * (n + 1):
            raise ValueError("l5 needs n >= 3 and (n+1)d >= ng + n(n+1)")
        num = (n - 1) ** 2 * d - (n - 2) ** 2 * g - (2 * n * n - 5 * n + 12)
        return x <= d and x * (n - 2) ** 2 <= num
    if kind == "lv4":
        if m_or_n != 4:
            raise ValueError("lv4 is a statement in P^4")
        if not (d >= g + 4 or (d, g) in {(1, 0), (2, 0), (3, 0)}):
            raise ValueError("lv4 needs d >= g + 4 or (d, g) in {(1,0),(2,0),(3,0)}")
        return x <= d
    raise ValueError(f"unknown interpolation result {kind!r}")


# --- enumeration ---------------------------------------------------------------


def admissible_pairs(n, d_max):
    out = [(d, g) for d in range(1, d_max + 1) for g in range(0, d + 1) if pair_admissible(n, d, g)]
    return sorted(out, key=lambda p: (p[1], p[0]), reverse=True)


def enumerate_admissible(n, k_target, s_max, d_max) -> Iterator[NumericalSet]:
    """Every admissible ε (canonical order) with s <= s_max, d_i <= d_max and critical value k_target."""
    if n < 3 or k_target < 1 or s_max < 1 or d_max < 1:
        return
    pairs = admissible_pairs(n, d_max)
    cap = comb(n + k_target, n)
    weights = [_contribution(k_target, d, g) for d, g in pairs]
    found = []

    def walk(start, chosen, total):
        if chosen:
            combo = tuple(pairs[i] for i in chosen)
            if _critical_k(n, combo) == k_target:
                found.append(combo)
        if len(chosen) == s_max:
            return
        for i in range(start, len(pairs)):
            if total + weights[i] <= cap:
                chosen.append(i)
                walk(i, chosen, total + weights[i])
                chosen.pop()

    walk(0, [], 0)
    found.sort(key=lambda c: (len(c), c))
    for combo in found:
        yield NumericalSet(n, combo)
