"""The smooth quadric x0*x3 - x1*x2 in P^3, its two rulings, and good secants."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from sympy.ntheory import sqrt_mod

from ..ffla import DEFAULT_PRIME
from ..numset import rq
from .conditions import sample_model
from .model import LINE, line_through, proj_rank
from .trees import incidence_degrees


class NoGoodSecants(RuntimeError):
    pass


def quadric_value(x, p=DEFAULT_PRIME):
    x0, x1, x2, x3 = (int(v) for v in x)
    return (x0 * x3 - x1 * x2) % p


def segre_point(ab, cd, p=DEFAULT_PRIME):
    (a, b), (c, d) = ab, cd
    return tuple(int(v) % p for v in (a * c, a * d, b * c, b * d))


def ruling_line(family, param, p=DEFAULT_PRIME):
    """Family 0 fixes [a:b] = param (class (1,0)); family 1 fixes [c:d] = param."""
    lam, mu = (int(v) % p for v in param)
    if lam == 0 and mu == 0:
        raise ValueError("ruling parameter must be a point of P^1")
    if family == 0:
        x, y = segre_point((lam, mu), (1, 0), p), segre_point((lam, mu), (0, 1), p)
    elif family == 1:
        x, y = segre_point((1, 0), (lam, mu), p), segre_point((0, 1), (lam, mu), p)
    else:
        raise ValueError("family is 0 or 1")
    return line_through(x, y, p, f"R{family}")


def _ratio(u, v, p):
    """Normalized point of P^1 for [u:v]."""
    u, v = u % p, v % p
    if u:
        return (1, v * pow(u, -1, p) % p)
    if v:
        return (0, 1)
    return None


def ruling_params(x, p=DEFAULT_PRIME):
    """([a:b], [c:d]) of a point of the quadric."""
    x0, x1, x2, x3 = (int(v) for v in x)
    ab = _ratio(x0, x2, p) or _ratio(x1, x3, p)
    cd = _ratio(x0, x1, p) or _ratio(x2, x3, p)
    return ab, cd


def lines_meet(l1, l2, p):
    return proj_rank(list(np.vstack([l1.coeffs.T, l2.coeffs.T])), p) <= 3


def quadric_points_on_line(line, p=DEFAULT_PRIME):
    """F_p-rational points of the line on the quadric (None when the line lies on it)."""
    P, R = line.coeffs[:, 0], line.coeffs[:, 1]
    # Q(u P + s R) = c0 u^2 + c1 u s + c2 s^2
    c0 = quadric_value(P, p)
    c2 = quadric_value(R, p)
    c1 = (int(P[0]) * int(R[3]) + int(R[0]) * int(P[3]) - int(P[1]) * int(R[2]) - int(R[1]) * int(P[2])) % p
    if c0 == c1 == c2 == 0:
        return None
    params = []
    if c2 == 0:
        params.append((1, 0))  # the point R
        if c1:
            params.append(((-c0) % p, c1))
    else:
        disc = (c1 * c1 - 4 * c0 * c2) % p
        roots = sqrt_mod(disc, p, all_roots=True) or []
        inv = pow(2 * c2, -1, p)
        for r in sorted(set(roots)):
            params.append((((-c1 + r) * inv) % p, 1))  # (s, u) with u = 1
    pts = []
    for s, u in params:
        x = tuple(int(v) for v in (u * P + s * R) % p)
        if not any(proj_rank([x, y], p) == 1 for y in pts):
            pts.append(x)
    return pts


@dataclass
class Secant:
    family: int
    param: tuple
    ends: tuple  # ((component, point), (component, point))

    def line(self, p):
        return ruling_line(self.family, self.param, p)


def _bamboo_pieces(model):
    deg = incidence_degrees(model)
    pieces = model.pieces()
    for pc in pieces:
        if any(model.components[i].kind != LINE for i in pc):
            raise ValueError("good secants are defined for forests of lines")
        if len([nd for nd in model.nodes if nd.a in pc]) != len(pc) - 1 or any(deg[i] > 2 for i in pc):
            raise ValueError("every connected piece must be a bamboo")
    return pieces, deg


def _candidate_ends(model, pieces, deg):
    p = model.p
    node_pts = [nd.point for nd in model.nodes]
    out = []
    for b, pc in enumerate(pieces):
        for i in pc:
            if deg[i] >= 2:
                continue
            pts = quadric_points_on_line(model.components[i], p)
            if pts is None:
                continue
            for x in pts:
                if any(proj_rank([x, y], p) == 1 for y in node_pts):
                    continue
                out.append((b, i, x))
    return out


def good_secants(forest, x):
    """``x`` disjoint ruling lines joining end lines of distinct bamboos into bamboos."""
    p = forest.p
    if forest.n != 3:
        raise ValueError("good secants live in P^3")
    pieces, deg = _bamboo_pieces(forest)
    if x <= 0:
        return []
    ends = _candidate_ends(forest, pieces, deg)
    cands = []
    for (b1, i1, x1), (b2, i2, x2) in combinations(ends, 2):
        if b1 == b2:
            continue
        r1, r2 = ruling_params(x1, p), ruling_params(x2, p)
        for fam in (0, 1):
            if r1[fam] == r2[fam]:
                sec = Secant(fam, r1[fam], ((i1, x1), (i2, x2)))
                line = sec.line(p)
                others = [c for k, c in enumerate(forest.components) if k not in (i1, i2)]
                if not any(lines_meet(line, c, p) for c in others):
                    cands.append((b1, b2, sec))
    cands.sort(key=lambda c: (c[2].family, c[2].param, c[0], c[1]))
    for fam in (0, 1):
        pool = [c for c in cands if c[2].family == fam]
        found = _search(pool, x, len(pieces), deg)
        if found is not None:
            return [c[2] for c in found]
    raise NoGoodSecants(f"no {x} good secants")


def _search(pool, x, n_pieces, deg):
    chosen = []

    def ok(cand, parent, used_deg, used_params):
        b1, b2, sec = cand
        if sec.param in used_params:
            return False
        i1, i2 = sec.ends[0][0], sec.ends[1][0]
        if used_deg.get(i1, deg[i1]) >= 2 or used_deg.get(i2, deg[i2]) >= 2:
            return False
        return _find(parent, b1) != _find(parent, b2)

    def rec(start, parent, used_deg, used_params):
        if len(chosen) == x:
            return True
        for k in range(start, len(pool)):
            cand = pool[k]
            if not ok(cand, parent, used_deg, used_params):
                continue
            b1, b2, sec = cand
            i1, i2 = sec.ends[0][0], sec.ends[1][0]
            par2 = list(parent)
            par2[_find(par2, b1)] = _find(par2, b2)
            deg2 = dict(used_deg)
            deg2[i1] = deg2.get(i1, deg[i1]) + 1
            deg2[i2] = deg2.get(i2, deg[i2]) + 1
            chosen.append(cand)
            if rec(k + 1, par2, deg2, used_params | {sec.param}):
                return True
            chosen.pop()
        return False

    return list(chosen) if rec(0, list(range(n_pieces)), {}, frozenset()) else None


def _find(parent, i):
    while parent[i] != i:
        i = parent[i]
    return i


@dataclass
class BMReport:
    m: int
    clauses: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(passed for passed, _ in self.clauses.values())

    def to_dict(self):
        return {"m": self.m, "ok": self.ok, "clauses": {k: {"pass": v[0], "detail": v[1]} for k, v in self.clauses.items()}}


def verify_bm_witness(Z, m):
    """Clause-by-clause check of a supplied witness for the degree-m assertion."""
    pair = rq(m)
    p = Z.p
    rep = BMReport(m)
    split = m % 6 in (1, 5)
    want_pieces = m + 1 if split else pair.q + 1
    want_deg = pair.r - 1 if split else pair.r
    want_secants = m if split else pair.q
    try:
        pieces, _ = _bamboo_pieces(Z)
        shape_ok = len(pieces) == want_pieces
        rep.clauses["bamboos"] = (shape_ok, f"{len(pieces)} bamboos, want {want_pieces}")
    except ValueError as exc:
        rep.clauses["bamboos"] = (False, str(exc))
    rep.clauses["degree"] = (Z.degree == want_deg, f"degree {Z.degree}, want {want_deg}")
    s = sample_model(Z, m)
    rep.clauses["cohomology"] = (s.h0 == 0 and s.h1 == 0, f"h0={s.h0} h1={s.h1}")
    sing_ok = all(quadric_value(nd.point, p) == 0 for nd in Z.nodes)
    rep.clauses["sing_in_quadric"] = (sing_ok, f"{len(Z.nodes)} nodes")
    inside = [c.label or str(k) for k, c in enumerate(Z.components) if _inside_quadric(c)]
    rep.clauses["finite_intersection"] = (not inside, "components in Q: " + ",".join(inside) if inside else "none")
    try:
        secs = good_secants(Z, want_secants)
        rep.clauses["good_secants"] = (True, f"{len(secs)} found")
    except (NoGoodSecants, ValueError) as exc:
        rep.clauses["good_secants"] = (False, str(exc))
    return rep


def _inside_quadric(comp):
    if comp.kind == LINE:
        return quadric_points_on_line(comp, comp.p) is None
    rng = np.random.default_rng(0)
    return all(quadric_value(comp.random_point(rng), comp.p) == 0 for _ in range(2 * comp.degree + 1))


__all__ = [
    "BMReport",
    "NoGoodSecants",
    "Secant",
    "good_secants",
    "quadric_points_on_line",
    "quadric_value",
    "ruling_line",
    "ruling_params",
    "segre_point",
    "verify_bm_witness",
]
