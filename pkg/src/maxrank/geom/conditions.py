"""Linear conditions imposed by a curve model on degree-t forms, and their ranks."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from math import comb

import numpy as np

from ..ffla import FFMatrix, _poly_gcd, monomial_basis, polymul, rank_ff
from .model import POINT, Component, Decoration, general_decoration, line_through, random_vector


@dataclass(frozen=True)
class HilbertSample:
    t: int
    p: int
    seed: int
    rank: int
    h0: int
    h1: int
    chi: int

    def to_dict(self):
        return asdict(self)


def _exponents(n, t):
    return np.array(monomial_basis(n, t).exponents, dtype=np.int64)


def component_rows(comp, t):
    """(d*t + 1) x N block: column alpha holds the coefficients of x^alpha pulled back."""
    p = comp.p
    n, d = comp.n, comp.degree
    exps = monomial_basis(n, t).exponents
    powers = []
    for j in range(n + 1):
        row = [np.ones(1, dtype=np.int64)]
        for _ in range(t):
            row.append(polymul(row[-1], comp.coeffs[j], p))
        powers.append(row)
    block = np.zeros((d * t + 1, len(exps)), dtype=np.int64)
    cache = {}
    for col, alpha in enumerate(exps):
        # reuse the product over all but the last variable
        head = alpha[:-1]
        if head not in cache:
            acc = np.ones(1, dtype=np.int64)
            for j, e in enumerate(head):
                if e:
                    acc = polymul(acc, powers[j][e], p)
            cache[head] = acc
        acc = cache[head]
        if alpha[-1]:
            acc = polymul(acc, powers[n][alpha[-1]], p)
        block[: len(acc), col] = acc
    return block


def _power_table(x, t, p):
    x = np.asarray(x, dtype=np.int64) % p
    tab = np.ones((len(x), t + 1), dtype=np.int64)
    for e in range(1, t + 1):
        tab[:, e] = tab[:, e - 1] * x % p
    return tab


def _monomial_values(tab, exps, p, skip=None):
    out = np.ones(len(exps), dtype=np.int64)
    for j in range(exps.shape[1]):
        e = exps[:, j] - (1 if j == skip else 0)
        vals = tab[j, np.clip(e, 0, None)]
        if j == skip:
            vals = np.where(e < 0, 0, vals)
        out = out * vals % p
    return out


def decoration_rows(deco, n, t, p):
    exps = _exponents(n, t)
    tab = _power_table(deco.point, t, p)
    rows = [_monomial_values(tab, exps, p)]
    for v in deco.directions:
        deriv = np.zeros(len(exps), dtype=np.int64)
        for j in range(n + 1):
            if v[j] % p == 0:
                continue
            part = _monomial_values(tab, exps, p, skip=j)
            deriv = (deriv + (exps[:, j] % p) * part % p * (int(v[j]) % p)) % p
        rows.append(deriv)
    return np.array(rows, dtype=np.int64)


def condition_matrix(model, t):
    """Stacked conditions on H^0(O(t)); columns follow monomial_basis(n, t)."""
    if t < 1:
        raise ValueError("t must be >= 1")
    n, p = model.n, model.p
    blocks = [component_rows(c, t) for c in model.components]
    blocks += [decoration_rows(d, n, t, p) for d in model.decorations]
    cols = comb(n + t, n)
    data = np.vstack(blocks) if blocks else np.zeros((0, cols), dtype=np.int64)
    return FFMatrix(data, p)


def sample_model(model, t, seed=0, p=None):
    p = model.p if p is None else p
    M = condition_matrix(model, t)
    r = rank_ff(M)
    cap = comb(model.n + t, model.n)
    w = model.conditions(t)
    return HilbertSample(t, p, int(seed), r, cap - r, w - r, cap - w)


def trial_seed(seed, trial):
    return int(np.random.SeedSequence([int(seed), int(trial)]).generate_state(1, np.uint64)[0])


def h0_h1(model, t, p=None, trials=3, seed=0):
    """One HilbertSample per trial; models with a recipe are rebuilt with fresh randomness."""
    if trials < 1:
        raise ValueError("need at least one trial")
    p = model.p if p is None else p
    for c in model.components:
        if not isinstance(c, Component):
            raise TypeError(f"unsupported component {c!r}")
    samples = []
    for trial in range(trials):
        child = trial_seed(seed, trial)
        if model.recipe is not None:
            m = model.recipe.build(np.random.default_rng(child), p)
        else:
            if p != model.p:
                raise ValueError("a fixed model cannot be resampled at another prime")
            m = model
        samples.append(sample_model(m, t, child, p))
    return samples


def representative(samples):
    return min(samples, key=lambda s: (s.h0, s.seed))


# --- adding one object to a model -------------------------------------------


def general_secant(index):
    """Extra: a line through two random points of component ``index``."""

    def add(model, rng):
        comp = model.components[index]
        while True:
            a, b = (int(v) for v in rng.integers(0, model.p, 2))
            if a != b:
                break
        x, y = comp.point_at(a), comp.point_at(b)
        return model.add_component(line_through(x, y, model.p, "secant"), meets=[(index, x), (index, y)])

    return add


def line_through_point_of(index):
    """Extra: a general line through a random point of component ``index``."""

    def add(model, rng):
        x = model.components[index].random_point(rng)
        y = tuple(int(v) for v in random_vector(rng, model.n + 1, model.p))
        return model.add_component(line_through(x, y, model.p, "spoke"), meets=[(index, x)])

    return add


def general_decoration_extra(kind):
    def add(model, rng):
        return model.add_decoration(general_decoration(kind, model.n, rng, model.p))

    return add


def independence_check(base, extra, t, p=None, trials=3, seed=0):
    """(h0 before, h0 after) adding ``extra``; minimum over trials of each."""
    p = base.p if p is None else p
    before, after = [], []
    for trial in range(trials):
        rng = np.random.default_rng(trial_seed(seed, trial))
        m = base.recipe.build(rng, p) if base.recipe is not None else base
        if isinstance(extra, Decoration):
            m2 = m.add_decoration(extra)
        elif isinstance(extra, Component):
            m2 = m.add_component(extra)
        else:
            m2 = extra(m, rng)
        before.append(sample_model(m, t, 0, p).h0)
        after.append(sample_model(m2, t, 0, p).h0)
    return min(before), min(after)


# --- residual exact sequence bookkeeping --------------------------------------


class NonTransversalError(ValueError):
    pass


def _has_double_root(form, p):
    c = list(form.coeffs)
    if len(c) < 3:
        return False
    if c[-1] == 0 and c[-2] == 0:  # double root at u = 0
        return True
    deriv = [i * c[i] % p for i in range(1, len(c))]
    return len(_poly_gcd(c, deriv, p)) > 1


def residual_chi_check(model, H=None, t=2):
    """Check chi(I_Z(t)) = chi(I_Res(t-1)) + chi(I_{Z cap H, H}(t)) from the incidence data."""
    n, p = model.n, model.p
    H = tuple([0] * n + [1]) if H is None else tuple(int(x) % p for x in H)
    if t < 1:
        raise ValueError("t must be >= 1")
    if any(d.kind != POINT for d in model.decorations):
        raise ValueError("only reduced point decorations are supported here")
    model.check_nodal()
    inside = []
    for c in model.components:
        f = c.restrict(H)
        if f.is_zero():
            inside.append(True)
            continue
        if _has_double_root(f, p):
            raise NonTransversalError(f"component {c.label or c.kind} is tangent to the hyperplane")
        inside.append(False)
    dot = lambda x: int(np.dot(np.asarray(x, dtype=object), np.asarray(H, dtype=object)) % p)  # noqa: E731
    for nd in model.nodes:
        if not inside[nd.a] and not inside[nd.b] and dot(nd.point) == 0:
            raise NonTransversalError("a node between residual components lies on the hyperplane")
    pts_in = sum(1 for d in model.decorations if dot(d.point) == 0)
    pts_out = len(model.decorations) - pts_in

    all_idx = list(range(len(model.components)))
    res_idx = [i for i in all_idx if not inside[i]]
    in_idx = [i for i in all_idx if inside[i]]
    rt_nodes = sum(1 for nd in model.nodes if inside[nd.a] != inside[nd.b])
    trace_points = sum(model.components[i].degree for i in res_idx) - rt_nodes
    lhs = _chi_curve(model, all_idx, t, n, len(model.decorations))
    res = _chi_curve(model, res_idx, t - 1, n, pts_out)
    trace = _chi_curve(model, in_idx, t, n - 1, pts_in + trace_points)
    return lhs == res + trace


def _chi_curve(model, idx, t, ambient, points):
    """chi of the ideal sheaf of (curves idx) plus ``points`` reduced points, in P^ambient."""
    members = set(idx)
    deg = sum(model.components[i].degree for i in idx)
    delta = sum(1 for nd in model.nodes if nd.a in members and nd.b in members)
    chi_o = t * deg + len(idx) - delta
    return comb(ambient + t, ambient) - chi_o - points
