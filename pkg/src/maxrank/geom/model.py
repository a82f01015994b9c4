"""Parametrized curve components, zero-dimensional decorations and curve models."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..ffla import DEFAULT_PRIME, BinaryForm, forms_share_root, rank_ff
from ..numset import pair_admissible

RATIONAL = "RationalCurve"
LINE = "Line"
POINT = "Point"
ARROW = "Arrow"
PLANAR = "PlanarDoublePoint"
DECORATION_LENGTH = {POINT: 1, ARROW: 2, PLANAR: 3}
MAX_RETRIES = 20


class ConstructionError(RuntimeError):
    """Random construction kept failing its genericity checks."""


class NonNodalError(ValueError):
    pass


def random_vector(rng, size, p):
    return rng.integers(0, p, size=size, dtype=np.int64)


def proj_rank(points, p):
    return rank_ff(np.array(points, dtype=np.int64).reshape(len(points), -1) % p, p)


def same_point(x, y, p):
    return proj_rank([x, y], p) == 1


@dataclass(eq=False)
class Component:
    """Map P^1 -> P^n; column i of ``coeffs`` multiplies s**i * u**(d - i)."""

    kind: str
    coeffs: np.ndarray
    p: int = DEFAULT_PRIME
    label: str = ""

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=np.int64) % self.p
        if self.kind not in (RATIONAL, LINE):
            raise ValueError(f"unknown component kind {self.kind!r}")
        if self.kind == LINE and self.degree != 1:
            raise ValueError("a line has degree 1")

    @property
    def n(self):
        return self.coeffs.shape[0] - 1

    @property
    def degree(self):
        return self.coeffs.shape[1] - 1

    @property
    def param(self):
        return tuple(BinaryForm.of(row, self.p) for row in self.coeffs)

    def point_at(self, s, u=1):
        d, p = self.degree, self.p
        mon = np.array([pow(int(s), i, p) * pow(int(u), d - i, p) % p for i in range(d + 1)], dtype=np.int64)
        return tuple(int(x) for x in (self.coeffs * mon % p).sum(axis=1) % p)

    def random_point(self, rng):
        return self.point_at(int(rng.integers(0, self.p)))

    def restrict(self, linear_form):
        """Pullback of a linear form as a binary form of degree d."""
        h = np.asarray(linear_form, dtype=np.int64) % self.p
        return BinaryForm.of((h[:, None] * self.coeffs % self.p).sum(axis=0) % self.p, self.p)

    def contains(self, x):
        """Membership test for lines only (rank of the spanning points plus x)."""
        if self.kind != LINE:
            raise NotImplementedError("point membership is only tested on lines")
        return proj_rank([self.coeffs[:, 0], self.coeffs[:, 1], x], self.p) == 2

    def is_valid(self, rng=None):
        n, d, p = self.n, self.degree, self.p
        if rank_ff(self.coeffs, p) != min(d + 1, n + 1):
            return False
        rng = rng or np.random.default_rng(0)
        lam = random_vector(rng, n + 1, p)
        mu = random_vector(rng, n + 1, p)
        return not forms_share_root(self.restrict(lam), self.restrict(mu), p)

    def to_dict(self):
        return {"kind": self.kind, "label": self.label, "coeffs": self.coeffs.tolist()}

    @classmethod
    def from_dict(cls, data, p):
        return cls(data["kind"], np.array(data["coeffs"], dtype=np.int64), p, data.get("label", ""))


def line_through(x, y, p=DEFAULT_PRIME, label=""):
    if same_point(x, y, p):
        raise ValueError("a line needs two distinct points")
    return Component(LINE, np.array([x, y], dtype=np.int64).T, p, label)


def make_rational_curve(n, d, rng, p=DEFAULT_PRIME, label=""):
    """Random degree-d parametrized rational curve in P^n."""
    if d < 1 or n < 1:
        raise ValueError("need d >= 1 and n >= 1")
    for _ in range(MAX_RETRIES):
        comp = Component(LINE if d == 1 else RATIONAL, random_vector(rng, (n + 1, d + 1), p), p, label)
        if comp.is_valid(rng):
            return comp
    raise ConstructionError(f"no valid degree-{d} curve after {MAX_RETRIES} draws")


@dataclass(frozen=True)
class Decoration:
    kind: str
    point: tuple
    directions: tuple = ()

    def __post_init__(self):
        want = {POINT: 0, ARROW: 1, PLANAR: 2}.get(self.kind)
        if want is None:
            raise ValueError(f"unknown decoration kind {self.kind!r}")
        if len(self.directions) != want:
            raise ValueError(f"{self.kind} needs {want} direction(s)")

    @property
    def length(self):
        return DECORATION_LENGTH[self.kind]

    def to_dict(self):
        return {"kind": self.kind, "point": list(self.point), "directions": [list(v) for v in self.directions]}

    @classmethod
    def from_dict(cls, data):
        return cls(data["kind"], tuple(data["point"]), tuple(tuple(v) for v in data["directions"]))


def general_decoration(kind, n, rng, p=DEFAULT_PRIME):
    """A decoration at a random point with random independent directions."""
    want = {POINT: 0, ARROW: 1, PLANAR: 2}[kind]
    for _ in range(MAX_RETRIES):
        vecs = random_vector(rng, (want + 1, n + 1), p)
        if rank_ff(vecs, p) == want + 1:
            rows = [tuple(int(x) for x in r) for r in vecs]
            return Decoration(kind, rows[0], tuple(rows[1:]))
    raise ConstructionError("could not draw independent directions")


@dataclass(frozen=True)
class Node:
    a: int
    b: int
    point: tuple


@dataclass(frozen=True)
class Recipe:
    """Rebuildable description of a random model family."""

    kind: str
    params: dict = field(default_factory=dict, hash=False)

    def build(self, rng, p=DEFAULT_PRIME):
        if self.kind not in RECIPES:
            raise ValueError(f"unknown recipe {self.kind!r}")
        model = RECIPES[self.kind](rng=rng, p=p, **self.params)
        model.recipe = self
        return model

    def to_dict(self):
        return {"kind": self.kind, "params": _jsonable(self.params)}

    @classmethod
    def from_dict(cls, data):
        return cls(data["kind"], data["params"])


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Recipe):
        return x.to_dict()
    if isinstance(x, np.integer):
        return int(x)
    return x


RECIPES: dict[str, Callable] = {}


def register(kind):
    def deco(fn):
        RECIPES[kind] = fn
        return fn

    return deco


@dataclass(eq=False)
class CurveModel:
    n: int
    components: list = field(default_factory=list)
    decorations: list = field(default_factory=list)
    nodes: list = field(default_factory=list)
    p: int = DEFAULT_PRIME
    recipe: Recipe | None = None
    meta: dict = field(default_factory=dict)

    @property
    def degree(self):
        return sum(c.degree for c in self.components)

    def copy(self):
        return CurveModel(self.n, list(self.components), list(self.decorations), list(self.nodes), self.p, None, dict(self.meta))

    def disjoint_union(self, other):
        if other.n != self.n or other.p != self.p:
            raise ValueError("models live in different spaces")
        off = len(self.components)
        nodes = self.nodes + [Node(x.a + off, x.b + off, x.point) for x in other.nodes]
        return CurveModel(
            self.n, self.components + other.components, self.decorations + other.decorations, nodes, self.p
        )

    def add_component(self, comp, meets=()):
        """Append a component; ``meets`` lists (index, point) incidences."""
        model = self.copy()
        model.components.append(comp)
        j = len(model.components) - 1
        for i, x in meets:
            model.nodes.append(Node(i, j, tuple(int(v) for v in x)))
        return model

    def add_decoration(self, deco):
        model = self.copy()
        model.decorations.append(deco)
        return model

    def pieces(self):
        """Connected pieces as sorted lists of component indices."""
        parent = list(range(len(self.components)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for nd in self.nodes:
            parent[find(nd.a)] = find(nd.b)
        groups = {}
        for i in range(len(self.components)):
            groups.setdefault(find(i), []).append(i)
        return sorted(groups.values())

    def check_nodal(self):
        """Reject points where three or more components meet, and self-incidences."""
        seen = []
        for nd in self.nodes:
            if nd.a == nd.b:
                raise NonNodalError("a component cannot meet itself at a recorded node")
            for pt, comps in seen:
                if same_point(pt, nd.point, self.p):
                    comps.update((nd.a, nd.b))
                    if len(comps) > 2:
                        raise NonNodalError(f"three components through {pt}")
                    break
            else:
                seen.append((nd.point, {nd.a, nd.b}))

    def piece_genus(self, piece):
        members = set(piece)
        delta = sum(1 for nd in self.nodes if nd.a in members)
        return delta - len(piece) + 1

    def conditions(self, t):
        """Expected number of conditions on degree-t forms (non-special pieces)."""
        total = sum(t * sum(self.components[i].degree for i in pc) + 1 - self.piece_genus(pc) for pc in self.pieces())
        return total + sum(d.length for d in self.decorations)

    def to_dict(self):
        return {
            "n": self.n,
            "p": self.p,
            "components": [c.to_dict() for c in self.components],
            "decorations": [d.to_dict() for d in self.decorations],
            "incidence": [{"a": x.a, "b": x.b, "point": list(x.point)} for x in self.nodes],
            "recipe": None if self.recipe is None else self.recipe.to_dict(),
            "meta": _jsonable(self.meta),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data):
        p = data["p"]
        return cls(
            data["n"],
            [Component.from_dict(c, p) for c in data["components"]],
            [Decoration.from_dict(d) for d in data["decorations"]],
            [Node(x["a"], x["b"], tuple(x["point"])) for x in data["incidence"]],
            p,
            None if data.get("recipe") is None else Recipe.from_dict(data["recipe"]),
            data.get("meta", {}),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def arithmetic_genus(model):
    """Arithmetic genus of a connected model, or the per-piece list otherwise."""
    model.check_nodal()
    genera = [model.piece_genus(pc) for pc in model.pieces()]
    return genera[0] if len(genera) == 1 else genera


@register("genus")
def make_genus_model(n, d, g, rng, p=DEFAULT_PRIME):
    """Rational curve of degree d-g with g disjoint secant lines: degree d, genus g."""
    if not pair_admissible(n, d, g):
        raise ValueError(f"(d, g) = ({d}, {g}) is not admissible in P^{n}")
    for _ in range(MAX_RETRIES):
        base = make_rational_curve(n, d - g, rng, p, label="C")
        model = CurveModel(n, [base], p=p)
        params = random_vector(rng, 2 * g, p)
        if len(set(params.tolist())) < 2 * g:
            continue
        for i in range(g):
            x = base.point_at(int(params[2 * i]))
            y = base.point_at(int(params[2 * i + 1]))
            model = model.add_component(line_through(x, y, p, label=f"S{i + 1}"), meets=[(0, x), (0, y)])
        if _secants_disjoint(model):
            model.meta = {"d": d, "g": g, "h1_O1": 0}
            model.recipe = Recipe("genus", {"n": n, "d": d, "g": g})
            return model
    raise ConstructionError("could not place disjoint secants")


def _secants_disjoint(model):
    lines = [c for c in model.components if c.kind == LINE and c.label.startswith("S")]
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            pts = np.vstack([lines[i].coeffs.T, lines[j].coeffs.T])
            if rank_ff(pts, model.p) < 4 and model.n >= 3:
                return False
    return True


@register("union")
def make_union(n, pairs, rng, p=DEFAULT_PRIME, points=0, arrows=0, planar=0):
    """General disjoint union of genus models plus general decorations."""
    model = CurveModel(n, p=p)
    for d, g in pairs:
        if (d, g) == (0, 0):
            continue
        part = make_genus_model(n, d, g, rng, p) if g else CurveModel(n, [make_rational_curve(n, d, rng, p)], p=p)
        model = model.disjoint_union(part)
    for kind, count in ((POINT, points), (ARROW, arrows), (PLANAR, planar)):
        for _ in range(count):
            model.decorations.append(general_decoration(kind, n, rng, p))
    model.recipe = Recipe("union", {"n": n, "pairs": [list(x) for x in pairs], "points": points, "arrows": arrows, "planar": planar})
    return model


def union_recipe(n, pairs, points=0, arrows=0, planar=0):
    return Recipe("union", {"n": n, "pairs": [list(x) for x in pairs], "points": points, "arrows": arrows, "planar": planar})


@register("fixed")
def _fixed(model, rng, p=DEFAULT_PRIME):
    return CurveModel.from_dict(model)
