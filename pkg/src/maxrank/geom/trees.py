"""Trees of lines: attachment types, constrained construction, node partitions."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from ..ffla import DEFAULT_PRIME
from .model import (
    MAX_RETRIES,
    ConstructionError,
    CurveModel,
    Node,
    Recipe,
    line_through,
    proj_rank,
    random_vector,
    register,
)


class TreeConstraintError(ValueError):
    """The requested pins cannot be realized by a tree of the given type."""


@dataclass(frozen=True)
class TreeType:
    """Line i (1-based, i >= 2) meets line tau[i-2]; every tau(i) < i."""

    d: int
    tau: tuple = ()

    def __post_init__(self):
        tau = tuple(int(x) for x in self.tau)
        object.__setattr__(self, "tau", tau)
        if self.d < 1:
            raise ValueError("a tree has at least one line")
        if len(tau) != self.d - 1:
            raise ValueError(f"type of a degree-{self.d} tree has {self.d - 1} entries")
        for i, parent in enumerate(tau, start=2):
            if not 1 <= parent < i:
                raise ValueError(f"tau({i}) = {parent} must lie in [1, {i - 1}]")

    def parent(self, i):
        return self.tau[i - 2]

    def is_bamboo(self):
        return all(par == i - 1 for i, par in enumerate(self.tau, start=2))

    @classmethod
    def bamboo(cls, d):
        return cls(d, tuple(range(1, d)))

    @classmethod
    def spreading(cls, d):
        return cls(d, (1,) * (d - 1))


@dataclass
class TreeConstraints:
    """Pins, all with 1-based line indices.

    ``lines`` fixes a line by two points, ``nodes`` fixes the point where a
    line meets its parent, and ``hyperplane_points`` fixes the single point
    where a line meets the hyperplane ``hyperplane``.
    """

    lines: dict = field(default_factory=dict)
    nodes: dict = field(default_factory=dict)
    hyperplane_points: dict = field(default_factory=dict)
    hyperplane: tuple | None = None

    def to_dict(self):
        return {
            "lines": {str(k): [list(map(int, x)) for x in v] for k, v in self.lines.items()},
            "nodes": {str(k): list(map(int, v)) for k, v in self.nodes.items()},
            "hyperplane_points": {str(k): list(map(int, v)) for k, v in self.hyperplane_points.items()},
            "hyperplane": None if self.hyperplane is None else list(map(int, self.hyperplane)),
        }

    @classmethod
    def from_dict(cls, data):
        if data is None:
            return cls()
        if isinstance(data, cls):
            return data
        return cls(
            {int(k): tuple(tuple(x) for x in v) for k, v in data.get("lines", {}).items()},
            {int(k): tuple(v) for k, v in data.get("nodes", {}).items()},
            {int(k): tuple(v) for k, v in data.get("hyperplane_points", {}).items()},
            None if data.get("hyperplane") is None else tuple(data["hyperplane"]),
        )


def _dot(h, x, p):
    return int(sum(int(a) * int(b) for a, b in zip(h, x)) % p)


def _span_line(points, n, rng, p, label):
    """A line containing every given point (random completion when underdetermined)."""
    pts = [tuple(int(v) % p for v in x) for x in points]
    basis = []
    for x in pts:
        if proj_rank(basis + [x], p) > len(basis):
            basis.append(x)
    if len(basis) > 2:
        raise TreeConstraintError("pinned points on one line are not collinear")
    while len(basis) < 2:
        x = tuple(int(v) for v in random_vector(rng, n + 1, p))
        if proj_rank(basis + [x], p) > len(basis):
            basis.append(x)
    return line_through(basis[0], basis[1], p, label)


@register("tree")
def make_tree(n, tree_type, rng, constraints=None, p=DEFAULT_PRIME):
    """Connected nodal union of lines whose incidence tree realizes ``tree_type``."""
    if isinstance(tree_type, dict):
        tree_type = TreeType(tree_type["d"], tuple(tree_type["tau"]))
    cons = TreeConstraints.from_dict(constraints)
    d = tree_type.d
    H = cons.hyperplane if cons.hyperplane is not None else tuple([0] * n + [1])
    for idx, x in cons.hyperplane_points.items():
        if _dot(H, x, p):
            raise TreeConstraintError(f"pinned point of line {idx} is not on the hyperplane")
    children = {}
    for i in range(2, d + 1):
        children.setdefault(tree_type.parent(i), []).append(i)
    for _ in range(MAX_RETRIES):
        lines = {}
        nodes = []
        for j in range(1, d + 1):
            required = []
            if j in cons.lines:
                required += list(cons.lines[j])
            if j in cons.hyperplane_points:
                required.append(cons.hyperplane_points[j])
            required += [cons.nodes[c] for c in children.get(j, []) if c in cons.nodes]
            if j >= 2:
                par = lines[tree_type.parent(j)]
                if j in cons.nodes:
                    x = tuple(int(v) % p for v in cons.nodes[j])
                    if not par.contains(x):
                        raise TreeConstraintError(f"node of line {j} is not on line {tree_type.parent(j)}")
                else:
                    x = par.random_point(rng)
                required.append(x)
                nodes.append((tree_type.parent(j) - 1, j - 1, x))
            line = _span_line(required, n, rng, p, f"L{j}")
            if j in cons.hyperplane_points and not any(_dot(H, line.coeffs[:, c], p) for c in range(2)):
                raise TreeConstraintError(f"line {j} is forced into the hyperplane")
            lines[j] = line
        model = CurveModel(n, [lines[j] for j in range(1, d + 1)], p=p)
        for a, b, x in nodes:
            model.nodes.append(Node(a, b, tuple(int(v) for v in x)))
        if _tree_is_nodal(model, tree_type):
            model.meta = {"type": list(tree_type.tau)}
            model.recipe = Recipe("tree", {"n": n, "tree_type": {"d": d, "tau": list(tree_type.tau)}, "constraints": cons.to_dict()})
            return model
        if cons.lines or cons.nodes:
            raise TreeConstraintError("pins force non-incident lines to meet")
    raise ConstructionError("could not build a nodal tree")


def _lines_meet(l1, l2, p):
    pts = np.vstack([l1.coeffs.T, l2.coeffs.T])
    return proj_rank(list(pts), p) <= 3


def _tree_is_nodal(model, tree_type):
    """Lines meet exactly along the tree edges, and distinct edges use distinct points."""
    edges = {(min(x.a, x.b), max(x.a, x.b)) for x in model.nodes}
    comps = model.components
    p = model.p
    if model.n >= 3:
        for i, j in combinations(range(len(comps)), 2):
            if _lines_meet(comps[i], comps[j], p) != ((i, j) in edges):
                return False
    for x, y in combinations(model.nodes, 2):
        if proj_rank([x.point, y.point], p) == 1:
            return False
    return True


def incidence_degrees(model):
    deg = [0] * len(model.components)
    for x in model.nodes:
        deg[x.a] += 1
        deg[x.b] += 1
    return deg


def is_tree(model):
    return len(model.pieces()) == 1 and len(model.nodes) == len(model.components) - 1


def good_node_partition(tree, degrees):
    """Nodes whose removal leaves pieces of exactly the given degrees, or None."""
    if not is_tree(tree):
        raise ValueError("input is not a tree")
    degrees = sorted(int(x) for x in degrees)
    if sum(degrees) != tree.degree or any(x <= 0 for x in degrees):
        raise ValueError("degrees must be positive and sum to the tree degree")
    k = len(degrees) - 1
    comp_deg = [c.degree for c in tree.components]
    for cut in combinations(range(len(tree.nodes)), k):
        cut_set = set(cut)
        parent = list(range(len(comp_deg)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for e, nd in enumerate(tree.nodes):
            if e not in cut_set:
                parent[find(nd.a)] = find(nd.b)
        sizes = {}
        for i, dd in enumerate(comp_deg):
            r = find(i)
            sizes[r] = sizes.get(r, 0) + dd
        if sorted(sizes.values()) == degrees:
            return frozenset((tree.nodes[e].a, tree.nodes[e].b) for e in cut)
    return None
