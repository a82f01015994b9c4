"""Degenerate curve models in P^n and the conditions they impose on forms."""
from .conditions import (
    HilbertSample,
    NonTransversalError,
    condition_matrix,
    general_decoration_extra,
    general_secant,
    h0_h1,
    independence_check,
    line_through_point_of,
    representative,
    residual_chi_check,
    sample_model,
    trial_seed,
)
from .model import (
    ARROW,
    LINE,
    PLANAR,
    POINT,
    RATIONAL,
    Component,
    ConstructionError,
    CurveModel,
    Decoration,
    Node,
    NonNodalError,
    Recipe,
    arithmetic_genus,
    general_decoration,
    line_through,
    make_genus_model,
    make_rational_curve,
    make_union,
    union_recipe,
)
from .segre import (
    BMReport,
    NoGoodSecants,
    good_secants,
    quadric_points_on_line,
    quadric_value,
    ruling_line,
    ruling_params,
    segre_point,
    verify_bm_witness,
)
from .trees import TreeConstraintError, TreeConstraints, TreeType, good_node_partition, make_tree

__all__ = [name for name in dir() if not name.startswith("_")]
