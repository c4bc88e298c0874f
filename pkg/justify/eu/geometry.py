#!/usr/bin/env python3
"""
Cone geometry around an anchor lottery p.

B(p) depends only on the direction d = q - p, which lives in the tangent
space T = {d : sum(d) = 0} of the simplex. Its closure is the polyhedral cone
{d in T : u.d <= 0, m.d >= 0 for every vertex m}. Everything here works in an
orthonormal basis of T, where the mean-centred utilities of a model are
ordinary vectors:

* maximal_polytope: weakly monotone utilities supporting B(p), i.e. the dual
  of closure(B(p)) intersected with the monotone cone;
* minimal_polytope: the vertices whose facets of closure(B(p)) reach lotteries
  strictly worse than p;
* construct_polytope: the same dual cone built from a sample of B(p);
* compare_strictness: containment of the closures of two B-cones.

Extreme rays are enumerated directly (subsets of active constraints), which is
exact and fast for at most four prizes.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import linprog, nnls
from scipy.spatial import ConvexHull, QhullError

from justify.errors import InputError, NumericError, UnsupportedSizeError
from justify.eu.lottery import PrizeSpace, is_interior, lottery_key, same_lottery
from justify.eu.model import EUModel, Region, classification_margin, classify, normalize_utility

logger = logging.getLogger(__name__)

JSON = Dict[str, Any]

EPSILON = 1e-7
RAY_TOLERANCE = 1e-9
DEFAULT_MAX_PRIZES = 4


def tangent_basis(size: int) -> np.ndarray:
    """Orthonormal basis of {d : sum(d) = 0} as columns."""
    return null_space(np.ones((1, size)))


def _unit_rows(rows: np.ndarray) -> np.ndarray:
    if rows.size == 0:
        return rows
    norms = np.linalg.norm(rows, axis=1)
    keep = norms > RAY_TOLERANCE
    return rows[keep] / norms[keep][:, None]


def _unique_rows(rows: Sequence[np.ndarray]) -> np.ndarray:
    found: Dict[Tuple[float, ...], np.ndarray] = {}
    for row in rows:
        found.setdefault(lottery_key(row), row)
    if not found:
        return np.zeros((0, 0))
    return np.vstack([found[k] for k in sorted(found)])


def cone_extreme_rays(rows: np.ndarray, dim: int, tol: float = RAY_TOLERANCE) -> Tuple[np.ndarray, np.ndarray]:
    """Extreme rays and a lineality basis of {x : rows @ x >= 0}, both as unit rows."""
    rows = _unit_rows(np.asarray(rows, dtype=float).reshape(-1, dim))
    if rows.shape[0] == 0:
        return np.zeros((0, dim)), np.eye(dim)
    lineality = null_space(rows)
    if lineality.shape[1] == dim:
        return np.zeros((0, dim)), lineality.T
    span = null_space(lineality.T) if lineality.shape[1] else np.eye(dim)
    reduced = rows @ span
    rank = span.shape[1]
    rays: List[np.ndarray] = []
    if rank == 1:
        candidates = [np.array([1.0]), np.array([-1.0])]
    else:
        candidates = []
        for combo in itertools.combinations(range(reduced.shape[0]), rank - 1):
            active = reduced[list(combo)]
            if np.linalg.matrix_rank(active, tol=1e-10) != rank - 1:
                continue
            direction = null_space(active)[:, 0]
            candidates.extend([direction, -direction])
    for y in candidates:
        if np.all(reduced @ y >= -tol):
            x = span @ y
            rays.append(x / np.linalg.norm(x))
    found = _unique_rows(rays)
    if found.size == 0:
        found = np.zeros((0, dim))
    return found, lineality.T


def halfspaces_of_cone(generators: np.ndarray, dim: int) -> np.ndarray:
    """Rows H with cone(generators) = {x : H @ x >= 0}."""
    rays, lineality = cone_extreme_rays(generators, dim)
    return np.vstack([rays, lineality, -lineality]) if lineality.size else rays


def cone_member(generators: np.ndarray, x: np.ndarray, tol: float = 1e-8) -> bool:
    """Whether x is a nonnegative combination of the generator rows."""
    if generators.size == 0:
        return bool(np.linalg.norm(x) <= tol)
    _, residual = nnls(np.asarray(generators, dtype=float).T, np.asarray(x, dtype=float))
    return residual <= tol * max(1.0, float(np.linalg.norm(x)))


def _rays_to_vertices(basis: np.ndarray, rays: np.ndarray, lineality: np.ndarray, what: str) -> np.ndarray:
    directions = [basis @ y for y in rays]
    if lineality.size:
        logger.warning("%s cone is not pointed; lineality directions added in both signs", what)
        for y in lineality:
            directions.extend([basis @ y, -(basis @ y)])
    if not directions:
        raise NumericError(f"{what} cone has no extreme rays")
    return _unique_rows([d / np.linalg.norm(d) for d in directions])


def check_anchor(space: PrizeSpace, p: np.ndarray, max_prizes: int) -> None:
    if space.size > max_prizes:
        raise UnsupportedSizeError(f"dual-cone computations support at most {max_prizes} prizes, got {space.size}")
    if not is_interior(p):
        raise InputError("anchor lottery must be interior", [str(np.round(p, 6).tolist())])


def b_cone_rows(model: EUModel) -> np.ndarray:
    """Rows g with closure(B(p)) = {d in T : g . d >= 0}: first -u, then the vertices."""
    return np.vstack([-model.true_utility, model.matrix])


# ---------------------------------------------------------------------------
# Convexity axiom
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CoIntersection:
    intersects: bool
    weights: Optional[np.ndarray]
    margin: float

    def to_dict(self) -> JSON:
        return {
            "intersects": self.intersects,
            "witness_weights": None if self.weights is None else [float(w) for w in self.weights],
            "margin": float(self.margin),
        }


def co_intersect_b(model: EUModel, menu: Sequence[np.ndarray], p: np.ndarray, epsilon: float = EPSILON) -> CoIntersection:
    """Whether the convex hull of ``menu`` meets B(p); witness = mixture weights."""
    if not menu:
        raise InputError("menu is empty")
    if any(same_lottery(a, p) for a in menu):
        raise InputError("anchor lottery must not belong to the menu")
    items = np.vstack(menu)
    vertices = model.matrix
    k = items.shape[0]
    # variables: α_1..α_k, t ; maximize t
    c = np.zeros(k + 1)
    c[-1] = -1.0
    a_ub = np.vstack([
        np.hstack([-(items @ vertices.T).T, np.ones((vertices.shape[0], 1))]),
        np.hstack([(items @ model.true_utility)[None, :], np.zeros((1, 1))]),
    ])
    b_ub = np.concatenate([-(vertices @ p), [float(model.true_utility @ p)]])
    a_eq = np.zeros((1, k + 1))
    a_eq[0, :k] = 1.0
    bounds = [(0, None)] * k + [(None, 1.0)]
    result = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=[1.0], bounds=bounds, method="highs")
    if result.status == 2:
        return CoIntersection(False, None, float("-inf"))
    if not result.success:
        raise NumericError("convex-hull intersection program failed", status=result.status, shape=a_ub.shape)
    margin = -float(result.fun)
    logger.debug("co(A) ∩ B(p): margin %.3g over %d lotteries", margin, k)
    if margin > epsilon:
        return CoIntersection(True, np.clip(result.x[:k], 0.0, None), margin)
    return CoIntersection(False, None, margin)


# ---------------------------------------------------------------------------
# Maximal and minimal polytopes
# ---------------------------------------------------------------------------


def maximal_polytope(model: EUModel, p: np.ndarray, max_prizes: int = DEFAULT_MAX_PRIZES) -> np.ndarray:
    check_anchor(model.space, p, max_prizes)
    basis = tangent_basis(model.space.size)
    dim = basis.shape[1]
    dual = halfspaces_of_cone(b_cone_rows(model) @ basis, dim)
    monotone = model.space.monotone_rows() @ basis
    rays, lineality = cone_extreme_rays(np.vstack([dual, monotone]), dim)
    return _rays_to_vertices(basis, rays, lineality, "maximal")


def _facet_reaches_worse(rows: np.ndarray, index: int, utility: np.ndarray) -> bool:
    """Whether the facet rows[index] . y = 0 of {rows @ y >= 0} holds some y with u . y < 0."""
    dim = rows.shape[1]
    result = linprog(
        utility,
        A_ub=-rows,
        b_ub=np.zeros(rows.shape[0]),
        A_eq=rows[index][None, :],
        b_eq=[0.0],
        bounds=[(-1.0, 1.0)] * dim,
        method="highs",
    )
    if not result.success:
        raise NumericError("facet program failed", status=result.status, shape=rows.shape)
    return float(result.fun) < -EPSILON


def minimal_polytope(model: EUModel, p: np.ndarray, max_prizes: int = DEFAULT_MAX_PRIZES) -> np.ndarray:
    check_anchor(model.space, p, max_prizes)
    basis = tangent_basis(model.space.size)
    rows = b_cone_rows(model) @ basis
    utility = model.true_utility @ basis
    kept = []
    for index in range(1, rows.shape[0]):
        others = np.delete(rows, index, axis=0)
        if cone_member(others, rows[index]):
            logger.debug("vertex %d is implied by the others", index - 1)
            continue
        if _facet_reaches_worse(rows, index, utility):
            kept.append(model.vertices[index - 1])
    if not kept:
        logger.warning("no vertex supports B(p) at strictly worse lotteries; returning the maximal polytope")
        return maximal_polytope(model, p, max_prizes)
    return _unique_rows(kept)


# ---------------------------------------------------------------------------
# Sampling and construction
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BSample:
    anchor: np.ndarray
    points: Tuple[np.ndarray, ...] = ()
    classes: Tuple[Region, ...] = ()

    def __post_init__(self) -> None:
        if len(self.points) != len(self.classes):
            raise InputError("B sample needs one class per point")

    def of(self, region: Region) -> List[np.ndarray]:
        return [q for q, c in zip(self.points, self.classes) if c == region]

    def counts(self) -> Dict[str, int]:
        found: Dict[str, int] = {}
        for c in self.classes:
            found[c.value] = found.get(c.value, 0) + 1
        return dict(sorted(found.items()))

    def to_dict(self) -> JSON:
        return {
            "anchor": [float(x) for x in self.anchor],
            "points": [{"lottery": [float(x) for x in q], "class": c.value} for q, c in zip(self.points, self.classes)],
            "counts": self.counts(),
        }


def sample_b(model: EUModel, p: np.ndarray, grid: np.ndarray) -> BSample:
    points = [q for q in grid if not same_lottery(q, p)]
    return BSample(p, tuple(points), tuple(classify(model, p, q) for q in points))


def reduce_directions(directions: np.ndarray) -> np.ndarray:
    """Extreme rows of the cone the direction rows generate (all rows if the cone is not pointed)."""
    unit = _unit_rows(directions)
    if unit.shape[0] <= 1:
        return unit
    dim = unit.shape[1]
    if dim == 1:
        return _unique_rows([np.sign(row) for row in unit])
    centre = unit.mean(axis=0)
    if np.linalg.norm(centre) < RAY_TOLERANCE:
        logger.warning("sampled directions do not span a pointed cone; keeping every direction")
        return _unique_rows(list(unit))
    centre = centre / np.linalg.norm(centre)
    heights = unit @ centre
    if np.any(heights <= RAY_TOLERANCE):
        logger.warning("sampled directions do not span a pointed cone; keeping every direction")
        return _unique_rows(list(unit))
    plane = null_space(centre[None, :])
    coords = (unit / heights[:, None]) @ plane
    if coords.shape[1] == 1:
        chosen = {int(np.argmin(coords[:, 0])), int(np.argmax(coords[:, 0]))}
    else:
        try:
            chosen = set(ConvexHull(coords).vertices.tolist())
        except QhullError:
            axis = np.linalg.svd(coords - coords.mean(axis=0))[2][0]
            line = coords @ axis
            chosen = {int(np.argmin(line)), int(np.argmax(line))}
    return _unique_rows([unit[i] for i in sorted(chosen)])


def construct_polytope(
    sample: BSample,
    true_utility: np.ndarray,
    space: PrizeSpace,
    max_prizes: int = DEFAULT_MAX_PRIZES,
) -> np.ndarray:
    """Vertices of the weakly monotone utilities that weakly prefer every sampled
    B(p) point to p, normalized to unit mean-centred vectors."""
    check_anchor(space, sample.anchor, max_prizes)
    normalize_utility(true_utility)
    basis = tangent_basis(space.size)
    dim = basis.shape[1]
    monotone = space.monotone_rows() @ basis
    better = sample.of(Region.B)
    if better:
        directions = np.vstack([q - sample.anchor for q in better]) @ basis
        rows = np.vstack([reduce_directions(directions), monotone])
        logger.debug("polytope from %d B points (%d extreme)", len(better), rows.shape[0] - monotone.shape[0])
    else:
        logger.warning("B sample is empty; returning the full weakly monotone cone")
        rows = monotone
    rays, lineality = cone_extreme_rays(rows, dim)
    return _rays_to_vertices(basis, rays, lineality, "constructed")


def sample_mismatches(model: EUModel, sample: BSample, min_margin: float = 1e-6) -> List[Tuple[np.ndarray, Region, Region]]:
    """Sample points whose B(p) membership differs under ``model``, ignoring
    points within ``min_margin`` of a classification boundary."""
    found = []
    for q, expected in zip(sample.points, sample.classes):
        if expected == Region.UNKNOWN or classification_margin(model, sample.anchor, q) <= min_margin:
            continue
        got = classify(model, sample.anchor, q)
        if (got == Region.B) != (expected == Region.B):
            found.append((q, expected, got))
    return found


# ---------------------------------------------------------------------------
# Comparative statics
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StrictnessComparison:
    relation: str
    witness: Optional[np.ndarray] = None
    contains: Tuple[bool, bool] = field(default=(False, False))

    def to_dict(self) -> JSON:
        return {
            "relation": self.relation,
            "witness": None if self.witness is None else [float(x) for x in self.witness],
        }


def _closure_contains(outer: np.ndarray, inner: np.ndarray, tol: float = EPSILON) -> bool:
    """Whether {d in T : inner @ d >= 0} lies inside {d in T : outer @ d >= 0}."""
    size = outer.shape[1]
    for g in outer:
        result = linprog(
            g,
            A_ub=-inner,
            b_ub=np.zeros(inner.shape[0]),
            A_eq=np.ones((1, size)),
            b_eq=[0.0],
            bounds=[(-1.0, 1.0)] * size,
            method="highs",
        )
        if not result.success:
            raise NumericError("cone containment program failed", status=result.status, shape=inner.shape)
        if float(result.fun) < -tol:
            return False
    return True


def _difference_witness(inside: EUModel, outside: EUModel, p: np.ndarray, epsilon: float) -> Optional[np.ndarray]:
    """A lottery in B(p) of ``inside`` but not of ``outside``."""
    size = p.size
    vertices = inside.matrix
    best: Optional[Tuple[float, np.ndarray]] = None
    for excluded in outside.vertices:
        # variables: d_1..d_n, t ; maximize t
        c = np.zeros(size + 1)
        c[-1] = -1.0
        a_ub = np.vstack([
            np.hstack([-vertices, np.ones((vertices.shape[0], 1))]),
            np.hstack([inside.true_utility[None, :], np.zeros((1, 1))]),
            np.hstack([excluded[None, :], np.zeros((1, 1))]),
        ])
        b_ub = np.zeros(a_ub.shape[0])
        a_eq = np.hstack([np.ones((1, size)), np.zeros((1, 1))])
        bounds = [(-float(x), None) for x in p] + [(None, 1.0)]
        result = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=[0.0], bounds=bounds, method="highs")
        if not result.success:
            raise NumericError("strictness witness program failed", status=result.status, shape=a_ub.shape)
        margin = -float(result.fun)
        if margin > epsilon and (best is None or margin > best[0]):
            best = (margin, p + result.x[:size])
    return None if best is None else np.clip(best[1], 0.0, None)


def compare_strictness(first: EUModel, second: EUModel, p: np.ndarray, epsilon: float = EPSILON,
                       max_prizes: int = DEFAULT_MAX_PRIZES) -> StrictnessComparison:
    """Which model has the larger B(p): the stricter one justifies less."""
    if first.space != second.space:
        raise InputError("models are defined on different prize spaces")
    if not np.allclose(first.true_utility, second.true_utility, atol=1e-6):
        raise InputError("models must share a true utility (up to positive affine transformation)")
    check_anchor(first.space, p, max_prizes)
    rows1, rows2 = b_cone_rows(first), b_cone_rows(second)
    second_in_first = _closure_contains(rows1, rows2)
    first_in_second = _closure_contains(rows2, rows1)
    if second_in_first and first_in_second:
        return StrictnessComparison("equal", None, (True, True))
    if second_in_first:
        return StrictnessComparison("1-stricter", _difference_witness(first, second, p, epsilon), (True, False))
    if first_in_second:
        return StrictnessComparison("2-stricter", _difference_witness(second, first, p, epsilon), (False, True))
    witness = _difference_witness(first, second, p, epsilon)
    return StrictnessComparison("incomparable", witness, (False, False))


def union_hull(first: EUModel, second: EUModel) -> EUModel:
    """Model whose polytope is the convex hull of both vertex sets."""
    if first.space != second.space:
        raise InputError("models are defined on different prize spaces")
    if not np.allclose(first.true_utility, second.true_utility, atol=1e-6):
        raise InputError("models must share a true utility")
    return EUModel(first.space, first.true_utility, first.vertices + second.vertices)
