#!/usr/bin/env python3
"""
Identify the true expected utility from binary choices around an anchor p.

Observed menus {p, q} split the directions d = q - p into three groups:
q chosen alone, p chosen alone, and ties (both chosen). Ties only happen on
the indifference plane u.d = 0, so when they span it the direction of u is
pinned down up to sign; the sign is the one under which the B(p) points the
data reveal form a convex cone that excludes the revealed NB(p) points.

When {q : p in c({p, q})} is a half-space the data cannot tell utilities apart:
any strictly monotone u reproduces them with that half-space's normal as the
single justification. The result then lists a family of such candidates.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import linprog

from justify.errors import IdentificationError, InputError, NumericError
from justify.eu.checks import EUDataset
from justify.eu.geometry import DEFAULT_MAX_PRIZES, check_anchor, cone_member, tangent_basis
from justify.eu.lottery import contains, same_lottery
from justify.eu.model import TIE_TOLERANCE, normalize_utility
from justify.forward import is_d_monotone

logger = logging.getLogger(__name__)

JSON = Dict[str, Any]

SEPARATION_TOLERANCE = 1e-9
BOUNDARY_TOLERANCE = 1e-6
RANK_TOLERANCE = 1e-8
CANDIDATE_CAP = 64
SPHERE_POINTS = 2000


@dataclass(frozen=True)
class BinarySplit:
    """Unit tangent directions of the binary observations at one anchor."""

    anchor: np.ndarray
    chosen: np.ndarray
    kept: np.ndarray
    ties: np.ndarray

    @property
    def size(self) -> int:
        return self.chosen.shape[0] + self.kept.shape[0] + self.ties.shape[0]


def split_binary(data: EUDataset, p: np.ndarray) -> BinarySplit:
    n = data.space.size
    groups: Dict[str, List[np.ndarray]] = {"chosen": [], "kept": [], "ties": []}
    for menu, choice in data.observations:
        if len(menu) != 2 or not contains(menu, p):
            continue
        q = menu[1] if same_lottery(menu[0], p) else menu[0]
        d = q - p
        d = d / np.linalg.norm(d)
        if contains(choice, p) and contains(choice, q):
            groups["ties"].append(d)
        elif contains(choice, q):
            groups["chosen"].append(d)
        else:
            groups["kept"].append(d)
    rows = {k: np.vstack(v) if v else np.zeros((0, n)) for k, v in groups.items()}
    return BinarySplit(p, rows["chosen"], rows["kept"], rows["ties"])


def separating_normal(split: BinarySplit, basis: np.ndarray) -> Optional[np.ndarray]:
    """Normal w with w.d > 0 on chosen directions, w.d < 0 on kept ones and
    w.d = 0 on ties, or None when no such hyperplane exists."""
    chosen = split.chosen @ basis
    kept = split.kept @ basis
    ties = split.ties @ basis
    dim = basis.shape[1]
    # variables: w (dim), t ; maximize t
    c = np.zeros(dim + 1)
    c[-1] = -1.0
    a_ub = np.vstack([
        np.hstack([-chosen, np.ones((chosen.shape[0], 1))]),
        np.hstack([kept, np.ones((kept.shape[0], 1))]),
    ])
    b_ub = np.zeros(a_ub.shape[0])
    if a_ub.shape[0] == 0:
        a_ub, b_ub = None, None
    a_eq = np.hstack([ties, np.zeros((ties.shape[0], 1))]) if ties.shape[0] else None
    b_eq = np.zeros(ties.shape[0]) if ties.shape[0] else None
    bounds = [(-1.0, 1.0)] * dim + [(None, 1.0)]
    result = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=bounds, method="highs")
    if not result.success:
        raise NumericError("separability program failed", status=result.status, shape=(split.size, dim + 1))
    margin = -result.fun
    logger.debug("separability margin %.3g over %d directions", margin, split.size)
    if margin <= SEPARATION_TOLERANCE:
        return None
    w = basis @ result.x[:dim]
    return w / np.linalg.norm(w)


def reproduces_binary(data: EUDataset, p: np.ndarray, utility: np.ndarray, normal: np.ndarray) -> bool:
    """Whether the single justification ``normal`` plus ``utility`` reproduce
    every binary observation at p."""
    u = normalize_utility(utility)
    w = normal / np.linalg.norm(normal)
    for menu, choice in data.observations:
        if len(menu) != 2 or not contains(menu, p):
            continue
        q = menu[1] if same_lottery(menu[0], p) else menu[0]
        d = q - p
        side = float(w @ d) / float(np.linalg.norm(d))
        if side > BOUNDARY_TOLERANCE:
            expected = (False, True)
        elif side < -BOUNDARY_TOLERANCE:
            expected = (True, False)
        else:
            du = float(u @ d)
            expected = (du <= TIE_TOLERANCE, du >= -TIE_TOLERANCE)
        if (contains(choice, p), contains(choice, q)) != expected:
            return False
    return True


def _direction_samples(dim: int) -> np.ndarray:
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        angles = np.deg2rad(np.arange(0.0, 360.0, 1.0))
        return np.column_stack([np.cos(angles), np.sin(angles)])
    if dim == 3:
        k = np.arange(SPHERE_POINTS) + 0.5
        polar = np.arccos(1.0 - 2.0 * k / SPHERE_POINTS)
        azimuth = np.pi * (1.0 + 5.0 ** 0.5) * k
        return np.column_stack([np.cos(azimuth) * np.sin(polar), np.sin(azimuth) * np.sin(polar), np.cos(polar)])
    raise InputError(f"candidate sampling supports tangent dimension at most 3, got {dim}")


def candidate_family(data: EUDataset, p: np.ndarray, normal: np.ndarray, basis: np.ndarray,
                     cap: int = CANDIDATE_CAP) -> List[np.ndarray]:
    space = data.space
    found = []
    for y in _direction_samples(basis.shape[1]):
        u = basis @ y
        if not is_d_monotone(u, space.dominance, "strict", space.prizes):
            continue
        if reproduces_binary(data, p, u, normal):
            found.append(u / np.linalg.norm(u))
    if len(found) > cap:
        picks = np.linspace(0, len(found) - 1, cap).round().astype(int)
        found = [found[i] for i in picks]
    return found


def _convexity_failures(split: BinarySplit, utility: np.ndarray) -> int:
    """Revealed NB(p) directions inside the cone of revealed B(p) directions."""
    better = split.chosen[split.chosen @ utility <= TIE_TOLERANCE]
    if better.shape[0] == 0:
        return 0
    worse = split.kept[split.kept @ utility <= TIE_TOLERANCE]
    return sum(1 for d in worse if cone_member(better, d))


def fit_indifference_plane(split: BinarySplit, basis: np.ndarray) -> np.ndarray:
    """Unit normal (in prize coordinates) of the plane through the tie directions."""
    dim = basis.shape[1]
    if split.ties.shape[0] == 0:
        raise IdentificationError("no indifference observations at the anchor")
    ties = split.ties @ basis
    singular = np.linalg.svd(ties, compute_uv=False)
    rank = int(np.sum(singular > RANK_TOLERANCE * singular[0]))
    if rank < dim - 1:
        raise IdentificationError(
            f"indifference observations span {rank} of the {dim - 1} directions needed to fix the utility"
        )
    w = np.linalg.svd(ties)[2][-1]
    residual = float(np.max(np.abs(ties @ w)))
    logger.debug("indifference plane fitted with residual %.3g", residual)
    u = basis @ w
    return u / np.linalg.norm(u)


def orient(split: BinarySplit, direction: np.ndarray, data: EUDataset) -> np.ndarray:
    space = data.space

    def score(u: np.ndarray) -> Tuple[int, int]:
        monotone = is_d_monotone(u, space.dominance, "strict", space.prizes)
        return _convexity_failures(split, u), 0 if monotone else 1

    plus, minus = score(direction), score(-direction)
    logger.debug("orientation scores: +%s -%s", plus, minus)
    return direction if plus <= minus else -direction


@dataclass(frozen=True, eq=False)
class RecoveryResult:
    utility_direction: Optional[np.ndarray]
    unique: bool
    candidates: Tuple[np.ndarray, ...] = ()
    normal: Optional[np.ndarray] = None
    ties_used: int = 0

    def to_dict(self) -> JSON:
        def vec(x: Optional[np.ndarray]) -> Optional[List[float]]:
            return None if x is None else [round(float(v), 12) for v in x]

        return {
            "utility_direction": vec(self.utility_direction),
            "unique": self.unique,
            "candidates": [vec(c) for c in self.candidates],
            "half_space_normal": vec(self.normal),
            "ties_used": self.ties_used,
        }


def recover_true_preference(
    data: EUDataset,
    p: np.ndarray,
    max_prizes: int = DEFAULT_MAX_PRIZES,
    candidate_cap: int = CANDIDATE_CAP,
) -> RecoveryResult:
    check_anchor(data.space, p, max_prizes)
    split = split_binary(data, p)
    if split.size == 0:
        raise IdentificationError("no binary observations contain the anchor")
    basis = tangent_basis(data.space.size)

    normal = separating_normal(split, basis)
    if normal is not None:
        family = candidate_family(data, p, normal, basis, candidate_cap)
        logger.info("choices at the anchor form a half-space; %d candidate utilities", len(family))
        return RecoveryResult(None, False, tuple(family), normal, split.ties.shape[0])

    direction = orient(split, fit_indifference_plane(split, basis), data)
    return RecoveryResult(direction, True, (direction,), None, split.ties.shape[0])


def angle_between(first: np.ndarray, second: np.ndarray) -> float:
    """Angle in degrees between two utilities after mean-centring."""
    a, b = normalize_utility(first), normalize_utility(second)
    return float(np.degrees(np.arccos(np.clip(a @ b, -1.0, 1.0))))
