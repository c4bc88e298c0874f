#!/usr/bin/env python3
"""
Expected-utility justifiability models.

A model is a strictly dominance-monotone true utility plus the vertices of a
polytope of weakly monotone Bernoulli utilities. A lottery is justified in a
menu when some utility of the polytope ranks it first; the model chooses the
true-utility maximal justified lotteries.

Utilities are stored mean-centred with unit norm. Expected-utility rankings
over lotteries are unchanged by that normalization.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog

from justify.errors import InputError, NumericError
from justify.eu.lottery import PrizeSpace, as_lottery, dedupe, lottery_key, same_lottery
from justify.forward import is_d_monotone

logger = logging.getLogger(__name__)

JSON = Dict[str, Any]

TIE_TOLERANCE = 1e-9


class Region(str, Enum):
    B = "B"
    NB = "NB"
    W = "W"
    BETTER_CHOSEN = "better-chosen"
    UNKNOWN = "unknown"


def normalize_utility(values: Iterable[float]) -> np.ndarray:
    u = np.asarray(list(values), dtype=float)
    if not np.all(np.isfinite(u)):
        raise InputError("utility has non-finite entries", [str(u.tolist())])
    centred = u - u.mean()
    norm = float(np.linalg.norm(centred))
    if norm < 1e-12:
        raise InputError("a constant utility ranks no lottery above another", [str(u.tolist())])
    return centred / norm


@dataclass(frozen=True, eq=False)
class EUModel:
    space: PrizeSpace
    true_utility: np.ndarray
    vertices: Tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        n = self.space.size
        u = normalize_utility(self.true_utility)
        if u.shape != (n,):
            raise InputError(f"true utility has {u.size} entries for {n} prizes")
        if not is_d_monotone(u, self.space.dominance, "strict", self.space.prizes):
            raise InputError("true utility must strictly rank every dominance pair", [str(np.round(u, 6).tolist())])

        kept: Dict[Tuple[float, ...], np.ndarray] = {}
        defects = []
        for raw in self.vertices:
            v = normalize_utility(raw)
            if v.shape != (n,):
                defects.append(f"vertex {list(raw)} has the wrong length")
                continue
            if not is_d_monotone(v, self.space.dominance, "weak", self.space.prizes):
                defects.append(f"vertex {np.round(v, 6).tolist()} is not weakly dominance-monotone")
                continue
            kept.setdefault(lottery_key(v), v)
        if defects:
            raise InputError("invalid utility polytope", defects)
        if not kept:
            raise InputError("utility polytope needs at least one vertex")
        object.__setattr__(self, "true_utility", u)
        object.__setattr__(self, "vertices", tuple(kept[k] for k in sorted(kept)))

    @property
    def matrix(self) -> np.ndarray:
        return np.vstack(self.vertices)

    def to_dict(self) -> JSON:
        payload = self.space.to_dict()
        payload["true_utility"] = [float(x) for x in self.true_utility]
        payload["vertices"] = [[float(x) for x in v] for v in self.vertices]
        return payload


def model_from_dict(raw: Any, space: Optional[PrizeSpace] = None) -> EUModel:
    if not isinstance(raw, dict):
        raise InputError("EU model must be a mapping/object")
    if space is None:
        space = PrizeSpace.from_dict(raw)
    utility, vertices = raw.get("true_utility"), raw.get("vertices")
    errors = []
    if not isinstance(utility, list):
        errors.append("true_utility must be a list of numbers")
    if not isinstance(vertices, list) or not vertices or not all(isinstance(v, list) for v in vertices):
        errors.append("vertices must be a nonempty list of utility vectors")
    if errors:
        raise InputError("invalid EU model", errors)
    return EUModel(space, np.asarray(utility, dtype=float), tuple(np.asarray(v, dtype=float) for v in vertices))


def _hull_justifies(vertices: np.ndarray, items: np.ndarray, index: int) -> bool:
    """Whether some convex combination of the vertices ranks items[index] first."""
    others = np.delete(items, index, axis=0)
    gains = (items[index] - others) @ vertices.T
    k = vertices.shape[0]
    # variables: λ_1..λ_k, t ; maximize t subject to gains @ λ >= t
    c = np.zeros(k + 1)
    c[-1] = -1.0
    a_ub = np.hstack([-gains, np.ones((gains.shape[0], 1))])
    b_ub = np.zeros(gains.shape[0])
    a_eq = np.zeros((1, k + 1))
    a_eq[0, :k] = 1.0
    bounds = [(0, None)] * k + [(None, None)]
    result = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=[1.0], bounds=bounds, method="highs")
    if not result.success:
        raise NumericError("justification program failed", status=result.status, shape=a_ub.shape)
    return -result.fun >= -TIE_TOLERANCE


def justified_indices(model: EUModel, menu: Sequence[np.ndarray]) -> List[int]:
    items = np.vstack(menu)
    vertices = model.matrix
    scores = items @ vertices.T
    found = set()
    for k in range(vertices.shape[0]):
        column = scores[:, k]
        found.update(np.flatnonzero(column >= column.max() - TIE_TOLERANCE).tolist())
    if len(menu) >= 3 and vertices.shape[0] >= 2:
        for i in range(len(menu)):
            if i not in found and _hull_justifies(vertices, items, i):
                found.add(i)
    return sorted(found)


def _check_menu(model: EUModel, menu: Sequence[np.ndarray]) -> List[np.ndarray]:
    items = dedupe([as_lottery(p, model.space.size) for p in menu])
    if not items:
        raise InputError("menu is empty")
    return items


def eu_choose(model: EUModel, menu: Sequence[np.ndarray]) -> List[np.ndarray]:
    items = _check_menu(model, menu)
    justified = justified_indices(model, items)
    values = {i: float(model.true_utility @ items[i]) for i in justified}
    best = max(values.values())
    return [items[i] for i in justified if values[i] >= best - TIE_TOLERANCE]


def classify(model: EUModel, p: np.ndarray, q: np.ndarray) -> Region:
    """Region of q relative to anchor p, read off the binary menu {p, q}."""
    if same_lottery(p, q):
        raise InputError("classification needs two distinct lotteries")
    d = q - p
    du = float(model.true_utility @ d)
    dv = model.matrix @ d
    if du <= TIE_TOLERANCE:
        return Region.B if bool(np.all(dv > TIE_TOLERANCE)) else Region.NB
    return Region.W if bool(np.all(dv < -TIE_TOLERANCE)) else Region.BETTER_CHOSEN


def classification_margin(model: EUModel, p: np.ndarray, q: np.ndarray) -> float:
    """Distance of every defining inequality of classify from its threshold."""
    d = q - p
    return float(min(abs(model.true_utility @ d), np.min(np.abs(model.matrix @ d))))


def joint_prediction(
    model: EUModel, first: Sequence[np.ndarray], second: Sequence[np.ndarray]
) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Pairs (a, b) whose half-half mixture is chosen from ½A + ½B."""
    left = _check_menu(model, first)
    right = _check_menu(model, second)
    pairs = [(a, b) for a in left for b in right]
    chosen = eu_choose(model, [(a + b) / 2.0 for a, b in pairs])
    chosen_keys = {lottery_key(x) for x in chosen}
    return [(a, b) for a, b in pairs if lottery_key((a + b) / 2.0) in chosen_keys]
