#!/usr/bin/env python3
"""
Prize spaces, lotteries and extended first-order stochastic dominance.

A lottery is a float vector on the probability simplex over the prizes of a
PrizeSpace, in prize order. Dominance between prizes is a partial order; FOSD
between lotteries is decided as a transportation feasibility problem.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog

from justify.core import DominanceRelation
from justify.errors import InputError, NumericError

JSON = Dict[str, Any]

PROB_TOLERANCE = 1e-12
MATCH_TOLERANCE = 1e-9
KEY_DECIMALS = 9


@dataclass(frozen=True)
class PrizeSpace:
    prizes: Tuple[str, ...]
    dominance: DominanceRelation

    def __post_init__(self) -> None:
        prizes = tuple(str(z) for z in self.prizes)
        defects = []
        if len(prizes) < 2:
            defects.append("at least two prizes are required")
        if len(set(prizes)) != len(prizes):
            defects.append("prizes must be distinct")
        if not self.dominance.items() <= set(prizes):
            defects.append("prize_dominance mentions unknown prizes")
        if not self.dominance:
            defects.append("at least one pair of prizes must be dominance-ranked")
        if defects:
            raise InputError("invalid prize space", defects)
        object.__setattr__(self, "prizes", prizes)

    @classmethod
    def from_dict(cls, raw: Any) -> "PrizeSpace":
        if not isinstance(raw, dict) or not isinstance(raw.get("prizes"), list):
            raise InputError("prize space needs a 'prizes' list")
        pairs = raw.get("prize_dominance") or []
        if not isinstance(pairs, list) or not all(isinstance(p, list) and len(p) == 2 for p in pairs):
            raise InputError("prize_dominance must be a list of [better, worse] pairs")
        return cls(tuple(raw["prizes"]), DominanceRelation.from_pairs(pairs))

    @property
    def size(self) -> int:
        return len(self.prizes)

    def index(self, prize: str) -> int:
        try:
            return self.prizes.index(prize)
        except ValueError:
            raise InputError(f"unknown prize '{prize}'") from None

    def dominance_index(self) -> List[Tuple[int, int]]:
        return sorted((self.index(a), self.index(b)) for a, b in self.dominance.pairs)

    def monotone_rows(self) -> np.ndarray:
        """Rows e_i - e_j for every dominance pair z_i ≻_D z_j."""
        rows = np.zeros((len(self.dominance.pairs), self.size))
        for k, (i, j) in enumerate(self.dominance_index()):
            rows[k, i] = 1.0
            rows[k, j] = -1.0
        return rows

    def to_dict(self) -> JSON:
        return {"prizes": list(self.prizes), "prize_dominance": self.dominance.to_list()}


def as_lottery(values: Iterable[float], size: int) -> np.ndarray:
    p = np.asarray(list(values), dtype=float)
    if p.shape != (size,):
        raise InputError(f"lottery has {p.size} entries, expected {size}")
    if not np.all(np.isfinite(p)) or np.any(p < -PROB_TOLERANCE):
        raise InputError("lottery probabilities must be finite and nonnegative", [str(p.tolist())])
    if abs(p.sum() - 1.0) > PROB_TOLERANCE:
        raise InputError("lottery probabilities must sum to 1", [f"{p.tolist()} sums to {p.sum()!r}"])
    p = np.clip(p, 0.0, None)
    return p / p.sum()


def degenerate(space: PrizeSpace, prize: str) -> np.ndarray:
    p = np.zeros(space.size)
    p[space.index(prize)] = 1.0
    return p


def is_interior(p: np.ndarray, tol: float = PROB_TOLERANCE) -> bool:
    return bool(np.all(p > tol))


def lottery_key(p: np.ndarray) -> Tuple[float, ...]:
    return tuple(float(x) + 0.0 for x in np.round(p, KEY_DECIMALS))


def same_lottery(p: np.ndarray, q: np.ndarray, tol: float = MATCH_TOLERANCE) -> bool:
    return bool(np.max(np.abs(p - q)) <= tol)


def dedupe(menu: Sequence[np.ndarray]) -> List[np.ndarray]:
    seen = set()
    kept = []
    for p in menu:
        key = lottery_key(p)
        if key not in seen:
            seen.add(key)
            kept.append(p)
    return kept


def contains(menu: Sequence[np.ndarray], p: np.ndarray, tol: float = MATCH_TOLERANCE) -> bool:
    return any(same_lottery(p, q, tol) for q in menu)


def lottery_grid(prize_count: int, step: float) -> np.ndarray:
    """Every lottery whose probabilities are multiples of ``step``, in a fixed order."""
    parts = int(round(1.0 / step))
    if parts < 1 or abs(parts * step - 1.0) > 1e-9:
        raise InputError(f"grid step {step} must divide 1")
    points = []
    for bars in itertools.combinations(range(parts + prize_count - 1), prize_count - 1):
        edges = (-1,) + bars + (parts + prize_count - 1,)
        counts = [edges[k + 1] - edges[k] - 1 for k in range(prize_count)]
        points.append(counts)
    return np.asarray(points, dtype=float) / parts


def mix(alpha: float, menu: Sequence[np.ndarray], r: np.ndarray) -> List[np.ndarray]:
    """αA + (1−α){r}."""
    if not 0.0 <= alpha <= 1.0:
        raise InputError(f"mixture weight {alpha} is outside [0, 1]")
    return [alpha * a + (1.0 - alpha) * r for a in menu]


def fosd(p: np.ndarray, q: np.ndarray, space: PrizeSpace) -> bool:
    """Whether p dominates q: q's mass can be moved onto p's mass along
    dominance-or-equal prize pairs, and p differs from q."""
    if p.shape != (space.size,) or q.shape != (space.size,):
        raise InputError("lotteries and prize space differ in dimension")
    if same_lottery(p, q):
        return False
    n = space.size
    arcs = [(i, i) for i in range(n)] + space.dominance_index()
    # x[k] is the mass moved from q's prize arcs[k][1] to p's prize arcs[k][0]
    a_eq = np.zeros((2 * n, len(arcs)))
    for k, (i, j) in enumerate(arcs):
        a_eq[i, k] = 1.0
        a_eq[n + j, k] = 1.0
    b_eq = np.concatenate([p, q])
    result = linprog(np.zeros(len(arcs)), A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * len(arcs), method="highs")
    if result.status == 2:
        return False
    if not result.success:
        raise NumericError("dominance coupling program failed", status=result.status, shape=a_eq.shape)
    return True
