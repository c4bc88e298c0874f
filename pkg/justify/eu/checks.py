#!/usr/bin/env python3
"""
Lottery choice datasets and the expected-utility axiom checks.

Every distinct lottery gets a stable string id (L0, L1, ... in lottery order)
so the general checkers (Optimization, IUA) run on an ordinary ChoiceDataset.
The lottery-specific checks are:

* Independence: c(αA + (1−α){r}) = αc(A) + (1−α){r} for observed menu pairs
  related by such a mixture;
* Monotonicity: an FOSD-dominated lottery is never chosen and removing it
  leaves the choice unchanged;
* Convexity: if the hull of A meets B(p), p is not chosen from A ∪ {p}, with
  B(p) read off observed binary menus (so only known B points count).

Continuity and the first part of Convexity cannot be refuted by finitely many
observations; they are reported as coverage notes.
"""

from __future__ import annotations

import itertools
import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog

from justify import axioms
from justify.axioms import Coverage, Violation, sort_violations
from justify.core import ChoiceDataset, WeakOrder
from justify.data.dataset import load_document
from justify.errors import InputError, NumericError
from justify.eu.geometry import BSample
from justify.eu.lottery import PrizeSpace, as_lottery, contains, dedupe, fosd, lottery_key, mix, same_lottery
from justify.eu.model import TIE_TOLERANCE, EUModel, Region, eu_choose, normalize_utility

logger = logging.getLogger(__name__)

JSON = Dict[str, Any]

MIX_TOLERANCE = 1e-7
SHAPE_DECIMALS = 6

LotteryMenu = Tuple[np.ndarray, ...]


@dataclass(frozen=True, eq=False)
class EUDataset:
    space: PrizeSpace
    observations: Tuple[Tuple[LotteryMenu, LotteryMenu], ...]
    true_utility: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        n = self.space.size
        cleaned = []
        seen: Dict[FrozenSet[Tuple[float, ...]], FrozenSet[Tuple[float, ...]]] = {}
        defects = []
        for index, (menu, choice) in enumerate(self.observations):
            items = tuple(dedupe([as_lottery(p, n) for p in menu]))
            chosen = tuple(dedupe([as_lottery(p, n) for p in choice]))
            if not items:
                defects.append(f"observation #{index}: empty menu")
                continue
            if not chosen:
                defects.append(f"observation #{index}: empty choice")
                continue
            if not all(contains(items, c) for c in chosen):
                defects.append(f"observation #{index}: choice outside menu")
                continue
            key = frozenset(lottery_key(p) for p in items)
            picked = frozenset(lottery_key(p) for p in chosen)
            if key in seen:
                if seen[key] != picked:
                    defects.append(f"observation #{index}: contradictory duplicate observation")
                continue
            seen[key] = picked
            cleaned.append((items, chosen))
        if self.true_utility is not None:
            u = np.asarray(self.true_utility, dtype=float)
            if u.shape != (n,):
                defects.append(f"true_utility has {u.size} entries for {n} prizes")
        if defects:
            raise InputError("invalid lottery dataset", defects)
        object.__setattr__(self, "observations", tuple(cleaned))
        if self.true_utility is not None:
            object.__setattr__(self, "true_utility", normalize_utility(self.true_utility))

        keys = sorted({lottery_key(p) for menu, _ in cleaned for p in menu})
        object.__setattr__(self, "_ids", {k: f"L{i}" for i, k in enumerate(keys)})
        object.__setattr__(self, "_lotteries", {f"L{i}": np.asarray(k) for i, k in enumerate(keys)})

    @property
    def lotteries(self) -> Mapping[str, np.ndarray]:
        return dict(self._lotteries)

    def lottery_id(self, p: np.ndarray) -> Optional[str]:
        found = self._ids.get(lottery_key(p))
        if found is not None:
            return found
        for ident, q in self._lotteries.items():
            if same_lottery(p, q):
                return ident
        return None

    def ids(self, menu: Sequence[np.ndarray]) -> List[str]:
        found = [self.lottery_id(p) for p in menu]
        if any(x is None for x in found):
            raise InputError("lottery is not part of the dataset")
        return sorted(found, key=lambda x: int(x[1:]))

    def choice(self, menu: Sequence[np.ndarray]) -> Optional[List[np.ndarray]]:
        """Observed choice from ``menu``; singletons are implicitly observed."""
        items = dedupe(list(menu))
        if len(items) == 1:
            return items
        target = frozenset(lottery_key(p) for p in items)
        for observed, chosen in self.observations:
            if len(observed) == len(items) and frozenset(lottery_key(p) for p in observed) == target:
                return list(chosen)
        if all(self.lottery_id(p) is not None for p in items):
            wanted = frozenset(self.ids(items))
            for observed, chosen in self.observations:
                if frozenset(self.ids(observed)) == wanted:
                    return list(chosen)
        return None

    def to_choice_dataset(self, utility: Optional[np.ndarray] = None) -> ChoiceDataset:
        utility = self.true_utility if utility is None else normalize_utility(utility)
        observations = {frozenset(self.ids(menu)): frozenset(self.ids(chosen)) for menu, chosen in self.observations}
        pref = preference_from_utility(self._lotteries, utility) if utility is not None else None
        return ChoiceDataset(frozenset(self._lotteries), observations, pref)

    def to_dict(self) -> JSON:
        payload = self.space.to_dict()
        payload["observations"] = [
            {"menu": [[float(x) for x in p] for p in menu], "choice": [[float(x) for x in p] for p in chosen]}
            for menu, chosen in self.observations
        ]
        if self.true_utility is not None:
            payload["true_utility"] = [float(x) for x in self.true_utility]
        return payload


def preference_from_utility(lotteries: Mapping[str, np.ndarray], utility: np.ndarray) -> WeakOrder:
    """Tiers of equal expected utility, best first."""
    ranked = sorted(lotteries, key=lambda k: (-float(utility @ lotteries[k]), int(k[1:])))
    tiers: List[List[str]] = []
    top = None
    for ident in ranked:
        value = float(utility @ lotteries[ident])
        if top is not None and top - value <= TIE_TOLERANCE:
            tiers[-1].append(ident)
        else:
            tiers.append([ident])
            top = value
    return WeakOrder.from_lists(tiers)


def validate_eu_dataset(raw: Any) -> List[str]:
    errors: List[str] = []
    if not isinstance(raw, dict):
        return ["Dataset must be a mapping/object."]
    prizes = raw.get("prizes")
    if not isinstance(prizes, list) or len(prizes) < 2 or not all(isinstance(z, str) and z for z in prizes):
        errors.append("prizes must be a list of at least two nonempty strings")
        return errors
    dominance = raw.get("prize_dominance")
    if not isinstance(dominance, list) or not dominance:
        errors.append("prize_dominance must list at least one [better, worse] pair")
    observations = raw.get("observations")
    if not isinstance(observations, list):
        errors.append("observations must be a list")
        observations = []
    for index, obs in enumerate(observations):
        if not isinstance(obs, dict):
            errors.append(f"observation #{index}: must be an object with menu and choice")
            continue
        for key in ("menu", "choice"):
            value = obs.get(key)
            if not isinstance(value, list) or not value:
                errors.append(f"observation #{index}: {key} must be a nonempty list of lotteries")
            elif not all(isinstance(p, list) and len(p) == len(prizes) for p in value):
                errors.append(f"observation #{index}: every {key} lottery needs {len(prizes)} probabilities")
    utility = raw.get("true_utility")
    if utility is not None and (not isinstance(utility, list) or len(utility) != len(prizes)):
        errors.append(f"true_utility must list {len(prizes)} numbers")
    return errors


def eu_dataset_from_dict(raw: Any) -> EUDataset:
    errors = validate_eu_dataset(raw)
    if errors:
        raise InputError("invalid lottery dataset", errors)
    space = PrizeSpace.from_dict(raw)
    observations = tuple(
        (tuple(np.asarray(p, dtype=float) for p in o["menu"]), tuple(np.asarray(p, dtype=float) for p in o["choice"]))
        for o in raw["observations"]
    )
    utility = raw.get("true_utility")
    return EUDataset(space, observations, None if utility is None else np.asarray(utility, dtype=float))


def read_eu_dataset(path: str) -> EUDataset:
    return eu_dataset_from_dict(load_document(path))


def generate_eu_dataset(model: EUModel, menus: Sequence[Sequence[np.ndarray]]) -> EUDataset:
    observations = []
    for menu in menus:
        items = tuple(dedupe(list(menu)))
        observations.append((items, tuple(eu_choose(model, items))))
    return EUDataset(model.space, tuple(observations), model.true_utility)


def binary_menus_around(p: np.ndarray, grid: np.ndarray) -> List[List[np.ndarray]]:
    return [[p, q] for q in grid if not same_lottery(p, q)]


def bsample_from_data(data: EUDataset, p: np.ndarray, utility: Optional[np.ndarray] = None) -> BSample:
    """Classify every q observed in a binary menu {p, q}."""
    utility = data.true_utility if utility is None else normalize_utility(utility)
    points, classes = [], []
    for menu, chosen in data.observations:
        if len(menu) != 2 or not contains(menu, p):
            continue
        q = menu[1] if same_lottery(menu[0], p) else menu[0]
        p_chosen, q_chosen = contains(chosen, p), contains(chosen, q)
        if utility is None:
            region = Region.UNKNOWN
        else:
            worse = float(utility @ (q - p)) <= TIE_TOLERANCE
            if worse:
                region = Region.B if not p_chosen else Region.NB
            elif q_chosen:
                region = Region.BETTER_CHOSEN
            else:
                region = Region.W
        points.append(q)
        classes.append(region)
    return BSample(p, tuple(points), tuple(classes))


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------


def _same_set(first: Sequence[np.ndarray], second: Sequence[np.ndarray], tol: float = MIX_TOLERANCE) -> bool:
    if len(dedupe(list(first))) != len(dedupe(list(second))):
        return False
    return all(contains(second, a, tol) for a in first) and all(contains(first, b, tol) for b in second)


def _shape(menu: LotteryMenu) -> Optional[Tuple[Tuple[float, ...], float, np.ndarray]]:
    points = np.vstack(menu)
    centre = points.mean(axis=0)
    offsets = points - centre
    scale = float(np.max(np.linalg.norm(offsets, axis=1)))
    if scale < 1e-12:
        return None
    rows = sorted(tuple(float(x) + 0.0 for x in np.round(row, SHAPE_DECIMALS)) for row in offsets / scale)
    return tuple(itertools.chain.from_iterable(rows)), scale, centre


def check_independence(data: EUDataset, coverage: Optional[Coverage] = None) -> List[Violation]:
    groups: Dict[Tuple[float, ...], List[Tuple[int, float, np.ndarray]]] = defaultdict(list)
    for index, (menu, _) in enumerate(data.observations):
        if len(menu) < 2:
            continue
        shape = _shape(menu)
        if shape is not None:
            groups[shape[0]].append((index, shape[1], shape[2]))
    violations: List[Violation] = []
    for members in groups.values():
        for (i, scale_i, centre_i), (j, scale_j, centre_j) in itertools.combinations(members, 2):
            if abs(scale_i - scale_j) <= 1e-9:
                continue
            if scale_i < scale_j:
                (i, scale_i, centre_i), (j, scale_j, centre_j) = (j, scale_j, centre_j), (i, scale_i, centre_i)
            alpha = scale_j / scale_i
            r = (centre_j - alpha * centre_i) / (1.0 - alpha)
            if np.any(r < -MIX_TOLERANCE):
                continue
            r = np.clip(r, 0.0, None)
            r = r / r.sum()
            big_menu, big_choice = data.observations[i]
            small_menu, small_choice = data.observations[j]
            if not _same_set(mix(alpha, big_menu, r), small_menu):
                continue
            if coverage is not None:
                coverage.checked += 1
            expected = mix(alpha, big_choice, r)
            if not _same_set(expected, small_choice):
                violations.append(
                    Violation(
                        "Independence",
                        {
                            "A": data.ids(big_menu),
                            "mixed": data.ids(small_menu),
                            "alpha": round(alpha, 9),
                            "r": [round(float(x), 9) for x in r],
                        },
                        f"mixing {data.ids(big_menu)} with weight {alpha:.4g} does not carry its choice along",
                    )
                )
    return sort_violations(violations)


def check_monotonicity(data: EUDataset, coverage: Optional[Coverage] = None) -> List[Violation]:
    violations: List[Violation] = []
    for menu, chosen in data.observations:
        for q in menu:
            dominators = [p for p in menu if not same_lottery(p, q) and fosd(p, q, data.space)]
            if not dominators:
                continue
            q_id = data.lottery_id(q)
            if contains(chosen, q):
                if coverage is not None:
                    coverage.checked += 1
                violations.append(
                    Violation(
                        "Monotonicity",
                        {"A": data.ids(menu), "q": q_id, "dominated_by": data.ids(dominators)},
                        f"{q_id} is chosen although {data.ids(dominators)[0]} dominates it",
                    )
                )
                continue
            rest = [p for p in menu if not same_lottery(p, q)]
            rest_choice = data.choice(rest)
            if rest_choice is None:
                if coverage is not None:
                    coverage.vacuous += 1
                continue
            if coverage is not None:
                coverage.checked += 1
            if not _same_set(rest_choice, chosen):
                violations.append(
                    Violation(
                        "Monotonicity",
                        {"A": data.ids(menu), "q": q_id, "dominated_by": data.ids(dominators)},
                        f"removing dominated {q_id} from {data.ids(menu)} changes the choice",
                    )
                )
    return sort_violations(violations)


def _hull_meets_cone(menu: Sequence[np.ndarray], p: np.ndarray, directions: np.ndarray) -> Optional[np.ndarray]:
    """Weights α with Σα(a − p) in the cone spanned by ``directions``, if any."""
    offsets = np.vstack([a - p for a in menu])
    k, m = offsets.shape[0], directions.shape[0]
    # variables: α_1..α_k, λ_1..λ_m
    a_eq = np.vstack([
        np.hstack([offsets.T, -directions.T]),
        np.hstack([np.ones((1, k)), np.zeros((1, m))]),
    ])
    b_eq = np.concatenate([np.zeros(offsets.shape[1]), [1.0]])
    a_ub = np.hstack([np.zeros((1, k)), -np.ones((1, m))])
    result = linprog(np.zeros(k + m), A_ub=a_ub, b_ub=[-1e-6], A_eq=a_eq, b_eq=b_eq,
                     bounds=[(0, None)] * (k + m), method="highs")
    if result.status == 2:
        return None
    if not result.success:
        raise NumericError("convexity program failed", status=result.status, shape=a_eq.shape)
    return result.x[:k]


def check_convexity(data: EUDataset, utility: Optional[np.ndarray] = None, coverage: Optional[Coverage] = None) -> List[Violation]:
    utility = data.true_utility if utility is None else normalize_utility(utility)
    if utility is None:
        if coverage is not None:
            coverage.note("Convexity: no true utility, B(p) membership unknown")
        return []
    known: Dict[Tuple[float, ...], np.ndarray] = {}

    def directions_at(p: np.ndarray) -> np.ndarray:
        key = lottery_key(p)
        if key not in known:
            sample = bsample_from_data(data, p, utility)
            dirs = [q - p for q in sample.of(Region.B)]
            known[key] = np.vstack([d / np.linalg.norm(d) for d in dirs]) if dirs else np.zeros((0, p.size))
        return known[key]

    violations: List[Violation] = []
    for menu, chosen in data.observations:
        if len(menu) < 3:
            continue
        for p in chosen:
            directions = directions_at(p)
            if directions.shape[0] == 0:
                if coverage is not None:
                    coverage.vacuous += 1
                continue
            if coverage is not None:
                coverage.checked += 1
            rest = [a for a in menu if not same_lottery(a, p)]
            weights = _hull_meets_cone(rest, p, directions)
            if weights is not None:
                violations.append(
                    Violation(
                        "Convexity",
                        {"A": data.ids(rest), "p": data.lottery_id(p), "weights": [round(float(w), 9) for w in weights]},
                        f"{data.lottery_id(p)} is chosen although the hull of the rest of the menu meets its B set",
                    )
                )
    return sort_violations(violations)


EU_AXIOMS = ("opt", "iua", "independence", "monotonicity", "convexity")


def check_eu_axioms(
    data: EUDataset,
    true_utility: Optional[np.ndarray] = None,
    coverage: Optional[Coverage] = None,
    axiom_names: Sequence[str] = EU_AXIOMS,
) -> List[Violation]:
    coverage = coverage if coverage is not None else Coverage()
    utility = data.true_utility if true_utility is None else normalize_utility(true_utility)
    unknown = sorted(set(axiom_names) - set(EU_AXIOMS))
    if unknown:
        raise InputError("unknown EU axiom", [f"{name}; choose from {', '.join(EU_AXIOMS)}" for name in unknown])
    violations: List[Violation] = []
    if {"opt", "iua"} & set(axiom_names):
        if utility is None:
            coverage.note("Optimization/IUA: no true utility given")
        else:
            choice_data = data.to_choice_dataset(utility)
            if "opt" in axiom_names:
                violations += axioms.check_optimization(choice_data, None, coverage)
            if "iua" in axiom_names:
                violations += axioms.check_iua(choice_data, None, coverage)
    if "independence" in axiom_names:
        violations += check_independence(data, coverage)
    if "monotonicity" in axiom_names:
        violations += check_monotonicity(data, coverage)
    if "convexity" in axiom_names:
        violations += check_convexity(data, utility, coverage)
        coverage.note("Convexity (first part): not refutable from finitely many observations")
    coverage.note("Continuity: closedness of NB(p) holds for every polytope model and is not tested on data")
    logger.debug("EU checks: %d violations over %d observations", len(violations), len(data.observations))
    return sort_violations(violations)
