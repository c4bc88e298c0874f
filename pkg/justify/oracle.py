#!/usr/bin/env python3
"""
Brute-force ground truth for small domains.

Enumerates total orders, weak orders and choice functions, decides
representability by exhaustive search, and runs the equivalence sweeps that
tie the axiom checkers to that search. Every random generator takes a seed
and draws from numpy's default_rng, so sweeps replay exactly.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from justify import axioms, revealed, twosetting
from justify.core import (
    ChoiceDataset,
    DominanceRelation,
    MenuItemConstraint,
    TotalOrder,
    WeakOrder,
    all_menus,
    consistent,
    is_extension,
    total_orders,
)
from justify.errors import InputError, UnsupportedSizeError
from justify.eu.lottery import PrizeSpace
from justify.eu.model import EUModel
from justify.forward import JustifiabilityModel, choose, generate_dataset, is_d_monotone

logger = logging.getLogger(__name__)

JSON = Dict[str, Any]

MAX_ORDER_DOMAIN = 8
MAX_CANDIDATE_DOMAIN = 4
MAX_WEAK_ORDER_DOMAIN = 6
EXHAUSTIVE_DOMAIN = 3


def domain_items(size: int) -> List[str]:
    if size <= 3:
        return ["a", "b", "c"][:size]
    return [f"x{i}" for i in range(size)]


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def enumerate_orders(domain: Sequence[str], cap: int = MAX_ORDER_DOMAIN) -> Iterator[TotalOrder]:
    items = sorted(set(domain))
    if len(items) > cap:
        raise UnsupportedSizeError(f"order enumeration supports at most {cap} items, got {len(items)}")
    return total_orders(items)


def enumerate_weak_orders(domain: Sequence[str], cap: int = MAX_WEAK_ORDER_DOMAIN) -> Iterator[WeakOrder]:
    items = sorted(set(domain))
    if len(items) > cap:
        raise UnsupportedSizeError(f"weak-order enumeration supports at most {cap} items, got {len(items)}")

    def tiers(pool: Tuple[str, ...]) -> Iterator[List[List[str]]]:
        if not pool:
            yield []
            return
        for size in range(1, len(pool) + 1):
            for top in itertools.combinations(pool, size):
                rest = tuple(x for x in pool if x not in top)
                for tail in tiers(rest):
                    yield [list(top)] + tail

    for found in tiers(tuple(items)):
        yield WeakOrder.from_lists(found)


def enumerate_choice_functions(domain: Sequence[str]) -> Iterator[ChoiceDataset]:
    """All single-valued choice functions on every menu of a three-item domain."""
    items = sorted(set(domain))
    if len(items) != EXHAUSTIVE_DOMAIN:
        raise InputError(f"choice-function enumeration needs exactly {EXHAUSTIVE_DOMAIN} items, got {len(items)}")
    menus = all_menus(items)
    for picks in itertools.product(*[sorted(m) for m in menus]):
        yield ChoiceDataset(frozenset(items), {m: frozenset([x]) for m, x in zip(menus, picks)})


# ---------------------------------------------------------------------------
# Representability
# ---------------------------------------------------------------------------


def reproduces(model: JustifiabilityModel, data: ChoiceDataset) -> bool:
    return all(choose(model, menu) == data.observations[menu] for menu in data.menus)


def maximal_model(
    data: ChoiceDataset, pref: WeakOrder, dominance: Optional[DominanceRelation] = None
) -> Optional[JustifiabilityModel]:
    """The largest justification set consistent with the exclusions under
    ``pref``, if it reproduces the data."""
    constraints = axioms.exclusion_constraints(data, pref)
    orders = [o for o in total_orders(data.domain) if consistent(o, constraints, dominance)]
    if not orders:
        return None
    model = JustifiabilityModel(pref, tuple(orders))
    return model if reproduces(model, data) else None


def candidate_preferences(data: ChoiceDataset) -> List[WeakOrder]:
    if len(data.domain) > MAX_CANDIDATE_DOMAIN:
        raise UnsupportedSizeError(
            f"searching true preferences supports at most {MAX_CANDIDATE_DOMAIN} items, got {len(data.domain)}"
        )
    if data.is_choice_function:
        return [o.as_weak_order() for o in total_orders(data.domain)]
    return list(enumerate_weak_orders(sorted(data.domain)))


def exhaustive_representable(data: ChoiceDataset, prefs: Sequence[WeakOrder]) -> bool:
    """Search every nonempty justification set; three-item domains only."""
    if len(data.domain) != EXHAUSTIVE_DOMAIN:
        raise UnsupportedSizeError("exhaustive justification search runs on three-item domains only")
    orders = list(total_orders(data.domain))
    for pref in prefs:
        for size in range(1, len(orders) + 1):
            for subset in itertools.combinations(orders, size):
                if reproduces(JustifiabilityModel(pref, subset), data):
                    return True
    return False


@dataclass(frozen=True)
class Representability:
    representable: bool
    model: Optional[JustifiabilityModel] = None
    exhaustive: Optional[bool] = None

    @property
    def agrees(self) -> bool:
        return self.exhaustive is None or self.exhaustive == self.representable

    def to_dict(self) -> JSON:
        return {
            "representable": self.representable,
            "model": self.model.to_dict() if self.model is not None else None,
            "exhaustive": self.exhaustive,
        }


def brute_force_representable(
    data: ChoiceDataset,
    pref: Optional[WeakOrder] = None,
    enumeration_limit: int = revealed.DEFAULT_ENUMERATION_LIMIT,
) -> Representability:
    if pref is None:
        prefs = candidate_preferences(data)
    else:
        if len(data.domain) > enumeration_limit:
            raise UnsupportedSizeError(f"domain of {len(data.domain)} items exceeds enumeration limit {enumeration_limit}")
        prefs = [pref]
    model = None
    for candidate in prefs:
        model = maximal_model(data, candidate)
        if model is not None:
            break
    exhaustive = exhaustive_representable(data, prefs) if len(data.domain) == EXHAUSTIVE_DOMAIN else None
    return Representability(model is not None, model, exhaustive)


# ---------------------------------------------------------------------------
# Random generators
# ---------------------------------------------------------------------------


def random_order(rng: np.random.Generator, items: Sequence[str]) -> TotalOrder:
    return TotalOrder(tuple(items[i] for i in rng.permutation(len(items))))


def random_model(seed: int, domain_size: int, justification_count: int) -> JustifiabilityModel:
    if domain_size > MAX_ORDER_DOMAIN:
        raise UnsupportedSizeError(f"random models support at most {MAX_ORDER_DOMAIN} items")
    rng = np.random.default_rng(seed)
    items = domain_items(domain_size)
    pref = random_order(rng, items).as_weak_order()
    orders = list(total_orders(items))
    count = max(1, min(justification_count, len(orders)))
    picks = rng.choice(len(orders), size=count, replace=False)
    return JustifiabilityModel(pref, tuple(orders[i] for i in sorted(picks)))


def random_choice_function(seed: int, domain_size: int) -> ChoiceDataset:
    rng = np.random.default_rng(seed)
    items = domain_items(domain_size)
    observations = {}
    for menu in all_menus(items):
        options = sorted(menu)
        observations[menu] = frozenset([options[int(rng.integers(len(options)))]])
    return ChoiceDataset(frozenset(items), observations)


def random_nested_models(seed: int, size: int) -> Tuple[JustifiabilityModel, JustifiabilityModel]:
    """A low-pressure model and a high-pressure one with a subset of its justifications."""
    rng = np.random.default_rng(seed)
    items = domain_items(size)
    pref = random_order(rng, items).as_weak_order()
    orders = list(total_orders(items))
    low_count = int(rng.integers(1, len(orders) + 1))
    low = [orders[i] for i in sorted(rng.choice(len(orders), size=low_count, replace=False))]
    high_count = int(rng.integers(1, low_count + 1))
    high = [low[i] for i in sorted(rng.choice(low_count, size=high_count, replace=False))]
    return JustifiabilityModel(pref, tuple(low)), JustifiabilityModel(pref, tuple(high))


def random_eu_model(seed: int, prize_count: int, vertex_count: int, max_draws: int = 10000) -> EUModel:
    """Random utilities on prizes z0..z(n-1) with the last prize dominating the first."""
    rng = np.random.default_rng(seed)
    prizes = tuple(f"z{i}" for i in range(prize_count))
    space = PrizeSpace(prizes, DominanceRelation.from_pairs([[prizes[-1], prizes[0]]]))

    def draw(mode: str) -> np.ndarray:
        for _ in range(max_draws):
            values = rng.normal(size=prize_count)
            if np.ptp(values) > 1e-6 and is_d_monotone(values, space.dominance, mode, prizes):
                return values
        raise InputError(f"no {mode}ly monotone utility found in {max_draws} draws")

    utility = draw("strict")
    vertices = tuple(draw("weak") for _ in range(max(1, vertex_count)))
    return EUModel(space, utility, vertices)


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------


@dataclass
class SweepReport:
    name: str
    instances_checked: int = 0
    agreements: int = 0
    counterexamples: List[JSON] = field(default_factory=list)
    seed: Optional[int] = None

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def record(self, agreed: bool, dataset: ChoiceDataset, expected: Any, got: Any) -> None:
        self.instances_checked += 1
        if agreed:
            self.agreements += 1
        else:
            self.counterexamples.append({"dataset": dataset.to_dict(), "expected": expected, "got": got})

    def to_dict(self) -> JSON:
        return {
            "sweep": self.name,
            "seed": self.seed,
            "instances_checked": self.instances_checked,
            "agreements": self.agreements,
            "counterexamples": self.counterexamples,
        }


def sweep_theorem1() -> SweepReport:
    """Optimization and IUA hold exactly when some justification set works, for
    every choice function and strict true preference on three items."""
    report = SweepReport("theorem1")
    items = domain_items(EXHAUSTIVE_DOMAIN)
    for data in enumerate_choice_functions(items):
        for order in total_orders(items):
            pref = order.as_weak_order()
            with_pref = data.with_preference(pref)
            passes = not axioms.check_optimization(with_pref) and not axioms.check_iua(with_pref)
            found = brute_force_representable(data, pref)
            agreed = found.agrees and passes == found.representable
            report.record(agreed, with_pref, passes, {"representable": found.representable, "exhaustive": found.exhaustive})
    return report


def sweep_theorem4() -> SweepReport:
    """IEA holds exactly when some true preference and justification set work."""
    report = SweepReport("theorem4")
    for data in enumerate_choice_functions(domain_items(EXHAUSTIVE_DOMAIN)):
        passes = not revealed.check_iea(data)
        found = brute_force_representable(data)
        agreed = found.agrees and passes == found.representable
        report.record(agreed, data, passes, {"representable": found.representable, "exhaustive": found.exhaustive})
    return report


def second_best_holds(data: ChoiceDataset, pref: TotalOrder) -> bool:
    """On every almost-WARP menu the choice is the second-best item."""
    for menu in revealed.detect_almost_warp(data):
        ranking = pref.restricted(menu).ranking
        if data.single(menu) != ranking[1]:
            return False
    return True


def sweep_random(domain_size: int = 4, count: int = 1000, seed: int = 0) -> SweepReport:
    """Fit success against maximal-set search on random choice functions; fitted
    true preferences must extend P and rank almost-WARP choices second."""
    report = SweepReport(f"random-n{domain_size}", seed=seed)
    for index in range(count):
        data = random_choice_function(seed * 1_000_003 + index, domain_size)
        result = revealed.fit(data)
        found = brute_force_representable(data)
        agreed = result.ok == found.representable
        if result.ok:
            pref = result.model.true_preference.as_total_order()
            relation, _ = revealed.revealed_P(data)
            agreed = agreed and is_extension(pref, relation) and second_best_holds(data, pref)
        report.record(agreed, data, found.representable, result.status)
    logger.debug("random sweep: %d/%d agreements", report.agreements, report.instances_checked)
    return report


def _universally_excluded(models: Sequence[JustifiabilityModel], menu: frozenset, item: str) -> bool:
    constraint = MenuItemConstraint(menu, item, "revealed-exclusion")
    return all(constraint.satisfied_by(o) for m in models for o in m.justifications)


def sweep_revealed_exclusion(domain_size: int = 3, count: int = 200, seed: int = 0) -> SweepReport:
    """A menu B excludes a in every representation exactly when no order
    consistent with the revealed exclusions ranks a above B.

    Three-item domains are swept exhaustively; four-item ones on ``count``
    seeded random choice functions.
    """
    report = SweepReport(f"revealed-exclusion-n{domain_size}", seed=None if domain_size == 3 else seed)
    if domain_size == EXHAUSTIVE_DOMAIN:
        corpus: Sequence[ChoiceDataset] = list(enumerate_choice_functions(domain_items(EXHAUSTIVE_DOMAIN)))
    else:
        corpus = [random_choice_function(seed * 1_000_003 + i, domain_size) for i in range(count)]
    for data in corpus:
        if revealed.check_iea(data):
            continue
        constraints = revealed.revealed_exclusions(data)
        models = [m for m in (maximal_model(data, p) for p in candidate_preferences(data)) if m is not None]
        mismatches = []
        for menu in all_menus(data.domain, min_size=1, max_size=len(data.domain) - 1):
            for item in sorted(data.domain - menu):
                universal = _universally_excluded(models, menu, item)
                blocked = revealed.witness_justification(constraints, item, menu | {item}, None, data.domain) is None
                if universal != blocked:
                    mismatches.append({"menu": sorted(menu), "item": item, "universal": universal, "blocked": blocked})
        report.record(not mismatches, data, "agreement", mismatches)
    return report


def sweep_round_trip(count: int = 100, seed: int = 0, sizes: Sequence[int] = (3, 4, 5, 6),
                     maximality_cap: int = 5) -> SweepReport:
    """Data generated by random models pass the axioms and fit back exactly."""
    report = SweepReport("round-trip", seed=seed)
    for index in range(count):
        rng = np.random.default_rng([seed, index])
        size = int(sizes[index % len(sizes)])
        model = random_model(int(rng.integers(2**31)), size, int(rng.integers(1, 7)))
        data = generate_dataset(model, all_menus(model.domain))
        problems = []
        if axioms.check_optimization(data) or axioms.check_iua(data):
            problems.append("optimization/iua")
        if revealed.check_iea(data):
            problems.append("iea")
        result = revealed.fit(data)
        if not result.ok:
            problems.append(f"fit {result.status}")
        elif size <= maximality_cap and result.model.justifications is not None:
            if not set(model.justifications) <= set(result.model.justifications):
                problems.append("canonical set misses a generating justification")
        report.record(not problems, data, "fit", problems)
    return report


def sweep_two_setting(count: int = 50, seed: int = 0, sizes: Sequence[int] = (3, 4, 5)) -> SweepReport:
    """Nested model pairs fit back with nested justification sets."""
    report = SweepReport("two-setting", seed=seed)
    for index in range(count):
        size = int(sizes[index % len(sizes)])
        low_model, high_model = random_nested_models(seed * 1_000_003 + index, size)
        menus = all_menus(low_model.domain)
        paired = twosetting.PairedDataset(
            generate_dataset(low_model, menus).with_preference(None),
            generate_dataset(high_model, menus).with_preference(None),
        )
        result = twosetting.fit_two_setting(paired)
        report.record(result.ok and bool(result.nested), paired.low, "nested fit", result.to_dict()["status"])
    return report


def spot_check_subsets(count: int = 10000, seed: int = 0, domain_size: int = 4) -> SweepReport:
    """Random justification sets pass IUA and are reproduced by the maximal set."""
    report = SweepReport(f"subsets-n{domain_size}", seed=seed)
    rng = np.random.default_rng(seed)
    items = domain_items(domain_size)
    orders = list(total_orders(items))
    menus = all_menus(items)
    for _ in range(count):
        pref = random_order(rng, items).as_weak_order()
        size = int(rng.integers(1, len(orders) + 1))
        chosen = tuple(orders[i] for i in sorted(rng.choice(len(orders), size=size, replace=False)))
        data = generate_dataset(JustifiabilityModel(pref, chosen), menus)
        passes = not axioms.check_optimization(data) and not axioms.check_iua(data)
        rebuilt = maximal_model(data, pref)
        report.record(passes and rebuilt is not None, data, "representable", {"axioms": passes, "maximal": rebuilt is not None})
    return report
