#!/usr/bin/env python3
"""
Axiom checkers for data with a known true preference: Optimization, IUA,
exclusion (plain and from below), the submaximal set S(B) and ISA.

Every checker works on partial data. An instance is tested only when the
menus it needs are observed; the rest are counted as vacuous in an optional
Coverage accumulator.
"""

from __future__ import annotations

import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from justify.core import (
    ChoiceDataset,
    DominanceRelation,
    Menu,
    MenuItemConstraint,
    WeakOrder,
    menu_key,
    menu_label,
    nonempty_subsets,
    sorted_constraints,
)
from justify.errors import InputError

logger = logging.getLogger(__name__)

JSON = Dict[str, Any]

DEFAULT_SUBSET_CAP = 12


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: JSON
    message: str

    def sort_key(self) -> Tuple[str, str]:
        return (self.axiom, json.dumps(self.witness, sort_keys=True))

    def to_dict(self) -> JSON:
        return {"axiom": self.axiom, "witness": self.witness, "message": self.message}


@dataclass
class Coverage:
    checked: int = 0
    vacuous: int = 0
    notes: List[str] = field(default_factory=list)

    def note(self, message: str) -> None:
        if message not in self.notes:
            self.notes.append(message)

    def to_dict(self) -> JSON:
        return {"checked": self.checked, "vacuous": self.vacuous, "notes": sorted(self.notes)}


def sort_violations(violations: Iterable[Violation]) -> List[Violation]:
    unique = {v.sort_key(): v for v in violations}
    return [unique[k] for k in sorted(unique)]


def as_list(menu: Iterable[str]) -> List[str]:
    return list(menu_key(menu))


def resolve_preference(data: ChoiceDataset, pref: Optional[WeakOrder]) -> WeakOrder:
    chosen = pref if pref is not None else data.true_preference
    if chosen is None:
        raise InputError("a true preference is required (dataset has none and none was given)")
    if chosen.domain != data.domain:
        raise InputError("true preference must rank exactly the dataset domain")
    return chosen


def _weakly_above_all(pref: WeakOrder, item: str, others: Iterable[str]) -> bool:
    return all(pref.weakly_prefers(item, x) for x in others)


def _menus_by_item(data: ChoiceDataset) -> Dict[str, List[Menu]]:
    index: Dict[str, List[Menu]] = defaultdict(list)
    for menu in data.menus:
        for item in menu:
            index[item].append(menu)
    return index


def excludes(data: ChoiceDataset, pref: Optional[WeakOrder], menu: Iterable[str], item: str) -> Optional[bool]:
    """Whether ``menu`` excludes ``item``; None when menu ∪ {item} is unobserved."""
    pref = resolve_preference(data, pref)
    base = frozenset(menu)
    if item in base:
        raise InputError(f"{item} must not belong to the excluding menu {menu_label(base)}")
    chosen = data.choice(base | {item})
    if chosen is None:
        return None
    return item not in chosen and _weakly_above_all(pref, item, chosen)


def excludes_from_below(data: ChoiceDataset, pref: Optional[WeakOrder], menu: Iterable[str], item: str) -> Optional[bool]:
    pref = resolve_preference(data, pref)
    base = frozenset(menu)
    if item in base:
        raise InputError(f"{item} must not belong to the excluding menu {menu_label(base)}")
    chosen = data.choice(base | {item})
    if chosen is None:
        return None
    return item not in chosen and _weakly_above_all(pref, item, base)


def underline_set(data: ChoiceDataset, pref: Optional[WeakOrder], menu: Iterable[str]) -> Optional[Menu]:
    """Chosen items plus the items every chosen item strictly beats; None if unobserved."""
    pref = resolve_preference(data, pref)
    items = frozenset(menu)
    chosen = data.choice(items)
    if chosen is None:
        return None
    worse = {a for a in items if all(pref.prefers(c, a) for c in chosen)}
    return frozenset(chosen) | frozenset(worse)


def check_optimization(
    data: ChoiceDataset, pref: Optional[WeakOrder] = None, coverage: Optional[Coverage] = None
) -> List[Violation]:
    pref = resolve_preference(data, pref)
    violations: List[Violation] = []
    for menu in data.menus:
        chosen = sorted(data.observations[menu])
        if coverage is not None:
            coverage.checked += 1
        for i, a in enumerate(chosen):
            bad = next((b for b in chosen[i + 1:] if not pref.indifferent(a, b)), None)
            if bad is None:
                continue
            violations.append(
                Violation(
                    "Optimization",
                    {"A": as_list(menu), "items": [a, bad]},
                    f"{a} and {bad} are both chosen from {menu_label(menu)} but are not indifferent",
                )
            )
            break
    return sort_violations(violations)


def _unjustifiable_items(data: ChoiceDataset, pref: WeakOrder, menu: Menu) -> List[str]:
    chosen = data.observations[menu]
    return sorted(a for a in menu if a not in chosen and _weakly_above_all(pref, a, chosen))


def check_iua(data: ChoiceDataset, pref: Optional[WeakOrder] = None, coverage: Optional[Coverage] = None) -> List[Violation]:
    """IUA: an item excluded in A stays irrelevant in every observed B ⊇ A."""
    pref = resolve_preference(data, pref)
    by_item = _menus_by_item(data)
    violations: List[Violation] = []
    for small in data.menus:
        for a in _unjustifiable_items(data, pref, small):
            for big in by_item[a]:
                if not small <= big:
                    continue
                chosen_big = data.observations[big]
                witness = {"A": as_list(small), "a": a, "B": as_list(big)}
                if a in chosen_big:
                    if coverage is not None:
                        coverage.checked += 1
                    violations.append(
                        Violation(
                            "IUA",
                            witness,
                            f"{a} is unjustifiable in {menu_label(small)} yet chosen from {menu_label(big)}",
                        )
                    )
                    continue
                chosen_rest = data.choice(big - {a})
                if chosen_rest is None:
                    if coverage is not None:
                        coverage.vacuous += 1
                        coverage.note(f"IUA: {menu_label(big - {a})} unobserved")
                    continue
                if coverage is not None:
                    coverage.checked += 1
                if chosen_rest != chosen_big:
                    violations.append(
                        Violation(
                            "IUA",
                            witness,
                            f"{a} is unjustifiable in {menu_label(small)}, but removing it from {menu_label(big)} "
                            f"changes the choice from {menu_label(chosen_big)} to {menu_label(chosen_rest)}",
                        )
                    )
    return sort_violations(violations)


def submaximal_set(
    data: ChoiceDataset,
    pref: Optional[WeakOrder],
    dominance: Optional[DominanceRelation],
    menu: Iterable[str],
    coverage: Optional[Coverage] = None,
) -> FrozenSet[str]:
    """Items of B dominated within B or excluded by an observed subset of B."""
    pref = resolve_preference(data, pref)
    items = frozenset(menu)
    found = set()
    if dominance is not None:
        found.update(b for a, b in dominance.pairs if a in items and b in items)

    observed_subsets = 0
    for sub in data.menus:
        if len(sub) < 2 or not sub <= items:
            continue
        observed_subsets += 1
        found.update(_unjustifiable_items(data, pref, sub))
    possible = 2 ** len(items) - len(items) - 1
    if coverage is not None and observed_subsets < possible:
        coverage.note(f"S{menu_label(items)}: {possible - observed_subsets} of {possible} sub-menus unobserved")
    return frozenset(found)


def check_isa(
    data: ChoiceDataset,
    pref: Optional[WeakOrder] = None,
    dominance: Optional[DominanceRelation] = None,
    coverage: Optional[Coverage] = None,
    subset_cap: int = DEFAULT_SUBSET_CAP,
) -> List[Violation]:
    """ISA: removing any part of S(B) leaves c(B) unchanged."""
    pref = resolve_preference(data, pref)
    if dominance is None:
        dominance = data.dominance
    violations: List[Violation] = []
    for big in data.menus:
        submax = submaximal_set(data, pref, dominance, big, coverage)
        if not submax:
            continue
        if coverage is not None and len(submax) > subset_cap:
            coverage.note(f"ISA: S{menu_label(big)} has {len(submax)} items; only singletons and pairs removed")
        chosen_big = data.observations[big]
        for removed in nonempty_subsets(submax, subset_cap):
            if removed == big:
                continue
            witness = {"B": as_list(big), "A": as_list(removed)}
            if chosen_big & removed:
                if coverage is not None:
                    coverage.checked += 1
                violations.append(
                    Violation(
                        "ISA",
                        witness,
                        f"{menu_label(chosen_big & removed)} is submaximal in {menu_label(big)} yet chosen",
                    )
                )
                continue
            chosen_rest = data.choice(big - removed)
            if chosen_rest is None:
                if coverage is not None:
                    coverage.vacuous += 1
                continue
            if coverage is not None:
                coverage.checked += 1
            if chosen_rest != chosen_big:
                violations.append(
                    Violation(
                        "ISA",
                        witness,
                        f"removing submaximal {menu_label(removed)} from {menu_label(big)} changes the choice "
                        f"from {menu_label(chosen_big)} to {menu_label(chosen_rest)}",
                    )
                )
    return sort_violations(violations)


def exclusion_constraints(data: ChoiceDataset, pref: Optional[WeakOrder] = None) -> List[MenuItemConstraint]:
    """Every observed exclusion (A, b) as a constraint on justifications."""
    pref = resolve_preference(data, pref)
    constraints = []
    for menu in data.menus:
        for b in _unjustifiable_items(data, pref, menu):
            constraints.append(MenuItemConstraint(menu - {b}, b, "exclusion"))
    return sorted_constraints(constraints)


def exclusion_from_below_constraints(data: ChoiceDataset, pref: Optional[WeakOrder] = None) -> List[MenuItemConstraint]:
    """For each observed exclusion of b from M, the constraint (underline(M), b)."""
    pref = resolve_preference(data, pref)
    constraints = []
    for menu in data.menus:
        under = underline_set(data, pref, menu)
        if under is None:
            continue
        for b in _unjustifiable_items(data, pref, menu):
            constraints.append(MenuItemConstraint(under, b, "exclusion-from-below"))
    return sorted_constraints(constraints)


AXIOM_CHECKS: Sequence[str] = ("opt", "iua", "isa")


def check_known_preference(
    data: ChoiceDataset,
    pref: Optional[WeakOrder] = None,
    dominance: Optional[DominanceRelation] = None,
    axioms: Sequence[str] = ("opt", "iua"),
) -> Dict[str, Tuple[List[Violation], Coverage]]:
    pref = resolve_preference(data, pref)
    results: Dict[str, Tuple[List[Violation], Coverage]] = {}
    for name in axioms:
        coverage = Coverage()
        if name == "opt":
            found = check_optimization(data, pref, coverage)
        elif name == "iua":
            found = check_iua(data, pref, coverage)
        elif name == "isa":
            found = check_isa(data, pref, dominance, coverage)
        else:
            raise InputError(f"unknown axiom '{name}'", [f"choose from {', '.join(AXIOM_CHECKS)}"])
        logger.debug("%s: %d violations, %d checked, %d vacuous", name, len(found), coverage.checked, coverage.vacuous)
        results[name] = (found, coverage)
    return results
