#!/usr/bin/env python3
"""
Two-setting analysis: the same decision maker observed under low and high
pressure. Items the low setting picks but the high setting drops are
"replaced"; IREA treats them like revealed-excluded items. A successful fit
shares one true preference and nests the high-pressure justifications inside
the low-pressure ones.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

from justify import axioms, revealed
from justify.axioms import Coverage, Violation, as_list, sort_violations
from justify.core import ChoiceDataset, Menu, MenuItemConstraint, WeakOrder, menu_label, menu_sort_key, nonempty_subsets
from justify.errors import InputError
from justify.revealed import ConstrainedModel, FitResult

logger = logging.getLogger(__name__)

JSON = Dict[str, Any]

Replacement = Tuple[Menu, str]


@dataclass(frozen=True)
class PairedDataset:
    low: ChoiceDataset
    high: ChoiceDataset

    def __post_init__(self) -> None:
        if self.low.domain != self.high.domain:
            raise InputError(
                "low and high settings must share one domain",
                [f"low only: {menu_label(self.low.domain - self.high.domain)}",
                 f"high only: {menu_label(self.high.domain - self.low.domain)}"],
            )
        self.low.require_choice_function()
        self.high.require_choice_function()

    @property
    def domain(self) -> FrozenSet[str]:
        return self.low.domain

    def common_menus(self) -> List[Menu]:
        return sorted(set(self.low.observations) & set(self.high.observations), key=menu_sort_key)

    def to_dict(self) -> JSON:
        return {"low": self.low.to_dict(), "high": self.high.to_dict()}


def replaced_items(paired: PairedDataset, coverage: Optional[Coverage] = None) -> List[Replacement]:
    """(A, a) with a = c_L(A) ≠ c_H(A), over menus observed in both settings."""
    if coverage is not None:
        one_sided = set(paired.low.observations) ^ set(paired.high.observations)
        for menu in sorted(one_sided, key=menu_sort_key):
            coverage.vacuous += 1
            coverage.note(f"replacement: {menu_label(menu)} observed in one setting only")
    found = []
    for menu in paired.common_menus():
        if coverage is not None:
            coverage.checked += 1
        low = paired.low.single(menu)
        if low != paired.high.single(menu):
            found.append((menu, low))
    return found


def _low_excluded_within(exclusions: Sequence[MenuItemConstraint], menu: Menu) -> FrozenSet[str]:
    return frozenset(c.excluded for c in exclusions if c.excluded in menu and c.menu <= menu)


def check_irea(
    paired: PairedDataset,
    coverage: Optional[Coverage] = None,
    subset_cap: int = axioms.DEFAULT_SUBSET_CAP,
) -> List[Violation]:
    """IREA: dropping items that are revealed excluded in L by, or replaced in,
    a subset of B leaves c_H(B) unchanged."""
    low_exclusions = revealed.revealed_exclusions(paired.low)
    replacements = replaced_items(paired, coverage)
    high = paired.high
    violations: List[Violation] = []
    for big in high.menus:
        irrelevant = set(_low_excluded_within(low_exclusions, big))
        irrelevant.update(z for menu, z in replacements if menu <= big)
        if not irrelevant:
            continue
        chosen = high.single(big)
        if chosen in irrelevant:
            if coverage is not None:
                coverage.checked += 1
            violations.append(
                Violation(
                    "IREA",
                    {"B": as_list(big), "A": [chosen]},
                    f"{chosen} is chosen under high pressure from {menu_label(big)} although it is "
                    "revealed excluded or replaced within it",
                )
            )
        for removed in nonempty_subsets(irrelevant, subset_cap):
            if removed == big or chosen in removed:
                continue
            rest = high.choice(big - removed)
            if rest is None:
                if coverage is not None:
                    coverage.vacuous += 1
                    coverage.note(f"IREA: {menu_label(big - removed)} unobserved under high pressure")
                continue
            if coverage is not None:
                coverage.checked += 1
            if high.single(big - removed) != chosen:
                violations.append(
                    Violation(
                        "IREA",
                        {"B": as_list(big), "A": as_list(removed)},
                        f"removing {menu_label(removed)} from {menu_label(big)} changes the high-pressure choice "
                        f"from {chosen} to {high.single(big - removed)}",
                    )
                )
    return sort_violations(violations)


def replacement_constraints(
    paired: PairedDataset,
    low_exclusions: Optional[Sequence[MenuItemConstraint]] = None,
) -> List[MenuItemConstraint]:
    """(A* \\ {z}, z) for each replacement (A, z), where A* drops the items of A
    revealed excluded in L by a subset of A."""
    if low_exclusions is None:
        low_exclusions = revealed.revealed_exclusions(paired.low)
    found = []
    for menu, z in replaced_items(paired):
        pruned = menu - _low_excluded_within(low_exclusions, menu) - {z}
        if not pruned:
            logger.warning("replacement of %s in %s leaves no justifying items; skipped", z, menu_label(menu))
            continue
        found.append(MenuItemConstraint(pruned, z, "replacement-derived"))
    return found


@dataclass(frozen=True)
class TwoSettingFit:
    status: str
    true_preference: Optional[WeakOrder] = None
    low: Optional[ConstrainedModel] = None
    high: Optional[ConstrainedModel] = None
    violations: Tuple[Violation, ...] = ()
    coverage: Optional[Coverage] = field(default=None, compare=False)

    @property
    def ok(self) -> bool:
        return self.status == "fit"

    @property
    def nested(self) -> Optional[bool]:
        if self.low is None or self.high is None:
            return None
        if not set(self.low.constraints) <= set(self.high.constraints):
            return False
        if self.low.justifications is not None and self.high.justifications is not None:
            return set(self.high.justifications) <= set(self.low.justifications)
        return True

    def to_dict(self) -> JSON:
        pref = self.true_preference
        payload: JSON = {
            "status": self.status,
            "true_preference": None,
            "nested": self.nested,
            "low": self.low.to_dict() if self.low is not None else None,
            "high": self.high.to_dict() if self.high is not None else None,
            "violations": [v.to_dict() for v in self.violations],
        }
        if pref is not None:
            payload["true_preference"] = pref.as_total_order().to_list() if pref.is_strict else pref.to_list()
        if self.coverage is not None:
            payload["coverage"] = self.coverage.to_dict()
        return payload


def fit_two_setting(
    paired: PairedDataset,
    enumeration_limit: int = revealed.DEFAULT_ENUMERATION_LIMIT,
    subset_cap: int = axioms.DEFAULT_SUBSET_CAP,
) -> TwoSettingFit:
    """Shared true preference with nested justification sets, or a violation witness."""
    coverage = Coverage()
    low_fit = revealed.fit(paired.low, enumeration_limit)
    if not low_fit.ok:
        return TwoSettingFit("reject", violations=low_fit.violations, coverage=coverage)
    irea = check_irea(paired, coverage, subset_cap)
    if irea:
        return TwoSettingFit("reject", violations=tuple(irea), coverage=coverage)

    low_model = low_fit.model
    pref = low_model.true_preference
    high_constraints = list(low_model.constraints)
    high_constraints += replacement_constraints(paired, low_model.constraints)
    high_constraints += axioms.exclusion_constraints(paired.high.with_preference(pref))
    orders = revealed.consistent_orders(paired.domain, high_constraints, None, enumeration_limit)
    high_model = ConstrainedModel(pref, tuple(high_constraints), None, orders)
    logger.debug("two-setting fit: %d low constraints, %d high constraints", len(low_model.constraints), len(high_model.constraints))

    if high_model.is_empty:
        witness = Violation("Representation", {}, "no total order satisfies every high-pressure constraint")
        return TwoSettingFit("reject", pref, low_model, None, (witness,), coverage)
    mismatches = revealed.reproduction_violations(high_model, paired.high)
    if mismatches:
        return TwoSettingFit("reject", pref, low_model, high_model, tuple(mismatches), coverage)
    return TwoSettingFit("fit", pref, low_model, high_model, (), coverage)


def fit_given_warp_low(
    paired: PairedDataset,
    enumeration_limit: int = revealed.DEFAULT_ENUMERATION_LIMIT,
) -> FitResult:
    """Fit c_H with the true preference read off a WARP-consistent c_L."""
    if not revealed.satisfies_warp(paired.low):
        raise InputError("low-pressure choice violates WARP")
    pref = revealed.warp_preference(paired.low).as_weak_order()
    return revealed.fit_known_preference(paired.high.with_preference(pref), pref, None, enumeration_limit)
