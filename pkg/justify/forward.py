#!/usr/bin/env python3
"""
Forward evaluation of a justifiability model.

A model is a true preference plus an explicit, nonempty set of total orders
(justifications). An item is justified in a menu when some justification ranks
it first there; the model chooses the true-preference maximal justified items.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from justify.core import (
    ChoiceDataset,
    DominanceRelation,
    Menu,
    Order,
    TotalOrder,
    WeakOrder,
    menu_label,
)
from justify.errors import InputError

JSON = Dict[str, Any]

UTILITY_TOLERANCE = 1e-12


@dataclass(frozen=True)
class JustifiabilityModel:
    true_preference: WeakOrder
    justifications: Tuple[TotalOrder, ...] = ()

    def __post_init__(self) -> None:
        orders = tuple(sorted(set(self.justifications), key=lambda o: o.ranking))
        if not orders:
            raise InputError("a justifiability model needs at least one justification")
        domain = self.true_preference.domain
        stray = [str(o) for o in orders if o.domain != domain]
        if stray:
            raise InputError("justifications must rank exactly the true preference's domain", stray)
        object.__setattr__(self, "justifications", orders)

    @property
    def domain(self) -> FrozenSet[str]:
        return self.true_preference.domain

    def to_dict(self) -> JSON:
        return model_to_dict(self)


def _check_menu(model_domain: FrozenSet[str], menu: Iterable[str]) -> Menu:
    items = frozenset(menu)
    if not items:
        raise InputError("menu is empty")
    if not items <= model_domain:
        raise InputError(f"menu {menu_label(items)} has items outside the model domain", sorted(items - model_domain))
    return items


def justified_set(model: JustifiabilityModel, menu: Iterable[str]) -> FrozenSet[str]:
    items = _check_menu(model.domain, menu)
    return frozenset(order.top(items) for order in model.justifications)


def choose(model: JustifiabilityModel, menu: Iterable[str]) -> FrozenSet[str]:
    return model.true_preference.maximal(justified_set(model, menu))


def is_d_monotone(
    order: Union[Order, Mapping[str, float], Sequence[float]],
    dominance: Optional[DominanceRelation],
    mode: str = "strict",
    prizes: Optional[Sequence[str]] = None,
) -> bool:
    """Whether every dominance pair is respected (strictly or weakly).

    ``order`` is a TotalOrder/WeakOrder, a mapping item -> utility, or a utility
    vector indexed like ``prizes``.
    """
    if mode not in ("strict", "weak"):
        raise InputError(f"unknown monotonicity mode '{mode}'")
    if dominance is None or not dominance.pairs:
        return True
    if isinstance(order, (TotalOrder, WeakOrder)):
        check = order.prefers if mode == "strict" else order.weakly_prefers
        return all(check(a, b) for a, b in dominance.pairs)

    if isinstance(order, Mapping):
        values = {str(k): float(v) for k, v in order.items()}
    else:
        if prizes is None:
            raise InputError("a utility vector needs the prize list to be read")
        vector = [float(v) for v in order]
        if len(vector) != len(prizes):
            raise InputError("utility vector and prize list differ in length")
        values = dict(zip(prizes, vector))
    if mode == "strict":
        return all(values[a] > values[b] for a, b in dominance.pairs)
    return all(values[a] >= values[b] - UTILITY_TOLERANCE for a, b in dominance.pairs)


def generate_dataset(model: JustifiabilityModel, menus: Iterable[Iterable[str]]) -> ChoiceDataset:
    observations = {}
    for menu in menus:
        items = frozenset(menu)
        if items in observations:
            continue
        observations[items] = choose(model, items)
    return ChoiceDataset(model.domain, observations, model.true_preference)


def model_to_dict(model: JustifiabilityModel) -> JSON:
    return {
        "true_preference": model.true_preference.to_list(),
        "justifications": [o.to_list() for o in model.justifications],
    }


def model_from_dict(raw: Any) -> JustifiabilityModel:
    errors: List[str] = []
    if not isinstance(raw, dict):
        raise InputError("model must be a mapping/object")
    tiers = raw.get("true_preference")
    orders = raw.get("justifications")
    if not isinstance(tiers, list) or not tiers:
        errors.append("true_preference must be a nonempty list of tiers")
    if not isinstance(orders, list) or not orders:
        errors.append("justifications must be a nonempty list of rankings")
    if errors:
        raise InputError("invalid model", errors)
    pref = WeakOrder.from_lists(tiers)
    return JustifiabilityModel(pref, tuple(TotalOrder(tuple(o)) for o in orders))
