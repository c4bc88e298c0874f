#!/usr/bin/env python3
"""
Unknown-true-preference analysis of choice functions.

Scans the data for cycles, chains and almost-WARP menus, derives revealed
exclusions and the revealed preference P, checks IEA, and builds the canonical
representation: the chain-then-pairwise true preference together with every
total order consistent with revealed exclusion.

Justification sets are held either explicitly (enumerated orders, small
domains) or implicitly as a constraint list evaluated with
witness_justification.
"""

from __future__ import annotations

import itertools
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

from justify import axioms
from justify.axioms import Coverage, Violation, as_list, sort_violations
from justify.core import (
    ChoiceDataset,
    DominanceRelation,
    Menu,
    MenuItemConstraint,
    Pair,
    Relation,
    TotalOrder,
    WeakOrder,
    consistent,
    find_cycle,
    is_acyclic,
    linear_extension,
    menu_label,
    menu_sort_key,
    nonempty_subsets,
    sorted_constraints,
    total_orders,
    transitive_closure,
)
from justify.errors import FitError, InputError
from justify.forward import JustifiabilityModel

logger = logging.getLogger(__name__)

JSON = Dict[str, Any]

Triple = Tuple[str, str, str]

DEFAULT_ENUMERATION_LIMIT = 7


# ---------------------------------------------------------------------------
# Pattern scans
# ---------------------------------------------------------------------------


def pairwise_winner(data: ChoiceDataset, a: str, b: str) -> Optional[str]:
    return data.single((a, b))


def detect_cycles(data: ChoiceDataset) -> List[Triple]:
    """Ordered triples with c({x1,x2})=x1, c({x1,x2,x3})=x2, c({x1,x3})=x3."""
    data.require_choice_function()
    found: Set[Triple] = set()
    for menu in data.menus:
        if len(menu) != 3:
            continue
        x2 = data.single(menu)
        one, two = sorted(menu - {x2})
        for x1, x3 in ((one, two), (two, one)):
            if pairwise_winner(data, x1, x2) == x1 and pairwise_winner(data, x1, x3) == x3:
                found.add((x1, x2, x3))
    return sorted(found)


def is_cycle_menu(menu: Iterable[str], cycles: Iterable[Triple]) -> bool:
    items = frozenset(menu)
    return len(items) == 3 and any(frozenset(c) == items for c in cycles)


def is_chain(data: ChoiceDataset, sequence: Sequence[str]) -> bool:
    """Literal chain test: each interior item sits in a cycle with its neighbours,
    or both neighbouring triples are cycles."""
    if len(sequence) < 3 or len(set(sequence)) != len(sequence):
        return False
    cycles = set(detect_cycles(data))
    last = len(sequence) - 1
    for i in range(1, last):
        middle = (sequence[i - 1], sequence[i], sequence[i + 1]) in cycles
        both = (
            i >= 2
            and i + 2 <= last
            and (sequence[i - 2], sequence[i - 1], sequence[i]) in cycles
            and (sequence[i], sequence[i + 1], sequence[i + 2]) in cycles
        )
        if not (middle or both):
            return False
    return True


def chain_closure(data: ChoiceDataset, cycles: Optional[Sequence[Triple]] = None) -> Relation:
    if cycles is None:
        cycles = detect_cycles(data)
    pairs = set()
    for x1, x2, x3 in cycles:
        pairs.add((x1, x2))
        pairs.add((x2, x3))
    return transitive_closure(pairs)


def _pairwise_max(data: ChoiceDataset, menu: Menu) -> Optional[str]:
    """The item beating every other item of menu pairwise, if one exists."""
    for a in sorted(menu):
        if all(pairwise_winner(data, a, b) == a for b in menu if b != a):
            return a
    return None


def warp_on_subsets(data: ChoiceDataset, menu: Iterable[str], proper: bool = True) -> Optional[bool]:
    """WARP on all sub-menus of ``menu`` (excluding it when ``proper``).

    None when some needed sub-menu is unobserved. With every sub-menu observed,
    WARP holds exactly when pairwise choice is acyclic and each sub-menu's
    choice beats the rest of it pairwise.
    """
    items = frozenset(menu)
    top = len(items) - 1 if proper else len(items)
    for size in range(2, top + 1):
        for combo in itertools.combinations(sorted(items), size):
            if data.choice(combo) is None:
                return None
    pairs = []
    for a, b in itertools.combinations(sorted(items), 2):
        winner = pairwise_winner(data, a, b)
        pairs.append((winner, b if winner == a else a))
    if not is_acyclic(pairs):
        return False
    for size in range(3, top + 1):
        for combo in itertools.combinations(sorted(items), size):
            sub = frozenset(combo)
            if data.single(sub) != _pairwise_max(data, sub):
                return False
    return True


def detect_almost_warp(data: ChoiceDataset, coverage: Optional[Coverage] = None, cycles: Optional[Sequence[Triple]] = None) -> List[Menu]:
    data.require_choice_function()
    if cycles is None:
        cycles = detect_cycles(data)
    found: List[Menu] = []
    for menu in data.menus:
        if len(menu) < 3 or is_cycle_menu(menu, cycles):
            continue
        proper_ok = warp_on_subsets(data, menu, proper=True)
        if proper_ok is None:
            logger.debug("almost-WARP candidate %s skipped: sub-menus unobserved", menu_label(menu))
            if coverage is not None:
                coverage.vacuous += 1
                coverage.note(f"almost-WARP: {menu_label(menu)} skipped, sub-menus unobserved")
            continue
        if coverage is not None:
            coverage.checked += 1
        if proper_ok and data.single(menu) != _pairwise_max(data, menu):
            found.append(menu)
    return sorted(found, key=menu_sort_key)


def revealed_exclusions(
    data: ChoiceDataset,
    coverage: Optional[Coverage] = None,
    cycles: Optional[Sequence[Triple]] = None,
    almost_warp: Optional[Sequence[Menu]] = None,
) -> List[MenuItemConstraint]:
    data.require_choice_function()
    if cycles is None:
        cycles = detect_cycles(data)
    if almost_warp is None:
        almost_warp = detect_almost_warp(data, coverage, cycles)
    found: List[MenuItemConstraint] = []
    for menu in almost_warp:
        chosen = data.single(menu)
        for a in sorted(menu - {chosen}):
            if pairwise_winner(data, a, chosen) == a:
                found.append(MenuItemConstraint(menu - {a}, a, "revealed-exclusion"))
    for a, b in sorted(chain_closure(data, cycles)):
        if a != b and pairwise_winner(data, a, b) == b:
            found.append(MenuItemConstraint(frozenset([b]), a, "revealed-exclusion"))
    return sorted_constraints(found)


def revealed_P(data: ChoiceDataset) -> Tuple[Relation, bool]:
    """(c(A ∪ {a}), a) whenever adding a to some B ⊇ A changes the choice from B."""
    data.require_choice_function()
    by_item: Dict[str, List[Menu]] = defaultdict(list)
    for menu in data.menus:
        for item in menu:
            by_item[item].append(menu)
    pairs: Set[Pair] = set()
    for big in data.menus:
        for a in sorted(big):
            base = big - {a}
            if data.choice(base) is None or data.single(base) == data.single(big):
                continue
            for menu in by_item[a]:
                if not menu - {a} <= base:
                    continue
                chosen = data.single(menu)
                if chosen != a:
                    pairs.add((chosen, a))
    relation = frozenset(pairs)
    return relation, is_acyclic(relation)


def check_acyclicity(data: ChoiceDataset) -> List[Violation]:
    relation, acyclic = revealed_P(data)
    if acyclic:
        return []
    cycle = find_cycle(relation) or []
    return [
        Violation(
            "Acyclicity",
            {"cycle": cycle},
            "revealed preference is cyclic: " + " P ".join(cycle + cycle[:1]),
        )
    ]


def satisfies_warp(data: ChoiceDataset) -> bool:
    data.require_choice_function()
    for big in data.menus:
        chosen = data.single(big)
        for small in data.menus:
            if small < big and chosen in small and data.single(small) != chosen:
                return False
    return True


def warp_preference(data: ChoiceDataset) -> TotalOrder:
    """The order maximized by WARP data; every pair must be observed."""
    if not satisfies_warp(data):
        raise InputError("choice violates WARP")
    pairs = []
    missing = []
    for a, b in itertools.combinations(sorted(data.domain), 2):
        winner = pairwise_winner(data, a, b)
        if winner is None:
            missing.append(menu_label((a, b)))
            continue
        pairs.append((winner, b if winner == a else a))
    if missing:
        raise InputError("WARP preference needs every pair observed", missing)
    return linear_extension(data.domain, pairs)


def check_iea(data: ChoiceDataset, coverage: Optional[Coverage] = None, subset_cap: int = axioms.DEFAULT_SUBSET_CAP,
              exclusions: Optional[Sequence[MenuItemConstraint]] = None) -> List[Violation]:
    """IEA: removing items revealed excluded by subsets of B leaves c(B) unchanged."""
    data.require_choice_function()
    if exclusions is None:
        exclusions = revealed_exclusions(data, coverage)
    violations: List[Violation] = []
    for big in data.menus:
        excluded = frozenset(c.excluded for c in exclusions if c.excluded in big and c.menu <= big)
        if not excluded:
            continue
        chosen = data.single(big)
        if chosen in excluded:
            if coverage is not None:
                coverage.checked += 1
            violations.append(
                Violation(
                    "IEA",
                    {"B": as_list(big), "A": [chosen]},
                    f"{chosen} is chosen from {menu_label(big)} although a subset of it reveals {chosen} excluded",
                )
            )
        for removed in nonempty_subsets(excluded, subset_cap):
            if removed == big or chosen in removed:
                continue
            rest = data.choice(big - removed)
            if rest is None:
                if coverage is not None:
                    coverage.vacuous += 1
                continue
            if coverage is not None:
                coverage.checked += 1
            if data.single(big - removed) != chosen:
                violations.append(
                    Violation(
                        "IEA",
                        {"B": as_list(big), "A": as_list(removed)},
                        f"removing revealed-excluded {menu_label(removed)} from {menu_label(big)} changes the "
                        f"choice from {chosen} to {data.single(big - removed)}",
                    )
                )
    return sort_violations(violations)


# ---------------------------------------------------------------------------
# Canonical representation
# ---------------------------------------------------------------------------


def canonical_true_preference(data: ChoiceDataset) -> TotalOrder:
    """Chain closure first, then P, then pairwise choice on the pairs still unranked."""
    violations = check_iea(data)
    if violations:
        raise FitError("data violate IEA; no canonical true preference exists", violations)
    graph = nx.DiGraph()
    graph.add_nodes_from(sorted(data.domain))
    graph.add_edges_from((a, b) for a, b in chain_closure(data) if a != b)
    relation, _ = revealed_P(data)
    for a, b in sorted(relation):
        if not nx.has_path(graph, b, a):
            graph.add_edge(a, b)
    for a, b in itertools.combinations(sorted(data.domain), 2):
        if nx.has_path(graph, a, b) or nx.has_path(graph, b, a):
            continue
        winner = pairwise_winner(data, a, b)
        if winner is not None:
            graph.add_edge(winner, b if winner == a else a)
    return TotalOrder(tuple(nx.lexicographical_topological_sort(graph)))


def witness_justification(
    constraints: Iterable[MenuItemConstraint],
    target: str,
    menu: Iterable[str],
    dominance: Optional[DominanceRelation] = None,
    domain: Optional[Iterable[str]] = None,
) -> Optional[TotalOrder]:
    """A total order satisfying every constraint (and strictly D-monotone) that
    ranks ``target`` above the rest of ``menu``; None if there is none.

    Orders are built top-down. An item may be placed once one item of each of
    its constraint menus and all its dominators are placed, and menu items wait
    for the target. Placing an item never blocks another, so greedy placement
    finds an order whenever one exists.
    """
    items = frozenset(menu)
    if target not in items:
        raise InputError(f"target {target} is not in menu {menu_label(items)}")
    constraints = list(constraints)
    pool: Set[str] = set(domain) if domain is not None else set()
    pool.update(items)
    if domain is None:
        for c in constraints:
            pool.update(c.menu)
            pool.add(c.excluded)
        if dominance is not None:
            pool.update(dominance.items())

    needs: Dict[str, List[Menu]] = defaultdict(list)
    for c in constraints:
        if c.excluded in pool:
            needs[c.excluded].append(c.menu)
    dominators: Dict[str, FrozenSet[str]] = {}
    if dominance is not None:
        dominators = {x: dominance.dominators(x) & pool for x in pool}
    waiting = items - {target}

    placed: List[str] = []
    placed_set: Set[str] = set()

    def ready(x: str) -> bool:
        if x in waiting and target not in placed_set:
            return False
        if any(not (m & placed_set) for m in needs.get(x, ())):
            return False
        return dominators.get(x, frozenset()) <= placed_set

    remaining = set(pool)
    while remaining:
        if target in remaining and ready(target):
            pick = target
        else:
            pick = next((x for x in sorted(remaining) if x != target and ready(x)), None)
            if pick is None:
                return None
        placed.append(pick)
        placed_set.add(pick)
        remaining.discard(pick)
    return TotalOrder(tuple(placed))


def consistent_orders(
    domain: Iterable[str],
    constraints: Sequence[MenuItemConstraint],
    dominance: Optional[DominanceRelation] = None,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
) -> Optional[Tuple[TotalOrder, ...]]:
    """All consistent total orders, or None when the domain exceeds ``limit``."""
    items = sorted(domain)
    if len(items) > limit:
        return None
    return tuple(o for o in total_orders(items) if consistent(o, constraints, dominance))


@dataclass(frozen=True)
class ConstrainedModel:
    """A true preference plus the justifications consistent with ``constraints``."""

    true_preference: WeakOrder
    constraints: Tuple[MenuItemConstraint, ...] = ()
    dominance: Optional[DominanceRelation] = None
    justifications: Optional[Tuple[TotalOrder, ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "constraints", tuple(sorted_constraints(self.constraints)))

    @property
    def domain(self) -> FrozenSet[str]:
        return self.true_preference.domain

    @property
    def explicit(self) -> bool:
        return self.justifications is not None

    @property
    def justification_count(self) -> Optional[int]:
        return None if self.justifications is None else len(self.justifications)

    @property
    def is_empty(self) -> bool:
        if self.justifications is not None:
            return not self.justifications
        first = min(self.domain)
        return witness_justification(self.constraints, first, [first], self.dominance, self.domain) is None

    def justified_set(self, menu: Iterable[str]) -> FrozenSet[str]:
        items = frozenset(menu)
        if not items:
            raise InputError("menu is empty")
        if not items <= self.domain:
            raise InputError(f"menu {menu_label(items)} has items outside the model domain", sorted(items - self.domain))
        if self.justifications is not None:
            return frozenset(o.top(items) for o in self.justifications)
        return frozenset(
            x for x in items
            if witness_justification(self.constraints, x, items, self.dominance, self.domain) is not None
        )

    def choose(self, menu: Iterable[str]) -> FrozenSet[str]:
        return self.true_preference.maximal(self.justified_set(menu))

    def generate(self, menus: Iterable[Iterable[str]]) -> ChoiceDataset:
        observations = {frozenset(m): self.choose(m) for m in menus}
        return ChoiceDataset(self.domain, observations, self.true_preference, self.dominance)

    def as_model(self) -> JustifiabilityModel:
        if not self.justifications:
            raise InputError("justification set is implicit or empty; raise the enumeration limit")
        return JustifiabilityModel(self.true_preference, self.justifications)

    def to_dict(self) -> JSON:
        pref = self.true_preference
        payload: JSON = {
            "true_preference": pref.as_total_order().to_list() if pref.is_strict else pref.to_list(),
            "exclusions": [{"menu": c.to_dict()["menu"], "excluded": c.excluded} for c in self.constraints],
            "constraints": [c.to_dict() for c in self.constraints],
            "justification_count": self.justification_count,
        }
        if self.justifications is not None:
            payload["justifications"] = [o.to_list() for o in self.justifications]
        return payload


def canonical_model(data: ChoiceDataset, enumeration_limit: int = DEFAULT_ENUMERATION_LIMIT) -> ConstrainedModel:
    pref = canonical_true_preference(data)
    constraints = revealed_exclusions(data)
    orders = consistent_orders(data.domain, constraints, None, enumeration_limit)
    if orders is None:
        logger.info("domain of %d items exceeds enumeration limit %d; keeping constraints", len(data.domain), enumeration_limit)
    return ConstrainedModel(pref.as_weak_order(), tuple(constraints), None, orders)


# ---------------------------------------------------------------------------
# Fitting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RevealedRelations:
    cycles: Tuple[Triple, ...]
    chain_closure: Relation
    preference: Relation
    exclusions: Tuple[MenuItemConstraint, ...]
    almost_warp: Tuple[Menu, ...] = ()

    @property
    def preference_acyclic(self) -> bool:
        return is_acyclic(self.preference)

    def to_dict(self) -> JSON:
        return {
            "cycles": [list(c) for c in self.cycles],
            "chain_closure": [list(p) for p in sorted(self.chain_closure)],
            "revealed_preference": [list(p) for p in sorted(self.preference)],
            "revealed_preference_acyclic": self.preference_acyclic,
            "almost_warp": [as_list(m) for m in self.almost_warp],
            "exclusions": [c.to_dict() for c in self.exclusions],
        }


def compute_relations(data: ChoiceDataset, coverage: Optional[Coverage] = None) -> RevealedRelations:
    cycles = detect_cycles(data)
    almost = detect_almost_warp(data, coverage, cycles)
    relation, _ = revealed_P(data)
    return RevealedRelations(
        cycles=tuple(cycles),
        chain_closure=chain_closure(data, cycles),
        preference=relation,
        exclusions=tuple(revealed_exclusions(data, None, cycles, almost)),
        almost_warp=tuple(almost),
    )


@dataclass(frozen=True)
class FitResult:
    status: str
    model: Optional[ConstrainedModel] = None
    relations: Optional[RevealedRelations] = None
    violations: Tuple[Violation, ...] = ()
    coverage: Optional[Coverage] = field(default=None, compare=False)

    @property
    def ok(self) -> bool:
        return self.status == "fit"

    def to_dict(self) -> JSON:
        payload: JSON = {
            "status": self.status,
            "true_preference": None,
            "exclusions": [],
            "justification_count": None,
            "violations": [v.to_dict() for v in self.violations],
        }
        if self.model is not None:
            payload.update(self.model.to_dict())
        if self.relations is not None:
            payload["relations"] = self.relations.to_dict()
        if self.coverage is not None:
            payload["coverage"] = self.coverage.to_dict()
        return payload


def reproduction_violations(model: ConstrainedModel, data: ChoiceDataset) -> List[Violation]:
    violations = []
    for menu in data.menus:
        observed = data.observations[menu]
        predicted = model.choose(menu)
        if predicted != observed:
            violations.append(
                Violation(
                    "Reproduction",
                    {"A": as_list(menu), "observed": as_list(observed), "predicted": as_list(predicted)},
                    f"model chooses {menu_label(predicted)} from {menu_label(menu)}, data show {menu_label(observed)}",
                )
            )
    return sort_violations(violations)


def _empty_model_violation() -> Violation:
    return Violation("Representation", {}, "no total order satisfies every exclusion constraint")


def fit(data: ChoiceDataset, enumeration_limit: int = DEFAULT_ENUMERATION_LIMIT) -> FitResult:
    """Fit the canonical representation of a choice function, or reject with witnesses."""
    data.require_choice_function()
    coverage = Coverage()
    relations = compute_relations(data, coverage)
    violations = check_acyclicity(data) + check_iea(data, coverage, exclusions=relations.exclusions)
    if violations:
        return FitResult("reject", None, relations, tuple(sort_violations(violations)), coverage)
    model = canonical_model(data, enumeration_limit)
    if model.is_empty:
        return FitResult("reject", None, relations, (_empty_model_violation(),), coverage)
    mismatches = reproduction_violations(model, data)
    if mismatches:
        return FitResult("reject", model, relations, tuple(mismatches), coverage)
    return FitResult("fit", model, relations, (), coverage)


def fit_known_preference(
    data: ChoiceDataset,
    pref: Optional[WeakOrder] = None,
    dominance: Optional[DominanceRelation] = None,
    enumeration_limit: int = DEFAULT_ENUMERATION_LIMIT,
) -> FitResult:
    """Largest representation for a given true preference: every total order
    (strictly D-monotone when ``dominance`` is given) consistent with every
    observed exclusion."""
    pref = axioms.resolve_preference(data, pref)
    coverage = Coverage()
    violations = axioms.check_optimization(data, pref, coverage) + axioms.check_iua(data, pref, coverage)
    if dominance is not None:
        violations += axioms.check_isa(data, pref, dominance, coverage)
    if violations:
        return FitResult("reject", None, None, tuple(sort_violations(violations)), coverage)
    constraints = axioms.exclusion_constraints(data, pref)
    orders = consistent_orders(data.domain, constraints, dominance, enumeration_limit)
    model = ConstrainedModel(pref, tuple(constraints), dominance, orders)
    if model.is_empty:
        return FitResult("reject", None, None, (_empty_model_violation(),), coverage)
    mismatches = reproduction_violations(model, data)
    if mismatches:
        return FitResult("reject", model, None, tuple(mismatches), coverage)
    return FitResult("fit", model, None, (), coverage)
