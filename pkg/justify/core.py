#!/usr/bin/env python3
"""
Domain vocabulary shared by every module: alternatives, menus, orders,
dominance, menu-item constraints and choice datasets, plus relation utilities
(transitive closure, acyclicity, order extension).

Menus are frozensets; anything user-facing renders them in sorted token order
so lookups and reports are by set identity and deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import (
    Any,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import networkx as nx

from justify.errors import InputError

JSON = Dict[str, Any]

AlternativeId = str
Menu = FrozenSet[str]
Pair = Tuple[str, str]
Relation = FrozenSet[Pair]

CONSTRAINT_KINDS = ("exclusion", "exclusion-from-below", "revealed-exclusion", "replacement-derived")


def make_menu(items: Iterable[str]) -> Menu:
    return frozenset(items)


def menu_key(menu: Iterable[str]) -> Tuple[str, ...]:
    return tuple(sorted(menu))


def menu_sort_key(menu: Iterable[str]) -> Tuple[int, Tuple[str, ...]]:
    key = menu_key(menu)
    return (len(key), key)


def menu_label(menu: Iterable[str]) -> str:
    return "{" + ",".join(menu_key(menu)) + "}"


def all_menus(domain: Iterable[str], min_size: int = 2, max_size: Optional[int] = None) -> List[Menu]:
    items = sorted(domain)
    top = len(items) if max_size is None else min(max_size, len(items))
    menus: List[Menu] = []
    for size in range(max(min_size, 1), top + 1):
        menus.extend(frozenset(combo) for combo in itertools.combinations(items, size))
    return menus


def nonempty_subsets(items: Iterable[str], cap: Optional[int] = None) -> Iterator[Menu]:
    """All nonempty subsets, or singletons and pairs once there are more than ``cap`` items."""
    pool = sorted(items)
    top = len(pool)
    if cap is not None and top > cap:
        top = min(top, 2)
    for size in range(1, top + 1):
        for combo in itertools.combinations(pool, size):
            yield frozenset(combo)


# ---------------------------------------------------------------------------
# Orders
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TotalOrder:
    ranking: Tuple[str, ...]
    _rank: Mapping[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        ranking = tuple(self.ranking)
        if len(set(ranking)) != len(ranking):
            raise InputError("total order repeats an alternative", [", ".join(ranking)])
        object.__setattr__(self, "ranking", ranking)
        object.__setattr__(self, "_rank", MappingProxyType({x: i for i, x in enumerate(ranking)}))

    @property
    def domain(self) -> FrozenSet[str]:
        return frozenset(self.ranking)

    def position(self, item: str) -> int:
        return self._rank[item]

    def prefers(self, a: str, b: str) -> bool:
        return self._rank[a] < self._rank[b]

    def weakly_prefers(self, a: str, b: str) -> bool:
        return self._rank[a] <= self._rank[b]

    def top(self, menu: Iterable[str]) -> str:
        return min(menu, key=self._rank.__getitem__)

    def maximal(self, items: Iterable[str]) -> FrozenSet[str]:
        pool = list(items)
        return frozenset([self.top(pool)]) if pool else frozenset()

    def as_weak_order(self) -> "WeakOrder":
        return WeakOrder(tuple(frozenset([x]) for x in self.ranking))

    def restricted(self, items: Iterable[str]) -> "TotalOrder":
        keep = set(items)
        return TotalOrder(tuple(x for x in self.ranking if x in keep))

    def to_list(self) -> List[str]:
        return list(self.ranking)

    def __str__(self) -> str:
        return "≻".join(self.ranking)


@dataclass(frozen=True)
class WeakOrder:
    """Tiers from best to worst; items in one tier are indifferent."""

    tiers: Tuple[FrozenSet[str], ...]
    _rank: Mapping[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        tiers = tuple(frozenset(t) for t in self.tiers)
        rank: Dict[str, int] = {}
        for index, tier in enumerate(tiers):
            if not tier:
                raise InputError("weak order has an empty tier")
            for item in tier:
                if item in rank:
                    raise InputError("weak order lists an alternative twice", [item])
                rank[item] = index
        object.__setattr__(self, "tiers", tiers)
        object.__setattr__(self, "_rank", MappingProxyType(rank))

    @classmethod
    def from_lists(cls, tiers: Sequence[Sequence[str]]) -> "WeakOrder":
        return cls(tuple(frozenset(t) for t in tiers))

    @classmethod
    def from_ranking(cls, ranking: Sequence[str]) -> "WeakOrder":
        return cls(tuple(frozenset([x]) for x in ranking))

    @property
    def domain(self) -> FrozenSet[str]:
        return frozenset(self._rank)

    @property
    def is_strict(self) -> bool:
        return all(len(t) == 1 for t in self.tiers)

    def position(self, item: str) -> int:
        return self._rank[item]

    def prefers(self, a: str, b: str) -> bool:
        return self._rank[a] < self._rank[b]

    def weakly_prefers(self, a: str, b: str) -> bool:
        return self._rank[a] <= self._rank[b]

    def indifferent(self, a: str, b: str) -> bool:
        return self._rank[a] == self._rank[b]

    def maximal(self, items: Iterable[str]) -> FrozenSet[str]:
        pool = list(items)
        if not pool:
            return frozenset()
        best = min(self._rank[x] for x in pool)
        return frozenset(x for x in pool if self._rank[x] == best)

    def as_total_order(self) -> TotalOrder:
        if not self.is_strict:
            raise InputError("weak order has ties; no total order is implied")
        return TotalOrder(tuple(next(iter(t)) for t in self.tiers))

    def to_list(self) -> List[List[str]]:
        return [sorted(t) for t in self.tiers]

    def __str__(self) -> str:
        return "≻".join("~".join(sorted(t)) for t in self.tiers)


Order = Union[TotalOrder, WeakOrder]


# ---------------------------------------------------------------------------
# Relations
# ---------------------------------------------------------------------------


def _graph(pairs: Iterable[Pair], nodes: Iterable[str] = ()) -> "nx.DiGraph":
    graph = nx.DiGraph()
    graph.add_nodes_from(nodes)
    graph.add_edges_from(pairs)
    return graph


def transitive_closure(pairs: Iterable[Pair]) -> Relation:
    """Smallest transitive superset. Members of a cycle get (x, x)."""
    graph = _graph(pairs)
    if graph.number_of_edges() == 0:
        return frozenset()
    closure = nx.transitive_closure(graph, reflexive=False)
    return frozenset(closure.edges())


def is_acyclic(pairs: Iterable[Pair]) -> bool:
    return nx.is_directed_acyclic_graph(_graph(pairs))


def find_cycle(pairs: Iterable[Pair]) -> Optional[List[str]]:
    graph = _graph(pairs)
    try:
        edges = nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        return None
    return [edge[0] for edge in edges]


def is_extension(order: Order, pairs: Iterable[Pair]) -> bool:
    return all(order.prefers(x, y) for x, y in pairs)


def linear_extension(domain: Iterable[str], pairs: Iterable[Pair]) -> TotalOrder:
    """Deterministic linear extension: ties between unranked items go to token order."""
    graph = _graph(pairs, sorted(domain))
    if not nx.is_directed_acyclic_graph(graph):
        cycle = find_cycle(graph.edges()) or []
        raise InputError("relation has a cycle; no linear extension exists", [" > ".join(cycle)])
    return TotalOrder(tuple(nx.lexicographical_topological_sort(graph)))


def total_orders(domain: Iterable[str]) -> Iterator[TotalOrder]:
    for ranking in itertools.permutations(sorted(domain)):
        yield TotalOrder(ranking)


# ---------------------------------------------------------------------------
# Dominance and constraints
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DominanceRelation:
    pairs: Relation = frozenset()

    def __post_init__(self) -> None:
        closed = transitive_closure(self.pairs)
        reflexive = sorted(a for a, b in closed if a == b)
        if reflexive:
            raise InputError("dominance relation is not asymmetric", [f"{x} dominates itself" for x in reflexive])
        object.__setattr__(self, "pairs", closed)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[str]]) -> "DominanceRelation":
        return cls(frozenset((str(a), str(b)) for a, b in pairs))

    def dominates(self, a: str, b: str) -> bool:
        return (a, b) in self.pairs

    def dominators(self, item: str) -> FrozenSet[str]:
        return frozenset(a for a, b in self.pairs if b == item)

    def items(self) -> FrozenSet[str]:
        return frozenset(x for pair in self.pairs for x in pair)

    def to_list(self) -> List[List[str]]:
        return [list(pair) for pair in sorted(self.pairs)]

    def __bool__(self) -> bool:
        return bool(self.pairs)


@dataclass(frozen=True)
class MenuItemConstraint:
    """(menu, excluded): every justification ranks some item of ``menu`` above ``excluded``."""

    menu: Menu
    excluded: str
    kind: str = "exclusion"

    def __post_init__(self) -> None:
        object.__setattr__(self, "menu", frozenset(self.menu))
        if self.excluded in self.menu:
            raise InputError("constraint lists its excluded item inside its menu", [f"{self.excluded} in {menu_label(self.menu)}"])
        if self.kind not in CONSTRAINT_KINDS:
            raise InputError(f"unknown constraint kind '{self.kind}'")

    def satisfied_by(self, order: Order) -> bool:
        return any(order.prefers(b, self.excluded) for b in self.menu)

    def sort_key(self) -> Tuple[str, Tuple[int, Tuple[str, ...]], str]:
        return (self.excluded, menu_sort_key(self.menu), self.kind)

    def to_dict(self) -> JSON:
        return {"menu": list(menu_key(self.menu)), "excluded": self.excluded, "kind": self.kind}


def consistent(order: TotalOrder, constraints: Iterable[MenuItemConstraint], dominance: Optional[DominanceRelation] = None) -> bool:
    if dominance is not None and not all(order.prefers(a, b) for a, b in dominance.pairs):
        return False
    return all(c.satisfied_by(order) for c in constraints)


def sorted_constraints(constraints: Iterable[MenuItemConstraint]) -> List[MenuItemConstraint]:
    return sorted(set(constraints), key=MenuItemConstraint.sort_key)


# ---------------------------------------------------------------------------
# Choice data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChoiceDataset:
    """The observable choice correspondence on a finite set of menus.

    Singleton menus are implicitly observed: c({x}) = {x}.
    """

    domain: FrozenSet[str]
    observations: Mapping[Menu, FrozenSet[str]]
    true_preference: Optional[WeakOrder] = None
    dominance: Optional[DominanceRelation] = None

    def __post_init__(self) -> None:
        domain = frozenset(self.domain)
        observations = {frozenset(m): frozenset(c) for m, c in dict(self.observations).items()}
        defects: List[str] = []
        for menu, chosen in sorted(observations.items(), key=lambda kv: menu_sort_key(kv[0])):
            label = menu_label(menu)
            if not menu:
                defects.append("empty menu")
            if not menu <= domain:
                defects.append(f"menu {label}: items outside the domain ({', '.join(sorted(menu - domain))})")
            if not chosen:
                defects.append(f"menu {label}: empty choice")
            elif not chosen <= menu:
                defects.append(f"menu {label}: choice outside menu")
        if self.true_preference is not None and self.true_preference.domain != domain:
            defects.append("true_preference tiers do not partition the domain")
        if self.dominance is not None and not self.dominance.items() <= domain:
            defects.append("dominance mentions items outside the domain")
        if defects:
            raise InputError("invalid choice dataset", defects)
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "observations", MappingProxyType(observations))

    @property
    def menus(self) -> List[Menu]:
        return sorted(self.observations, key=menu_sort_key)

    def observed(self, menu: Iterable[str]) -> bool:
        key = frozenset(menu)
        return key in self.observations or len(key) == 1

    def choice(self, menu: Iterable[str]) -> Optional[FrozenSet[str]]:
        key = frozenset(menu)
        found = self.observations.get(key)
        if found is None and len(key) == 1:
            return key
        return found

    def single(self, menu: Iterable[str]) -> Optional[str]:
        """The chosen item of a choice-function observation, or None if unobserved."""
        chosen = self.choice(menu)
        if chosen is None:
            return None
        if len(chosen) != 1:
            raise InputError("expected a choice function", [f"menu {menu_label(menu)} chooses {menu_label(chosen)}"])
        return next(iter(chosen))

    @property
    def is_choice_function(self) -> bool:
        return all(len(c) == 1 for c in self.observations.values())

    def require_choice_function(self) -> None:
        bad = [f"menu {menu_label(m)} chooses {menu_label(c)}" for m, c in self.observations.items() if len(c) != 1]
        if bad:
            raise InputError("this analysis needs a choice function (singleton choices)", sorted(bad))

    def restrict(self, menus: Iterable[Iterable[str]]) -> "ChoiceDataset":
        keep = {frozenset(m) for m in menus}
        return ChoiceDataset(
            self.domain,
            {m: c for m, c in self.observations.items() if m in keep},
            self.true_preference,
            self.dominance,
        )

    def with_preference(self, pref: Optional[WeakOrder]) -> "ChoiceDataset":
        return ChoiceDataset(self.domain, self.observations, pref, self.dominance)

    def to_dict(self) -> JSON:
        payload: JSON = {
            "domain": sorted(self.domain),
            "observations": [
                {"menu": list(menu_key(m)), "choice": list(menu_key(self.observations[m]))} for m in self.menus
            ],
        }
        if self.true_preference is not None:
            payload["true_preference"] = self.true_preference.to_list()
        if self.dominance is not None:
            payload["dominance"] = self.dominance.to_list()
        return payload
