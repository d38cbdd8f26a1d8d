#!/usr/bin/env python3
"""
Point structures and the transition sets placed on them.

A structure supplies the order on its points, the set of histories through
each point and the elementary possibilities there. Transition sets pick one
outcome (a possibility) per occurrence of a point; with one occurrence per
point they are product functions.
"""

import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from config.settings import SAMPLE_LIMIT
from core.descriptors import IndexSet, PointSequence
from core.errors import CatalogLookupError, DomainError, require
from core.families import BitRule, HistoryFamily, Predicate
from core.geometry import Point4
from core.histories import elementary_possibilities
from core.mbs_model import EventClass, MbsModel, event_class, leq_S, same_event

logger = logging.getLogger(__name__)


class PointStructure(ABC):
    """Points with an order, the histories through each point and the possibilities there."""

    name = ""
    family: HistoryFamily

    @abstractmethod
    def points(self) -> List[str]:
        """Point ids in canonical order."""

    @abstractmethod
    def leq(self, p: str, q: str) -> bool:
        """Order of the structure."""

    @abstractmethod
    def history_set(self, p: str) -> Predicate:
        """Histories that contain p."""

    @abstractmethod
    def possibilities(self, p: str) -> List[Predicate]:
        """Elementary possibilities at p; they partition history_set(p)."""

    def location(self, p: str) -> Optional[Point4]:
        return None

    def lt(self, p: str, q: str) -> bool:
        return p != q and self.leq(p, q)

    def comparable(self, p: str, q: str) -> bool:
        return self.leq(p, q) or self.leq(q, p)

    def cohistorical(self, points: Iterable[str]) -> bool:
        """Some history contains every given point."""
        family = self.family
        return not family.is_empty(family.meet_all(self.history_set(p) for p in points))

    def slr(self, p: str, q: str) -> bool:
        """Incomparable points that share a history."""
        return not self.comparable(p, q) and self.cohistorical((p, q))

    def cell_of(self, p: str, label: Any) -> Optional[Predicate]:
        for cell in self.possibilities(p):
            if self.family.holds(label, cell):
                return cell
        return None

    def require_point(self, p: str) -> str:
        require(p in self.points(), f"Unknown point {p!r} in structure '{self.name}'")
        return p

    def same_predicate(self, a: Predicate, b: Predicate) -> bool:
        return self.family.is_subset(a, b) and self.family.is_subset(b, a)

    def describe_point(self, p: str) -> str:
        location = self.location(p)
        return p if location is None else f"{p} at {location}"


class AbstractStructure(PointStructure):
    """
    A finite structure given by covering relations and explicit history sets.

    Args:
        name: Structure name
        points: Point ids
        below: Pairs (p, q) with p < q; the order is their transitive closure
        family: Histories of the structure
        history_sets: Histories through each point (default: all of them)
        cells: Elementary possibilities per point (default: one cell)
        locations: Optional positions, for reports only
    """

    def __init__(self, name: str, points: Sequence[str], below: Iterable[Tuple[str, str]],
                 family: HistoryFamily, history_sets: Optional[Mapping[str, Predicate]] = None,
                 cells: Optional[Mapping[str, Sequence[Predicate]]] = None,
                 locations: Optional[Mapping[str, Point4]] = None):
        self.name = name
        self.family = family
        self._points = list(points)
        require(len(set(self._points)) == len(self._points), f"Duplicate points in '{name}'")
        graph = nx.DiGraph()
        graph.add_nodes_from(self._points)
        for p, q in below:
            require(p in graph and q in graph, f"Order pair ({p}, {q}) names an unknown point")
            graph.add_edge(p, q)
        require(nx.is_directed_acyclic_graph(graph), f"Order of '{name}' has a cycle")
        self._closure = nx.transitive_closure_dag(graph)
        history_sets = dict(history_sets or {})
        self._history = {p: history_sets.get(p, family.top()) for p in self._points}
        cells = dict(cells or {})
        self._cells = {p: list(cells.get(p, [self._history[p]])) for p in self._points}
        self._locations = dict(locations or {})

    def points(self) -> List[str]:
        return list(self._points)

    def leq(self, p, q) -> bool:
        return p == q or self._closure.has_edge(p, q)

    def history_set(self, p) -> Predicate:
        return self._history[p]

    def possibilities(self, p) -> List[Predicate]:
        return list(self._cells[p])

    def location(self, p) -> Optional[Point4]:
        return self._locations.get(p)


class MbsStructure(PointStructure):
    """Named event classes of a model, ordered by <=_S."""

    def __init__(self, model: MbsModel, events: Mapping[str, EventClass]):
        self.model = model
        self.name = model.name
        self.family = model.family
        self.events = dict(events)
        self._cells: Dict[str, List[Predicate]] = {}

    @classmethod
    def from_locations(cls, model: MbsModel,
                       items: Sequence[Tuple[Point4, Any]]) -> "MbsStructure":
        """One point per distinct event class [x_sigma]; ids are "t,x1,x2,x3@sigma"."""
        events: Dict[str, EventClass] = {}
        for x, sigma in items:
            e = event_class(x, sigma, model)
            if any(same_event(e, other, model) for other in events.values()):
                continue
            events[f"{x.to_text()}@{model.family.format_label(e.representative)}"] = e
        return cls(model, events)

    def points(self) -> List[str]:
        return list(self.events)

    def event(self, p: str) -> EventClass:
        return self.events[self.require_point(p)]

    def leq(self, p, q) -> bool:
        return leq_S(self.event(p), self.event(q), self.model)

    def history_set(self, p) -> Predicate:
        return self.event(p).scenario_class

    def possibilities(self, p) -> List[Predicate]:
        if p not in self._cells:
            self._cells[p] = [c.members for c in elementary_possibilities(self.event(p), self.model)]
        return list(self._cells[p])

    def location(self, p) -> Optional[Point4]:
        return self.event(p).location


class TransitionSet:
    """
    Outcomes attached to points of a structure.

    Transitions are (point, outcome) pairs; a point may occur more than once.
    The outcome at a point is the meet of its transitions' outcomes.
    """

    def __init__(self, structure: PointStructure, transitions: Sequence[Tuple[str, Predicate]],
                 name: str = ""):
        for p, _ in transitions:
            structure.require_point(p)
        self.structure = structure
        self.transitions = list(transitions)
        self.name = name or structure.name

    @classmethod
    def from_choice(cls, structure: PointStructure, choice: Mapping[str, Any],
                    name: str = "") -> "TransitionSet":
        """
        Product function picking, at each point, the possibility that contains a label.

        Raises:
            DomainError: If a label does not pass through its point
        """
        transitions = []
        for p, label in choice.items():
            cell = structure.cell_of(structure.require_point(p), label)
            if cell is None:
                raise DomainError(f"Scenario {label} does not pass through {p}")
            transitions.append((p, cell))
        return cls(structure, transitions, name)

    @property
    def family(self) -> HistoryFamily:
        return self.structure.family

    @property
    def points(self) -> List[str]:
        seen: List[str] = []
        for p, _ in self.transitions:
            if p not in seen:
                seen.append(p)
        return seen

    def outcome(self, p: str) -> Predicate:
        return self.family.meet_all(o for q, o in self.transitions if q == p)

    def meet(self, points: Iterable[str]) -> Predicate:
        return self.family.meet_all(self.outcome(p) for p in points)

    def is_product_function(self) -> bool:
        if len(self.points) != len(self.transitions):
            return False
        structure = self.structure
        return all(any(structure.same_predicate(o, cell) for cell in structure.possibilities(p))
                   for p, o in self.transitions)

    def restricted(self, points: Iterable[str]) -> "TransitionSet":
        keep = set(points)
        return TransitionSet(self.structure, [(p, o) for p, o in self.transitions if p in keep],
                             self.name)

    def to_dict(self) -> Dict[str, Any]:
        family = self.family
        return {"name": self.name,
                "transitions": [{"point": p, "outcome": family.format_predicate(o)}
                                for p, o in self.transitions]}


def transition_set_from_model(model: MbsModel, name: str) -> TransitionSet:
    """
    Transition set declared in a model document.

    Each entry names a location, the scenario whose event is meant there and
    a scenario inside the chosen possibility.

    Raises:
        CatalogLookupError: If the model declares no such transition set
    """
    if name not in model.transitions:
        raise CatalogLookupError(name, model.transitions, "transition set")
    entries = model.transitions[name]
    structure = MbsStructure.from_locations(model, [(x, sigma) for x, sigma, _ in entries])
    transitions = []
    for x, sigma, outcome in entries:
        e = event_class(x, sigma, model)
        p = next(q for q, other in structure.events.items() if same_event(e, other, model))
        cell = structure.cell_of(p, model.scenario(outcome))
        if cell is None:
            raise DomainError(f"Scenario {outcome} does not pass through {p}")
        transitions.append((p, cell))
    return TransitionSet(structure, transitions, name)


class SymbolicPointFamily:
    """
    An index-ordered set of binary choice points p_start, p_start+1, ...

    Index n corresponds to the family constraint index n: the possibilities at
    p_n are {g(n) = 0} and {g(n) = 1}. With a history rule r the points are
    diagonal, lying only on histories with g(n) = r(n).
    """

    def __init__(self, name: str, family: HistoryFamily, sequence: Optional[PointSequence] = None,
                 start: int = 0, stop: Optional[int] = None,
                 history_rule: Optional[BitRule] = None, limits: Sequence[Point4] = (),
                 model: Optional[MbsModel] = None):
        if sequence is not None:
            start, stop = sequence.start, sequence.stop
        if stop is not None and stop <= start:
            raise DomainError(f"Empty index range [{start}, {stop})")
        family_size = getattr(family, "n", None)
        if family_size is not None:
            stop = family_size if stop is None else min(stop, family_size)
        self.name = name
        self.family = family
        self.sequence = sequence
        self.start = start
        self.stop = stop
        self.history_rule = history_rule
        self.limits = tuple(limits)
        self.model = model

    @classmethod
    def diagonal(cls, name: str, family: HistoryFamily, rule: BitRule,
                 sequence: Optional[PointSequence] = None, start: int = 0,
                 model: Optional[MbsModel] = None) -> "SymbolicPointFamily":
        """Points x_n lying exactly on the histories with g(n) = rule(n)."""
        return cls(name, family, sequence, start, history_rule=rule, model=model)

    @property
    def is_infinite(self) -> bool:
        return self.stop is None

    def index_range(self) -> IndexSet:
        if self.stop is None:
            return IndexSet(frozenset(), self.start)
        return IndexSet(frozenset(range(self.start, self.stop)))

    def indices(self, count: int = SAMPLE_LIMIT) -> List[int]:
        return self.index_range().first(count)

    def point(self, n: int) -> Optional[Point4]:
        return None if self.sequence is None else self.sequence.point(n)

    def history_set(self, n: int) -> Predicate:
        if self.history_rule is None:
            return self.family.top()
        return self.family.literal(n, self.history_rule.bit(n))

    def history_constraint(self, indices: IndexSet) -> Predicate:
        """Histories through every point with an index in the set."""
        if self.history_rule is None:
            return self.family.top()
        return self.family.agreeing(self.history_rule, indices)

    def possibilities(self, n: int) -> List[Predicate]:
        family = self.family
        cells = [family.meet(self.history_set(n), family.literal(n, bit)) for bit in (0, 1)]
        return [cell for cell in cells if not family.is_empty(cell)]

    def outcome(self, n: int, rule: BitRule) -> Predicate:
        family = self.family
        return family.meet(self.history_set(n), family.literal(n, rule.bit(n)))

    def outcomes_over(self, indices: IndexSet, rule: BitRule) -> Predicate:
        """Meet of rule's outcomes over a (possibly cofinite) index set."""
        indices = indices.intersection(self.index_range())
        family = self.family
        return family.meet(family.agreeing(rule, indices), self.history_constraint(indices))

    def full_outcome(self, rule: BitRule) -> Predicate:
        return self.outcomes_over(self.index_range(), rule)

    def is_pairwise_slr(self) -> bool:
        return True if self.sequence is None else self.sequence.is_pairwise_slr()

    def time_bounded(self) -> Optional[bool]:
        return None if self.sequence is None else self.sequence.time_bounded()

    def reduced_set(self, count: int = SAMPLE_LIMIT) -> List[Point4]:
        if self.sequence is None:
            return []
        return [self.sequence.point(n) for n in self.indices(count)]

    def point_id(self, n: int) -> str:
        return f"{self.name}[{n}]"

    def structure(self, count: int = SAMPLE_LIMIT) -> AbstractStructure:
        """The first `count` members as a finite structure of pairwise SLR points."""
        indices = self.indices(count)
        ids = [self.point_id(n) for n in indices]
        locations = {}
        if self.sequence is not None:
            locations = {self.point_id(n): self.sequence.point(n) for n in indices}
        return AbstractStructure(
            self.name, ids, (), self.family,
            {self.point_id(n): self.history_set(n) for n in indices},
            {self.point_id(n): self.possibilities(n) for n in indices},
            locations)

    def transition_set(self, rule: BitRule, count: int = SAMPLE_LIMIT) -> TransitionSet:
        """Product function of rule over the first `count` members."""
        structure = self.structure(count)
        transitions = [(self.point_id(n), self.outcome(n, rule)) for n in self.indices(count)]
        return TransitionSet(structure, transitions, f"{self.name}:{rule}")

    def describe(self) -> str:
        where = self.sequence.describe() if self.sequence is not None else "abstract choice points"
        stop = "" if self.stop is None else f", n < {self.stop}"
        rule = "" if self.history_rule is None else f", on g(n) = {self.history_rule}(n)"
        return f"{self.name}: {where} (n >= {self.start}{stop}{rule}) over {self.family.describe()}"
