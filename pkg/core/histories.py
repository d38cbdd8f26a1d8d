#!/usr/bin/env python3
"""
Histories, scenario sets along histories, elementary possibilities and
chain compactness.

Every history of a model is the set of event classes [x_sigma] for one
scenario sigma; Sigma_h(x) is then the scenario class of x in sigma. The
brute-force oracle here re-derives that shape from the order alone on a
finite grid of locations.
"""

import dataclasses
import itertools
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx

from config.settings import CENTREDNESS_SAMPLES, EXHAUSTIVE_EVENT_LIMIT, SAMPLE_LIMIT
from core.errors import DomainError, ModelParseError, UnsupportedError
from core.families import BinaryLabel, HistoryFamily, Predicate
from core.geometry import Point4, leq_M, to_rational, up
from core.mbs_model import (
    EventClass, MbsModel, _blocked_limit, event_class, in_overlap, leq_S, same_event
)

logger = logging.getLogger(__name__)


def sigma_h(x: Point4, sigma: Any, model: MbsModel) -> Predicate:
    """Scenarios whose history shares the event at x with sigma's history."""
    return event_class(x, sigma, model).scenario_class


def undivided(sigma: Any, eta: Any, at: EventClass, model: MbsModel) -> bool:
    """
    Whether sigma and eta share a point strictly above `at`.

    Raises:
        DomainError: If at lies outside the overlap of sigma and eta
        UnsupportedError: For declared limits off the embedded plane
    """
    sigma, eta = model.scenario(sigma), model.scenario(eta)
    x = at.location
    if not in_overlap(x, sigma, eta, model):
        raise DomainError(f"{x} lies outside the overlap of {sigma} and {eta}")
    if sigma == eta:
        return True
    if model.splitting.contains_point(x, sigma, eta):
        return False
    return not _blocked_limit(x, model.splitting.limits(sigma, eta))


@dataclass(frozen=True)
class ElementaryPossibility:
    """One immediate outcome at an event: the histories through it that stay undivided."""

    at: EventClass
    members: Predicate

    def to_dict(self, family: HistoryFamily) -> Dict[str, Any]:
        return {"at": self.at.location.to_text(),
                "members": family.predicate_to_data(self.members)}


def elementary_possibilities(at: EventClass, model: MbsModel) -> List[ElementaryPossibility]:
    """
    Partition of the histories through `at` by undividedness.

    Raises:
        UnsupportedError: For a symbolic family at a location that is not a sequence member
    """
    family = model.family
    if model.is_indexed:
        n = model.splitting.sequence.index_of(at.location)
        if n is None:
            raise UnsupportedError(
                f"{at.location} is not an indexed choice point; possibilities undecided")
        cells = [family.meet(at.scenario_class, family.literal(n, bit)) for bit in (0, 1)]
        return [ElementaryPossibility(at, cell) for cell in cells if not family.is_empty(cell)]
    cells: List[List[Any]] = []
    for sigma in family.labels():
        if sigma not in at.scenario_class:
            continue
        for cell in cells:
            if undivided(cell[0], sigma, at, model):
                cell.append(sigma)
                break
        else:
            cells.append([sigma])
    return [ElementaryPossibility(at, frozenset(cell)) for cell in cells]


def possibility_of(at: EventClass, sigma: Any, model: MbsModel) -> ElementaryPossibility:
    """The cell at `at` that contains sigma."""
    sigma = model.scenario(sigma)
    for cell in elementary_possibilities(at, model):
        if model.family.holds(sigma, cell.members):
            return cell
    raise DomainError(f"Scenario {sigma} does not pass through {at.location}")


# --- histories by brute force ------------------------------------------------

def grid_events(model: MbsModel, grid: Sequence[Point4]) -> List[EventClass]:
    """Distinct event classes over grid x scenarios, in grid-then-family order."""
    events: List[EventClass] = []
    for x in grid:
        for sigma in model.family.labels():
            e = event_class(x, sigma, model)
            if not any(same_event(e, other, model) for other in events):
                events.append(e)
    return events


def close_grid(model: MbsModel, grid: Sequence[Point4]) -> List[Point4]:
    """Grid plus one point above every grid and splitting point."""
    points = list(grid) + list(model.splitting.all_points())
    if not points:
        return list(grid)
    top = Point4(max(p.t for p in points))
    for p in points:
        top = up(top, p)
    top = top.shifted(1)
    return list(grid) + ([top] if top not in grid else [])


def _order_graph(events: Sequence[EventClass], model: MbsModel) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(events)))
    for i, a in enumerate(events):
        for j, b in enumerate(events):
            if i != j and leq_S(a, b, model):
                graph.add_edge(i, j)
    return graph


def _directed(mask: int, above: List[int]) -> bool:
    members = [i for i in range(len(above)) if mask >> i & 1]
    for i, j in itertools.combinations(members, 2):
        if not above[i] & above[j] & mask:
            return False
    return True


def enumerate_histories(model: MbsModel, grid: Sequence[Point4]) -> List[FrozenSet[EventClass]]:
    """
    Maximal upward-directed sets of event classes over a finite grid.

    Small event sets are searched exhaustively by bitmask; larger ones use the
    principal down-sets of maximal elements, which are the same sets for a
    finite order.
    """
    if not model.family.is_finite:
        raise UnsupportedError("History enumeration needs a finite scenario family")
    events = grid_events(model, grid)
    graph = _order_graph(events, model)
    if len(events) <= EXHAUSTIVE_EVENT_LIMIT:
        # above[i]: bitmask of events >= event i
        above = [(1 << i) | sum(1 << j for j in graph.successors(i)) for i in range(len(events))]
        directed = [mask for mask in range(1, 1 << len(events)) if _directed(mask, above)]
        directed_set = set(directed)
        found = [mask for mask in directed
                 if not any((mask | 1 << i) in directed_set
                            for i in range(len(events)) if not mask >> i & 1)]
        histories = [frozenset(events[i] for i in range(len(events)) if mask >> i & 1)
                     for mask in found]
    else:
        tops = [i for i in graph.nodes if graph.out_degree(i) == 0]
        histories = [frozenset(events[j] for j in nx.ancestors(graph, i) | {i}) for i in tops]
    logger.debug(f"{len(histories)} histories over {len(events)} events")
    return histories


@dataclass
class HistoryShapeReport:
    model_name: str
    histories: int
    scenarios: int
    mismatches: List[str] = field(default_factory=list)

    @property
    def matches(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> Dict[str, Any]:
        return {"model": self.model_name, "histories": self.histories,
                "scenarios": self.scenarios, "mismatches": list(self.mismatches)}


def check_history_shape(model: MbsModel, grid: Sequence[Point4]) -> HistoryShapeReport:
    """Every enumerated history equals {[x_sigma] : x in grid} for exactly one sigma."""
    points = close_grid(model, grid)
    histories = enumerate_histories(model, points)
    labeled = {}
    for sigma in model.family.labels():
        labeled[sigma] = frozenset(event_class(x, sigma, model) for x in points)
    report = HistoryShapeReport(model.name, len(histories), len(labeled))
    for h in histories:
        owners = [sigma for sigma, members in labeled.items() if members == h]
        if len(owners) != 1:
            locations = sorted({e.location.to_text() for e in h})
            report.mismatches.append(
                f"history over {locations} matches {len(owners)} scenarios")
    missing = [sigma for sigma, members in labeled.items() if members not in set(histories)]
    for sigma in missing:
        report.mismatches.append(f"scenario {model.family.format_label(sigma)} is not a history")
    return report


# --- chains ------------------------------------------------------------------

class LabelRule(ABC):
    @abstractmethod
    def label_for(self, i: int, model: MbsModel) -> Any:
        """Scenario of the i-th chain element."""

    @abstractmethod
    def eventual(self, model: MbsModel) -> Any:
        """Scenario the element labels settle to, read index-wise."""

    @abstractmethod
    def to_data(self) -> Any:
        """Serializable form."""


@dataclass(frozen=True)
class ConstantLabel(LabelRule):
    label: str

    def label_for(self, i, model):
        return model.scenario(self.label)

    def eventual(self, model):
        return model.scenario(self.label)

    def to_data(self):
        return self.label


@dataclass(frozen=True)
class PrefixZeros(LabelRule):
    """Element i carries the sequence that is 0 on indices below i and 1 after."""

    def _width(self, model: MbsModel, i: int) -> int:
        n = getattr(model.family, "n", None)
        return i if n is None else min(i, n)

    def label_for(self, i, model):
        if model.family.is_symbolic is False:
            raise UnsupportedError("Prefix-zero labels need a binary scenario family")
        return model.scenario(BinaryLabel(frozenset(range(self._width(model, i))), 1))

    def eventual(self, model):
        return BinaryLabel.constant(0)

    def to_data(self):
        return "prefix-zeros"


def label_rule_from_data(data: Any) -> LabelRule:
    if data == "prefix-zeros":
        return PrefixZeros()
    if isinstance(data, str):
        return ConstantLabel(data)
    raise ModelParseError(f"Bad chain label rule {data!r}")


class ChainDescriptor(ABC):
    name = ""

    @abstractmethod
    def events(self, model: MbsModel, count: int) -> List[Tuple[Point4, Any]]:
        """First `count` (location, scenario) elements in ascending order."""

    @abstractmethod
    def sample_points(self, count: int = SAMPLE_LIMIT) -> List[Point4]:
        """Locations of the first elements."""

    @property
    @abstractmethod
    def is_infinite(self) -> bool:
        """Whether the chain has infinitely many elements."""

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """Serializable form."""

    @abstractmethod
    def describe(self) -> str:
        """One-line description."""


@dataclass
class ExplicitChain(ChainDescriptor):
    elements: Tuple[Tuple[Point4, str], ...]
    name: str = ""

    def __post_init__(self):
        if not self.elements:
            raise DomainError("A chain needs at least one element")

    def events(self, model, count):
        return [(x, model.scenario(label)) for x, label in self.elements]

    def sample_points(self, count=SAMPLE_LIMIT):
        return [x for x, _ in self.elements]

    @property
    def is_infinite(self):
        return False

    def to_dict(self):
        return {"kind": "explicit",
                "elements": [{"point": x.to_text(), "scenario": label} for x, label in self.elements]}

    def describe(self):
        return " < ".join(f"{x}@{label}" for x, label in self.elements)


@dataclass
class VerticalChain(ChainDescriptor):
    """z_i = (t0 + i * dt, spatial) for i >= first, ascending without bound."""

    spatial: Point4
    t0: Any
    dt: Any
    first: int
    label_rule: LabelRule
    name: str = ""

    def __post_init__(self):
        self.t0, self.dt = to_rational(self.t0), to_rational(self.dt)
        if self.dt <= 0:
            raise DomainError("A vertical chain must ascend")
        self.spatial = Point4(0, *self.spatial.spatial)

    def point(self, i: int) -> Point4:
        return self.spatial.shifted(self.t0 + i * self.dt)

    def events(self, model, count):
        return [(self.point(i), self.label_rule.label_for(i, model))
                for i in range(self.first, self.first + count)]

    def sample_points(self, count=SAMPLE_LIMIT):
        return [self.point(i) for i in range(self.first, self.first + count)]

    @property
    def is_infinite(self):
        return True

    def to_dict(self):
        return {"kind": "vertical", "spatial": self.spatial.to_text(),
                "t0": str(self.t0), "dt": str(self.dt), "first": self.first,
                "label": self.label_rule.to_data()}

    def describe(self):
        return (f"z_i = {self.spatial.shifted(self.t0)} + i * {self.dt} in time, "
                f"i >= {self.first}")


def chain_from_dict(data: Dict[str, Any], name: str = "") -> ChainDescriptor:
    try:
        kind = data["kind"]
        if kind == "explicit":
            elements = tuple((Point4.parse(e["point"]), str(e["scenario"])) for e in data["elements"])
            return ExplicitChain(elements, name)
        if kind == "vertical":
            return VerticalChain(Point4.parse(data["spatial"]), data["t0"], data["dt"],
                                 int(data.get("first", 0)),
                                 label_rule_from_data(data["label"]), name)
    except (KeyError, TypeError, ValueError) as e:
        raise ModelParseError(f"Bad chain {name!r}: {e}")
    raise UnsupportedError(f"Chain kind {data.get('kind')!r} is not supported")


@dataclass
class ChainVerdict:
    """Outcome of intersecting Sigma_h along a chain."""

    chain: str
    compact: bool
    witness: Any
    constraint: Predicate
    certificate: Dict[str, Any]
    summary: str

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.certificate)


def chain_compactness_witness(family: Optional[HistoryFamily], model: MbsModel,
                              chain: ChainDescriptor) -> ChainVerdict:
    """
    Find a scenario in the intersection of Sigma_h along a chain.

    Args:
        family: Family to read the model with (None keeps the model's own)
        model: Model the chain lives in
        chain: Ascending chain descriptor

    Returns:
        ChainVerdict with a witness, or an empty-intersection certificate

    Raises:
        DomainError: If the elements do not form a chain
        UnsupportedError: For labels or descriptors outside the decided fragment
    """
    if family is not None and family is not model.family:
        model = dataclasses.replace(model, family=family)
    family = model.family
    count = CENTREDNESS_SAMPLES if chain.is_infinite else len(chain.sample_points())
    elements = chain.events(model, count)
    classes = [event_class(x, sigma, model) for x, sigma in elements]
    for (a, b), (ea, eb) in zip(zip(classes, classes[1:]), zip(elements, elements[1:])):
        if not leq_M(ea[0], eb[0]) or not leq_S(a, b, model):
            raise DomainError(f"Chain elements at {ea[0]} and {eb[0]} are not ordered")
    constraint = family.meet_all(c.scenario_class for c in classes)
    centred = all(not family.is_empty(family.meet_all(c.scenario_class for c in classes[:k]))
                  for k in range(1, len(classes) + 1))
    limit_part = None
    if chain.is_infinite:
        eventual = chain.label_rule.eventual(model)
        if model.is_indexed:
            limit_part = family.agreeing(eventual, model.splitting.index_range())
        else:
            limit_part = frozenset(
                eta for eta in family.labels()
                if eta == eventual or not (model.splitting.points(eventual, eta)
                                           or model.splitting.limits(eventual, eta)))
        constraint = family.meet(constraint, limit_part)
    witness = family.witness(constraint)
    compact = witness is not None
    certificate = {
        "chain": chain.describe(),
        "family": family.describe(),
        "sampled_elements": len(classes),
        "centred_on_samples": centred,
        "constraint": family.format_predicate(constraint),
        "witness": None if witness is None else family.format_label(witness),
        "compact": compact,
    }
    if limit_part is not None:
        certificate["limit_constraint"] = family.format_predicate(limit_part)
    if not compact and getattr(constraint, "tail_zero_from", None) == 0:
        certificate["reason"] = "all-zeros sequence required"
    if compact:
        summary = f"Chain intersection is nonempty: witness {family.format_label(witness)}"
    else:
        summary = (f"Chain intersection is empty: it requires "
                   f"{family.format_predicate(constraint)}, which no scenario of "
                   f"{family.describe()} satisfies")
    logger.info(summary)
    name = chain.name or chain.describe()
    return ChainVerdict(name, compact, witness, constraint, certificate, summary)
