#!/usr/bin/env python3
"""
Finite presentation of a Minkowskian branching structure.

A model pairs a scenario family with its splitting points. Explicit models
list C for every unordered scenario pair (optionally with declared
convergent sequences); indexed models read C off a single point sequence:
p_n splits g and g' exactly when g(n) != g'(n).
"""

import itertools
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from config.settings import SAMPLE_LIMIT
from core.descriptors import IndexSet, PointSequence
from core.errors import DomainError, UnsupportedError
from core.families import BinaryLabel, HistoryFamily, Label, Predicate
from core.geometry import Point4, leq_M, lt_M, slr_M

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LimitDeclaration:
    """An accumulation point of splitting points with the sequence converging to it."""

    limit: Point4
    sequence: PointSequence = field(compare=False)

    def to_dict(self) -> Dict[str, Any]:
        return {"limit": self.limit.to_text(), "sequence": self.sequence.to_dict()}


def pair_key(sigma: Label, eta: Label) -> FrozenSet:
    return frozenset((sigma, eta))


class Splitting(ABC):
    """Where each pair of scenarios splits."""

    @abstractmethod
    def split_below(self, x: Point4, sigma: Label, eta: Label, strict: bool = True) -> bool:
        """Some splitting point of the pair lies (strictly) below x."""

    @abstractmethod
    def contains_point(self, x: Point4, sigma: Label, eta: Label) -> bool:
        """x is itself a splitting point of the pair."""

    @abstractmethod
    def points(self, sigma: Label, eta: Label) -> List[Point4]:
        """Presented splitting points of the pair (samples for infinite sets)."""

    @abstractmethod
    def limits(self, sigma: Label, eta: Label) -> List[LimitDeclaration]:
        """Declared accumulation points that belong to the pair."""

    @abstractmethod
    def all_points(self) -> List[Point4]:
        """Every presented splitting point, for drawing and grids."""

    @abstractmethod
    def all_limits(self) -> List[LimitDeclaration]:
        """Every declaration, for drawing."""

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """Serializable form."""


class ExplicitSplitting(Splitting):
    """Finite point sets per unordered pair plus declared convergent sequences."""

    def __init__(self, pairs: Dict[FrozenSet[str], Sequence[Point4]],
                 limits: Optional[Dict[FrozenSet[str], Sequence[LimitDeclaration]]] = None):
        self.pairs = {frozenset(k): tuple(v) for k, v in pairs.items()}
        self.declared = {frozenset(k): tuple(v) for k, v in (limits or {}).items()}

    def _samples(self, sigma, eta) -> Tuple[Point4, ...]:
        if sigma == eta:
            return ()
        return self.pairs.get(pair_key(sigma, eta), ())

    def split_below(self, x, sigma, eta, strict=True) -> bool:
        if sigma == eta:
            return False
        compare = lt_M if strict else leq_M
        if any(compare(c, x) for c in self._samples(sigma, eta)):
            return True
        return any(d.sequence.any_below(x, strict) for d in self.limits(sigma, eta))

    def contains_point(self, x, sigma, eta) -> bool:
        if x in self._samples(sigma, eta):
            return True
        return any(d.sequence.index_of(x) is not None for d in self.limits(sigma, eta))

    def points(self, sigma, eta) -> List[Point4]:
        return list(self._samples(sigma, eta))

    def limits(self, sigma, eta) -> List[LimitDeclaration]:
        if sigma == eta:
            return []
        return list(self.declared.get(pair_key(sigma, eta), ()))

    def sequence_points(self, sigma, eta) -> List[Point4]:
        return [p for d in self.limits(sigma, eta) for p in d.sequence.sample_points()]

    def all_points(self) -> List[Point4]:
        return sorted({p for pts in self.pairs.values() for p in pts})

    def all_limits(self) -> List[LimitDeclaration]:
        return [d for key in sorted(self.declared, key=sorted) for d in self.declared[key]]

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "pairs": [{"scenarios": sorted(k), "points": [p.to_text() for p in v]}
                      for k, v in sorted(self.pairs.items(), key=lambda kv: sorted(kv[0]))]}
        if self.declared:
            data["limits"] = [{"scenarios": sorted(k), "declarations": [d.to_dict() for d in v]}
                              for k, v in sorted(self.declared.items(), key=lambda kv: sorted(kv[0]))]
        return data


class IndexedSplitting(Splitting):
    """p_n splits two binary labels exactly when they differ at n."""

    def __init__(self, sequence: PointSequence, limits: Sequence[LimitDeclaration] = (),
                 sample_count: int = SAMPLE_LIMIT):
        self.sequence = sequence
        self.declared = tuple(limits)
        self.sample_count = sample_count

    @staticmethod
    def differing(sigma: BinaryLabel, eta: BinaryLabel) -> IndexSet:
        """Indices where two labels differ."""
        flips = sigma.flips ^ eta.flips
        if sigma.default == eta.default:
            return IndexSet(frozenset(flips))
        settle = max(sigma.prefix_length, eta.prefix_length)
        return IndexSet(frozenset(n for n in range(settle) if n not in flips), settle)

    def index_range(self) -> IndexSet:
        if self.sequence.stop is None:
            return IndexSet(frozenset(), self.sequence.start)
        return IndexSet(frozenset(range(self.sequence.start, self.sequence.stop)))

    def split_indices(self, sigma, eta) -> IndexSet:
        return self.differing(sigma, eta).intersection(self.index_range())

    def split_below(self, x, sigma, eta, strict=True) -> bool:
        if sigma == eta:
            return False
        below = self.sequence.indices_below(x, strict)
        return not below.intersection(self.split_indices(sigma, eta)).is_empty

    def contains_point(self, x, sigma, eta) -> bool:
        n = self.sequence.index_of(x)
        return n is not None and n in self.split_indices(sigma, eta)

    def points(self, sigma, eta) -> List[Point4]:
        indices = self.split_indices(sigma, eta).first(self.sample_count)
        return [self.sequence.point(n) for n in indices]

    def limits(self, sigma, eta) -> List[LimitDeclaration]:
        split = self.split_indices(sigma, eta)
        out = []
        for d in self.declared:
            if d.sequence.stop is None and split.tail_from is not None:
                out.append(d)
        return out

    def all_points(self) -> List[Point4]:
        return self.sequence.sample_points(self.sample_count)

    def all_limits(self) -> List[LimitDeclaration]:
        return list(self.declared)

    def to_dict(self) -> Dict[str, Any]:
        data = {"indexed": self.sequence.to_dict(), "samples": self.sample_count}
        if self.declared:
            data["limits"] = [d.to_dict() for d in self.declared]
        return data


@dataclass
class MbsModel:
    """Scenario family, splitting points and the named chains and rules attached to them."""

    name: str
    family: HistoryFamily
    splitting: Splitting
    annotations: Dict[str, Any] = field(default_factory=dict)
    chains: Dict[str, Any] = field(default_factory=dict)
    transitions: Dict[str, Any] = field(default_factory=dict)

    @property
    def is_indexed(self) -> bool:
        return isinstance(self.splitting, IndexedSplitting)

    @property
    def is_2d(self) -> bool:
        points = list(self.splitting.all_points())
        points += [d.limit for d in self.splitting.all_limits()]
        for chain in self.chains.values():
            points += chain.sample_points()
        return all(p.is_2d for p in points)

    def scenario(self, label: Any) -> Label:
        """Resolve a label (or its text form) to a member of the family."""
        if isinstance(label, str):
            return self.family.parse_label(label)
        return self.family.require_member(label)


@dataclass(frozen=True)
class EventClass:
    """A point of the quotient: a location with the scenarios glued there."""

    location: Point4
    scenario_class: Predicate
    model_name: str
    representative: Any = field(default=None, compare=False)

    def to_dict(self, family: HistoryFamily) -> Dict[str, Any]:
        return {"location": self.location.to_text(),
                "scenarios": family.predicate_to_data(self.scenario_class)}

    def describe(self, family: HistoryFamily) -> str:
        return f"[{self.location} | {family.format_predicate(self.scenario_class)}]"


@dataclass(frozen=True)
class Violation:
    """One failed presentation condition."""

    kind: str
    scenarios: Tuple[str, ...] = ()
    points: Tuple[str, ...] = ()
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "scenarios": list(self.scenarios),
                "points": list(self.points), "detail": self.detail}


@dataclass
class ValidationReport:
    model_name: str
    violations: List[Violation] = field(default_factory=list)
    checks: Dict[str, str] = field(default_factory=dict)

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, Any]:
        return {"model": self.model_name, "valid": self.is_valid,
                "checks": dict(self.checks),
                "violations": [v.to_dict() for v in self.violations]}

    def summary(self) -> str:
        if self.is_valid:
            return f"Model '{self.model_name}' is a valid presentation"
        kinds = sorted({v.kind for v in self.violations})
        return (f"Model '{self.model_name}' has {len(self.violations)} violation(s): "
                + ", ".join(kinds))


class ModelValidator:
    """Checks symmetry, nonemptiness, pairwise SLR and the triangle condition."""

    def __init__(self, model: MbsModel):
        self.model = model
        self.logger = logging.getLogger(__name__)

    def validate(self) -> ValidationReport:
        report = ValidationReport(self.model.name)
        if self.model.is_indexed:
            self._validate_indexed(report)
        else:
            self._validate_symmetry(report)
            self._validate_nonempty(report)
            self._validate_pairwise_slr(report)
            self._validate_limits(report)
            self._validate_triangle(report)
        self.logger.info(report.summary())
        return report

    def _labels(self) -> List[str]:
        return self.model.family.labels()

    def _validate_symmetry(self, report: ValidationReport):
        known = set(self._labels())
        splitting = self.model.splitting
        for key in list(splitting.pairs) + list(splitting.declared):
            names = tuple(sorted(key))
            if len(key) != 2:
                report.violations.append(Violation(
                    "symmetry", names, detail="a scenario cannot split from itself"))
            elif not key <= known:
                report.violations.append(Violation(
                    "symmetry", names, detail="pair names an unknown scenario"))
        report.checks["symmetry"] = "unordered pair keys"

    def _validate_nonempty(self, report: ValidationReport):
        splitting = self.model.splitting
        for sigma, eta in itertools.combinations(self._labels(), 2):
            if not splitting.points(sigma, eta) and not splitting.limits(sigma, eta):
                report.violations.append(Violation(
                    "nonempty", (sigma, eta), detail="scenarios never split"))
        report.checks["nonempty"] = "every pair"

    def _validate_pairwise_slr(self, report: ValidationReport):
        splitting = self.model.splitting
        for sigma, eta in itertools.combinations(self._labels(), 2):
            samples = splitting.points(sigma, eta)
            for p, q in itertools.combinations(samples, 2):
                if not slr_M(p, q):
                    report.violations.append(Violation(
                        "pairwise_slr", (sigma, eta), (p.to_text(), q.to_text()),
                        "splitting points are causally related"))
            for declaration in splitting.limits(sigma, eta):
                seq = declaration.sequence
                if not seq.is_pairwise_slr():
                    report.violations.append(Violation(
                        "pairwise_slr", (sigma, eta), (declaration.limit.to_text(),),
                        f"declared sequence {seq.describe()} is not space-like"))
                for p in samples:
                    if seq.any_below(p) or any(not slr_M(p, q) for q in seq.sample_points()):
                        report.violations.append(Violation(
                            "pairwise_slr", (sigma, eta), (p.to_text(),),
                            f"point related to declared sequence {seq.describe()}"))
        report.checks["pairwise_slr"] = "exact on samples, symbolic on declared sequences"

    def _validate_limits(self, report: ValidationReport):
        for declaration in self.model.splitting.all_limits():
            if declaration.sequence.limit() != declaration.limit:
                report.violations.append(Violation(
                    "limit", points=(declaration.limit.to_text(),),
                    detail=f"sequence {declaration.sequence.describe()} does not converge there"))
        report.checks["limits"] = "declared limit equals sequence limit"

    def _pair_points(self, sigma, eta) -> List[Point4]:
        splitting = self.model.splitting
        return splitting.points(sigma, eta) + splitting.sequence_points(sigma, eta)

    def _validate_triangle(self, report: ValidationReport):
        splitting = self.model.splitting
        for sigma, gamma in itertools.permutations(self._labels(), 2):
            for eta in self._labels():
                if eta in (sigma, gamma):
                    continue
                for c in self._pair_points(sigma, gamma):
                    covered = (splitting.split_below(c, sigma, eta, strict=False)
                               or splitting.split_below(c, eta, gamma, strict=False))
                    if not covered:
                        report.violations.append(Violation(
                            "triangle", (sigma, eta, gamma), (c.to_text(),),
                            f"no splitting point of {sigma}/{eta} or {eta}/{gamma} below it"))
        report.checks["triangle"] = "exact on samples, sampled on declared sequences"

    def _validate_indexed(self, report: ValidationReport):
        splitting = self.model.splitting
        family = self.model.family
        seq = splitting.sequence
        needed = getattr(family, "n", None)
        covers = seq.start == 0 and (seq.stop is None or (needed is not None and seq.stop >= needed))
        if not covers:
            report.violations.append(Violation(
                "nonempty", detail=f"sequence indices [{seq.start}, {seq.stop}) miss family indices"))
        if not seq.is_pairwise_slr():
            pts = seq.check_points()
            offending = next(((p, q) for p, q in itertools.combinations(pts, 2) if not slr_M(p, q)),
                             None)
            points = tuple(p.to_text() for p in offending) if offending else ()
            report.violations.append(Violation(
                "pairwise_slr", points=points, detail=f"sequence {seq.describe()} is not space-like"))
        self._validate_limits(report)
        report.checks.update({
            "symmetry": "certified by the rule g(n) != g'(n)",
            "triangle": "certified by the rule g(n) != g'(n)",
            "nonempty": "certified when the sequence covers every family index",
            "pairwise_slr": "symbolic on the sequence descriptor",
        })


def validate(model: MbsModel) -> ValidationReport:
    return ModelValidator(model).validate()


def in_overlap(x: Point4, sigma: Any, eta: Any, model: MbsModel) -> bool:
    """x is in the region where sigma and eta coincide: no splitting point strictly below it."""
    sigma, eta = model.scenario(sigma), model.scenario(eta)
    return not model.splitting.split_below(x, sigma, eta, strict=True)


def event_class(x: Point4, sigma: Any, model: MbsModel) -> EventClass:
    """
    The equivalence class of x in scenario sigma.

    Args:
        x: Location
        sigma: Scenario label (or its text form)
        model: Model the class belongs to

    Returns:
        EventClass whose scenario class holds every eta with x in the overlap of sigma and eta

    Raises:
        UnknownScenarioError: If sigma is not a member of the family
    """
    sigma = model.scenario(sigma)
    family = model.family
    if model.is_indexed:
        splitting = model.splitting
        below = splitting.sequence.indices_below(x, strict=True)
        scenarios = family.agreeing(sigma, below)
    else:
        scenarios = frozenset(eta for eta in family.labels()
                              if not model.splitting.split_below(x, sigma, eta, strict=True))
    return EventClass(x, scenarios, model.name, sigma)


def _check_same_model(a: EventClass, b: EventClass, model: MbsModel):
    if a.model_name != model.name or b.model_name != model.name:
        raise DomainError(
            f"Event classes from models '{a.model_name}' and '{b.model_name}' "
            f"compared in '{model.name}'")


def same_event(a: EventClass, b: EventClass, model: MbsModel) -> bool:
    """Same location with intersecting scenario classes."""
    _check_same_model(a, b, model)
    family = model.family
    return a.location == b.location and not family.is_empty(
        family.meet(a.scenario_class, b.scenario_class))


def leq_S(a: EventClass, b: EventClass, model: MbsModel) -> bool:
    _check_same_model(a, b, model)
    family = model.family
    return leq_M(a.location, b.location) and not family.is_empty(
        family.meet(a.scenario_class, b.scenario_class))


def lt_S(a: EventClass, b: EventClass, model: MbsModel) -> bool:
    return leq_S(a, b, model) and not same_event(a, b, model)


def slr_S(a: EventClass, b: EventClass, model: MbsModel) -> bool:
    return not leq_S(a, b, model) and not leq_S(b, a, model)


def reduced_set(events: Iterable[EventClass]) -> List[Point4]:
    """Locations of an event set, sorted and without repeats."""
    return sorted({e.location for e in events})


def generated_choice_points(sigma: Any, eta: Any, model: MbsModel) -> List[EventClass]:
    """
    Event classes at the presented splitting points of a pair.

    Raises:
        DomainError: If sigma equals eta
    """
    sigma, eta = model.scenario(sigma), model.scenario(eta)
    if sigma == eta:
        raise DomainError("Generated choice points need two different scenarios")
    return [event_class(c, sigma, model) for c in model.splitting.points(sigma, eta)]


def _blocked_limit(x: Point4, declarations: List[LimitDeclaration]) -> bool:
    """
    Every strict successor of x lies above a splitting point of the pair.

    In the plane it suffices that both future light rays from x are covered;
    a sample with offset (d0, d1) from x covers the right ray near x when
    d1 > d0 and the left ray when d1 < -d0. Every sampled member of every
    converging sequence is inspected, so a sequence that alternates sides
    covers both rays. The sides seen in the first SAMPLE_LIMIT members are
    taken to recur in the tail.
    """
    converging = [d for d in declarations if d.limit == x]
    if not converging:
        return False
    samples = [p for d in converging for p in d.sequence.sample_points(SAMPLE_LIMIT)]
    if not x.is_2d or not all(p.is_2d for p in samples):
        raise UnsupportedError(f"Declared limit {x} outside the plane: choice point undecided")
    offsets = [p - x for p in samples]
    right = any(d.x1 > d.t for d in offsets)
    left = any(d.x1 < -d.t for d in offsets)
    return right and left


def is_choice_point(e: EventClass, sigma: Any, eta: Any, model: MbsModel) -> bool:
    """
    Whether e is maximal in the intersection of the histories of sigma and eta.

    Raises:
        DomainError: If sigma equals eta or e lies outside the overlap of the pair
        UnsupportedError: For declared limits off the embedded plane
    """
    sigma, eta = model.scenario(sigma), model.scenario(eta)
    if sigma == eta:
        raise DomainError("Choice points need two different scenarios")
    family = model.family
    if not (family.holds(sigma, e.scenario_class) and family.holds(eta, e.scenario_class)):
        raise DomainError(f"Event at {e.location} is not shared by {sigma} and {eta}")
    x = e.location
    if not in_overlap(x, sigma, eta, model):
        raise DomainError(f"{x} lies outside the overlap of {sigma} and {eta}")
    if model.splitting.contains_point(x, sigma, eta):
        return True
    declarations = model.splitting.limits(sigma, eta)
    if not declarations:
        return False
    return _blocked_limit(x, declarations)
