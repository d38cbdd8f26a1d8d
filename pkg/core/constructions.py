#!/usr/bin/env python3
"""
Constructions built on top of the detectors: INFFB from a FINFB witness,
the cone-boundary localisation along a vertical line, the minimum-gap chain
construction and cause-like loci.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from config.settings import CHAIN_STEPS, DEFAULT_DELTAS
from core.descriptors import ConeSequence, IndexSet
from core.errors import DomainError, UnsupportedError
from core.families import BitRule, Predicate
from core.geometry import (
    Point4, QuadraticSurd, format_rational, lt_M, to_rational, up, vertical_threshold
)
from core.mbs_model import MbsModel, event_class
from core.funny_business import (
    FbKind, FbVerdict, SplitWitness, check_inffb, find_finfb, verify_split_witness
)
from core.transitions import MbsStructure, PointStructure, SymbolicPointFamily, TransitionSet

logger = logging.getLogger(__name__)


# --- INFFB from FINFB ---------------------------------------------------------

@dataclass
class Fin2InfRegion:
    """
    Points of h_S not above any witness point, plus the witness points.

    The outcome at a point is f on the witness and the possibility of h_A,
    h_B or h_S elsewhere, in that order of precedence.
    """

    model: MbsModel
    h_S: Any
    h_A: Any
    h_B: Any
    first: Dict[str, Point4]
    second: Dict[str, Point4]
    outcomes: Dict[Point4, Predicate]

    @property
    def anchors(self) -> List[Point4]:
        return list(self.first.values()) + list(self.second.values())

    def contains(self, x: Point4) -> bool:
        anchors = self.anchors
        return x in anchors or not any(lt_M(a, x) for a in anchors)

    def assigned_history(self, x: Point4) -> Any:
        if any(lt_M(x, a) for a in self.first.values()):
            return self.h_A
        if any(lt_M(x, b) for b in self.second.values()):
            return self.h_B
        return self.h_S

    def describe(self) -> str:
        family = self.model.family
        return (f"{{x in h_{family.format_label(self.h_S)} : x not above any of "
                f"{', '.join(str(a) for a in self.anchors)}}}")


@dataclass
class Fin2InfResult:
    passthrough: bool
    rule: Optional[BitRule]
    certificate: Dict[str, Any]
    summary: str
    region: Optional[Fin2InfRegion] = None
    points: Optional[SymbolicPointFamily] = None

    @property
    def passes(self) -> bool:
        return all(c["holds"] for c in self.certificate["clauses"].values())

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.certificate)


def _region_samples(region: Fin2InfRegion, depth: int) -> List[Point4]:
    samples: List[Point4] = []
    for anchor in region.anchors:
        for k in range(depth + 1):
            for dx in (-k, 0, k):
                x = Point4(anchor.t - 2 * k, anchor.x1 + dx, anchor.x2, anchor.x3)
                if region.contains(x) and x not in samples:
                    samples.append(x)
    return samples


def construct_inffb_from_finfb(subject, verdict: Optional[FbVerdict] = None,
                               h_S: Any = None, rule: Optional[BitRule] = None,
                               depth: int = 3) -> Fin2InfResult:
    """
    Turn a FINFB witness into a case of INFFB.

    A symbolic (infinite) point family passes through with its rule. For a
    finite transition set over a model the new point set is the part of h_S
    that lies above no witness point; its clauses are checked on sample
    points of that region.

    Args:
        subject: TransitionSet over a model, or a SymbolicPointFamily
        verdict: FINFB verdict for the transition set
        h_S: Scenario containing every witness point (default: the first one found)
        rule: Outcome rule of a symbolic family
        depth: Sampling depth below and beside the witness points

    Raises:
        DomainError: If the witness does not re-verify or h_S misses a witness point
    """
    if isinstance(subject, SymbolicPointFamily):
        if rule is None:
            raise DomainError("A symbolic family passes through only with its outcome rule")
        inffb = check_inffb(subject, rule)
        certificate = {"construction": "fin2inf", "branch": "infinite witness: S' = S, f' = f",
                       "points": subject.describe(), "rule": str(rule),
                       "clauses": {name: {"holds": value if isinstance(value, bool) else value["holds"]}
                                   for name, value in inffb.certificate["clauses"].items()}}
        summary = f"{subject.name} is already infinite; it is kept with rule {rule}"
        return Fin2InfResult(True, rule, certificate, summary, points=subject)
    T: TransitionSet = subject
    if verdict is None or verdict.kind is not FbKind.FINFB:
        raise DomainError("The construction needs a FINFB verdict")
    witness: SplitWitness = verdict.witness
    if not verify_split_witness(T, witness)["holds"]:
        raise DomainError("FINFB witness does not re-verify")
    structure = T.structure
    if not isinstance(structure, MbsStructure):
        raise DomainError("The construction needs a transition set over a model")
    model, family = structure.model, structure.family
    parts = list(witness.first) + list(witness.second)
    through = family.meet_all(structure.history_set(p) for p in parts)
    if h_S is None:
        h_S = family.witness(through)
    else:
        h_S = model.scenario(h_S)
    if h_S is None or not family.holds(h_S, through):
        raise DomainError("No history contains every witness point")
    h_A = family.witness(T.meet(witness.first))
    h_B = family.witness(T.meet(witness.second))
    region = Fin2InfRegion(
        model, h_S, h_A, h_B,
        {p: structure.location(p) for p in witness.first},
        {p: structure.location(p) for p in witness.second},
        {structure.location(p): T.outcome(p) for p in parts})

    samples = _region_samples(region, depth)
    sample_structure = MbsStructure.from_locations(model, [(x, h_S) for x in samples])
    ids = sample_structure.points()
    assigned: Dict[str, Predicate] = {}
    for p in ids:
        x = sample_structure.location(p)
        if x in region.outcomes:
            assigned[p] = region.outcomes[x]
        else:
            assigned[p] = sample_structure.cell_of(p, region.assigned_history(x))
    monotone_failures = [[p, q] for p in ids for q in ids
                         if sample_structure.lt(p, q)
                         and not family.is_subset(assigned[q], assigned[p])]
    joint = family.meet_all(assigned.values())
    lowest = min(region.anchors, key=lambda a: a.t)
    common_future = up(*region.anchors[:2]) if len(region.anchors) >= 2 else None
    clauses = {
        "1_infinite": {"holds": all(region.contains(lowest.shifted(-k)) for k in range(1, depth + 2)),
                       "reason": f"every point x - k below {lowest} lies in the region",
                       "sampled_points": len(samples)},
        "2_finite_parts_in_a_history": {
            "holds": all(family.holds(h_S, sample_structure.history_set(p)) for p in ids),
            "history": family.format_label(h_S)},
        "3_monotone": {"holds": not monotone_failures, "failures": monotone_failures},
        "4_empty": {"holds": family.is_empty(joint),
                    "reason": "contains the witness, whose joint outcome is empty"},
    }
    certificate = {
        "construction": "fin2inf",
        "branch": "finite witness: region of h_S",
        "region": region.describe(),
        "excludes_common_future": (None if common_future is None
                                   else not region.contains(common_future.shifted(1))),
        "histories": {"h_S": family.format_label(h_S),
                      "h_A": family.format_label(h_A), "h_B": family.format_label(h_B)},
        "A": list(witness.first),
        "B": list(witness.second),
        "assignment": {p: family.format_predicate(o) for p, o in assigned.items()},
        "clauses": clauses,
    }
    result = Fin2InfResult(False, None, certificate, "", region=region)
    result.summary = (f"Region of h_{family.format_label(h_S)} below the common future of the "
                      f"witness: {'all four INFFB clauses hold' if result.passes else 'clause check failed'} "
                      f"on {len(ids)} sample point(s)")
    logger.info(result.summary)
    return result


# --- cone boundary -------------------------------------------------------------

class LocateCase(Enum):
    NO_FB = "NO_FB"
    CONE = "CONE"
    OUTER_LINING = "OUTER_LINING"


@dataclass
class LocateResult:
    case: LocateCase
    shift: Optional[QuadraticSurd]
    point: Optional[Point4]
    certificate: Dict[str, Any]
    summary: str

    def to_dict(self) -> Dict[str, Any]:
        return {"case": self.case.value, **self.certificate}


def _shift_point(a_star: Point4, shift: QuadraticSurd) -> Optional[Point4]:
    return a_star.shifted(shift.base) if shift.is_rational else None


def _format_shift(shift: Optional[QuadraticSurd]) -> Optional[str]:
    return None if shift is None else str(shift)


def locate_cone_boundary(subject, a_star: Point4, rule: Optional[BitRule] = None,
                         deltas: Optional[Sequence[Any]] = None) -> LocateResult:
    """
    Walk up the vertical line above a_star while the points below it keep a common outcome.

    The set below a.shifted(s) changes only at the vertical thresholds of
    the members, so the walk visits those thresholds in ascending order.
    The first threshold where the joint outcome empties is a bad supremum
    (CONE); a good supremum followed only by bad points is OUTER_LINING.

    Raises:
        DomainError: If a_star is not in the reduced set
        UnsupportedError: If a symbolic family gives no handle on its tail
    """
    if isinstance(subject, SymbolicPointFamily):
        return _locate_symbolic(subject, a_star, rule, deltas)
    T: TransitionSet = subject
    structure, family = T.structure, T.family
    locations = {p: structure.location(p) for p in T.points}
    if a_star not in locations.values():
        raise DomainError(f"{a_star} is not in the reduced set of {T.name}")
    thresholds = sorted({vertical_threshold(a_star, x) for x in locations.values()})
    zero = QuadraticSurd(0)
    groups: List[Tuple[QuadraticSurd, List[str]]] = []
    initial = [p for p, x in locations.items() if vertical_threshold(a_star, x) <= zero]
    groups.append((zero, initial))
    for tau in thresholds:
        if tau > zero:
            groups.append((tau, [p for p, x in locations.items()
                                 if vertical_threshold(a_star, x) == tau]))
    walked: List[str] = []
    trace = []
    for tau, members in groups:
        walked.extend(members)
        meet = T.meet(walked)
        good = not family.is_empty(meet)
        trace.append({"shift": str(tau), "entering": members, "good": good})
        if not good:
            point = _shift_point(a_star, tau)
            certificate = {"a_star": a_star.to_text(), "shift": str(tau),
                           "x_star": None if point is None else point.to_text(),
                           "cone_set": members, "trace": trace}
            summary = (f"Funny business on the backward light cone of "
                       f"{point if point is not None else f'{a_star} shifted by {tau}'}")
            logger.info(summary)
            return LocateResult(LocateCase.CONE, tau, point, certificate, summary)
    certificate = {"a_star": a_star.to_text(), "trace": trace,
                   "history": _format_history(family, T.meet(walked))}
    summary = f"The whole vertical line above {a_star} is good: no funny business"
    logger.info(summary)
    return LocateResult(LocateCase.NO_FB, None, None, certificate, summary)


def _format_history(family, predicate) -> Optional[str]:
    label = family.witness(predicate)
    return None if label is None else family.format_label(label)


def _locate_symbolic(S: SymbolicPointFamily, a_star: Point4, rule: Optional[BitRule],
                     deltas: Optional[Sequence[Any]]) -> LocateResult:
    if rule is None:
        raise DomainError("Locating the cone boundary needs an outcome rule")
    sequence = S.sequence
    if sequence is None:
        raise UnsupportedError(f"{S.name} has no reduced-set descriptor")
    if sequence.index_of(a_star) is None:
        raise DomainError(f"{a_star} is not in the reduced set of {S.name}")
    family = S.family
    full = S.full_outcome(rule)
    base = {"a_star": a_star.to_text(), "points": S.describe(), "rule": str(rule)}
    if not family.is_empty(full):
        certificate = {**base, "history": _format_history(family, full)}
        summary = f"Every point above {a_star} is good: {certificate['history']} realizes rule {rule}"
        logger.info(summary)
        return LocateResult(LocateCase.NO_FB, None, None, certificate, summary)
    s_tail = sequence.cofinite_shift(a_star)
    if s_tail is None:
        raise UnsupportedError(f"{S.name} never puts a cofinite tail below the line above {a_star}")
    x_tail = a_star.shifted(s_tail)
    below = sequence.indices_below(x_tail).intersection(S.index_range())
    if not below.is_finite:
        raise UnsupportedError(f"{x_tail} already lies above infinitely many members")
    taus = sorted({vertical_threshold(a_star, sequence.point(n)) for n in below.finite})
    zero = QuadraticSurd(0)
    walked: List[int] = []
    trace = []
    for tau in [zero] + [t for t in taus if t > zero]:
        entering = sorted(n for n in below.finite
                          if n not in walked
                          and vertical_threshold(a_star, sequence.point(n)) <= tau)
        walked.extend(entering)
        good = not family.is_empty(S.outcomes_over(IndexSet(frozenset(walked)), rule))
        trace.append({"shift": str(tau), "entering": entering, "good": good})
        if not good:
            point = _shift_point(a_star, tau)
            certificate = {**base, "shift": str(tau),
                           "x_star": None if point is None else point.to_text(),
                           "cone_set": [S.point_id(n) for n in entering], "trace": trace}
            summary = f"Funny business on the backward light cone of {point or tau}"
            logger.info(summary)
            return LocateResult(LocateCase.CONE, tau, point, certificate, summary)
    horizon = max(rule.prefix_length, max(walked, default=S.start) + 1, S.start,
                  0 if S.history_rule is None else S.history_rule.prefix_length)
    tail_bad = family.is_empty(S.outcomes_over(IndexSet(frozenset(), horizon), rule))
    if not tail_bad:
        raise UnsupportedError(f"Tails of {S.name} stay jointly possible; the boundary is undecided")
    linings = []
    for delta in sorted({to_rational(d) for d in (deltas or DEFAULT_DELTAS)}, reverse=True):
        if delta <= 0:
            raise DomainError("Lining widths must be positive")
        inside = sequence.indices_below(x_tail.shifted(delta), strict=True)
        lining = inside.without(below.finite).intersection(S.index_range())
        linings.append({"delta": format_rational(delta), "lining": str(lining),
                        "intersection_empty": family.is_empty(S.outcomes_over(lining, rule))})
    shift = QuadraticSurd(s_tail)
    certificate = {**base, "shift": str(shift), "x_star": x_tail.to_text(), "trace": trace,
                   "beyond": {"tail_from": horizon, "intersection_empty": True,
                              "mode": "symbolic: every point above x_star lies above the tail"},
                   "linings": linings}
    summary = (f"{x_tail} is the last good point above {a_star}; every outer lining of its "
               f"backward light cone carries funny business")
    logger.info(summary)
    return LocateResult(LocateCase.OUTER_LINING, shift, x_tail, certificate, summary)


# --- minimum gap ---------------------------------------------------------------

@dataclass
class MinGapResult:
    posc_holds: bool
    verdict: Optional[FbVerdict]
    certificate: Dict[str, Any]
    summary: str

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.certificate)


def check_min_gap_no_inffb(S: SymbolicPointFamily, delta: Any, rule: BitRule,
                           steps: int = CHAIN_STEPS) -> MinGapResult:
    """
    Certify that shifting by delta keeps finite below-sets finite, then build the
    chain x_{k+1} = x_k + delta and the histories of its growing slabs.

    Raises:
        DomainError: If delta is not positive
        UnsupportedError: If S has no reduced-set descriptor
    """
    delta = to_rational(delta)
    if delta <= 0:
        raise DomainError(f"Shift must be positive, got {delta}")
    sequence = S.sequence
    if sequence is None:
        raise UnsupportedError(f"{S.name} has no reduced-set descriptor")
    family = S.family
    counterexample = sequence.posc_counterexample(delta)
    certificate: Dict[str, Any] = {"points": S.describe(), "delta": format_rational(delta),
                                   "rule": str(rule)}
    if counterexample is not None:
        certificate["posc"] = {
            "holds": False, "counterexample": counterexample.to_text(),
            "detail": (f"{counterexample} lies above finitely many members, "
                       f"{counterexample.shifted(delta)} above infinitely many")}
        summary = f"Shift condition fails for {S.name} at {counterexample}: no verdict"
        logger.info(summary)
        return MinGapResult(False, None, certificate, summary)
    certificate["posc"] = {"holds": True, "checked_by": sequence.describe()}
    x = sequence.point(S.start)
    seen: set = set()
    chain = []
    for k in range(steps if S.is_infinite else 1):
        below = sequence.indices_below(x).intersection(S.index_range())
        if not below.is_finite:
            raise UnsupportedError(f"{x} lies above infinitely many members of {S.name}")
        slab = sorted(below.finite - seen)
        seen |= below.finite
        h_k = family.witness(S.outcomes_over(IndexSet(frozenset(seen)), rule))
        step = {"x": x.to_text(), "slab": [S.point_id(n) for n in slab],
                "history": None if h_k is None else family.format_label(h_k)}
        if S.model is not None and h_k is not None:
            step["event"] = event_class(x, h_k, S.model).describe(family)
        chain.append(step)
        x = x.shifted(delta)
    certificate["chain"] = chain
    full = S.full_outcome(rule)
    witness = family.witness(full)
    certificate["containing_history"] = None if witness is None else family.format_label(witness)
    if witness is None:
        verdict = check_inffb(S, rule)
        summary = f"Shift condition holds for {S.name} but no history realizes rule {rule}"
    else:
        verdict = FbVerdict(FbKind.NONE, {"detector": "inffb", "points": S.describe(),
                                          "rule": str(rule),
                                          "containing_history": certificate["containing_history"]},
                            f"No INFFB in {S.name}: {certificate['containing_history']} "
                            f"contains every outcome")
        summary = (f"Shift condition holds for {S.name}; the chain ends in history "
                   f"{certificate['containing_history']}, so rule {rule} gives no INFFB")
    certificate["verdict"] = verdict.kind.value
    logger.info(summary)
    return MinGapResult(True, verdict, certificate, summary)


# --- cause-like loci -------------------------------------------------------------

@dataclass
class CauseLikeResult:
    point: str
    loci: List[str]
    finfb: FbVerdict
    all_below: Optional[bool]
    certificate: Dict[str, Any] = field(default_factory=dict)
    summary: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.certificate)


def cause_like_loci(x: str, structure: PointStructure) -> CauseLikeResult:
    """
    Points e where some history avoiding x splits at e from every history through x.

    When the points found together with x give no FINFB, each of them must
    lie strictly below x; the result records whether it does.
    """
    structure.require_point(x)
    family = structure.family
    labels = family.labels()
    through_x = [h for h in labels if family.holds(h, structure.history_set(x))]
    avoiding_x = [h for h in labels if h not in through_x]
    loci = []
    for e in structure.points():
        if e == x:
            continue
        through_e = structure.history_set(e)
        if not all(family.holds(h, through_e) for h in through_x):
            continue
        for h in avoiding_x:
            if not family.holds(h, through_e):
                continue
            cell = structure.cell_of(e, h)
            if all(not structure.same_predicate(cell, structure.cell_of(e, g)) for g in through_x):
                loci.append(e)
                break
    finfb = find_finfb(structure, loci + [x])
    all_below = None if finfb.found else all(structure.lt(e, x) for e in loci)
    certificate = {"point": x, "loci": loci,
                   "finfb": finfb.kind.value,
                   "all_below": all_below}
    if finfb.found:
        certificate["finfb_witness"] = {"A1": finfb.certificate["A1"], "A2": finfb.certificate["A2"]}
        summary = f"Cause-like loci of {x} give rise to FINFB; no location claim"
    elif all_below:
        summary = f"All {len(loci)} cause-like loci of {x} lie strictly below it"
    else:
        summary = f"Some cause-like locus of {x} is not below it"
    logger.info(summary)
    return CauseLikeResult(x, loci, finfb, all_below, certificate, summary)


# --- lifted point sets -----------------------------------------------------------

def lifted_x_set(S: SymbolicPointFamily, rule: BitRule, lift: Any = Fraction(1, 2),
                 name: str = "") -> SymbolicPointFamily:
    """
    Points moved up their cone generators by `lift`, each on the histories
    where rule fixes its bit.

    Raises:
        DomainError: If S is not wrapped around a light cone
    """
    if not isinstance(S.sequence, ConeSequence):
        raise DomainError(f"{S.name} is not wrapped around a light cone")
    sequence = ConeSequence(lift, S.sequence.start, S.sequence.stop)
    return SymbolicPointFamily.diagonal(name or f"{S.name}-X", S.family, rule, sequence,
                                        model=S.model)
