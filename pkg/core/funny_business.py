#!/usr/bin/env python3
"""
Funny-business detectors.

Every intersection of outcomes is reduced to a predicate of the history
family and decided by its oracle. Detectors return FbVerdicts whose
certificates carry the clauses they checked, so `recheck` can confirm a
verdict without repeating the search.
"""

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from config.settings import (
    DEFAULT_DELTAS, DEFAULT_JOBS, MAX_FINFB_POINTS, MAX_PRODUCT_FUNCTIONS, SAMPLE_LIMIT
)
from core.descriptors import IndexSet
from core.errors import DomainError, UnsupportedError
from core.families import BitRule, Predicate
from core.geometry import format_rational, to_rational
from core.mbs_model import IndexedSplitting
from core.transitions import PointStructure, SymbolicPointFamily, TransitionSet

logger = logging.getLogger(__name__)


class FbKind(Enum):
    NONE = "NONE"
    FINFB = "FINFB"
    INFFB = "INFFB"
    CFB = "CFB"
    EPSFB = "EPSFB"


@dataclass
class FbVerdict:
    """A detector's answer together with the certificate backing it."""

    kind: FbKind
    certificate: Dict[str, Any]
    summary: str
    witness: Any = field(default=None, compare=False)

    @property
    def found(self) -> bool:
        return self.kind is not FbKind.NONE

    def to_dict(self) -> Dict[str, Any]:
        return {"verdict": self.kind.value, **self.certificate}


@dataclass
class PostulateVerdict:
    postulate: str
    holds: bool
    certificate: Dict[str, Any]
    summary: str

    def to_dict(self) -> Dict[str, Any]:
        return {"postulate": self.postulate, "holds": self.holds, **self.certificate}


@dataclass(frozen=True)
class SplitWitness:
    """Two space-like related parts whose outcomes are separately but not jointly possible."""

    first: Tuple[str, ...]
    second: Tuple[str, ...]


@dataclass
class BelnapWitness:
    first: Tuple[str, ...]
    second: Tuple[str, ...]
    first_history: Any
    second_history: Any
    certificate: Dict[str, Any]


Subject = Union[TransitionSet, SymbolicPointFamily]


def _labels(T: TransitionSet, points: Iterable[str]) -> List[str]:
    return [T.structure.describe_point(p) for p in points]


def _outcome_table(T: TransitionSet) -> Dict[str, str]:
    family = T.family
    return {p: family.format_predicate(T.outcome(p)) for p in T.points}


def _format_witness(family, predicate) -> Optional[str]:
    label = family.witness(predicate)
    return None if label is None else family.format_label(label)


# --- FINFB ------------------------------------------------------------------

class _SplitSearch:
    """Subset-pair search over the points of one transition set."""

    def __init__(self, T: TransitionSet, prune: bool):
        self.T = T
        self.prune = prune
        self.points = T.points
        self.family = T.family
        self.outcomes = [T.outcome(p) for p in self.points]
        structure = T.structure
        n = len(self.points)
        self.slr_mask = [sum(1 << j for j in range(n)
                             if j != i and structure.slr(self.points[i], self.points[j]))
                         for i in range(n)]
        self._empty: Dict[int, bool] = {}

    def members(self, mask: int) -> List[int]:
        return [i for i in range(len(self.points)) if mask >> i & 1]

    def meet(self, mask: int) -> Predicate:
        return self.family.meet_all(self.outcomes[i] for i in self.members(mask))

    def is_empty(self, mask: int) -> bool:
        if not self.prune:
            return self.family.is_empty(self.meet(mask))
        if mask not in self._empty:
            self._empty[mask] = self.family.is_empty(self.meet(mask))
        return self._empty[mask]

    def separated(self, first: int, second: int) -> bool:
        return all(self.slr_mask[i] & second == second for i in self.members(first))

    def witness_in(self, union: Tuple[int, ...]) -> Optional[Tuple[int, int]]:
        mask = sum(1 << i for i in union)
        if self.prune and not self.is_empty(mask):
            return None
        head, rest = union[0], union[1:]
        for k in range(len(rest)):
            for chosen in itertools.combinations(rest, k):
                first = (1 << head) | sum(1 << i for i in chosen)
                second = mask & ~first
                if not self.separated(first, second):
                    continue
                if self.is_empty(first) or self.is_empty(second):
                    continue
                if self.prune or self.is_empty(mask):
                    return first, second
        return None

    def first_in(self, unions: Sequence[Tuple[int, ...]]) -> Optional[Tuple[int, int]]:
        for union in unions:
            found = self.witness_in(union)
            if found is not None:
                return found
        return None

    def search(self, jobs: int) -> Optional[Tuple[int, int]]:
        n = len(self.points)
        for size in range(2, n + 1):
            unions = list(itertools.combinations(range(n), size))
            if jobs <= 1 or len(unions) < 2 * jobs:
                found = self.first_in(unions)
            else:
                width = -(-len(unions) // jobs)
                chunks = [unions[i:i + width] for i in range(0, len(unions), width)]
                with ThreadPoolExecutor(max_workers=jobs) as pool:
                    results = list(pool.map(self.first_in, chunks))
                found = next((r for r in results if r is not None), None)
            logger.debug(f"FINFB search: unions of size {size} done")
            if found is not None:
                return found
        return None


def verify_split_witness(T: TransitionSet, witness: SplitWitness) -> Dict[str, Any]:
    """Re-derive the clauses of a FINFB witness directly from the structure and the oracle."""
    structure, family = T.structure, T.family
    first, second = list(witness.first), list(witness.second)
    meet_first, meet_second = T.meet(first), T.meet(second)
    union = T.meet(first + second)
    separated = all(structure.slr(a, b) for a in first for b in second)
    return {
        "parts_slr": separated,
        "first_intersection": family.format_predicate(meet_first),
        "first_witness": _format_witness(family, meet_first),
        "second_intersection": family.format_predicate(meet_second),
        "second_witness": _format_witness(family, meet_second),
        "union_empty": family.is_empty(union),
        "holds": (separated and not family.is_empty(meet_first)
                  and not family.is_empty(meet_second) and family.is_empty(union)),
    }


def check_finfb(T: TransitionSet, prune: bool = True, jobs: int = DEFAULT_JOBS) -> FbVerdict:
    """
    Search two space-like related parts of T with jointly impossible outcomes.

    Unions are tried by ascending size, then lexicographically; the first
    part always holds the union's smallest point, so the first witness found
    is minimal and does not depend on `jobs`.

    Args:
        T: Finite transition set
        prune: Cache emptiness and skip unions whose intersection is nonempty
        jobs: Worker threads for each union size

    Raises:
        UnsupportedError: If T has more than MAX_FINFB_POINTS points
    """
    points = T.points
    if len(points) > MAX_FINFB_POINTS:
        raise UnsupportedError(f"FINFB search is limited to {MAX_FINFB_POINTS} points")
    family = T.family
    certificate: Dict[str, Any] = {
        "detector": "finfb",
        "transition_set": T.name,
        "points": _labels(T, points),
        "outcomes": _outcome_table(T),
        "search": "exhaustive over part pairs, ascending size" + (", pruned" if prune else ""),
    }
    search = _SplitSearch(T, prune)
    whole = T.meet(points)
    if prune and not family.is_empty(whole):
        certificate["whole_set_witness"] = _format_witness(family, whole)
        summary = (f"No finitary funny business in {T.name}: every outcome holds together "
                   f"in {certificate['whole_set_witness']}")
        logger.info(summary)
        return FbVerdict(FbKind.NONE, certificate, summary)
    found = search.search(jobs)
    if found is None:
        summary = f"No finitary funny business in {T.name}"
        logger.info(summary)
        return FbVerdict(FbKind.NONE, certificate, summary)
    witness = SplitWitness(tuple(points[i] for i in search.members(found[0])),
                           tuple(points[i] for i in search.members(found[1])))
    certificate["A1"] = list(witness.first)
    certificate["A2"] = list(witness.second)
    certificate["clauses"] = verify_split_witness(T, witness)
    summary = (f"Finitary funny business in {T.name}: {{{', '.join(witness.first)}}} and "
               f"{{{', '.join(witness.second)}}} are space-like related and separately "
               f"possible, but not jointly")
    logger.info(summary)
    return FbVerdict(FbKind.FINFB, certificate, summary, witness)


def product_functions(structure: PointStructure,
                      points: Optional[Sequence[str]] = None) -> Iterable[TransitionSet]:
    """
    Every product function over the points, in lexicographic order of possibilities.

    Raises:
        UnsupportedError: If there are more than MAX_PRODUCT_FUNCTIONS of them
    """
    points = list(points if points is not None else structure.points())
    cells = [structure.possibilities(p) for p in points]
    total = 1
    for options in cells:
        total *= len(options)
    if total > MAX_PRODUCT_FUNCTIONS:
        raise UnsupportedError(f"{total} product functions exceed {MAX_PRODUCT_FUNCTIONS}")
    for k, choice in enumerate(itertools.product(*cells)):
        yield TransitionSet(structure, list(zip(points, choice)), f"{structure.name}#f{k}")


def find_finfb(structure: PointStructure, points: Optional[Sequence[str]] = None,
               prune: bool = True) -> FbVerdict:
    """FINFB for some product function over the points (all points by default)."""
    count = 0
    for T in product_functions(structure, points):
        count += 1
        verdict = check_finfb(T, prune)
        if verdict.found:
            verdict.certificate["product_function"] = verdict.certificate["outcomes"]
            return verdict
    points = list(points if points is not None else structure.points())
    certificate = {"detector": "finfb", "points": points, "product_functions": count,
                   "search": "every product function, exhaustive over part pairs"}
    summary = f"No product function over {len(points)} point(s) of {structure.name} gives FINFB"
    return FbVerdict(FbKind.NONE, certificate, summary)


# --- INFFB ------------------------------------------------------------------

def _sampled_conjunctions(S: SymbolicPointFamily, rule: BitRule) -> List[Dict[str, Any]]:
    samples = []
    indices = S.indices(SAMPLE_LIMIT)
    for k in range(1, len(indices) + 1):
        chosen = IndexSet(frozenset(indices[:k]))
        samples.append({"size": k,
                        "satisfiable": not S.family.is_empty(S.outcomes_over(chosen, rule))})
    return samples


def _check_rule_fits(S: SymbolicPointFamily, rule: BitRule):
    if S.history_rule is None:
        return
    clash = IndexedSplitting.differing(rule, S.history_rule).intersection(S.index_range())
    if not clash.is_empty:
        raise DomainError(f"Outcome rule {rule} leaves the histories of {S.name} at {clash}")


def check_inffb(S: Subject, rule: Optional[BitRule] = None) -> FbVerdict:
    """
    Evaluate the four INFFB clauses.

    For a symbolic point family clause (2) is decided from the family kind
    and spot-checked on the first SAMPLE_LIMIT members; clause (3) holds
    vacuously for pairwise SLR points. A finite transition set fails
    clause (1) but its other clauses are still reported.

    Raises:
        DomainError: If the symbolic points are not pairwise SLR, or rule leaves their histories
    """
    if isinstance(S, TransitionSet):
        return _check_inffb_finite(S)
    if rule is None:
        raise DomainError("A symbolic INFFB check needs an outcome rule")
    if not S.is_pairwise_slr():
        raise DomainError(f"Points of {S.name} are not pairwise SLR")
    _check_rule_fits(S, rule)
    family = S.family
    infinite = S.is_infinite
    symbolic_ok, counter = family.finite_conjunctions_satisfiable(rule, S.start, S.stop)
    cohistorical = True
    if S.history_rule is not None:
        cohistorical, _ = family.finite_conjunctions_satisfiable(S.history_rule, S.start, S.stop)
    samples = _sampled_conjunctions(S, rule)
    finite_ok = symbolic_ok and cohistorical and all(s["satisfiable"] for s in samples)
    full = S.full_outcome(rule)
    full_witness = family.witness(full)
    clauses = {
        "1_infinite": infinite,
        "2_finite_conjunctions": {
            "holds": finite_ok,
            "decided_by": family.describe(),
            "unsatisfiable_subset": counter,
            "points_cohistorical": cohistorical,
            "sampled": samples,
        },
        "3_monotone": {"holds": True, "reason": "pairwise SLR: no two points are ordered"},
        "4_empty": {
            "holds": full_witness is None,
            "constraint": family.format_predicate(full),
            "witness": None if full_witness is None else family.format_label(full_witness),
        },
    }
    found = infinite and finite_ok and full_witness is None
    certificate = {
        "detector": "inffb",
        "points": S.describe(),
        "rule": str(rule),
        "clauses": clauses,
        "reduced_set_time_bounded": S.time_bounded(),
    }
    if found:
        summary = (f"Infinitary funny business in {S.name}: every finite part of rule {rule} "
                   f"is possible, the whole of it is not")
    elif not finite_ok:
        summary = f"No INFFB in {S.name}: some finite part of rule {rule} is already impossible"
    elif full_witness is not None:
        summary = (f"No INFFB in {S.name}: history {family.format_label(full_witness)} "
                   f"realizes rule {rule}")
    else:
        summary = f"No INFFB in {S.name}: the point set is finite"
    logger.info(summary)
    return FbVerdict(FbKind.INFFB if found else FbKind.NONE, certificate, summary)


def _check_inffb_finite(T: TransitionSet) -> FbVerdict:
    structure, family = T.structure, T.family
    points = T.points
    whole = T.meet(points)
    monotone_failures = [
        [p, q] for p in points for q in points
        if structure.lt(p, q) and not family.is_subset(T.outcome(q), T.outcome(p))
    ]
    clauses = {
        "1_infinite": False,
        "2_finite_conjunctions": {"holds": not family.is_empty(whole),
                                  "points_cohistorical": structure.cohistorical(points)},
        "3_monotone": {"holds": not monotone_failures, "failures": monotone_failures},
        "4_empty": {"holds": family.is_empty(whole),
                    "constraint": family.format_predicate(whole)},
    }
    certificate = {"detector": "inffb", "points": _labels(T, points),
                   "outcomes": _outcome_table(T), "clauses": clauses}
    summary = f"No INFFB in {T.name}: the point set is finite"
    logger.info(summary)
    return FbVerdict(FbKind.NONE, certificate, summary)


# --- combinatorial FB -------------------------------------------------------

def check_combinatorial_fb(S: Subject, rule: Optional[BitRule] = None) -> FbVerdict:
    """
    Combinatorial consistency of a transition set plus emptiness of its joint outcome.

    For two transitions (e_i, H_i), (e_j, H_j): equal points need equal
    outcomes; e_i < e_j needs H(e_j) inside H_i (and symmetrically); other
    pairs must be SLR.
    """
    if isinstance(S, SymbolicPointFamily):
        return _check_cfb_symbolic(S, rule)
    T = S
    structure, family = T.structure, T.family
    violations = []
    for (i, (p, a)), (j, (q, b)) in itertools.combinations(enumerate(T.transitions), 2):
        if p == q:
            if not structure.same_predicate(a, b):
                violations.append({"condition": 1, "transitions": [i, j],
                                   "detail": f"two outcomes at {p}"})
        elif structure.lt(p, q):
            if not family.is_subset(structure.history_set(q), a):
                violations.append({"condition": 2, "transitions": [i, j],
                                   "detail": f"histories through {q} leave the outcome at {p}"})
        elif structure.lt(q, p):
            if not family.is_subset(structure.history_set(p), b):
                violations.append({"condition": 3, "transitions": [i, j],
                                   "detail": f"histories through {p} leave the outcome at {q}"})
        elif not structure.slr(p, q):
            violations.append({"condition": 4, "transitions": [i, j],
                               "detail": f"{p} and {q} share no history"})
    joint = family.meet_all(o for _, o in T.transitions)
    joint_witness = family.witness(joint)
    consistent = not violations
    found = consistent and joint_witness is None
    certificate = {
        "detector": "cfb",
        "transitions": T.to_dict()["transitions"],
        "consistent": consistent,
        "violations": violations,
        "joint_outcome": family.format_predicate(joint),
        "joint_witness": None if joint_witness is None else family.format_label(joint_witness),
    }
    if found:
        summary = f"Combinatorial funny business in {T.name}: consistent, yet no common history"
    elif not consistent:
        summary = f"No CFB in {T.name}: not combinatorially consistent ({len(violations)} violation(s))"
    else:
        summary = f"No CFB in {T.name}: history {certificate['joint_witness']} realizes every transition"
    logger.info(summary)
    return FbVerdict(FbKind.CFB if found else FbKind.NONE, certificate, summary)


def _check_cfb_symbolic(S: SymbolicPointFamily, rule: Optional[BitRule]) -> FbVerdict:
    if rule is None:
        raise DomainError("A symbolic CFB check needs an outcome rule")
    _check_rule_fits(S, rule)
    family = S.family
    slr = S.is_pairwise_slr()
    cohistorical = True
    if S.history_rule is not None:
        cohistorical, _ = family.finite_conjunctions_satisfiable(S.history_rule, S.start, S.stop)
    joint = S.full_outcome(rule)
    joint_witness = family.witness(joint)
    consistent = slr and cohistorical
    found = consistent and joint_witness is None
    certificate = {
        "detector": "cfb",
        "points": S.describe(),
        "rule": str(rule),
        "consistent": consistent,
        "conditions": {"1-3": "vacuous: one transition per point, no two points ordered",
                       "4_pairwise_slr": slr, "4_pairs_cohistorical": cohistorical},
        "joint_outcome": family.format_predicate(joint),
        "joint_witness": None if joint_witness is None else family.format_label(joint_witness),
    }
    if found:
        summary = f"Combinatorial funny business in {S.name} under rule {rule}"
    else:
        summary = f"No CFB in {S.name} under rule {rule}"
    logger.info(summary)
    return FbVerdict(FbKind.CFB if found else FbKind.NONE, certificate, summary)


# --- Belnap-style witnesses -------------------------------------------------

def belnap_witness(T: TransitionSet, free: bool = False) -> Optional[BelnapWitness]:
    """
    Initial events A SLR B with histories h_A, h_B whose possibilities at A and B exclude each other.

    Args:
        T: Finite transition set
        free: Quantify over every history through A and B (finite families)
              instead of the histories realizing T's outcomes
    """
    structure, family = T.structure, T.family
    points = T.points

    def histories(part: List[str]) -> List[Any]:
        if free:
            through = family.meet_all(structure.history_set(p) for p in part)
            return [h for h in family.labels() if family.holds(h, through)]
        label = family.witness(T.meet(part))
        return [] if label is None else [label]

    def possibility(part: List[str], h: Any) -> Predicate:
        return family.meet_all(structure.cell_of(p, h) for p in part)

    for size in range(2, len(points) + 1):
        for union in itertools.combinations(points, size):
            head, rest = union[0], union[1:]
            for k in range(len(rest)):
                for chosen in itertools.combinations(rest, k):
                    first = [head, *chosen]
                    second = [p for p in rest if p not in chosen]
                    if not all(structure.slr(a, b) for a in first for b in second):
                        continue
                    for h_a in histories(first):
                        for h_b in histories(second):
                            joint = family.meet(possibility(first, h_a), possibility(second, h_b))
                            if family.is_empty(joint):
                                certificate = {
                                    "A": first, "B": second,
                                    "h_A": family.format_label(h_a),
                                    "h_B": family.format_label(h_b),
                                    "possibility_A": family.format_predicate(possibility(first, h_a)),
                                    "possibility_B": family.format_predicate(possibility(second, h_b)),
                                    "joint": "empty",
                                }
                                return BelnapWitness(tuple(first), tuple(second), h_a, h_b,
                                                     certificate)
    return None


# --- epsilon FB -------------------------------------------------------------

def _delta_values(deltas: Optional[Sequence[Any]]) -> List:
    values = sorted({to_rational(d) for d in (deltas or DEFAULT_DELTAS)}, reverse=True)
    if any(d <= 0 for d in values):
        raise DomainError("Neighbourhood radii must be positive")
    return values


def check_eps_fb(S: Subject, rule: Optional[BitRule] = None,
                 deltas: Optional[Sequence[Any]] = None) -> FbVerdict:
    """
    Look for a reduced-set point all of whose neighbourhoods carry jointly impossible outcomes.

    Candidates are the declared accumulation points and the descriptor's own
    limit. A candidate is decided symbolically from the cofinite tail its
    neighbourhoods share; the sampled radii are reported as a trace.

    Raises:
        UnsupportedError: If a symbolic family has no reduced-set descriptor,
            or its members accumulate without a known limit
    """
    values = _delta_values(deltas)
    if isinstance(S, TransitionSet):
        locations = sorted({S.structure.location(p) for p in S.points} - {None})
        certificate = {"detector": "epsfb", "reduced_set": [p.to_text() for p in locations],
                       "isolated": True,
                       "reason": "finite reduced set: a small enough neighbourhood holds one point"}
        summary = f"No epsilon funny business in {S.name}: its reduced set is finite"
        logger.info(summary)
        return FbVerdict(FbKind.NONE, certificate, summary)
    if rule is None:
        raise DomainError("A symbolic epsilon-FB check needs an outcome rule")
    if S.sequence is None:
        raise UnsupportedError(f"{S.name} has no reduced-set descriptor")
    _check_rule_fits(S, rule)
    sequence, family = S.sequence, S.family
    candidates = sorted(set(S.limits) | ({sequence.limit()} - {None}))
    certificate: Dict[str, Any] = {"detector": "epsfb", "points": S.describe(), "rule": str(rule)}
    if not candidates:
        gap = sequence.min_gap_sq() if sequence.is_infinite else None
        if sequence.is_infinite and (gap is None or gap <= 0):
            raise UnsupportedError(f"Members of {S.name} accumulate without a declared limit")
        certificate["isolated"] = True
        certificate["min_gap_sq"] = None if gap is None else format_rational(gap)
        summary = f"No epsilon funny business in {S.name}: every reduced-set point is isolated"
        logger.info(summary)
        return FbVerdict(FbKind.NONE, certificate, summary)
    decisions = []
    found_at = None
    for e_star in candidates:
        member = sequence.index_of(e_star)
        trace = []
        for delta in values:
            near = sequence.indices_near(e_star, delta * delta).intersection(S.index_range())
            meet = S.outcomes_over(near, rule)
            trace.append({"delta": format_rational(delta), "neighbourhood": str(near),
                          "intersection_empty": family.is_empty(meet)})
        smallest = sequence.indices_near(e_star, values[-1] ** 2).intersection(S.index_range())
        decision: Dict[str, Any] = {"e_star": e_star.to_text(), "member_index": member,
                                    "trace": trace}
        if smallest.tail_from is None:
            decision["mode"] = "isolated: small neighbourhoods are finite"
            decision["all_neighbourhoods_empty"] = False
        else:
            horizon = max(smallest.tail_from, rule.prefix_length,
                          0 if member is None else member + 1,
                          0 if S.history_rule is None else S.history_rule.prefix_length)
            core = IndexSet(frozenset() if member is None else frozenset([member]), horizon)
            empty = family.is_empty(S.outcomes_over(core, rule))
            decision["mode"] = "symbolic: every neighbourhood contains the tail"
            decision["tail_from"] = horizon
            decision["all_neighbourhoods_empty"] = empty
            if empty and found_at is None:
                found_at = e_star
        decisions.append(decision)
    certificate["candidates"] = decisions
    if found_at is not None:
        certificate["e_star"] = found_at.to_text()
        summary = (f"Epsilon funny business in {S.name} at {found_at}: every neighbourhood "
                   f"has jointly impossible outcomes under rule {rule}")
        kind = FbKind.EPSFB
    else:
        summary = f"No epsilon funny business in {S.name} under rule {rule}"
        kind = FbKind.NONE
    logger.info(summary)
    return FbVerdict(kind, certificate, summary, found_at)


# --- Postulates -------------------------------------------------------------

def postulate_a_function(T: TransitionSet,
                         candidates: Optional[Sequence[str]] = None) -> Dict[str, Optional[Tuple[Any, str]]]:
    """
    For each point e of T, a pair (h, x) with x > e, x in h, h in f(e) and every e'
    with h outside f(e') SLR to x; None where no such pair exists.

    x ranges over the candidate points (default: every point of the structure).
    """
    structure, family = T.structure, T.family
    xs = list(candidates if candidates is not None else structure.points())
    result: Dict[str, Optional[Tuple[Any, str]]] = {}
    for e in T.points:
        result[e] = None
        for x in xs:
            if not structure.lt(e, x):
                continue
            for h in family.labels():
                if not (family.holds(h, structure.history_set(x)) and family.holds(h, T.outcome(e))):
                    continue
                if all(family.holds(h, T.outcome(e1)) or structure.slr(e1, x) for e1 in T.points):
                    result[e] = (h, x)
                    break
            if result[e] is not None:
                break
    return result


def check_postulate_A(S: Subject, rule: Optional[BitRule] = None,
                      candidates: Optional[Sequence[str]] = None,
                      deltas: Optional[Sequence[Any]] = None) -> PostulateVerdict:
    """
    Postulate A, through epsilon funny business for symbolic families of an MBS
    and by direct evaluation over the presented points for finite structures.

    Raises:
        UnsupportedError: For a symbolic family without reduced-set data
    """
    if isinstance(S, SymbolicPointFamily):
        if S.sequence is None:
            raise UnsupportedError(f"{S.name} has no reduced-set data; Postulate A undecided")
        eps = check_eps_fb(S, rule, deltas)
        holds = eps.kind is FbKind.EPSFB
        certificate = {"route": "equivalent to epsilon funny business in an MBS",
                       "epsilon_fb": eps.to_dict()}
        summary = f"Postulate A {'holds' if holds else 'fails'} for {S.name} under rule {rule}"
        logger.info(summary)
        return PostulateVerdict("A", holds, certificate, summary)
    T = S
    family = T.family
    function = postulate_a_function(T, candidates)
    formula_points = [e for e, value in function.items() if value is None]
    certificate = {
        "route": "direct evaluation; x ranges over the presented points only",
        "infinite": False,
        "formula_true_at": formula_points,
        "F": {e: None if value is None else {"history": family.format_label(value[0]),
                                             "x": value[1]}
              for e, value in function.items()},
    }
    summary = (f"Postulate A fails for {T.name}: the point set is finite"
               + (f"; the formula holds at {', '.join(formula_points)}" if formula_points
                  else "; F is defined everywhere"))
    logger.info(summary)
    return PostulateVerdict("A", False, certificate, summary)


def check_postulate_B(X: Union[SymbolicPointFamily, Tuple[PointStructure, Sequence[str]]]) -> PostulateVerdict:
    """
    Postulate B: every finite part of X lies in some history, X as a whole in none.

    X is a symbolic point family (its history rule fixes where each point
    lies) or a structure with a finite list of its points.
    """
    if isinstance(X, SymbolicPointFamily):
        family = X.family
        if X.history_rule is None:
            symbolic_ok = True
        else:
            symbolic_ok, _ = family.finite_conjunctions_satisfiable(X.history_rule, X.start, X.stop)
        indices = X.indices(SAMPLE_LIMIT)
        samples = [not family.is_empty(X.history_constraint(IndexSet(frozenset(indices[:k]))))
                   for k in range(1, len(indices) + 1)]
        part_a = symbolic_ok and all(samples)
        whole = X.history_constraint(X.index_range())
        part_b = family.is_empty(whole)
        certificate = {"points": X.describe(),
                       "a_finite_parts_in_a_history": {"holds": part_a,
                                                       "decided_by": family.describe(),
                                                       "sampled": samples},
                       "b_no_history_holds_all": {"holds": part_b,
                                                  "constraint": family.format_predicate(whole)},
                       "reduced_set_time_bounded": X.time_bounded()}
        name = X.name
    else:
        structure, points = X
        points = list(points)
        for p in points:
            structure.require_point(p)
        whole_in_one = structure.cohistorical(points)
        # a finite X is one of its own finite parts
        part_a = whole_in_one
        part_b = not whole_in_one
        certificate = {"points": points,
                       "a_finite_parts_in_a_history": {"holds": part_a},
                       "b_no_history_holds_all": {"holds": part_b}}
        name = structure.name
    holds = part_a and part_b
    summary = f"Postulate B {'holds' if holds else 'fails'} for {name}"
    logger.info(summary)
    return PostulateVerdict("B", holds, certificate, summary)


# --- re-verification --------------------------------------------------------

def recheck(verdict: FbVerdict, subject: Subject, rule: Optional[BitRule] = None) -> bool:
    """
    Confirm a verdict against its subject.

    FINFB witnesses are re-derived clause by clause; every other verdict is
    recomputed and compared.
    """
    detector = verdict.certificate.get("detector")
    if detector == "finfb":
        if verdict.kind is FbKind.FINFB:
            return verify_split_witness(subject, verdict.witness)["holds"]
        if "product_functions" in verdict.certificate:
            return not find_finfb(subject.structure, subject.points).found
        return not check_finfb(subject, prune=len(subject.points) > 8).found
    if detector == "inffb":
        return check_inffb(subject, rule).kind is verdict.kind
    if detector == "cfb":
        return check_combinatorial_fb(subject, rule).kind is verdict.kind
    if detector == "epsfb":
        return check_eps_fb(subject, rule).kind is verdict.kind
    raise DomainError(f"Unknown detector {detector!r}")
