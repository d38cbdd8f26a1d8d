#!/usr/bin/env python3
"""
Catalog of concrete structures with their expected verdicts.

Each generator returns a CatalogInstance: a validated model (where the
structure is an MBS presentation), the symbolic point family carrying the
choice points, named outcome rules and transition sets, and any extra
point set the postulates need. Irrational coordinates are replaced by
exact rational surrogates that keep cone membership, separation and gaps.
"""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

import pandas as pd

from config.settings import SAMPLE_LIMIT, WRAPPED_MAX_INDEX
from core.constructions import (
    LocateCase, check_min_gap_no_inffb, construct_inffb_from_finfb, lifted_x_set,
    locate_cone_boundary
)
from core.descriptors import (
    ConcatSequence, ConeSequence, FinitePoints, HarmonicSequence, LinearSequence
)
from core.errors import CatalogLookupError, DomainError, GenerationError, UnsupportedError
from core.families import (
    BinaryLabel, BitRule, ExplicitFamily, HistoryFamily, parse_family, parse_rule
)
from core.funny_business import (
    belnap_witness, check_combinatorial_fb, check_eps_fb, check_finfb, check_inffb,
    check_postulate_A, check_postulate_B
)
from core.geometry import Point4
from core.histories import (
    ExplicitChain, PrefixZeros, VerticalChain, chain_compactness_witness
)
from core.mbs_model import (
    ExplicitSplitting, IndexedSplitting, LimitDeclaration, MbsModel, event_class,
    generated_choice_points, is_choice_point, pair_key, validate
)
from core.transitions import (
    MbsStructure, SymbolicPointFamily, TransitionSet, transition_set_from_model
)

logger = logging.getLogger(__name__)

ZEROS = BinaryLabel.constant(0)
ONES = BinaryLabel.constant(1)


@dataclass
class CatalogInstance:
    """One generated structure with everything the detectors need."""

    name: str
    model: Optional[MbsModel]
    points: Optional[SymbolicPointFamily] = None
    rules: Dict[str, BitRule] = field(default_factory=dict)
    x_set: Optional[SymbolicPointFamily] = None
    structure: Optional[MbsStructure] = None
    note: str = ""

    @property
    def family(self) -> HistoryFamily:
        return self.model.family if self.model is not None else self.points.family

    def rule(self, text: str) -> BitRule:
        """A named rule of the instance, or a rule written out as a label."""
        if text in self.rules:
            return self.rules[text]
        try:
            return parse_rule(text)
        except (ValueError, DomainError):
            raise CatalogLookupError(text, self.rules, "rule")

    def transition_set(self, name: str) -> TransitionSet:
        """A named transition set of the model, or a rule over the first points."""
        if self.model is not None and name in self.model.transitions:
            return transition_set_from_model(self.model, name)
        if self.points is None:
            known = [] if self.model is None else list(self.model.transitions)
            raise CatalogLookupError(name, known, "transition set")
        return self.points.transition_set(self.rule(name), SAMPLE_LIMIT)


def _choice_transitions(points: List[Point4], scenarios: List[str], base: str) -> Dict[str, list]:
    """Transition sets "t0,t1,..." where token t at point i picks a scenario whose i-th character is t."""
    tokens = sorted({s[i] for s in scenarios for i in range(len(points))}, reverse=True)
    result: Dict[str, list] = {}

    def build(prefix: List[str]):
        if len(prefix) == len(points):
            entries = []
            for i, token in enumerate(prefix):
                outcome = next(s for s in scenarios if s[i] == token)
                entries.append((points[i], base, outcome))
            result[",".join(prefix)] = entries
            return
        for token in tokens:
            build(prefix + [token])

    build([])
    return result


# --- generators -------------------------------------------------------------

def gen_epr_bohm() -> CatalogInstance:
    """Two space-like measurements whose equal results never occur together."""
    scenarios = ["+-", "-+"]
    e1, e2 = Point4(0, -1), Point4(0, 1)
    model = MbsModel(
        "epr-bohm", ExplicitFamily(scenarios),
        ExplicitSplitting({pair_key("+-", "-+"): [e1, e2]}),
        annotations={"note": "spin measurements; only opposite results are possible"})
    model.transitions.update(_choice_transitions([e1, e2], scenarios, "+-"))
    structure = MbsStructure.from_locations(model, [(e1, "+-"), (e2, "+-")])
    return CatalogInstance("epr-bohm", model, structure=structure,
                           note="two measurements, histories +- and -+ only")


def gen_planted_epr(seed: int = 0) -> CatalogInstance:
    """Three scenarios: a common source splits s0 off, then an EPR pair splits the rest."""
    rng = random.Random(seed)
    offsets = [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2)]
    e1 = Point4(0, -rng.choice(offsets))
    e2 = Point4(0, rng.choice(offsets))
    source = Point4(-2, 0)
    scenarios = ["s0", "+-", "-+"]
    splitting = ExplicitSplitting({
        pair_key("s0", "+-"): [source],
        pair_key("s0", "-+"): [source],
        pair_key("+-", "-+"): [e1, e2],
    })
    model = MbsModel(f"planted-epr-{seed}", ExplicitFamily(scenarios), splitting,
                     annotations={"seed": seed})
    model.transitions.update(_choice_transitions([e1, e2], ["+-", "-+"], "+-"))
    structure = MbsStructure.from_locations(model, [(source, "s0"), (e1, "+-"), (e2, "+-")])
    return CatalogInstance(model.name, model, structure=structure,
                           note=f"EPR pair at {e1} and {e2} above a source at {source}")


def gen_random_model(seed: int = 0, scenarios: int = 3, points: int = 4) -> CatalogInstance:
    """
    A valid random explicit model.

    Point i sits at x = 3i with time 0 or 1; each scenario carries a distinct
    value vector in {0, 1, 2} and two scenarios split where their values differ.
    """
    if not 2 <= scenarios <= 5 or not 1 <= points <= 6:
        raise DomainError("Random models take 2-5 scenarios and 1-6 points")
    rng = random.Random(seed)
    locations = [Point4(rng.randint(0, 1), 3 * i) for i in range(points)]
    vectors: List[Tuple[int, ...]] = []
    while len(vectors) < scenarios:
        vector = tuple(rng.randint(0, 2) for _ in range(points))
        if vector not in vectors:
            vectors.append(vector)
    labels = [f"s{i}" for i in range(scenarios)]
    pairs = {}
    for i in range(scenarios):
        for j in range(i + 1, scenarios):
            pairs[pair_key(labels[i], labels[j])] = [
                x for x, a, b in zip(locations, vectors[i], vectors[j]) if a != b]
    model = MbsModel(f"random-{seed}", ExplicitFamily(labels), ExplicitSplitting(pairs),
                     annotations={"seed": seed, "values": {s: list(v) for s, v in zip(labels, vectors)}})
    return CatalogInstance(model.name, model, note=f"{scenarios} scenarios over {points} points")


def gen_random_structure(seed: int = 0, events: int = 3, scenarios: int = 3) -> CatalogInstance:
    """At most four event classes of a random model, at its splitting points or just above them."""
    if not 1 <= events <= 4:
        raise DomainError("Random structures take 1-4 events")
    rng = random.Random(seed)
    instance = gen_random_model(seed, scenarios, max(events, 2))
    model = instance.model
    labels = model.family.labels()
    items = []
    for x in model.splitting.all_points()[:events]:
        lift = rng.choice([Fraction(0), Fraction(1, 2)])
        items.append((x.shifted(lift), rng.choice(labels)))
    instance.structure = MbsStructure.from_locations(model, items)
    instance.note = f"{len(instance.structure.points())} event(s) of {model.name}"
    return instance


def gen_m2(n: Optional[int] = None, family: str = "finitely-many-zeros") -> CatalogInstance:
    """
    Order skeleton of M2: binary choice points <1, n> on one history set,
    and the set X of points <3/2, m> each on the histories with g(m) = 0.

    Args:
        n: Number of choice points; None gives the infinite family the
           INFFB and CFB verdicts of the catalog are stated for
        family: Scenario family name; a finite family also bounds the points

    Raises:
        DomainError: If n < 1
    """
    kind = parse_family(family)
    stop = n
    if n is not None and n < 1:
        raise DomainError("M2 needs at least one choice point")
    sequence = LinearSequence(Point4(1, 0), Point4(0, 1), 0, stop)
    x_sequence = LinearSequence(Point4(Fraction(3, 2), 0), Point4(0, 1), 0, stop)
    model = MbsModel("m2", kind, IndexedSplitting(sequence),
                     annotations={"note": "order skeleton; segments W0-W3 are not materialized",
                                  "rules": {"zeros": "zeros", "ones": "ones"}})
    points = SymbolicPointFamily("m2", kind, sequence, model=model)
    x_set = SymbolicPointFamily.diagonal("m2-X", kind, ZEROS, x_sequence, model=model)
    return CatalogInstance("m2", model, points, {"zeros": ZEROS, "ones": ONES}, x_set,
                           note=f"choice points <1, n> over {kind.describe()}")


def gen_imptop(n: int = 4, family: str = "finitely-many-zeros") -> CatalogInstance:
    """Splitting points (0, k) and the chain z_i = (i - 1/2, 0) labelled with i leading zeros."""
    if n < 2:
        raise DomainError("imptop needs n >= 2")
    kind = parse_family(family)
    stop = getattr(kind, "n", None)
    sequence = LinearSequence(Point4(0, 0), Point4(0, 1), 0, stop)
    chain = VerticalChain(Point4(0, 0), Fraction(-1, 2), 1, 1, PrefixZeros(), "z")
    model = MbsModel("imptop", kind, IndexedSplitting(sequence, sample_count=n),
                     annotations={"note": "chain below all splitting points from the side"},
                     chains={"z": chain})
    points = SymbolicPointFamily("imptop", kind, sequence, model=model)
    return CatalogInstance("imptop", model, points, {"zeros": ZEROS, "ones": ONES},
                           note=f"chain z over {kind.describe()}")


def gen_lw1(n: int = 5) -> CatalogInstance:
    """Two scenarios split at (0, +-1/k); both tails converge to the origin, which is a non-generated choice point."""
    if n < 2:
        raise DomainError("lw1 needs n >= 2")
    right = [Point4(0, Fraction(1, k)) for k in range(1, n + 1)]
    left = [Point4(0, Fraction(-1, k)) for k in range(1, n + 1)]
    origin = Point4.origin()
    limits = [LimitDeclaration(origin, HarmonicSequence(origin, Point4(0, 1), 0, n + 1)),
              LimitDeclaration(origin, HarmonicSequence(origin, Point4(0, -1), 0, n + 1))]
    key = pair_key("sigma", "eta")
    model = MbsModel("lw1", ExplicitFamily(["sigma", "eta"]),
                     ExplicitSplitting({key: right + left}, {key: limits}),
                     annotations={"note": "declared limits at the origin from both sides"})
    return CatalogInstance("lw1", model, note=f"{2 * n} samples converging to the origin")


def gen_wrapped(n: int = 16) -> CatalogInstance:
    """
    An M2-like family of choice points wrapped around the backward light cone of the origin.

    Raises:
        GenerationError: If the rational surrogates fail their exact checks
    """
    if not 2 <= n <= WRAPPED_MAX_INDEX:
        raise DomainError(f"wrapped needs 2 <= n <= {WRAPPED_MAX_INDEX}")
    sequence = ConeSequence()
    checks = sequence.verify(n)
    if not all(checks.values()):
        failed = [name for name, ok in checks.items() if not ok]
        raise GenerationError(f"Cone surrogate fails {', '.join(failed)} within {n} points")
    family = parse_family("finitely-many-zeros")
    axis = ExplicitChain(tuple((Point4(-Fraction(k, 2)), "(1)") for k in range(4, -1, -1)), "axis")
    model = MbsModel("wrapped", family, IndexedSplitting(sequence, sample_count=n),
                     annotations={"note": "rational directions on the unit circle",
                                  "rules": {"zeros": "zeros", "ones": "ones"},
                                  "verified": checks},
                     chains={"axis": axis})
    points = SymbolicPointFamily("wrapped", family, sequence, model=model)
    x_set = lifted_x_set(points, ZEROS, Fraction(1, 2), "wrapped-X")
    return CatalogInstance("wrapped", model, points, {"zeros": ZEROS, "ones": ONES}, x_set,
                           note=f"cone membership, separation and gaps verified on {n} points")


def gen_eps2d(n: int = 4) -> CatalogInstance:
    """
    Splitting points on t = 0 with x in (0, 1): the point 1/2, n - 1 points
    above it and a sequence converging to it from below. Outcome 1 at or above
    1/2, 0 below.
    """
    if n < 2:
        raise DomainError("eps2d needs n >= 2")
    half = Point4(0, Fraction(1, 2))
    upper = [Point4(0, Fraction(1, 2) + Fraction(1, 2 * k + 2)) for k in range(1, n)]
    finite = FinitePoints([half] + upper)
    tail = HarmonicSequence(half, Point4(0, Fraction(-1, 2)), n, 2)
    sequence = ConcatSequence([finite, tail])
    family = parse_family("finitely-many-zeros")
    rule = BinaryLabel.from_bits([1] * n, default=0)
    model = MbsModel("eps2d", family,
                     IndexedSplitting(sequence, [LimitDeclaration(half, tail)], sample_count=2 * n),
                     annotations={"note": "dense splitting approaching (0, 1/2)",
                                  "rules": {"f": rule.to_text(), "zeros": "zeros", "ones": "ones"}})
    points = SymbolicPointFamily("eps2d", family, sequence, limits=[half], model=model)
    return CatalogInstance("eps2d", model, points, {"f": rule, "zeros": ZEROS, "ones": ONES},
                           note="declared limit (0, 1/2)")


def gen_lattice(n: Optional[int] = None, family: str = "all-sequences") -> CatalogInstance:
    """Choice points e_n = (0, n, 0, 0)."""
    kind = parse_family(family)
    sequence = LinearSequence(Point4.origin(), Point4(0, 1), 0, n)
    model = MbsModel("lattice", kind, IndexedSplitting(sequence),
                     annotations={"rules": {"zeros": "zeros", "ones": "ones"}})
    points = SymbolicPointFamily("lattice", kind, sequence, model=model)
    return CatalogInstance("lattice", model, points, {"zeros": ZEROS, "ones": ONES},
                           note=f"unit lattice over {kind.describe()}")


def instance_from_model(model: MbsModel) -> CatalogInstance:
    """Detector view of a model read from a file; indexed models get their symbolic point family."""
    rules = {name: parse_rule(text)
             for name, text in model.annotations.get("rules", {}).items()}
    if not model.is_indexed:
        return CatalogInstance(model.name, model, rules=rules)
    splitting = model.splitting
    points = SymbolicPointFamily(model.name, model.family, splitting.sequence,
                                 limits=[d.limit for d in splitting.all_limits()], model=model)
    return CatalogInstance(model.name, model, points, rules)


# --- entries -----------------------------------------------------------------

def _valid(instance: CatalogInstance) -> str:
    return "valid" if validate(instance.model).is_valid else "invalid"


def _flag(value: bool) -> str:
    return "true" if value else "false"


@dataclass
class CatalogEntry:
    """A generator, its default parameters and the verdicts it must reproduce."""

    name: str
    generator: Callable[..., CatalogInstance]
    defaults: Dict[str, Any]
    checks: Dict[str, Callable[[CatalogInstance], str]]
    expected: Dict[str, str]
    provenance: str

    def generate(self, **params) -> CatalogInstance:
        """
        Run the generator with the defaults overridden by params.

        A parameter whose default is None takes an integer or None; any
        other parameter takes a value of its default's type. Integer
        literals given as strings are converted.

        Raises:
            DomainError: For an unknown parameter or a value of the wrong type
        """
        unknown = set(params) - set(self.defaults)
        if unknown:
            raise DomainError(f"Unknown parameter(s) for {self.name}: {', '.join(sorted(unknown))}")
        checked = {key: _coerce_param(self.name, key, value, self.defaults[key])
                   for key, value in params.items()}
        return self.generator(**{**self.defaults, **checked})


def _coerce_param(entry: str, key: str, value: Any, default: Any) -> Any:
    if default is None and value is None:
        return None
    expected = int if default is None else type(default)
    if expected is int and isinstance(value, str) and value.strip().lstrip("+-").isdigit():
        return int(value)
    if isinstance(value, bool) or not isinstance(value, expected):
        raise DomainError(f"Parameter {key} of {entry} takes {expected.__name__}, got {value!r}")
    return value


def _planted_fin2inf(instance: CatalogInstance) -> str:
    T = instance.transition_set("+,+")
    return _flag(construct_inffb_from_finfb(T, check_finfb(T)).passes)


def _wrapped_locate(instance: CatalogInstance) -> str:
    a_star = instance.points.sequence.point(0)
    return locate_cone_boundary(instance.points, a_star, ZEROS).case.value


def _lw1_generated(instance: CatalogInstance) -> str:
    events = generated_choice_points("sigma", "eta", instance.model)
    return _flag(Point4.origin() in [e.location for e in events])


def _lw1_choice(instance: CatalogInstance) -> str:
    model = instance.model
    return _flag(is_choice_point(event_class(Point4.origin(), "sigma", model), "sigma", "eta", model))


def _mingap(instance: CatalogInstance) -> str:
    result = check_min_gap_no_inffb(instance.points, Fraction(1, 2), ZEROS)
    return "posC fails" if not result.posc_holds else result.verdict.kind.value


CATALOG: Dict[str, CatalogEntry] = {
    "epr-bohm": CatalogEntry(
        "epr-bohm", gen_epr_bohm, {},
        {"validate": _valid,
         "finfb +,+": lambda i: check_finfb(i.transition_set("+,+")).kind.value,
         "finfb -,-": lambda i: check_finfb(i.transition_set("-,-")).kind.value,
         "finfb +,-": lambda i: check_finfb(i.transition_set("+,-")).kind.value,
         "cfb +,+": lambda i: check_combinatorial_fb(i.transition_set("+,+")).kind.value,
         "belnap +,+": lambda i: _flag(belnap_witness(i.transition_set("+,+")) is not None)},
        {"validate": "valid", "finfb +,+": "FINFB", "finfb -,-": "FINFB", "finfb +,-": "NONE",
         "cfb +,+": "CFB", "belnap +,+": "true"},
        "BST model of the EPR-Bohm experiment"),
    "planted-epr": CatalogEntry(
        "planted-epr", gen_planted_epr, {"seed": 0},
        {"validate": _valid,
         "finfb +,+": lambda i: check_finfb(i.transition_set("+,+")).kind.value,
         "fin2inf +,+": _planted_fin2inf},
        {"validate": "valid", "finfb +,+": "FINFB", "fin2inf +,+": "true"},
        "FINFB gives INFFB inside a history containing the witness"),
    "m2": CatalogEntry(
        "m2", gen_m2, {"n": None, "family": "finitely-many-zeros"},
        {"inffb zeros": lambda i: check_inffb(i.points, ZEROS).kind.value,
         "inffb ones": lambda i: check_inffb(i.points, ONES).kind.value,
         "cfb zeros": lambda i: check_combinatorial_fb(i.points, ZEROS).kind.value,
         "finfb zeros": lambda i: check_finfb(i.transition_set("zeros")).kind.value,
         "postulate-b X": lambda i: _flag(check_postulate_B(i.x_set).holds)},
        {"inffb zeros": "INFFB", "inffb ones": "NONE", "cfb zeros": "CFB",
         "finfb zeros": "NONE", "postulate-b X": "true"},
        "countable binary choice points with finitely many zeros"),
    "imptop": CatalogEntry(
        "imptop", gen_imptop, {"n": 4, "family": "finitely-many-zeros"},
        {"validate": _valid,
         "chain z": lambda i: _flag(chain_compactness_witness(
             None, i.model, i.model.chains["z"]).compact)},
        {"validate": "valid", "chain z": "false"},
        "chain topology is not compact"),
    "lw1": CatalogEntry(
        "lw1", gen_lw1, {"n": 5},
        {"validate": _valid, "choice point origin": _lw1_choice,
         "origin generated": _lw1_generated},
        {"validate": "valid", "choice point origin": "true", "origin generated": "false"},
        "choice point that is not generated by a splitting point"),
    "wrapped": CatalogEntry(
        "wrapped", gen_wrapped, {"n": 16},
        {"validate": _valid,
         "inffb zeros": lambda i: check_inffb(i.points, ZEROS).kind.value,
         "epsfb zeros": lambda i: check_eps_fb(i.points, ZEROS).kind.value,
         "postulate-a zeros": lambda i: _flag(check_postulate_A(i.points, ZEROS).holds),
         "postulate-b X": lambda i: _flag(check_postulate_B(i.x_set).holds),
         "locate zeros": _wrapped_locate,
         "mingap": _mingap},
        {"validate": "valid", "inffb zeros": "INFFB", "epsfb zeros": "NONE",
         "postulate-a zeros": "false", "postulate-b X": "true",
         "locate zeros": LocateCase.OUTER_LINING.value, "mingap": "posC fails"},
        "M2 wrapped around a backward light cone"),
    "eps2d": CatalogEntry(
        "eps2d", gen_eps2d, {"n": 4},
        {"validate": _valid,
         "epsfb f": lambda i: check_eps_fb(i.points, i.rules["f"]).kind.value,
         "postulate-a f": lambda i: _flag(check_postulate_A(i.points, i.rules["f"]).holds),
         "finfb f": lambda i: check_finfb(i.transition_set("f")).kind.value},
        {"validate": "valid", "epsfb f": "EPSFB", "postulate-a f": "true", "finfb f": "NONE"},
        "dense segment of splitting points in the plane"),
    "lattice": CatalogEntry(
        "lattice", gen_lattice, {"n": None, "family": "all-sequences"},
        {"validate": _valid, "mingap": _mingap},
        {"validate": "valid", "mingap": "NONE"},
        "points above finitely many members stay so under a time shift"),
}

RANDOM_ENTRY = "random"

# Generated on demand only; it has no fixed verdicts to reproduce.
RANDOM = CatalogEntry(RANDOM_ENTRY, gen_random_model, {"seed": 0, "scenarios": 3, "points": 4},
                      {}, {}, "randomized valid model")


def catalog_names() -> List[str]:
    return sorted(CATALOG) + [RANDOM_ENTRY]


def get_entry(name: str) -> CatalogEntry:
    if name not in CATALOG:
        raise CatalogLookupError(name, catalog_names())
    return CATALOG[name]


def generate(name: str, **params) -> CatalogInstance:
    """
    Generate a catalog instance by name.

    Raises:
        CatalogLookupError: For an unknown name, with the known names attached
    """
    if name == RANDOM_ENTRY:
        return RANDOM.generate(**params)
    return get_entry(name).generate(**params)


def check_entry(name: str, **params) -> List[Dict[str, Any]]:
    """Run an entry's checks; one row per check with expected and actual verdicts."""
    entry = get_entry(name)
    instance = entry.generate(**params)
    rows = []
    for check, run in entry.checks.items():
        try:
            actual = run(instance)
        except UnsupportedError as e:
            actual = f"unsupported: {e}"
        rows.append({"entry": name, "check": check, "expected": entry.expected[check],
                     "actual": actual, "passed": actual == entry.expected[check]})
        logger.debug(f"{name}/{check}: {actual}")
    return rows


def check_catalog(names: Optional[List[str]] = None) -> pd.DataFrame:
    """Verdict table for the given entries (default: all of them)."""
    rows = []
    for name in names or sorted(CATALOG):
        rows.extend(check_entry(name))
    table = pd.DataFrame(rows, columns=["entry", "check", "expected", "actual", "passed"])
    logger.info(f"Catalog check: {int(table['passed'].sum())} of {len(table)} verdicts reproduced")
    return table
