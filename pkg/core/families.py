#!/usr/bin/env python3
"""
Scenario families and their satisfiability oracles.

An explicit family is a finite list of opaque labels and its predicates are
frozensets of labels. The symbolic families are sets of binary sequences
g: N -> {0, 1}; their predicates are ConstraintSets (finitely many literals
g(n) = b plus optional constant tails), decided exactly from the family kind.
"""

import itertools
import logging
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from core.descriptors import IndexSet
from core.errors import DomainError, ModelParseError, UnknownScenarioError, UnsupportedError

logger = logging.getLogger(__name__)

_LABEL_PATTERN = re.compile(r"([01]*)\(([01])\)")
_FAMILY_PATTERN = re.compile(r"([a-z-]+)(?:\((\d+)\))?")

# labels of finite families are enumerated only up to this length
MAX_ENUMERATED_BITS = 16


@dataclass(frozen=True)
class BinaryLabel:
    """Eventually constant binary sequence: `default` everywhere except at `flips`."""

    flips: FrozenSet[int] = frozenset()
    default: int = 1

    def __post_init__(self):
        if self.default not in (0, 1):
            raise DomainError(f"Default bit must be 0 or 1, got {self.default}")
        flips = frozenset(self.flips)
        if any(n < 0 for n in flips):
            raise DomainError("Label indices start at 0")
        object.__setattr__(self, "flips", flips)

    @classmethod
    def constant(cls, bit: int) -> "BinaryLabel":
        return cls(frozenset(), bit)

    @classmethod
    def from_bits(cls, bits: Sequence[int], default: int = 1) -> "BinaryLabel":
        return cls(frozenset(i for i, b in enumerate(bits) if b != default), default)

    @classmethod
    def parse(cls, text: str) -> "BinaryLabel":
        """
        Parse "zeros", "ones" or a prefix with a repeating bit, e.g. "01(1)".

        A bare bit string such as "0110" repeats 1 after its prefix.

        Raises:
            ValueError: On malformed text
        """
        text = str(text).strip()
        if text == "zeros":
            return cls.constant(0)
        if text == "ones":
            return cls.constant(1)
        match = _LABEL_PATTERN.fullmatch(text)
        if match:
            prefix, default = match.group(1), int(match.group(2))
        elif re.fullmatch(r"[01]+", text):
            prefix, default = text, 1
        else:
            raise ValueError(f"Not a binary label: {text!r}")
        return cls.from_bits([int(c) for c in prefix], default)

    def bit(self, n: int) -> int:
        return 1 - self.default if n in self.flips else self.default

    @property
    def prefix_length(self) -> int:
        return max(self.flips) + 1 if self.flips else 0

    def with_bit(self, n: int, bit: int) -> "BinaryLabel":
        flips = set(self.flips)
        if bit == self.default:
            flips.discard(n)
        else:
            flips.add(n)
        return BinaryLabel(frozenset(flips), self.default)

    def zeros_in(self, start: int, stop: int) -> List[int]:
        return [n for n in range(start, stop) if self.bit(n) == 0]

    def bits(self, length: int) -> str:
        return "".join(str(self.bit(n)) for n in range(length))

    def to_text(self) -> str:
        return f"{self.bits(self.prefix_length)}({self.default})"

    def __str__(self) -> str:
        return self.to_text()


# an outcome rule assigns one bit per index, so it has the shape of a label
BitRule = BinaryLabel


def parse_rule(text: str) -> BitRule:
    return BinaryLabel.parse(text)


@dataclass(frozen=True)
class ConstraintSet:
    """
    Conjunction of literals g(n) = b with optional constant tails.

    tail_zero_from = k requires g(n) = 0 for every n >= k (likewise for ones).
    """

    literals: Tuple[Tuple[int, int], ...] = ()
    tail_zero_from: Optional[int] = None
    tail_one_from: Optional[int] = None
    conflict: bool = False

    def __post_init__(self):
        forced: Dict[int, int] = {}
        conflict = self.conflict
        tails = {0: self.tail_zero_from, 1: self.tail_one_from}
        if tails[0] is not None and tails[1] is not None:
            conflict = True
        for n, bit in self.literals:
            if bit not in (0, 1) or n < 0:
                raise DomainError(f"Bad literal g({n}) = {bit}")
            if forced.get(n, bit) != bit:
                conflict = True
            forced[n] = bit
        for bit, start in tails.items():
            if start is None:
                continue
            for n, b in list(forced.items()):
                if n >= start:
                    if b != bit:
                        conflict = True
                    del forced[n]
        if conflict:
            values = ((), None, None, True)
        else:
            values = (tuple(sorted(forced.items())), tails[0], tails[1], False)
        for name, value in zip(("literals", "tail_zero_from", "tail_one_from", "conflict"), values):
            object.__setattr__(self, name, value)

    @classmethod
    def literal(cls, n: int, bit: int) -> "ConstraintSet":
        return cls(((n, bit),))

    @classmethod
    def from_literals(cls, literals: Iterable[Tuple[int, int]]) -> "ConstraintSet":
        return cls(tuple(literals))

    @classmethod
    def agreeing(cls, label: BinaryLabel, indices: IndexSet) -> "ConstraintSet":
        """Sequences that agree with label on every index of the set."""
        literals = [(n, label.bit(n)) for n in indices.finite]
        if indices.tail_from is None:
            return cls(tuple(literals))
        settle = max(indices.tail_from, label.prefix_length)
        literals.extend((n, label.bit(n)) for n in range(indices.tail_from, settle))
        if label.default == 0:
            return cls(tuple(literals), tail_zero_from=settle)
        return cls(tuple(literals), tail_one_from=settle)

    @classmethod
    def following(cls, rule: BitRule, start: int = 0, stop: Optional[int] = None) -> "ConstraintSet":
        """The full conjunction of g(n) = rule(n) over [start, stop)."""
        if stop is not None:
            return cls(tuple((n, rule.bit(n)) for n in range(start, stop)))
        return cls.agreeing(rule, IndexSet(frozenset(), start))

    def meet(self, other: "ConstraintSet") -> "ConstraintSet":
        if self.conflict or other.conflict:
            return ConstraintSet(conflict=True)
        return ConstraintSet(
            self.literals + other.literals,
            _min_tail(self.tail_zero_from, other.tail_zero_from),
            _min_tail(self.tail_one_from, other.tail_one_from),
        )

    def forced_bit(self, n: int) -> Optional[int]:
        for m, bit in self.literals:
            if m == n:
                return bit
        if self.tail_zero_from is not None and n >= self.tail_zero_from:
            return 0
        if self.tail_one_from is not None and n >= self.tail_one_from:
            return 1
        return None

    @property
    def forced_zeros(self) -> List[int]:
        return [n for n, bit in self.literals if bit == 0]

    @property
    def horizon(self) -> int:
        """One past every index the constraint mentions explicitly."""
        marks = [n + 1 for n, _ in self.literals]
        marks += [t for t in (self.tail_zero_from, self.tail_one_from) if t is not None]
        return max(marks, default=0)

    def restricted(self, stop: int) -> "ConstraintSet":
        """Same constraint read on indices [0, stop) only; tails become literals."""
        if self.conflict:
            return self
        literals = [(n, b) for n, b in self.literals if n < stop]
        for bit, start in ((0, self.tail_zero_from), (1, self.tail_one_from)):
            if start is not None:
                literals.extend((n, bit) for n in range(start, stop))
        return ConstraintSet(tuple(literals))

    def satisfied_by(self, label: BinaryLabel, stop: Optional[int] = None) -> bool:
        if self.conflict:
            return False
        if any(label.bit(n) != bit for n, bit in self.literals if stop is None or n < stop):
            return False
        for bit, start in ((0, self.tail_zero_from), (1, self.tail_one_from)):
            if start is None:
                continue
            if stop is not None:
                if any(label.bit(n) != bit for n in range(start, stop)):
                    return False
            elif label.default != bit or any(n >= start for n in label.flips):
                return False
        return True

    def to_dict(self) -> Dict[str, Any]:
        return {"literals": [[n, b] for n, b in self.literals],
                "tail_zero_from": self.tail_zero_from,
                "tail_one_from": self.tail_one_from,
                "conflict": self.conflict}

    def __str__(self) -> str:
        if self.conflict:
            return "false"
        parts = [f"g({n})={b}" for n, b in self.literals]
        if self.tail_zero_from is not None:
            parts.append(f"g(n)=0 for n>={self.tail_zero_from}")
        if self.tail_one_from is not None:
            parts.append(f"g(n)=1 for n>={self.tail_one_from}")
        return " & ".join(parts) if parts else "true"


def _min_tail(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


Predicate = Union[FrozenSet[str], ConstraintSet]
Label = Union[str, BinaryLabel]


class HistoryFamily(ABC):
    """A set of scenario labels with an exact emptiness oracle for its predicates."""

    kind = "abstract"
    is_finite = False
    is_symbolic = True

    @abstractmethod
    def top(self) -> Predicate:
        """Predicate satisfied by every member."""

    @abstractmethod
    def meet(self, a: Predicate, b: Predicate) -> Predicate:
        """Conjunction of two predicates."""

    @abstractmethod
    def witness(self, predicate: Predicate) -> Optional[Label]:
        """Some member satisfying the predicate, or None when it is empty."""

    @abstractmethod
    def contains(self, label: Label) -> bool:
        """Whether label is a member of the family."""

    @abstractmethod
    def holds(self, label: Label, predicate: Predicate) -> bool:
        """Whether a member satisfies the predicate."""

    @abstractmethod
    def is_subset(self, a: Predicate, b: Predicate) -> bool:
        """Every member satisfying a also satisfies b."""

    @abstractmethod
    def labels(self) -> List[Label]:
        """All members in canonical order (finite families only)."""

    @abstractmethod
    def parse_label(self, text: str) -> Label:
        """Member named by text."""

    @abstractmethod
    def to_dict(self) -> Any:
        """Serializable form, read back by family_from_dict."""

    def is_empty(self, predicate: Predicate) -> bool:
        return self.witness(predicate) is None

    def meet_all(self, predicates: Iterable[Predicate]) -> Predicate:
        result = self.top()
        for p in predicates:
            result = self.meet(result, p)
        return result

    def require_member(self, label: Label) -> Label:
        if not self.contains(label):
            raise UnknownScenarioError(label)
        return label

    def format_label(self, label: Label) -> str:
        return str(label)

    def format_predicate(self, predicate: Predicate) -> str:
        if isinstance(predicate, ConstraintSet):
            return str(predicate)
        return "{" + ", ".join(self.format_label(l) for l in self.labels() if l in predicate) + "}"

    def predicate_to_data(self, predicate: Predicate) -> Any:
        if isinstance(predicate, ConstraintSet):
            return predicate.to_dict()
        return [self.format_label(l) for l in self.labels() if l in predicate]

    def literal(self, n: int, bit: int) -> Predicate:
        raise UnsupportedError(f"Family {self.kind} has no indexed literals")

    def agreeing(self, label: Label, indices: IndexSet) -> Predicate:
        raise UnsupportedError(f"Family {self.kind} has no indexed literals")

    def following(self, rule: BitRule, start: int = 0, stop: Optional[int] = None) -> Predicate:
        raise UnsupportedError(f"Family {self.kind} has no indexed literals")

    def finite_conjunctions_satisfiable(self, rule: BitRule, start: int = 0,
                                        stop: Optional[int] = None) -> Tuple[bool, Optional[List[int]]]:
        """
        Whether every finite subset of {g(n) = rule(n) : start <= n < stop} is satisfiable.

        Returns:
            (True, None), or (False, indices of an unsatisfiable finite subset)
        """
        raise UnsupportedError(f"Family {self.kind} has no indexed literals")

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.describe()}>"

    def describe(self) -> str:
        return self.kind


class ExplicitFamily(HistoryFamily):
    """A finite list of opaque scenario labels."""

    kind = "explicit"
    is_finite = True
    is_symbolic = False

    def __init__(self, labels: Sequence[str]):
        labels = [str(label) for label in labels]
        if not labels:
            raise DomainError("A scenario family needs at least one scenario")
        if len(set(labels)) != len(labels):
            raise DomainError(f"Duplicate scenario labels in {labels}")
        self._labels = tuple(labels)
        self._order = {label: i for i, label in enumerate(labels)}

    def top(self) -> FrozenSet[str]:
        return frozenset(self._labels)

    def meet(self, a, b):
        return frozenset(a) & frozenset(b)

    def witness(self, predicate) -> Optional[str]:
        for label in self._labels:
            if label in predicate:
                return label
        return None

    def contains(self, label) -> bool:
        return label in self._order

    def holds(self, label, predicate) -> bool:
        return label in predicate

    def is_subset(self, a, b) -> bool:
        return frozenset(a) <= frozenset(b)

    def labels(self) -> List[str]:
        return list(self._labels)

    def parse_label(self, text: str) -> str:
        return self.require_member(str(text))

    def sort_key(self, label: str) -> int:
        return self._order[label]

    def to_dict(self) -> List[str]:
        return list(self._labels)

    def describe(self) -> str:
        return f"explicit({', '.join(self._labels)})"


class BinaryFamily(HistoryFamily):
    """Families of binary sequences; predicates are ConstraintSets."""

    def top(self) -> ConstraintSet:
        return ConstraintSet()

    def meet(self, a, b):
        return a.meet(b)

    def holds(self, label, predicate) -> bool:
        return self.contains(label) and predicate.satisfied_by(label)

    def literal(self, n: int, bit: int) -> ConstraintSet:
        return ConstraintSet.literal(n, bit)

    def agreeing(self, label, indices: IndexSet) -> ConstraintSet:
        return ConstraintSet.agreeing(label, indices)

    def following(self, rule: BitRule, start: int = 0, stop: Optional[int] = None) -> ConstraintSet:
        return ConstraintSet.following(rule, start, stop)

    def _scan_stop(self, horizon: int) -> Optional[int]:
        return None

    def is_subset(self, a, b) -> bool:
        if self.is_empty(a):
            return True
        if b.conflict:
            return False
        for n, bit in b.literals:
            if not self.is_empty(a.meet(ConstraintSet.literal(n, 1 - bit))):
                return False
        # indices past both horizons behave alike, so one fresh index decides the tail
        last = max(a.horizon, b.horizon)
        cap = self._scan_stop(last)
        for bit, start in ((0, b.tail_zero_from), (1, b.tail_one_from)):
            if start is None:
                continue
            stop = max(last, start) + 1
            if cap is not None:
                stop = min(stop, cap)
            for n in range(start, stop):
                if not self.is_empty(a.meet(ConstraintSet.literal(n, 1 - bit))):
                    return False
        return True

    def parse_label(self, text: str) -> BinaryLabel:
        try:
            label = BinaryLabel.parse(text)
        except ValueError:
            raise UnknownScenarioError(text)
        return self.require_member(label)

    def labels(self) -> List[BinaryLabel]:
        raise UnsupportedError(f"Family {self.kind} is infinite; its labels cannot be listed")

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.describe()}


class AllSequencesFamily(BinaryFamily):
    """Every eventually constant binary sequence; closed under limits of constraints."""

    kind = "all-sequences"

    def witness(self, predicate) -> Optional[BinaryLabel]:
        if predicate.conflict:
            return None
        default = 0 if predicate.tail_zero_from is not None else 1
        return BinaryLabel(frozenset(n for n, b in predicate.literals if b != default), default)

    def contains(self, label) -> bool:
        return isinstance(label, BinaryLabel)

    def finite_conjunctions_satisfiable(self, rule, start=0, stop=None):
        return True, None


class FinitelyManyZerosFamily(BinaryFamily):
    """Sequences with only finitely many zeros."""

    kind = "finitely-many-zeros"

    def witness(self, predicate) -> Optional[BinaryLabel]:
        if predicate.conflict or predicate.tail_zero_from is not None:
            return None
        return BinaryLabel(frozenset(predicate.forced_zeros), 1)

    def contains(self, label) -> bool:
        return isinstance(label, BinaryLabel) and label.default == 1

    def finite_conjunctions_satisfiable(self, rule, start=0, stop=None):
        return True, None


class AtMostKZerosFamily(BinaryFamily):
    """Sequences with at most k zeros."""

    kind = "at-most-k-zeros"

    def __init__(self, k: int):
        if k < 0:
            raise DomainError(f"k must be non-negative, got {k}")
        self.k = k

    def witness(self, predicate) -> Optional[BinaryLabel]:
        if predicate.conflict or predicate.tail_zero_from is not None:
            return None
        zeros = predicate.forced_zeros
        if len(zeros) > self.k:
            return None
        return BinaryLabel(frozenset(zeros), 1)

    def contains(self, label) -> bool:
        return (isinstance(label, BinaryLabel) and label.default == 1
                and len(label.flips) <= self.k)

    def finite_conjunctions_satisfiable(self, rule, start=0, stop=None):
        zeros = []
        n = start
        while (stop is None or n < stop) and len(zeros) <= self.k:
            if stop is None and rule.default == 1 and n >= rule.prefix_length:
                break
            if rule.bit(n) == 0:
                zeros.append(n)
            n += 1
        if len(zeros) > self.k:
            return False, zeros
        return True, None

    def describe(self) -> str:
        return f"{self.kind}({self.k})"


class AllStringsFamily(BinaryFamily):
    """All binary strings of length n, read as sequences that are 1 from n on."""

    kind = "all-strings"
    is_finite = True

    def __init__(self, n: int):
        if n < 1:
            raise DomainError(f"String length must be positive, got {n}")
        self.n = n

    def _check(self, predicate: ConstraintSet):
        for m, _ in predicate.literals:
            if m >= self.n:
                raise DomainError(f"Index {m} outside all-strings({self.n})")

    def meet(self, a, b):
        return a.restricted(self.n).meet(b.restricted(self.n))

    def literal(self, n: int, bit: int) -> ConstraintSet:
        predicate = ConstraintSet.literal(n, bit)
        self._check(predicate)
        return predicate

    def agreeing(self, label, indices: IndexSet) -> ConstraintSet:
        return ConstraintSet.agreeing(label, indices).restricted(self.n)

    def following(self, rule, start=0, stop=None) -> ConstraintSet:
        stop = self.n if stop is None else min(stop, self.n)
        return ConstraintSet.following(rule, start, stop)

    def witness(self, predicate) -> Optional[BinaryLabel]:
        predicate = predicate.restricted(self.n)
        if predicate.conflict:
            return None
        return BinaryLabel(frozenset(predicate.forced_zeros), 1)

    def contains(self, label) -> bool:
        return (isinstance(label, BinaryLabel) and label.default == 1
                and all(m < self.n for m in label.flips))

    def holds(self, label, predicate) -> bool:
        return self.contains(label) and predicate.satisfied_by(label, self.n)

    def _scan_stop(self, horizon: int) -> Optional[int]:
        return self.n

    def is_subset(self, a, b) -> bool:
        return super().is_subset(a.restricted(self.n), b.restricted(self.n))

    def labels(self) -> List[BinaryLabel]:
        if self.n > MAX_ENUMERATED_BITS:
            raise UnsupportedError(f"all-strings({self.n}) is too large to enumerate")
        return [BinaryLabel.from_bits(bits, 1)
                for bits in itertools.product((0, 1), repeat=self.n)]

    def parse_label(self, text: str) -> BinaryLabel:
        text = str(text).strip()
        if re.fullmatch(r"[01]+", text) and len(text) == self.n:
            return BinaryLabel.from_bits([int(c) for c in text], 1)
        return super().parse_label(text)

    def format_label(self, label) -> str:
        return label.bits(self.n)

    def format_predicate(self, predicate) -> str:
        return str(predicate.restricted(self.n))

    def finite_conjunctions_satisfiable(self, rule, start=0, stop=None):
        return True, None

    def describe(self) -> str:
        return f"{self.kind}({self.n})"


FAMILY_KINDS = ("all-strings", "finitely-many-zeros", "at-most-k-zeros", "all-sequences")


def parse_family(text: str) -> BinaryFamily:
    """
    Build a symbolic family from "all-strings(8)", "at-most-k-zeros(3)",
    "finitely-many-zeros" or "all-sequences".

    Raises:
        ValueError: On an unknown family
    """
    match = _FAMILY_PATTERN.fullmatch(str(text).strip())
    if not match:
        raise ValueError(f"Unknown scenario family {text!r}")
    kind, arg = match.group(1), match.group(2)
    if kind == "finitely-many-zeros" and arg is None:
        return FinitelyManyZerosFamily()
    if kind == "all-sequences" and arg is None:
        return AllSequencesFamily()
    if kind == "all-strings" and arg is not None:
        return AllStringsFamily(int(arg))
    if kind == "at-most-k-zeros" and arg is not None:
        return AtMostKZerosFamily(int(arg))
    raise ValueError(f"Unknown scenario family {text!r}; expected one of {', '.join(FAMILY_KINDS)}")


def family_from_dict(data: Any) -> HistoryFamily:
    """Scenario section of a model document: a label list or {"family": name}."""
    try:
        if isinstance(data, list):
            return ExplicitFamily(data)
        if isinstance(data, dict) and "family" in data:
            return parse_family(data["family"])
    except (ValueError, DomainError) as e:
        raise ModelParseError(str(e))
    raise ModelParseError(f"Scenarios must be a list or a family reference, got {data!r}")
