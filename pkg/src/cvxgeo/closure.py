"""Finite closure systems stored as explicit families of closed sets.

Subsets of a ground set are plain integers used as bitmasks: element ``i`` of
the ground set is bit ``i``.  The :class:`Subset` wrapper pairs such a mask
with its ground set for the public API; hot loops work on the raw integers.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import FormatError, GroundSetMismatch, PreconditionError

MAX_GROUND = 64
TABLE_CAP = 20  # closure lookup table has 2**size entries

_LABEL_RE = re.compile(r"^[A-Za-z0-9_]+$")


def popcount(bits: int) -> int:
    return bin(bits).count("1")


def canonical_key(bits: int) -> tuple[int, int]:
    """Sort key for subsets: popcount first, then the mask itself."""
    return (popcount(bits), bits)


def iter_bits(bits: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``bits`` in increasing order."""
    i = 0
    while bits:
        if bits & 1:
            yield i
        bits >>= 1
        i += 1


def subsets_canonical(size: int) -> list[int]:
    """All masks over ``size`` elements in canonical order."""
    return sorted(range(1 << size), key=canonical_key)


@dataclass(frozen=True)
class GroundSet:
    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if len(labels) > MAX_GROUND:
            raise PreconditionError(f"ground set has {len(labels)} elements; at most {MAX_GROUND} supported")
        for lab in labels:
            if not isinstance(lab, str) or not lab:
                raise PreconditionError(f"invalid label {lab!r}")
        if len(set(labels)) != len(labels):
            raise PreconditionError("ground set labels must be distinct")

    @cached_property
    def _index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def full_bits(self) -> int:
        return (1 << len(self.labels)) - 1

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown label {label!r}") from None

    def bits_of(self, labels: Iterable[str]) -> int:
        bits = 0
        for lab in labels:
            bits |= 1 << self.index(lab)
        return bits

    def labels_of(self, bits: int) -> tuple[str, ...]:
        return tuple(self.labels[i] for i in iter_bits(bits))

    def subset(self, labels: Iterable[str] = ()) -> "Subset":
        return Subset(self.bits_of(labels), self)

    def wrap(self, bits: int) -> "Subset":
        return Subset(bits, self)

    @property
    def empty(self) -> "Subset":
        return Subset(0, self)

    @property
    def full(self) -> "Subset":
        return Subset(self.full_bits, self)

    def format(self, bits: int) -> str:
        return "{" + ",".join(self.labels_of(bits)) + "}"

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)


@dataclass(frozen=True)
class Subset:
    """A subset of a :class:`GroundSet`, ordered like ``frozenset`` (``<=`` is inclusion)."""

    bits: int
    ground: GroundSet = field(repr=False)

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.ground.size:
            raise PreconditionError(f"mask {self.bits:#x} has bits outside the ground set")

    def _other(self, other: "Subset") -> int:
        if not isinstance(other, Subset):
            return NotImplemented
        if other.ground != self.ground:
            raise GroundSetMismatch("subsets live over different ground sets")
        return other.bits

    def __and__(self, other):
        return Subset(self.bits & self._other(other), self.ground)

    def __or__(self, other):
        return Subset(self.bits | self._other(other), self.ground)

    def __sub__(self, other):
        return Subset(self.bits & ~self._other(other), self.ground)

    def __le__(self, other):
        return self.bits & ~self._other(other) == 0

    def __lt__(self, other):
        return self <= other and self.bits != other.bits

    def __ge__(self, other):
        return other <= self

    def __gt__(self, other):
        return other < self

    def __contains__(self, label: str) -> bool:
        return bool(self.bits >> self.ground.index(label) & 1)

    def __iter__(self) -> Iterator[str]:
        return iter(self.ground.labels_of(self.bits))

    def __len__(self) -> int:
        return popcount(self.bits)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.ground.labels_of(self.bits)

    def add(self, label: str) -> "Subset":
        return Subset(self.bits | 1 << self.ground.index(label), self.ground)

    def remove(self, label: str) -> "Subset":
        return Subset(self.bits & ~(1 << self.ground.index(label)), self.ground)

    def __str__(self) -> str:
        return self.ground.format(self.bits)

    def __repr__(self) -> str:
        return f"Subset({self})"


@dataclass(frozen=True)
class ClosureReport:
    """Outcome of a yes/no check; ``witness`` names the first counterexample."""

    holds: bool
    witness: Mapping[str, object] | None = None

    def __post_init__(self):
        if self.holds != (self.witness is None):
            raise ValueError("a witness is required exactly when the check fails")

    def __bool__(self) -> bool:
        return self.holds

    def describe(self) -> str:
        if self.holds:
            return "holds"
        parts = [f"{k}={v}" for k, v in self.witness.items()]
        return "fails: " + ", ".join(parts)


def _closure_family_violation(ground: GroundSet, masks: Sequence[int]) -> dict | None:
    present = set(masks)
    if 0 not in present:
        return {"missing": ground.wrap(0)}
    if ground.full_bits not in present:
        return {"missing": ground.wrap(ground.full_bits)}
    ordered = sorted(present, key=canonical_key)
    arr = np.array(ordered, dtype=np.uint64)
    by_value = np.sort(arr)
    for i, x in enumerate(ordered[:-1]):
        meets = arr[i] & arr[i + 1:]
        pos = np.searchsorted(by_value, meets).clip(max=len(by_value) - 1)
        missing = np.flatnonzero(by_value[pos] != meets)
        if missing.size:
            y = ordered[i + 1 + int(missing[0])]
            return {"X": ground.wrap(x), "Y": ground.wrap(y), "meet": ground.wrap(x & y)}
    return None


def _closure_table(size: int, masks: Iterable[int]) -> np.ndarray:
    """Lookup table ``t[S] = intersection of all closed supersets of S``."""
    masks = list(masks)
    t = np.full(1 << size, (1 << size) - 1, dtype=np.uint64)
    t[np.array(masks, dtype=np.int64)] = np.array(masks, dtype=np.uint64)
    for i in range(size):
        view = t.reshape(-1, 2, 1 << i)
        np.bitwise_and(view[:, 0, :], view[:, 1, :], out=view[:, 0, :])
    return t


class ClosedFamily:
    """The closed sets of a finite closure system, in canonical order.

    The family must contain the empty set and the full ground set and be
    closed under intersection; construction fails otherwise.
    """

    def __init__(self, ground: GroundSet, masks: Iterable[int]):
        masks = sorted(set(int(m) for m in masks), key=canonical_key)
        for m in masks:
            if m < 0 or m >> ground.size:
                raise PreconditionError(f"mask {m:#x} has bits outside the ground set")
        bad = _closure_family_violation(ground, masks)
        if bad is not None:
            raise PreconditionError("not a closure family: " + ClosureReport(False, bad).describe())
        self.ground = ground
        self.masks: tuple[int, ...] = tuple(masks)

    @classmethod
    def from_subsets(cls, subsets: Iterable[Subset]) -> "ClosedFamily":
        subsets = list(subsets)
        if not subsets:
            raise PreconditionError("empty list of subsets")
        ground = subsets[0].ground
        for s in subsets:
            if s.ground != ground:
                raise GroundSetMismatch("subsets live over different ground sets")
        return cls(ground, (s.bits for s in subsets))

    @classmethod
    def from_labels(cls, ground: GroundSet | Iterable[str], sets: Iterable[Iterable[str]]) -> "ClosedFamily":
        if not isinstance(ground, GroundSet):
            ground = GroundSet(tuple(ground))
        return cls(ground, (ground.bits_of(s) for s in sets))

    @classmethod
    def powerset(cls, ground: GroundSet | Iterable[str]) -> "ClosedFamily":
        if not isinstance(ground, GroundSet):
            ground = GroundSet(tuple(ground))
        return cls(ground, range(1 << ground.size))

    def __len__(self) -> int:
        return len(self.masks)

    def __iter__(self) -> Iterator[Subset]:
        return (Subset(m, self.ground) for m in self.masks)

    def __contains__(self, item: Subset | int) -> bool:
        if isinstance(item, Subset):
            self._check(item)
            item = item.bits
        return item in self._index

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClosedFamily):
            return NotImplemented
        return self.ground == other.ground and self.masks == other.masks

    def __hash__(self) -> int:
        return hash((self.ground, self.masks))

    def __repr__(self) -> str:
        return f"ClosedFamily(ground={list(self.ground.labels)}, {len(self)} sets)"

    @cached_property
    def _index(self) -> dict[int, int]:
        return {m: i for i, m in enumerate(self.masks)}

    def index_of(self, bits: int) -> int:
        return self._index[bits]

    @cached_property
    def table(self) -> np.ndarray | None:
        """Closure lookup table over all ``2**size`` masks (``None`` above the cap)."""
        if self.ground.size > TABLE_CAP:
            return None
        return _closure_table(self.ground.size, self.masks)

    def _check(self, s: Subset) -> None:
        if s.ground != self.ground:
            raise GroundSetMismatch("subset and family live over different ground sets")

    def close_bits(self, bits: int) -> int:
        t = self.table
        if t is not None:
            return int(t[bits])
        # canonical order: the first closed superset has minimum size, hence is the closure
        for m in self.masks:
            if bits & ~m == 0:
                return m
        raise AssertionError("full set missing from family")

    def close(self, s: Subset) -> Subset:
        """Smallest closed set containing ``s``."""
        self._check(s)
        return Subset(self.close_bits(s.bits), self.ground)

    def is_closed(self, s: Subset) -> bool:
        self._check(s)
        return s.bits in self._index

    def subsets(self) -> list[Subset]:
        return list(self)


def is_closure_family(sets: Sequence[Subset]) -> ClosureReport:
    """Check that ``sets`` contains the empty and the full set and is closed under intersection."""
    sets = list(sets)
    if not sets:
        raise PreconditionError("empty list of subsets")
    ground = sets[0].ground
    for s in sets:
        if s.ground != ground:
            raise GroundSetMismatch("subsets live over different ground sets")
    bad = _closure_family_violation(ground, [s.bits for s in sets])
    return ClosureReport(bad is None, bad)


def is_convex_geometry(family: ClosedFamily) -> ClosureReport:
    """Every proper closed set must grow into another closed set by adding one element."""
    full = family.ground.full_bits
    present = family._index
    for m in family.masks:
        if m == full:
            continue
        rest = full & ~m
        if not any((m | 1 << i) in present for i in iter_bits(rest)):
            return ClosureReport(False, {"X": family.ground.wrap(m)})
    return ClosureReport(True)


def satisfies_anti_exchange(family: ClosedFamily) -> ClosureReport:
    ground = family.ground
    close = family.close_bits
    for m in family.masks:
        outside = list(iter_bits(ground.full_bits & ~m))
        closures = {i: close(m | 1 << i) for i in outside}
        for x in outside:
            for y in outside:
                if x != y and closures[y] >> x & 1 and closures[x] >> y & 1:
                    return ClosureReport(False, {
                        "X": ground.wrap(m),
                        "x": ground.labels[x],
                        "y": ground.labels[y],
                    })
    return ClosureReport(True)


def extreme_points(family: ClosedFamily, X: Subset) -> Subset:
    """Elements of the closed set ``X`` that are not in the closure of the rest of ``X``."""
    if not family.is_closed(X):
        raise PreconditionError(f"{X} is not closed")
    out = 0
    for i in iter_bits(X.bits):
        if not family.close_bits(X.bits & ~(1 << i)) >> i & 1:
            out |= 1 << i
    return Subset(out, family.ground)


def is_atomistic(family: ClosedFamily) -> ClosureReport:
    for i, lab in enumerate(family.ground.labels):
        if (1 << i) not in family._index:
            return ClosureReport(False, {"x": lab})
    return ClosureReport(True)


# -- text format --------------------------------------------------------------

def _tokens(text: str) -> Iterator[tuple[int, list[str]]]:
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _check_label(lab: str, lineno: int) -> str:
    if not _LABEL_RE.match(lab):
        raise FormatError(f"invalid label {lab!r}", lineno)
    return lab


def parse_family(text: str) -> ClosedFamily:
    """Parse the ``ground ...`` / ``closed ...`` line format."""
    ground = None
    masks = []
    for lineno, toks in _tokens(text):
        head, args = toks[0], toks[1:]
        if ground is None:
            if head != "ground":
                raise FormatError("expected 'ground' line first", lineno)
            try:
                ground = GroundSet(tuple(_check_label(a, lineno) for a in args))
            except PreconditionError as exc:
                raise FormatError(str(exc), lineno) from None
            continue
        if head != "closed":
            raise FormatError(f"unknown directive {head!r}", lineno)
        bits = 0
        for a in args:
            _check_label(a, lineno)
            if a not in ground._index:
                raise FormatError(f"label {a!r} not in ground set", lineno)
            bits |= 1 << ground.index(a)
        masks.append(bits)
    if ground is None:
        raise FormatError("missing 'ground' line")
    try:
        return ClosedFamily(ground, masks)
    except PreconditionError as exc:
        raise FormatError(str(exc)) from None


def format_family(family: ClosedFamily) -> str:
    lines = [" ".join(("ground",) + family.ground.labels)]
    for m in family.masks:
        lines.append(" ".join(("closed",) + family.ground.labels_of(m)))
    return "\n".join(lines) + "\n"


def read_family(path: str | Path) -> ClosedFamily:
    return parse_family(Path(path).read_text())


def write_family(family: ClosedFamily, path: str | Path) -> None:
    Path(path).write_text(format_family(family))
