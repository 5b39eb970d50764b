"""Decision procedures for Caratheodory-type rules on finite closure systems.

All checks quantify over every subset (or every closed set) of the ground
set and report the first counterexample in canonical order.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations, product
from typing import Mapping

import numpy as np

from .closure import ClosedFamily, ClosureReport, canonical_key, iter_bits, popcount
from .errors import CapExceeded, PreconditionError

RULE_CAP = 20
SHARP_CAP = 12


class Rule(enum.Enum):
    CARATHEODORY = "caratheodory"
    CAROUSEL = "carousel"
    SHARP_CAROUSEL_2 = "sharp2"
    SHARP_ELEMENTWISE = "sharp-elem"


@dataclass(frozen=True)
class RuleVerdict:
    rule: Rule
    holds: bool
    witness: Mapping[str, object] | None
    tuples_examined: int
    n: int | None = None
    vacuous: int = 0  # examined tuples whose conclusion holds for trivial reasons

    def __post_init__(self):
        if self.holds != (self.witness is None):
            raise ValueError("a witness is required exactly when the rule fails")

    def __bool__(self) -> bool:
        return self.holds

    @property
    def name(self) -> str:
        return self.rule.value if self.n is None else f"{self.rule.value}({self.n})"

    def describe(self) -> str:
        head = f"{self.name}: {'holds' if self.holds else 'fails'}"
        if self.witness:
            head += " at " + ", ".join(f"{k}={v}" for k, v in self.witness.items())
        return head


def _table(family: ClosedFamily, cap: int = RULE_CAP) -> np.ndarray:
    if family.ground.size > cap:
        raise CapExceeded(f"ground set of {family.ground.size} elements exceeds cap {cap}")
    return family.table


def _popcounts(size: int) -> np.ndarray:
    pc = np.zeros(1 << size, dtype=np.int64)
    for i in range(size):
        pc.reshape(-1, 2, 1 << i)[:, 1, :] += 1
    return pc


def _subset_or(t: np.ndarray, size: int) -> np.ndarray:
    """In place: ``t[S] = OR of t[T] over all T subset of S``."""
    for i in range(size):
        view = t.reshape(-1, 2, 1 << i)
        np.bitwise_or(view[:, 1, :], view[:, 0, :], out=view[:, 1, :])
    return t


def _first_canonical(masks: np.ndarray, pc: np.ndarray) -> int:
    order = np.lexsort((masks, pc[masks]))
    return int(masks[order[0]])


def _lowest_bit(bits: int) -> int:
    return (bits & -bits).bit_length() - 1


def _check_n(n: int) -> None:
    if n < 1:
        raise PreconditionError("n must be at least 1")


def check_caratheodory(family: ClosedFamily, n: int) -> RuleVerdict:
    """``x in cl(S)`` must be witnessed by at most ``n + 1`` elements of ``S``."""
    _check_n(n)
    cl = _table(family)
    size = family.ground.size
    pc = _popcounts(size)
    covered = np.where(pc <= n + 1, cl, np.uint64(0))
    _subset_or(covered, size)
    bad = cl & ~covered
    examined = int(_popcounts(size)[cl.astype(np.int64)].sum())
    vacuous = int(pc.sum())
    failing = np.flatnonzero(bad)
    if failing.size == 0:
        return RuleVerdict(Rule.CARATHEODORY, True, None, examined, n, vacuous)
    S = _first_canonical(failing, pc)
    x = _lowest_bit(int(bad[S]))
    g = family.ground
    return RuleVerdict(Rule.CARATHEODORY, False, {"x": g.labels[x], "S": g.wrap(S)}, examined, n, vacuous)


def _carousel_cover(cl: np.ndarray, S: int, y: int, n: int) -> int:
    members = list(iter_bits(S))
    out = int(cl[1 << y])
    for combo in combinations(members, min(n, len(members))):
        out |= int(cl[sum(1 << i for i in combo) | 1 << y])
    return out


def check_carousel(family: ClosedFamily, n: int) -> RuleVerdict:
    """``x, y in cl(S)`` must give ``x in cl({y, a_1..a_n})`` for some ``a_i in S``.

    The ``a_i`` may repeat, so any subset of ``S`` of size at most ``n``
    serves.  Tuples with ``x == y`` or ``x in S`` are counted as vacuous.
    """
    _check_n(n)
    cl = _table(family)
    size = family.ground.size
    pc = _popcounts(size)
    small = pc <= n
    fail_any = np.zeros(1 << size, dtype=bool)
    for y in range(size):
        yb = np.uint64(1 << y)
        cover = np.where(small, cl[(np.arange(1 << size, dtype=np.uint64) | yb).astype(np.int64)], np.uint64(0))
        _subset_or(cover, size)
        fail_any |= ((cl & yb) != 0) & ((cl & ~cover) != 0)
    ncl = pc[cl.astype(np.int64)]
    examined = int((ncl * ncl).sum())
    vacuous = int((ncl + pc * ncl - pc).sum())
    failing = np.flatnonzero(fail_any)
    if failing.size == 0:
        return RuleVerdict(Rule.CAROUSEL, True, None, examined, n, vacuous)
    S = _first_canonical(failing, pc)
    clS = int(cl[S])
    g = family.ground
    for x in iter_bits(clS):
        for y in iter_bits(clS):
            if not _carousel_cover(cl, S, y, n) >> x & 1:
                return RuleVerdict(Rule.CAROUSEL, False,
                                   {"x": g.labels[x], "y": g.labels[y], "S": g.wrap(S)},
                                   examined, n, vacuous)
    raise AssertionError("inconsistent carousel scan")


def check_carousel_implies_caratheodory(family: ClosedFamily, n: int) -> ClosureReport:
    """Cross-check: a family passing the ``n``-Carousel rule must pass ``n``-Caratheodory."""
    car = check_caratheodory(family, n)
    if car.holds:
        return ClosureReport(True)
    if not check_carousel(family, n).holds:
        return ClosureReport(True)
    return ClosureReport(False, dict(car.witness))


def _lattice_arrays(family: ClosedFamily):
    size = family.ground.size
    bits = np.array(family.masks, dtype=np.uint64)
    idx = np.full(1 << size, -1, dtype=np.int64)
    idx[bits.astype(np.int64)] = np.arange(len(bits))
    cl = family.table
    join = idx[cl[(bits[:, None] | bits[None, :]).astype(np.int64)].astype(np.int64)]
    return bits, join


def check_sharp_carousel_2(family: ClosedFamily) -> RuleVerdict:
    """The five-set rule over closed ``X, Y, A, B, C``.

    Hypotheses: ``Y <= cl(A+B+C)``; ``Y&cl(A+B) = Y&cl(B+C) = Y&cl(A+C) =
    Y&X = P`` strictly inside both ``X`` and ``Y``; ``X <= cl(Y+A+B)``,
    ``X <= cl(Y+A+C)``, ``Y <= cl(X+B+C)``.  Conclusion: ``X & cl(A+Y)``
    strictly contains ``P``.  Only triples ``(A, B, C)`` whose joint closure
    reaches past all three pairwise closures can host a ``Y``, so those are
    found first.
    """
    _table(family, SHARP_CAP)
    bits, J = _lattice_arrays(family)
    N = len(bits)
    ar = np.arange(N)
    examined = 0
    best = None
    for A in range(N):
        jab = J[A]
        jabc = J[jab[:, None], ar[None, :]]
        ab = bits[jab]
        reach = bits[jabc] & ~(ab[:, None] | ab[None, :] | bits[J])
        for B, C in np.argwhere(reach != 0):
            AB, AC, BC = ab[B], ab[C], bits[J[B, C]]
            ABC = bits[jabc[B, C]]
            P = bits & AB
            ys = np.flatnonzero(((bits & ~ABC) == 0) & ((bits & AC) == P) & ((bits & BC) == P) & (P != bits))
            for Y in ys:
                Yb, Pb = bits[Y], P[Y]
                yab = bits[J[Y, J[A, B]]]
                yac = bits[J[Y, J[A, C]]]
                xbc = bits[J[ar, J[B, C]]]
                ok = (((bits & Yb) == Pb) & (bits != Pb) & ((bits & ~yab) == 0)
                      & ((bits & ~yac) == 0) & ((Yb & ~xbc) == 0))
                xs = np.flatnonzero(ok)
                examined += len(xs)
                if not xs.size:
                    continue
                fails = xs[(bits[xs] & bits[J[A, Y]]) == Pb]
                if fails.size:
                    cand = (int(fails[0]), int(Y), A, int(B), int(C))
                    if best is None or cand < best:
                        best = cand
    if best is None:
        return RuleVerdict(Rule.SHARP_CAROUSEL_2, True, None, examined)
    g = family.ground
    X, Y, A, B, C = (g.wrap(family.masks[i]) for i in best)
    P = X & Y
    return RuleVerdict(Rule.SHARP_CAROUSEL_2, False,
                       {"X": X, "Y": Y, "A": A, "B": B, "C": C, "P": P}, examined)


def check_sharp_theorem_elementwise(family: ClosedFamily) -> RuleVerdict:
    """Single-element form of the five-set rule, with empty intersections.

    For elements ``x, y, a, b, c``: if ``y in cl(abc)``, ``cl(y)`` misses
    ``cl(ab)``, ``cl(bc)``, ``cl(ac)`` and ``cl(x)``, and ``x`` lies in both
    ``cl(yab)`` and ``cl(yac)``, then ``cl(x)`` must meet ``cl(ya)``.
    """
    cl = _table(family)
    k = family.ground.size
    single = [int(cl[1 << i]) for i in range(k)]
    examined = 0
    best = None
    for a, b, c in product(range(k), repeat=3):
        ab, bc, ac = int(cl[1 << a | 1 << b]), int(cl[1 << b | 1 << c]), int(cl[1 << a | 1 << c])
        abc = int(cl[1 << a | 1 << b | 1 << c])
        for y in iter_bits(abc):
            ybar = single[y]
            if ybar & (ab | bc | ac):
                continue
            yab = int(cl[1 << y | 1 << a | 1 << b])
            yac = int(cl[1 << y | 1 << a | 1 << c])
            ya = int(cl[1 << y | 1 << a])
            for x in iter_bits(yab & yac):
                if single[x] & ybar:
                    continue
                examined += 1
                if not single[x] & ya:
                    cand = (x, y, a, b, c)
                    if best is None or cand < best:
                        best = cand
    if best is None:
        return RuleVerdict(Rule.SHARP_ELEMENTWISE, True, None, examined)
    labels = family.ground.labels
    return RuleVerdict(Rule.SHARP_ELEMENTWISE, False,
                       dict(zip("xyabc", (labels[i] for i in best))), examined)


# -- witness replay -----------------------------------------------------------
# Each replay evaluates the rule's definition directly on the witness, using
# plain closure calls, and returns True when the witness really violates it.

def _mask(indices) -> int:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


def _bits(family: ClosedFamily, *labels: str) -> int:
    return family.ground.bits_of(labels)


def replay_witness(family: ClosedFamily, verdict: RuleVerdict) -> bool:
    if verdict.holds:
        raise ValueError("nothing to replay: the rule holds")
    w = verdict.witness
    close = family.close_bits
    if verdict.rule is Rule.CARATHEODORY:
        x = _bits(family, w["x"])
        S = w["S"].bits
        members = list(iter_bits(S))
        if not close(S) & x:
            return False
        for k in range(1, verdict.n + 2):
            for combo in combinations(members, k):
                if close(sum(1 << i for i in combo)) & x:
                    return False
        return True
    if verdict.rule is Rule.CAROUSEL:
        x, y = _bits(family, w["x"]), _bits(family, w["y"])
        S = w["S"].bits
        if not (close(S) & x and close(S) & y):
            return False
        members = list(iter_bits(S))
        for combo in product(members, repeat=verdict.n):
            if close(y | _mask(combo)) & x:
                return False
        return True
    if verdict.rule is Rule.SHARP_CAROUSEL_2:
        X, Y, A, B, C = (w[k].bits for k in "XYABC")
        for s in (X, Y, A, B, C):
            if close(s) != s:
                return False
        P = Y & X
        hyp = (Y & ~close(A | B | C) == 0
               and Y & close(A | B) == P and Y & close(B | C) == P and Y & close(A | C) == P
               and P != Y and P != X
               and X & ~close(Y | A | B) == 0 and X & ~close(Y | A | C) == 0
               and Y & ~close(X | B | C) == 0)
        return hyp and X & close(A | Y) == P
    if verdict.rule is Rule.SHARP_ELEMENTWISE:
        x, y, a, b, c = (_bits(family, w[k]) for k in "xyabc")
        yb = close(y)
        hyp = (close(a | b | c) & y and not yb & close(a | b) and not yb & close(b | c)
               and not yb & close(a | c) and not yb & close(x)
               and close(y | a | b) & x and close(y | a | c) & x)
        return bool(hyp) and not close(x) & close(y | a)
    raise ValueError(f"unknown rule {verdict.rule}")


def check_rule(family: ClosedFamily, rule: Rule | str, n: int | None = None) -> RuleVerdict:
    rule = Rule(rule)
    if rule in (Rule.CARATHEODORY, Rule.CAROUSEL):
        if n is None:
            raise PreconditionError(f"{rule.value} needs n")
        fn = check_caratheodory if rule is Rule.CARATHEODORY else check_carousel
        return fn(family, n)
    if rule is Rule.SHARP_CAROUSEL_2:
        return check_sharp_carousel_2(family)
    return check_sharp_theorem_elementwise(family)
