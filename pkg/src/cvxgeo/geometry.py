"""Exact point configurations and the closure systems they induce.

Coordinates are :class:`fractions.Fraction`; nothing here touches floating
point.  The closure of a set of points ``Y`` of a configuration ``A`` is
``ch(Y) & A`` (convex hull intersected with the configuration).
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .closure import (
    ClosedFamily, ClosureReport, GroundSet, Subset, _LABEL_RE, _tokens, iter_bits, popcount,
)
from .errors import CapExceeded, FormatError, GroundSetMismatch, PreconditionError
from .simplex import INFEASIBLE, find_feasible, solve_lp

Point = tuple[Fraction, ...]

GEOMETRY_CAP = 20


def as_point(coords: Iterable) -> Point:
    return tuple(Fraction(c) for c in coords)


def _dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


@dataclass(frozen=True)
class HullCertificate:
    """Proof of (non-)membership of a point in a convex hull.

    When ``inside`` the ``coefficients`` are convex weights aligned with the
    hull's generators.  Otherwise ``separator = (normal, threshold)`` with
    ``normal.x > threshold >= normal.y`` for every generator ``y``.
    """

    inside: bool
    coefficients: tuple[Fraction, ...] | None = None
    separator: tuple[Point, Fraction] | None = None

    def verify(self, x: Sequence, Y: Sequence[Sequence]) -> bool:
        x = as_point(x)
        Y = [as_point(y) for y in Y]
        if self.inside:
            lam = self.coefficients
            if lam is None or self.separator is not None or len(lam) != len(Y):
                return False
            if any(v < 0 for v in lam) or sum(lam) != 1:
                return False
            combo = tuple(sum((l * y[k] for l, y in zip(lam, Y)), Fraction(0)) for k in range(len(x)))
            return combo == x
        if self.separator is None or self.coefficients is not None:
            return False
        normal, threshold = self.separator
        return _dot(normal, x) > threshold and all(_dot(normal, y) <= threshold for y in Y)


def _check_dims(x: Point, Y: Sequence[Point]) -> None:
    if not Y:
        raise PreconditionError("hull of an empty point set")
    for y in Y:
        if len(y) != len(x):
            raise PreconditionError(f"dimension mismatch: {len(y)} vs {len(x)}")


def hull_membership(x: Sequence, Y: Sequence[Sequence]) -> HullCertificate:
    """Decide ``x in ch(Y)`` by exact LP feasibility, with a certificate either way."""
    x = as_point(x)
    Y = [as_point(y) for y in Y]
    _check_dims(x, Y)
    d = len(x)
    A = [[y[k] for y in Y] for k in range(d)] + [[Fraction(1)] * len(Y)]
    b = list(x) + [Fraction(1)]
    res = find_feasible(A, b)
    if res.status != INFEASIBLE:
        return HullCertificate(True, coefficients=res.x)
    normal = res.farkas[:d]
    threshold = max(_dot(normal, y) for y in Y)
    return HullCertificate(False, separator=(tuple(normal), threshold))


def _bbox_excludes(x: Point, Y: Sequence[Point]) -> bool:
    for k, v in enumerate(x):
        lo = min(y[k] for y in Y)
        hi = max(y[k] for y in Y)
        if v < lo or v > hi:
            return True
    return False


def in_hull(x: Sequence, Y: Sequence[Sequence]) -> bool:
    x = as_point(x)
    Y = [as_point(y) for y in Y]
    _check_dims(x, Y)
    if _bbox_excludes(x, Y):
        return False
    if x in Y:
        return True
    return hull_membership(x, Y).inside


def strictly_inside(x: Sequence, Y: Sequence[Sequence]) -> bool:
    """True iff ``x`` is in the relative interior of ``ch(Y)``.

    Equivalent to ``x`` being a convex combination of ``Y`` with every weight
    positive; decided by maximising the smallest weight.
    """
    x = as_point(x)
    Y = [as_point(y) for y in Y]
    _check_dims(x, Y)
    k, d = len(Y), len(x)
    # lambda_i = s_i + t with s_i >= 0; maximise t
    A = [[y[j] for y in Y] + [sum((y[j] for y in Y), Fraction(0))] for j in range(d)]
    A.append([Fraction(1)] * k + [Fraction(k)])
    b = list(x) + [Fraction(1)]
    res = solve_lp([0] * k + [-1], A, b)
    return res.status != INFEASIBLE and -res.value > 0


@dataclass(frozen=True)
class PointConfig:
    """Labelled points of equal dimension, pairwise distinct."""

    ground: GroundSet
    points: tuple[Point, ...]

    def __post_init__(self):
        pts = tuple(as_point(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) != self.ground.size:
            raise PreconditionError("one point per label required")
        if not pts:
            raise PreconditionError("empty configuration")
        d = len(pts[0])
        if d < 1:
            raise PreconditionError("dimension must be at least 1")
        for lab, p in zip(self.ground.labels, pts):
            if len(p) != d:
                raise PreconditionError(f"point {lab} has dimension {len(p)}, expected {d}")
        seen = {}
        for lab, p in zip(self.ground.labels, pts):
            if p in seen:
                raise PreconditionError(f"points {seen[p]} and {lab} coincide")
            seen[p] = lab

    @classmethod
    def from_items(cls, items: Iterable[tuple[str, Sequence]]) -> "PointConfig":
        items = list(items)
        return cls(GroundSet(tuple(lab for lab, _ in items)), tuple(as_point(p) for _, p in items))

    @property
    def dim(self) -> int:
        return len(self.points[0])

    @property
    def labels(self) -> tuple[str, ...]:
        return self.ground.labels

    def point(self, label: str) -> Point:
        return self.points[self.ground.index(label)]

    def points_of(self, bits: int) -> list[Point]:
        return [self.points[i] for i in iter_bits(bits)]

    def items(self) -> list[tuple[str, Point]]:
        return list(zip(self.ground.labels, self.points))


def _closure_bits(config: PointConfig, bits: int, known: int = 0) -> int:
    if bits == 0:
        return 0
    Y = config.points_of(bits)
    out = bits | known
    for i, p in enumerate(config.points):
        if out >> i & 1:
            continue
        if not _bbox_excludes(p, Y) and hull_membership(p, Y).inside:
            out |= 1 << i
    return out


def relative_closure(config: PointConfig, Y: Subset) -> Subset:
    """Labels whose points lie in the convex hull of the points of ``Y``."""
    if Y.ground != config.ground:
        raise GroundSetMismatch("subset is not over the configuration's ground set")
    return Subset(_closure_bits(config, Y.bits), config.ground)


def closure_table(config: PointConfig) -> np.ndarray:
    """Closure of every subset mask, as a ``uint64`` array of length ``2**size``.

    By Caratheodory's theorem a point is in the hull of ``S`` iff it is in the
    hull of some subset of at most ``dim + 1`` points, so only those small
    subsets are solved exactly; the rest is an OR over subsets.
    """
    size = config.ground.size
    if size > GEOMETRY_CAP:
        raise CapExceeded(f"{size} points; enumeration capped at {GEOMETRY_CAP}")
    limit = config.dim + 1
    t = np.zeros(1 << size, dtype=np.uint64)
    for k in range(1, min(limit, size) + 1):
        for combo in combinations(range(size), k):
            bits = sum(1 << i for i in combo)
            known = 0
            for i in combo:
                known |= int(t[bits & ~(1 << i)])
            t[bits] = _closure_bits(config, bits, known)
    for i in range(size):
        view = t.reshape(-1, 2, 1 << i)
        np.bitwise_or(view[:, 1, :], view[:, 0, :], out=view[:, 1, :])
    return t


def build_geometry(config: PointConfig) -> ClosedFamily:
    """All relatively convex subsets of the configuration, in canonical order."""
    t = closure_table(config)
    masks = np.flatnonzero(t == np.arange(1 << config.ground.size, dtype=np.uint64))
    return ClosedFamily(config.ground, (int(m) for m in masks))


def caratheodory_witness(config: PointConfig, x: str, S: Subset, n: int) -> Subset | None:
    """Smallest subset of ``S`` (at most ``n + 1`` points) whose hull contains ``x``."""
    if n < 1:
        raise PreconditionError("n must be at least 1")
    if S.ground != config.ground:
        raise GroundSetMismatch("subset is not over the configuration's ground set")
    if x not in relative_closure(config, S):
        raise PreconditionError(f"{x} is not in the closure of {S}")
    px = config.point(x)
    members = list(iter_bits(S.bits))
    for k in range(1, n + 2):
        for combo in combinations(members, k):
            if in_hull(px, [config.points[i] for i in combo]):
                return Subset(sum(1 << i for i in combo), config.ground)
    return None


# -- planar predicates --------------------------------------------------------

def orient(a: Sequence, b: Sequence, c: Sequence) -> Fraction:
    """Twice the signed area of ``abc``; positive for a counterclockwise turn."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _planar(*pts) -> list[Point]:
    out = [as_point(p) for p in pts]
    for p in out:
        if len(p) != 2:
            raise PreconditionError("planar points required")
    return out


def _between(p: Point, q: Point, x: Point) -> bool:
    """``x`` on the closed segment ``[p, q]``, assuming the three are collinear."""
    return (min(p[0], q[0]) <= x[0] <= max(p[0], q[0])
            and min(p[1], q[1]) <= x[1] <= max(p[1], q[1]))


def point_in_triangle(x, a, b, c) -> bool:
    """Closed-triangle membership; degenerate triangles are segments or points."""
    x, a, b, c = _planar(x, a, b, c)
    area = orient(a, b, c)
    if area != 0:
        s1, s2, s3 = orient(a, b, x), orient(b, c, x), orient(c, a, x)
        if area > 0:
            return s1 >= 0 and s2 >= 0 and s3 >= 0
        return s1 <= 0 and s2 <= 0 and s3 <= 0
    p, q = max(((a, b), (a, c), (b, c)), key=lambda pq: (pq[0][0] - pq[1][0]) ** 2 + (pq[0][1] - pq[1][1]) ** 2)
    if p == q:
        return x == p
    return orient(p, q, x) == 0 and _between(p, q, x)


def segment_intersection(p1, p2, q1, q2) -> Point | None:
    """Unique common point of the closed segments, ``None`` if they are disjoint.

    Raises :class:`PreconditionError` when collinear segments share more
    than one point.
    """
    p1, p2, q1, q2 = _planar(p1, p2, q1, q2)
    r = (p2[0] - p1[0], p2[1] - p1[1])
    s = (q2[0] - q1[0], q2[1] - q1[1])
    w = (q1[0] - p1[0], q1[1] - p1[1])
    denom = r[0] * s[1] - r[1] * s[0]
    if denom != 0:
        t = (w[0] * s[1] - w[1] * s[0]) / denom
        u = (w[0] * r[1] - w[1] * r[0]) / denom
        if 0 <= t <= 1 and 0 <= u <= 1:
            return (p1[0] + t * r[0], p1[1] + t * r[1])
        return None
    # parallel or degenerate
    if r == (0, 0) and s == (0, 0):
        return p1 if p1 == q1 else None
    if r == (0, 0):
        return p1 if orient(q1, q2, p1) == 0 and _between(q1, q2, p1) else None
    if s == (0, 0):
        return q1 if orient(p1, p2, q1) == 0 and _between(p1, p2, q1) else None
    if orient(p1, p2, q1) != 0:
        return None
    # collinear: parametrise along r
    rr = r[0] * r[0] + r[1] * r[1]
    t0 = (w[0] * r[0] + w[1] * r[1]) / rr
    t1 = t0 + (s[0] * r[0] + s[1] * r[1]) / rr
    lo, hi = max(Fraction(0), min(t0, t1)), min(Fraction(1), max(t0, t1))
    if lo > hi:
        return None
    if lo == hi:
        return (p1[0] + lo * r[0], p1[1] + lo * r[1])
    raise PreconditionError("segments overlap in more than one point")


def _hull_ccw(pts: Sequence[Point]) -> list[int]:
    """Indices of strict hull vertices, counterclockwise from the lexicographically least point."""
    order = sorted(range(len(pts)), key=lambda i: pts[i])
    if len(order) <= 2:
        return order

    def chain(seq):
        out = []
        for i in seq:
            while len(out) >= 2 and orient(pts[out[-2]], pts[out[-1]], pts[i]) <= 0:
                out.pop()
            out.append(i)
        return out

    lower = chain(order)
    upper = chain(reversed(order))
    return lower[:-1] + upper[:-1]


def convex_position_order(config: PointConfig) -> tuple[str, ...]:
    """Counterclockwise order of the labels, starting from the lexicographically least point."""
    if config.dim != 2:
        raise PreconditionError("planar configuration required")
    if config.ground.size < 3:
        raise PreconditionError("at least 3 points required")
    hull = _hull_ccw(config.points)
    if len(hull) != config.ground.size:
        on_hull = set(hull)
        bad = next(lab for i, lab in enumerate(config.labels) if i not in on_hull)
        raise PreconditionError(f"point {bad} is not a vertex of the convex hull")
    return tuple(config.labels[i] for i in hull)


def check_lemma_s_in_3(config: PointConfig, all_rotations: bool = True) -> ClosureReport:
    """For vertices ``a_1, a_i, a_j, a_k, a_s`` in circular order, the crossing
    ``s`` of the diagonals ``[a_1, a_j]`` and ``[a_i, a_k]`` lies in the triangle
    ``a_s a_i a_j``.

    Every choice of ``1 < i < j < k < s`` is checked; with ``all_rotations``
    every vertex also takes the role of ``a_1``.
    """
    order = convex_position_order(config)
    poly = [config.point(lab) for lab in order]
    m = len(poly)
    if m < 5:
        raise PreconditionError("at least 5 vertices required")
    for r in range(m if all_rotations else 1):
        v = poly[r:] + poly[:r]
        labs = order[r:] + order[:r]
        for i, j, k in combinations(range(1, m - 1), 3):
            s = segment_intersection(v[0], v[j], v[i], v[k])
            if s is None:
                return ClosureReport(False, {"a1": labs[0], "ai": labs[i], "aj": labs[j], "ak": labs[k],
                                             "reason": "diagonals do not cross"})
            for t in range(k + 1, m):
                if not point_in_triangle(s, v[t], v[i], v[j]):
                    return ClosureReport(False, {"a1": labs[0], "ai": labs[i], "aj": labs[j],
                                                 "ak": labs[k], "as": labs[t], "point": s})
    return ClosureReport(True)


def _in_convex_polygon(x: Point, poly: Sequence[Point]) -> bool:
    """Membership in a polygon given by its vertices in counterclockwise order."""
    if not poly:
        return False
    if len(poly) == 1:
        return x == poly[0]
    if len(poly) == 2:
        return orient(poly[0], poly[1], x) == 0 and _between(poly[0], poly[1], x)
    return all(orient(poly[i], poly[(i + 1) % len(poly)], x) >= 0 for i in range(len(poly)))


def _runs(cyclic: Sequence[int]) -> int:
    """Number of maximal blocks of equal values in a cyclic sequence."""
    n = len(cyclic)
    changes = sum(1 for i in range(n) if cyclic[i] != cyclic[i - 1])
    return max(changes, 1)


def abc_uncovered(config: PointConfig, A: Subset, B: Subset, C: Subset, grid: int = 8) -> list[Point]:
    """Vertices and grid points ``(i/grid, j/grid)`` of the polygon missed by the three pairwise hulls."""
    order = convex_position_order(config)
    idx = [config.ground.index(lab) for lab in order]
    poly = [config.points[i] for i in idx]

    def sub(bits):
        return [config.points[i] for i in idx if bits >> i & 1]

    hulls = [sub(A.bits | B.bits), sub(A.bits | C.bits), sub(B.bits | C.bits)]
    xs = [p[0] for p in poly]
    ys = [p[1] for p in poly]
    samples = list(poly)
    for i in range(int(np.floor(min(xs) * grid)), int(np.ceil(max(xs) * grid)) + 1):
        for j in range(int(np.floor(min(ys) * grid)), int(np.ceil(max(ys) * grid)) + 1):
            q = (Fraction(i, grid), Fraction(j, grid))
            if _in_convex_polygon(q, poly):
                samples.append(q)
    return [q for q in samples if not any(_in_convex_polygon(q, h) for h in hulls)]


def check_lemma_abc(config: PointConfig, A: Subset, B: Subset, C: Subset, grid: int = 8) -> ClosureReport:
    """Spot-check that a convex polygon split into three vertex classes, one of
    which is interleaved with the others, is covered by the hulls of the three
    pairwise unions.
    """
    for s in (A, B, C):
        if s.ground != config.ground:
            raise GroundSetMismatch("class is not over the configuration's ground set")
    if A.bits & B.bits or A.bits & C.bits or B.bits & C.bits:
        raise PreconditionError("classes must be disjoint")
    if A.bits | B.bits | C.bits != config.ground.full_bits:
        raise PreconditionError("classes must cover every vertex")
    if config.ground.size < 4:
        raise PreconditionError("at least 4 vertices required")
    order = convex_position_order(config)
    cls = []
    for lab in order:
        i = config.ground.index(lab)
        cls.append(0 if A.bits >> i & 1 else 1 if B.bits >> i & 1 else 2)
    if not any(_runs([c == k for c in cls]) > 2 for k in range(3)):
        raise PreconditionError("no class is separated by the others in circular order")
    missed = abc_uncovered(config, A, B, C, grid)
    if missed:
        return ClosureReport(False, {"point": missed[0]})
    return ClosureReport(True)


def random_convex_polygon(rng: random.Random, k: int, scale: int = 1) -> list[Point]:
    """``k`` rational points on a circle of radius ``scale`` (strictly convex position)."""
    ts = set()
    while len(ts) < k:
        ts.add(Fraction(rng.randint(-60, 60), rng.randint(1, 12)))
    pts = []
    for t in ts:
        den = 1 + t * t
        pts.append((scale * (1 - t * t) / den, scale * 2 * t / den))
    # t -> infinity is (-1, 0); the map is injective on the rationals
    rng.shuffle(pts)
    return pts


# -- text format --------------------------------------------------------------

_COORD_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def _parse_coord(tok: str, lineno: int) -> Fraction:
    if not _COORD_RE.match(tok):
        raise FormatError(f"malformed coordinate {tok!r}", lineno)
    if "/" in tok and int(tok.split("/")[1]) == 0:
        raise FormatError(f"zero denominator in {tok!r}", lineno)
    return Fraction(tok)


def parse_points(text: str) -> PointConfig:
    """Parse the ``dim n`` / ``p label coords...`` line format."""
    dim = None
    items = []
    seen = set()
    for lineno, toks in _tokens(text):
        head, args = toks[0], toks[1:]
        if dim is None:
            if head != "dim" or len(args) != 1 or not args[0].isdigit() or int(args[0]) < 1:
                raise FormatError("expected 'dim <n>' line first", lineno)
            dim = int(args[0])
            continue
        if head != "p":
            raise FormatError(f"unknown directive {head!r}", lineno)
        if len(args) != dim + 1:
            raise FormatError(f"expected a label and {dim} coordinates", lineno)
        label = args[0]
        if not _LABEL_RE.match(label):
            raise FormatError(f"invalid label {label!r}", lineno)
        if label in seen:
            raise FormatError(f"duplicate label {label!r}", lineno)
        seen.add(label)
        items.append((label, tuple(_parse_coord(t, lineno) for t in args[1:])))
    if dim is None:
        raise FormatError("missing 'dim' line")
    try:
        return PointConfig.from_items(items)
    except PreconditionError as exc:
        raise FormatError(str(exc)) from None


def _fmt(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def format_points(config: PointConfig) -> str:
    lines = [f"dim {config.dim}"]
    for lab, p in config.items():
        lines.append(" ".join(["p", lab] + [_fmt(v) for v in p]))
    return "\n".join(lines) + "\n"


def read_points(path: str | Path) -> PointConfig:
    return parse_points(Path(path).read_text())


def write_points(config: PointConfig, path: str | Path) -> None:
    Path(path).write_text(format_points(config))
