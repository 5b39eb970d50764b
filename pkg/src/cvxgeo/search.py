"""Heuristic search for convex geometries that satisfy both the 2-Carousel and the
Sharp 2-Carousel rule but have no planar realization.

The search is one-sided: a candidate is a geometry for which no embedding
into any of the sampled planar geometries was found.  That is evidence, not
proof, so every candidate is reported as inconclusive.
"""
from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

from .closure import ClosedFamily, format_family
from .enumeration import canonical_form, convex_geometries, isomorphism_classes, random_convex_geometry
from .errors import CapExceeded, PreconditionError
from .geometry import PointConfig, build_geometry
from .lattice import Lattice, build_lattice, try_embedding
from .rules import check_carousel, check_sharp_carousel_2

SEARCH_CAP = 7
EXHAUSTIVE_UP_TO = 5
POOL_MAX_POINTS = 8
NODES_PER_TARGET = 50
COORD_RANGE = 6


def thread_count() -> int:
    """Worker threads, from ``CVXGEO_THREADS`` (default: CPU count)."""
    raw = os.environ.get("CVXGEO_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise PreconditionError(f"CVXGEO_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise PreconditionError("CVXGEO_THREADS must be at least 1")
    return n


def passes_rules(family: ClosedFamily) -> bool:
    return bool(check_carousel(family, 2)) and bool(check_sharp_carousel_2(family))


def random_planar_config(rng: random.Random, k: int) -> PointConfig:
    """``k`` distinct integer points in a small square (collinearities are likely, on purpose)."""
    pts: list[tuple[int, int]] = []
    while len(pts) < k:
        p = (rng.randint(0, COORD_RANGE), rng.randint(0, COORD_RANGE))
        if p not in pts:
            pts.append(p)
    return PointConfig.from_items((f"p{i}", p) for i, p in enumerate(pts))


@lru_cache(maxsize=None)
def planar_pool(points: int, seed: int, budget: int) -> tuple[Lattice, ...]:
    """Lattices of ``budget`` seeded random planar configurations, deduplicated up to isomorphism."""
    rng = random.Random(f"pool:{seed}:{points}")
    seen = set()
    pool = []
    for _ in range(budget):
        fam = build_geometry(random_planar_config(rng, points))
        key = canonical_form(fam) if points <= SEARCH_CAP else tuple(fam.masks)
        if key not in seen:
            seen.add(key)
            pool.append(build_lattice(fam))
    return tuple(pool)


def find_realization(family: ClosedFamily, seed: int, budget: int) -> tuple[int, int] | None:
    """``(points, pool index)`` of the first sampled planar geometry the family embeds into."""
    src = build_lattice(family)
    k = family.ground.size
    for points in range(max(k, 3), min(k + 2, POOL_MAX_POINTS) + 1):
        for idx, target in enumerate(planar_pool(points, seed, budget)):
            if len(target) >= len(src) and try_embedding(src, target, NODES_PER_TARGET) is not None:
                return points, idx
    return None


def geometries_of_size(k: int, seed: int, budget: int) -> list[ClosedFamily]:
    """Isomorphism classes of convex geometries on ``k`` elements: all of them up to
    :data:`EXHAUSTIVE_UP_TO`, otherwise the distinct classes among ``budget`` random samples."""
    if k <= EXHAUSTIVE_UP_TO:
        return isomorphism_classes(convex_geometries(k))
    rng = random.Random(f"geometries:{seed}:{k}")
    return isomorphism_classes(random_convex_geometry(k, rng) for _ in range(budget))


@dataclass(frozen=True)
class SizeSummary:
    size: int
    exhaustive: bool
    examined: int
    passing: int
    realized: int
    candidates: tuple[ClosedFamily, ...]


@dataclass(frozen=True)
class SearchReport:
    max_ground: int
    seed: int
    budget: int
    sizes: tuple[SizeSummary, ...]

    @property
    def candidates(self) -> tuple[ClosedFamily, ...]:
        return tuple(c for s in self.sizes for c in s.candidates)

    def format(self) -> str:
        lines = [f"search max_ground={self.max_ground} seed={self.seed} budget={self.budget}"]
        for s in self.sizes:
            mode = "exhaustive" if s.exhaustive else "sampled"
            lines.append(f"size {s.size} ({mode}): {s.examined} classes, {s.passing} pass both rules, "
                         f"{s.realized} realized, {len(s.candidates)} unrealized")
        lines.append(f"candidates: {len(self.candidates)} (inconclusive: realization search is incomplete)")
        for i, c in enumerate(self.candidates, 1):
            lines.append(f"# candidate {i}")
            lines.append(format_family(c).rstrip("\n"))
        return "\n".join(lines) + "\n"


def conjecture_search(max_ground: int, seed: int = 0, budget: int = 20) -> SearchReport:
    """Search ground sizes ``1..max_ground`` for geometries passing both rules with no planar realization found."""
    if max_ground > SEARCH_CAP:
        raise CapExceeded(f"search capped at ground size {SEARCH_CAP}, got {max_ground}")
    if max_ground < 1:
        raise PreconditionError("max_ground must be at least 1")
    if budget < 1:
        raise PreconditionError("budget must be at least 1")
    sizes = []
    workers = thread_count()
    for k in range(1, max_ground + 1):
        classes = geometries_of_size(k, seed, budget)
        passing = [f for f in classes if passes_rules(f)]
        # the GIL limits the gain, but the realization attempts are independent
        with ThreadPoolExecutor(max_workers=workers) as ex:
            found = list(ex.map(lambda f: find_realization(f, seed, budget), passing))
        unrealized = tuple(f for f, r in zip(passing, found) if r is None)
        sizes.append(SizeSummary(k, k <= EXHAUSTIVE_UP_TO, len(classes), len(passing),
                                 len(passing) - len(unrealized), unrealized))
    return SearchReport(max_ground, seed, budget, tuple(sizes))
